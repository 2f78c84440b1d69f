//! Finite-dimensional Lie algebras by structure constants, and their
//! Chevalley–Eilenberg differentials.

use num_traits::Zero;

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::graded::{int, rat, GradedAlgebra, Polynomial, Rational};

/// Structure constants `C^a_{bc}` with `[e_b, e_c] = C^a_{bc} e_a`,
/// antisymmetric in the lower pair. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Rational>,
}

impl StructureConstants {
    pub fn zero(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![Rational::zero(); dim * dim * dim],
        }
    }

    /// Builds from entries `(a, b, c, C^a_{bc})`; the partner `C^a_{cb}` is
    /// filled in by antisymmetry. Contradictory entries are rejected.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut s = StructureConstants::zero(dim);
        let mut seen = vec![false; dim * dim * dim];
        for (a, b, c, v) in entries {
            let (a, b, c) = (*a, *b, *c);
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::InvalidArgument(format!(
                    "structure constant index ({},{},{}) out of range for dimension {dim}",
                    a + 1,
                    b + 1,
                    c + 1
                )));
            }
            if b == c {
                if !v.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "C^{}_{{{}{}}} must vanish by antisymmetry",
                        a + 1,
                        b + 1,
                        c + 1
                    )));
                }
                continue;
            }
            let i = s.idx(a, b, c);
            let j = s.idx(a, c, b);
            if (seen[i] && s.c[i] != *v) || (seen[j] && s.c[j] != -v) {
                return Err(Error::InvalidArgument(format!(
                    "conflicting values for C^{}_{{{}{}}}",
                    a + 1,
                    b + 1,
                    c + 1
                )));
            }
            s.c[i] = v.clone();
            s.c[j] = -v;
            seen[i] = true;
            seen[j] = true;
        }
        Ok(s)
    }

    /// `su(2)`: `C^a_{bc} = ε_{abc}`.
    pub fn su2() -> Self {
        StructureConstants::from_entries(
            3,
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))],
        )
        .expect("valid constants")
    }

    /// Heisenberg algebra: `[e_1, e_2] = e_3`.
    pub fn heisenberg() -> Self {
        StructureConstants::from_entries(3, &[(2, 0, 1, int(1))]).expect("valid constants")
    }

    /// Parses the text format: optional `dim n`, then lines `a b c value`
    /// (one-based, meaning `C^a_{bc} = value`). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut entries = Vec::new();
        let mut max_index = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidArgument(format!("line {}: cannot parse `{line}`", lineno + 1));
            if fields[0] == "dim" {
                let n = fields.get(1).and_then(|s| s.parse::<usize>().ok()).ok_or_else(bad)?;
                dim = Some(n);
                continue;
            }
            let fields = if fields[0] == "C" { &fields[1..] } else { &fields[..] };
            if fields.len() != 4 {
                return Err(bad());
            }
            let mut idx = [0usize; 3];
            for k in 0..3 {
                let v = fields[k].parse::<usize>().map_err(|_| bad())?;
                if v == 0 {
                    return Err(bad());
                }
                idx[k] = v - 1;
                max_index = max_index.max(v);
            }
            let value = parse_rational(fields[3]).ok_or_else(bad)?;
            entries.push((idx[0], idx[1], idx[2], value));
        }
        StructureConstants::from_entries(dim.unwrap_or(max_index), &entries)
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.c[self.idx(a, b, c)]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for b in 0..n {
            if u[b].is_zero() {
                continue;
            }
            for c in 0..n {
                if v[c].is_zero() {
                    continue;
                }
                let uv = &u[b] * &v[c];
                for (a, o) in out.iter_mut().enumerate() {
                    let k = self.get(a, b, c);
                    if !k.is_zero() {
                        *o += k * &uv;
                    }
                }
            }
        }
        out
    }

    /// First violation of the Jacobi identity as `(e, a, b, c)` with
    /// `Σ_d C^d_{bc} C^e_{ad} + cyclic ≠ 0`.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut s = Rational::zero();
                        for d in 0..n {
                            s += self.get(d, b, c) * self.get(e, a, d);
                            s += self.get(d, c, a) * self.get(e, b, d);
                            s += self.get(d, a, b) * self.get(e, c, d);
                        }
                        if !s.is_zero() {
                            return Some((e, a, b, c));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_violation().is_none()
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let v = match body.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            if d == 0 {
                return None;
            }
            rat(n, d)
        }
        None => int(body.parse().ok()?),
    };
    Some(if neg { -v } else { v })
}

/// Chevalley–Eilenberg differential `Q ξ^a = −½ C^a_{bc} ξ^b ξ^c` on the
/// degree-one generators `gens` of `alg`; other generators map to zero.
pub fn ce_differential(alg: &GradedAlgebra, gens: &[usize], c: &StructureConstants) -> Result<Derivation> {
    if gens.len() != c.dim() {
        return Err(Error::InvalidArgument(format!(
            "expected {} ghost generators, got {}",
            c.dim(),
            gens.len()
        )));
    }
    for &g in gens {
        if alg.degree(g) != 1 {
            return Err(Error::DegreeMismatch(format!(
                "ghost `{}` must have degree 1",
                alg.generator(g).name
            )));
        }
    }
    let half = rat(-1, 2);
    let mut images = vec![Polynomial::zero(alg); alg.len()];
    for (a, &ga) in gens.iter().enumerate() {
        let mut img = Polynomial::zero(alg);
        for (b, &gb) in gens.iter().enumerate() {
            for (cc, &gc) in gens.iter().enumerate() {
                let k = c.get(a, b, cc);
                if k.is_zero() {
                    continue;
                }
                let t = Polynomial::from_words(alg, &[(&half * k, vec![gb, gc])]);
                img = &img + &t;
            }
        }
        images[ga] = img;
    }
    Derivation::new(alg, 1, images)
}
