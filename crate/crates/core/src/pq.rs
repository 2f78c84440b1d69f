//! Symplectic structures of positive degree, Hamiltonian vector fields,
//! the Hamiltonian of a compatible homological field, and AKSZ integrands.

use num_traits::Zero;

use crate::derivation::{check_nilpotent, Derivation, Morphism};
use crate::error::{Error, Result};
use crate::graded::{int, rat, sign, Polynomial, Rational};
use crate::linalg::{inverse, Matrix};
use crate::tangent::{field_strength_morphism, TangentAlgebra};

/// A constant-coefficient symplectic form `ω = Σ c_{ab} dq^a dq^b` of
/// degree `p` on `T[1]S`.
#[derive(Debug, Clone)]
pub struct SymplecticStructure {
    t: TangentAlgebra,
    p: u32,
    omega: Polynomial,
    // (a, b, c) with a <= b: the term c dq^a dq^b
    terms: Vec<(usize, usize, Rational)>,
}

/// Everything derived from a compatible homological field.
#[derive(Debug, Clone)]
pub struct HamiltonianData {
    /// The Hamiltonian `𝒬` with `Q = X_𝒬`.
    pub hamiltonian: Polynomial,
    pub alpha: Polynomial,
    pub alpha_hat: Polynomial,
}

impl SymplecticStructure {
    pub fn new(t: &TangentAlgebra, p: u32, omega: Polynomial) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("symplectic degree must be positive".into()));
        }
        t.full().check_same(omega.algebra())?;
        let mut terms = Vec::new();
        for (m, c) in omega.terms() {
            let f = m.factors();
            let pair = match f {
                [(a, 2)] if t.is_differential(*a as usize) => (*a as usize / 2, *a as usize / 2),
                [(a, 1), (b, 1)] if t.is_differential(*a as usize) && t.is_differential(*b as usize) => {
                    (*a as usize / 2, *b as usize / 2)
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "only constant-coefficient 2-forms are supported (term `{}`)",
                        Polynomial::term(t.full(), c.clone(), m.clone())
                    )))
                }
            };
            let weight = t.base().degree(pair.0) + t.base().degree(pair.1);
            if weight != p {
                return Err(Error::NotHomogeneous(format!(
                    "L_xi omega != {p} omega: term `{}` has weight {weight}",
                    Polynomial::term(t.full(), c.clone(), m.clone())
                )));
            }
            terms.push((pair.0, pair.1, c.clone()));
        }
        let s = SymplecticStructure {
            t: t.clone(),
            p,
            omega,
            terms,
        };
        if inverse(&s.pairing(0)).is_none() {
            return Err(Error::SingularPairing);
        }
        Ok(s)
    }

    /// `ω = Σ d(a_i) d(b_i)` over the given pairs.
    pub fn darboux(t: &TangentAlgebra, p: u32, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut omega = Polynomial::zero(t.full());
        for (a, b) in pairs {
            omega = &omega + &(&t.dvar(a)? * &t.dvar(b)?);
        }
        SymplecticStructure::new(t, p, omega)
    }

    pub fn tangent(&self) -> &TangentAlgebra {
        &self.t
    }

    pub fn degree(&self) -> u32 {
        self.p
    }

    pub fn omega(&self) -> &Polynomial {
        &self.omega
    }

    /// Coefficient matrix `K` with `∂_{dq^γ}(ι_X ω) = Σ_α K[γ][α] X^α` for
    /// derivations `X` of degree `k`.
    fn pairing(&self, k: i64) -> Matrix {
        let n = self.t.base().len();
        let deg = |a: usize| self.t.base().degree(a) as i64;
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (a, b, c) in &self.terms {
            let (a, b) = (*a, *b);
            if a == b {
                m[a][a] += c * int(2);
            } else {
                m[b][a] += c * sign((deg(a) + k) * (deg(b) + 1));
                m[a][b] += c * sign((k - 1) * (deg(a) + 1));
            }
        }
        m
    }

    /// Liouville form `α = (1/p) ι_ξ ω`, checked against `dα = ω`.
    pub fn liouville(&self) -> Result<Polynomial> {
        let xi = Derivation::euler(self.t.base());
        let alpha = self.t.contraction(&xi)?.apply(&self.omega)?.scale(&rat(1, self.p as i64));
        let r = &self.t.d().apply(&alpha)? - &self.omega;
        if !r.is_zero() {
            return Err(Error::NotClosed(format!("d(alpha) - omega = {r}")));
        }
        Ok(alpha)
    }

    /// The unique `X_h` with `ι_{X_h} ω = (−1)^{|h|+1} dh`.
    pub fn hamiltonian_vf(&self, h: &Polynomial) -> Result<Derivation> {
        let base = self.t.base();
        base.check_same(h.algebra())?;
        let q = match h.degree().map_err(|_| Error::NotHomogeneous(h.to_string()))? {
            None => return Ok(Derivation::zero(base, -(self.p as i32))),
            Some(q) => q as i64,
        };
        let k = q - self.p as i64;
        let kinv = inverse(&self.pairing(k)).ok_or(Error::SingularPairing)?;
        let dh = self.t.d().apply(&self.t.embed(h)?)?.scale(&sign(q + 1));
        let n = base.len();
        let rhs = (0..n)
            .map(|g| self.t.to_base(&Derivation::partial(self.t.full(), self.t.diff_ordinal(g)).apply(&dh)?))
            .collect::<Result<Vec<_>>>()?;
        let images = (0..n)
            .map(|a| crate::graded::sum(base, (0..n).map(|g| rhs[g].scale(&kinv[a][g]))))
            .collect();
        let x = Derivation::new(base, k as i32, images)?;
        let back = &self.t.contraction(&x)?.apply(&self.omega)? - &dh;
        if !back.is_zero() {
            return Err(Error::NotClosedInternal(format!("Hamiltonian solve residual {back}")));
        }
        Ok(x)
    }

    /// `{h₁, h₂} = X_{h₁}(h₂)`.
    pub fn poisson_bracket(&self, h1: &Polynomial, h2: &Polynomial) -> Result<Polynomial> {
        self.hamiltonian_vf(h1)?.apply(h2)
    }

    /// Brackets of all pairs of base generators.
    pub fn bracket_table(&self) -> Result<Vec<(String, String, Polynomial)>> {
        let base = self.t.base();
        let mut out = Vec::new();
        for a in 0..base.len() {
            for b in 0..base.len() {
                let v = self.poisson_bracket(&Polynomial::generator(base, a), &Polynomial::generator(base, b))?;
                if !v.is_zero() {
                    out.push((base.generator(a).name.clone(), base.generator(b).name.clone(), v));
                }
            }
        }
        Ok(out)
    }

    /// `𝒬 = (p/(p+1)) (−1)^p ι_Q α`, with `ι_Q ω = (−1)^p d𝒬` and `{𝒬,𝒬} = 0`
    /// certified.
    pub fn hamiltonian_of_q(&self, q: &Derivation) -> Result<Polynomial> {
        if !q.is_odd() {
            return Err(Error::EvenDegree(q.degree()));
        }
        let lq = self.t.lie_derivative(q)?.apply(&self.omega)?;
        if !lq.is_zero() {
            return Err(Error::NotCompatible(format!("L_Q omega = {lq}")));
        }
        let p = self.p as i64;
        let iq = self.t.contraction(q)?;
        let alpha = self.liouville()?;
        let ham = self.t.to_base(&iq.apply(&alpha)?.scale(&(rat(p, p + 1) * sign(p))))?;
        let lhs = iq.apply(&self.omega)?;
        let rhs = self.t.d().apply(&self.t.embed(&ham)?)?.scale(&sign(p));
        if lhs != rhs {
            return Err(Error::NotCompatible(format!("iota_Q omega - (-1)^p dH = {}", &lhs - &rhs)));
        }
        let me = self.poisson_bracket(&ham, &ham)?;
        if !me.is_zero() {
            return Err(Error::MasterEquationFailed(format!("{{H,H}} = {me}")));
        }
        let nil = check_nilpotent(q)?;
        if !nil.passed() {
            return Err(Error::NotNilpotent(nil.to_string()));
        }
        Ok(ham)
    }

    /// `α̂ = α + ((−1)^p/p) 𝒬`, checked against `ω = Q_T(α̂)`.
    pub fn alpha_hat(&self, q: &Derivation) -> Result<Polynomial> {
        Ok(self.hamiltonian_data(q)?.alpha_hat)
    }

    pub fn hamiltonian_data(&self, q: &Derivation) -> Result<HamiltonianData> {
        let hamiltonian = self.hamiltonian_of_q(q)?;
        let alpha = self.liouville()?;
        let p = self.p as i64;
        let alpha_hat = &alpha + &self.t.embed(&hamiltonian)?.scale(&(sign(p) * rat(1, p)));
        let qt = self.t.total_differential(q)?;
        let r = &self.omega - &qt.apply(&alpha_hat)?;
        if !r.is_zero() {
            return Err(Error::NotClosedInternal(format!("omega - Q_T(alpha_hat) = {r}")));
        }
        Ok(HamiltonianData {
            hamiltonian,
            alpha,
            alpha_hat,
        })
    }
}

/// AKSZ integrand of a gauge field over a tangent base.
#[derive(Debug, Clone)]
pub struct AkszIntegrand {
    /// `L = f*(α̂)`.
    pub lagrangian: Polynomial,
    /// `f*(ω)`, equal to `d L`.
    pub fstar_omega: Polynomial,
}

/// `L = f*(α̂)` for `φ: T[1]Σ ← S`, certified against `f*(ω) = d L` and
/// against `L = f₀*(α) + (−1)^{p+1} φ*(𝒬)` where `f₀*` ignores `Q`.
pub fn aksz_integrand(
    ws: &SymplecticStructure,
    q_fiber: &Derivation,
    phi: &Morphism,
    base: &TangentAlgebra,
) -> Result<AkszIntegrand> {
    if let Some(g) = base.base().generators().iter().find(|g| g.degree != 0) {
        return Err(Error::BaseNotTangent(format!("base generator `{}` has degree {}", g.name, g.degree)));
    }
    if phi.source() != base.full() {
        return Err(Error::BaseNotTangent("gauge field must take values in the tangent base".into()));
    }
    let t_s = ws.tangent();
    phi.target().check_same(t_s.base())?;
    let data = ws.hamiltonian_data(q_fiber)?;
    let fstar = field_strength_morphism(phi, base.d(), q_fiber, t_s)?;
    let lagrangian = fstar.apply(&data.alpha_hat)?;
    let fstar_omega = fstar.apply(ws.omega())?;
    let r = &fstar_omega - &base.d().apply(&lagrangian)?;
    if !r.is_zero() {
        return Err(Error::NotClosedInternal(format!("f*(omega) - dL = {r}")));
    }
    let f0 = field_strength_morphism(phi, base.d(), &Derivation::zero(t_s.base(), 1), t_s)?;
    let p = ws.degree() as i64;
    let formula = &f0.apply(&data.alpha)? + &phi.apply(&data.hamiltonian)?.scale(&sign(p + 1));
    if formula != lagrangian {
        return Err(Error::NotClosedInternal(format!("AKSZ formula mismatch: {formula} vs {lagrangian}")));
    }
    Ok(AkszIntegrand {
        lagrangian,
        fstar_omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedAlgebra;
    use crate::lie::{ce_differential, StructureConstants};
    use crate::tangent::shift_tangent;

    fn cotangent_line() -> SymplecticStructure {
        let s = GradedAlgebra::new([("x", 0), ("p1", 1)]).unwrap();
        SymplecticStructure::darboux(&shift_tangent(&s), 1, &[("x", "p1")]).unwrap()
    }

    #[test]
    fn cotangent_line_brackets() {
        let ws = cotangent_line();
        let base = ws.tangent().base().clone();
        let (x, p1) = (base.var("x").unwrap(), base.var("p1").unwrap());
        let xx = ws.hamiltonian_vf(&x).unwrap();
        assert_eq!(xx, Derivation::partial(&base, 1).scale(&int(-1)));
        assert_eq!(ws.hamiltonian_vf(&p1).unwrap(), Derivation::partial(&base, 0));
        assert_eq!(ws.poisson_bracket(&p1, &x).unwrap(), base.one());
        assert!(ws.poisson_bracket(&x, &base.one()).unwrap().is_zero());
        let alpha = ws.liouville().unwrap();
        assert_eq!(alpha.to_string(), "-d:x*p1");
    }

    #[test]
    fn su2_hamiltonian() {
        let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
        let t = shift_tangent(&g);
        let omega = (&(&(&t.dq(0) * &t.dq(0)) + &(&t.dq(1) * &t.dq(1))) + &(&t.dq(2) * &t.dq(2))).scale(&rat(1, 2));
        let ws = SymplecticStructure::new(&t, 2, omega).unwrap();
        let q = ce_differential(&g, &[0, 1, 2], &StructureConstants::su2()).unwrap();
        let data = ws.hamiltonian_data(&q).unwrap();
        assert_eq!(data.hamiltonian.to_string(), "-xi1*xi2*xi3");
        assert_eq!(data.alpha.to_string(), "1/2*xi1*d:xi1 + 1/2*xi2*d:xi2 + 1/2*xi3*d:xi3");
        assert_eq!(ws.hamiltonian_vf(&data.hamiltonian).unwrap(), q);
        assert!(ws.hamiltonian_of_q(&Derivation::zero(&g, 1)).unwrap().is_zero());
    }

    #[test]
    fn rejected_structures() {
        let s = GradedAlgebra::new([("x", 0), ("p1", 1)]).unwrap();
        let t = shift_tangent(&s);
        assert_eq!(
            SymplecticStructure::new(&t, 1, t.full().zero()).unwrap_err(),
            Error::SingularPairing
        );
        assert!(SymplecticStructure::darboux(&t, 0, &[("x", "p1")]).is_err());
        let curved = &t.q(0) * &(&t.dq(0) * &t.dq(1));
        assert!(SymplecticStructure::new(&t, 1, curved).is_err());
    }
}
