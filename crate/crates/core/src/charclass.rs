//! Trivial Q-bundles, basic forms and characteristic classes of gauge
//! fields, with transgression and the Lecomte map of Lie algebra extensions.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cert::Certificate;
use crate::derivation::{check_nilpotent, commutator, derived_bracket, Derivation, Embedding, Morphism};
use crate::error::{Error, Result};
use crate::graded::{int, GradedAlgebra, Polynomial, Rational};
use crate::lie::{ce_differential, StructureConstants};
use crate::linalg::{inverse, solve_in_span, Matrix};
use crate::tangent::{field_strength_morphism, shift_tangent, TangentAlgebra};

/// Negative-degree derivations of the fiber generating the gauge symmetries.
#[derive(Debug, Clone)]
pub struct HolonomyGenerators {
    gens: Vec<Derivation>,
}

impl HolonomyGenerators {
    pub fn new(alg: &GradedAlgebra, gens: Vec<Derivation>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.source() != alg || g.along_morphism().is_some() {
                return Err(Error::AlgebraMismatch);
            }
            if g.degree() > -1 {
                return Err(Error::DegreeMismatch(format!(
                    "holonomy generator {} has degree {} (must be at most -1)",
                    i + 1,
                    g.degree()
                )));
            }
        }
        Ok(HolonomyGenerators { gens })
    }

    /// `∂/∂g` for each listed generator of positive degree.
    pub fn coordinate(alg: &GradedAlgebra, ordinals: &[usize]) -> Result<Self> {
        HolonomyGenerators::new(alg, ordinals.iter().map(|&i| Derivation::partial(alg, i)).collect())
    }

    pub fn generators(&self) -> &[Derivation] {
        &self.gens
    }

    /// Commutators and derived brackets of the generators that fall outside
    /// their constant-coefficient span. Empty when the set closes.
    pub fn closure_warnings(&self, q: &Derivation) -> Result<Vec<String>> {
        let flat = |d: &Derivation| -> BTreeMap<(usize, crate::graded::Monomial), Rational> {
            let mut out = BTreeMap::new();
            for (g, img) in d.images().iter().enumerate() {
                for (m, c) in img.terms() {
                    out.insert((g, m.clone()), c.clone());
                }
            }
            out
        };
        let in_span = |target: &Derivation| -> bool {
            if target.is_zero() {
                return true;
            }
            let mut keys: Vec<(usize, crate::graded::Monomial)> = Vec::new();
            let cols: Vec<_> = self.gens.iter().map(&flat).collect();
            let t = flat(target);
            for k in cols.iter().flat_map(|c| c.keys()).chain(t.keys()) {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
            let vec_of = |m: &BTreeMap<_, Rational>| -> Vec<Rational> {
                keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(Rational::zero)).collect()
            };
            let cols: Vec<Vec<Rational>> = cols.iter().map(vec_of).collect();
            solve_in_span(&cols, &vec_of(&t)).is_some()
        };
        let mut warnings = Vec::new();
        for i in 0..self.gens.len() {
            for j in i..self.gens.len() {
                let c = commutator(&self.gens[i], &self.gens[j])?;
                if !in_span(&c) {
                    warnings.push(format!("[eps{}, eps{}] leaves the span", i + 1, j + 1));
                }
                let b = derived_bracket(&self.gens[i], &self.gens[j], q)?;
                if !in_span(&b) {
                    warnings.push(format!("[eps{}, eps{}]_Q leaves the span", i + 1, j + 1));
                }
            }
        }
        Ok(warnings)
    }
}

/// A fully symmetric coefficient table `Φ_{a₁…a_p}` on an `n`-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantPolynomial {
    rank: usize,
    dim: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

impl InvariantPolynomial {
    /// Entries are given on index tuples in any order; all orderings of a
    /// tuple share one value, and conflicting values are rejected.
    pub fn new(rank: usize, dim: usize, entries: &[(Vec<usize>, Rational)]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (idx, v) in entries {
            if idx.len() != rank || idx.iter().any(|&i| i >= dim) {
                return Err(Error::InvalidArgument(format!("bad index tuple {idx:?}")));
            }
            let mut key = idx.clone();
            key.sort_unstable();
            if let Some(old) = coeffs.get(&key) {
                if old != v {
                    return Err(Error::NotSymmetric(format!("{:?}", one_based(idx))));
                }
            }
            coeffs.insert(key, v.clone());
        }
        coeffs.retain(|_, v: &mut Rational| !v.is_zero());
        Ok(InvariantPolynomial { rank, dim, coeffs })
    }

    /// A rank-two table from a square matrix, which must be symmetric.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let n = m.len();
        let mut entries = Vec::new();
        for i in 0..n {
            if m[i].len() != n {
                return Err(Error::InvalidArgument("matrix is not square".into()));
            }
            for j in 0..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::NotSymmetric(format!("[{}, {}]", i + 1, j + 1)));
                }
                entries.push((vec![i, j], m[i][j].clone()));
            }
        }
        InvariantPolynomial::new(2, n, &entries)
    }

    pub fn constant(c: Rational) -> Self {
        InvariantPolynomial::new(0, 0, &[(vec![], c)]).expect("valid")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, idx: &[usize]) -> Rational {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Invariance under linear maps `M_a` (`M_a e_α = Σ_β M_a[β][α] e_β`):
    /// `Σ_k Σ_β M_a[β][i_k] Φ(i₁ … β … i_p) = 0` for all `a` and tuples.
    pub fn is_invariant_under(&self, mats: &[Matrix]) -> bool {
        let n = self.dim;
        let p = self.rank;
        for m in mats {
            for flat in 0..n.pow(p as u32) {
                let idx = unflatten(flat, n, p);
                let mut s = Rational::zero();
                for k in 0..p {
                    let mut j = idx.clone();
                    for beta in 0..n {
                        let c = &m[beta][idx[k]];
                        if c.is_zero() {
                            continue;
                        }
                        j[k] = beta;
                        s += c * self.get(&j);
                    }
                }
                if !s.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Invariance under the adjoint action of a Lie algebra of dimension `dim`.
    pub fn is_ad_invariant(&self, c: &StructureConstants) -> bool {
        let n = c.dim();
        let mats: Vec<Matrix> = (0..n)
            .map(|a| (0..n).map(|b| (0..n).map(|col| c.get(b, a, col).clone()).collect()).collect())
            .collect();
        self.is_invariant_under(&mats)
    }

    /// `(1/p!) Σ Φ_{i₁…i_p} v_{i₁} ⋯ v_{i_p}` over ordered tuples.
    pub fn evaluate(&self, alg: &GradedAlgebra, v: &[Polynomial]) -> Result<Polynomial> {
        if v.len() != self.dim {
            return Err(Error::InvalidArgument("wrong number of arguments".into()));
        }
        let p = self.rank;
        let mut out = Polynomial::zero(alg);
        for flat in 0..self.dim.pow(p as u32) {
            let idx = unflatten(flat, self.dim, p);
            let c = self.get(&idx);
            if c.is_zero() {
                continue;
            }
            let mut t = Polynomial::constant(alg, c);
            for &i in &idx {
                t = t.checked_mul(&v[i])?;
            }
            out = &out + &t;
        }
        if p == 0 {
            out = Polynomial::constant(alg, self.get(&[]));
        }
        Ok(out.scale(&Rational::new(1.into(), factorial(p))))
    }
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn unflatten(mut flat: usize, n: usize, p: usize) -> Vec<usize> {
    let mut idx = vec![0; p];
    for k in (0..p).rev() {
        idx[k] = flat % n;
        flat /= n;
    }
    idx
}

fn factorial(p: usize) -> num_bigint::BigInt {
    (1..=p).fold(num_bigint::BigInt::one(), |acc, k| acc * k)
}

/// `(1/p!) Φ_{a₁…a_p} dq^{a₁} ⋯ dq^{a_p}` over the listed base generators.
pub fn invariant_to_basic_form(phi: &InvariantPolynomial, t: &TangentAlgebra, gens: &[usize]) -> Result<Polynomial> {
    if gens.len() != phi.dim() {
        return Err(Error::InvalidArgument(format!(
            "invariant polynomial has dimension {}, got {} generators",
            phi.dim(),
            gens.len()
        )));
    }
    let dq: Vec<Polynomial> = gens.iter().map(|&g| t.dq(g)).collect();
    phi.evaluate(t.full(), &dq)
}

/// PASS iff `L_ε ω = 0` and `L_{[Q,ε]} ω = 0` for every generator `ε`.
pub fn is_basic(omega: &Polynomial, g: &HolonomyGenerators, q: &Derivation, t: &TangentAlgebra) -> Result<Certificate> {
    t.full().check_same(omega.algebra())?;
    let nil = check_nilpotent(q)?;
    if !nil.passed() {
        return Err(Error::NotNilpotent(nil.to_string()));
    }
    let mut residuals = Vec::new();
    for (i, eps) in g.generators().iter().enumerate() {
        let l = t.lie_derivative(eps)?;
        residuals.push((format!("L(eps{})", i + 1), l.apply(omega)?));
        let ad = commutator(q, eps)?;
        let l = t.lie_derivative(&ad)?;
        residuals.push((format!("L([Q,eps{}])", i + 1), l.apply(omega)?));
    }
    Ok(Certificate::from_residuals("basic", residuals))
}

/// The trivial bundle `base × fiber`, with total algebra `base ⊗ fiber`
/// (base generators first) and `Q = Q_base + Q_fiber`.
#[derive(Debug, Clone)]
pub struct TrivialBundle {
    q_base: Derivation,
    q_fiber: Derivation,
    total: GradedAlgebra,
    q_total: Derivation,
    base_emb: Embedding,
    fiber_emb: Embedding,
    t_fiber: TangentAlgebra,
    t_total: TangentAlgebra,
    tangent_emb: Embedding,
}

impl TrivialBundle {
    pub fn new(q_base: &Derivation, q_fiber: &Derivation) -> Result<Self> {
        Self::with_fiber_tangent(q_base, q_fiber, &shift_tangent(q_fiber.source()))
    }

    /// Like [`TrivialBundle::new`] but reusing an existing `T[1]F`, so forms
    /// built on it stay valid for the new bundle.
    pub fn with_fiber_tangent(q_base: &Derivation, q_fiber: &Derivation, t_fiber: &TangentAlgebra) -> Result<Self> {
        if t_fiber.base() != q_fiber.source() {
            return Err(Error::AlgebraMismatch);
        }
        for q in [q_base, q_fiber] {
            if q.along_morphism().is_some() || !q.is_odd() {
                return Err(Error::InvalidArgument("bundle needs odd homological fields".into()));
            }
        }
        let base = q_base.source();
        let fiber = q_fiber.source();
        let total = base.product(fiber)?;
        let nb = base.len();
        let base_emb = Embedding::from_map(base, &total, (0..nb).collect())?;
        let fiber_emb = Embedding::from_map(fiber, &total, (nb..nb + fiber.len()).collect())?;
        let q_total = base_emb
            .derivation(q_base)?
            .checked_add(&fiber_emb.derivation(q_fiber)?)?;
        let t_fiber = t_fiber.clone();
        let t_total = shift_tangent(&total);
        let map = (0..t_fiber.full().len()).map(|j| j + 2 * nb).collect();
        let tangent_emb = Embedding::from_map(t_fiber.full(), t_total.full(), map)?;
        Ok(TrivialBundle {
            q_base: q_base.clone(),
            q_fiber: q_fiber.clone(),
            total,
            q_total,
            base_emb,
            fiber_emb,
            t_fiber,
            t_total,
            tangent_emb,
        })
    }

    pub fn base(&self) -> &GradedAlgebra {
        self.q_base.source()
    }

    pub fn fiber(&self) -> &GradedAlgebra {
        self.q_fiber.source()
    }

    pub fn total(&self) -> &GradedAlgebra {
        &self.total
    }

    pub fn q_base(&self) -> &Derivation {
        &self.q_base
    }

    pub fn q_fiber(&self) -> &Derivation {
        &self.q_fiber
    }

    pub fn q_total(&self) -> &Derivation {
        &self.q_total
    }

    pub fn t_fiber(&self) -> &TangentAlgebra {
        &self.t_fiber
    }

    pub fn t_total(&self) -> &TangentAlgebra {
        &self.t_total
    }

    pub fn base_embedding(&self) -> &Embedding {
        &self.base_emb
    }

    pub fn fiber_embedding(&self) -> &Embedding {
        &self.fiber_emb
    }

    /// Pulls a form on `T[1]fiber` back to `T[1]total` along the projection.
    pub fn extend_form(&self, omega: &Polynomial) -> Result<Polynomial> {
        self.tangent_emb.poly(omega)
    }

    /// The section `total → base` of a gauge field `φ: base ← fiber`.
    pub fn section(&self, phi: &Morphism) -> Result<Morphism> {
        self.check_gauge_field(phi)?;
        let images = (0..self.base().len())
            .map(|i| Polynomial::generator(self.base(), i))
            .chain(phi.images().iter().cloned())
            .collect();
        Morphism::new(self.base(), &self.total, images)
    }

    fn check_gauge_field(&self, phi: &Morphism) -> Result<()> {
        phi.source().check_same(self.base())?;
        phi.target().check_same(self.fiber())
    }

    /// `f*: T[1]fiber → base` of a gauge field.
    pub fn fstar(&self, phi: &Morphism) -> Result<Morphism> {
        self.check_gauge_field(phi)?;
        field_strength_morphism(phi, &self.q_base, &self.q_fiber, &self.t_fiber)
    }

    /// `f*: T[1]total → base` of the section.
    pub fn fstar_total(&self, phi: &Morphism) -> Result<Morphism> {
        field_strength_morphism(&self.section(phi)?, &self.q_base, &self.q_total, &self.t_total)
    }

    /// Variation `δ_X f*` of the field-strength morphism under a degree-0
    /// vector field on the total space, as a derivation along `f*` on
    /// `T[1]fiber`: `q ↦ φ*(Xq)`, `dq ↦ Q_base(φ*(Xq)) − φ*(X Q q)`.
    pub fn variation(&self, phi: &Morphism, x: &Derivation) -> Result<Derivation> {
        if x.source() != &self.total || x.along_morphism().is_some() {
            return Err(Error::AlgebraMismatch);
        }
        let section = self.section(phi)?;
        let fstar = self.fstar(phi)?;
        let mut images = Vec::with_capacity(self.t_fiber.full().len());
        for i in 0..self.fiber().len() {
            let g = Polynomial::generator(&self.total, self.base().len() + i);
            let xq = section.apply(&x.apply(&g)?)?;
            let dxq = &self.q_base.apply(&xq)? - &section.apply(&x.apply(&self.q_total.apply(&g)?)?)?;
            images.push(xq);
            images.push(dxq);
        }
        Derivation::along(&fstar, x.degree(), images)
    }
}

/// Characteristic form `f*(ω)` of a gauge field, asserted closed.
pub fn char_form(bundle: &TrivialBundle, phi: &Morphism, omega: &Polynomial, g: &HolonomyGenerators) -> Result<Polynomial> {
    let basic = is_basic(omega, g, bundle.q_fiber(), bundle.t_fiber())?;
    if !basic.passed() {
        return Err(Error::NotBasic(basic.to_string()));
    }
    let c = bundle.fstar(phi)?.apply(omega)?;
    let dc = bundle.q_base().apply(&c)?;
    if !dc.is_zero() {
        return Err(Error::NotClosedInternal(format!("Q_base(char) = {dc}")));
    }
    Ok(c)
}

/// Certifies `δ_{[Q,Y]} f*(ω) = 0` for a vertical degree −1 field `Y` on
/// the total space. The variation is computed twice, as `f*(L_X ω)` on the
/// total tangent algebra and by the derivation-along formula, and the two
/// must agree.
pub fn gauge_variation_check(bundle: &TrivialBundle, phi: &Morphism, y: &Derivation, omega: &Polynomial) -> Result<Certificate> {
    if y.source() != bundle.total() || y.along_morphism().is_some() {
        return Err(Error::AlgebraMismatch);
    }
    if y.degree() != -1 {
        return Err(Error::DegreeMismatch(format!("gauge parameter has degree {}", y.degree())));
    }
    for i in 0..bundle.base().len() {
        if !y.image(i).is_zero() {
            return Err(Error::NotVertical(format!(
                "Y({}) = {}",
                bundle.base().generator(i).name,
                y.image(i)
            )));
        }
    }
    let x = commutator(bundle.q_total(), y)?;
    let tt = bundle.t_total();
    let lifted = bundle.extend_form(omega)?;
    let route_a = bundle.fstar_total(phi)?.apply(&tt.lie_derivative(&x)?.apply(&lifted)?)?;
    let route_b = bundle.variation(phi, &x)?.apply(omega)?;
    if route_a != route_b {
        return Err(Error::NotClosedInternal(format!(
            "gauge variation routes disagree: {route_a} vs {route_b}"
        )));
    }
    Ok(Certificate::from_residuals("gauge", [("delta f*(omega)".to_string(), route_a)]))
}

/// Result of a transgression: `difference = Q_base(primitive)`.
#[derive(Debug, Clone)]
pub struct Transgression {
    pub difference: Polynomial,
    pub primitive: Polynomial,
    /// `β(t)` on the base extended by `t`.
    pub beta: Polynomial,
}

/// Transgression between two gauge fields along `A(t) = (1−t)A₀ + tA₁`, or
/// along `path` (images over the base extended by `t` and `d:t`).
pub fn transgress(
    bundle: &TrivialBundle,
    phi0: &Morphism,
    phi1: &Morphism,
    omega: &Polynomial,
    g: &HolonomyGenerators,
    path: Option<&dyn Fn(&GradedAlgebra) -> Result<Vec<Polynomial>>>,
) -> Result<Transgression> {
    let base = bundle.base();
    let tname = ["t", "tau", "s"]
        .into_iter()
        .find(|n| base.find(n).is_none() && base.find(&format!("d:{n}")).is_none())
        .ok_or_else(|| Error::InvalidArgument("no free name for the homotopy parameter".into()))?;
    let interval = GradedAlgebra::new([(tname.to_string(), 0), (format!("d:{tname}"), 1)])?;
    let ext = base.product(&interval)?;
    let nb = base.len();
    let (ti, dti) = (nb, nb + 1);
    let base_in_ext = Embedding::from_map(base, &ext, (0..nb).collect())?;
    let q_n = base_in_ext.derivation(bundle.q_base())?;
    let mut dt_images = vec![Polynomial::zero(&ext); ext.len()];
    dt_images[ti] = Polynomial::generator(&ext, dti);
    let q_ext = q_n.checked_add(&Derivation::new(&ext, 1, dt_images)?)?;

    let t = Polynomial::generator(&ext, ti);
    let one_minus_t = &Polynomial::one(&ext) - &t;
    let images = match path {
        Some(f) => f(&ext)?,
        None => phi0
            .images()
            .iter()
            .zip(phi1.images())
            .map(|(a0, a1)| Ok(&(&one_minus_t * &base_in_ext.poly(a0)?) + &(&t * &base_in_ext.poly(a1)?)))
            .collect::<Result<Vec<_>>>()?,
    };
    let phi_t = Morphism::new(&ext, bundle.fiber(), images)?;

    // endpoints: t ↦ 0 or 1, d:t ↦ 0
    let at = |v: i64| -> Result<Morphism> {
        let imgs = (0..ext.len())
            .map(|j| {
                if j < nb {
                    Polynomial::generator(base, j)
                } else if j == ti {
                    Polynomial::constant(base, int(v))
                } else {
                    Polynomial::zero(base)
                }
            })
            .collect();
        Morphism::new(base, &ext, imgs)
    };
    for (v, phi) in [(0, phi0), (1, phi1)] {
        let end = phi_t.followed_by(&at(v)?)?;
        if end.images() != phi.images() {
            return Err(Error::InvalidArgument(format!("path does not start/end at the given field (t = {v})")));
        }
    }

    let ext_bundle = TrivialBundle::with_fiber_tangent(&q_ext, bundle.q_fiber(), bundle.t_fiber())?;
    let char_ext = char_form(&ext_bundle, &phi_t, omega, g)?;
    let beta = Derivation::partial(&ext, dti).apply(&char_ext)?;

    // independent route: derivation along f_t* with q ↦ 0, dq ↦ ∂_t A(t)
    let fstar_t = field_strength_morphism(&phi_t, &q_n, bundle.q_fiber(), bundle.t_fiber())?;
    let dt_partial = Derivation::partial(&ext, ti);
    let mut along_images = Vec::with_capacity(bundle.t_fiber().full().len());
    for i in 0..bundle.fiber().len() {
        along_images.push(Polynomial::zero(&ext));
        along_images.push(dt_partial.apply(phi_t.image(i))?);
    }
    let delta = Derivation::along(&fstar_t, -1, along_images)?;
    let beta_formula = delta.apply(omega)?;
    if beta != beta_formula {
        return Err(Error::NotClosedInternal(format!("beta mismatch: {beta} vs {beta_formula}")));
    }

    // ∫₀¹ tⁿ dt = 1/(n+1)
    let mut integrated = Polynomial::zero(&ext);
    for (m, c) in beta.terms() {
        let n = m.exponent(ti) as i64;
        integrated = &integrated + &Polynomial::term(&ext, c / int(n + 1), m.clone());
    }
    let primitive = at(1)?.apply(&integrated)?;

    let c1 = char_form(bundle, phi1, omega, g)?;
    let c0 = char_form(bundle, phi0, omega, g)?;
    let difference = &c1 - &c0;
    let check = &difference - &bundle.q_base().apply(&primitive)?;
    if !check.is_zero() {
        return Err(Error::NotClosedInternal(format!("difference - Q(primitive) = {check}")));
    }
    if at(1)?.apply(&char_ext)? != c1 || at(0)?.apply(&char_ext)? != c0 {
        return Err(Error::NotClosedInternal("endpoint evaluation disagrees".into()));
    }
    Ok(Transgression {
        difference,
        primitive,
        beta,
    })
}

/// For `ω = Q_T(η)` with `η` basic, certifies `char(ω) = Q_base(f*(η))`.
pub fn check_trivial_class(bundle: &TrivialBundle, phi: &Morphism, eta: &Polynomial, g: &HolonomyGenerators) -> Result<Certificate> {
    let basic = is_basic(eta, g, bundle.q_fiber(), bundle.t_fiber())?;
    if !basic.passed() {
        return Err(Error::NotBasic(basic.to_string()));
    }
    let qt = bundle.t_fiber().total_differential(bundle.q_fiber())?;
    let omega = qt.apply(eta)?;
    let lhs = char_form(bundle, phi, &omega, g)?;
    let rhs = bundle.q_base().apply(&bundle.fstar(phi)?.apply(eta)?)?;
    Ok(Certificate::from_residuals("trivial class", [("char(Q_T eta)".to_string(), &lhs - &rhs)]))
}

/// Characteristic cochain of an extension `0 → h → g → g₀ → 0`.
#[derive(Debug, Clone)]
pub struct LecomteCochain {
    /// `g₀[1]`, generators `zeta1..zetak`.
    pub g0: GradedAlgebra,
    pub g0_constants: StructureConstants,
    pub q_g0: Derivation,
    pub cochain: Polynomial,
    pub invariant: bool,
    pub closed: bool,
}

/// The Lecomte map: the field strength of the morphism `g₀[1] → g[1]`
/// induced by the splitting, projected to `h` along `σ(g₀)` and paired
/// with `Φ`. Vectors are coordinate columns in the basis of `g`.
pub fn lecomte_char(
    c: &StructureConstants,
    ideal: &[Vec<Rational>],
    splitting: &[Vec<Rational>],
    phi: &InvariantPolynomial,
) -> Result<LecomteCochain> {
    let n = c.dim();
    let (m, k) = (ideal.len(), splitting.len());
    if ideal.iter().chain(splitting).any(|v| v.len() != n) {
        return Err(Error::InvalidArgument(format!("vectors must have {n} components")));
    }
    if m + k != n {
        return Err(Error::NotSplitting(format!("dim h + dim g0 = {} but dim g = {n}", m + k)));
    }
    if phi.dim() != m {
        return Err(Error::InvalidArgument(format!("invariant polynomial must live on a {m}-dimensional space")));
    }
    for a in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[a] = Rational::one();
        for (alpha, h) in ideal.iter().enumerate() {
            if solve_in_span(ideal, &c.bracket(&e, h)).is_none() {
                return Err(Error::NotIdeal(format!("[e{}, h{}] not in h", a + 1, alpha + 1)));
            }
        }
    }
    // columns σ_1..σ_k, h_1..h_m
    let basis: Matrix = (0..n)
        .map(|r| splitting.iter().chain(ideal).map(|v| v[r].clone()).collect())
        .collect();
    let binv = inverse(&basis).ok_or_else(|| Error::NotSplitting("σ(g0) meets h".into()))?;
    let coords = |v: &[Rational]| crate::linalg::mat_vec(&binv, v);

    let mut entries = Vec::new();
    for j in 0..k {
        for l in 0..k {
            let br = coords(&c.bracket(&splitting[j], &splitting[l]));
            for (i, v) in br.iter().take(k).enumerate() {
                if !v.is_zero() && j < l {
                    entries.push((i, j, l, v.clone()));
                }
            }
        }
    }
    let c0 = StructureConstants::from_entries(k, &entries)?;

    let g_alg = GradedAlgebra::new((1..=n).map(|a| (format!("xi{a}"), 1)))?;
    let g0 = GradedAlgebra::new((1..=k).map(|j| (format!("zeta{j}"), 1)))?;
    let q_g = ce_differential(&g_alg, &(0..n).collect::<Vec<_>>(), c)?;
    let q_g0 = ce_differential(&g0, &(0..k).collect::<Vec<_>>(), &c0)?;
    let images = (0..n)
        .map(|a| {
            crate::graded::sum(
                &g0,
                (0..k).map(|j| Polynomial::generator(&g0, j).scale(&splitting[j][a])),
            )
        })
        .collect();
    let mor = Morphism::new(&g0, &g_alg, images)?;
    let f = crate::derivation::field_strength(&mor, &q_g0, &q_g)?;
    let project = |row: usize| -> Polynomial {
        crate::graded::sum(&g0, (0..n).map(|a| f.image(a).scale(&binv[row][a])))
    };
    for i in 0..k {
        let leak = project(i);
        if !leak.is_zero() {
            return Err(Error::NotClosedInternal(format!("field strength has a g0 component {leak}")));
        }
    }
    let f_h: Vec<Polynomial> = (0..m).map(|alpha| project(k + alpha)).collect();
    let cochain = phi.evaluate(&g0, &f_h)?;

    // g acting on h: [e_a, h_α] = Σ_β M_a[β][α] h_β
    let mats: Vec<Matrix> = (0..n)
        .map(|a| {
            let mut e = vec![Rational::zero(); n];
            e[a] = Rational::one();
            let cols: Vec<Vec<Rational>> = ideal
                .iter()
                .map(|h| coords(&c.bracket(&e, h))[k..].to_vec())
                .collect();
            (0..m).map(|beta| (0..m).map(|alpha| cols[alpha][beta].clone()).collect()).collect()
        })
        .collect();
    let invariant = phi.is_invariant_under(&mats);
    let closed = q_g0.apply(&cochain)?.is_zero();
    if invariant && !closed {
        return Err(Error::NotClosedInternal("cochain of an invariant polynomial is not closed".into()));
    }
    Ok(LecomteCochain {
        g0,
        g0_constants: c0,
        q_g0,
        cochain,
        invariant,
        closed,
    })
}
