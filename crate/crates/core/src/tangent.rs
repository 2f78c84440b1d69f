//! Shifted tangent algebras `T[1]M`: functions on `M` together with their
//! differentials, with the de Rham differential and Cartan calculus.

use std::ops::Add;

use num_traits::One;

use crate::cert::Certificate;
use crate::derivation::{check_nilpotent, commutator, field_strength, Derivation, Embedding, Morphism};
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebra, Monomial, Polynomial, Rational};

/// Function degree and form order of a generator or monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FormBidegree {
    pub function_degree: u32,
    pub form_order: u32,
}

impl Add for FormBidegree {
    type Output = FormBidegree;
    fn add(self, o: FormBidegree) -> FormBidegree {
        FormBidegree {
            function_degree: self.function_degree + o.function_degree,
            form_order: self.form_order + o.form_order,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TangentAlgebra {
    base: GradedAlgebra,
    full: GradedAlgebra,
    prefix: String,
    d: Derivation,
    embedding: Embedding,
    projection: Morphism,
}

/// Builds `T[1]M`. Generators come in pairs `(q, d:q)` in base order. If a
/// base generator already uses the `d:` prefix (as in nested tangents) the
/// differentials are named with `D:`, then `d2:`, `d3:`, ...
pub fn shift_tangent(base: &GradedAlgebra) -> TangentAlgebra {
    let prefix = ["d:".to_string(), "D:".to_string()]
        .into_iter()
        .chain((2..).map(|k| format!("d{k}:")))
        .find(|p| {
            base.generators().iter().all(|g| {
                !g.name.starts_with(p.as_str()) && base.find(&format!("{p}{}", g.name)).is_none()
            })
        })
        .expect("some prefix is free");
    let mut gens = Vec::with_capacity(2 * base.len());
    for g in base.generators() {
        gens.push((g.name.clone(), g.degree as i64));
        gens.push((format!("{prefix}{}", g.name), g.degree as i64 + 1));
    }
    let full = GradedAlgebra::new(gens).expect("tangent generator names are distinct");
    let n = base.len();
    let mut d_images = vec![Polynomial::zero(&full); 2 * n];
    for i in 0..n {
        d_images[2 * i] = Polynomial::generator(&full, 2 * i + 1);
    }
    let d = Derivation::new(&full, 1, d_images).expect("d has degree one");
    let embedding = Embedding::from_map(base, &full, (0..n).map(|i| 2 * i).collect()).expect("degrees match");
    let proj_images = (0..2 * n)
        .map(|j| if j % 2 == 0 { Polynomial::generator(base, j / 2) } else { Polynomial::zero(base) })
        .collect();
    let projection = Morphism::new(base, &full, proj_images).expect("degrees match");
    TangentAlgebra {
        base: base.clone(),
        full,
        prefix,
        d,
        embedding,
        projection,
    }
}

impl TangentAlgebra {
    pub fn base(&self) -> &GradedAlgebra {
        &self.base
    }

    pub fn full(&self) -> &GradedAlgebra {
        &self.full
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    /// The de Rham differential.
    pub fn d(&self) -> &Derivation {
        &self.d
    }

    pub fn base_ordinal(&self, i: usize) -> usize {
        2 * i
    }

    pub fn diff_ordinal(&self, i: usize) -> usize {
        2 * i + 1
    }

    pub fn is_differential(&self, full_ordinal: usize) -> bool {
        full_ordinal % 2 == 1
    }

    pub fn q(&self, i: usize) -> Polynomial {
        Polynomial::generator(&self.full, 2 * i)
    }

    pub fn dq(&self, i: usize) -> Polynomial {
        Polynomial::generator(&self.full, 2 * i + 1)
    }

    /// The differential of the base generator `name`.
    pub fn dvar(&self, name: &str) -> Result<Polynomial> {
        let i = self.base.find(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(self.dq(i))
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn embed(&self, p: &Polynomial) -> Result<Polynomial> {
        self.embedding.poly(p)
    }

    pub fn embed_derivation(&self, x: &Derivation) -> Result<Derivation> {
        self.embedding.derivation(x)
    }

    /// Restriction to form order zero, as a polynomial on the base.
    pub fn to_base(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.terms().any(|(m, _)| self.form_order(m) > 0) {
            return Err(Error::DegreeMismatch(format!("`{p}` has positive form order")));
        }
        self.projection.apply(p)
    }

    pub fn bidegree(&self, full_ordinal: usize) -> FormBidegree {
        let base_deg = self.base.degree(full_ordinal / 2);
        FormBidegree {
            function_degree: base_deg,
            form_order: (full_ordinal % 2) as u32,
        }
    }

    pub fn monomial_bidegree(&self, m: &Monomial) -> FormBidegree {
        m.factors().iter().fold(FormBidegree::default(), |acc, &(g, e)| {
            let b = self.bidegree(g as usize);
            FormBidegree {
                function_degree: acc.function_degree + e * b.function_degree,
                form_order: acc.form_order + e * b.form_order,
            }
        })
    }

    pub fn form_order(&self, m: &Monomial) -> u32 {
        self.monomial_bidegree(m).form_order
    }

    /// The part of `p` of form order `k`.
    pub fn form_component(&self, p: &Polynomial, k: u32) -> Polynomial {
        p.filter(|m| self.form_order(m) == k)
    }

    /// `ι_X`: `q ↦ 0`, `dq ↦ X(q)`, of degree `|X| − 1`.
    pub fn contraction(&self, x: &Derivation) -> Result<Derivation> {
        self.check_base_field(x)?;
        let mut images = vec![Polynomial::zero(&self.full); self.full.len()];
        for i in 0..self.base.len() {
            images[2 * i + 1] = self.embed(x.image(i))?;
        }
        Derivation::new(&self.full, x.degree() - 1, images)
    }

    /// `L_X = [ι_X, d] = ι_X d + (−1)^{|X|} d ι_X`.
    pub fn lie_derivative(&self, x: &Derivation) -> Result<Derivation> {
        commutator(&self.contraction(x)?, &self.d)
    }

    /// `Q_T = d + L_Q`, certified nilpotent.
    pub fn total_differential(&self, q: &Derivation) -> Result<Derivation> {
        if !q.is_odd() {
            return Err(Error::EvenDegree(q.degree()));
        }
        let qt = self.d.checked_add(&self.lie_derivative(q)?)?;
        let cert = check_nilpotent(&qt)?;
        if !cert.passed() {
            return Err(Error::NotNilpotent(cert.to_string()));
        }
        Ok(qt)
    }

    fn check_base_field(&self, x: &Derivation) -> Result<()> {
        if x.along_morphism().is_some() || *x.source() != self.base {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    fn check_lowers_form_order(&self, v: &Derivation) -> Result<()> {
        if *v.source() != self.full || v.along_morphism().is_some() {
            return Err(Error::AlgebraMismatch);
        }
        for j in 0..self.full.len() {
            let own = self.bidegree(j).form_order;
            if v.image(j).terms().any(|(m, _)| self.form_order(m) >= own) {
                return Err(Error::NotLocallyNilpotent(self.full.generator(j).name.clone()));
            }
        }
        Ok(())
    }

    /// `exp(V)(p) = Σ_k V^k(p)/k!` for a derivation `V` that strictly
    /// lowers form order, so the series terminates.
    pub fn exp_contraction(&self, v: &Derivation, p: &Polynomial) -> Result<Polynomial> {
        self.check_lowers_form_order(v)?;
        let mut term = p.clone();
        let mut acc = p.clone();
        let mut k = 1i64;
        loop {
            term = v.apply(&term)?.scale(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = &acc + &term;
            k += 1;
        }
    }

    /// `exp(V)` as an automorphism of the full algebra.
    pub fn exp_morphism(&self, v: &Derivation) -> Result<Morphism> {
        let images = (0..self.full.len())
            .map(|j| self.exp_contraction(v, &Polynomial::generator(&self.full, j)))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(&self.full, &self.full, images)
    }

    /// Certifies `exp(ι_Q) ∘ d ∘ exp(−ι_Q) = d + L_Q` on every generator.
    pub fn check_twist(&self, q: &Derivation) -> Result<Certificate> {
        let iq = self.contraction(q)?;
        let minus = iq.scale(&-Rational::one());
        let rhs = self.d.checked_add(&self.lie_derivative(q)?)?;
        let mut residuals = Vec::new();
        for j in 0..self.full.len() {
            let g = Polynomial::generator(&self.full, j);
            let lhs = self.exp_contraction(&iq, &self.d.apply(&self.exp_contraction(&minus, &g)?)?)?;
            residuals.push((self.full.generator(j).name.clone(), &lhs - &rhs.apply(&g)?));
        }
        Ok(Certificate::from_residuals("twist", residuals))
    }

    /// Pullback of `Q: M → T[1]M`: `q ↦ q`, `dq ↦ Q(q)`.
    pub fn q_pullback(&self, q: &Derivation) -> Result<Morphism> {
        self.check_base_field(q)?;
        let mut images = Vec::with_capacity(self.full.len());
        for i in 0..self.base.len() {
            images.push(Polynomial::generator(&self.base, i));
            images.push(q.image(i).clone());
        }
        Morphism::new(&self.base, &self.full, images)
    }

    /// Constructive primitive of a closed form over a purely even base:
    /// each weight-`w` component (polynomial degree plus form order) is
    /// sent to `ι_E ω_w / w`, `E` the radial field.
    pub fn poincare_primitive(&self, omega: &Polynomial) -> Result<Polynomial> {
        if let Some(g) = self.base.generators().iter().find(|g| g.degree != 0) {
            return Err(Error::NotAffineBase(g.name.clone()));
        }
        self.full.check_same(omega.algebra())?;
        let d_omega = self.d.apply(omega)?;
        if !d_omega.is_zero() {
            return Err(Error::NotClosed(d_omega.to_string()));
        }
        if !self.form_component(omega, 0).is_zero() {
            return Err(Error::ConstantObstruction);
        }
        let radial = Derivation::new(
            &self.base,
            0,
            (0..self.base.len()).map(|i| Polynomial::generator(&self.base, i)).collect(),
        )?;
        let iota = self.contraction(&radial)?;
        let mut eta = Polynomial::zero(&self.full);
        for (m, c) in omega.terms() {
            let weight: u32 = m.factors().iter().map(|&(_, e)| e).sum();
            let t = Polynomial::term(&self.full, c / Rational::from_integer(weight.into()), m.clone());
            eta = &eta + &iota.apply(&t)?;
        }
        let check = &self.d.apply(&eta)? - omega;
        if !check.is_zero() {
            return Err(Error::NotClosedInternal(format!("d(primitive) - form = {check}")));
        }
        Ok(eta)
    }
}

/// Lift of `φ: M₁ → M₂` to `T[1]M₁ → T[1]M₂`: `q ↦ φ*(q)`, `dq ↦ d φ*(q)`.
pub fn lift_morphism(phi: &Morphism, t_source: &TangentAlgebra, t_target: &TangentAlgebra) -> Result<Morphism> {
    phi.source().check_same(t_source.base())?;
    phi.target().check_same(t_target.base())?;
    let mut images = Vec::with_capacity(t_target.full().len());
    for i in 0..t_target.base().len() {
        let img = t_source.embed(phi.image(i))?;
        let dimg = t_source.d().apply(&img)?;
        images.push(img);
        images.push(dimg);
    }
    Morphism::new(t_source.full(), t_target.full(), images)
}

/// `f*: T[1]M₂ → M₁` with `f*(q) = φ*(q)` and `f*(dq) = F(q)`.
pub fn field_strength_morphism(
    phi: &Morphism,
    q1: &Derivation,
    q2: &Derivation,
    t_target: &TangentAlgebra,
) -> Result<Morphism> {
    phi.target().check_same(t_target.base())?;
    let f = field_strength(phi, q1, q2)?;
    let mut images = Vec::with_capacity(t_target.full().len());
    for i in 0..t_target.base().len() {
        images.push(phi.image(i).clone());
        images.push(f.image(i).clone());
    }
    Morphism::new(phi.source(), t_target.full(), images)
}

/// Certifies `Q₁ f* = f* Q_T` on every generator of the tangent algebra.
pub fn check_chain_property(fstar: &Morphism, q1: &Derivation, q_t: &Derivation) -> Result<Certificate> {
    fstar.source().check_same(q1.source())?;
    fstar.target().check_same(q_t.source())?;
    let alg = fstar.target();
    let mut residuals = Vec::with_capacity(alg.len());
    for j in 0..alg.len() {
        let g = Polynomial::generator(alg, j);
        let lhs = q1.apply(&fstar.apply(&g)?)?;
        let rhs = fstar.apply(&q_t.apply(&g)?)?;
        residuals.push((alg.generator(j).name.clone(), &lhs - &rhs));
    }
    Ok(Certificate::from_residuals("chain", residuals))
}

/// `f*` built as `Q₁-pullback ∘ lift(φ) ∘ exp(σ ι_{Q₂})`.
pub fn field_strength_via_twist(
    phi: &Morphism,
    q1: &Derivation,
    q2: &Derivation,
    t1: &TangentAlgebra,
    t2: &TangentAlgebra,
    sigma: i32,
) -> Result<Morphism> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::InvalidArgument("flow sign must be +1 or -1".into()));
    }
    let v = t2.contraction(q2)?.scale(&Rational::from_integer(sigma.into()));
    let twist = t2.exp_morphism(&v)?;
    let lift = lift_morphism(phi, t1, t2)?;
    let qpull = t1.q_pullback(q1)?;
    twist.followed_by(&lift)?.followed_by(&qpull)
}

/// The flow sign for which the twist construction reproduces the direct
/// field-strength morphism. When both signs agree (e.g. `Q₂ = 0`) the
/// result is −1, the sign that works in general.
pub fn resolve_flow_sign(
    phi: &Morphism,
    q1: &Derivation,
    q2: &Derivation,
    t1: &TangentAlgebra,
    t2: &TangentAlgebra,
) -> Result<i32> {
    let direct = field_strength_morphism(phi, q1, q2, t2)?;
    for sigma in [-1, 1] {
        if field_strength_via_twist(phi, q1, q2, t1, t2, sigma)? == direct {
            return Ok(sigma);
        }
    }
    Err(Error::NotClosedInternal("no flow sign reproduces the field strength".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{int, rat};
    use crate::lie::{ce_differential, StructureConstants};

    fn plane() -> TangentAlgebra {
        shift_tangent(&GradedAlgebra::new([("x", 0), ("y", 0)]).unwrap())
    }

    #[test]
    fn generator_layout_and_signs() {
        let t = shift_tangent(&GradedAlgebra::new([("xi1", 1), ("xi2", 1)]).unwrap());
        let names: Vec<_> = t.full().generators().iter().map(|g| (g.name.as_str(), g.degree)).collect();
        assert_eq!(names, vec![("xi1", 1), ("d:xi1", 2), ("xi2", 1), ("d:xi2", 2)]);
        let xi = t.q(0);
        let dxi2 = t.dq(1);
        assert_eq!(&xi * &dxi2, &dxi2 * &xi);
        assert_eq!((&t.dq(0) * &t.dq(0)).to_string(), "d:xi1^2");
        assert!(check_nilpotent(t.d()).unwrap().passed());
    }

    #[test]
    fn nested_tangent_prefix() {
        let t = plane();
        let tt = shift_tangent(t.full());
        assert_eq!(tt.prefix(), "D:");
        assert_eq!(tt.full().generator(3).name, "D:d:x");
    }

    #[test]
    fn contraction_and_lie_derivative_basics() {
        let t = plane();
        let base = t.base().clone();
        let dx_field = Derivation::partial(&base, 0);
        let iota = t.contraction(&dx_field).unwrap();
        assert_eq!(iota.apply(&t.dq(0)).unwrap(), t.full().one());
        assert!(iota.apply(&t.q(0)).unwrap().is_zero());
        let l = t.lie_derivative(&dx_field).unwrap();
        assert_eq!(l.apply(&(&t.q(0) * &t.dq(0))).unwrap(), t.dq(0));
    }

    #[test]
    fn euler_contraction_on_ghosts() {
        let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
        let t = shift_tangent(&g);
        let iota = t.contraction(&Derivation::euler(&g)).unwrap();
        assert_eq!(iota.apply(&t.dq(0)).unwrap(), t.q(0));
    }

    #[test]
    fn su2_total_differential() {
        let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
        let q = ce_differential(&g, &[0, 1, 2], &StructureConstants::su2()).unwrap();
        let t = shift_tangent(&g);
        let qt = t.total_differential(&q).unwrap();
        assert_eq!(qt.apply(&t.q(0)).unwrap().to_string(), "d:xi1 - xi2*xi3");
        assert!(t.check_twist(&q).unwrap().passed());
        let dqt = t.total_differential(&Derivation::zero(&g, 1)).unwrap();
        assert_eq!(&dqt, t.d());
    }

    #[test]
    fn exp_one_step_and_inverse() {
        let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
        let q = ce_differential(&g, &[0, 1, 2], &StructureConstants::su2()).unwrap();
        let t = shift_tangent(&g);
        let iq = t.contraction(&q).unwrap();
        let e = t.exp_contraction(&iq, &t.dq(0)).unwrap();
        assert_eq!(e, &t.dq(0) + &t.embed(q.image(0)).unwrap());
        let p = &(&t.dq(0) * &t.dq(1)) + &t.q(2);
        let back = t
            .exp_contraction(&iq, &t.exp_contraction(&iq.scale(&int(-1)), &p).unwrap())
            .unwrap();
        assert_eq!(back, p);
        assert!(matches!(t.exp_contraction(t.d(), &p), Err(Error::NotLocallyNilpotent(_))));
    }

    #[test]
    fn lift_of_square_map() {
        let line = GradedAlgebra::new([("x", 0)]).unwrap();
        let t = shift_tangent(&line);
        let x = line.var("x").unwrap();
        let phi = Morphism::new(&line, &line, vec![&x * &x]).unwrap();
        let lift = lift_morphism(&phi, &t, &t).unwrap();
        assert_eq!(lift.image(1), &(&t.q(0) * &t.dq(0)).scale(&int(2)));
        let id = lift_morphism(&Morphism::identity(&line), &t, &t).unwrap();
        assert_eq!(id, Morphism::identity(t.full()));
    }

    #[test]
    fn poincare_examples() {
        let t = plane();
        let (x, y, dx, dy) = (t.q(0), t.q(1), t.dq(0), t.dq(1));
        assert_eq!(t.poincare_primitive(&dx).unwrap(), x);
        let eta = t.poincare_primitive(&(&dx * &dy)).unwrap();
        assert_eq!(eta, (&(&x * &dy) - &(&y * &dx)).scale(&rat(1, 2)));
        assert_eq!(t.poincare_primitive(&(&(&x * &dy) + &(&y * &dx))).unwrap(), &x * &y);
        assert!(matches!(t.poincare_primitive(&(&x * &dy)), Err(Error::NotClosed(_))));
        assert_eq!(t.poincare_primitive(&t.full().one()), Err(Error::ConstantObstruction));
        let g = shift_tangent(&GradedAlgebra::new([("xi", 1)]).unwrap());
        assert!(matches!(g.poincare_primitive(&g.dq(0)), Err(Error::NotAffineBase(_))));
    }

    #[test]
    fn flow_sign_is_minus_one_for_su2() {
        let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
        let q2 = ce_differential(&g, &[0, 1, 2], &StructureConstants::su2()).unwrap();
        let base = GradedAlgebra::new([("x", 0), ("y", 0)]).unwrap();
        let t1 = shift_tangent(&base);
        let t2 = shift_tangent(&g);
        let m1 = t1.full().clone();
        let q1 = t1.d().clone();
        let (x, y, dx, dy) = (t1.q(0), t1.q(1), t1.dq(0), t1.dq(1));
        let phi = Morphism::new(&m1, &g, vec![&x * &dy, &y * &dx, dx.clone()]).unwrap();
        let tm1 = shift_tangent(&m1);
        assert_eq!(resolve_flow_sign(&phi, &q1, &q2, &tm1, &t2).unwrap(), -1);
        let fstar = field_strength_morphism(&phi, &q1, &q2, &t2).unwrap();
        let qt = t2.total_differential(&q2).unwrap();
        assert!(check_chain_property(&fstar, &q1, &qt).unwrap().passed());
    }
}
