//! Lie algebra actions, action Lie algebroids and the Weil and Cartan
//! models of equivariant forms, with the gauging check for WZ terms.

use num_traits::{One, Zero};

use crate::cert::Certificate;
use crate::charclass::{gauge_variation_check, is_basic, HolonomyGenerators, TrivialBundle};
use crate::derivation::{check_nilpotent, commutator, Derivation, Embedding, Morphism};
use crate::error::{Error, Result};
use crate::graded::{GradedAlgebra, Polynomial, Rational};
use crate::lie::{ce_differential, StructureConstants};
use crate::tangent::{shift_tangent, TangentAlgebra};

/// An action `ρ: g → Vect(M)` on a polynomial algebra of degree-0 coordinates.
#[derive(Debug, Clone)]
pub struct LieAction {
    g: StructureConstants,
    m: GradedAlgebra,
    rho: Vec<Derivation>,
    ghosts: Vec<String>,
}

impl LieAction {
    pub fn new(g: StructureConstants, m: &GradedAlgebra, rho: Vec<Derivation>, ghosts: Vec<String>) -> Result<Self> {
        if let Some(gen) = m.generators().iter().find(|x| x.degree != 0) {
            return Err(Error::InvalidArgument(format!(
                "action target must have degree-0 coordinates (`{}` has degree {})",
                gen.name, gen.degree
            )));
        }
        if rho.len() != g.dim() || ghosts.len() != g.dim() {
            return Err(Error::InvalidArgument(format!("need {} vector fields and ghost names", g.dim())));
        }
        for r in &rho {
            if r.source() != m || r.along_morphism().is_some() || r.degree() != 0 {
                return Err(Error::InvalidArgument("action fields must be degree-0 vector fields on M".into()));
            }
        }
        Ok(LieAction {
            g,
            m: m.clone(),
            rho,
            ghosts,
        })
    }

    pub fn lie_algebra(&self) -> &StructureConstants {
        &self.g
    }

    pub fn manifold(&self) -> &GradedAlgebra {
        &self.m
    }

    pub fn fields(&self) -> &[Derivation] {
        &self.rho
    }

    /// Certifies `[ρ_b, ρ_c] = C^a_{bc} ρ_a` on all basis pairs.
    pub fn check_homomorphism(&self) -> Result<Certificate> {
        let n = self.g.dim();
        let mut residuals = Vec::new();
        for b in 0..n {
            for c in b + 1..n {
                let lhs = commutator(&self.rho[b], &self.rho[c])?;
                let mut rhs = Derivation::zero(&self.m, 0);
                for a in 0..n {
                    let k = self.g.get(a, b, c);
                    if !k.is_zero() {
                        rhs = rhs.checked_add(&self.rho[a].scale(k))?;
                    }
                }
                let diff = lhs.checked_sub(&rhs)?;
                for (i, r) in diff.images().iter().enumerate() {
                    residuals.push((
                        format!("[rho{}, rho{}] on {}", b + 1, c + 1, self.m.generator(i).name),
                        r.clone(),
                    ));
                }
            }
        }
        Ok(Certificate::from_residuals("homomorphism", residuals))
    }
}

/// The action Lie algebroid `E[1] = M × g[1]` with `Q = ρ + Q_CE`.
#[derive(Debug, Clone)]
pub struct ActionAlgebroid {
    action: LieAction,
    e: GradedAlgebra,
    m_emb: Embedding,
    ghosts: Vec<usize>,
    q: Derivation,
    q_ce: Derivation,
    rho_field: Derivation,
    t: TangentAlgebra,
    t_m: TangentAlgebra,
    q_w: Derivation,
    q_c: Derivation,
}

pub fn action_algebroid(action: &LieAction) -> Result<ActionAlgebroid> {
    let hom = action.check_homomorphism()?;
    if !hom.passed() {
        return Err(Error::NotHomomorphism(hom.to_string()));
    }
    let m = &action.m;
    let nm = m.len();
    let gens = m
        .generators()
        .iter()
        .map(|g| (g.name.clone(), g.degree as i64))
        .chain(action.ghosts.iter().map(|n| (n.clone(), 1)));
    let e = GradedAlgebra::new(gens)?;
    let m_emb = Embedding::from_map(m, &e, (0..nm).collect())?;
    let ghosts: Vec<usize> = (nm..e.len()).collect();
    let q_ce = ce_differential(&e, &ghosts, &action.g)?;
    let mut rho_images = vec![Polynomial::zero(&e); e.len()];
    for (a, r) in action.rho.iter().enumerate() {
        let xi = Polynomial::generator(&e, ghosts[a]);
        for (i, img) in rho_images.iter_mut().take(nm).enumerate() {
            *img = &*img + &(&xi * &m_emb.poly(r.image(i))?);
        }
    }
    let rho_field = Derivation::new(&e, 1, rho_images)?;
    let q = rho_field.checked_add(&q_ce)?;
    let nil = check_nilpotent(&q)?;
    if !nil.passed() {
        return Err(Error::NotNilpotent(nil.to_string()));
    }
    let t = shift_tangent(&e);
    let q_w = t.total_differential(&q_ce)?;
    let q_c = t.total_differential(&q)?;
    Ok(ActionAlgebroid {
        action: action.clone(),
        t_m: shift_tangent(m),
        e,
        m_emb,
        ghosts,
        q,
        q_ce,
        rho_field,
        t,
        q_w,
        q_c,
    })
}

impl ActionAlgebroid {
    pub fn algebra(&self) -> &GradedAlgebra {
        &self.e
    }

    pub fn action(&self) -> &LieAction {
        &self.action
    }

    pub fn q(&self) -> &Derivation {
        &self.q
    }

    pub fn q_ce(&self) -> &Derivation {
        &self.q_ce
    }

    /// `ρ = ξ^a ρ_a`, a degree-1 vector field on `E[1]`.
    pub fn rho_field(&self) -> &Derivation {
        &self.rho_field
    }

    /// `T[1]E[1]`.
    pub fn tangent(&self) -> &TangentAlgebra {
        &self.t
    }

    /// `T[1]M`.
    pub fn tangent_m(&self) -> &TangentAlgebra {
        &self.t_m
    }

    pub fn m_embedding(&self) -> &Embedding {
        &self.m_emb
    }

    pub fn ghost_ordinals(&self) -> &[usize] {
        &self.ghosts
    }

    /// Weil differential `d + L_{Q_CE}`.
    pub fn q_weil(&self) -> &Derivation {
        &self.q_w
    }

    /// Cartan differential `d + L_Q`.
    pub fn q_cartan(&self) -> &Derivation {
        &self.q_c
    }

    fn check_eps(&self, eps: &[Rational]) -> Result<()> {
        if eps.len() != self.ghosts.len() {
            return Err(Error::InvalidArgument(format!("expected {} components", self.ghosts.len())));
        }
        Ok(())
    }

    /// `ε = ε^a ∂/∂ξ^a`, degree −1 on `E[1]`.
    pub fn epsilon_field(&self, eps: &[Rational]) -> Result<Derivation> {
        self.check_eps(eps)?;
        let mut images = vec![Polynomial::zero(&self.e); self.e.len()];
        for (a, &g) in self.ghosts.iter().enumerate() {
            images[g] = Polynomial::constant(&self.e, eps[a].clone());
        }
        Derivation::new(&self.e, -1, images)
    }

    /// `ρ(ε) = ε^a ρ_a`, extended to `E[1]`.
    pub fn rho_of(&self, eps: &[Rational]) -> Result<Derivation> {
        self.check_eps(eps)?;
        let mut out = Derivation::zero(&self.action.m, 0);
        for (a, r) in self.action.rho.iter().enumerate() {
            out = out.checked_add(&r.scale(&eps[a]))?;
        }
        self.m_emb.derivation(&out)
    }

    /// `i_ε = L_ε + ι_{ρ(ε)}` on `T[1]E[1]`.
    pub fn i_epsilon(&self, eps: &[Rational]) -> Result<Derivation> {
        let l = self.t.lie_derivative(&self.epsilon_field(eps)?)?;
        let i = self.t.contraction(&self.rho_of(eps)?)?;
        l.checked_add(&i)
    }

    /// `exp(−ι_ρ) ∘ D ∘ exp(ι_ρ)`, evaluated on generators.
    pub fn conjugate(&self, d: &Derivation) -> Result<Derivation> {
        let iota = self.t.contraction(&self.rho_field)?;
        let minus = iota.scale(&-Rational::one());
        let full = self.t.full();
        let images = (0..full.len())
            .map(|j| {
                let g = Polynomial::generator(full, j);
                let inner = self.t.exp_contraction(&iota, &g)?;
                self.t.exp_contraction(&minus, &d.apply(&inner)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Derivation::new(full, d.degree(), images)
    }

    /// Certifies `Q_W = exp(−ι_ρ) Q_C exp(ι_ρ)` on every generator.
    pub fn weil_cartan_conjugation(&self) -> Result<Certificate> {
        let conj = self.conjugate(&self.q_c)?;
        Ok(self.compare("conjugation", &conj, &self.q_w))
    }

    fn compare(&self, check: &str, lhs: &Derivation, rhs: &Derivation) -> Certificate {
        let full = self.t.full();
        Certificate::from_residuals(
            check,
            (0..full.len()).map(|j| (full.generator(j).name.clone(), lhs.image(j) - rhs.image(j))),
        )
    }

    /// For the basis element `e_a`: conjugation sends `L_ε` to `i_ε` and
    /// `L_{[Q,ε]}` to `[Q_W, i_ε]`, which equals the diagonal action
    /// `L_{[Q_CE,ε]} + L_{ρ(ε)}`.
    pub fn check_generator_conjugation(&self, eps: &[Rational]) -> Result<Vec<Certificate>> {
        let e = self.epsilon_field(eps)?;
        let ie = self.i_epsilon(eps)?;
        let ad_w = commutator(&self.q_w, &ie)?;
        let l_ad = self.t.lie_derivative(&commutator(&self.q, &e)?)?;
        let diagonal = self
            .t
            .lie_derivative(&commutator(&self.q_ce, &e)?)?
            .checked_add(&self.t.lie_derivative(&self.rho_of(eps)?)?)?;
        Ok(vec![
            self.compare("conjugate L_eps", &self.conjugate(&self.t.lie_derivative(&e)?)?, &ie),
            self.compare("conjugate L_[Q,eps]", &self.conjugate(&l_ad)?, &ad_w),
            self.compare("diagonal action", &ad_w, &diagonal),
        ])
    }

    /// Basicness against `{∂/∂ξ^a}` and the `Q` of the algebroid; the flag
    /// says whether `η` avoids the undifferentiated ghosts, i.e. lies in
    /// `S(g*) ⊗ Ω(M)`.
    pub fn cartan_basic_check(&self, eta: &Polynomial) -> Result<(Certificate, bool)> {
        let hol = HolonomyGenerators::coordinate(&self.e, &self.ghosts)?;
        let cert = is_basic(eta, &hol, &self.q, &self.t)?;
        let ghost_ords: Vec<usize> = self.ghosts.iter().map(|&g| self.t.base_ordinal(g)).collect();
        let in_cartan = eta
            .terms()
            .all(|(m, _)| m.factors().iter().all(|&(g, _)| !ghost_ords.contains(&(g as usize))));
        Ok((cert, in_cartan))
    }

    pub fn holonomy(&self) -> Result<HolonomyGenerators> {
        HolonomyGenerators::coordinate(&self.e, &self.ghosts)
    }
}

/// The four certificates of the WZ gauging check.
#[derive(Debug, Clone)]
pub struct WzReport {
    /// `δ_X f₀*(H)` against `dε^a X*(ι_{ρ_a}H) + ε^a X*(L_{ρ_a}H)`.
    pub non_invariance: Certificate,
    pub variation: Polynomial,
    pub gauged: Polynomial,
    pub ungauged: Polynomial,
    pub closed: Certificate,
    pub gauge_invariance: Certificate,
    /// `None` when the base is not affine and no primitive is built.
    pub exactness: Option<Certificate>,
    pub primitive: Option<Polynomial>,
}

/// Gauging check for a WZ term `H` on `T[1]M` with equivariant extension
/// `Ĥ` on `T[1]E[1]`. `phi` sends the generators of `E[1]` to the base
/// tangent algebra and `params` are the gauge parameters `ε^a` there.
pub fn wz_gauging_check(
    alg: &ActionAlgebroid,
    h: &Polynomial,
    h_hat: &Polynomial,
    phi: &Morphism,
    base: &TangentAlgebra,
    params: &[Polynomial],
) -> Result<WzReport> {
    let t_m = alg.tangent_m();
    let m = alg.action().manifold();
    let n_ghost = alg.ghost_ordinals().len();
    if params.len() != n_ghost {
        return Err(Error::InvalidArgument(format!("expected {n_ghost} gauge parameters")));
    }
    for p in params {
        base.full().check_same(p.algebra())?;
        if p.degree().map_err(|_| Error::NotHomogeneous(p.to_string()))?.unwrap_or(0) != 0 {
            return Err(Error::DegreeMismatch(format!("gauge parameter `{p}` must have degree 0")));
        }
    }
    phi.source().check_same(base.full())?;
    phi.target().check_same(alg.algebra())?;

    let dh = t_m.d().apply(h)?;
    if !dh.is_zero() {
        return Err(Error::NotClosed(format!("dH = {dh}")));
    }
    for (a, r) in alg.action().fields().iter().enumerate() {
        let l = t_m.lie_derivative(r)?.apply(h)?;
        if !l.is_zero() {
            return Err(Error::NotInvariant(format!("L_rho{} H = {l}", a + 1)));
        }
    }
    let (basic, _) = alg.cartan_basic_check(h_hat)?;
    if !basic.passed() {
        return Err(Error::NotEquivariantlyClosed(format!("extension is not basic: {basic}")));
    }
    let qc = alg.q_cartan().apply(h_hat)?;
    if !qc.is_zero() {
        return Err(Error::NotEquivariantlyClosed(format!("Q_C(H^) = {qc}")));
    }

    // (i) matter-only field and the ungauged variation
    let nm = m.len();
    let phi0 = Morphism::new(base.full(), m, phi.images()[..nm].to_vec())?;
    let bundle0 = TrivialBundle::with_fiber_tangent(base.d(), &Derivation::zero(m, 1), t_m)?;
    let total0 = bundle0.total();
    let nb = base.full().len();
    let mut x_images = vec![Polynomial::zero(total0); total0.len()];
    for (a, r) in alg.action().fields().iter().enumerate() {
        let eps = bundle0.base_embedding().poly(&params[a])?;
        for i in 0..nm {
            let term = &eps * &bundle0.fiber_embedding().poly(r.image(i))?;
            x_images[nb + i] = &x_images[nb + i] + &term;
        }
    }
    let x = Derivation::new(total0, 0, x_images)?;
    let variation = bundle0.variation(&phi0, &x)?.apply(h)?;
    let f0 = bundle0.fstar(&phi0)?;
    let mut expected = Polynomial::zero(base.full());
    for (a, r) in alg.action().fields().iter().enumerate() {
        let iota = f0.apply(&t_m.contraction(r)?.apply(h)?)?;
        let lie = f0.apply(&t_m.lie_derivative(r)?.apply(h)?)?;
        let de = base.d().apply(&params[a])?;
        expected = &expected + &(&(&de * &iota) + &(&params[a] * &lie));
    }
    let non_invariance = Certificate::from_residuals(
        "non-invariance",
        [("delta f0*(H) - formula".to_string(), &variation - &expected)],
    );

    // (ii) closedness of the gauged term
    let bundle = TrivialBundle::with_fiber_tangent(base.d(), alg.q(), alg.tangent())?;
    let fstar = bundle.fstar(phi)?;
    let gauged = fstar.apply(h_hat)?;
    let closed = Certificate::from_residuals("closed", [("d f*(H^)".to_string(), base.d().apply(&gauged)?)]);

    // (iii) gauge invariance with Y = ε^a(u) ∂/∂ξ^a
    let total = bundle.total();
    let mut y_images = vec![Polynomial::zero(total); total.len()];
    for (a, &g) in alg.ghost_ordinals().iter().enumerate() {
        y_images[nb + g] = bundle.base_embedding().poly(&params[a])?;
    }
    let y = Derivation::new(total, -1, y_images)?;
    let gauge_invariance = gauge_variation_check(&bundle, phi, &y, h_hat)?;

    // (iv) exactness of the difference over an affine base
    let ungauged = f0.apply(h)?;
    let diff = &gauged - &ungauged;
    let (exactness, primitive) = if base.base().generators().iter().all(|g| g.degree == 0) {
        let eta = base.poincare_primitive(&diff)?;
        let r = &base.d().apply(&eta)? - &diff;
        (
            Some(Certificate::from_residuals("exact", [("d(eta) - (f*H^ - f0*H)".to_string(), r)])),
            Some(eta),
        )
    } else {
        (None, None)
    };
    Ok(WzReport {
        non_invariance,
        variation,
        gauged,
        ungauged,
        closed,
        gauge_invariance,
        exactness,
        primitive,
    })
}
