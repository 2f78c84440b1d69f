//! Graded derivations and degree-preserving algebra morphisms.
//!
//! Both are stored by their values on generators. A derivation may act
//! "along" a morphism `φ*`, in which case it maps the morphism's input
//! algebra into its output algebra and obeys
//! `D(gh) = D(g) φ*(h) + (-1)^{|D||g|} φ*(g) D(h)`.

use std::fmt;

use num_traits::One;

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::graded::{sign, GradedAlgebra, Monomial, Polynomial, Rational};

/// Pullback of a degree-preserving map. `source` holds the outputs,
/// `target` the inputs: `images[i]` is `φ*(g_i)` for the i-th generator of
/// `target`, written over `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: GradedAlgebra,
    target: GradedAlgebra,
    images: Vec<Polynomial>,
}

impl Morphism {
    pub fn new(source: &GradedAlgebra, target: &GradedAlgebra, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != target.len() {
            return Err(Error::InvalidArgument(format!(
                "morphism needs {} images, got {}",
                target.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            source.check_same(img.algebra())?;
            let g = target.generator(i);
            match img.degree() {
                Ok(None) => {}
                Ok(Some(d)) if d == g.degree => {}
                _ => {
                    return Err(Error::DegreeMismatch(format!(
                        "image of `{}` must have degree {}, got {}",
                        g.name, g.degree, img
                    )))
                }
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Images given by name; unlisted generators go to the generator of the
    /// same name in `source`.
    pub fn from_named(
        source: &GradedAlgebra,
        target: &GradedAlgebra,
        named: &[(&str, Polynomial)],
    ) -> Result<Self> {
        let mut images: Vec<Option<Polynomial>> = vec![None; target.len()];
        for (name, p) in named {
            let i = target
                .find(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            images[i] = Some(p.clone());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| match img {
                Some(p) => Ok(p),
                None => source.var(&target.generator(i).name).map_err(|_| {
                    Error::InvalidArgument(format!(
                        "no image given for `{}`",
                        target.generator(i).name
                    ))
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, images)
    }

    pub fn identity(alg: &GradedAlgebra) -> Self {
        Morphism {
            source: alg.clone(),
            target: alg.clone(),
            images: (0..alg.len()).map(|i| Polynomial::generator(alg, i)).collect(),
        }
    }

    pub fn source(&self) -> &GradedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedAlgebra {
        &self.target
    }

    pub fn image(&self, ordinal: usize) -> &Polynomial {
        &self.images[ordinal]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Applies the pullback; an algebra homomorphism.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.target.check_same(p.algebra())?;
        let mut out = Polynomial::zero(&self.source);
        for (m, c) in p.terms() {
            let mut acc = Polynomial::constant(&self.source, c.clone());
            for &(g, e) in m.factors() {
                let img = &self.images[g as usize];
                for _ in 0..e {
                    acc = &acc * img;
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// The pullback `p ↦ next(self(p))`.
    pub fn followed_by(&self, next: &Morphism) -> Result<Morphism> {
        next.target.check_same(&self.source)?;
        let images = self
            .images
            .iter()
            .map(|p| next.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Morphism {
            source: next.source.clone(),
            target: self.target.clone(),
            images,
        })
    }

    /// Whether the morphism intertwines `q_source` and `q_target`
    /// (`Q_1 φ* = φ* Q_2` on generators).
    pub fn is_chain_map(&self, q_source: &Derivation, q_target: &Derivation) -> Result<bool> {
        Ok(field_strength(self, q_source, q_target)?.is_zero())
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_images(f, &self.target, &self.images)
    }
}

fn write_images(f: &mut fmt::Formatter<'_>, alg: &GradedAlgebra, images: &[Polynomial]) -> fmt::Result {
    f.write_str("{ ")?;
    for (i, p) in images.iter().enumerate() {
        if i > 0 {
            f.write_str("; ")?;
        }
        write!(f, "{} -> {}", alg.generator(i).name, p)?;
    }
    f.write_str(" }")
}

/// Embeds one algebra into another by sending generators to generators.
#[derive(Debug, Clone)]
pub struct Embedding {
    morphism: Morphism,
    map: Vec<usize>,
}

impl Embedding {
    pub fn from_map(from: &GradedAlgebra, to: &GradedAlgebra, map: Vec<usize>) -> Result<Self> {
        if map.len() != from.len() {
            return Err(Error::InvalidArgument("embedding map has wrong length".into()));
        }
        let images = map.iter().map(|&j| Polynomial::generator(to, j)).collect();
        let morphism = Morphism::new(to, from, images)?;
        Ok(Embedding { morphism, map })
    }

    pub fn by_name(from: &GradedAlgebra, to: &GradedAlgebra) -> Result<Self> {
        let map = from
            .generators()
            .iter()
            .map(|g| to.find(&g.name).ok_or_else(|| Error::UnknownGenerator(g.name.clone())))
            .collect::<Result<Vec<_>>>()?;
        Embedding::from_map(from, to, map)
    }

    pub fn from(&self) -> &GradedAlgebra {
        self.morphism.target()
    }

    pub fn to(&self) -> &GradedAlgebra {
        self.morphism.source()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn poly(&self, p: &Polynomial) -> Result<Polynomial> {
        self.morphism.apply(p)
    }

    /// Extends a derivation of `from` to `to`, acting by zero on the
    /// generators outside the image.
    pub fn derivation(&self, d: &Derivation) -> Result<Derivation> {
        if d.along.is_some() || d.source != *self.from() {
            return Err(Error::AlgebraMismatch);
        }
        let to = self.to();
        let mut images = vec![Polynomial::zero(to); to.len()];
        for (i, &j) in self.map.iter().enumerate() {
            images[j] = self.poly(&d.images[i])?;
        }
        Derivation::new(to, d.degree, images)
    }
}

/// A graded derivation determined by its generator images.
#[derive(Debug, Clone)]
pub struct Derivation {
    source: GradedAlgebra,
    target: GradedAlgebra,
    degree: i32,
    along: Option<Morphism>,
    images: Vec<Polynomial>,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.along == other.along
            && self.images == other.images
    }
}

impl Eq for Derivation {}

fn check_image_degree(g: &crate::graded::Generator, degree: i32, img: &Polynomial) -> Result<()> {
    match img.degree() {
        Ok(None) => Ok(()),
        Ok(Some(d)) if d as i64 == g.degree as i64 + degree as i64 => Ok(()),
        _ => Err(Error::DegreeMismatch(format!(
            "image of `{}` under a degree {} derivation must have degree {}, got {}",
            g.name,
            degree,
            g.degree as i64 + degree as i64,
            img
        ))),
    }
}

impl Derivation {
    pub fn new(alg: &GradedAlgebra, degree: i32, images: Vec<Polynomial>) -> Result<Self> {
        if images.len() != alg.len() {
            return Err(Error::InvalidArgument(format!(
                "derivation needs {} images, got {}",
                alg.len(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            alg.check_same(img.algebra())?;
            check_image_degree(alg.generator(i), degree, img)?;
        }
        Ok(Derivation {
            source: alg.clone(),
            target: alg.clone(),
            degree,
            along: None,
            images,
        })
    }

    /// A derivation along `phi`, mapping `phi.target()` into `phi.source()`.
    pub fn along(phi: &Morphism, degree: i32, images: Vec<Polynomial>) -> Result<Self> {
        let (src, tgt) = (phi.target(), phi.source());
        if images.len() != src.len() {
            return Err(Error::InvalidArgument("wrong number of images".into()));
        }
        for (i, img) in images.iter().enumerate() {
            tgt.check_same(img.algebra())?;
            check_image_degree(src.generator(i), degree, img)?;
        }
        Ok(Derivation {
            source: src.clone(),
            target: tgt.clone(),
            degree,
            along: Some(phi.clone()),
            images,
        })
    }

    /// Images given by name; unlisted generators map to zero.
    pub fn from_named(alg: &GradedAlgebra, degree: i32, named: &[(&str, Polynomial)]) -> Result<Self> {
        let mut images = vec![Polynomial::zero(alg); alg.len()];
        for (name, p) in named {
            let i = alg
                .find(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            images[i] = p.clone();
        }
        Derivation::new(alg, degree, images)
    }

    pub fn zero(alg: &GradedAlgebra, degree: i32) -> Self {
        Derivation {
            source: alg.clone(),
            target: alg.clone(),
            degree,
            along: None,
            images: vec![Polynomial::zero(alg); alg.len()],
        }
    }

    /// Coordinate derivation `∂/∂g`, of degree `-deg(g)`.
    pub fn partial(alg: &GradedAlgebra, ordinal: usize) -> Self {
        let mut d = Derivation::zero(alg, -(alg.degree(ordinal) as i32));
        d.images[ordinal] = Polynomial::one(alg);
        d
    }

    /// Euler field `ξ(q) = deg(q) q`.
    pub fn euler(alg: &GradedAlgebra) -> Self {
        let images = (0..alg.len())
            .map(|i| Polynomial::generator(alg, i).scale(&Rational::from_integer(alg.degree(i).into())))
            .collect();
        Derivation {
            source: alg.clone(),
            target: alg.clone(),
            degree: 0,
            along: None,
            images,
        }
    }

    pub fn source(&self) -> &GradedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GradedAlgebra {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    pub fn along_morphism(&self) -> Option<&Morphism> {
        self.along.as_ref()
    }

    pub fn image(&self, ordinal: usize) -> &Polynomial {
        &self.images[ordinal]
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Polynomial::is_zero)
    }

    fn pull(&self, ordinal: usize) -> Polynomial {
        match &self.along {
            Some(phi) => phi.image(ordinal).clone(),
            None => Polynomial::generator(&self.source, ordinal),
        }
    }

    /// Applies the derivation by the graded Leibniz rule.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.source.check_same(p.algebra())?;
        let mut out = Polynomial::zero(&self.target);
        for (m, c) in p.terms() {
            let term = self.apply_monomial(m);
            if !term.is_zero() {
                out = &out + &term.scale(c);
            }
        }
        Ok(out)
    }

    fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let factors = m.factors();
        if factors.is_empty() {
            return Polynomial::zero(&self.target);
        }
        let pulled: Vec<Polynomial> = factors
            .iter()
            .map(|&(g, e)| self.pull(g as usize).pow(e))
            .collect();
        let mut out = Polynomial::zero(&self.target);
        let mut prefix = Polynomial::one(&self.target);
        let mut prefix_degree: i64 = 0;
        for (k, &(g, e)) in factors.iter().enumerate() {
            let g = g as usize;
            let dg = &self.images[g];
            if !dg.is_zero() {
                // D(g^e) = e g^{e-1} D(g); only even g can have e > 1
                let mut block = dg.clone();
                if e > 1 {
                    block = &self.pull(g).pow(e - 1) * &block;
                    block = block.scale(&Rational::from_integer(e.into()));
                }
                let mut term = &prefix * &block;
                for later in &pulled[k + 1..] {
                    term = &term * later;
                }
                let s = sign(self.degree as i64 * prefix_degree);
                out = &out + &term.scale(&s);
            }
            prefix = &prefix * &pulled[k];
            prefix_degree += (self.source.degree(g) * e) as i64;
        }
        out
    }

    /// Sum of two derivations with matching domain, codomain and degree.
    /// A zero operand adopts the other's degree.
    pub fn checked_add(&self, other: &Derivation) -> Result<Derivation> {
        self.source.check_same(&other.source)?;
        self.target.check_same(&other.target)?;
        if self.along != other.along {
            return Err(Error::AlgebraMismatch);
        }
        let degree = if self.is_zero() {
            other.degree
        } else if other.is_zero() || self.degree == other.degree {
            self.degree
        } else {
            return Err(Error::DegreeMismatch(format!(
                "cannot add derivations of degree {} and {}",
                self.degree, other.degree
            )));
        };
        Ok(Derivation {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            along: self.along.clone(),
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        let mut out = self.clone();
        for img in &mut out.images {
            *img = img.scale(c);
        }
        out
    }

    /// The derivation `b·X`, `(bX)(g) = b X(g)`, of degree `|b| + |X|`.
    pub fn left_mul(&self, b: &Polynomial) -> Result<Derivation> {
        if self.along.is_some() {
            return Err(Error::InvalidArgument("left_mul on a derivation along a morphism".into()));
        }
        let db = b.degree().map_err(|_| Error::NotHomogeneous(b.to_string()))?;
        let degree = self.degree + db.unwrap_or(0) as i32;
        let images = self
            .images
            .iter()
            .map(|img| b.checked_mul(img))
            .collect::<Result<Vec<_>>>()?;
        Ok(Derivation {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            along: None,
            images,
        })
    }

    /// `D ∘ ψ*` for a morphism `ψ` with `ψ.source() == D.source()`:
    /// a derivation along `ψ` followed by `D`'s own morphism.
    pub fn after(&self, psi: &Morphism) -> Result<Derivation> {
        self.source.check_same(psi.source())?;
        let along = match &self.along {
            Some(phi) => psi.followed_by(phi)?,
            None => psi.clone(),
        };
        let images = psi
            .images()
            .iter()
            .map(|p| self.apply(p))
            .collect::<Result<Vec<_>>>()?;
        Derivation::along(&along, self.degree, images)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} ", self.degree)?;
        write_images(f, &self.source, &self.images)
    }
}

/// Graded commutator `[X,Y] = X∘Y − (−1)^{|X||Y|} Y∘X`.
pub fn commutator(x: &Derivation, y: &Derivation) -> Result<Derivation> {
    if x.along.is_some() || y.along.is_some() {
        return Err(Error::InvalidArgument("commutator of derivations along morphisms".into()));
    }
    x.source.check_same(&y.source)?;
    let s = sign(x.degree as i64 * y.degree as i64);
    let images = (0..x.source.len())
        .map(|g| {
            let xy = x.apply(&y.images[g])?;
            let yx = y.apply(&x.images[g])?;
            Ok(&xy - &yx.scale(&s))
        })
        .collect::<Result<Vec<_>>>()?;
    Derivation::new(&x.source, x.degree + y.degree, images)
}

/// Certifies `Q² = 0` by checking `Q(Q(g)) = 0` on every generator.
pub fn check_nilpotent(q: &Derivation) -> Result<Certificate> {
    if !q.is_odd() {
        return Err(Error::EvenDegree(q.degree));
    }
    if q.along.is_some() {
        return Err(Error::InvalidArgument("nilpotency of a derivation along a morphism".into()));
    }
    let alg = &q.source;
    let mut residuals = Vec::with_capacity(alg.len());
    for (g, img) in q.images.iter().enumerate() {
        residuals.push((format!("Q^2({})", alg.generator(g).name), q.apply(img)?));
    }
    Ok(Certificate::from_residuals("nilpotent", residuals))
}

/// Derived bracket `[X,Y]_Q = [[X,Q],Y] = (−1)^{|X|+1}[[Q,X],Y]`.
pub fn derived_bracket(x: &Derivation, y: &Derivation, q: &Derivation) -> Result<Derivation> {
    commutator(&commutator(x, q)?, y)
}

/// `ad_Q(X) = [Q, X]`.
pub fn ad(q: &Derivation, x: &Derivation) -> Result<Derivation> {
    commutator(q, x)
}

/// Field strength `F = Q_1 φ* − φ* Q_2`, a degree-one derivation along `φ`.
pub fn field_strength(phi: &Morphism, q1: &Derivation, q2: &Derivation) -> Result<Derivation> {
    phi.source().check_same(q1.source())?;
    phi.target().check_same(q2.source())?;
    if q1.along.is_some() || q2.along.is_some() {
        return Err(Error::InvalidArgument("homological fields must act on a single algebra".into()));
    }
    if q1.degree != q2.degree {
        return Err(Error::DegreeMismatch("Q-structures have different degrees".into()));
    }
    let images = (0..phi.target().len())
        .map(|g| {
            let a = q1.apply(phi.image(g))?;
            let b = phi.apply(&q2.images[g])?;
            Ok(&a - &b)
        })
        .collect::<Result<Vec<_>>>()?;
    Derivation::along(phi, q1.degree, images)
}

/// Variation of a section along a degree-zero vector field: `(δ_X φ)* = φ* X`.
pub fn variation_of_section(phi: &Morphism, x: &Derivation) -> Result<Derivation> {
    phi.target().check_same(x.source())?;
    if x.degree != 0 {
        return Err(Error::DegreeMismatch("variation needs a degree-0 vector field".into()));
    }
    let images = x
        .images
        .iter()
        .map(|p| phi.apply(p))
        .collect::<Result<Vec<_>>>()?;
    Derivation::along(phi, 0, images)
}
