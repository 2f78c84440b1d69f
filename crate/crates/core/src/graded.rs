//! Free graded-commutative polynomial algebras over the rationals.
//!
//! Every element is kept in a unique normal form: monomials list their
//! generators in declaration order, odd generators appear at most once, and
//! the Koszul sign picked up while sorting is folded into the coefficient.
//! Equality of polynomials is therefore equality of term maps.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Debug)]
struct AlgebraInner {
    id: u64,
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

/// A free graded-commutative algebra, identified by a process-unique id.
///
/// Cloning is cheap; all clones share the same id.
#[derive(Debug, Clone)]
pub struct GradedAlgebra(Arc<AlgebraInner>);

impl PartialEq for GradedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for GradedAlgebra {}

impl GradedAlgebra {
    /// Builds an algebra from `(name, degree)` pairs; ordinals follow the
    /// order given.
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut generators = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in gens {
            let name = name.into();
            if degree < 0 {
                return Err(Error::NegativeDegree { name, degree });
            }
            if index.insert(name.clone(), generators.len()).is_some() {
                return Err(Error::DuplicateName(name));
            }
            generators.push(Generator {
                name,
                degree: degree as u32,
            });
        }
        Ok(GradedAlgebra(Arc::new(AlgebraInner {
            id: NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed),
            generators,
            index,
        })))
    }

    /// Tensor product: generators of `self` followed by those of `other`.
    pub fn product(&self, other: &GradedAlgebra) -> Result<Self> {
        GradedAlgebra::new(
            self.generators()
                .iter()
                .chain(other.generators())
                .map(|g| (g.name.clone(), g.degree as i64)),
        )
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn len(&self) -> usize {
        self.0.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    pub fn generator(&self, ordinal: usize) -> &Generator {
        &self.0.generators[ordinal]
    }

    pub fn degree(&self, ordinal: usize) -> u32 {
        self.0.generators[ordinal].degree
    }

    pub fn is_odd(&self, ordinal: usize) -> bool {
        self.0.generators[ordinal].is_odd()
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.0.index.get(name).copied()
    }

    /// The generator called `name` as a polynomial.
    pub fn var(&self, name: &str) -> Result<Polynomial> {
        self.find(name)
            .map(|i| Polynomial::generator(self, i))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self)
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self)
    }

    pub(crate) fn check_same(&self, other: &GradedAlgebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }
}

/// Canonical monomial: `(ordinal, exponent)` pairs with strictly increasing
/// ordinals; odd generators always carry exponent 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(ordinal: usize) -> Self {
        Monomial(vec![(ordinal as u32, 1)])
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, alg: &GradedAlgebra) -> u32 {
        self.0
            .iter()
            .map(|&(g, e)| alg.degree(g as usize) * e)
            .sum()
    }

    pub fn exponent(&self, ordinal: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(g, _)| g as usize == ordinal)
            .map_or(0, |&(_, e)| e)
    }

    fn expanded(&self) -> impl Iterator<Item = u32> + '_ {
        self.0
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize))
    }

    /// Product of two canonical monomials. Returns `None` when an odd
    /// generator would appear twice; otherwise the Koszul sign (`true` for
    /// negative) and the merged monomial.
    pub fn mul(&self, other: &Monomial, alg: &GradedAlgebra) -> Option<(bool, Monomial)> {
        let mut negative = false;
        for &(gb, _) in &other.0 {
            if !alg.is_odd(gb as usize) {
                continue;
            }
            for &(ga, _) in &self.0 {
                if !alg.is_odd(ga as usize) {
                    continue;
                }
                match ga.cmp(&gb) {
                    Ordering::Equal => return None,
                    Ordering::Greater => negative = !negative,
                    Ordering::Less => {}
                }
            }
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (ga, ea) = self.0[i];
            let (gb, eb) = other.0[j];
            match ga.cmp(&gb) {
                Ordering::Less => {
                    out.push((ga, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((gb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((negative, Monomial(out)))
    }

    /// Builds the canonical form of an arbitrary ordered word of generators,
    /// returning the accumulated sign, or `None` if the word vanishes.
    pub fn from_word(word: &[usize], alg: &GradedAlgebra) -> Option<(bool, Monomial)> {
        let mut acc = (false, Monomial::one());
        for &g in word {
            let (s, m) = acc.1.mul(&Monomial::var(g), alg)?;
            acc = (acc.0 ^ s, m);
        }
        Some(acc)
    }

    fn write(&self, alg: &GradedAlgebra, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(g, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(&alg.generator(g as usize).name)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Lexicographic on the expanded ordinal word (`x < x*y`, `x^2 < x*y`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.expanded().cmp(other.expanded())
    }
}

/// An element of a [`GradedAlgebra`] in canonical form.
#[derive(Debug, Clone)]
pub struct Polynomial {
    alg: GradedAlgebra,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(alg: &GradedAlgebra) -> Self {
        Polynomial {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &GradedAlgebra) -> Self {
        Self::constant(alg, Rational::one())
    }

    pub fn constant(alg: &GradedAlgebra, c: Rational) -> Self {
        Self::term(alg, c, Monomial::one())
    }

    pub fn generator(alg: &GradedAlgebra, ordinal: usize) -> Self {
        Self::term(alg, Rational::one(), Monomial::var(ordinal))
    }

    pub fn term(alg: &GradedAlgebra, c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero(alg);
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from terms whose monomials are given as ordered
    /// words; each word is normalized with its Koszul sign.
    pub fn from_words(alg: &GradedAlgebra, words: &[(Rational, Vec<usize>)]) -> Self {
        let mut p = Self::zero(alg);
        for (c, w) in words {
            if let Some((neg, m)) = Monomial::from_word(w, alg) {
                p.add_term(m, if neg { -c.clone() } else { c.clone() });
            }
        }
        p
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.alg.check_same(&other.alg)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.alg.check_same(&other.alg)?;
        let mut out = Self::zero(&self.alg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb, &self.alg) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        Polynomial {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.alg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(k)` if every term has degree `k`; `None` for the zero
    /// polynomial. Errors on inhomogeneous input.
    pub fn degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(&self.alg);
            match deg {
                None => deg = Some(d),
                Some(k) if k != d => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    /// Degree-`k` part.
    pub fn homogeneous_component(&self, k: u32) -> Polynomial {
        self.filter(|m| m.degree(&self.alg) == k)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rebuilds the term map from scratch; a no-op on canonical input.
    pub fn normalized(&self) -> Polynomial {
        let mut out = Self::zero(&self.alg);
        for (m, c) in &self.terms {
            let word: Vec<usize> = m.expanded().map(|g| g as usize).collect();
            if let Some((neg, mm)) = Monomial::from_word(&word, &self.alg) {
                out.add_term(mm, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Terms in serialization order: by degree, then monomial.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            a.0.degree(&self.alg)
                .cmp(&b.0.degree(&self.alg))
                .then_with(|| a.0.cmp(b.0))
        });
        v
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms sorted by (degree, monomial), coefficients as
    /// reduced `p/q`, unit coefficients elided, factors joined by `*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write_rational(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_rational(f, &mag)?;
                    f.write_str("*")?;
                }
                m.write(&self.alg, f)?;
            }
        }
        Ok(())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

// Operator forms panic on mixed algebras; the `checked_*` methods report
// `AlgebraMismatch` instead.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomials over different algebras")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

/// Sum of an iterator of polynomials over `alg`.
pub fn sum(alg: &GradedAlgebra, items: impl IntoIterator<Item = Polynomial>) -> Polynomial {
    let mut acc = Polynomial::zero(alg);
    for p in items {
        for (m, c) in p.terms {
            acc.add_term(m, c);
        }
    }
    acc
}

/// `(-1)^n` as a rational.
pub fn sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
