//! Name resolution and evaluation of declarations and expressions.

use std::collections::BTreeMap;
use std::path::PathBuf;

use super::ast::*;
use super::commands::Job;
use super::{SemanticError, SemanticKind};
use crate::charclass::{char_form, invariant_to_basic_form, transgress, HolonomyGenerators, InvariantPolynomial, TrivialBundle};
use crate::derivation::{commutator, derived_bracket, Derivation, Morphism};
use crate::equivariant::{action_algebroid, ActionAlgebroid, LieAction};
use crate::graded::{GradedAlgebra, Polynomial, Rational};
use crate::lie::{ce_differential, StructureConstants};
use crate::pq::{aksz_integrand, SymplecticStructure};
use crate::tangent::{shift_tangent, TangentAlgebra};

#[derive(Clone)]
pub enum Value {
    Algebra(GradedAlgebra),
    Tangent(TangentAlgebra),
    Lie(StructureConstants),
    Derivation(Derivation),
    Morphism(Morphism),
    Form(Polynomial),
    Invariant(InvariantPolynomial),
    Holonomy(HolonomyGenerators),
    Bundle(TrivialBundle),
    Symplectic(SymplecticStructure),
    Action(LieAction),
    Algebroid(ActionAlgebroid),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Algebra(_) => "algebra",
            Value::Tangent(_) => "tangent algebra",
            Value::Lie(_) => "Lie algebra",
            Value::Derivation(_) => "derivation",
            Value::Morphism(_) => "morphism",
            Value::Form(_) => "form",
            Value::Invariant(_) => "invariant polynomial",
            Value::Holonomy(_) => "holonomy set",
            Value::Bundle(_) => "bundle",
            Value::Symplectic(_) => "symplectic structure",
            Value::Action(_) => "action",
            Value::Algebroid(_) => "action algebroid",
        }
    }
}

pub type SResult<T> = std::result::Result<T, SemanticError>;

pub struct Env {
    values: BTreeMap<String, Value>,
    tangents: Vec<TangentAlgebra>,
    base_dir: Option<PathBuf>,
}

fn type_err(span: Span, want: &str, name: &str, got: &Value) -> SemanticError {
    SemanticError::new(span, SemanticKind::TypeMismatch, format!("expected {want}, `{name}` is a {}", got.kind()))
}

fn mismatch(span: Span, what: &str) -> SemanticError {
    SemanticError::new(span, SemanticKind::AlgebraMismatch, what.to_string())
}

macro_rules! getter {
    ($fn:ident, $variant:ident, $ty:ty, $want:expr) => {
        pub fn $fn(&self, n: &Name) -> SResult<&$ty> {
            match self.lookup(n)? {
                Value::$variant(v) => Ok(v),
                other => Err(type_err(n.span, $want, &n.text, other)),
            }
        }
    };
}

impl Env {
    pub fn new(base_dir: Option<PathBuf>) -> Self {
        Env { values: BTreeMap::new(), tangents: Vec::new(), base_dir }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lookup(&self, n: &Name) -> SResult<&Value> {
        self.values
            .get(&n.text)
            .ok_or_else(|| SemanticError::new(n.span, SemanticKind::UnknownName, format!("`{}` is not declared", n.text)))
    }

    fn define(&mut self, n: &Name, v: Value) -> SResult<()> {
        if self.values.contains_key(&n.text) {
            return Err(SemanticError::new(n.span, SemanticKind::DuplicateName, format!("`{}` is already declared", n.text)));
        }
        if let Value::Tangent(t) = &v {
            self.tangents.push(t.clone());
        }
        if let Value::Bundle(b) = &v {
            self.tangents.push(b.t_fiber().clone());
        }
        self.values.insert(n.text.clone(), v);
        Ok(())
    }

    getter!(tangent, Tangent, TangentAlgebra, "a tangent algebra");
    getter!(lie, Lie, StructureConstants, "a Lie algebra");
    getter!(derivation_value, Derivation, Derivation, "a derivation");
    getter!(morphism, Morphism, Morphism, "a morphism");
    getter!(invariant, Invariant, InvariantPolynomial, "an invariant polynomial");
    getter!(holonomy, Holonomy, HolonomyGenerators, "a holonomy set");
    getter!(bundle, Bundle, TrivialBundle, "a bundle");
    getter!(symplectic, Symplectic, SymplecticStructure, "a symplectic structure");
    getter!(action, Action, LieAction, "an action");
    getter!(algebroid, Algebroid, ActionAlgebroid, "an action algebroid");

    /// Anything with an underlying algebra: algebras, tangent algebras
    /// (their full algebra), bundles (total space) and algebroids.
    pub fn algebra(&self, n: &Name) -> SResult<GradedAlgebra> {
        match self.lookup(n)? {
            Value::Algebra(a) => Ok(a.clone()),
            Value::Tangent(t) => Ok(t.full().clone()),
            Value::Bundle(b) => Ok(b.total().clone()),
            Value::Algebroid(e) => Ok(e.algebra().clone()),
            other => Err(type_err(n.span, "an algebra", &n.text, other)),
        }
    }

    fn tangent_of(&self, alg: &GradedAlgebra) -> Option<&TangentAlgebra> {
        self.tangents.iter().find(|t| t.full() == alg)
    }

    pub fn name_of(&self, e: &Expr) -> SResult<Name> {
        match &e.kind {
            ExprKind::Name(n) => Ok(Name { text: n.clone(), span: e.span }),
            _ => Err(SemanticError::new(e.span, SemanticKind::TypeMismatch, "expected a name")),
        }
    }

    pub fn rational(&self, e: &Expr) -> SResult<Rational> {
        match &e.kind {
            ExprKind::Num(n, d) => Ok(Rational::new(n.clone(), d.clone().unwrap_or_else(|| 1.into()))),
            ExprKind::Neg(x) => Ok(-self.rational(x)?),
            ExprKind::Bin(op, l, r) => {
                let (l, r) = (self.rational(l)?, self.rational(r)?);
                Ok(match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                })
            }
            ExprKind::Pow(b, k) => {
                let b = self.rational(b)?;
                Ok((0..*k).fold(Rational::from_integer(1.into()), |acc, _| acc * &b))
            }
            _ => Err(SemanticError::new(e.span, SemanticKind::TypeMismatch, "expected a rational constant")),
        }
    }

    pub fn vectors(&self, e: &Expr) -> SResult<Vec<Vec<Rational>>> {
        match &e.kind {
            ExprKind::List(items) => items
                .iter()
                .map(|it| match &it.kind {
                    ExprKind::List(xs) => xs.iter().map(|x| self.rational(x)).collect(),
                    _ => Err(SemanticError::new(it.span, SemanticKind::TypeMismatch, "expected a vector `[..]`")),
                })
                .collect(),
            _ => Err(SemanticError::new(e.span, SemanticKind::TypeMismatch, "expected a list of vectors")),
        }
    }

    /// Evaluates a polynomial expression over `ctx`.
    pub fn poly(&self, e: &Expr, ctx: &GradedAlgebra) -> SResult<Polynomial> {
        let k = |r: crate::Result<Polynomial>| r.map_err(|err| SemanticError::kernel(e.span, err));
        match &e.kind {
            ExprKind::Num(..) => Ok(Polynomial::constant(ctx, self.rational(e)?)),
            ExprKind::Name(n) => {
                if let Some(i) = ctx.find(n) {
                    return Ok(Polynomial::generator(ctx, i));
                }
                match self.values.get(n) {
                    Some(Value::Form(p)) if p.algebra() == ctx => Ok(p.clone()),
                    Some(Value::Form(_)) => Err(mismatch(e.span, &format!("form `{n}` lives on a different algebra"))),
                    Some(other) => Err(type_err(e.span, "a generator or form", n, other)),
                    None => Err(SemanticError::new(e.span, SemanticKind::UnknownName, format!("`{n}` is neither a generator here nor a declared form"))),
                }
            }
            ExprKind::Neg(x) => Ok(-&self.poly(x, ctx)?),
            ExprKind::Bin(op, l, r) => {
                let (l, r) = (self.poly(l, ctx)?, self.poly(r, ctx)?);
                k(match op {
                    BinOp::Add => l.checked_add(&r),
                    BinOp::Sub => l.checked_sub(&r),
                    BinOp::Mul => l.checked_mul(&r),
                })
            }
            ExprKind::Pow(b, n) => Ok(self.poly(b, ctx)?.pow(*n)),
            ExprKind::List(_) => Err(SemanticError::new(e.span, SemanticKind::TypeMismatch, "a list is not a polynomial")),
            ExprKind::Call(f, args) => {
                let out = match (f.text.as_str(), args.as_slice()) {
                    ("d", [x]) => {
                        let t = self.tangent_of(ctx).ok_or_else(|| {
                            SemanticError::new(f.span, SemanticKind::TypeMismatch, "`d(..)` used outside a tangent algebra")
                        })?;
                        if let ExprKind::Name(n) = &x.kind {
                            if t.base().find(n).is_some() {
                                return k(t.dvar(n));
                            }
                        }
                        k(t.d().apply(&self.poly(x, ctx)?))?
                    }
                    ("apply", [x, p]) => {
                        let x = self.derivation(x)?;
                        k(x.apply(&self.poly(p, x.source())?))?
                    }
                    ("pull", [phi, p]) => {
                        let phi = self.morphism(&self.name_of(phi)?)?;
                        k(phi.apply(&self.poly(p, phi.target())?))?
                    }
                    ("embed", [t, p]) => {
                        let t = self.tangent(&self.name_of(t)?)?;
                        k(t.embed(&self.poly(p, t.base())?))?
                    }
                    ("poisson", [w, a, b]) => {
                        let w = self.symplectic(&self.name_of(w)?)?;
                        let s = w.tangent().base();
                        k(w.poisson_bracket(&self.poly(a, s)?, &self.poly(b, s)?))?
                    }
                    ("primitive", [t, p]) => {
                        let t = self.tangent(&self.name_of(t)?)?;
                        k(t.poincare_primitive(&self.poly(p, t.full())?))?
                    }
                    ("liouville", [w]) => k(self.symplectic(&self.name_of(w)?)?.liouville())?,
                    ("char", [b, phi, w, h]) => {
                        let b = self.bundle(&self.name_of(b)?)?;
                        let omega = self.poly(w, b.t_fiber().full())?;
                        let (phi, h) = (self.morphism(&self.name_of(phi)?)?, self.holonomy(&self.name_of(h)?)?);
                        k(char_form(b, phi, &omega, h))?
                    }
                    ("transgression", [b, p0, p1, w, h]) => {
                        let b = self.bundle(&self.name_of(b)?)?;
                        let omega = self.poly(w, b.t_fiber().full())?;
                        let p0 = self.morphism(&self.name_of(p0)?)?;
                        let p1 = self.morphism(&self.name_of(p1)?)?;
                        let h = self.holonomy(&self.name_of(h)?)?;
                        k(transgress(b, p0, p1, &omega, h, None).map(|t| t.primitive))?
                    }
                    ("aksz", [w, q, phi]) => {
                        let base = self.tangent_of(ctx).ok_or_else(|| {
                            SemanticError::new(f.span, SemanticKind::TypeMismatch, "`aksz(..)` needs a tangent algebra as context")
                        })?;
                        let w = self.symplectic(&self.name_of(w)?)?;
                        let phi = self.morphism(&self.name_of(phi)?)?;
                        k(aksz_integrand(w, &self.derivation(q)?, phi, base).map(|a| a.lagrangian))?
                    }
                    _ => {
                        return Err(SemanticError::new(
                            f.span,
                            SemanticKind::UnknownName,
                            format!("unknown function `{}` with {} argument(s)", f.text, args.len()),
                        ))
                    }
                };
                if out.algebra() != ctx {
                    return Err(mismatch(e.span, &format!("`{}` produces a polynomial on a different algebra", f.text)));
                }
                Ok(out)
            }
        }
    }

    /// Evaluates a derivation-valued expression.
    pub fn derivation(&self, e: &Expr) -> SResult<Derivation> {
        let k = |r: crate::Result<Derivation>| r.map_err(|err| SemanticError::kernel(e.span, err));
        match &e.kind {
            ExprKind::Name(n) => Ok(self.derivation_value(&Name { text: n.clone(), span: e.span })?.clone()),
            ExprKind::Neg(x) => Ok(self.derivation(x)?.scale(&Rational::from_integer((-1).into()))),
            ExprKind::Bin(BinOp::Mul, c, x) => Ok(self.derivation(x)?.scale(&self.rational(c)?)),
            ExprKind::Bin(op, l, r) => {
                let (l, r) = (self.derivation(l)?, self.derivation(r)?);
                k(if *op == BinOp::Add { l.checked_add(&r) } else { l.checked_sub(&r) })
            }
            ExprKind::Call(f, args) => {
                let tangent_arg = |i: usize| -> SResult<&TangentAlgebra> { self.tangent(&self.name_of(&args[i])?) };
                match (f.text.as_str(), args.len()) {
                    ("d", 1) => Ok(tangent_arg(0)?.d().clone()),
                    ("iota", 2) => k(tangent_arg(0)?.contraction(&self.derivation(&args[1])?)),
                    ("lie", 2) => k(tangent_arg(0)?.lie_derivative(&self.derivation(&args[1])?)),
                    ("total", 2) => k(tangent_arg(0)?.total_differential(&self.derivation(&args[1])?)),
                    ("embed", 2) => k(tangent_arg(0)?.embed_derivation(&self.derivation(&args[1])?)),
                    ("bracket", 2) => k(commutator(&self.derivation(&args[0])?, &self.derivation(&args[1])?)),
                    ("derived", 3) => k(derived_bracket(
                        &self.derivation(&args[0])?,
                        &self.derivation(&args[1])?,
                        &self.derivation(&args[2])?,
                    )),
                    ("euler", 1) => Ok(Derivation::euler(&self.algebra(&self.name_of(&args[0])?)?)),
                    ("partial", 2) => {
                        let alg = self.algebra(&self.name_of(&args[0])?)?;
                        let g = self.name_of(&args[1])?;
                        let i = alg.find(&g.text).ok_or_else(|| {
                            SemanticError::new(g.span, SemanticKind::UnknownName, format!("no generator `{}`", g.text))
                        })?;
                        Ok(Derivation::partial(&alg, i))
                    }
                    ("hamiltonian", 2) => {
                        let w = self.symplectic(&self.name_of(&args[0])?)?;
                        k(w.hamiltonian_vf(&self.poly(&args[1], w.tangent().base())?))
                    }
                    ("weil", 1) => Ok(self.algebroid(&self.name_of(&args[0])?)?.q_weil().clone()),
                    ("cartan", 1) => Ok(self.algebroid(&self.name_of(&args[0])?)?.q_cartan().clone()),
                    ("conjugate", 2) => {
                        k(self.algebroid(&self.name_of(&args[0])?)?.conjugate(&self.derivation(&args[1])?))
                    }
                    _ => Err(SemanticError::new(
                        f.span,
                        SemanticKind::UnknownName,
                        format!("unknown derivation function `{}` with {} argument(s)", f.text, args.len()),
                    )),
                }
            }
            _ => Err(SemanticError::new(e.span, SemanticKind::TypeMismatch, "expected a derivation")),
        }
    }

    fn ordinals(&self, alg: &GradedAlgebra, names: &[Name]) -> SResult<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                alg.find(&n.text).ok_or_else(|| {
                    SemanticError::new(n.span, SemanticKind::UnknownName, format!("no generator `{}`", n.text))
                })
            })
            .collect()
    }

    /// Images keyed by generator of `keys`, each checked for degree
    /// `|key| + shift` before anything reaches the kernel.
    fn images(
        &self,
        keys: &GradedAlgebra,
        ctx: &GradedAlgebra,
        shift: i64,
        images: &[(Name, Expr)],
    ) -> SResult<Vec<(String, Polynomial)>> {
        let mut out: Vec<(String, Polynomial)> = Vec::new();
        for (n, e) in images {
            let i = keys.find(&n.text).ok_or_else(|| {
                SemanticError::new(n.span, SemanticKind::UnknownName, format!("no generator `{}`", n.text))
            })?;
            if out.iter().any(|(m, _)| *m == n.text) {
                return Err(SemanticError::new(n.span, SemanticKind::DuplicateName, format!("`{}` given twice", n.text)));
            }
            let p = self.poly(e, ctx)?;
            let want = keys.degree(i) as i64 + shift;
            match p.degree() {
                Ok(None) => {}
                Ok(Some(d)) if d as i64 == want => {}
                Ok(Some(d)) => {
                    return Err(SemanticError::new(
                        e.span,
                        SemanticKind::DegreeMismatch,
                        format!("image of `{}` must have degree {want}, got {d}", n.text),
                    ))
                }
                Err(_) => {
                    return Err(SemanticError::new(
                        e.span,
                        SemanticKind::DegreeMismatch,
                        format!("image of `{}` is not homogeneous", n.text),
                    ))
                }
            }
            out.push((n.text.clone(), p));
        }
        Ok(out)
    }

    /// Elaborates one statement; commands come back as deferred jobs.
    pub fn statement(&mut self, st: &Stmt) -> SResult<Option<Job>> {
        match st {
            Stmt::Comment(_) => Ok(None),
            Stmt::Command { verb, args, span } => Job::prepare(self, verb, args, *span, st).map(Some),
            Stmt::Decl { name, decl, span } => {
                let v = self.declaration(decl, *span)?;
                self.define(name, v)?;
                Ok(None)
            }
        }
    }

    fn declaration(&mut self, decl: &Decl, span: Span) -> SResult<Value> {
        let k = |e: crate::Error| SemanticError::kernel(span, e);
        Ok(match decl {
            Decl::Algebra { gens } => {
                Value::Algebra(GradedAlgebra::new(gens.iter().map(|(n, d)| (n.text.clone(), *d))).map_err(k)?)
            }
            Decl::Tangent { of } => Value::Tangent(shift_tangent(&self.algebra(of)?)),
            Decl::Lie { body } => Value::Lie(match body {
                LieBody::Builtin(n) => match n.text.as_str() {
                    "su2" => StructureConstants::su2(),
                    "heisenberg" => StructureConstants::heisenberg(),
                    _ => {
                        return Err(SemanticError::new(
                            n.span,
                            SemanticKind::UnknownName,
                            format!("no built-in Lie algebra `{}` (have su2, heisenberg)", n.text),
                        ))
                    }
                },
                LieBody::Dim(d) => StructureConstants::zero(*d),
                LieBody::File(f) => {
                    let path = match &self.base_dir {
                        Some(dir) => dir.join(f),
                        None => PathBuf::from(f),
                    };
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        SemanticError::new(span, SemanticKind::Io, format!("cannot read {}: {e}", path.display()))
                    })?;
                    StructureConstants::parse(&text).map_err(k)?
                }
                LieBody::Table(dim, entries) => {
                    let mut zero_based = Vec::new();
                    for (a, b, c, v) in entries {
                        if [a, b, c].iter().any(|&&i| i == 0 || i > *dim) {
                            return Err(SemanticError::new(
                                span,
                                SemanticKind::InvalidArgument,
                                format!("index out of range 1..={dim} in entry {a} {b} {c}"),
                            ));
                        }
                        zero_based.push((a - 1, b - 1, c - 1, v.clone()));
                    }
                    StructureConstants::from_entries(*dim, &zero_based).map_err(k)?
                }
            }),
            Decl::Ce { on, lie } => {
                let alg = self.algebra(on)?;
                let c = self.lie(lie)?;
                if alg.len() != c.dim() {
                    return Err(SemanticError::new(
                        lie.span,
                        SemanticKind::InvalidArgument,
                        format!("`{}` has {} generators but the Lie algebra has dimension {}", on.text, alg.len(), c.dim()),
                    ));
                }
                Value::Derivation(ce_differential(&alg, &(0..alg.len()).collect::<Vec<_>>(), c).map_err(k)?)
            }
            Decl::Derivation { on, degree, images } => {
                let alg = self.algebra(on)?;
                let named = self.images(&alg, &alg, *degree, images)?;
                let named: Vec<(&str, Polynomial)> = named.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
                let deg = i32::try_from(*degree).map_err(|_| SemanticError::new(span, SemanticKind::DegreeMismatch, "degree out of range"))?;
                Value::Derivation(Derivation::from_named(&alg, deg, &named).map_err(k)?)
            }
            Decl::DerivationExpr { value } => Value::Derivation(self.derivation(value)?),
            Decl::Morphism { from, to, images } => {
                let (keys, ctx) = (self.algebra(from)?, self.algebra(to)?);
                let named = self.images(&keys, &ctx, 0, images)?;
                let named: Vec<(&str, Polynomial)> = named.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
                Value::Morphism(Morphism::from_named(&ctx, &keys, &named).map_err(k)?)
            }
            Decl::Form { within, value } => Value::Form(self.poly(value, &self.algebra(within)?)?),
            Decl::Invariant { rank, dim, entries } => {
                let mut zero_based = Vec::new();
                for (idx, v) in entries {
                    if idx.len() != *rank || idx.iter().any(|&i| i == 0 || i > *dim) {
                        return Err(SemanticError::new(
                            span,
                            SemanticKind::InvalidArgument,
                            format!("entry {idx:?} needs {rank} indices in 1..={dim}"),
                        ));
                    }
                    zero_based.push((idx.iter().map(|i| i - 1).collect(), v.clone()));
                }
                Value::Invariant(InvariantPolynomial::new(*rank, *dim, &zero_based).map_err(k)?)
            }
            Decl::BasicForm { inv, tangent, gens } => {
                let t = self.tangent(tangent)?;
                let ords = self.ordinals(t.base(), gens)?;
                Value::Form(invariant_to_basic_form(self.invariant(inv)?, t, &ords).map_err(k)?)
            }
            Decl::Holonomy { within, gens } => {
                let alg = self.algebra(within)?;
                let ords = self.ordinals(&alg, gens)?;
                Value::Holonomy(HolonomyGenerators::coordinate(&alg, &ords).map_err(k)?)
            }
            Decl::Bundle { base, fiber, tangent } => {
                let (qb, qf) = (self.derivation(base)?, self.derivation(fiber)?);
                let t = self.tangent(tangent)?;
                Value::Bundle(TrivialBundle::with_fiber_tangent(&qb, &qf, t).map_err(k)?)
            }
            Decl::Symplectic { on, degree, value } => {
                let t = self.tangent(on)?;
                let p = u32::try_from(*degree)
                    .map_err(|_| SemanticError::new(span, SemanticKind::DegreeMismatch, "symplectic degree must be positive"))?;
                Value::Symplectic(SymplecticStructure::new(t, p, self.poly(value, t.full())?).map_err(k)?)
            }
            Decl::Action { lie, on, fields, ghosts } => {
                let c = self.lie(lie)?.clone();
                let m = self.algebra(on)?;
                let rho = fields.iter().map(|f| Ok(self.derivation_value(f)?.clone())).collect::<SResult<Vec<_>>>()?;
                Value::Action(
                    LieAction::new(c, &m, rho, ghosts.iter().map(|g| g.text.clone()).collect()).map_err(k)?,
                )
            }
            Decl::Algebroid { action, q, tangent, mtangent } => {
                let e = action_algebroid(self.action(action)?).map_err(k)?;
                self.define(q, Value::Derivation(e.q().clone()))?;
                self.define(tangent, Value::Tangent(e.tangent().clone()))?;
                self.define(mtangent, Value::Tangent(e.tangent_m().clone()))?;
                Value::Algebroid(e)
            }
        })
    }
}
