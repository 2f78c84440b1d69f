//! Syntax tree. Spans do not take part in equality, so a reparsed script
//! compares equal to the original.

use num_bigint::BigInt;

use crate::graded::Rational;

#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Unsigned literal `n` or `n/m`.
    Num(BigInt, Option<BigInt>),
    Name(String),
    Call(Name, Vec<Expr>),
    List(Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LieBody {
    Builtin(Name),
    Dim(usize),
    File(String),
    Table(usize, Vec<(usize, usize, usize, Rational)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decl {
    Algebra { gens: Vec<(Name, i64)> },
    Tangent { of: Name },
    Lie { body: LieBody },
    Ce { on: Name, lie: Name },
    Derivation { on: Name, degree: i64, images: Vec<(Name, Expr)> },
    DerivationExpr { value: Expr },
    Morphism { from: Name, to: Name, images: Vec<(Name, Expr)> },
    Form { within: Name, value: Expr },
    Invariant { rank: usize, dim: usize, entries: Vec<(Vec<usize>, Rational)> },
    BasicForm { inv: Name, tangent: Name, gens: Vec<Name> },
    Holonomy { within: Name, gens: Vec<Name> },
    Bundle { base: Expr, fiber: Expr, tangent: Name },
    Symplectic { on: Name, degree: i64, value: Expr },
    Action { lie: Name, on: Name, fields: Vec<Name>, ghosts: Vec<Name> },
    Algebroid { action: Name, q: Name, tangent: Name, mtangent: Name },
}

impl Decl {
    pub fn keyword(&self) -> &'static str {
        match self {
            Decl::Algebra { .. } => "algebra",
            Decl::Tangent { .. } => "tangent",
            Decl::Lie { .. } => "lie",
            Decl::Ce { .. } => "ce",
            Decl::Derivation { .. } | Decl::DerivationExpr { .. } => "derivation",
            Decl::Morphism { .. } => "morphism",
            Decl::Form { .. } => "form",
            Decl::Invariant { .. } => "invariant",
            Decl::BasicForm { .. } => "basicform",
            Decl::Holonomy { .. } => "holonomy",
            Decl::Bundle { .. } => "bundle",
            Decl::Symplectic { .. } => "symplectic",
            Decl::Action { .. } => "action",
            Decl::Algebroid { .. } => "algebroid",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Comment(String),
    Decl { name: Name, decl: Decl, span: Span },
    /// `check nilpotent Q` has verb `check nilpotent`; `char B, ...` has verb `char`.
    Command { verb: Vec<Name>, args: Vec<Expr>, span: Span },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

impl Script {
    pub fn commands(&self) -> usize {
        self.stmts.iter().filter(|s| matches!(s, Stmt::Command { .. })).count()
    }
}
