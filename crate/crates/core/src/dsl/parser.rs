//! Recursive-descent parser.

use num_bigint::BigInt;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::graded::Rational;

pub const COMMAND_VERBS: &[&str] = &["check", "char", "gauge", "transgress", "aksz", "lecomte", "wz", "eval", "flowsign"];
pub const DECL_KEYWORDS: &[&str] = &[
    "algebra",
    "tangent",
    "lie",
    "ce",
    "derivation",
    "morphism",
    "form",
    "invariant",
    "basicform",
    "holonomy",
    "bundle",
    "symplectic",
    "action",
    "algebroid",
];

pub fn parse(src: &str) -> Result<Script, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    p.script()
}

/// Parses a single expression, e.g. a polynomial in canonical text.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    while matches!(p.peek(), Tok::Newline) {
        p.bump();
    }
    if !matches!(p.peek(), Tok::Eof) {
        return Err(p.error(&["end of input", "operator"]));
    }
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::new(self.span(), expected.iter().map(|s| s.to_string()).collect(), self.peek().describe())
    }

    fn expect(&mut self, t: Tok) -> Result<Span, ParseError> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[&format!("`{}`", t.symbol())]))
        }
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{kw}`")])),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn natural(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => match s.parse() {
                Ok(n) => {
                    self.bump();
                    Ok(n)
                }
                Err(_) => Err(self.error(&["small integer"])),
            },
            _ => Err(self.error(&["integer"])),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = if matches!(self.peek(), Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let n = self.natural()? as i64;
        Ok(if neg { -n } else { n })
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = if matches!(self.peek(), Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let (num, den) = self.unsigned_rational()?;
        let r = Rational::new(num, den.unwrap_or_else(|| BigInt::from(1)));
        Ok(if neg { -r } else { r })
    }

    fn unsigned_rational(&mut self) -> Result<(BigInt, Option<BigInt>), ParseError> {
        let num = match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                s.parse::<BigInt>().expect("digits")
            }
            _ => return Err(self.error(&["number"])),
        };
        if matches!(self.peek(), Tok::Slash) {
            self.bump();
            match self.peek().clone() {
                Tok::Num(s) => {
                    let den: BigInt = s.parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(self.error(&["nonzero denominator"]));
                    }
                    self.bump();
                    return Ok((num, Some(den)));
                }
                _ => return Err(self.error(&["denominator"])),
            }
        }
        Ok((num, None))
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::Comment(_)) {
            self.bump();
        }
    }

    /// `{ entry (sep entry)* }` with newlines, `;` and comments as separators.
    fn block<T>(&mut self, mut entry: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            if matches!(self.peek(), Tok::RBrace) {
                self.bump();
                return Ok(out);
            }
            if matches!(self.peek(), Tok::Eof) {
                return Err(self.error(&["`}`"]));
            }
            out.push(entry(self)?);
        }
    }

    fn paren_names(&mut self) -> Result<Vec<Name>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if !matches!(self.peek(), Tok::RParen) {
            out.push(self.ident()?);
            while matches!(self.peek(), Tok::Comma) {
                self.bump();
                out.push(self.ident()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn script(&mut self) -> Result<Script, ParseError> {
        let mut stmts = Vec::new();
        loop {
            while matches!(self.peek(), Tok::Newline | Tok::Semi) {
                self.bump();
            }
            match self.peek().clone() {
                Tok::Eof => return Ok(Script { stmts }),
                Tok::Comment(c) => {
                    self.bump();
                    stmts.push(Stmt::Comment(c));
                    continue;
                }
                _ => {}
            }
            stmts.push(self.statement()?);
            match self.peek() {
                Tok::Newline | Tok::Semi | Tok::Eof | Tok::Comment(_) => {}
                _ => return Err(self.error(&["end of statement"])),
            }
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let span = self.span();
        let head = match self.peek().clone() {
            Tok::Ident(s) => s,
            _ => return Err(self.error(&["declaration", "command"])),
        };
        if COMMAND_VERBS.contains(&head.as_str()) {
            let mut verb = vec![self.ident()?];
            if head == "check" {
                verb.push(self.ident()?);
            }
            let mut args = Vec::new();
            if !matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::Eof | Tok::Comment(_)) {
                args.push(self.expr()?);
                while matches!(self.peek(), Tok::Comma) {
                    self.bump();
                    args.push(self.expr()?);
                }
            }
            return Ok(Stmt::Command { verb, args, span });
        }
        if !DECL_KEYWORDS.contains(&head.as_str()) {
            let mut expected: Vec<&str> = DECL_KEYWORDS.to_vec();
            expected.extend(COMMAND_VERBS);
            return Err(self.error(&expected));
        }
        self.bump();
        let name = self.ident()?;
        let decl = match head.as_str() {
            "algebra" => Decl::Algebra {
                gens: self.block(|p| {
                    let n = p.ident()?;
                    p.expect(Tok::Colon)?;
                    Ok((n, p.integer()?))
                })?,
            },
            "tangent" => {
                self.keyword("of")?;
                Decl::Tangent { of: self.ident()? }
            }
            "lie" => Decl::Lie { body: self.lie_body()? },
            "ce" => {
                self.keyword("on")?;
                let on = self.ident()?;
                self.keyword("lie")?;
                Decl::Ce { on, lie: self.ident()? }
            }
            "derivation" => {
                if matches!(self.peek(), Tok::Eq) {
                    self.bump();
                    Decl::DerivationExpr { value: self.expr()? }
                } else {
                    self.keyword("on")?;
                    let on = self.ident()?;
                    self.keyword("degree")?;
                    let degree = self.integer()?;
                    Decl::Derivation { on, degree, images: self.block(Self::image)? }
                }
            }
            "morphism" => {
                self.keyword("from")?;
                let from = self.ident()?;
                self.keyword("to")?;
                let to = self.ident()?;
                Decl::Morphism { from, to, images: self.block(Self::image)? }
            }
            "form" => {
                self.keyword("in")?;
                let within = self.ident()?;
                self.expect(Tok::Eq)?;
                Decl::Form { within, value: self.expr()? }
            }
            "invariant" => {
                self.keyword("rank")?;
                let rank = self.natural()?;
                self.keyword("dim")?;
                let dim = self.natural()?;
                let entries = self.block(|p| {
                    let mut idx = vec![p.natural()?];
                    while !matches!(p.peek(), Tok::Colon) {
                        idx.push(p.natural().map_err(|_| p.error(&["index", "`:`"]))?);
                    }
                    p.bump();
                    Ok((idx, p.rational()?))
                })?;
                Decl::Invariant { rank, dim, entries }
            }
            "basicform" => {
                self.keyword("from")?;
                let inv = self.ident()?;
                self.keyword("in")?;
                let tangent = self.ident()?;
                Decl::BasicForm { inv, tangent, gens: self.block(Self::ident)? }
            }
            "holonomy" => {
                self.keyword("in")?;
                let within = self.ident()?;
                Decl::Holonomy { within, gens: self.block(Self::ident)? }
            }
            "bundle" => {
                self.keyword("base")?;
                let base = self.expr()?;
                self.keyword("fiber")?;
                let fiber = self.expr()?;
                self.keyword("tangent")?;
                Decl::Bundle { base, fiber, tangent: self.ident()? }
            }
            "symplectic" => {
                self.keyword("on")?;
                let on = self.ident()?;
                self.keyword("degree")?;
                let degree = self.integer()?;
                self.expect(Tok::Eq)?;
                Decl::Symplectic { on, degree, value: self.expr()? }
            }
            "action" => {
                self.keyword("lie")?;
                let lie = self.ident()?;
                self.keyword("on")?;
                let on = self.ident()?;
                self.keyword("fields")?;
                let fields = self.paren_names()?;
                self.keyword("ghosts")?;
                Decl::Action { lie, on, fields, ghosts: self.paren_names()? }
            }
            "algebroid" => {
                self.keyword("of")?;
                let action = self.ident()?;
                self.keyword("q")?;
                let q = self.ident()?;
                self.keyword("tangent")?;
                let tangent = self.ident()?;
                self.keyword("mtangent")?;
                Decl::Algebroid { action, q, tangent, mtangent: self.ident()? }
            }
            _ => unreachable!("keyword list and match arms agree"),
        };
        Ok(Stmt::Decl { name, decl, span })
    }

    fn image(&mut self) -> Result<(Name, Expr), ParseError> {
        let n = self.ident()?;
        self.expect(Tok::Arrow)?;
        Ok((n, self.expr()?))
    }

    fn lie_body(&mut self) -> Result<LieBody, ParseError> {
        if self.at_keyword("from") {
            self.bump();
            return match self.peek().clone() {
                Tok::Str(s) => {
                    self.bump();
                    Ok(LieBody::File(s))
                }
                _ => Err(self.error(&["file name string"])),
            };
        }
        if self.at_keyword("dim") {
            self.bump();
            let dim = self.natural()?;
            if !matches!(self.peek(), Tok::LBrace) {
                return Ok(LieBody::Dim(dim));
            }
            let entries = self.block(|p| {
                let a = p.natural()?;
                let b = p.natural()?;
                let c = p.natural()?;
                Ok((a, b, c, p.rational()?))
            })?;
            return Ok(LieBody::Table(dim, entries));
        }
        match self.peek() {
            Tok::Ident(_) => Ok(LieBody::Builtin(self.ident()?)),
            _ => Err(self.error(&["`from`", "`dim`", "built-in algebra name"])),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.term()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while matches!(self.peek(), Tok::Star) {
            let span = self.bump().span;
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            let span = self.bump().span;
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        let base = self.primary()?;
        if matches!(self.peek(), Tok::Caret) {
            let span = self.bump().span;
            let e = self.natural()?;
            let e = u32::try_from(e).map_err(|_| ParseError::new(span, vec!["exponent below 2^32".into()], e.to_string()))?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), span });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(_) => {
                let (n, d) = self.unsigned_rational()?;
                Ok(Expr { kind: ExprKind::Num(n, d), span })
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                if matches!(self.peek(), Tok::LParen) {
                    self.bump();
                    let args = self.list_until(Tok::RParen)?;
                    Ok(Expr { kind: ExprKind::Call(name, args), span })
                } else {
                    Ok(Expr { kind: ExprKind::Name(name.text), span })
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.bump();
                let items = self.list_until(Tok::RBracket)?;
                Ok(Expr { kind: ExprKind::List(items), span })
            }
            _ => Err(self.error(&["number", "identifier", "`(`", "`[`", "`-`"])),
        }
    }

    fn list_until(&mut self, close: Tok) -> Result<Vec<Expr>, ParseError> {
        let mut items = Vec::new();
        if *self.peek() != close {
            items.push(self.expr()?);
            while matches!(self.peek(), Tok::Comma) {
                self.bump();
                items.push(self.expr()?);
            }
        }
        self.expect(close)?;
        Ok(items)
    }
}
