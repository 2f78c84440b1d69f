//! Canonical script text. `parse(format(s)) == s` for every parsed script.

use std::fmt::Write;

use super::ast::*;

pub fn format_script(s: &Script) -> String {
    let mut out = String::new();
    for st in &s.stmts {
        out.push_str(&format_stmt(st));
        out.push('\n');
    }
    out
}

pub fn format_stmt(st: &Stmt) -> String {
    match st {
        Stmt::Comment(c) if c.is_empty() => "#".into(),
        Stmt::Comment(c) => format!("# {c}"),
        Stmt::Command { verb, args, .. } => {
            let mut s = verb.iter().map(|v| v.text.as_str()).collect::<Vec<_>>().join(" ");
            if !args.is_empty() {
                s.push(' ');
                s.push_str(&args.iter().map(format_expr).collect::<Vec<_>>().join(", "));
            }
            s
        }
        Stmt::Decl { name, decl, .. } => {
            let mut s = format!("{} {}", decl.keyword(), name.text);
            match decl {
                Decl::Algebra { gens } => {
                    let body: Vec<String> = gens.iter().map(|(n, d)| format!("{}:{d}", n.text)).collect();
                    write!(s, " {{ {} }}", body.join(" ")).unwrap();
                }
                Decl::Tangent { of } => write!(s, " of {}", of.text).unwrap(),
                Decl::Lie { body } => match body {
                    LieBody::Builtin(n) => write!(s, " {}", n.text).unwrap(),
                    LieBody::Dim(d) => write!(s, " dim {d}").unwrap(),
                    LieBody::File(f) => write!(s, " from {f:?}").unwrap(),
                    LieBody::Table(d, entries) => {
                        write!(s, " dim {d} {{").unwrap();
                        for (a, b, c, v) in entries {
                            write!(s, "\n  {a} {b} {c} {v}").unwrap();
                        }
                        s.push_str("\n}");
                    }
                },
                Decl::Ce { on, lie } => write!(s, " on {} lie {}", on.text, lie.text).unwrap(),
                Decl::Derivation { on, degree, images } => {
                    write!(s, " on {} degree {degree}", on.text).unwrap();
                    push_images(&mut s, images);
                }
                Decl::DerivationExpr { value } => write!(s, " = {}", format_expr(value)).unwrap(),
                Decl::Morphism { from, to, images } => {
                    write!(s, " from {} to {}", from.text, to.text).unwrap();
                    push_images(&mut s, images);
                }
                Decl::Form { within, value } => write!(s, " in {} = {}", within.text, format_expr(value)).unwrap(),
                Decl::Invariant { rank, dim, entries } => {
                    write!(s, " rank {rank} dim {dim} {{").unwrap();
                    for (idx, v) in entries {
                        let idx: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                        write!(s, "\n  {}: {v}", idx.join(" ")).unwrap();
                    }
                    s.push_str("\n}");
                }
                Decl::BasicForm { inv, tangent, gens } => {
                    write!(s, " from {} in {} {{ {} }}", inv.text, tangent.text, names(gens, " ")).unwrap()
                }
                Decl::Holonomy { within, gens } => write!(s, " in {} {{ {} }}", within.text, names(gens, " ")).unwrap(),
                Decl::Bundle { base, fiber, tangent } => write!(
                    s,
                    " base {} fiber {} tangent {}",
                    format_expr(base),
                    format_expr(fiber),
                    tangent.text
                )
                .unwrap(),
                Decl::Symplectic { on, degree, value } => {
                    write!(s, " on {} degree {degree} = {}", on.text, format_expr(value)).unwrap()
                }
                Decl::Action { lie, on, fields, ghosts } => write!(
                    s,
                    " lie {} on {} fields ({}) ghosts ({})",
                    lie.text,
                    on.text,
                    names(fields, ", "),
                    names(ghosts, ", ")
                )
                .unwrap(),
                Decl::Algebroid { action, q, tangent, mtangent } => write!(
                    s,
                    " of {} q {} tangent {} mtangent {}",
                    action.text, q.text, tangent.text, mtangent.text
                )
                .unwrap(),
            }
            s
        }
    }
}

fn names(ns: &[Name], sep: &str) -> String {
    ns.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(sep)
}

fn push_images(s: &mut String, images: &[(Name, Expr)]) {
    if images.is_empty() {
        s.push_str(" {}");
        return;
    }
    s.push_str(" {");
    for (n, e) in images {
        write!(s, "\n  {} -> {}", n.text, format_expr(e)).unwrap();
    }
    s.push_str("\n}");
}

// precedence: 1 sum, 2 product, 3 unary, 4 power base
fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprKind::Bin(BinOp::Mul, ..) => 2,
        ExprKind::Neg(_) | ExprKind::Pow(..) => 3,
        ExprKind::Num(_, Some(_)) => 3,
        _ => 4,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    let s = format_expr(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn format_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Num(n, None) => n.to_string(),
        ExprKind::Num(n, Some(d)) => format!("{n}/{d}"),
        ExprKind::Name(n) => n.clone(),
        ExprKind::Call(f, args) => {
            format!("{}({})", f.text, args.iter().map(format_expr).collect::<Vec<_>>().join(", "))
        }
        ExprKind::List(items) => format!("[{}]", items.iter().map(format_expr).collect::<Vec<_>>().join(", ")),
        ExprKind::Neg(x) => format!("-{}", wrap(x, 3)),
        ExprKind::Pow(b, k) => format!("{}^{k}", wrap(b, 4)),
        ExprKind::Bin(op, l, r) => match op {
            BinOp::Add => format!("{} + {}", wrap(l, 1), wrap(r, 2)),
            BinOp::Sub => format!("{} - {}", wrap(l, 1), wrap(r, 2)),
            BinOp::Mul => format!("{}*{}", wrap(l, 2), wrap(r, 3)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::{parse, parse_expr};
    use super::*;

    #[test]
    fn expression_round_trip() {
        for src in ["a - (b - c)", "-(a + b)", "(-a)^2", "(1/2)^3", "a*(b*c)", "-a*-b", "1/2*x^2 - d:x*y", "f(a, [1, 2])"] {
            let e = parse_expr(src).unwrap();
            let printed = format_expr(&e);
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }

    #[test]
    fn script_round_trip() {
        let src = "# header\nalgebra g { a:1 b:0 }; lie L dim 2 { 1 1 2 -1/2 }\nderivation X on g degree 1 { a -> a*b }\ncheck nilpotent X\n";
        let s = parse(src).unwrap();
        let t = format_script(&s);
        assert_eq!(parse(&t).unwrap(), s);
        assert_eq!(format_script(&parse(&t).unwrap()), t);
    }
}
