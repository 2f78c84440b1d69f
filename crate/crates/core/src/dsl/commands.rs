//! Command elaboration (argument checking) and deferred execution.

use std::time::Instant;

use super::ast::{Expr, Name, Span, Stmt};
use super::eval::{Env, SResult};
use super::fmt::format_stmt;
use super::report::{Output, Record, Status};
use super::{SemanticError, SemanticKind};
use crate::cert::Certificate;
use crate::charclass::{char_form, check_trivial_class, gauge_variation_check, is_basic, lecomte_char, transgress};
use crate::derivation::check_nilpotent;
use crate::equivariant::wz_gauging_check;
use crate::graded::{int, sign, Rational};
use crate::pq::aksz_integrand;
use crate::tangent::{check_chain_property, field_strength_morphism, resolve_flow_sign, shift_tangent};
use crate::Error;

#[derive(Default)]
pub struct Outcome {
    status: Option<Status>,
    witness: Option<String>,
    residual: Option<String>,
    outputs: Vec<Output>,
    message: Option<String>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome { status: Some(Status::Pass), ..Default::default() }
    }

    fn error(e: Error) -> Self {
        Outcome { status: Some(Status::Error), message: Some(e.to_string()), ..Default::default() }
    }

    fn cert(c: &Certificate) -> Self {
        let mut o = Outcome::pass();
        o.absorb(c);
        o
    }

    /// Keeps the first failure's witness.
    fn absorb(&mut self, c: &Certificate) {
        if !c.passed() && self.status != Some(Status::Fail) {
            self.status = Some(Status::Fail);
            self.witness = Some(match &c.witness {
                Some(w) => format!("{}: {w}", c.check),
                None => c.check.clone(),
            });
            self.residual = c.residual.clone();
        }
    }

    fn fail(witness: impl Into<String>, residual: Option<String>) -> Self {
        Outcome { status: Some(Status::Fail), witness: Some(witness.into()), residual, ..Default::default() }
    }

    fn output(mut self, name: &str, value: impl ToString) -> Self {
        self.outputs.push(Output { name: name.to_string(), value: value.to_string() });
        self
    }
}

fn run_result(r: crate::Result<Outcome>) -> Outcome {
    r.unwrap_or_else(Outcome::error)
}

type Thunk = Box<dyn FnOnce() -> crate::Result<Outcome>>;

pub struct Job {
    line: usize,
    command: String,
    thunk: Thunk,
}

fn arity(verb: &str, span: Span, args: &[Expr], n: usize) -> SResult<()> {
    if args.len() != n {
        return Err(SemanticError::new(
            span,
            SemanticKind::InvalidArgument,
            format!("`{verb}` takes {n} argument(s), got {}", args.len()),
        ));
    }
    Ok(())
}

impl Job {
    pub fn execute(self, timing: bool) -> Record {
        let start = Instant::now();
        let o = run_result((self.thunk)());
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        Record {
            line: self.line,
            command: self.command,
            status: o.status.unwrap_or(Status::Pass),
            witness: o.witness,
            residual: o.residual,
            outputs: o.outputs,
            message: o.message,
            timing_ms: timing.then_some(elapsed),
        }
    }

    pub fn prepare(env: &Env, verb: &[Name], args: &[Expr], span: Span, stmt: &Stmt) -> SResult<Job> {
        let verb_text = verb.iter().map(|v| v.text.as_str()).collect::<Vec<_>>().join(" ");
        let vspan = verb.last().map(|v| v.span).unwrap_or(span);
        let name = |i: usize| env.name_of(&args[i]);
        let thunk: Thunk = match verb_text.as_str() {
            "check nilpotent" => {
                arity(&verb_text, vspan, args, 1)?;
                let q = env.derivation(&args[0])?;
                Box::new(move || Ok(Outcome::cert(&check_nilpotent(&q)?)))
            }
            "check chain" => {
                arity(&verb_text, vspan, args, 4)?;
                let phi = env.morphism(&name(0)?)?.clone();
                let (q1, q2) = (env.derivation(&args[1])?, env.derivation(&args[2])?);
                let t2 = env.tangent(&name(3)?)?.clone();
                Box::new(move || {
                    let fstar = field_strength_morphism(&phi, &q1, &q2, &t2)?;
                    let qt = t2.total_differential(&q2)?;
                    let mut o = Outcome::cert(&check_chain_property(&fstar, &q1, &qt)?);
                    for i in 0..t2.base().len() {
                        let g = t2.full().generator(t2.diff_ordinal(i)).name.clone();
                        o = o.output(&format!("f*({g})"), fstar.image(t2.diff_ordinal(i)));
                    }
                    Ok(o)
                })
            }
            "check twist" => {
                arity(&verb_text, vspan, args, 2)?;
                let t = env.tangent(&name(0)?)?.clone();
                let q = env.derivation(&args[1])?;
                Box::new(move || Ok(Outcome::cert(&t.check_twist(&q)?)))
            }
            "check equal" => {
                arity(&verb_text, vspan, args, 3)?;
                let alg = env.algebra(&name(0)?)?;
                let (a, b) = (env.poly(&args[1], &alg)?, env.poly(&args[2], &alg)?);
                Box::new(move || {
                    let r = &a - &b;
                    Ok(if r.is_zero() { Outcome::pass().output("value", a) } else { Outcome::fail("lhs - rhs", Some(r.to_string())) })
                })
            }
            "check zero" => {
                arity(&verb_text, vspan, args, 2)?;
                let alg = env.algebra(&name(0)?)?;
                let a = env.poly(&args[1], &alg)?;
                Box::new(move || Ok(if a.is_zero() { Outcome::pass() } else { Outcome::fail("value", Some(a.to_string())) }))
            }
            "check same" => {
                arity(&verb_text, vspan, args, 2)?;
                let (x, y) = (env.derivation(&args[0])?, env.derivation(&args[1])?);
                Box::new(move || {
                    if x.source() != y.source() || x.target() != y.target() {
                        return Err(Error::AlgebraMismatch);
                    }
                    let alg = x.source().clone();
                    let res = (0..alg.len())
                        .map(|i| (format!("difference on {}", alg.generator(i).name), x.image(i) - y.image(i)));
                    let mut c = Certificate::from_residuals("same derivation", res);
                    if x.degree() != y.degree() && !(x.is_zero() && y.is_zero()) {
                        c = Certificate::fail("same derivation", "degree", &alg.zero());
                    }
                    Ok(Outcome::cert(&c))
                })
            }
            "check basic" => {
                arity(&verb_text, vspan, args, 4)?;
                let t = env.tangent(&name(3)?)?.clone();
                let omega = env.poly(&args[0], t.full())?;
                let g = env.holonomy(&name(1)?)?.clone();
                let q = env.derivation(&args[2])?;
                Box::new(move || Ok(Outcome::cert(&is_basic(&omega, &g, &q, &t)?)))
            }
            "check jacobi" => {
                arity(&verb_text, vspan, args, 1)?;
                let c = env.lie(&name(0)?)?.clone();
                Box::new(move || {
                    Ok(match c.jacobi_violation() {
                        None => Outcome::pass(),
                        Some((a, b, cc, d)) => Outcome::fail(
                            format!("Jacobi(e{}, e{}, e{}) component {}", a + 1, b + 1, cc + 1, d + 1),
                            None,
                        ),
                    })
                })
            }
            "check homomorphism" => {
                arity(&verb_text, vspan, args, 1)?;
                let a = env.action(&name(0)?)?.clone();
                Box::new(move || Ok(Outcome::cert(&a.check_homomorphism()?)))
            }
            "check conjugation" => {
                arity(&verb_text, vspan, args, 1)?;
                let e = env.algebroid(&name(0)?)?.clone();
                Box::new(move || {
                    let mut o = Outcome::cert(&e.weil_cartan_conjugation()?);
                    let n = e.action().lie_algebra().dim();
                    for a in 0..n {
                        let eps: Vec<Rational> = (0..n).map(|b| int((a == b) as i64)).collect();
                        for c in e.check_generator_conjugation(&eps)? {
                            o.absorb(&c);
                        }
                    }
                    Ok(o)
                })
            }
            "check cartan" => {
                arity(&verb_text, vspan, args, 2)?;
                let e = env.algebroid(&name(0)?)?.clone();
                let eta = env.poly(&args[1], e.tangent().full())?;
                Box::new(move || {
                    let (c, in_cartan) = e.cartan_basic_check(&eta)?;
                    let mut o = Outcome::cert(&c).output("cartan", in_cartan);
                    let qc = e.q_cartan().apply(&eta)?;
                    if !qc.is_zero() {
                        o.absorb(&Certificate::fail("cartan closed", "Q_C(eta)", &qc));
                    }
                    Ok(o)
                })
            }
            "check pq" => {
                arity(&verb_text, vspan, args, 2)?;
                let w = env.symplectic(&name(0)?)?.clone();
                let q = env.derivation(&args[1])?;
                Box::new(move || {
                    let data = match w.hamiltonian_data(&q) {
                        Ok(d) => d,
                        Err(e @ (Error::MasterEquationFailed(_) | Error::NotNilpotent(_) | Error::NotCompatible(_))) => {
                            return Ok(Outcome::fail(e.to_string(), None))
                        }
                        Err(e) => return Err(e),
                    };
                    let t = w.tangent();
                    let p = w.degree() as i64;
                    let l_xi = t.lie_derivative(&crate::Derivation::euler(t.base()))?.apply(w.omega())?;
                    let iq = t.contraction(&q)?.apply(w.omega())?;
                    let dh = t.d().apply(&t.embed(&data.hamiltonian)?)?.scale(&sign(p));
                    let qt = t.total_differential(&q)?;
                    let c = Certificate::from_residuals(
                        "pq",
                        [
                            ("d alpha - omega".to_string(), &t.d().apply(&data.alpha)? - w.omega()),
                            ("L_xi omega - p omega".to_string(), &l_xi - &w.omega().scale(&int(p))),
                            ("iota_Q omega - (-1)^p dH".to_string(), &iq - &dh),
                            ("{H,H}".to_string(), w.poisson_bracket(&data.hamiltonian, &data.hamiltonian)?),
                            ("Q_T(alpha_hat) - omega".to_string(), &qt.apply(&data.alpha_hat)? - w.omega()),
                        ],
                    );
                    Ok(Outcome::cert(&c)
                        .output("hamiltonian", &data.hamiltonian)
                        .output("alpha", &data.alpha)
                        .output("alpha_hat", &data.alpha_hat))
                })
            }
            "check trivialclass" => {
                arity(&verb_text, vspan, args, 4)?;
                let b = env.bundle(&name(0)?)?.clone();
                let phi = env.morphism(&name(1)?)?.clone();
                let eta = env.poly(&args[2], b.t_fiber().full())?;
                let g = env.holonomy(&name(3)?)?.clone();
                Box::new(move || Ok(Outcome::cert(&check_trivial_class(&b, &phi, &eta, &g)?)))
            }
            "char" => {
                arity(&verb_text, vspan, args, 4)?;
                let b = env.bundle(&name(0)?)?.clone();
                let phi = env.morphism(&name(1)?)?.clone();
                let omega = env.poly(&args[2], b.t_fiber().full())?;
                let g = env.holonomy(&name(3)?)?.clone();
                Box::new(move || Ok(Outcome::pass().output("char", char_form(&b, &phi, &omega, &g)?)))
            }
            "gauge" => {
                arity(&verb_text, vspan, args, 4)?;
                let b = env.bundle(&name(0)?)?.clone();
                let phi = env.morphism(&name(1)?)?.clone();
                let y = env.derivation(&args[2])?;
                let omega = env.poly(&args[3], b.t_fiber().full())?;
                Box::new(move || Ok(Outcome::cert(&gauge_variation_check(&b, &phi, &y, &omega)?)))
            }
            "transgress" => {
                arity(&verb_text, vspan, args, 5)?;
                let b = env.bundle(&name(0)?)?.clone();
                let phi0 = env.morphism(&name(1)?)?.clone();
                let phi1 = env.morphism(&name(2)?)?.clone();
                let omega = env.poly(&args[3], b.t_fiber().full())?;
                let g = env.holonomy(&name(4)?)?.clone();
                Box::new(move || {
                    let tr = transgress(&b, &phi0, &phi1, &omega, &g, None)?;
                    Ok(Outcome::pass()
                        .output("difference", &tr.difference)
                        .output("primitive", &tr.primitive)
                        .output("beta", &tr.beta))
                })
            }
            "aksz" => {
                arity(&verb_text, vspan, args, 4)?;
                let w = env.symplectic(&name(0)?)?.clone();
                let q = env.derivation(&args[1])?;
                let phi = env.morphism(&name(2)?)?.clone();
                let base = env.tangent(&name(3)?)?.clone();
                Box::new(move || {
                    let a = aksz_integrand(&w, &q, &phi, &base)?;
                    Ok(Outcome::pass().output("lagrangian", &a.lagrangian).output("fstar_omega", &a.fstar_omega))
                })
            }
            "lecomte" => {
                arity(&verb_text, vspan, args, 4)?;
                let c = env.lie(&name(0)?)?.clone();
                let inv = env.invariant(&name(1)?)?.clone();
                let (ideal, split) = (env.vectors(&args[2])?, env.vectors(&args[3])?);
                Box::new(move || {
                    let l = lecomte_char(&c, &ideal, &split, &inv)?;
                    let o = if l.closed { Outcome::pass() } else { Outcome::fail("Q_g0(cochain) != 0", None) };
                    Ok(o.output("cochain", &l.cochain).output("q_g0", derivation_text(&l.q_g0)))
                })
            }
            "wz" => {
                arity(&verb_text, vspan, args, 6)?;
                let e = env.algebroid(&name(0)?)?.clone();
                let h = env.poly(&args[1], e.tangent_m().full())?;
                let h_hat = env.poly(&args[2], e.tangent().full())?;
                let phi = env.morphism(&name(3)?)?.clone();
                let base = env.tangent(&name(4)?)?.clone();
                let params = match &args[5].kind {
                    super::ast::ExprKind::List(items) => {
                        items.iter().map(|it| env.poly(it, base.full())).collect::<SResult<Vec<_>>>()?
                    }
                    _ => {
                        return Err(SemanticError::new(args[5].span, SemanticKind::TypeMismatch, "expected a list of gauge parameters"))
                    }
                };
                Box::new(move || {
                    let r = wz_gauging_check(&e, &h, &h_hat, &phi, &base, &params)?;
                    let mut o = Outcome::pass();
                    for c in [&r.non_invariance, &r.closed, &r.gauge_invariance] {
                        o.absorb(c);
                    }
                    if let Some(c) = &r.exactness {
                        o.absorb(c);
                    }
                    o = o.output("variation", &r.variation).output("gauged", &r.gauged).output("ungauged", &r.ungauged);
                    o = match &r.primitive {
                        Some(p) => o.output("primitive", p),
                        None => o.output("exactness", "closed, exactness unverified"),
                    };
                    Ok(o)
                })
            }
            "flowsign" => {
                arity(&verb_text, vspan, args, 4)?;
                let phi = env.morphism(&name(0)?)?.clone();
                let (q1, q2) = (env.derivation(&args[1])?, env.derivation(&args[2])?);
                let t2 = env.tangent(&name(3)?)?.clone();
                Box::new(move || {
                    let t1 = shift_tangent(phi.source());
                    Ok(Outcome::pass().output("sigma", resolve_flow_sign(&phi, &q1, &q2, &t1, &t2)?))
                })
            }
            "eval" => {
                arity(&verb_text, vspan, args, 2)?;
                let alg = env.algebra(&name(0)?)?;
                let p = env.poly(&args[1], &alg)?;
                Box::new(move || Ok(Outcome::pass().output("value", p)))
            }
            _ => {
                return Err(SemanticError::new(vspan, SemanticKind::UnknownName, format!("unknown command `{verb_text}`")));
            }
        };
        Ok(Job { line: span.line, command: format_stmt(stmt), thunk })
    }
}

/// `x -> image; ...` rendering of a derivation.
pub fn derivation_text(d: &crate::Derivation) -> String {
    let src = d.source();
    if d.is_zero() {
        return "0".into();
    }
    (0..src.len())
        .filter(|&i| !d.image(i).is_zero())
        .map(|i| format!("{} -> {}", src.generator(i).name, d.image(i)))
        .collect::<Vec<_>>()
        .join("; ")
}
