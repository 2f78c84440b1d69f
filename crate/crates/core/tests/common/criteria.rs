//! One function per acceptance criterion. Each returns a short summary on
//! success and a description of the first failure otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gq_core::charclass::{
    char_form, gauge_variation_check, invariant_to_basic_form, lecomte_char, transgress, HolonomyGenerators,
    InvariantPolynomial, TrivialBundle,
};
use gq_core::derivation::{check_nilpotent, Derivation, Morphism};
use gq_core::equivariant::{action_algebroid, wz_gauging_check, LieAction};
use gq_core::graded::{int, rat, sign, GradedAlgebra, Monomial, Polynomial, Rational};
use gq_core::lie::{ce_differential, StructureConstants};
use gq_core::pq::{aksz_integrand, SymplecticStructure};
use gq_core::tangent::{
    check_chain_property, field_strength_morphism, resolve_flow_sign, shift_tangent, TangentAlgebra,
};
use gq_core::Error;

use super::*;

pub type Outcome = Result<String, String>;

macro_rules! ensure {
    ($c:expr, $($m:tt)+) => {
        if !$c {
            return Err(format!($($m)+));
        }
    };
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

// ---------------------------------------------------------------- 1

type Words = Vec<(Rational, Vec<usize>)>;

fn random_words(rng: &mut ChaCha8Rng, n: usize) -> Words {
    let terms = rng.gen_range(0..=4);
    (0..terms)
        .map(|_| {
            let len = rng.gen_range(0..=3);
            let num = rng.gen_range(-3i64..=3);
            let den = rng.gen_range(1i64..=3);
            (rat(num, den), (0..len).map(|_| rng.gen_range(0..n)).collect())
        })
        .collect()
}

fn oracle_poly(alg: &GradedAlgebra, odd: &[bool], words: &Words) -> Polynomial {
    let mut p = Polynomial::zero(alg);
    for (c, w) in words {
        if let Some((s, sorted)) = koszul_sort_oracle(w, odd) {
            let (neg, m) = Monomial::from_word(&sorted, alg).expect("sorted word without repeats");
            assert!(!neg, "sorted word needs no swaps");
            p = &p + &Polynomial::term(alg, c * int(s), m);
        }
    }
    p
}

fn oracle_product(a: &Words, b: &Words) -> Words {
    let mut out = Vec::new();
    for (c1, w1) in a {
        for (c2, w2) in b {
            let mut w = w1.clone();
            w.extend(w2);
            out.push((c1 * c2, w));
        }
    }
    out
}

pub fn criterion_1() -> Outcome {
    let profiles: [(&str, [i64; 4]); 3] = [("even", [0, 0, 2, 4]), ("odd", [1, 1, 1, 3]), ("mixed", [0, 1, 2, 3])];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6f737a);
    let mut checked = 0;
    for (name, degs) in profiles {
        let alg = GradedAlgebra::new(degs.iter().enumerate().map(|(i, &d)| (format!("g{i}"), d))).unwrap();
        let odd: Vec<bool> = degs.iter().map(|d| d % 2 == 1).collect();
        for _ in 0..1000 {
            let (wa, wb, wc) = (random_words(&mut rng, 4), random_words(&mut rng, 4), random_words(&mut rng, 4));
            let a = Polynomial::from_words(&alg, &wa);
            let b = Polynomial::from_words(&alg, &wb);
            let c = Polynomial::from_words(&alg, &wc);
            ensure!(a == oracle_poly(&alg, &odd, &wa), "{name}: normal form of {a} disagrees with sorting oracle");
            let ab = &a * &b;
            ensure!(ab == oracle_poly(&alg, &odd, &oracle_product(&wa, &wb)), "{name}: product {a} * {b}");
            ensure!(&ab * &c == &a * &(&b * &c), "{name}: associativity fails for {a}, {b}, {c}");
            for da in 0..=12 {
                let ai = a.homogeneous_component(da);
                if ai.is_zero() {
                    continue;
                }
                for db in 0..=12 {
                    let bj = b.homogeneous_component(db);
                    if bj.is_zero() {
                        continue;
                    }
                    let s = sign(da as i64 * db as i64);
                    ensure!(&ai * &bj == (&bj * &ai).scale(&s), "{name}: graded commutativity fails for {ai}, {bj}");
                }
            }
            ensure!(ab.normalized() == ab && ab.normalized().normalized() == ab.normalized(), "{name}: renormalization changed {ab}");
            ensure!(&a * &alg.one() == a && &(&a + &b) - &b == a, "{name}: unit or additive inverse fails for {a}");
            checked += 1;
        }
    }
    Ok(format!("{checked} randomized triples over 3 grading profiles"))
}

// ---------------------------------------------------------------- 2

fn nilpotent_iff_jacobi(c: &StructureConstants) -> Result<bool, String> {
    let n = c.dim();
    let alg = GradedAlgebra::new((1..=n).map(|i| (format!("c{i}"), 1))).unwrap();
    let q = ce_differential(&alg, &(0..n).collect::<Vec<_>>(), c).map_err(e)?;
    let nil = check_nilpotent(&q).map_err(e)?.passed();
    let jac = c.satisfies_jacobi();
    ensure!(nil == jac, "nilpotency {nil} but Jacobi {jac} for {c:?}");
    Ok(jac)
}

pub fn criterion_2() -> Outcome {
    let mut tables = vec![StructureConstants::su2(), StructureConstants::heisenberg()];
    for (l1, l2, l3) in [(2, 1, 1), (1, -1, 1), (3, 2, 5), (0, 1, 1)] {
        tables.push(
            StructureConstants::from_entries(3, &[(0, 1, 2, int(l1)), (1, 2, 0, int(l2)), (2, 0, 1, int(l3))]).unwrap(),
        );
    }
    // mutations of su(2) that break Jacobi
    tables.push(
        StructureConstants::from_entries(3, &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1)), (0, 0, 1, int(1))])
            .unwrap(),
    );
    tables.push(
        StructureConstants::from_entries(3, &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1)), (1, 0, 1, int(2))])
            .unwrap(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a61636f);
    for k in 0..20 {
        let dim = if k % 2 == 0 { 3 } else { 4 };
        let mut entries = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                for c in b + 1..dim {
                    if rng.gen_bool(0.3) {
                        entries.push((a, b, c, int(rng.gen_range(-2i64..=2))));
                    }
                }
            }
        }
        tables.push(StructureConstants::from_entries(dim, &entries).unwrap());
    }
    let (mut good, mut bad) = (0, 0);
    for c in &tables {
        if nilpotent_iff_jacobi(c)? {
            good += 1;
        } else {
            bad += 1;
        }
    }
    ensure!(good >= 6 && bad >= 2, "expected both outcomes, got {good} Lie and {bad} non-Lie tables");
    Ok(format!("{} tables agree ({good} Lie, {bad} failing Jacobi)", tables.len()))
}

// ---------------------------------------------------------------- 3

fn chain_for(t: &TangentAlgebra, phi: &Morphism, q2: &Derivation) -> Result<(), String> {
    let t2 = shift_tangent(q2.source());
    let fstar = field_strength_morphism(phi, t.d(), q2, &t2).map_err(e)?;
    let qt = t2.total_differential(q2).map_err(e)?;
    let cert = check_chain_property(&fstar, t.d(), &qt).map_err(e)?;
    ensure!(cert.passed(), "{cert}");
    Ok(())
}

pub fn criterion_3() -> Outcome {
    // (a) abelian connection on the plane
    let plane = euclidean(2);
    let (u1, q_u1) = abelian(&["xi"]);
    let (x, y, dx, dy) = (plane.q(0), plane.q(1), plane.dq(0), plane.dq(1));
    let a = &(&(&x * &y) * &dx) + &(&x.pow(2) * &dy);
    let phi = Morphism::new(plane.full(), &u1, vec![a]).unwrap();
    chain_for(&plane, &phi, &q_u1)?;

    // (b) su(2) on ℝ⁴, with the Bianchi identity as the d:xi instance
    let r4 = euclidean(4);
    let (g, q) = su2();
    let phi = su2_connection(&r4, &g);
    chain_for(&r4, &phi, &q)?;
    let c = StructureConstants::su2();
    let f = curvature_oracle(&r4, &c, phi.images());
    let t2 = shift_tangent(&g);
    let fstar = field_strength_morphism(&phi, r4.d(), &q, &t2).map_err(e)?;
    let qt = t2.total_differential(&q).map_err(e)?;
    for i in 0..3 {
        ensure!(fstar.image(t2.diff_ordinal(i)) == &f[i], "F^{} differs from dA + 1/2[A,A]", i + 1);
        let mut bracket = Polynomial::zero(r4.full());
        for b in 0..3 {
            for cc in 0..3 {
                bracket = &bracket + &(&phi.images()[b] * &f[cc]).scale(c.get(i, b, cc));
            }
        }
        let bianchi = &r4.d().apply(&f[i]).unwrap() + &bracket;
        ensure!(bianchi.is_zero(), "dF + [A,F] = {bianchi} for a = {}", i + 1);
        // chain instance on d:xi_a: Q1 f*(dξ) = dF, f*(Q_T dξ) = −[A,F]
        let lhs = r4.d().apply(fstar.image(t2.diff_ordinal(i))).unwrap();
        let rhs = fstar.apply(&qt.apply(&t2.dq(i)).unwrap()).unwrap();
        ensure!(lhs == r4.d().apply(&f[i]).unwrap() && rhs == -&bracket, "chain instance is not Bianchi");
        ensure!(!bracket.is_zero(), "fixture has a vanishing [A,F]");
    }

    // (c) flat connections: exact abelian and single-component su(2)
    let exact = r4.d().apply(&(&r4.q(0) * &r4.q(1))).unwrap();
    let phi = Morphism::new(r4.full(), &u1, vec![exact]).unwrap();
    chain_for(&r4, &phi, &q_u1)?;
    let fl = shift_tangent(&u1);
    ensure!(field_strength_morphism(&phi, r4.d(), &q_u1, &fl).unwrap().image(1).is_zero(), "exact connection not flat");
    let flat = Morphism::new(r4.full(), &g, vec![&r4.q(1) * &r4.dq(1), r4.full().zero(), r4.full().zero()]).unwrap();
    chain_for(&r4, &flat, &q)?;
    let ff = field_strength_morphism(&flat, r4.d(), &q, &t2).unwrap();
    ensure!((0..3).all(|i| ff.image(t2.diff_ordinal(i)).is_zero()), "flat su(2) connection has curvature");
    Ok("abelian, su(2) (with Bianchi) and flat connections".into())
}

// ---------------------------------------------------------------- 4

fn so2_algebroid() -> gq_core::equivariant::ActionAlgebroid {
    let m = GradedAlgebra::new([("x", 0), ("y", 0)]).unwrap();
    let act = LieAction::new(StructureConstants::zero(1), &m, vec![so2_rotation(&m)], vec!["c".into()]).unwrap();
    action_algebroid(&act).unwrap()
}

fn su2_adjoint_algebroid() -> gq_core::equivariant::ActionAlgebroid {
    let m = GradedAlgebra::new([("y1", 0), ("y2", 0), ("y3", 0)]).unwrap();
    let c = StructureConstants::su2();
    let act = LieAction::new(c.clone(), &m, adjoint_fields(&m, &c), vec!["xi1".into(), "xi2".into(), "xi3".into()])
        .unwrap();
    action_algebroid(&act).unwrap()
}

pub fn criterion_4() -> Outcome {
    let (g, q) = su2();
    let (so2, adj) = (so2_algebroid(), su2_adjoint_algebroid());
    let fixtures = [
        ("su(2)", shift_tangent(&g), q.clone()),
        ("so(2) algebroid", so2.tangent().clone(), so2.q().clone()),
        ("su(2) adjoint algebroid", adj.tangent().clone(), adj.q().clone()),
    ];
    for (name, t, q) in &fixtures {
        let cert = t.check_twist(q).map_err(e)?;
        ensure!(cert.passed(), "{name}: {cert}");
    }
    // flow sign across fixtures
    let r4 = euclidean(4);
    let phi = su2_connection(&r4, &g);
    let tt = shift_tangent(r4.full());
    let s1 = resolve_flow_sign(&phi, r4.d(), &q, &tt, &shift_tangent(&g)).map_err(e)?;
    let alg = so2_algebroid();
    let plane = euclidean(2);
    let (u, v) = (plane.q(0), plane.q(1));
    let phi2 = Morphism::new(plane.full(), alg.algebra(), vec![u.clone(), &u * &v, &v * &plane.dq(0)]).unwrap();
    let s2 = resolve_flow_sign(&phi2, plane.d(), alg.q(), &shift_tangent(plane.full()), alg.tangent()).map_err(e)?;
    let alg3 = su2_adjoint_algebroid();
    let phi3 = Morphism::new(
        r4.full(),
        alg3.algebra(),
        vec![r4.q(0), &r4.q(1) * &r4.q(2), r4.q(3), r4.dq(0), &r4.q(0) * &r4.dq(2), r4.full().zero()],
    )
    .unwrap();
    let s3 = resolve_flow_sign(&phi3, r4.d(), alg3.q(), &tt, alg3.tangent()).map_err(e)?;
    ensure!(s1 == -1 && s2 == -1 && s3 == -1, "flow signs {s1}, {s2}, {s3}");
    Ok("twist exact on 3 fixtures; flow sign -1 on all".into())
}

// ---------------------------------------------------------------- 5

pub fn su2_bundle() -> (TangentAlgebra, TrivialBundle, Morphism, HolonomyGenerators) {
    let r4 = euclidean(4);
    let (g, q) = su2();
    let phi = su2_connection(&r4, &g);
    let bundle = TrivialBundle::new(r4.d(), &q).unwrap();
    let hol = HolonomyGenerators::coordinate(&g, &[0, 1, 2]).unwrap();
    (r4, bundle, phi, hol)
}

pub fn su2_gauge_parameter(r4: &TangentAlgebra, bundle: &TrivialBundle) -> Derivation {
    let total = bundle.total();
    let nb = r4.full().len();
    let eps = [r4.q(0), &r4.q(1) * &r4.q(2), r4.full().one()];
    let mut images = vec![Polynomial::zero(total); total.len()];
    for (a, p) in eps.iter().enumerate() {
        images[nb + a] = bundle.base_embedding().poly(p).unwrap();
    }
    Derivation::new(total, -1, images).unwrap()
}

pub fn criterion_5() -> Outcome {
    let (r4, bundle, phi, hol) = su2_bundle();
    let tf = bundle.t_fiber();
    let delta = InvariantPolynomial::new(2, 3, &delta_entries(3)).unwrap();
    let omega = invariant_to_basic_form(&delta, tf, &[0, 1, 2]).map_err(e)?;
    let ch = char_form(&bundle, &phi, &omega, &hol).map_err(e)?;
    let f = curvature_oracle(&r4, &StructureConstants::su2(), phi.images());
    let expected = gq_core::graded::sum(r4.full(), f.iter().map(|fa| fa * fa)).scale(&rat(1, 2));
    ensure!(ch == expected, "char form {ch} differs from 1/2 F.F");
    ensure!(!ch.is_zero(), "fixture has vanishing char form");
    ensure!(r4.d().apply(&ch).unwrap().is_zero(), "char form not closed");
    let y = su2_gauge_parameter(&r4, &bundle);
    let cert = gauge_variation_check(&bundle, &phi, &y, &omega).map_err(e)?;
    ensure!(cert.passed(), "{cert}");
    let zero = Derivation::zero(bundle.total(), -1);
    ensure!(gauge_variation_check(&bundle, &phi, &zero, &omega).map_err(e)?.passed(), "Y = 0 gives a variation");
    let diag = InvariantPolynomial::new(2, 3, &[(vec![0, 0], int(1))]).unwrap();
    let bad = invariant_to_basic_form(&diag, tf, &[0, 1, 2]).map_err(e)?;
    let cert = gauge_variation_check(&bundle, &phi, &y, &bad).map_err(e)?;
    ensure!(!cert.passed(), "diag(1,0,0) control shows no variation");
    ensure!(matches!(char_form(&bundle, &phi, &bad, &hol), Err(Error::NotBasic(_))), "control accepted as basic");
    Ok(format!("char form closed and gauge invariant; control variation {}", cert.residual.unwrap_or_default()))
}

// ---------------------------------------------------------------- 6

pub fn criterion_6() -> Outcome {
    // abelian 2-generator fixture on ℝ⁴
    let r4 = euclidean(4);
    let (ab, q_ab) = abelian(&["e1", "e2"]);
    let bundle = TrivialBundle::new(r4.d(), &q_ab).unwrap();
    let hol = HolonomyGenerators::coordinate(&ab, &[0, 1]).unwrap();
    let off = InvariantPolynomial::new(2, 2, &[(vec![0, 1], int(1))]).unwrap();
    let omega = invariant_to_basic_form(&off, bundle.t_fiber(), &[0, 1]).map_err(e)?;
    let zero = Morphism::new(r4.full(), &ab, vec![r4.full().zero(), r4.full().zero()]).unwrap();
    let a1 = Morphism::new(r4.full(), &ab, vec![&r4.q(0) * &r4.dq(1), &r4.q(2) * &r4.dq(3)]).unwrap();
    let tr = transgress(&bundle, &zero, &a1, &omega, &hol, None).map_err(e)?;
    let vol = &(&r4.dq(0) * &r4.dq(1)) * &(&r4.dq(2) * &r4.dq(3));
    ensure!(tr.difference == vol, "abelian difference {} is not the volume form", tr.difference);
    ensure!(r4.d().apply(&tr.primitive).unwrap() == tr.difference, "abelian primitive fails");
    let same = transgress(&bundle, &a1, &a1, &omega, &hol, None).map_err(e)?;
    ensure!(same.difference.is_zero() && same.primitive.is_zero(), "identical fields give nonzero transgression");

    // su(2): primitive against Chern–Simons
    let (r4, bundle, phi, hol) = su2_bundle();
    let delta = InvariantPolynomial::new(2, 3, &delta_entries(3)).unwrap();
    let omega = invariant_to_basic_form(&delta, bundle.t_fiber(), &[0, 1, 2]).map_err(e)?;
    let zero = Morphism::new(r4.full(), bundle.fiber(), vec![r4.full().zero(); 3]).unwrap();
    let tr = transgress(&bundle, &zero, &phi, &omega, &hol, None).map_err(e)?;
    ensure!(r4.d().apply(&tr.primitive).unwrap() == tr.difference, "su(2) primitive fails");
    let cs = chern_simons_oracle(&r4, &StructureConstants::su2(), phi.images());
    // the characteristic form carries 1/2!, so compare with CS/2
    let remainder = &tr.primitive - &cs.scale(&rat(1, 2));
    ensure!(r4.d().apply(&remainder).unwrap().is_zero(), "primitive - CS/2 is not closed: {remainder}");
    Ok(format!("abelian and su(2) exact; su(2) remainder against CS/2 has {} terms", remainder.num_terms()))
}

// ---------------------------------------------------------------- 7 and 8

fn pq_identities(ws: &SymplecticStructure, q: &Derivation) -> Result<(), String> {
    let t = ws.tangent();
    let p = ws.degree() as i64;
    let alpha = ws.liouville().map_err(e)?;
    ensure!(t.d().apply(&alpha).unwrap() == *ws.omega(), "d alpha != omega");
    let l_xi = t.lie_derivative(&Derivation::euler(t.base())).unwrap().apply(ws.omega()).unwrap();
    ensure!(l_xi == ws.omega().scale(&int(p)), "L_xi omega != p omega");
    let data = ws.hamiltonian_data(q).map_err(e)?;
    let iq = t.contraction(q).unwrap().apply(ws.omega()).unwrap();
    let dq = t.d().apply(&t.embed(&data.hamiltonian).unwrap()).unwrap().scale(&sign(p));
    ensure!(iq == dq, "iota_Q omega != (-1)^p dH");
    ensure!(ws.poisson_bracket(&data.hamiltonian, &data.hamiltonian).unwrap().is_zero(), "{{H,H}} != 0");
    let qt = t.total_differential(q).map_err(e)?;
    ensure!(qt.apply(&data.alpha_hat).unwrap() == *ws.omega(), "omega != Q_T(alpha_hat)");
    Ok(())
}

/// `T*[1]ℝⁿ` with generators `x_i:0, p_i:1`.
fn cotangent(n: usize) -> SymplecticStructure {
    let mut gens = Vec::new();
    for i in 1..=n {
        gens.push((format!("x{i}"), 0));
        gens.push((format!("p{i}"), 1));
    }
    let s = GradedAlgebra::new(gens).unwrap();
    let t = shift_tangent(&s);
    let names: Vec<(String, String)> = (1..=n).map(|i| (format!("x{i}"), format!("p{i}"))).collect();
    let pairs: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    SymplecticStructure::darboux(&t, 1, &pairs).unwrap()
}

/// `½ C^k_{ij} x_k p_i p_j`, a Poisson structure iff `C` is a Lie algebra.
fn linear_poisson(ws: &SymplecticStructure, c: &StructureConstants) -> Polynomial {
    let s = ws.tangent().base();
    let n = c.dim();
    let mut h = Polynomial::zero(s);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let v = c.get(k, i, j);
                if *v != int(0) {
                    let xk = s.var(&format!("x{}", k + 1)).unwrap();
                    let pi = s.var(&format!("p{}", i + 1)).unwrap();
                    let pj = s.var(&format!("p{}", j + 1)).unwrap();
                    h = &h + &(&(&xk * &pi) * &pj).scale(&(v * rat(1, 2)));
                }
            }
        }
    }
    h
}

/// Sigma base with the field components as coordinates, so that the
/// integrand can be read off symbolically.
fn symbolic_sigma(n: usize) -> TangentAlgebra {
    let mut gens = vec![("u".to_string(), 0), ("v".to_string(), 0)];
    for i in 1..=n {
        gens.push((format!("X{i}"), 0));
        gens.push((format!("a{i}"), 0));
        gens.push((format!("b{i}"), 0));
    }
    shift_tangent(&GradedAlgebra::new(gens).unwrap())
}

fn psm_field(ws: &SymplecticStructure, sigma: &TangentAlgebra, n: usize) -> Morphism {
    let f = sigma.full();
    let v = |s: &str| f.var(s).unwrap();
    let mut images = Vec::new();
    for i in 1..=n {
        images.push(v(&format!("X{i}")));
        images.push(&(&v(&format!("a{i}")) * &v("d:u")) + &(&v(&format!("b{i}")) * &v("d:v")));
    }
    Morphism::new(f, ws.tangent().base(), images).unwrap()
}

/// Classifies every monomial of the integrand as `A_i dX^i` or
/// `½π^{ij}(X) A_i A_j`; returns the two families.
fn psm_families(
    sigma: &TangentAlgebra,
    lagrangian: &Polynomial,
    n: usize,
) -> Result<(Polynomial, Polynomial), String> {
    let f = sigma.full();
    let name = |g: u32| f.generator(g as usize).name.clone();
    let mut kinetic = Polynomial::zero(f);
    let mut potential = Polynomial::zero(f);
    for (m, c) in lagrangian.terms() {
        let names: Vec<(String, u32)> = m.factors().iter().map(|&(g, k)| (name(g), k)).collect();
        let comps: Vec<&String> = names.iter().filter(|(s, _)| s.starts_with('a') || s.starts_with('b')).map(|(s, _)| s).collect();
        let dxs: Vec<&String> = names.iter().filter(|(s, _)| s.starts_with("d:X")).map(|(s, _)| s).collect();
        let dsig: Vec<&String> = names.iter().filter(|(s, _)| s == "d:u" || s == "d:v").map(|(s, _)| s).collect();
        let term = Polynomial::term(f, c.clone(), m.clone());
        let others = names.len() - comps.len() - dxs.len() - dsig.len();
        if comps.len() == 1 && dxs.len() == 1 && dsig.len() == 1 && others == 0 && comps[0][1..] == dxs[0][3..] {
            kinetic = &kinetic + &term;
        } else if comps.len() == 2 && dxs.is_empty() && dsig.len() == 2 && comps[0][1..] != comps[1][1..] {
            // remaining factors may only be X's
            ensure!(names.iter().all(|(s, _)| s.starts_with('X') || s.starts_with('a') || s.starts_with('b') || s.starts_with("d:u") || s.starts_with("d:v")), "unexpected factor in {term}");
            potential = &potential + &term;
        } else {
            return Err(format!("monomial `{term}` fits neither family (n = {n})"));
        }
    }
    Ok((kinetic, potential))
}

fn psm_oracle(sigma: &TangentAlgebra, phi: &Morphism, ws: &SymplecticStructure, h: &Polynomial, n: usize) -> (Polynomial, Polynomial) {
    let f = sigma.full();
    let a = |i: usize| phi.image(2 * i + 1).clone();
    let x = |i: usize| phi.image(2 * i).clone();
    let kinetic = gq_core::graded::sum(f, (0..n).map(|i| &a(i) * &sigma.d().apply(&x(i)).unwrap()));
    // π^{ij} from {p_i, p_j}-free reading of H: π^{ij} = ∂_{p_j} ∂_{p_i} H (left derivatives)
    let s = ws.tangent().base();
    let mut potential = Polynomial::zero(f);
    for i in 0..n {
        for j in 0..n {
            let di = Derivation::partial(s, 2 * i + 1);
            let dj = Derivation::partial(s, 2 * j + 1);
            let pij = dj.apply(&di.apply(h).unwrap()).unwrap();
            potential = &potential + &(&(&phi.apply(&pij).unwrap() * &a(i)) * &a(j)).scale(&rat(1, 2));
        }
    }
    (kinetic, potential)
}

pub fn criterion_7() -> Outcome {
    // p = 2, su(2) with κ = δ
    let (g, q) = su2();
    let t = shift_tangent(&g);
    let omega = invariant_to_basic_form(&InvariantPolynomial::new(2, 3, &delta_entries(3)).unwrap(), &t, &[0, 1, 2]).unwrap();
    let ws = SymplecticStructure::new(&t, 2, omega).map_err(e)?;
    pq_identities(&ws, &q)?;
    let r3 = euclidean(3);
    let phi = Morphism::new(
        r3.full(),
        &g,
        vec![&r3.q(1) * &r3.dq(0), &(&r3.q(0) * &r3.q(2)) * &r3.dq(1), &r3.dq(2) + &(&r3.q(1) * &r3.dq(0))],
    )
    .unwrap();
    let cs = aksz_integrand(&ws, &q, &phi, &r3).map_err(e)?;
    ensure!(r3.d().apply(&cs.lagrangian).unwrap() == cs.fstar_omega, "p=2 f*omega != dL");

    // p = 1, T*[1]ℝ² with constant π and T*[1]ℝ³ with linear π
    let ws = cotangent(2);
    let s = ws.tangent().base().clone();
    let h = &s.var("p1").unwrap() * &s.var("p2").unwrap();
    let q = ws.hamiltonian_vf(&h).map_err(e)?;
    pq_identities(&ws, &q)?;
    ensure!(ws.hamiltonian_of_q(&q).map_err(e)? == h, "Hamiltonian not recovered for constant pi");
    let sigma = symbolic_sigma(2);
    let l = aksz_integrand(&ws, &q, &psm_field(&ws, &sigma, 2), &sigma).map_err(e)?;
    ensure!(sigma.d().apply(&l.lagrangian).unwrap() == l.fstar_omega, "PSM f*omega != dL");

    let ws3 = cotangent(3);
    let mut agree = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x706f6973);
    let mut tables = vec![StructureConstants::su2(), StructureConstants::heisenberg(), StructureConstants::zero(3)];
    tables.push(
        StructureConstants::from_entries(3, &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1)), (0, 0, 1, int(1))])
            .unwrap(),
    );
    for _ in 0..6 {
        let mut entries = Vec::new();
        for a in 0..3 {
            for (b, c) in [(0, 1), (0, 2), (1, 2)] {
                if rng.gen_bool(0.4) {
                    entries.push((a, b, c, int(rng.gen_range(-2i64..=2))));
                }
            }
        }
        tables.push(StructureConstants::from_entries(3, &entries).unwrap());
    }
    let (mut lie, mut broken) = (0, 0);
    for c in &tables {
        let h = linear_poisson(&ws3, c);
        let q = ws3.hamiltonian_vf(&h).map_err(e)?;
        let jac = c.satisfies_jacobi();
        match ws3.hamiltonian_of_q(&q) {
            Ok(_) => {
                ensure!(jac, "master equation holds but Jacobi fails for {c:?}");
                pq_identities(&ws3, &q)?;
                lie += 1;
            }
            Err(Error::MasterEquationFailed(_)) => {
                ensure!(!jac, "master equation fails but Jacobi holds for {c:?}");
                broken += 1;
            }
            Err(other) => return Err(format!("unexpected error {other}")),
        }
        agree += 1;
    }
    ensure!(lie >= 3 && broken >= 1, "expected both outcomes, got {lie}/{broken}");
    Ok(format!("p=2 su(2), constant and linear pi; {agree} linear tables agree with Jacobi"))
}

pub fn criterion_8() -> Outcome {
    // constant π^{12} = 1
    let ws = cotangent(2);
    let s = ws.tangent().base().clone();
    let h = &s.var("p1").unwrap() * &s.var("p2").unwrap();
    let q = ws.hamiltonian_vf(&h).map_err(e)?;
    let sigma = symbolic_sigma(2);
    let phi = psm_field(&ws, &sigma, 2);
    let l = aksz_integrand(&ws, &q, &phi, &sigma).map_err(e)?.lagrangian;
    let (kin, pot) = psm_families(&sigma, &l, 2)?;
    let (kin_o, pot_o) = psm_oracle(&sigma, &phi, &ws, &h, 2);
    ensure!(kin == kin_o && pot == pot_o, "families differ: {kin} | {pot} vs {kin_o} | {pot_o}");
    ensure!(!kin.is_zero() && !pot.is_zero(), "a family is empty");

    // linear su(2) Lie–Poisson on ℝ³
    let ws = cotangent(3);
    let h = linear_poisson(&ws, &StructureConstants::su2());
    let q = ws.hamiltonian_vf(&h).map_err(e)?;
    let sigma = symbolic_sigma(3);
    let phi = psm_field(&ws, &sigma, 3);
    let l = aksz_integrand(&ws, &q, &phi, &sigma).map_err(e)?.lagrangian;
    let (kin, pot) = psm_families(&sigma, &l, 3)?;
    let (kin_o, pot_o) = psm_oracle(&sigma, &phi, &ws, &h, 3);
    ensure!(kin == kin_o && pot == pot_o, "linear families differ");
    let zero = Morphism::new(sigma.full(), ws.tangent().base(), vec![sigma.full().zero(); 6]).unwrap();
    ensure!(aksz_integrand(&ws, &q, &zero, &sigma).map_err(e)?.lagrangian.is_zero(), "zero field has nonzero L");
    Ok(format!("{} kinetic and {} potential monomials, nothing else", kin.num_terms(), pot.num_terms()))
}

// ---------------------------------------------------------------- 9

pub fn criterion_9() -> Outcome {
    let alg = so2_algebroid();
    let hom = alg.action().check_homomorphism().map_err(e)?;
    ensure!(hom.passed(), "{hom}");
    let conj = alg.weil_cartan_conjugation().map_err(e)?;
    ensure!(conj.passed(), "{conj}");
    for c in alg.check_generator_conjugation(&[int(1)]).map_err(e)? {
        ensure!(c.passed(), "{c}");
    }
    let tm = alg.tangent_m();
    let h = &tm.dvar("x").unwrap() * &tm.dvar("y").unwrap();
    let t = alg.tangent();
    let r2 = (&t.q(0).pow(2) + &t.q(1).pow(2)).scale(&rat(1, 2));
    let h_hat = &(&t.dq(0) * &t.dq(1)) - &(&t.dq(2) * &r2);
    let (basic, in_cartan) = alg.cartan_basic_check(&h_hat).map_err(e)?;
    ensure!(basic.passed() && in_cartan, "extension not in the Cartan model: {basic}");
    ensure!(alg.q_cartan().apply(&h_hat).unwrap().is_zero(), "extension not Q_C-closed");

    let base = euclidean(2);
    let (u, v, du, dv) = (base.q(0), base.q(1), base.dq(0), base.dq(1));
    let phi = Morphism::new(base.full(), alg.algebra(), vec![u.clone(), &u * &v, &(&v * &du) + &(&u.pow(2) * &dv)]).unwrap();
    let params = vec![&u + &v.pow(2)];
    let rep = wz_gauging_check(&alg, &h, &h_hat, &phi, &base, &params).map_err(e)?;
    ensure!(rep.non_invariance.passed(), "{}", rep.non_invariance);
    ensure!(!rep.variation.is_zero(), "ungauged term shows no variation");
    ensure!(rep.closed.passed(), "{}", rep.closed);
    ensure!(rep.gauge_invariance.passed(), "{}", rep.gauge_invariance);
    let ex = rep.exactness.ok_or("no exactness certificate")?;
    ensure!(ex.passed(), "{ex}");
    let missing = &t.dq(0) * &t.dq(1);
    ensure!(
        matches!(wz_gauging_check(&alg, &h, &missing, &phi, &base, &params), Err(Error::NotEquivariantlyClosed(_))),
        "extension without moment map accepted"
    );
    Ok(format!("variation {} reproduced; primitive {}", rep.variation, rep.primitive.unwrap()))
}

// ---------------------------------------------------------------- 10

pub fn criterion_10() -> Outcome {
    let unit = |n: usize, i: usize| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect::<Vec<_>>();
    let id1 = InvariantPolynomial::new(1, 1, &[(vec![0], int(1))]).unwrap();
    let heis = lecomte_char(&StructureConstants::heisenberg(), &[unit(3, 2)], &[unit(3, 0), unit(3, 1)], &id1).map_err(e)?;
    ensure!(heis.cochain.to_string() == "zeta1*zeta2", "Heisenberg cochain is {}", heis.cochain);
    ensure!(heis.closed, "Heisenberg cochain not closed");
    // su(2) ⊕ ℝ with the obvious splitting
    let mut entries = Vec::new();
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        entries.push((a, b, c, int(1)));
    }
    let g = StructureConstants::from_entries(4, &entries).unwrap();
    let split = lecomte_char(&g, &[unit(4, 3)], &[unit(4, 0), unit(4, 1), unit(4, 2)], &id1).map_err(e)?;
    ensure!(split.cochain.is_zero() && split.closed, "split sequence gives {}", split.cochain);
    Ok("Heisenberg gives zeta1*zeta2, split sequence gives 0".into())
}

// ---------------------------------------------------------------- 11

pub fn fixtures() -> Vec<std::path::PathBuf> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut v: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "gq"))
        .collect();
    v.sort();
    v
}

pub fn expected_exit(path: &std::path::Path) -> i32 {
    if path.file_stem().unwrap().to_string_lossy().ends_with("_fail") {
        1
    } else {
        0
    }
}

pub fn gq(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_gq"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn gq");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

pub fn criterion_11() -> Outcome {
    use gq_core::dsl::{self, Options};
    let files = fixtures();
    ensure!(files.len() >= 10, "fixture corpus has only {} scripts", files.len());
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let src = std::fs::read_to_string(path).unwrap();
        let script = dsl::parse(&src).map_err(|err| format!("{name}: {err}"))?;
        let canon = dsl::format_script(&script);
        let again = dsl::parse(&canon).map_err(|err| format!("{name} (formatted): {err}"))?;
        ensure!(again == script, "{name}: formatting changes the parse");
        ensure!(dsl::format_script(&again) == canon, "{name}: formatting is not idempotent");
        let opts = Options { base_dir: path.parent().map(|p| p.to_path_buf()), timing: false };
        let r1 = dsl::run(&script, &opts).map_err(|err| format!("{name}: {err}"))?;
        let r2 = dsl::run(&script, &opts).map_err(|err| format!("{name}: {err}"))?;
        ensure!(r1.to_text() == r2.to_text() && r1.to_json() == r2.to_json(), "{name}: reports differ between runs");
        let mut r3 = dsl::run(&again, &opts).map_err(|err| format!("{name}: {err}"))?;
        for (a, b) in r3.records.iter_mut().zip(&r1.records) {
            a.line = b.line;
        }
        ensure!(r3 == r1, "{name}: formatted script reports differently");
        ensure!(r1.exit_code() == expected_exit(path), "{name}: exit {} expected {}", r1.exit_code(), expected_exit(path));
        let (code, out, _) = gq(&["run", path.to_str().unwrap(), "--no-timing"], None);
        ensure!(code == expected_exit(path) && out == r1.to_text(), "{name}: binary disagrees (exit {code})");
    }

    // kernel polynomials survive print and reparse
    let mut rng = ChaCha8Rng::seed_from_u64(0x726f756e);
    let t = euclidean(3);
    let algs = [
        GradedAlgebra::new([("a", 1), ("b", 1), ("x", 0), ("y", 2)]).unwrap(),
        t.full().clone(),
    ];
    for alg in &algs {
        for _ in 0..300 {
            let p = Polynomial::from_words(alg, &random_words(&mut rng, alg.len()));
            let back = dsl::parse_polynomial(alg, &p.to_string()).map_err(|err| format!("{p}: {err}"))?;
            ensure!(back == p, "{p} reparses as {back}");
        }
    }

    // exit codes through the binary
    let su2 = "algebra su2 { xi1:1 xi2:1 xi3:1 }\nderivation Q on su2 degree 1 { xi1 -> -xi2*xi3; xi2 -> -xi3*xi1; xi3 -> -xi1*xi2 }\ncheck nilpotent Q\n";
    let (code, out, _) = gq(&["run", "-", "--no-timing"], Some(su2));
    ensure!(code == 0 && out.contains("check nilpotent Q: PASS"), "su(2) script: exit {code}");
    let chain = "algebra A { x:0 y:1 z:2 }\nderivation Q on A degree 1 { x -> y; y -> z }\ncheck nilpotent Q\n";
    let (code, out, _) = gq(&["run", "-", "--no-timing", "--emit", "json"], Some(chain));
    let json: serde_json::Value = serde_json::from_str(&out).map_err(e)?;
    ensure!(code == 1 && json[0]["status"] == "FAIL" && json[0]["witness"] == "nilpotent: Q^2(x)", "FAIL script: {out}");
    let (code, _, err) = gq(&["run", "-"], Some("algebra A { x:0 }\nform f in A = x +\n"));
    ensure!(code == 2 && err.contains("2:18"), "parse error: exit {code}, {err}");
    let (code, _, err) = gq(&["check", "-"], Some("check nilpotent Q\nalgebra A { x:1 }\n"));
    ensure!(code == 3 && err.contains("1:17") && err.contains("UnknownName"), "forward reference: exit {code}, {err}");
    let (code, _, err) = gq(&["check", "-"], Some("algebra A { x:1 }\nderivation Q on A degree 1 { x -> x }\n"));
    ensure!(code == 3 && err.contains("DegreeMismatch"), "degree mismatch: exit {code}, {err}");
    let runtime = "algebra M { x:0 }\ntangent T of M\nderivation Z on M degree 1 {}\ncheck twist T, Z\nalgebra N { y:1 }\nderivation E on N degree 1 {}\nholonomy H in N { y }\nderivation W on M degree 0 {}\ncheck nilpotent W\n";
    let (code, out, _) = gq(&["run", "-", "--no-timing"], Some(runtime));
    ensure!(code == 3 && out.contains("ERROR"), "runtime error: exit {code}, {out}");
    let (code, out, _) = gq(&["run", "-"], Some("# nothing\n"));
    ensure!(code == 0 && out.contains("0 PASS, 0 FAIL, 0 ERROR"), "empty script: exit {code}");
    Ok(format!("{} fixtures round-trip, run deterministically and exit as documented", files.len()))
}
