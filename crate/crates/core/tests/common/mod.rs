#![allow(dead_code)]

pub mod criteria;

use gq_core::derivation::{Derivation, Morphism};
use gq_core::graded::{int, rat, GradedAlgebra, Polynomial, Rational};
use gq_core::lie::{ce_differential, StructureConstants};
use gq_core::tangent::{shift_tangent, TangentAlgebra};

pub fn su2() -> (GradedAlgebra, Derivation) {
    let g = GradedAlgebra::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap();
    let q = ce_differential(&g, &[0, 1, 2], &StructureConstants::su2()).unwrap();
    (g, q)
}

/// `T[1]ℝⁿ` with coordinates `x1..xn`.
pub fn euclidean(n: usize) -> TangentAlgebra {
    shift_tangent(&GradedAlgebra::new((1..=n).map(|i| (format!("x{i}"), 0))).unwrap())
}

pub fn abelian(names: &[&str]) -> (GradedAlgebra, Derivation) {
    let g = GradedAlgebra::new(names.iter().map(|n| (n.to_string(), 1))).unwrap();
    let q = Derivation::zero(&g, 1);
    (g, q)
}

/// Polynomial su(2) connection on ℝ⁴.
pub fn su2_connection(t: &TangentAlgebra, fiber: &GradedAlgebra) -> Morphism {
    let x = |i: usize| t.q(i - 1);
    let dx = |i: usize| t.dq(i - 1);
    let a1 = &(&x(2) * &dx(1)) + &(&x(3) * &dx(4));
    let a2 = &(&(&x(1) * &x(4)) * &dx(3)) - &dx(2);
    let a3 = &(&x(4) * &dx(2)) + &(&x(1).pow(2) * &dx(1));
    Morphism::new(t.full(), fiber, vec![a1, a2, a3]).unwrap()
}

/// Curvature `F^a = dA^a + ½ C^a_{bc} A^b A^c`, straight from the constants.
pub fn curvature_oracle(t: &TangentAlgebra, c: &StructureConstants, a: &[Polynomial]) -> Vec<Polynomial> {
    let n = c.dim();
    (0..n)
        .map(|i| {
            let mut f = t.d().apply(&a[i]).unwrap();
            for b in 0..n {
                for cc in 0..n {
                    let k = c.get(i, b, cc);
                    if *k != int(0) {
                        f = &f + &(&a[b] * &a[cc]).scale(&(k * rat(1, 2)));
                    }
                }
            }
            f
        })
        .collect()
}

/// `κ(A, dA) + ⅓ κ(A, [A,A])` with `κ = δ`.
pub fn chern_simons_oracle(t: &TangentAlgebra, c: &StructureConstants, a: &[Polynomial]) -> Polynomial {
    let n = c.dim();
    let mut cs = Polynomial::zero(t.full());
    for i in 0..n {
        cs = &cs + &(&a[i] * &t.d().apply(&a[i]).unwrap());
        for b in 0..n {
            for cc in 0..n {
                let k = c.get(i, b, cc);
                if *k != int(0) {
                    cs = &cs + &(&(&a[i] * &a[b]) * &a[cc]).scale(&(k * rat(1, 3)));
                }
            }
        }
    }
    cs
}

/// `δ` on an n-dimensional space, as rank-2 entries.
pub fn delta_entries(n: usize) -> Vec<(Vec<usize>, Rational)> {
    (0..n).map(|i| (vec![i, i], int(1))).collect()
}

/// so(2) rotating the plane: `x ↦ -y`, `y ↦ x`.
pub fn so2_rotation(m: &GradedAlgebra) -> Derivation {
    let (x, y) = (m.var("x").unwrap(), m.var("y").unwrap());
    Derivation::from_named(m, 0, &[("x", -&y), ("y", x)]).unwrap()
}

/// Linear vector fields `ρ_a(x^c) = −C^c_{ab} x^b` of the adjoint action.
pub fn adjoint_fields(m: &GradedAlgebra, c: &StructureConstants) -> Vec<Derivation> {
    let n = c.dim();
    (0..n)
        .map(|a| {
            let images = (0..n)
                .map(|cc| {
                    gq_core::graded::sum(
                        m,
                        (0..n).map(|b| Polynomial::generator(m, b).scale(&-c.get(cc, a, b).clone())),
                    )
                })
                .collect();
            Derivation::new(m, 0, images).unwrap()
        })
        .collect()
}

/// Sign of the permutation sorting a word of generators, counting only
/// transpositions of two odd letters; `None` if an odd letter repeats.
pub fn koszul_sort_oracle(word: &[usize], odd: &[bool]) -> Option<(i64, Vec<usize>)> {
    let mut w = word.to_vec();
    let mut sign = 1i64;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if odd[w[j]] && odd[w[j + 1]] {
                    sign = -sign;
                }
                w.swap(j, j + 1);
            }
        }
    }
    for k in 1..w.len() {
        if w[k] == w[k - 1] && odd[w[k]] {
            return None;
        }
    }
    Some((sign, w))
}
