//! The characteristic surface against independent determinant expansions.

use num_traits::{One, Zero};
use proptest::prelude::*;

use sectpos_core::curvature::{random_symmetric, volume_form, CurvatureOperator};
use sectpos_core::pipeline::{characteristic_surface, discriminant_curve, genericity};
use sectpos_core::ratpoly::{discriminant, BiPoly, Rational};

/// Permutations of 0..n with their signs, by Heap's algorithm.
fn permutations(n: usize) -> Vec<(Vec<usize>, i8)> {
    fn heap(k: usize, a: &mut Vec<usize>, sign: &mut i8, out: &mut Vec<(Vec<usize>, i8)>) {
        if k == 1 {
            out.push((a.clone(), *sign));
            return;
        }
        heap(k - 1, a, sign, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            *sign = -*sign;
            heap(k - 1, a, sign, out);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut 1, &mut out);
    out
}

/// Leibniz expansion of det(R - xI - yK) with polynomial entries.
fn leibniz_surface(r: &CurvatureOperator) -> BiPoly {
    let k = volume_form();
    let entry = |i: usize, j: usize| {
        let mut e = BiPoly::constant(r.entries()[i][j].clone());
        if i == j {
            e = &e - &BiPoly::x();
        }
        let kij = &k.entries()[i][j];
        if !kij.is_zero() {
            e = &e - &(&BiPoly::y() * &BiPoly::constant(kij.clone()));
        }
        e
    };
    let m: Vec<Vec<BiPoly>> = (0..6).map(|i| (0..6).map(|j| entry(i, j)).collect()).collect();
    let mut acc = BiPoly::zero();
    for (perm, sign) in permutations(6) {
        let mut term = BiPoly::constant(Rational::from_integer(i64::from(sign).into()));
        for (i, &j) in perm.iter().enumerate() {
            if m[i][j].is_zero() {
                term = BiPoly::zero();
                break;
            }
            term = &term * &m[i][j];
        }
        acc = &acc + &term;
    }
    acc
}

#[test]
fn heap_generates_all_signed_permutations() {
    let p = permutations(4);
    assert_eq!(p.len(), 24);
    assert_eq!(p.iter().filter(|(_, s)| *s == 1).count(), 12);
}

#[test]
fn surface_matches_leibniz_expansion() {
    for seed in 0..4 {
        let r = random_symmetric(seed, 5);
        assert_eq!(characteristic_surface(&r).unwrap().p, leibniz_surface(&r), "seed {seed}");
    }
}

#[test]
fn discriminant_curve_matches_direct_evaluation() {
    let r = random_symmetric(11, 3);
    let s = characteristic_surface(&r).unwrap();
    let q = discriminant_curve(&s).unwrap();
    for x in [-41i64, 0, 7, 100] {
        let x = Rational::from_integer(x.into());
        assert_eq!(q.eval(&x), discriminant(&s.fiber(&x)).unwrap());
    }
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(q.eval(&half), discriminant(&s.fiber(&half)).unwrap());
    assert!(q.degree().unwrap() <= 30);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn surface_invariants(seed in any::<u64>(), bound in 1i64..=9) {
        let r = random_symmetric(seed, bound);
        let s = characteristic_surface(&r).unwrap();
        prop_assert_eq!(s.y_leading(), -Rational::one());
        prop_assert_eq!(s.p.coeff(6, 0), Rational::one());
        prop_assert!(s.p.total_degree().unwrap() <= 6);
        prop_assert_eq!(s.p.coeff(0, 0), sectpos_core::ratpoly::determinant(r.entries()));
    }

    #[test]
    fn genericity_is_shift_invariant(seed in 0u64..1000) {
        // R + cI translates q, so disc_q is unchanged.
        let r = random_symmetric(seed, 3);
        let shifted = r.add_scaled(&sectpos_core::curvature::constant_curvature(Rational::one()), &Rational::from_integer(2.into()));
        let g = genericity(&discriminant_curve(&characteristic_surface(&r).unwrap()).unwrap()).unwrap();
        let h = genericity(&discriminant_curve(&characteristic_surface(&shifted).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(g.disc_q, h.disc_q);
    }
}
