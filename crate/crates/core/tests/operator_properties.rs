use proptest::prelude::*;
use weaklimit::operator::{
    apply_polynomial, left_composition_lipschitz, wot_distance, Basis, OperatorMatrix, PolynomialInT,
    WeightedVectorSequence,
};
use weaklimit::transformations::{cyclic_shift, fourier_index, rotation_koopman, RotationSpec};
use weaklimit::C64;

fn matrix(dim: usize) -> impl Strategy<Value = OperatorMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        OperatorMatrix::new(dim, v.into_iter().map(|(a, b)| C64::new(a, b)).collect(), Basis::Atom).unwrap()
    })
}

/// Rescaled to operator norm at most 0.999.
fn contraction(dim: usize) -> impl Strategy<Value = OperatorMatrix> {
    matrix(dim).prop_map(|m| {
        let frob = m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        m.scale(C64::new(0.999 / frob.max(1e-12), 0.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wot_is_a_metric(a in matrix(5), b in matrix(5), c in matrix(5)) {
        let seq = WeightedVectorSequence::canonical(5, 32).unwrap();
        let ab = wot_distance(&a, &b, &seq).unwrap();
        let ba = wot_distance(&b, &a, &seq).unwrap();
        let bc = wot_distance(&b, &c, &seq).unwrap();
        let ac = wot_distance(&a, &c, &seq).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(wot_distance(&a, &a, &seq).unwrap(), 0.0);
        if a != b {
            prop_assert!(ab > 0.0);
        }
    }

    #[test]
    fn powers_add(t in contraction(4), m in 0i64..32, n in 0i64..32) {
        let lhs = t.power(m + n).unwrap();
        let rhs = t.power(m).unwrap().compose(&t.power(n).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn ell1_polynomials_of_contractions_contract(
        t in contraction(5),
        coeffs in prop::collection::vec((0i64..6, -1.0f64..1.0, -1.0f64..1.0), 1..5),
    ) {
        let raw = PolynomialInT::new(coeffs.iter().map(|&(n, a, b)| (n, C64::new(a, b)))).unwrap();
        prop_assume!(!raw.is_zero());
        let p = PolynomialInT::new(raw.terms().iter().map(|(&n, &a)| (n, a / raw.ell1()))).unwrap();
        prop_assert!((p.ell1() - 1.0).abs() <= 1e-12);
        let q = apply_polynomial(&t, &p).unwrap();
        prop_assert!(q.operator_norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn stored_ell1_matches_recomputation(coeffs in prop::collection::vec((-9i64..9, -2.0f64..2.0), 0..8)) {
        let p = PolynomialInT::real(&coeffs).unwrap();
        let recomputed: f64 = p.terms().values().map(|a| a.norm()).sum();
        prop_assert!((p.ell1() - recomputed).abs() <= 1e-12);
    }
}

#[test]
fn identity_against_zero_is_geometric_sum() {
    for j in [1usize, 5, 32] {
        let dim = 40;
        let seq = WeightedVectorSequence::canonical(dim, j).unwrap();
        let d = wot_distance(&OperatorMatrix::identity(dim, Basis::Atom), &OperatorMatrix::zeros(dim, Basis::Atom), &seq).unwrap();
        let oracle: f64 = (1..=j).map(|k| 0.25f64.powi(k as i32)).sum();
        assert!((d - oracle).abs() < 1e-15);
    }
}

#[test]
fn half_turn_rotation_against_identity() {
    let t = rotation_koopman(&RotationSpec::new(0.5, 10).unwrap());
    let seq = WeightedVectorSequence::canonical(t.dim(), 32).unwrap();
    let d = wot_distance(&t, &OperatorMatrix::identity(t.dim(), Basis::Fourier), &seq).unwrap();
    // diagonal entries |e^{πik} − 1| are 2 for odd k and 0 for even k
    let mut oracle = 0.0;
    for k in -10i64..=10 {
        let j = fourier_index(k) as i32 + 1;
        if k.rem_euclid(2) == 1 {
            oracle += 2.0 * 0.25f64.powi(j);
        }
    }
    assert!((d - oracle).abs() < 1e-14);
}

#[test]
fn polynomial_of_cyclic_shift_is_circulant() {
    let m = 6;
    let s = cyclic_shift(m).unwrap();
    let p = PolynomialInT::real(&[(-2, 0.1), (0, 0.2), (3, 0.3), (8, 0.4)]).unwrap();
    let q = apply_polynomial(&s, &p).unwrap();
    // direct construction from the folded coefficient vector
    let mut first = [0.0; 6];
    for (n, a) in [(-2i64, 0.1), (0, 0.2), (3, 0.3), (8, 0.4)] {
        first[n.rem_euclid(m as i64) as usize] += a;
    }
    for i in 0..m {
        for j in 0..m {
            assert!((q.get(i, j) - C64::new(first[(i + m - j) % m], 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn shifted_limits_obey_lipschitz_bound() {
    let t = rotation_koopman(&RotationSpec::golden(8).unwrap());
    let seq = WeightedVectorSequence::canonical(t.dim(), t.dim()).unwrap();
    let l = left_composition_lipschitz(&t, &seq).unwrap();
    let id = OperatorMatrix::identity(t.dim(), Basis::Fourier);
    for n in [3i64, 13, 55] {
        let eps = wot_distance(&t.power(n).unwrap(), &id, &seq).unwrap();
        let shifted = wot_distance(&t.power(n + 1).unwrap(), &t.compose(&id).unwrap(), &seq).unwrap();
        assert!(shifted <= l * eps + 1e-12);
    }
}
