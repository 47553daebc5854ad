use num_rational::Rational64;
use num_traits::One;
use proptest::prelude::*;
use weaklimit::operator::{bistochastic_check, LinearMap};
use weaklimit::transformations::{
    closed_form_f1, closed_form_f2, folding_koopman, quadrature_coefficient, rank_one_build, rotation_koopman,
    FoldingMapSpec, IntervalPermutation, RankOneSpec, RotationSpec,
};
use weaklimit::C64;

#[test]
fn closed_forms_agree_with_quadrature_far_out() {
    for j in -60i64..=60 {
        assert!((closed_form_f1(j) - quadrature_coefficient(1, j)).norm() < 1e-10);
        assert!((closed_form_f2(j) - quadrature_coefficient(2, j)).norm() < 1e-10);
    }
}

#[test]
fn folding_matrix_is_a_contraction_compression() {
    let m = folding_koopman(&FoldingMapSpec::new(16).unwrap());
    assert!(m.operator_norm() <= 1.0 + 1e-9);
}

#[test]
fn rotation_powers_match_closed_form() {
    let spec = RotationSpec::new(0.1234567, 6).unwrap();
    let t = rotation_koopman(&spec);
    let modes = weaklimit::transformations::fourier_modes(6);
    for n in [1i64, 10, 123, 1000] {
        let p = t.power(n).unwrap();
        for (i, &k) in modes.iter().enumerate() {
            let expected = C64::from_polar(1.0, std::f64::consts::TAU * (k as f64) * (n as f64) * spec.alpha());
            assert!((p.get(i, i) - expected).norm() < 1e-9);
        }
    }
}

fn stationary_spec() -> impl Strategy<Value = (RankOneSpec, usize)> {
    (2usize..4, prop::collection::vec(0usize..3, 3), 2usize..5).prop_map(|(r, pattern, stages)| {
        let pattern: Vec<usize> = pattern.into_iter().cycle().take(r).collect();
        (RankOneSpec::stationary(r, pattern, stages).unwrap(), stages)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rank_one_stages_are_exact((spec, stages) in stationary_spec()) {
        let heights = spec.heights().unwrap();
        for stage in 1..=stages {
            let p = rank_one_build(&spec, stage).unwrap();
            prop_assert_eq!(p.atom_count(), heights[stage - 1]);
            prop_assert_eq!(p.total_mass().unwrap(), Rational64::one());
            let mut seen = vec![false; p.atom_count()];
            for &t in p.perm() {
                prop_assert!(!seen[t]);
                seen[t] = true;
            }
            prop_assert_eq!(p.heights(), &heights[..stage]);
        }
    }

    #[test]
    fn koopman_of_power_is_power_of_koopman(perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle(), n in 0i64..=50) {
        let p = IntervalPermutation::uniform(perm).unwrap();
        prop_assert_eq!(p.koopman().unwrap().power(n).unwrap(), p.power(n).koopman().unwrap());
        prop_assert!(bistochastic_check(&p.koopman().unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn matrix_free_powers_match_dense(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(), n in -40i64..40) {
        let p = IntervalPermutation::uniform(perm).unwrap();
        let x: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0)).collect();
        prop_assert_eq!(p.koopman_map().apply_power(n, &x).unwrap(), p.koopman().unwrap().apply_power(n, &x).unwrap());
    }
}

#[test]
fn chacon_recurrence() {
    let h = RankOneSpec::chacon(11).unwrap().heights().unwrap();
    for w in h.windows(2) {
        assert_eq!(w[1], 3 * w[0] + 1);
    }
    assert_eq!(h[10], 88573);
}
