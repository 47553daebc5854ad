use proptest::prelude::*;
use weaklimit::lp::presets::{k_cycle, random_long_cycles, two_atom_swap};
use weaklimit::lp::{approx_eigenvector, lamperti_apply, p_norm, rokhlin_tower_find, LampertiOperator, NonsingularMapSpec};
use weaklimit::C64;

fn vector(k: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), k).prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn preset() -> NonsingularMapSpec {
    random_long_cycles(60, 5, 12, 17).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lamperti_is_isometric(f in vector(60), pi in 0usize..4) {
        let p = [1.0, 1.5, 2.0, 3.0][pi];
        let op = LampertiOperator::new(p, preset()).unwrap();
        let m = op.map().masses_f64();
        let tf = lamperti_apply(&op, &f).unwrap();
        prop_assert!((p_norm(&m, &tf, p) - p_norm(&m, &f, p)).abs() <= 1e-10 * p_norm(&m, &f, p).max(1.0));
    }

    #[test]
    fn integral_is_invariant_for_p_one(f in vector(60)) {
        let op = LampertiOperator::new(1.0, preset()).unwrap();
        let m = op.map().masses_f64();
        let tf = lamperti_apply(&op, &f).unwrap();
        let before: C64 = m.iter().zip(&f).map(|(w, z)| w * z).sum();
        let after: C64 = m.iter().zip(&tf).map(|(w, z)| w * z).sum();
        prop_assert!((before - after).norm() <= 1e-12);
    }

    #[test]
    fn modulus_commutes_with_operator(f in vector(60)) {
        let op = LampertiOperator::new(1.5, preset()).unwrap();
        let abs: Vec<C64> = f.iter().map(|z| C64::new(z.norm(), 0.0)).collect();
        let lhs: Vec<f64> = lamperti_apply(&op, &f).unwrap().iter().map(|z| z.norm()).collect();
        let rhs = lamperti_apply(&op, &abs).unwrap();
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - b.re).abs() <= 1e-12 && b.im == 0.0 && b.re >= 0.0);
        }
    }
}

#[test]
fn indicator_isometry_is_exact() {
    for map in [preset(), two_atom_swap(), k_cycle(30, 1).unwrap()] {
        let op = LampertiOperator::new(1.5, map).unwrap();
        assert!((0..op.dim()).all(|j| op.indicator_isometry_exact(j).unwrap()));
    }
}

#[test]
fn eigen_bound_on_random_tower() {
    let map = random_long_cycles(400, 40, 60, 3).unwrap();
    let tower = rokhlin_tower_find(&map, 10, 0.1).unwrap();
    tower.verify(&map).unwrap();
    for p in [1.0, 2.0] {
        let op = LampertiOperator::new(p, map.clone()).unwrap();
        let e = approx_eigenvector(&op, &tower, C64::new(0.0, 1.0)).unwrap();
        assert!((e.norm - 1.0).abs() < 1e-10);
        assert!(e.defect <= e.bound);
    }
}

#[test]
fn tower_from_other_map_is_rejected() {
    let a = random_long_cycles(100, 20, 30, 1).unwrap();
    let b = random_long_cycles(100, 20, 30, 2).unwrap();
    let tower = rokhlin_tower_find(&a, 10, 0.5).unwrap();
    let op = LampertiOperator::new(2.0, b).unwrap();
    assert!(approx_eigenvector(&op, &tower, C64::new(1.0, 0.0)).is_err());
}
