use hlvar::battery::{oracle_battery, ORACLE_CASES};
use hlvar::maxop::{grid_values, maximal_witness};
use hlvar::oracle::{brute_centered_1d, brute_uncentered_1d, brute_variation};
use hlvar::varanalysis::grid_variation;
use hlvar::verify::random_gridfn;
use hlvar::{evaluate_on_box, BallSpec, Geometry, LatticeBox, LatticePoint};
use proptest::prelude::*;

#[test]
fn hundred_seeded_instances_per_geometry() {
    let checks = oracle_battery(7, 100).unwrap();
    assert_eq!(checks.len(), ORACLE_CASES.len());
    for c in &checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_dimensional_brute_force_on_whole_window(seed in any::<u64>(), count in 1usize..7) {
        let f = random_gridfn(seed, 1, 8, count, 20).unwrap();
        let c = BallSpec::new(Geometry::IntervalCentered, 1).unwrap();
        let u = BallSpec::new(Geometry::IntervalUncentered, 1).unwrap();
        for n in -12..=12 {
            let p = LatticePoint(vec![n]);
            prop_assert_eq!(maximal_witness(&f, c, &p).unwrap(), brute_centered_1d(&f, n, 25).unwrap());
            prop_assert_eq!(maximal_witness(&f, u, &p).unwrap(), brute_uncentered_1d(&f, n, 25).unwrap());
        }
    }

    #[test]
    fn grid_variation_matches_edge_sum(seed in any::<u64>(), count in 1usize..5, cube in any::<bool>()) {
        let f = random_gridfn(seed, 2, 4, count, 9).unwrap();
        let g = if cube { Geometry::CubeUncentered } else { Geometry::L1Centered };
        let grid = evaluate_on_box(&f, BallSpec::new(g, 2).unwrap(), &LatticeBox::centered(2, 7)).unwrap();
        prop_assert_eq!(grid_variation(&grid), brute_variation(&grid_values(&grid), false));
    }
}
