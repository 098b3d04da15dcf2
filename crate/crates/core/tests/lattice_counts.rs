use hlvar::lattice::l1_ball_points_capped;
use hlvar::oracle::brute_ball_count;
use hlvar::{admissible_boxes_through, l1_ball_count, l1_ball_points, BigRational, LatticeBox, LatticePoint, ShellTable};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn recurrence_matches_enumeration() {
    for d in 1..=4 {
        let t = ShellTable::new(d, 12).unwrap();
        for k in 0..=12 {
            assert_eq!(t.count_u128(k), Some(brute_ball_count(d, k)), "d={d} k={k}");
            assert_eq!(l1_ball_points(d, k).unwrap().len() as u128, brute_ball_count(d, k));
        }
    }
}

#[test]
fn low_dimensional_closed_forms() {
    let t1 = ShellTable::new(1, 10_000).unwrap();
    for k in 0..=10_000u64 {
        assert_eq!(t1.count(k), &BigUint::from(2 * k + 1));
    }
    let t2 = ShellTable::new(2, 1000).unwrap();
    for k in 0..=1000u64 {
        assert_eq!(t2.count(k), &BigUint::from(k * k + (k + 1) * (k + 1)));
    }
}

#[test]
fn enumeration_respects_the_cap() {
    assert!(l1_ball_points_capped(3, 10, 100).is_err());
    assert_eq!(l1_ball_points_capped(3, 1, 7).unwrap().len(), 7);
}

proptest! {
    // The count of |x|₁ ≤ k in ℤ^d is symmetric in (d, k).
    #[test]
    fn count_is_symmetric(d in 1usize..8, k in 1u64..8) {
        prop_assert_eq!(l1_ball_count(d, k).unwrap(), l1_ball_count(k as usize, d as u64).unwrap());
    }

    #[test]
    fn counts_increase_and_ratios_decrease(d in 1usize..7, k in 1u64..300) {
        let t = ShellTable::new(d, k + 1).unwrap();
        prop_assert!(t.count(k) > t.count(k - 1));
        // N(k+1)/N(k) < N(k)/N(k-1)
        let (a, b, c) = (t.count(k - 1), t.count(k), t.count(k + 1));
        prop_assert!(c * a < b * b);
    }

    #[test]
    fn shells_sum_to_the_ball(d in 1usize..6, k in 0u64..50) {
        let t = ShellTable::new(d, k).unwrap();
        let total: BigUint = (0..=k).map(|j| t.shell(j)).sum();
        prop_assert_eq!(&total, t.count(k));
    }

    #[test]
    fn admissible_boxes_are_cube_traces(
        point in prop::collection::vec(-3i64..=3, 2),
        lo in prop::collection::vec(-3i64..=0, 2),
        ext in prop::collection::vec(0i64..=3, 2),
    ) {
        let hi: Vec<i64> = lo.iter().zip(&ext).map(|(l, e)| l + e).collect();
        let support = LatticeBox::new(LatticePoint(lo), LatticePoint(hi)).unwrap();
        let p = LatticePoint(point);
        for b in admissible_boxes_through(&p, &support, 5).unwrap() {
            prop_assert!(b.contains(p.coords()));
            prop_assert!(b.intersects(&support));
            prop_assert!(b.is_cube_admissible());
            let (center, half) = b.realizing_cube().unwrap();
            // lattice points of the real cube, searched in a margin around the box
            let margin = LatticeBox::new(
                LatticePoint(b.lower().coords().iter().map(|x| x - 2).collect()),
                LatticePoint(b.upper().coords().iter().map(|x| x + 2).collect()),
            ).unwrap();
            for q in margin.points() {
                let inside = q.coords().iter().zip(&center).all(|(&x, c)| {
                    let diff = BigRational::from_integer(x.into()) - c;
                    diff <= half && -diff <= half
                });
                prop_assert_eq!(inside, b.contains(q.coords()), "box {} point {}", b, q);
            }
        }
    }
}

/// Lattice traces of real cubes with quarter-integer centers and sides are
/// exactly the admissible boxes.
#[test]
fn real_cube_traces_are_admissible() {
    let quarter = |n: i64| BigRational::new(n.into(), 4.into());
    let mut seen = std::collections::BTreeSet::new();
    for cx in -4..=4 {
        for cy in -4..=4 {
            for s in 0..=16 {
                let (center, half) = ([quarter(cx), quarter(cy)], quarter(s) / BigRational::from_integer(2.into()));
                let range = |c: &BigRational| {
                    let lo = (c - &half).ceil().to_integer();
                    let hi = (c + &half).floor().to_integer();
                    (i64::try_from(lo).unwrap(), i64::try_from(hi).unwrap())
                };
                let (x0, x1) = range(&center[0]);
                let (y0, y1) = range(&center[1]);
                if x0 > x1 || y0 > y1 {
                    continue;
                }
                let b = LatticeBox::new(LatticePoint(vec![x0, y0]), LatticePoint(vec![x1, y1])).unwrap();
                assert!(b.is_cube_admissible(), "{b}");
                seen.insert(b.side_counts());
            }
        }
    }
    // every count pair with |a - b| ≤ 1 up to side 4 is realized
    for a in 1..=4u64 {
        for b in 1..=4u64 {
            assert_eq!(seen.contains(&vec![a, b]), a.abs_diff(b) <= 1, "{a}x{b}");
        }
    }
}
