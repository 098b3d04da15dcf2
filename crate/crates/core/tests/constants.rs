use hlvar::constants::{centered_constant_terms, tail_majorant, uncentered_constant_term};
use hlvar::{
    centered_1d_sharp_constant, centered_constant_partial, constant_enclosure, uncentered_constant_partial,
    BigRational, ConstantKind, Error,
};
use num_traits::ToPrimitive;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn uncentered_d2_partial_sums_telescope() {
    for k in [0u64, 1, 2, 10, 57, 1000] {
        assert_eq!(uncentered_constant_partial(2, k).unwrap(), q(12, 1) - q(8, k as i64 + 1), "K={k}");
    }
    let e = constant_enclosure(2, 999, ConstantKind::UncenteredCube).unwrap();
    assert_eq!(e.lower, q(12, 1) - q(8, 1000));
    assert_eq!(e.upper, q(12, 1));
}

#[test]
fn centered_d2_matches_reciprocal_sum() {
    let mut sum = q(0, 1);
    for k in 1..=200i64 {
        sum += q(1, k * k + (k + 1) * (k + 1));
        assert_eq!(centered_constant_partial(2, k as u64).unwrap(), q(4, 1) + q(8, 1) * &sum);
    }
}

/// `Σ_{k ∈ ℤ} 1/(k² + (k+1)²) = π tanh(π/2)` gives `C(2) = 4 + 4(π tanh(π/2) - 2)`.
#[test]
fn centered_d2_enclosure_contains_the_series_value() {
    let pi = std::f64::consts::PI;
    let c2 = 4.0 + 4.0 * (pi * (pi / 2.0).tanh() - 2.0);
    let e = constant_enclosure(2, 1000, ConstantKind::CenteredL1).unwrap();
    assert!(e.lower.to_f64().unwrap() <= c2 + 1e-12 && c2 - 1e-12 <= e.upper.to_f64().unwrap());
    assert!(e.width() <= q(1, 100));
}

#[test]
fn trivial_cases() {
    assert_eq!(centered_1d_sharp_constant(), q(2, 1));
    let e = constant_enclosure(1, 10, ConstantKind::UncenteredCube).unwrap();
    assert_eq!((e.lower.clone(), e.upper.clone()), (q(2, 1), q(2, 1)));
    assert_eq!(constant_enclosure(2, 0, ConstantKind::CenteredL1).unwrap().lower, q(4, 1));
    assert!(matches!(centered_constant_terms(1, 5), Err(Error::InvalidArgument(_))));
}

#[test]
fn enclosures_nest_as_terms_grow() {
    for kind in [ConstantKind::CenteredL1, ConstantKind::UncenteredCube] {
        for d in 2..=5 {
            let mut prev = constant_enclosure(d, 4, kind).unwrap();
            for k in [8u64, 16, 64, 256] {
                let e = constant_enclosure(d, k, kind).unwrap();
                assert!(e.lower >= prev.lower && e.upper <= prev.upper, "{kind} d={d} K={k}");
                prev = e;
            }
        }
    }
}

#[test]
fn majorant_dominates_every_term_checked() {
    for d in 2..=7 {
        let m = tail_majorant(d, ConstantKind::UncenteredCube).unwrap();
        for k in m.crossover..=400 {
            let kk = BigRational::from_integer((k * (k + 1)).into());
            assert!(uncentered_constant_term(d, k) * kk <= m.c, "uncentered d={d} k={k}");
        }
        let m = tail_majorant(d, ConstantKind::CenteredL1).unwrap();
        let terms = centered_constant_terms(d, 400).unwrap();
        for k in m.crossover..=400 {
            let kk = BigRational::from_integer((k * (k + 1)).into());
            assert!(&terms[k as usize - 1] * kk <= m.c, "centered d={d} k={k}");
        }
    }
}

#[test]
fn constants_grow_with_dimension() {
    for kind in [ConstantKind::CenteredL1, ConstantKind::UncenteredCube] {
        let mut prev = q(0, 1);
        for d in 2..=6 {
            let e = constant_enclosure(d, 200, kind).unwrap();
            assert!(e.lower > prev);
            prev = e.upper.clone();
        }
    }
}
