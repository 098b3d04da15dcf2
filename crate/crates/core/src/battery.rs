//! Canned check batteries: lattice-count lemmas, fast-vs-brute-force
//! agreement, and sharpness of the variation inequalities.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{constant_enclosure, uncentered_constant_partial, ConstantKind};
use crate::error::Result;
use crate::gridfn::GridFunction;
use crate::lattice::{check_gap_monotonicity, check_log_concavity, ShellTable};
use crate::maxop::{maximal_witness, BallSpec, Geometry};
use crate::oracle::{brute_ball_count, brute_centered_l1, brute_uncentered_cube, required_span};
use crate::lattice::LatticePoint;
use crate::varanalysis::truncated_variation_maxfn;
use crate::verify::{
    consistent_with_uniqueness, random_gridfn, scan_extremizers, sharpness_margin, verify_inequality, ScanFamily,
};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// A function exhibiting the failure, for replay.
    pub witness: Option<GridFunction<BigRational>>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into(), witness: None }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Log-concavity of `N_{1,d}` for `d ≤ lc_dim`, `k ≤ lc_k`; gap monotonicity for
/// `d ≤ gap_dim`, `k ≤ gap_k`; recurrence against enumeration for `d ≤ 4, k ≤ 12`.
pub fn lemma_battery(lc_dim: usize, lc_k: u64, gap_dim: usize, gap_k: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for d in 1..=lc_dim {
        let v = check_log_concavity(d, lc_k)?;
        out.push(Check::new(format!("log-concavity d={d} k<={lc_k}"), v.is_empty(), format!("{} violations", v.len())));
    }
    for d in 1..=gap_dim {
        let v = check_gap_monotonicity(d, gap_k)?;
        out.push(Check::new(format!("gap monotonicity d={d} k<={gap_k}"), v.is_empty(), format!("{} violations", v.len())));
    }
    let mut mismatches = 0;
    for d in 1..=4 {
        let t = ShellTable::new(d, 12)?;
        for k in 0..=12 {
            if t.count_u128(k) != Some(brute_ball_count(d, k)) {
                mismatches += 1;
            }
        }
    }
    out.push(Check::new("recurrence vs enumeration d<=4 k<=12", mismatches == 0, format!("{mismatches} mismatches")));
    Ok(out)
}

/// Geometries (with dimension) covered by the oracle battery.
pub const ORACLE_CASES: [(Geometry, usize); 5] = [
    (Geometry::IntervalCentered, 1),
    (Geometry::IntervalUncentered, 1),
    (Geometry::L1Centered, 2),
    (Geometry::CubeUncentered, 1),
    (Geometry::CubeUncentered, 2),
];

/// Support radius of the oracle battery's random functions.
pub const ORACLE_SUPPORT_RADIUS: u64 = 6;
/// Query points per instance in dimension two (every point is queried in dimension one).
pub const ORACLE_QUERIES_2D: usize = 12;

/// Fast evaluator against brute force on `instances` random functions per
/// geometry. Instance `i` of a geometry draws its function from seed
/// `seed · 10⁶ + 1000 · case + i`: 1 to 5 support points in `[-6, 6]^d`,
/// values `p/q` with `p, q ≤ 16`. In dimension one every `n ∈ [-9, 9]` is
/// queried, in dimension two the support points plus twelve uniform points of
/// `[-9, 9]²`.
pub fn oracle_battery(seed: u64, instances: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (case, &(geometry, d)) in ORACLE_CASES.iter().enumerate() {
        let spec = BallSpec::new(geometry, d)?;
        let mut agreements = 0;
        let mut first_failure: Option<(GridFunction<BigRational>, String)> = None;
        for i in 0..instances {
            let s = seed.wrapping_mul(1_000_000).wrapping_add(1000 * case as u64 + i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let count = rng.gen_range(1..=5);
            let f = random_gridfn(s, d, ORACLE_SUPPORT_RADIUS, count, 16)?;
            let queries: Vec<LatticePoint> = if d == 1 {
                (-9..=9).map(|n| LatticePoint(vec![n])).collect()
            } else {
                f.iter()
                    .map(|(p, _)| p.clone())
                    .chain((0..ORACLE_QUERIES_2D).map(|_| {
                        LatticePoint((0..d).map(|_| rng.gen_range(-9..=9)).collect())
                    }))
                    .collect()
            };
            let mut ok = true;
            for n in &queries {
                let fast = maximal_witness(&f, spec, n)?;
                let slow = if geometry.is_centered() {
                    let r = f.iter().map(|(p, _)| p.l1_distance(n)).max().unwrap_or(0);
                    brute_centered_l1(&f, n, r)?
                } else {
                    brute_uncentered_cube(&f, n, required_span(&f, n.coords()))?
                };
                if fast != slow {
                    ok = false;
                    if first_failure.is_none() {
                        first_failure = Some((f.clone(), format!("at {n}: fast {fast:?}, brute force {slow:?}")));
                    }
                    break;
                }
            }
            agreements += ok as usize;
        }
        let mut check = Check::new(
            format!("oracle agreement {spec}"),
            agreements == instances,
            format!("{agreements}/{instances} exact agreements"),
        );
        if let Some((f, why)) = first_failure {
            check.detail = format!("{}; first disagreement {why}", check.detail);
            check.witness = Some(f);
        }
        out.push(check);
    }
    Ok(out)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Sharpness checks at moderate scale: deltas approach the constants from
/// below and non-delta functions keep a positive gap.
pub fn sharpness_battery(scan_radius: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let c1 = BallSpec::new(Geometry::IntervalCentered, 1)?;
    let delta1 = GridFunction::delta(LatticePoint::origin(1), BigRational::one());
    let delta2 = GridFunction::delta(LatticePoint::origin(2), BigRational::one());

    let r = 10_000u64;
    let v = truncated_variation_maxfn(&delta1, c1, r)?;
    let expect = q(2, 1) * (BigRational::one() - q(1, 2 * r as i64 + 1));
    out.push(Check::new("centered delta on Z, R=10^4, closed form", v == expect, format!("Var = 2 - {}", q(2, 1) - &v)));

    let rec = verify_inequality(&delta1, c1, &q(1, 1000))?;
    out.push(Check::new(
        "centered delta on Z, adaptive",
        rec.gap_nonnegative() && rec.gap < q(1, 400),
        format!("gap {} at R={}", rec.gap, rec.truncation_radius),
    ));

    let pair = GridFunction::from_entries(1, [(LatticePoint(vec![0]), q(1, 1)), (LatticePoint(vec![1]), q(1, 1))])?;
    let rec = verify_inequality(&pair, c1, &q(1, 1000))?;
    out.push(Check::new("two adjacent unit masses keep a gap", rec.gap > BigRational::zero(), format!("gap {}", rec.gap)));

    let cube2 = BallSpec::new(Geometry::CubeUncentered, 2)?;
    let v = truncated_variation_maxfn(&delta2, cube2, 200)?;
    out.push(Check::new(
        "uncentered cube delta in Z^2, R=200",
        q(118, 10) < v && v < q(12, 1),
        format!("Var = {}", crate::scalar::format_decimal(&v, 8)),
    ));

    let e = constant_enclosure(1, 10, ConstantKind::UncenteredCube)?;
    out.push(Check::new("uncentered constant d=1", e.lower == q(2, 1) && e.upper == q(2, 1), e.render(4)));
    let mut ok = true;
    for k in [1u64, 10, 1000] {
        ok &= uncentered_constant_partial(2, k)? == q(12, 1) - q(8, k as i64 + 1);
    }
    out.push(Check::new("uncentered constant d=2 partial sums telescope", ok, "12 - 8/(K+1) for K in {1, 10, 1000}"));

    for spec in [c1, BallSpec::new(Geometry::L1Centered, 2)?, cube2] {
        let recs = scan_extremizers(spec, &ScanFamily::two_point(if spec.dim() == 1 { 5 } else { 3 }), scan_radius)?;
        let mut check = Check::new(
            format!("two-point scan {spec} R={scan_radius}"),
            consistent_with_uniqueness(&recs),
            format!(
                "{} records, margin {}",
                recs.len(),
                sharpness_margin(&recs).map(|m| crate::scalar::format_decimal(&m, 6)).unwrap_or_default()
            ),
        );
        if let Some(bad) = recs.iter().find(|r| !r.is_delta && r.gap <= BigRational::zero()) {
            check.witness = Some(GridFunction::from_entries(spec.dim(), bad.support.clone())?);
        }
        out.push(check);
    }
    Ok(out)
}
