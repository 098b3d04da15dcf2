//! Executable checks of the variation inequalities and their equality cases.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gridfn::{total_variation, GridFunction};
use crate::lattice::{LatticeBox, LatticePoint};
use crate::maxop::{BallSpec, Geometry};
use crate::varanalysis::{adaptive_variation, constant_upper_bound, truncated_variation_maxfn, StopReason};

/// Radius limit used when none is given.
pub const DEFAULT_R_MAX: u64 = 1024;

/// How one function compares against the sharp constant.
#[derive(Clone, Debug, PartialEq)]
pub struct SharpnessRecord {
    /// `|f|`, the function actually averaged.
    pub support: Vec<(LatticePoint, BigRational)>,
    pub l1_norm: BigRational,
    pub spec: BallSpec,
    pub truncation_radius: u64,
    /// Truncated `Var Mf / ‖f‖₁`.
    pub ratio: BigRational,
    /// Upper bound for the sharp constant.
    pub bound: BigRational,
    /// `bound - ratio`; negative would contradict the inequality.
    pub gap: BigRational,
    pub is_delta: bool,
    pub trace: Vec<(u64, BigRational)>,
    pub stop: StopReason,
}

impl SharpnessRecord {
    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn gap_nonnegative(&self) -> bool {
        !self.gap.is_negative()
    }

    fn from_variation(
        f: &GridFunction<BigRational>,
        spec: BallSpec,
        r: u64,
        var: BigRational,
        bound: BigRational,
        trace: Vec<(u64, BigRational)>,
        stop: StopReason,
    ) -> Self {
        let l1 = f.l1_norm();
        let ratio = var / &l1;
        SharpnessRecord {
            support: f.iter().map(|(p, v)| (p.clone(), v.clone())).collect(),
            l1_norm: l1,
            spec,
            truncation_radius: r,
            gap: &bound - &ratio,
            ratio,
            bound,
            is_delta: f.is_delta(),
            trace,
            stop,
        }
    }
}

/// Runs the adaptive truncation on `|f|` and measures it against the constant.
pub fn verify_inequality(f: &GridFunction<BigRational>, spec: BallSpec, epsilon: &BigRational) -> Result<SharpnessRecord> {
    verify_inequality_to(f, spec, epsilon, DEFAULT_R_MAX)
}

pub fn verify_inequality_to(
    f: &GridFunction<BigRational>,
    spec: BallSpec,
    epsilon: &BigRational,
    r_max: u64,
) -> Result<SharpnessRecord> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.absolutize();
    let rep = adaptive_variation(&f, spec, epsilon, r_max)?;
    let bound = constant_upper_bound(spec)?;
    let r = rep.truncation_box.upper().0[0] as u64;
    Ok(SharpnessRecord::from_variation(&f, spec, r, rep.truncated_var, bound, rep.convergence_trace, rep.stop))
}

/// Record at one fixed truncation radius (no doubling).
pub fn sharpness_at(f: &GridFunction<BigRational>, spec: BallSpec, r: u64) -> Result<SharpnessRecord> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.absolutize();
    let var = truncated_variation_maxfn(&f, spec, r)?;
    let bound = constant_upper_bound(spec)?;
    let trace = vec![(r, var.clone())];
    Ok(SharpnessRecord::from_variation(&f, spec, r, var, bound, trace, StopReason::RadiusLimit))
}

/// The chain `Var M̃f ≤ Var f ≤ 2‖f‖₁` on `ℤ`, for `|f|`.
#[derive(Clone, Debug, PartialEq)]
pub struct UncenteredChainReport {
    pub truncation_radius: u64,
    /// Truncated, hence a lower bound for `Var M̃f`.
    pub maximal_variation: BigRational,
    pub variation: BigRational,
    pub twice_l1: BigRational,
}

impl UncenteredChainReport {
    pub fn maximal_below_variation(&self) -> bool {
        self.maximal_variation <= self.variation
    }

    pub fn variation_below_l1(&self) -> bool {
        self.variation <= self.twice_l1
    }

    pub fn holds(&self) -> bool {
        self.maximal_below_variation() && self.variation_below_l1()
    }
}

pub fn verify_uncentered_var_bound_1d(f: &GridFunction<BigRational>, r: u64) -> Result<UncenteredChainReport> {
    if f.dim() != 1 {
        return Err(Error::GeometryMismatch { geometry: Geometry::IntervalUncentered.name(), dim: f.dim() });
    }
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = f.absolutize();
    let spec = BallSpec::new(Geometry::IntervalUncentered, 1)?;
    Ok(UncenteredChainReport {
        truncation_radius: r,
        maximal_variation: truncated_variation_maxfn(&f, spec, r)?,
        variation: total_variation(&f),
        twice_l1: f.l1_norm() * BigRational::from_integer(2.into()),
    })
}

fn random_points(rng: &mut ChaCha8Rng, d: usize, radius: u64, count: usize) -> Result<Vec<LatticePoint>> {
    let side = 2 * radius as u128 + 1;
    let volume = side.checked_pow(d as u32).filter(|&v| v <= usize::MAX as u128);
    let volume = volume.ok_or_else(|| Error::InvalidArgument("sampling box too large".into()))? as usize;
    if count > volume {
        return Err(Error::InvalidArgument(format!("{count} distinct points do not fit in a box of {volume}")));
    }
    let bx = LatticeBox::centered(d, radius);
    Ok(sample(rng, volume, count)
        .into_iter()
        .map(|mut idx| {
            let mut c = vec![0i64; d];
            for a in (0..d).rev() {
                c[a] = bx.lower().0[a] + (idx % side as usize) as i64;
                idx /= side as usize;
            }
            LatticePoint(c)
        })
        .collect())
}

fn random_function(
    seed: u64,
    d: usize,
    radius: u64,
    count: usize,
    value_bound: u32,
    signed: bool,
) -> Result<GridFunction<BigRational>> {
    if d == 0 || count == 0 || value_bound == 0 {
        return Err(Error::InvalidArgument("dimension, support count and value bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(&mut rng, d, radius, count)?;
    let entries: Vec<_> = points
        .into_iter()
        .map(|p| {
            let num = rng.gen_range(1..=value_bound as i64);
            let den = rng.gen_range(1..=value_bound as i64);
            let sign = if signed && rng.gen_bool(0.5) { -1 } else { 1 };
            (p, BigRational::new((sign * num).into(), den.into()))
        })
        .collect();
    GridFunction::from_entries(d, entries)
}

/// Deterministic random function: `count` distinct points uniform in
/// `[-radius, radius]^d`, values `p/q` with `p, q` uniform in `1..=value_bound`
/// (ChaCha8 seeded with `seed`).
pub fn random_gridfn(seed: u64, d: usize, radius: u64, count: usize, value_bound: u32) -> Result<GridFunction<BigRational>> {
    random_function(seed, d, radius, count, value_bound, false)
}

/// As [`random_gridfn`] with a uniformly random sign on every value.
pub fn random_signed_gridfn(
    seed: u64,
    d: usize,
    radius: u64,
    count: usize,
    value_bound: u32,
) -> Result<GridFunction<BigRational>> {
    random_function(seed, d, radius, count, value_bound, true)
}

/// Value ratios `b : a` of the two-point family, smallest first.
pub const TWO_POINT_RATIOS: [(u32, u32); 9] = [(1, 9), (1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (4, 5), (1, 1)];

/// Functions scanned for near-extremality.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanFamily {
    /// The unit delta at the origin.
    Delta,
    /// The delta plus every `a·δ_0 + b·δ_v` with `1 ≤ |v|₁ ≤ max_distance`,
    /// `v` up to the symmetries of the lattice (coordinate permutations and
    /// sign changes, under which every operator here is invariant), and
    /// `b : a` from `ratios`.
    TwoPoint { max_distance: u64, ratios: Vec<(u32, u32)> },
}

impl ScanFamily {
    pub fn two_point(max_distance: u64) -> Self {
        ScanFamily::TwoPoint { max_distance, ratios: TWO_POINT_RATIOS.to_vec() }
    }

    pub fn members(&self, d: usize) -> Result<Vec<GridFunction<BigRational>>> {
        let one = BigRational::from_integer(1.into());
        let origin = LatticePoint::origin(d);
        let mut out = vec![GridFunction::delta(origin.clone(), one)];
        if let ScanFamily::TwoPoint { max_distance, ratios } = self {
            for v in canonical_offsets(d, *max_distance) {
                for &(b, a) in ratios {
                    let entries = [
                        (origin.clone(), BigRational::from_integer(a.into())),
                        (v.clone(), BigRational::from_integer(b.into())),
                    ];
                    out.push(GridFunction::from_entries(d, entries)?);
                }
            }
        }
        Ok(out)
    }
}

/// Offsets `v` with `v_1 ≥ v_2 ≥ … ≥ v_d ≥ 0` and `1 ≤ |v|₁ ≤ max`.
fn canonical_offsets(d: usize, max: u64) -> Vec<LatticePoint> {
    fn rec(d: usize, left: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
        if cur.len() == d {
            if cur.iter().any(|&x| x != 0) {
                out.push(LatticePoint(cur.clone()));
            }
            return;
        }
        for x in 0..=left.min(cap) {
            cur.push(x);
            rec(d, left - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max as i64, max as i64, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| (p.l1_norm(), p.clone()));
    out
}

/// Every family member measured at truncation radius `r`, sorted by gap
/// (then by support) so that the closest approaches to the bound come first.
pub fn scan_extremizers(spec: BallSpec, family: &ScanFamily, r: u64) -> Result<Vec<SharpnessRecord>> {
    let members = family.members(spec.dim())?;
    let mut records = members
        .par_iter()
        .map(|f| sharpness_at(f, spec, r))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| match a.gap.cmp(&b.gap) {
        Ordering::Equal => a.support.cmp(&b.support),
        o => o,
    });
    Ok(records)
}

/// Smallest gap among non-delta records: the observed sharpness margin.
pub fn sharpness_margin(records: &[SharpnessRecord]) -> Option<BigRational> {
    records.iter().filter(|r| !r.is_delta).map(|r| r.gap.clone()).min()
}

/// Whether every non-delta record has a strictly positive gap and none is negative.
pub fn consistent_with_uniqueness(records: &[SharpnessRecord]) -> bool {
    records.iter().all(|r| r.gap_nonnegative() && (r.is_delta || r.gap > BigRational::zero()))
}
