//! Total variation of maximal functions.
//!
//! A maximal function of a finitely supported `f` is supported on all of
//! `ℤ^d`, so its variation is computed on the box `[-R, R]^d` and reported as a
//! lower bound (every omitted edge contributes a nonnegative amount).
//!
//! Along each axis line the neighbour-difference sum is rewritten as
//! `Σ c_i v_i` with `c_i ∈ {-2, …, 2}` nonzero only at string extrema and the
//! window ends, so exact arithmetic is only spent on a handful of values per
//! line. Those values are averages `mass / count`; terms sharing a count are
//! combined in the scalar type before the single exact division.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::constants::{centered_1d_sharp_constant, constant_enclosure, ConstantKind};
use crate::error::{Error, Result};
use crate::gridfn::{line_restriction, AxisLine, Grid, GridFunction};
use crate::lattice::{LatticeBox, LatticePoint, ShellTable};
use crate::maxop::{delta_cube_count, evaluate_on_box, BallSpec, Geometry};
use crate::scalar::{Average, Field, Scalar};
use crate::strings::{string_decomposition, variation_coefficients, TailContract};

/// Terms used for the constant enclosures that serve as theoretical caps.
pub const CAP_TERMS: u64 = 1000;

/// Variation of gridded averages over all in-box edges.
pub fn grid_variation<T: Scalar>(grid: &Grid<Average<T>>) -> T::Field {
    let b = grid.bounds();
    let d = b.dim();
    let counts = b.side_counts();
    let values = grid.values();
    let mut lines: Vec<(usize, usize, usize)> = Vec::new();
    for axis in 0..d {
        let stride: usize = counts[axis + 1..].iter().map(|&c| c as usize).product();
        let len = counts[axis] as usize;
        // line starts: flat indices whose `axis` coordinate is at the lower face
        let block = stride * len;
        for start in (0..values.len()).filter(|i| i % block < stride) {
            lines.push((start, stride, len));
        }
    }
    let per_line: Vec<Vec<(u128, T)>> = lines
        .par_iter()
        .with_min_len(16)
        .map(|&(start, stride, len)| {
            let mut coeffs = Vec::new();
            variation_coefficients(len, |t| &values[start + t * stride], |a, b| a.cmp_value(b), &mut coeffs);
            coeffs
                .into_iter()
                .map(|(t, c)| {
                    let v = &values[start + t * stride];
                    (v.count, v.mass.clone() * T::from_i8(c).expect("small coefficient"))
                })
                .collect()
        })
        .collect();
    let mut grouped: BTreeMap<u128, T> = BTreeMap::new();
    for (count, m) in per_line.into_iter().flatten() {
        let slot = grouped.entry(count).or_insert_with(T::zero);
        *slot = slot.clone() + m;
    }
    T::Field::sum_quotients(grouped.into_iter().map(|(count, m)| (m.to_field(), count)).collect())
}

/// Truncated variation of the maximal function of `f` on `[-R, R]^d`, in the
/// scalar type of `f`.
pub fn truncated_variation_with<T: Scalar>(f: &GridFunction<T>, spec: BallSpec, r: u64) -> Result<T::Field> {
    let need = f.support_radius();
    if r < need {
        return Err(Error::TruncationTooSmall { given: r, required: need });
    }
    let grid = evaluate_on_box(f, spec, &LatticeBox::centered(spec.dim(), r))?;
    Ok(grid_variation(&grid))
}

/// Exact truncated variation of the maximal function of `f` on `[-R, R]^d`.
///
/// Values are first scaled to integers; when every partial mass times every
/// averaging count stays far from overflow the sweep runs in `i128`.
pub fn truncated_variation_maxfn(f: &GridFunction<BigRational>, spec: BallSpec, r: u64) -> Result<BigRational> {
    if f.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: f.dim() });
    }
    let need = f.support_radius();
    if r < need {
        return Err(Error::TruncationTooSmall { given: r, required: need });
    }
    let (ints, scale) = f.integer_scaled();
    let scale = BigRational::from_integer(scale);
    match ints.to_i128_if_safe(max_average_count(spec, r, need)) {
        Some(small) => Ok(truncated_variation_with(&small, spec, r)? / scale),
        None => Ok(truncated_variation_with(&ints, spec, r)? / scale),
    }
}

/// Upper bound on any averaging count met while evaluating on `[-R, R]^d`.
fn max_average_count(spec: BallSpec, r: u64, support_radius: u64) -> u128 {
    let d = spec.dim() as u32;
    let reach = r as u128 + support_radius as u128;
    match spec.geometry() {
        Geometry::IntervalCentered | Geometry::IntervalUncentered => 2 * reach + 1,
        // N_{1,d}(ρ) ≤ (2ρ+1)^d and cube boxes have at most 2·reach+1 points per side
        Geometry::L1Centered => (2 * d as u128 * reach + 1).saturating_pow(d),
        Geometry::CubeUncentered => (2 * reach + 2).saturating_pow(d),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Successive truncations differed by less than epsilon.
    Converged,
    /// The radius limit was reached first.
    RadiusLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariationReport {
    pub operator: BallSpec,
    pub truncation_box: LatticeBox,
    /// Certified lower bound on the variation of the maximal function.
    pub truncated_var: BigRational,
    /// `(R, truncated variation at R)` for every radius tried.
    pub convergence_trace: Vec<(u64, BigRational)>,
    /// Constant times `‖f‖₁`, using the upper end of the constant's enclosure.
    pub theoretical_cap: BigRational,
    pub cap_satisfied: bool,
    pub stop: StopReason,
}

/// Upper bound for the sharp constant of `spec` (exact where known in closed
/// form, else the upper end of a certified enclosure).
pub fn constant_upper_bound(spec: BallSpec) -> Result<BigRational> {
    let d = spec.dim();
    match spec.geometry() {
        Geometry::IntervalCentered => Ok(centered_1d_sharp_constant()),
        Geometry::L1Centered if d == 1 => Ok(centered_1d_sharp_constant()),
        Geometry::L1Centered => Ok(constant_enclosure(d, CAP_TERMS, ConstantKind::CenteredL1)?.upper),
        Geometry::IntervalUncentered | Geometry::CubeUncentered => {
            Ok(constant_enclosure(d, CAP_TERMS, ConstantKind::UncenteredCube)?.upper)
        }
    }
}

/// Doubles the truncation radius from the support radius until two successive
/// truncated variations differ by less than `epsilon` or `r_max` is reached.
pub fn adaptive_variation(
    f: &GridFunction<BigRational>,
    spec: BallSpec,
    epsilon: &BigRational,
    r_max: u64,
) -> Result<VariationReport> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let bound = constant_upper_bound(spec)?;
    let cap = bound * f.l1_norm().abs();
    adaptive_with_cap(f, spec, epsilon, r_max, cap)
}

fn adaptive_with_cap(
    f: &GridFunction<BigRational>,
    spec: BallSpec,
    epsilon: &BigRational,
    r_max: u64,
    theoretical_cap: BigRational,
) -> Result<VariationReport> {
    let start = f.support_radius().max(1);
    let r_max = r_max.max(start);
    let mut trace: Vec<(u64, BigRational)> = Vec::new();
    let mut r = start;
    let stop = loop {
        let v = truncated_variation_maxfn(f, spec, r)?;
        let converged = trace.last().is_some_and(|(_, prev)| (&v - prev).abs() < *epsilon);
        trace.push((r, v));
        if converged {
            break StopReason::Converged;
        }
        if r >= r_max {
            break StopReason::RadiusLimit;
        }
        r = (r * 2).min(r_max);
    };
    let (r, truncated_var) = trace.last().cloned().expect("at least one radius");
    Ok(VariationReport {
        operator: spec,
        truncation_box: LatticeBox::centered(spec.dim(), r),
        cap_satisfied: truncated_var <= theoretical_cap,
        truncated_var,
        convergence_trace: trace,
        theoretical_cap,
        stop,
    })
}

fn line_offsets(p: &LatticePoint, line: &AxisLine) -> Result<Vec<u64>> {
    if p.dim() != line.base.dim() {
        return Err(Error::DimensionMismatch { expected: line.base.dim(), found: p.dim() });
    }
    Ok((0..p.dim()).filter(|&i| i != line.axis).map(|i| p.0[i].abs_diff(line.base.0[i])).collect())
}

/// Largest share of the variation of the centered ℓ¹ maximal function along
/// `line` that a unit mass at `p` can produce: `2 / N_{1,d}(dist₁(line, p))`.
pub fn line_contribution_cap_l1(p: &LatticePoint, line: &AxisLine) -> Result<BigRational> {
    let k: u64 = line_offsets(p, line)?.iter().sum();
    let n = ShellTable::new(p.dim(), k)?.count(k).clone();
    Ok(BigRational::new(2.into(), BigInt::from(n)))
}

/// Cube analogue: `2 / ((k+1)^j · max(1, k)^{d-j})` with `k` the ℓ∞ distance
/// from `p` to `line` and `j` the number of fixed coordinates attaining it.
pub fn line_contribution_cap_cube(p: &LatticePoint, line: &AxisLine) -> Result<BigRational> {
    let offs = line_offsets(p, line)?;
    let k = offs.iter().copied().max().unwrap_or(0);
    let j = if k == 0 { 0 } else { offs.iter().filter(|&&x| x == k).count() as u32 };
    let d = p.dim() as u32;
    let den = BigInt::from(k + 1).pow(j) * BigInt::from(k.max(1)).pow(d - j);
    Ok(BigRational::new(2.into(), den))
}

/// Unit-delta maximal function at the origin, on `[-R, R]^d`, from the closed
/// forms rather than a search.
pub fn delta_grid(spec: BallSpec, r: u64) -> Result<Grid<Average<i128>>> {
    let d = spec.dim();
    let bx = LatticeBox::centered(d, r);
    let origin = vec![0i64; d];
    let values = match spec.geometry() {
        Geometry::IntervalCentered | Geometry::L1Centered => {
            let far = d as u64 * r;
            let shells = ShellTable::new(d, far)?;
            if shells.count_u128(far).is_none() {
                return Err(Error::InvalidArgument(format!("ball counts up to radius {far} overflow")));
            }
            bx.points()
                .map(|n| Average::new(1, shells.count_u128(n.l1_norm()).expect("checked above")))
                .collect()
        }
        Geometry::IntervalUncentered | Geometry::CubeUncentered => {
            bx.points().map(|n| Average::new(1, delta_cube_count(&origin, n.coords()))).collect()
        }
    };
    Grid::new(bx, values)
}

/// Exact variation on `[-R, R]^d` of the maximal function of a unit delta,
/// from the closed-form pointwise values.
pub fn delta_variation_closed_form(spec: BallSpec, r: u64) -> Result<BigRational> {
    Ok(grid_variation(&delta_grid(spec, r)?))
}

/// Which distance groups lines around a source point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineMetric {
    /// `Σ_{i ≠ axis} |base_i - p_i|`.
    L1,
    /// `max_{i ≠ axis} |base_i - p_i|`.
    LInf,
}

/// Per-distance sums of tail-completed line variations.
///
/// For every axis line through the grid, the in-box variation is completed
/// with the two jumps from the window ends down to zero; when the function
/// decays monotonically beyond the box (as for maximal functions of a delta)
/// this is the whole-line variation. Entry `k` sums the lines at distance `k`
/// from `p`; only distances whose lines all lie in the box are listed.
pub fn line_variation_by_distance<T: Scalar>(
    grid: &Grid<Average<T>>,
    p: &LatticePoint,
    metric: LineMetric,
) -> Result<Vec<T::Field>> {
    let b = grid.bounds();
    let d = b.dim();
    if p.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
    }
    // largest k such that every line at distance k from p meets the box
    let complete = (0..d)
        .map(|i| (p.0[i] - b.lower().0[i]).min(b.upper().0[i] - p.0[i]))
        .min()
        .unwrap_or(0);
    if complete < 0 {
        return Ok(Vec::new());
    }
    let complete = complete as u64;
    let values = grid.map(Average::value);
    let mut sums: Vec<Vec<T::Field>> = vec![Vec::new(); complete as usize + 1];
    for axis in 0..d {
        let mut face_lo = b.lower().0.clone();
        let mut face_hi = b.upper().0.clone();
        face_lo[axis] = 0;
        face_hi[axis] = 0;
        let face = LatticeBox::new(LatticePoint(face_lo), LatticePoint(face_hi))?;
        for base in face.points() {
            let line = AxisLine::new(axis, base)?;
            let offs = line_offsets(p, &line)?;
            let k = match metric {
                LineMetric::L1 => offs.iter().sum::<u64>(),
                LineMetric::LInf => offs.iter().copied().max().unwrap_or(0),
            };
            if k > complete {
                continue;
            }
            let seq = line_restriction(&values, &line);
            let sd = string_decomposition(&seq, b.lower().0[axis], &TailContract::decaying())?;
            sums[k as usize].push(sd.full_variation.expect("monotone tails requested"));
        }
    }
    Ok(sums.into_iter().map(T::Field::sum_all).collect())
}
