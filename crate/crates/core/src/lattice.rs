//! Lattice points, boxes, and exact counting in dilated cross-polytopes.
//!
//! `N_{1,d}(k)`, the number of points of `ℤ^d` with `|p|₁ ≤ k`, is computed
//! by fixing the last coordinate:
//!
//! ```text
//! N_{1,d}(k) = N_{1,d-1}(k) + 2 Σ_{j<k} N_{1,d-1}(j),    N_{1,0}(k) = 1
//! ```
//!
//! which a [`ShellTable`] evaluates with running prefix sums in `O(d·K)` big
//! integer additions.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default bound on the number of points an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_CAP`].
pub const ENUMERATION_CAP_ENV: &str = "HLVAR_ENUM_CAP";

/// The enumeration cap in force: `$HLVAR_ENUM_CAP` when set and valid.
pub fn enumeration_cap() -> u64 {
    std::env::var(ENUMERATION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn linf_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn l1_distance(&self, other: &Self) -> u64 {
        l1_distance(&self.0, &other.0)
    }

    pub fn offset(&self, axis: usize, by: i64) -> Self {
        let mut c = self.0.clone();
        c[axis] += by;
        Self(c)
    }
}

pub(crate) fn l1_distance(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

/// Axis-aligned box `∏ [lower_i, upper_i]` of lattice points, never empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeBox {
    lower: LatticePoint,
    upper: LatticePoint,
}

impl LatticeBox {
    pub fn new(lower: LatticePoint, upper: LatticePoint) -> Result<Self> {
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch { expected: lower.dim(), found: upper.dim() });
        }
        if lower.dim() == 0 {
            return Err(Error::InvalidArgument("box dimension must be at least 1".into()));
        }
        if lower.0.iter().zip(&upper.0).any(|(l, u)| l > u) {
            return Err(Error::InvalidArgument(format!("empty box [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper })
    }

    /// `[-r, r]^dim`.
    pub fn centered(dim: usize, radius: u64) -> Self {
        let r = radius as i64;
        Self { lower: LatticePoint(vec![-r; dim]), upper: LatticePoint(vec![r; dim]) }
    }

    pub fn singleton(p: LatticePoint) -> Self {
        Self { lower: p.clone(), upper: p }
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &LatticePoint {
        &self.lower
    }

    pub fn upper(&self) -> &LatticePoint {
        &self.upper
    }

    /// Number of lattice points along each axis.
    pub fn side_counts(&self) -> Vec<u64> {
        self.lower.0.iter().zip(&self.upper.0).map(|(l, u)| u.abs_diff(*l) + 1).collect()
    }

    pub fn volume(&self) -> u128 {
        self.side_counts().iter().map(|&c| c as u128).product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim()
            && p.iter().zip(self.lower.0.iter().zip(&self.upper.0)).all(|(x, (l, u))| l <= x && x <= u)
    }

    pub fn intersects(&self, other: &LatticeBox) -> bool {
        (0..self.dim()).all(|i| {
            self.lower.0[i] <= other.upper.0[i] && other.lower.0[i] <= self.upper.0[i]
        })
    }

    /// Smallest box containing both `self` and `p`.
    pub fn hull_with(&self, p: &[i64]) -> Self {
        let lower = self.lower.0.iter().zip(p).map(|(l, x)| *l.min(x)).collect();
        let upper = self.upper.0.iter().zip(p).map(|(u, x)| *u.max(x)).collect();
        Self { lower: LatticePoint(lower), upper: LatticePoint(upper) }
    }

    /// Row-major (lexicographic) index of `p`; `p` must lie in the box.
    pub fn index_of(&self, p: &[i64]) -> usize {
        let counts = self.side_counts();
        let mut idx = 0usize;
        for i in 0..self.dim() {
            idx = idx * counts[i] as usize + (p[i] - self.lower.0[i]) as usize;
        }
        idx
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints { bx: self, next: Some(self.lower.0.clone()) }
    }

    /// Whether per-axis counts differ by at most one, i.e. the box is the
    /// lattice trace of a closed real cube.
    pub fn is_cube_admissible(&self) -> bool {
        let c = self.side_counts();
        c.iter().max().unwrap() - c.iter().min().unwrap() <= 1
    }

    /// A closed real cube `{x : |x_i - center_i| <= half_side}` whose lattice
    /// points are exactly this box, or `None` if the box is not admissible.
    ///
    /// With `M` the largest side count the cube has side `M - 1`: axes with `M`
    /// points get lattice endpoints, axes with `M - 1` points are shifted by
    /// one half so that only `M - 1` points fit.
    pub fn realizing_cube(&self) -> Option<(Vec<BigRational>, BigRational)> {
        if !self.is_cube_admissible() {
            return None;
        }
        let counts = self.side_counts();
        let m = *counts.iter().max().unwrap() as i64;
        let half = BigRational::new((m - 1).into(), 2.into());
        let center = (0..self.dim())
            .map(|i| {
                let l = BigRational::from_integer(self.lower.0[i].into());
                if counts[i] as i64 == m {
                    l + &half
                } else {
                    l - BigRational::new(1.into(), 2.into()) + &half
                }
            })
            .collect();
        Some((center, half))
    }
}

impl fmt::Debug for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{},{}]", self.lower.0[i], self.upper.0[i])?;
        }
        Ok(())
    }
}

pub struct BoxPoints<'a> {
    bx: &'a LatticeBox,
    next: Option<Vec<i64>>,
}

impl Iterator for BoxPoints<'_> {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut axis = succ.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            if succ[axis] < self.bx.upper.0[axis] {
                succ[axis] += 1;
                self.next = Some(succ);
                break;
            }
            succ[axis] = self.bx.lower.0[axis];
        }
        Some(LatticePoint(cur))
    }
}

/// Memoized `N_{1,d}(k)` for `0 <= k <= max_radius`.
///
/// Immutable once built; share freely across threads.
#[derive(Clone, Debug)]
pub struct ShellTable {
    dim: usize,
    counts: Vec<BigUint>,
    small: Vec<u128>,
}

impl ShellTable {
    pub fn new(dim: usize, max_radius: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let len = max_radius as usize + 1;
        // N_{1,0}(k) = 1
        let mut row: Vec<BigUint> = vec![BigUint::one(); len];
        for _ in 0..dim {
            let mut next = Vec::with_capacity(len);
            let mut prefix = BigUint::zero();
            for prev in &row {
                next.push(prev + (&prefix << 1u32));
                prefix += prev;
            }
            row = next;
        }
        let small = row.iter().map_while(|c| c.to_u128()).collect();
        Ok(Self { dim, counts: row, small })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_radius(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn count(&self, k: u64) -> &BigUint {
        &self.counts[k as usize]
    }

    /// `N_{1,d}(k)` as a machine integer when it fits.
    #[inline]
    pub fn count_u128(&self, k: u64) -> Option<u128> {
        self.small.get(k as usize).copied()
    }

    /// Points at exact distance `k`: `N(k) - N(k-1)`.
    pub fn shell(&self, k: u64) -> BigUint {
        if k == 0 {
            BigUint::one()
        } else {
            self.count(k) - self.count(k - 1)
        }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidArgument("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `N_{1,d}(k) = |{p ∈ ℤ^d : |p|₁ <= k}|`.
pub fn l1_ball_count(d: usize, k: u64) -> Result<BigUint> {
    check_dim(d)?;
    Ok(ShellTable::new(d, k)?.count(k).clone())
}

/// All `p` with `|p|₁ <= k`, lexicographically ordered.
pub fn l1_ball_points(d: usize, k: u64) -> Result<Vec<LatticePoint>> {
    l1_ball_points_capped(d, k, enumeration_cap())
}

pub fn l1_ball_points_capped(d: usize, k: u64, cap: u64) -> Result<Vec<LatticePoint>> {
    let n = l1_ball_count(d, k)?;
    if n > BigUint::from(cap) {
        return Err(Error::CapExceeded { requested: n.to_string(), cap });
    }
    let mut out = Vec::with_capacity(n.to_usize().unwrap_or(0));
    let mut prefix = Vec::with_capacity(d);
    push_ball(d, k as i64, &mut prefix, &mut out);
    Ok(out)
}

fn push_ball(d: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<LatticePoint>) {
    if prefix.len() == d {
        out.push(LatticePoint(prefix.clone()));
        return;
    }
    for x in -budget..=budget {
        prefix.push(x);
        push_ball(d, budget - x.abs(), prefix, out);
        prefix.pop();
    }
}

/// A failure of `N(k)^2 > N(k+1) N(k-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConcavityViolation {
    pub k: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

/// Checks strict log-concavity of `k ↦ N_{1,d}(k)` for `1 <= k <= k_max`.
pub fn check_log_concavity(d: usize, k_max: u64) -> Result<Vec<LogConcavityViolation>> {
    check_dim(d)?;
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let table = ShellTable::new(d, k_max + 1)?;
    Ok(log_concavity_violations(&table, k_max))
}

pub(crate) fn log_concavity_violations(table: &ShellTable, k_max: u64) -> Vec<LogConcavityViolation> {
    (1..=k_max)
        .filter_map(|k| {
            let c = table.count(k);
            let lhs = c * c;
            let rhs = table.count(k + 1) * table.count(k - 1);
            (lhs <= rhs).then_some(LogConcavityViolation { k, lhs, rhs })
        })
        .collect()
}

/// A failure of `1/N(k) - 1/N(k+1) > 1/N(k+1) - 1/N(k+2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapViolation {
    pub k: u64,
    pub gap: BigRational,
    pub next_gap: BigRational,
}

/// Checks that consecutive reciprocal gaps strictly decrease for `0 <= k <= k_max`.
pub fn check_gap_monotonicity(d: usize, k_max: u64) -> Result<Vec<GapViolation>> {
    check_dim(d)?;
    let table = ShellTable::new(d, k_max + 2)?;
    let recip = |k: u64| BigRational::new(1u32.into(), table.count(k).clone().into());
    let mut out = Vec::new();
    let mut r0 = recip(0);
    let mut r1 = recip(1);
    for k in 0..=k_max {
        let r2 = recip(k + 2);
        let gap = &r0 - &r1;
        let next_gap = &r1 - &r2;
        if gap <= next_gap {
            out.push(GapViolation { k, gap, next_gap });
        }
        r0 = r1;
        r1 = r2;
    }
    Ok(out)
}

/// Every admissible cube box through `point` that meets `support_box`, with
/// side counts at most `side_cap`.
///
/// Ordered by side-count vector (smallest first within each common minimum
/// count), then by lower corner.
pub fn admissible_boxes_through(
    point: &LatticePoint,
    support_box: &LatticeBox,
    side_cap: u64,
) -> Result<impl Iterator<Item = LatticeBox>> {
    if point.dim() != support_box.dim() {
        return Err(Error::DimensionMismatch { expected: support_box.dim(), found: point.dim() });
    }
    let d = point.dim();
    let point = point.clone();
    let support_box = support_box.clone();
    let count_vectors = (1..=side_cap).flat_map(move |m| {
        let full = 1u64 << d;
        // mask bit i: axis i gets m + 1 points; the all-ones mask is the next m.
        let masks = if m == side_cap { 0..1 } else { 0..full - 1 };
        masks.map(move |mask| {
            (0..d).map(|i| if mask >> i & 1 == 1 { m + 1 } else { m }).collect::<Vec<u64>>()
        })
    });
    Ok(count_vectors.flat_map(move |counts| {
        let support_box = support_box.clone();
        BoxPlacements::new(&point, counts).filter(move |b| b.intersects(&support_box))
    }))
}

/// All boxes with the given side counts containing `point`, lower corner lexicographic.
struct BoxPlacements {
    counts: Vec<u64>,
    lower_min: Vec<i64>,
    lower_max: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl BoxPlacements {
    fn new(point: &LatticePoint, counts: Vec<u64>) -> Self {
        let lower_min: Vec<i64> =
            point.0.iter().zip(&counts).map(|(p, c)| p - *c as i64 + 1).collect();
        Self { lower_max: point.0.clone(), next: Some(lower_min.clone()), lower_min, counts }
    }
}

impl Iterator for BoxPlacements {
    type Item = LatticeBox;

    fn next(&mut self) -> Option<LatticeBox> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for axis in (0..succ.len()).rev() {
            if succ[axis] < self.lower_max[axis] {
                succ[axis] += 1;
                self.next = Some(succ);
                break;
            }
            succ[axis] = self.lower_min[axis];
        }
        let upper = cur.iter().zip(&self.counts).map(|(l, c)| l + *c as i64 - 1).collect();
        Some(LatticeBox { lower: LatticePoint(cur), upper: LatticePoint(upper) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(v: &[i64]) -> LatticePoint {
        LatticePoint(v.to_vec())
    }

    fn brute_count(d: usize, k: i64) -> usize {
        LatticeBox::centered(d, k as u64).points().filter(|q| q.l1_norm() as i64 <= k).count()
    }

    #[test]
    fn counts_from_recurrence() {
        assert_eq!(l1_ball_count(1, 5).unwrap(), BigUint::from(11u32));
        assert_eq!(l1_ball_count(2, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(l1_ball_count(2, 3).unwrap(), BigUint::from(25u32));
        assert_eq!(brute_count(2, 3), 25);
        assert_eq!(l1_ball_count(3, 2).unwrap(), BigUint::from(25u32));
        assert_eq!(brute_count(3, 2), 25);
        assert!(l1_ball_count(0, 3).is_err());
    }

    #[test]
    fn recurrence_matches_enumeration_small() {
        for d in 1..=4 {
            let table = ShellTable::new(d, 8).unwrap();
            for k in 0..=8 {
                assert_eq!(table.count(k).to_usize().unwrap(), brute_count(d, k as i64), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn ball_points_lexicographic() {
        assert_eq!(
            l1_ball_points(2, 1).unwrap(),
            vec![p(&[-1, 0]), p(&[0, -1]), p(&[0, 0]), p(&[0, 1]), p(&[1, 0])]
        );
        assert_eq!(
            l1_ball_points(1, 2).unwrap(),
            vec![p(&[-2]), p(&[-1]), p(&[0]), p(&[1]), p(&[2])]
        );
        assert_eq!(l1_ball_points(3, 1).unwrap().len(), 7);
    }

    #[test]
    fn ball_points_respect_cap() {
        let err = l1_ball_points_capped(3, 10, 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100, .. }));
    }

    #[test]
    fn log_concavity_spot_checks() {
        assert!(check_log_concavity(1, 100).unwrap().is_empty());
        // d = 2, k = 1: 5^2 = 25 > 13 * 1
        let t = ShellTable::new(2, 2).unwrap();
        assert_eq!(t.count(1) * t.count(1), BigUint::from(25u32));
        assert_eq!(t.count(2) * t.count(0), BigUint::from(13u32));
        assert!(check_log_concavity(3, 0).is_err());
    }

    #[test]
    fn gap_monotonicity_spot_checks() {
        assert!(check_gap_monotonicity(1, 100).unwrap().is_empty());
        let third = BigRational::new(1.into(), 3.into());
        let fifth = BigRational::new(1.into(), 5.into());
        assert_eq!(BigRational::one() - &third, BigRational::new(2.into(), 3.into()));
        assert_eq!(&third - &fifth, BigRational::new(2.into(), 15.into()));
        assert!(check_gap_monotonicity(2, 50).unwrap().is_empty());
    }

    #[test]
    fn shells_are_differences() {
        let t = ShellTable::new(3, 10).unwrap();
        for k in 1..=10 {
            assert_eq!(t.shell(k), t.count(k) - t.count(k - 1));
        }
        // d = 3: 4k^2 + 2 points at exact distance k >= 1
        assert_eq!(t.shell(4), BigUint::from(66u32));
    }

    #[test]
    fn box_iteration_order_and_index() {
        let b = LatticeBox::new(p(&[0, -1]), p(&[1, 1])).unwrap();
        let pts: Vec<_> = b.points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], p(&[0, -1]));
        assert_eq!(pts[1], p(&[0, 0]));
        assert_eq!(pts[5], p(&[1, 1]));
        for (i, q) in pts.iter().enumerate() {
            assert_eq!(b.index_of(q.coords()), i);
        }
        assert!(LatticeBox::new(p(&[1]), p(&[0])).is_err());
    }

    #[test]
    fn admissible_boxes_examples() {
        let origin = LatticeBox::singleton(p(&[0, 0]));
        let boxes: Vec<_> = admissible_boxes_through(&p(&[0, 0]), &origin, 3).unwrap().collect();
        assert!(boxes.contains(&LatticeBox::singleton(p(&[0, 0]))));

        let through: BTreeSet<_> = admissible_boxes_through(&p(&[3, 0]), &origin, 5).unwrap().collect();
        assert!(!through.contains(&LatticeBox::new(p(&[0, -1]), p(&[3, 0])).unwrap()));
        let good = LatticeBox::new(p(&[0, 0]), p(&[3, 2])).unwrap();
        assert!(through.contains(&good));
        let (center, half) = good.realizing_cube().unwrap();
        assert_eq!(half, BigRational::new(3.into(), 2.into()));
        assert_eq!(center[0], BigRational::new(3.into(), 2.into()));
        assert_eq!(center[1], BigRational::from_integer(1.into()));

        let one_d: Vec<_> = admissible_boxes_through(&p(&[5]), &LatticeBox::singleton(p(&[0])), 8)
            .unwrap()
            .collect();
        let expected: Vec<_> = (6..=8)
            .flat_map(|len| (5 - len + 1..=0).map(move |l| (l, l + len - 1)))
            .map(|(l, u)| LatticeBox::new(p(&[l]), p(&[u])).unwrap())
            .collect();
        assert_eq!(one_d, expected);
    }
}
