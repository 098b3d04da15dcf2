//! Discrete Hardy–Littlewood maximal operators.
//!
//! Four geometries are supported: centered and uncentered intervals on `ℤ`,
//! centered ℓ¹-balls on `ℤ^d`, and uncentered ℓ∞-cubes on `ℤ^d`. All operate on
//! `|f|`.
//!
//! For a finitely supported `f` every supremum is a maximum over a finite
//! candidate set, and the evaluators search exactly that set:
//!
//! * centered balls: the average over radius `r` only gains mass when `r`
//!   reaches the distance of a support point, and strictly decreases in
//!   between, so the candidates are `r = 0` and the support distances;
//! * uncentered intervals: an optimal interval may be shrunk until each end is
//!   the query point or a support point;
//! * uncentered cubes: cubes through real centers meet the lattice in boxes
//!   whose side counts differ by at most one. Given the bounding box `T` of the
//!   query point and some support points, the cheapest such box containing `T`
//!   pads every side to `max(t_i, max_j t_j - 1)` points, and an optimal box is
//!   always one of these padded boxes.
//!
//! Ties are broken toward the smallest radius (centered) or the smallest point
//! count, then the lexicographically smallest lower corner, then upper corner
//! (uncentered).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gridfn::{Grid, GridFunction};
use crate::lattice::{l1_distance, LatticeBox, LatticePoint, ShellTable};
use crate::scalar::{Average, Scalar};

/// Support sizes up to this use subset enumeration for cubes; larger supports
/// enumerate candidate faces instead.
const CUBE_SUBSET_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    IntervalCentered,
    IntervalUncentered,
    L1Centered,
    CubeUncentered,
}

impl Geometry {
    pub const ALL: [Geometry; 4] = [
        Geometry::IntervalCentered,
        Geometry::IntervalUncentered,
        Geometry::L1Centered,
        Geometry::CubeUncentered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::IntervalCentered => "centered1d",
            Geometry::IntervalUncentered => "uncentered1d",
            Geometry::L1Centered => "l1",
            Geometry::CubeUncentered => "cube",
        }
    }

    pub fn is_centered(self) -> bool {
        matches!(self, Geometry::IntervalCentered | Geometry::L1Centered)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which maximal operator is in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallSpec {
    geometry: Geometry,
    dim: usize,
}

impl BallSpec {
    pub fn new(geometry: Geometry, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if matches!(geometry, Geometry::IntervalCentered | Geometry::IntervalUncentered) && dim != 1 {
            return Err(Error::GeometryMismatch { geometry: geometry.name(), dim });
        }
        Ok(Self { geometry, dim })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl fmt::Display for BallSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/d={}", self.geometry, self.dim)
    }
}

/// The set over which an optimal average is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSet {
    /// ℓ¹-ball (an interval in dimension one).
    Ball { center: LatticePoint, radius: u64 },
    Box(LatticeBox),
}

impl WitnessSet {
    pub fn contains(&self, p: &[i64]) -> bool {
        match self {
            WitnessSet::Ball { center, radius } => l1_distance(center.coords(), p) <= *radius,
            WitnessSet::Box(b) => b.contains(p),
        }
    }
}

/// A maximal-function value together with a set realizing it.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgmaxWitness<T> {
    pub average: Average<T>,
    pub set: WitnessSet,
}

impl<T: Scalar> ArgmaxWitness<T> {
    pub fn value(&self) -> T::Field {
        self.average.value()
    }

    /// Number of lattice points averaged.
    pub fn count(&self) -> u128 {
        self.average.count
    }

    pub fn radius(&self) -> Option<u64> {
        match &self.set {
            WitnessSet::Ball { radius, .. } => Some(*radius),
            WitnessSet::Box(_) => None,
        }
    }

    pub fn as_box(&self) -> Option<&LatticeBox> {
        match &self.set {
            WitnessSet::Box(b) => Some(b),
            WitnessSet::Ball { .. } => None,
        }
    }
}

/// Averaging set descriptor for [`average`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AveragingSet {
    L1Ball { center: LatticePoint, radius: u64 },
    Box(LatticeBox),
}

/// Mean of `|f|` over the lattice points of `set`.
pub fn average<T: Scalar>(f: &GridFunction<T>, set: &AveragingSet) -> Result<T::Field> {
    let (dim, count) = match set {
        AveragingSet::L1Ball { center, radius } => {
            let n = ShellTable::new(center.dim().max(1), *radius)?.count(*radius).clone();
            (center.dim(), n)
        }
        AveragingSet::Box(b) => (b.dim(), BigUint::from(b.volume())),
    };
    if dim != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: dim });
    }
    let inside = |p: &[i64]| match set {
        AveragingSet::L1Ball { center, radius } => l1_distance(center.coords(), p) <= *radius,
        AveragingSet::Box(b) => b.contains(p),
    };
    let mass = f
        .iter()
        .filter(|(p, _)| inside(p.coords()))
        .fold(T::zero(), |acc, (_, v)| acc + v.abs());
    let count = count.to_u128().ok_or_else(|| Error::InvalidArgument("averaging set too large".into()))?;
    Ok(Average::new(mass, count).value())
}

/// Per-call working memory, reused across points.
#[derive(Default)]
pub struct Scratch {
    order: Vec<(u64, usize)>,
    pad: Vec<i64>,
    faces_lo: Vec<Vec<i64>>,
    faces_hi: Vec<Vec<i64>>,
    choice: Vec<usize>,
    lower: Vec<i64>,
    upper: Vec<i64>,
    best_lower: Vec<i64>,
    best_upper: Vec<i64>,
}

enum Kernel<T> {
    Centered { shells: ShellTable },
    Interval { xs: Vec<i64>, prefix: Vec<T> },
    CubeSubsets { subsets: Vec<SubsetHull<T>> },
    CubeFaces,
}

struct SubsetHull<T> {
    mass: T,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

/// A maximal operator prepared for one function and a region of query points.
pub struct MaximalEvaluator<T> {
    spec: BallSpec,
    dim: usize,
    points: Vec<i64>,
    masses: Vec<T>,
    kernel: Kernel<T>,
}

impl<T: Scalar> MaximalEvaluator<T> {
    /// Prepares `spec` applied to `f` for query points inside `reach`.
    pub fn new(f: &GridFunction<T>, spec: BallSpec, reach: &LatticeBox) -> Result<Self> {
        let dim = spec.dim();
        if f.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
        }
        if reach.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: reach.dim() });
        }
        let mut points = Vec::with_capacity(f.support_size() * dim);
        let mut masses = Vec::with_capacity(f.support_size());
        for (p, v) in f.iter() {
            points.extend_from_slice(p.coords());
            masses.push(v.abs());
        }
        let kernel = match spec.geometry() {
            Geometry::IntervalCentered | Geometry::L1Centered => {
                let far = (0..masses.len())
                    .map(|i| {
                        let p = &points[i * dim..(i + 1) * dim];
                        (0..dim)
                            .map(|a| {
                                p[a].abs_diff(reach.lower().0[a]).max(p[a].abs_diff(reach.upper().0[a]))
                            })
                            .sum::<u64>()
                    })
                    .max()
                    .unwrap_or(0);
                let shells = ShellTable::new(dim, far)?;
                if shells.count_u128(far).is_none() {
                    return Err(Error::InvalidArgument(format!("ball counts up to radius {far} overflow")));
                }
                Kernel::Centered { shells }
            }
            Geometry::IntervalUncentered => {
                // f's support is already lexicographically (here: numerically) sorted
                let mut prefix = Vec::with_capacity(masses.len() + 1);
                let mut acc = T::zero();
                prefix.push(acc.clone());
                for m in &masses {
                    acc = acc + m.clone();
                    prefix.push(acc.clone());
                }
                Kernel::Interval { xs: points.clone(), prefix }
            }
            Geometry::CubeUncentered if masses.len() <= CUBE_SUBSET_LIMIT => {
                let s = masses.len();
                let mut subsets = Vec::with_capacity((1usize << s).saturating_sub(1));
                for mask in 1usize..(1 << s) {
                    let mut mass = T::zero();
                    let mut lo = vec![i64::MAX; dim];
                    let mut hi = vec![i64::MIN; dim];
                    for i in (0..s).filter(|i| mask >> i & 1 == 1) {
                        mass = mass + masses[i].clone();
                        for a in 0..dim {
                            lo[a] = lo[a].min(points[i * dim + a]);
                            hi[a] = hi[a].max(points[i * dim + a]);
                        }
                    }
                    subsets.push(SubsetHull { mass, lo, hi });
                }
                Kernel::CubeSubsets { subsets }
            }
            Geometry::CubeUncentered => Kernel::CubeFaces,
        };
        Ok(Self { spec, dim, points, masses, kernel })
    }

    pub fn spec(&self) -> BallSpec {
        self.spec
    }

    /// Maximal-function value at `n` (which must lie in the reach box).
    pub fn value_at(&self, n: &[i64], scratch: &mut Scratch) -> Average<T> {
        match &self.kernel {
            Kernel::Centered { shells } => self.centered(shells, n, scratch).0,
            Kernel::Interval { xs, prefix } => self.interval(xs, prefix, n[0]).0,
            Kernel::CubeSubsets { subsets } => self.cube_subsets(subsets, n, scratch, false),
            Kernel::CubeFaces => self.cube_faces(n, scratch, false),
        }
    }

    /// Value at `n` with the canonical optimal set.
    pub fn witness_at(&self, n: &[i64]) -> ArgmaxWitness<T> {
        let mut scratch = Scratch::default();
        match &self.kernel {
            Kernel::Centered { shells } => {
                let (average, radius) = self.centered(shells, n, &mut scratch);
                ArgmaxWitness { average, set: WitnessSet::Ball { center: LatticePoint(n.to_vec()), radius } }
            }
            Kernel::Interval { xs, prefix } => {
                let (average, lo, hi) = self.interval(xs, prefix, n[0]);
                let b = LatticeBox::new(LatticePoint(vec![lo]), LatticePoint(vec![hi])).expect("lo <= hi");
                ArgmaxWitness { average, set: WitnessSet::Box(b) }
            }
            Kernel::CubeSubsets { .. } | Kernel::CubeFaces => {
                let average = match &self.kernel {
                    Kernel::CubeSubsets { subsets } => self.cube_subsets(subsets, n, &mut scratch, true),
                    _ => self.cube_faces(n, &mut scratch, true),
                };
                let b = LatticeBox::new(
                    LatticePoint(scratch.best_lower.clone()),
                    LatticePoint(scratch.best_upper.clone()),
                )
                .expect("witness box is nonempty");
                ArgmaxWitness { average, set: WitnessSet::Box(b) }
            }
        }
    }

    fn centered(&self, shells: &ShellTable, n: &[i64], scratch: &mut Scratch) -> (Average<T>, u64) {
        let d = self.dim;
        let order = &mut scratch.order;
        order.clear();
        for i in 0..self.masses.len() {
            order.push((l1_distance(&self.points[i * d..(i + 1) * d], n), i));
        }
        order.sort_unstable();
        let mut best = Average::zero();
        let mut best_r = 0;
        let mut mass = T::zero();
        let mut k = 0;
        while k < order.len() {
            let r = order[k].0;
            while k < order.len() && order[k].0 == r {
                mass = mass + self.masses[order[k].1].clone();
                k += 1;
            }
            let count = shells.count_u128(r).expect("radius within prepared reach");
            let cand = Average::new(mass.clone(), count);
            if cand.cmp_value(&best) == Ordering::Greater {
                best = cand;
                best_r = r;
            }
        }
        (best, best_r)
    }

    fn interval(&self, xs: &[i64], prefix: &[T], n: i64) -> (Average<T>, i64, i64) {
        let a = xs.partition_point(|&x| x < n);
        let b = xs.partition_point(|&x| x <= n);
        let mut best = Average::zero();
        let (mut best_lo, mut best_hi) = (n, n);
        // lower end: x_j for j < a, or n itself (covering from index a)
        for j in (0..a).chain(std::iter::once(usize::MAX)) {
            let (lo, from) = if j == usize::MAX { (n, a) } else { (xs[j], j) };
            for k in (b..xs.len()).chain(std::iter::once(usize::MAX)) {
                let (hi, to) = if k == usize::MAX { (n, b) } else { (xs[k], k + 1) };
                let mass = prefix[to].clone() - prefix[from].clone();
                let cand = Average::new(mass, (hi - lo + 1) as u128);
                let better = match cand.cmp_value(&best) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => (cand.count, lo) < (best.count, best_lo),
                };
                if better {
                    best = cand;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }
        (best, best_lo, best_hi)
    }

    /// Offers the padded box around `[tlo, thi]` with the given mass.
    ///
    /// `scratch.lower/upper` hold `tlo/thi` on entry; on acceptance the padded
    /// box lands in `best_lower/best_upper`.
    #[inline]
    fn offer_padded(
        &self,
        mass: &T,
        scratch: &mut Scratch,
        best: &mut Average<T>,
        witness: bool,
    ) {
        let d = self.dim;
        let mut maxt = 0i64;
        for a in 0..d {
            maxt = maxt.max(scratch.upper[a] - scratch.lower[a] + 1);
        }
        let mut vol: u128 = 1;
        scratch.pad.clear();
        for a in 0..d {
            let t = scratch.upper[a] - scratch.lower[a] + 1;
            let side = t.max(maxt - 1);
            scratch.pad.push(side - t);
            vol *= side as u128;
        }
        let cand = Average::new(mass.clone(), vol);
        let better = match cand.cmp_value(best) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal if witness => match cand.count.cmp(&best.count) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let lower = (0..d).map(|a| scratch.lower[a] - scratch.pad[a]);
                    let upper = (0..d).map(|a| scratch.upper[a]);
                    match lower.cmp(scratch.best_lower.iter().copied()) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => upper.cmp(scratch.best_upper.iter().copied()) == Ordering::Less,
                    }
                }
            },
            Ordering::Equal => false,
        };
        if better {
            *best = cand;
            if witness {
                scratch.best_lower.clear();
                scratch.best_upper.clear();
                for a in 0..d {
                    let l = scratch.lower[a] - scratch.pad[a];
                    scratch.best_lower.push(l);
                    // padding extends downward, so the upper face stays put
                    scratch.best_upper.push(scratch.upper[a]);
                }
            }
        }
    }

    fn reset_best(&self, n: &[i64], scratch: &mut Scratch) -> Average<T> {
        scratch.best_lower.clear();
        scratch.best_lower.extend_from_slice(n);
        scratch.best_upper.clear();
        scratch.best_upper.extend_from_slice(n);
        Average::zero()
    }

    fn cube_subsets(&self, subsets: &[SubsetHull<T>], n: &[i64], scratch: &mut Scratch, witness: bool) -> Average<T> {
        let d = self.dim;
        let mut best = self.reset_best(n, scratch);
        for s in subsets {
            scratch.lower.clear();
            scratch.upper.clear();
            for a in 0..d {
                scratch.lower.push(s.lo[a].min(n[a]));
                scratch.upper.push(s.hi[a].max(n[a]));
            }
            self.offer_padded(&s.mass, scratch, &mut best, witness);
        }
        best
    }

    fn cube_faces(&self, n: &[i64], scratch: &mut Scratch, witness: bool) -> Average<T> {
        let d = self.dim;
        let s = self.masses.len();
        let mut best = self.reset_best(n, scratch);
        if s == 0 {
            return best;
        }
        scratch.faces_lo.resize(d, Vec::new());
        scratch.faces_hi.resize(d, Vec::new());
        for a in 0..d {
            let lo = &mut scratch.faces_lo[a];
            lo.clear();
            lo.push(n[a]);
            lo.extend((0..s).map(|i| self.points[i * d + a]).filter(|&x| x < n[a]));
            lo.sort_unstable();
            lo.dedup();
            let hi = &mut scratch.faces_hi[a];
            hi.clear();
            hi.push(n[a]);
            hi.extend((0..s).map(|i| self.points[i * d + a]).filter(|&x| x > n[a]));
            hi.sort_unstable();
            hi.dedup();
        }
        // odometer over (lower_0, upper_0, …, lower_{d-1}, upper_{d-1})
        scratch.choice.clear();
        scratch.choice.resize(2 * d, 0);
        loop {
            scratch.lower.clear();
            scratch.upper.clear();
            for a in 0..d {
                scratch.lower.push(scratch.faces_lo[a][scratch.choice[2 * a]]);
                scratch.upper.push(scratch.faces_hi[a][scratch.choice[2 * a + 1]]);
            }
            let mut mass = T::zero();
            for i in 0..s {
                let p = &self.points[i * d..(i + 1) * d];
                if (0..d).all(|a| scratch.lower[a] <= p[a] && p[a] <= scratch.upper[a]) {
                    mass = mass + self.masses[i].clone();
                }
            }
            if !mass.is_zero() {
                self.offer_padded(&mass, scratch, &mut best, witness);
            }
            let mut slot = 0;
            loop {
                if slot == 2 * d {
                    return best;
                }
                let limit = if slot % 2 == 0 { scratch.faces_lo[slot / 2].len() } else { scratch.faces_hi[slot / 2].len() };
                scratch.choice[slot] += 1;
                if scratch.choice[slot] < limit {
                    break;
                }
                scratch.choice[slot] = 0;
                slot += 1;
            }
        }
    }
}

fn check_point<T: Scalar>(f: &GridFunction<T>, n: &[i64]) -> Result<()> {
    if f.dim() != n.len() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: n.len() });
    }
    Ok(())
}

/// Maximal function of `f` under `spec` at `n`, with witness.
pub fn maximal_witness<T: Scalar>(f: &GridFunction<T>, spec: BallSpec, n: &LatticePoint) -> Result<ArgmaxWitness<T>> {
    check_point(f, n.coords())?;
    let ev = MaximalEvaluator::new(f, spec, &LatticeBox::singleton(n.clone()))?;
    Ok(ev.witness_at(n.coords()))
}

/// `Mf(n)` on `ℤ`, centered intervals `[n - r, n + r]`.
pub fn centered_max_1d<T: Scalar>(f: &GridFunction<T>, n: i64) -> Result<ArgmaxWitness<T>> {
    maximal_witness(f, BallSpec::new(Geometry::IntervalCentered, f.dim())?, &LatticePoint(vec![n]))
}

/// `M̃f(n)` on `ℤ`, intervals `[n - r, n + s]`.
pub fn uncentered_max_1d<T: Scalar>(f: &GridFunction<T>, n: i64) -> Result<ArgmaxWitness<T>> {
    maximal_witness(f, BallSpec::new(Geometry::IntervalUncentered, f.dim())?, &LatticePoint(vec![n]))
}

/// `M₁f(n)`: centered ℓ¹-balls.
pub fn centered_max_l1<T: Scalar>(f: &GridFunction<T>, n: &LatticePoint) -> Result<ArgmaxWitness<T>> {
    maximal_witness(f, BallSpec::new(Geometry::L1Centered, f.dim())?, n)
}

/// `M̃f(n)`: uncentered ℓ∞-cubes.
pub fn uncentered_max_cube<T: Scalar>(f: &GridFunction<T>, n: &LatticePoint) -> Result<ArgmaxWitness<T>> {
    maximal_witness(f, BallSpec::new(Geometry::CubeUncentered, f.dim())?, n)
}

/// The maximal function evaluated at every point of `bx` (row-major).
///
/// Points are independent; evaluation is split across the rayon pool.
pub fn evaluate_on_box<T: Scalar>(f: &GridFunction<T>, spec: BallSpec, bx: &LatticeBox) -> Result<Grid<Average<T>>> {
    let ev = MaximalEvaluator::new(f, spec, bx)?;
    let counts = bx.side_counts();
    let total = usize::try_from(bx.volume()).map_err(|_| Error::InvalidArgument("box too large".into()))?;
    let d = bx.dim();
    let lower = bx.lower().coords().to_vec();
    let values: Vec<Average<T>> = (0..total)
        .into_par_iter()
        .with_min_len(1 << 12)
        .map_init(
            || (Scratch::default(), vec![0i64; d]),
            |(scratch, coords), idx| {
                let mut rest = idx;
                for a in (0..d).rev() {
                    let c = counts[a] as usize;
                    coords[a] = lower[a] + (rest % c) as i64;
                    rest /= c;
                }
                ev.value_at(coords, scratch)
            },
        )
        .collect();
    Grid::new(bx.clone(), values)
}

/// `M₁δ_p(n) = 1 / N_{1,d}(|n - p|₁)` for a unit delta.
pub fn delta_centered_l1_closed_form(p: &LatticePoint, n: &LatticePoint) -> Result<BigRational> {
    if p.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: n.dim() });
    }
    let k = p.l1_distance(n);
    let count = ShellTable::new(p.dim(), k)?.count(k).clone();
    Ok(BigRational::new(1.into(), count.into()))
}

/// Number of lattice points in the smallest admissible cube box containing
/// both `p` and `n`: `(M+1)^j · max(1, M)^{d-j}` with `M = |n - p|_∞` and `j`
/// the number of axes attaining `M`.
pub fn delta_cube_count(p: &[i64], n: &[i64]) -> u128 {
    let diffs: Vec<u64> = p.iter().zip(n).map(|(a, b)| a.abs_diff(*b)).collect();
    let m = diffs.iter().copied().max().unwrap_or(0);
    if m == 0 {
        return 1;
    }
    let j = diffs.iter().filter(|&&x| x == m).count() as u32;
    let d = diffs.len() as u32;
    (m as u128 + 1).pow(j) * (m as u128).pow(d - j)
}

/// `M̃δ_p(n)` for a unit delta under the cube geometry.
pub fn delta_uncentered_cube_closed_form(p: &LatticePoint, n: &LatticePoint) -> Result<BigRational> {
    if p.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: n.dim() });
    }
    Ok(BigRational::new(1.into(), delta_cube_count(p.coords(), n.coords()).into()))
}

/// Scales every average in a grid by a common positive factor.
pub fn scale_grid<T: Scalar>(grid: &Grid<Average<T>>, c: &T) -> Grid<Average<T>> {
    grid.map(|a| a.scaled(c))
}

/// Exact values of a grid.
pub fn grid_values<T: Scalar>(grid: &Grid<Average<T>>) -> Grid<T::Field> {
    grid.map(Average::value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pt(v: &[i64]) -> LatticePoint {
        LatticePoint(v.to_vec())
    }

    fn bx(lo: &[i64], hi: &[i64]) -> LatticeBox {
        LatticeBox::new(pt(lo), pt(hi)).unwrap()
    }

    fn delta(d: usize) -> GridFunction<BigRational> {
        GridFunction::delta(LatticePoint::origin(d), q(1, 1))
    }

    fn f1(entries: &[(i64, i64)]) -> GridFunction<BigRational> {
        GridFunction::from_entries(1, entries.iter().map(|&(p, v)| (pt(&[p]), q(v, 1)))).unwrap()
    }

    #[test]
    fn averages() {
        let d1 = delta(1);
        let ball = AveragingSet::L1Ball { center: pt(&[0]), radius: 2 };
        assert_eq!(average(&d1, &ball).unwrap(), q(1, 5));
        let d2 = delta(2);
        let off = AveragingSet::L1Ball { center: pt(&[1, 0]), radius: 1 };
        assert_eq!(average(&d2, &off).unwrap(), q(1, 5));
        let zero = GridFunction::<BigRational>::zero(2);
        assert_eq!(average(&zero, &AveragingSet::Box(bx(&[0, 0], &[3, 3]))).unwrap(), q(0, 1));
        assert!(average(&d2, &ball).is_err());
    }

    #[test]
    fn centered_1d_examples() {
        let w = centered_max_1d(&delta(1), 3).unwrap();
        assert_eq!((w.value(), w.radius()), (q(1, 7), Some(3)));
        let w = centered_max_1d(&delta(1), 0).unwrap();
        assert_eq!((w.value(), w.radius()), (q(1, 1), Some(0)));
        let w = centered_max_1d(&f1(&[(0, 1), (6, 1)]), 3).unwrap();
        assert_eq!((w.value(), w.radius()), (q(2, 7), Some(3)));
        let w = centered_max_1d(&GridFunction::<BigRational>::zero(1), 4).unwrap();
        assert_eq!((w.value(), w.radius()), (q(0, 1), Some(0)));
    }

    #[test]
    fn uncentered_1d_examples() {
        let w = uncentered_max_1d(&delta(1), 3).unwrap();
        assert_eq!(w.value(), q(1, 4));
        assert_eq!(w.as_box(), Some(&bx(&[0], &[3])));
        assert_eq!(uncentered_max_1d(&delta(1), 0).unwrap().value(), q(1, 1));
        let block = f1(&(0..10).map(|p| (p, 1)).collect::<Vec<_>>());
        let w = uncentered_max_1d(&block, 20).unwrap();
        assert_eq!(w.value(), q(10, 21));
        assert_eq!(w.as_box(), Some(&bx(&[0], &[20])));
    }

    #[test]
    fn centered_l1_examples() {
        let w = centered_max_l1(&delta(2), &pt(&[1, 1])).unwrap();
        assert_eq!((w.value(), w.radius()), (q(1, 13), Some(2)));
        let w = centered_max_l1(&GridFunction::<BigRational>::zero(3), &pt(&[1, 2, 3])).unwrap();
        assert_eq!(w.value(), q(0, 1));
        let w = centered_max_l1(&delta(3), &pt(&[1, -1, 2])).unwrap();
        assert_eq!((w.value(), w.radius()), (delta_centered_l1_closed_form(&pt(&[0, 0, 0]), &pt(&[1, -1, 2])).unwrap(), Some(4)));
    }

    #[test]
    fn cube_examples() {
        let w = uncentered_max_cube(&delta(2), &pt(&[2, 0])).unwrap();
        assert_eq!(w.value(), q(1, 6));
        assert_eq!(w.as_box(), Some(&bx(&[0, -1], &[2, 0])));
        let w = uncentered_max_cube(&delta(2), &pt(&[0, 0])).unwrap();
        assert_eq!((w.value(), w.as_box().cloned()), (q(1, 1), Some(LatticeBox::singleton(pt(&[0, 0])))));
        let w = uncentered_max_cube(&delta(1), &pt(&[5])).unwrap();
        assert_eq!((w.value(), w.as_box().cloned()), (q(1, 6), Some(bx(&[0], &[5]))));
        let w = uncentered_max_cube(&delta(2), &pt(&[1, 1])).unwrap();
        assert_eq!(w.value(), q(1, 4));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(delta_centered_l1_closed_form(&pt(&[0, 0, 0]), &pt(&[0, 0, 0])).unwrap(), q(1, 1));
        assert_eq!(delta_centered_l1_closed_form(&pt(&[0, 0]), &pt(&[1, 1])).unwrap(), q(1, 13));
        assert_eq!(delta_centered_l1_closed_form(&pt(&[0]), &pt(&[7])).unwrap(), q(1, 15));
        assert_eq!(delta_uncentered_cube_closed_form(&pt(&[0, 0, 0]), &pt(&[0, 0, 0])).unwrap(), q(1, 1));
        assert_eq!(delta_uncentered_cube_closed_form(&pt(&[0, 0]), &pt(&[2, 0])).unwrap(), q(1, 6));
        assert_eq!(delta_uncentered_cube_closed_form(&pt(&[0, 0]), &pt(&[1, 1])).unwrap(), q(1, 4));
    }

    #[test]
    fn box_evaluation() {
        let spec = BallSpec::new(Geometry::IntervalCentered, 1).unwrap();
        let g = evaluate_on_box(&delta(1), spec, &LatticeBox::centered(1, 2)).unwrap();
        let vals: Vec<_> = grid_values(&g).values().to_vec();
        assert_eq!(vals, vec![q(1, 5), q(1, 3), q(1, 1), q(1, 3), q(1, 5)]);

        let spec = BallSpec::new(Geometry::CubeUncentered, 2).unwrap();
        let g = grid_values(&evaluate_on_box(&delta(2), spec, &LatticeBox::centered(2, 1)).unwrap());
        let expect = [q(1, 4), q(1, 2), q(1, 4), q(1, 2), q(1, 1), q(1, 2), q(1, 4), q(1, 2), q(1, 4)];
        assert_eq!(g.values(), &expect);

        let zero = GridFunction::<BigRational>::zero(2);
        let g = grid_values(&evaluate_on_box(&zero, spec, &LatticeBox::centered(2, 1)).unwrap());
        assert!(g.values().iter().all(Zero::is_zero));
    }

    #[test]
    fn interval_geometry_needs_dim_one() {
        assert!(matches!(
            BallSpec::new(Geometry::IntervalCentered, 2),
            Err(Error::GeometryMismatch { .. })
        ));
        let spec = BallSpec::new(Geometry::L1Centered, 3).unwrap();
        assert!(matches!(
            maximal_witness(&delta(2), spec, &pt(&[0, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn faces_and_subsets_agree() {
        // 12 support points forces the face kernel; compare with the subset
        // kernel on a sub-support evaluated pointwise.
        let entries: Vec<_> = (0..12).map(|i| (pt(&[i % 4, i / 4 * 2 - 1]), q(1 + i % 5, 1 + i % 3))).collect();
        let big = GridFunction::from_entries(2, entries.clone()).unwrap();
        let spec = BallSpec::new(Geometry::CubeUncentered, 2).unwrap();
        let reach = LatticeBox::centered(2, 6);
        let faces = MaximalEvaluator::new(&big, spec, &reach).unwrap();
        assert!(matches!(faces.kernel, Kernel::CubeFaces));
        let small = GridFunction::from_entries(2, entries[..8].to_vec()).unwrap();
        let subsets = MaximalEvaluator::new(&small, spec, &reach).unwrap();
        assert!(matches!(subsets.kernel, Kernel::CubeSubsets { .. }));
        let mut forced = MaximalEvaluator::new(&small, spec, &reach).unwrap();
        forced.kernel = Kernel::CubeFaces;
        for p in reach.points() {
            assert_eq!(subsets.witness_at(p.coords()), forced.witness_at(p.coords()), "at {p}");
        }
        let _ = faces.witness_at(&[0, 0]);
    }
}
