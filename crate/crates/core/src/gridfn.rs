//! Finitely supported functions on `ℤ^d` and dense value grids.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, LatticePoint};
use crate::scalar::{Field, Scalar};

/// A finitely supported map `ℤ^d → T`. Absent points have value zero.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    dim: usize,
    support: BTreeMap<LatticePoint, T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn zero(dim: usize) -> Self {
        Self { dim, support: BTreeMap::new() }
    }

    /// Builds a function from `(point, value)` pairs. Zero values are dropped;
    /// repeated points and wrong dimensions are rejected.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, T)>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut support = BTreeMap::new();
        for (p, v) in entries {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
            if support.contains_key(&p) {
                return Err(Error::InvalidArgument(format!("point {p} listed twice")));
            }
            if !v.is_zero() {
                support.insert(p, v);
            }
        }
        Ok(Self { dim, support })
    }

    /// `c·δ_p`.
    pub fn delta(p: LatticePoint, c: T) -> Self {
        let dim = p.dim();
        let mut support = BTreeMap::new();
        if !c.is_zero() {
            support.insert(p, c);
        }
        Self { dim, support }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, p: &LatticePoint) -> T {
        self.support.get(p).cloned().unwrap_or_else(T::zero)
    }

    /// Support entries in lexicographic point order.
    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &T)> {
        self.support.iter()
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_delta(&self) -> bool {
        self.support.len() == 1
    }

    /// `|f|`.
    pub fn absolutize(&self) -> Self {
        Self {
            dim: self.dim,
            support: self.support.iter().map(|(p, v)| (p.clone(), v.abs())).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.support.values().all(|v| !v.is_negative())
    }

    /// Smallest box containing the support, `None` for the zero function.
    pub fn support_hull(&self) -> Option<LatticeBox> {
        let mut it = self.support.keys();
        let first = it.next()?;
        let mut hull = LatticeBox::singleton(first.clone());
        for p in it {
            hull = hull.hull_with(p.coords());
        }
        Some(hull)
    }

    /// `max_{p ∈ supp} |p|_∞`, zero for the zero function.
    pub fn support_radius(&self) -> u64 {
        self.support.keys().map(LatticePoint::linf_norm).max().unwrap_or(0)
    }

    pub fn translate(&self, by: &[i64]) -> Self {
        let support = self
            .support
            .iter()
            .map(|(p, v)| (LatticePoint(p.0.iter().zip(by).map(|(a, b)| a + b).collect()), v.clone()))
            .collect();
        Self { dim: self.dim, support }
    }

    /// Reorders coordinates: new coordinate `i` is old coordinate `perm[i]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Self {
        let support = self
            .support
            .iter()
            .map(|(p, v)| (LatticePoint(perm.iter().map(|&i| p.0[i]).collect()), v.clone()))
            .collect();
        Self { dim: self.dim, support }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let support = self.support.iter().map(|(p, v)| (p.clone(), v.clone() * c.clone())).collect();
        Self { dim: self.dim, support }
    }

    pub fn map_values<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> GridFunction<U> {
        let support = self
            .support
            .iter()
            .map(|(p, v)| (p.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        GridFunction { dim: self.dim, support }
    }

    pub fn to_rational(&self) -> GridFunction<BigRational>
    where
        T: Scalar<Field = BigRational>,
    {
        self.map_values(Scalar::to_field)
    }

    /// `‖f‖₁`.
    pub fn l1_norm(&self) -> T {
        self.support.values().fold(T::zero(), |acc, v| acc + v.abs())
    }
}

impl GridFunction<BigRational> {
    /// `|f|` rescaled to integer values: returns `(g, s)` with `g = s·|f|`
    /// integral and `s` the least common denominator.
    pub fn integer_scaled(&self) -> (GridFunction<BigInt>, BigInt) {
        let scale = self.support.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let g = self.map_values(|v| (v.abs() * BigRational::from_integer(scale.clone())).to_integer());
        (g, scale)
    }
}

impl GridFunction<BigInt> {
    /// Narrows to `i128` when `‖f‖₁ · max_count` stays below `2^120`, the bound
    /// that keeps every average comparison inside `i128`.
    pub fn to_i128_if_safe(&self, max_count: u128) -> Option<GridFunction<i128>> {
        let norm = self.l1_norm();
        let budget = 120u64.checked_sub(128 - max_count.leading_zeros() as u64)?;
        if norm.bits() > budget {
            return None;
        }
        Some(self.map_values(|v| v.to_i128().expect("bounded by norm")))
    }
}

/// An ℓ^p exponent, `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Integer(u32),
    Real(f64),
    Infinity,
}

/// A norm value: exact when representable in the scalar's field.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue<F> {
    Exact(F),
    Rounded(f64),
}

impl<F: Field> NormValue<F> {
    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(v) => v.to_f64_lossy(),
            NormValue::Rounded(x) => *x,
        }
    }
}

/// `‖f‖_p`. Exact for `p = 1`, `p = ∞`, and integer `p` whenever the root
/// is representable; otherwise the float rendering of the exact `Σ|f|^p`.
pub fn lp_norm<T: Scalar>(f: &GridFunction<T>, p: Exponent) -> Result<NormValue<T::Field>> {
    match p {
        Exponent::Infinity => {
            let m = f.support.values().map(|v| v.abs().to_field()).fold(None, |acc: Option<T::Field>, v| {
                match acc {
                    Some(a) if a >= v => Some(a),
                    _ => Some(v),
                }
            });
            Ok(NormValue::Exact(m.unwrap_or_else(T::Field::zero)))
        }
        Exponent::Integer(0) => Err(Error::InvalidArgument("p must be at least 1".into())),
        Exponent::Integer(1) => Ok(NormValue::Exact(f.l1_norm().to_field())),
        Exponent::Integer(k) => {
            let sum = f
                .support
                .values()
                .fold(T::Field::zero(), |acc, v| acc + num_traits::pow(v.abs().to_field(), k as usize));
            Ok(match sum.nth_root_exact(k) {
                Some(r) => NormValue::Exact(r),
                None => NormValue::Rounded(sum.to_f64_lossy().powf(1.0 / k as f64)),
            })
        }
        Exponent::Real(x) => {
            if !(x >= 1.0) {
                return Err(Error::InvalidArgument(format!("p = {x} is below 1")));
            }
            if x.fract() == 0.0 && x <= u32::MAX as f64 {
                return lp_norm(f, Exponent::Integer(x as u32));
            }
            let sum: f64 = f.support.values().map(|v| v.abs().to_f64_lossy().powf(x)).sum();
            Ok(NormValue::Rounded(sum.powf(1.0 / x)))
        }
    }
}

/// `Var f = Σ_i Σ_n |f(n + e_i) - f(n)|`, exact.
pub fn total_variation<T: Scalar>(f: &GridFunction<T>) -> T {
    let mut var = T::zero();
    for (p, v) in &f.support {
        for axis in 0..f.dim {
            let next = p.offset(axis, 1);
            var = var + (f.get(&next) - v.clone()).abs();
            let prev = p.offset(axis, -1);
            if !f.support.contains_key(&prev) {
                var = var + v.abs();
            }
        }
    }
    var
}

/// Dense values on a lattice box, row-major (lexicographic) order.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<V> {
    bounds: LatticeBox,
    values: Vec<V>,
}

impl<V> Grid<V> {
    pub fn new(bounds: LatticeBox, values: Vec<V>) -> Result<Self> {
        if bounds.volume() != values.len() as u128 {
            return Err(Error::InvalidArgument(format!(
                "grid over {bounds} needs {} values, got {}",
                bounds.volume(),
                values.len()
            )));
        }
        Ok(Self { bounds, values })
    }

    pub fn bounds(&self) -> &LatticeBox {
        &self.bounds
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn get(&self, p: &[i64]) -> Option<&V> {
        self.bounds.contains(p).then(|| &self.values[self.bounds.index_of(p)])
    }

    pub fn map<U>(&self, f: impl FnMut(&V) -> U) -> Grid<U> {
        Grid { bounds: self.bounds.clone(), values: self.values.iter().map(f).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (LatticePoint, &V)> {
        self.bounds.points().zip(self.values.iter())
    }

    /// Flat-index stride of `axis`.
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.bounds.side_counts()[axis + 1..].iter().map(|&c| c as usize).product()
    }
}

/// An axis-parallel lattice line `{base + t·e_axis}`; `base[axis]` is ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisLine {
    pub axis: usize,
    pub base: LatticePoint,
}

impl AxisLine {
    pub fn new(axis: usize, base: LatticePoint) -> Result<Self> {
        if axis >= base.dim() {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range for dimension {}", base.dim())));
        }
        Ok(Self { axis, base })
    }
}

/// Values of `g` along `line`, truncated to the grid's box (in increasing order
/// of the free coordinate). Empty when the line misses the box.
pub fn line_restriction<V: Clone>(g: &Grid<V>, line: &AxisLine) -> Vec<V> {
    let b = g.bounds();
    let d = b.dim();
    let hits = (0..d).all(|i| i == line.axis || (b.lower().0[i] <= line.base.0[i] && line.base.0[i] <= b.upper().0[i]));
    if !hits {
        return Vec::new();
    }
    let mut start = line.base.0.clone();
    start[line.axis] = b.lower().0[line.axis];
    let first = b.index_of(&start);
    let stride = g.stride(line.axis);
    let len = b.side_counts()[line.axis] as usize;
    (0..len).map(|t| g.values[first + t * stride].clone()).collect()
}
