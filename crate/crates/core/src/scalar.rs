//! Scalar abstraction shared by every operator in the crate.
//!
//! Grid functions carry values of a [`Scalar`] type. Maximal averages are
//! quotients of a scalar mass by a lattice-point count, so every scalar names a
//! [`Field`] in which those quotients live: the exact scalars (machine
//! integers, big integers, rationals) all map into [`BigRational`], floats map
//! into themselves.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Values a grid function may carry.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Field holding quotients of `Self` by positive integers.
    type Field: Field;

    /// Whether arithmetic on this type is exact (no rounding).
    const EXACT: bool;

    fn to_field(&self) -> Self::Field;

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64;
}

/// A scalar closed under division; maximal-function values live here.
pub trait Field: Scalar<Field = Self> {
    /// Exact `p`-th root when one exists in the field (floats always succeed).
    fn nth_root_exact(&self, p: u32) -> Option<Self>;

    /// `Σ numer_i / denom_i`.
    ///
    /// The exact implementation builds the sum as a balanced tree of unreduced
    /// fractions and normalizes once; sums of thousands of reciprocals of
    /// distinct lattice counts have denominators with tens of thousands of
    /// digits and per-step gcd reduction dominates otherwise.
    fn sum_quotients(terms: Vec<(Self, u128)>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, (n, d)| {
            acc + n / Self::from_u128(d).expect("count representable")
        })
    }

    /// Exact sum of an arbitrary list (same balanced strategy as `sum_quotients`).
    fn sum_all(terms: Vec<Self>) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }
}

macro_rules! exact_integer_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            type Field = BigRational;
            const EXACT: bool = true;
            fn to_field(&self) -> BigRational {
                BigRational::from_integer(BigInt::from(self.clone()))
            }
            fn to_f64_lossy(&self) -> f64 {
                self.to_f64().unwrap_or(f64::NAN)
            }
        }
    )*};
}

exact_integer_scalar!(i64, i128, BigInt);

impl Scalar for Ratio<i64> {
    type Field = BigRational;
    const EXACT: bool = true;
    fn to_field(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn to_f64_lossy(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Scalar for BigRational {
    type Field = BigRational;
    const EXACT: bool = true;
    fn to_field(&self) -> BigRational {
        self.clone()
    }
    fn to_f64_lossy(&self) -> f64 {
        ratio_to_f64(self)
    }
}

impl Field for BigRational {
    fn nth_root_exact(&self, p: u32) -> Option<Self> {
        if p == 0 {
            return None;
        }
        if self.is_negative() && p % 2 == 0 {
            return None;
        }
        let root = |x: &BigInt| -> Option<BigInt> {
            let r = x.nth_root(p);
            (num_traits::pow(r.clone(), p as usize) == *x).then_some(r)
        };
        Some(BigRational::new(root(self.numer())?, root(self.denom())?))
    }

    fn sum_quotients(terms: Vec<(Self, u128)>) -> Self {
        let fracs = terms
            .into_iter()
            .map(|(q, d)| {
                let (n, dd) = q.into_raw();
                (n, dd * BigInt::from(d))
            })
            .collect();
        tree_sum(fracs)
    }

    fn sum_all(terms: Vec<Self>) -> Self {
        tree_sum(terms.into_iter().map(Ratio::into_raw).collect())
    }
}

fn tree_sum(mut layer: Vec<(BigInt, BigInt)>) -> BigRational {
    if layer.is_empty() {
        return BigRational::zero();
    }
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        let mut it = layer.into_iter();
        while let Some((a, b)) = it.next() {
            match it.next() {
                Some((c, d)) => {
                    if b == d {
                        next.push((a + c, b));
                    } else {
                        next.push((a * &d + c * &b, b * d));
                    }
                }
                None => next.push((a, b)),
            }
        }
        layer = next;
    }
    let (n, d) = layer.pop().unwrap();
    BigRational::new(n, d)
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            type Field = $t;
            const EXACT: bool = false;
            fn to_field(&self) -> $t {
                *self
            }
            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }
        }

        impl Field for $t {
            fn nth_root_exact(&self, p: u32) -> Option<Self> {
                (p > 0).then(|| self.abs().powf(1.0 / p as $t))
            }
        }
    )*};
}

float_scalar!(f32, f64);

/// `mass / count`: the value of an average over `count` lattice points.
///
/// Kept unevaluated so that comparisons between averages need only one
/// multiplication per side in the scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct Average<T> {
    pub mass: T,
    pub count: u128,
}

impl<T: Scalar> Average<T> {
    pub fn new(mass: T, count: u128) -> Self {
        debug_assert!(count > 0);
        Self { mass, count }
    }

    pub fn zero() -> Self {
        Self { mass: T::zero(), count: 1 }
    }

    pub fn value(&self) -> T::Field {
        self.mass.to_field() / count_in::<T::Field>(self.count)
    }

    /// Compares `self.mass / self.count` with `other.mass / other.count`.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if self.count == other.count {
            return self.mass.partial_cmp(&other.mass).unwrap_or(Ordering::Equal);
        }
        let lhs = self.mass.clone() * count_in::<T>(other.count);
        let rhs = other.mass.clone() * count_in::<T>(self.count);
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self { mass: self.mass.clone() * c.clone(), count: self.count }
    }
}

pub(crate) fn count_in<T: FromPrimitive>(count: u128) -> T {
    T::from_u128(count).expect("lattice count not representable in scalar type")
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerator and denominator: scale both down.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical `p/q` text (`q > 0`, `gcd(p, q) = 1`, integers without `/1`).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.001"` / `"-1.5e-3"`
/// into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Decimal rendering with `digits` places after the point, rounded half away
/// from zero from the exact value.
pub fn format_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = q.numer().abs() * &scale;
    let (quot, rem) = scaled.div_rem(q.denom());
    let rounded = if rem * 2 >= *q.denom() { quot + 1 } else { quot };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn average_comparison_matches_field_values() {
        let a = Average::new(2i128, 7);
        let b = Average::new(1i128, 4);
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        assert_eq!(a.value(), q(2, 7));
        let c = Average::new(q(1, 2), 3);
        assert_eq!(c.cmp_value(&Average::new(q(1, 3), 1)), Ordering::Less);
        assert_eq!(c.cmp_value(&Average::new(q(1, 3), 2)), Ordering::Equal);
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("0.001"), Some(q(1, 1000)));
        assert_eq!(parse_rational("1e-3"), Some(q(1, 1000)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_rational(&q(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(8, 4)), "2");
    }

    #[test]
    fn decimal_rendering_rounds_exactly() {
        assert_eq!(format_decimal(&q(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&q(2, 3), 4), "0.6667");
        assert_eq!(format_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&q(12, 1), 3), "12.000");
        assert_eq!(format_decimal(&q(-1, 1000), 2), "0.00");
    }

    #[test]
    fn tree_sum_agrees_with_sequential_sum() {
        let terms: Vec<(BigRational, u128)> =
            (1..60u128).map(|k| (q(1, 1), k * k + (k + 1) * (k + 1))).collect();
        let sequential = terms
            .iter()
            .fold(BigRational::zero(), |acc, (n, d)| acc + n / BigRational::from_integer((*d).into()));
        assert_eq!(BigRational::sum_quotients(terms), sequential);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(q(25, 4).nth_root_exact(2), Some(q(5, 2)));
        assert_eq!(q(2, 1).nth_root_exact(2), None);
        assert_eq!(q(-8, 27).nth_root_exact(3), Some(q(-2, 3)));
    }
}
