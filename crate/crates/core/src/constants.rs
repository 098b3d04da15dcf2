//! The sharp constants of the variation inequalities.
//!
//! For the centered ℓ¹ operator
//!
//! ```text
//! C(d) = 2d (1 + Σ_{k≥1} s_{d-1}(k) / N_{1,d}(k)),   s_{d-1}(k) = N_{1,d-1}(k) - N_{1,d-1}(k-1),
//! ```
//!
//! and for the uncentered cube operator
//!
//! ```text
//! C̃(d) = 2d (1 + Σ_{k≥1} (1/k) [ (2/(k+1) + (2k-1)/k)^{d-1} - ((2k-1)/k)^{d-1} ]).
//! ```
//!
//! Partial sums are exact. Enclosures add a certified tail: both series have
//! terms of order `1/k²`, and for a fixed `c` we prove `term_k ≤ c/(k(k+1))`
//! for every `k` past a crossover, which telescopes to `Σ_{k>K} term_k ≤ c/(K+1)`.
//! The proof is mechanical: writing `term_k = Num(k)/Den(k)` with integer
//! polynomials, the polynomial `c·Den(k) − Num(k)·k(k+1)` is shown to have only
//! nonnegative coefficients after substituting `k = K₀ + t`; the finitely many
//! `k` between the crossover and `K₀` are checked directly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::ShellTable;
use crate::scalar::{format_decimal, format_rational, Field};

/// Sharp constant of `Var Mf ≤ C ‖f‖₁` for the centered maximal function on `ℤ`.
pub const CENTERED_1D_SHARP_CONSTANT: i64 = 2;

/// The sharp constant for the centered operator on `ℤ`, as an exact rational.
pub fn centered_1d_sharp_constant() -> BigRational {
    BigRational::from_integer(CENTERED_1D_SHARP_CONSTANT.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstantKind {
    /// `C(d)`, centered ℓ¹-balls.
    CenteredL1,
    /// `C̃(d)`, uncentered ℓ∞-cubes.
    UncenteredCube,
}

impl ConstantKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstantKind::CenteredL1 => "centered",
            ConstantKind::UncenteredCube => "uncentered",
        }
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A certified bound `term_k ≤ c / (k(k+1))` for all `k ≥ crossover`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailMajorant {
    pub c: BigRational,
    /// First index from which the bound holds for every later term.
    pub crossover: u64,
    /// From here on the bound follows from coefficient positivity; below it,
    /// down to `crossover`, each term was compared directly.
    pub polynomial_from: u64,
}

impl TailMajorant {
    /// `Σ_{k>K} term_k ≤ c/(K+1)` (without the `2d` prefactor).
    pub fn tail_after(&self, k: u64) -> BigRational {
        &self.c / BigRational::from_integer((k + 1).into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantEnclosure {
    pub d: usize,
    pub kind: ConstantKind,
    pub terms_used: u64,
    /// Exact partial sum through `k = terms_used`.
    pub lower: BigRational,
    /// `lower` plus the certified tail bound.
    pub upper: BigRational,
    pub majorant: TailMajorant,
}

impl ConstantEnclosure {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// One-paragraph account of the tail bound used.
    pub fn statement(&self) -> String {
        let m = &self.majorant;
        if m.c.is_zero() {
            return format!("all terms vanish for d = {}; the partial sum is the constant", self.d);
        }
        let direct = if m.crossover < m.polynomial_from {
            format!("checked term by term for {} <= k < {}, and ", m.crossover, m.polynomial_from)
        } else {
            String::new()
        };
        format!(
            "term_k <= c/(k(k+1)) with c = {} for all k >= {}: {}for k >= {} because \
             c*Den(k) - Num(k)*k*(k+1) has nonnegative coefficients in (k - {}). \
             Hence the tail after K = {} is at most 2d*c/(K+1) = {}.",
            format_rational(&m.c),
            m.crossover,
            direct,
            m.polynomial_from,
            m.polynomial_from,
            self.terms_used,
            format_rational(&self.width()),
        )
    }

    pub fn render(&self, digits: usize) -> String {
        format!("[{}, {}]", format_decimal(&self.lower, digits), format_decimal(&self.upper, digits))
    }
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `term_k` of the centered series for `k = 1..=k_max`.
pub fn centered_constant_terms(d: usize, k_max: u64) -> Result<Vec<BigRational>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "C(d) needs d >= 2; the sharp constant on Z is {CENTERED_1D_SHARP_CONSTANT}"
        )));
    }
    let full = ShellTable::new(d, k_max)?;
    let slice = ShellTable::new(d - 1, k_max)?;
    Ok((1..=k_max)
        .map(|k| BigRational::new(BigInt::from(slice.shell(k)), BigInt::from(full.count(k).clone())))
        .collect())
}

/// `term_k` of the uncentered series.
pub fn uncentered_constant_term(d: usize, k: u64) -> BigRational {
    let (num, den) = uncentered_term_parts(d, &BigInt::from(k));
    BigRational::new(num, den)
}

fn uncentered_term_parts(d: usize, k: &BigInt) -> (BigInt, BigInt) {
    let e = d - 1;
    let a: BigInt = (k * 2 - 1) * (k + 1);
    let b: BigInt = &a + k * 2;
    let num = num_traits::pow(b, e) - num_traits::pow(a, e);
    (num, num_traits::pow(k.clone(), d) * num_traits::pow(k + 1, e))
}

/// `C(d)` truncated after `k = big_k` (exact).
pub fn centered_constant_partial(d: usize, big_k: u64) -> Result<BigRational> {
    let terms = centered_constant_terms(d, big_k)?;
    Ok(q(2 * d as i64) * (BigRational::one() + BigRational::sum_all(terms)))
}

/// `C̃(d)` truncated after `k = big_k` (exact).
pub fn uncentered_constant_partial(d: usize, big_k: u64) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let terms = if d == 1 { Vec::new() } else { (1..=big_k).map(|k| uncentered_constant_term(d, k)).collect() };
    Ok(q(2 * d as i64) * (BigRational::one() + BigRational::sum_all(terms)))
}

// --- polynomials with rational coefficients, ascending powers -------------

type Poly = Vec<BigRational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn scale(a: &Poly, c: &BigRational) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

fn pow(a: &Poly, e: usize) -> Poly {
    (0..e).fold(vec![BigRational::one()], |acc, _| mul(&acc, a))
}

#[cfg(test)]
fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Coefficients of `p(x + t)` as a polynomial in `t`.
fn shift(p: &Poly, x: &BigRational) -> Poly {
    let mut c = p.clone();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = &c[j + 1] * x;
            c[j] += add;
        }
    }
    c
}

fn linear(c0: i64, c1: i64) -> Poly {
    vec![q(c0), q(c1)]
}

/// The polynomial agreeing with `N_{1,d}(k)` for all `k ≥ 0`, by Newton
/// interpolation through the recurrence values at `k = 0..=d`.
fn ball_count_polynomial(d: usize) -> Result<Poly> {
    let table = ShellTable::new(d, d as u64)?;
    let mut diffs: Vec<BigRational> = table.counts().iter().map(|n| q(BigInt::from(n.clone()))).collect();
    let mut out: Poly = Vec::new();
    // binomial(k, i) built incrementally
    let mut binom: Poly = vec![BigRational::one()];
    for i in 0..=d {
        out = sub(&out, &scale(&binom, &-diffs[0].clone()));
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        binom = scale(&mul(&binom, &linear(-(i as i64), 1)), &BigRational::new(1.into(), (i as i64 + 1).into()));
    }
    Ok(out)
}

/// `(Num, Den)` with `term_k = Num(k)/Den(k)` for `k ≥ 1`.
fn term_polynomials(d: usize, kind: ConstantKind) -> Result<(Poly, Poly)> {
    match kind {
        ConstantKind::CenteredL1 => {
            let slice = ball_count_polynomial(d - 1)?;
            let shell = sub(&slice, &shift(&slice, &q(-1)));
            Ok((shell, ball_count_polynomial(d)?))
        }
        ConstantKind::UncenteredCube => {
            let k = linear(0, 1);
            let a = mul(&linear(-1, 2), &linear(1, 1));
            let b = sub(&a, &linear(0, -2));
            let num = sub(&pow(&b, d - 1), &pow(&a, d - 1));
            let den = mul(&pow(&k, d), &pow(&linear(1, 1), d - 1));
            Ok((num, den))
        }
    }
}

/// Leading-order constant: `term_k · k² → c₀`.
fn asymptotic_c(d: usize, kind: ConstantKind) -> BigRational {
    match kind {
        ConstantKind::CenteredL1 => q((d * (d - 1) / 2) as i64),
        ConstantKind::UncenteredCube => q((d as i64 - 1) * (1i64 << (d - 1))),
    }
}

/// Largest shift tried when looking for coefficient positivity.
const SHIFT_LIMIT: u64 = 1 << 16;
/// The ladder stops at the first `c` whose crossover is at most this.
const CROSSOVER_TARGET: u64 = 1;

fn certify(num: &Poly, den: &Poly, c: &BigRational, terms: &dyn Fn(u64) -> BigRational) -> Option<TailMajorant> {
    let k_k1 = linear(0, 1);
    let k_k1 = mul(&k_k1, &linear(1, 1));
    let p = sub(&scale(den, c), &mul(num, &k_k1));
    let holds = |x: u64| shift(&p, &q(x)).iter().all(|co| !co.is_negative());
    let mut hi = 1;
    while !holds(hi) {
        hi *= 2;
        if hi > SHIFT_LIMIT {
            return None;
        }
    }
    // shrink toward the smallest certified shift (any certified one is valid)
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if mid >= 1 && holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut crossover = hi;
    while crossover > 1 {
        let k = crossover - 1;
        let bound = c / q(k * (k + 1));
        if terms(k) <= bound {
            crossover = k;
        } else {
            break;
        }
    }
    Some(TailMajorant { c: c.clone(), crossover, polynomial_from: hi })
}

/// The tail majorant used for `(d, kind)`.
///
/// `c` runs through `c₀ · {1, 9/8, 5/4, …, 3, 4, …, 16}` and the first value
/// whose certified crossover reaches `k = 1` is taken (else the one with the
/// smallest crossover). The choice depends only on `(d, kind)`, so enclosures
/// for increasing `K` nest.
pub fn tail_majorant(d: usize, kind: ConstantKind) -> Result<TailMajorant> {
    if d == 0 || (kind == ConstantKind::CenteredL1 && d < 2) {
        return Err(Error::InvalidArgument(format!("no {kind} series in dimension {d}")));
    }
    if kind == ConstantKind::UncenteredCube && d == 1 {
        return Ok(TailMajorant { c: BigRational::zero(), crossover: 1, polynomial_from: 1 });
    }
    let (num, den) = term_polynomials(d, kind)?;
    let c0 = asymptotic_c(d, kind);
    let direct: Box<dyn Fn(u64) -> BigRational> = match kind {
        ConstantKind::CenteredL1 => {
            // only needed when coefficient positivity starts past k = 1
            let tables = std::cell::OnceCell::new();
            Box::new(move |k| {
                let (full, slice) = tables.get_or_init(|| {
                    (
                        ShellTable::new(d, SHIFT_LIMIT).expect("d >= 2"),
                        ShellTable::new(d - 1, SHIFT_LIMIT).expect("d >= 2"),
                    )
                });
                BigRational::new(BigInt::from(slice.shell(k)), BigInt::from(full.count(k).clone()))
            })
        }
        ConstantKind::UncenteredCube => Box::new(move |k| uncentered_constant_term(d, k)),
    };
    let ladder = (8..=24).map(|j| BigRational::new(j.into(), 8.into())).chain((4..=16).map(q));
    let mut best: Option<TailMajorant> = None;
    for factor in ladder {
        let c = &c0 * factor;
        if let Some(m) = certify(&num, &den, &c, &*direct) {
            if m.crossover <= CROSSOVER_TARGET {
                return Ok(m);
            }
            if best.as_ref().map_or(true, |b| m.crossover < b.crossover) {
                best = Some(m);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidArgument(format!("no tail majorant certified for {kind} d = {d}")))
}

/// Certified enclosure `[partial sum, partial sum + 2d·c/(K+1)]`.
pub fn constant_enclosure(d: usize, big_k: u64, kind: ConstantKind) -> Result<ConstantEnclosure> {
    let majorant = tail_majorant(d, kind)?;
    if big_k + 1 < majorant.crossover {
        return Err(Error::BelowCrossover {
            kind: kind.name(),
            dim: d,
            crossover: majorant.crossover,
            min_terms: majorant.crossover - 1,
        });
    }
    let lower = match kind {
        ConstantKind::CenteredL1 => centered_constant_partial(d, big_k)?,
        ConstantKind::UncenteredCube => uncentered_constant_partial(d, big_k)?,
    };
    let upper = &lower + q(2 * d as i64) * majorant.tail_after(big_k);
    Ok(ConstantEnclosure { d, kind, terms_used: big_k, lower, upper, majorant })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn centered_examples() {
        assert_eq!(centered_constant_partial(2, 0).unwrap(), q(4));
        assert_eq!(centered_constant_partial(2, 2).unwrap(), r(404, 65));
        assert_eq!(centered_constant_partial(3, 1).unwrap(), r(66, 7));
        assert!(centered_constant_partial(1, 3).is_err());
    }

    #[test]
    fn uncentered_examples() {
        assert_eq!(uncentered_constant_partial(1, 7).unwrap(), q(2));
        assert_eq!(uncentered_constant_partial(2, 1).unwrap(), q(8));
        for k in [0u64, 1, 2, 10, 57] {
            assert_eq!(uncentered_constant_partial(2, k).unwrap(), q(12) - r(8, k as i64 + 1));
        }
    }

    #[test]
    fn polynomials_reproduce_terms() {
        for d in 1..=6 {
            let p = ball_count_polynomial(d).unwrap();
            let t = ShellTable::new(d, 40).unwrap();
            for k in 0..=40u64 {
                assert_eq!(eval(&p, &q(k)), q(BigInt::from(t.count(k).clone())), "d={d} k={k}");
            }
        }
        for d in 2..=5 {
            for kind in [ConstantKind::CenteredL1, ConstantKind::UncenteredCube] {
                let (num, den) = term_polynomials(d, kind).unwrap();
                let terms = match kind {
                    ConstantKind::CenteredL1 => centered_constant_terms(d, 30).unwrap(),
                    ConstantKind::UncenteredCube => (1..=30).map(|k| uncentered_constant_term(d, k)).collect(),
                };
                for k in 1..=30u64 {
                    assert_eq!(eval(&num, &q(k)) / eval(&den, &q(k)), terms[k as usize - 1], "{kind} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn taylor_shift() {
        // (1 + t)^2 from t^2 shifted by 1
        let p = vec![q(0), q(0), q(1)];
        assert_eq!(shift(&p, &q(1)), vec![q(1), q(2), q(1)]);
        assert_eq!(shift(&p, &q(-1)), vec![q(1), q(-2), q(1)]);
    }

    #[test]
    fn two_dimensional_majorants() {
        let m = tail_majorant(2, ConstantKind::CenteredL1).unwrap();
        assert_eq!((m.c.clone(), m.crossover), (q(1), 1));
        let m = tail_majorant(2, ConstantKind::UncenteredCube).unwrap();
        assert_eq!((m.c.clone(), m.crossover), (q(2), 1));
        let e = constant_enclosure(2, 1000, ConstantKind::UncenteredCube).unwrap();
        assert_eq!(e.width(), r(8, 1001));
        assert_eq!(e.upper, q(12));
        let e = constant_enclosure(1, 10, ConstantKind::UncenteredCube).unwrap();
        assert_eq!((e.lower.clone(), e.upper.clone()), (q(2), q(2)));
        let e = constant_enclosure(2, 0, ConstantKind::CenteredL1).unwrap();
        assert_eq!(e.lower, q(4));
    }

    #[test]
    fn majorants_hold_beyond_crossover() {
        for d in 2..=6 {
            for kind in [ConstantKind::CenteredL1, ConstantKind::UncenteredCube] {
                let m = tail_majorant(d, kind).unwrap();
                let terms: Vec<BigRational> = match kind {
                    ConstantKind::CenteredL1 => centered_constant_terms(d, 300).unwrap(),
                    ConstantKind::UncenteredCube => (1..=300).map(|k| uncentered_constant_term(d, k)).collect(),
                };
                for k in m.crossover.max(1)..=300 {
                    assert!(terms[k as usize - 1] <= &m.c / q(k * (k + 1)), "{kind} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn enclosures_nest() {
        for kind in [ConstantKind::CenteredL1, ConstantKind::UncenteredCube] {
            for d in 2..=4 {
                let mut prev: Option<ConstantEnclosure> = None;
                for k in 0..25 {
                    let Ok(e) = constant_enclosure(d, k, kind) else { continue };
                    assert!(e.lower <= e.upper);
                    if let Some(p) = prev {
                        assert!(p.lower <= e.lower && e.upper <= p.upper, "{kind} d={d} K={k}");
                    }
                    prev = Some(e);
                }
            }
        }
    }
}
