//! Brute-force reference implementations.
//!
//! Nothing here shares code with the fast evaluators: averages are literal
//! sums over explicitly enumerated sets, point counts come from enumeration
//! rather than the shell recurrence, and every candidate radius or box is
//! tried. Slow by design.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::gridfn::{Grid, GridFunction};
use crate::lattice::{LatticeBox, LatticePoint};
use crate::maxop::{ArgmaxWitness, WitnessSet};
use crate::scalar::Average;

type Q = BigRational;

fn farthest(f: &GridFunction<Q>, n: &[i64], dist: impl Fn(&[i64], &[i64]) -> u64) -> u64 {
    f.iter().map(|(p, _)| dist(p.coords(), n)).max().unwrap_or(0)
}

fn l1(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// Centered 1-D maximal function by trying every radius up to `r_cap`.
pub fn brute_centered_1d(f: &GridFunction<Q>, n: i64, r_cap: u64) -> Result<ArgmaxWitness<Q>> {
    if f.dim() != 1 {
        return Err(Error::GeometryMismatch { geometry: "centered1d", dim: f.dim() });
    }
    brute_centered_l1(f, &LatticePoint(vec![n]), r_cap)
}

/// Centered ℓ¹-ball maximal function by trying every radius up to `r_cap`;
/// each ball is enumerated point by point from its bounding cube.
pub fn brute_centered_l1(f: &GridFunction<Q>, n: &LatticePoint, r_cap: u64) -> Result<ArgmaxWitness<Q>> {
    if f.dim() != n.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: n.dim() });
    }
    let need = farthest(f, n.coords(), l1);
    if r_cap < need {
        return Err(Error::TruncationTooSmall { given: r_cap, required: need });
    }
    let mut best: Option<(Q, Average<Q>, u64)> = None;
    for r in 0..=r_cap {
        let cube = LatticeBox::new(
            LatticePoint(n.coords().iter().map(|c| c - r as i64).collect()),
            LatticePoint(n.coords().iter().map(|c| c + r as i64).collect()),
        )?;
        let mut mass = Q::zero();
        let mut count: u128 = 0;
        for m in cube.points() {
            if l1(m.coords(), n.coords()) <= r {
                count += 1;
                mass += f.get(&m).abs();
            }
        }
        let value = &mass / Q::from_integer(count.into());
        if best.as_ref().map_or(true, |(v, _, _)| value > *v) {
            best = Some((value, Average { mass, count }, r));
        }
    }
    let (_, average, radius) = best.expect("r = 0 is always tried");
    Ok(ArgmaxWitness { average, set: WitnessSet::Ball { center: n.clone(), radius } })
}

/// Smallest side cap that the uncentered searches accept: the largest extent
/// of the hull of the support and the query point.
pub fn required_span(f: &GridFunction<Q>, n: &[i64]) -> u64 {
    (0..n.len())
        .map(|a| {
            let lo = f.iter().map(|(p, _)| p.coords()[a]).chain([n[a]]).min().unwrap();
            let hi = f.iter().map(|(p, _)| p.coords()[a]).chain([n[a]]).max().unwrap();
            (hi - lo + 1) as u64
        })
        .max()
        .unwrap_or(1)
}

/// Uncentered 1-D maximal function over every interval through `n` of length
/// at most `span_cap`.
pub fn brute_uncentered_1d(f: &GridFunction<Q>, n: i64, span_cap: u64) -> Result<ArgmaxWitness<Q>> {
    if f.dim() != 1 {
        return Err(Error::GeometryMismatch { geometry: "uncentered1d", dim: f.dim() });
    }
    brute_uncentered_cube(f, &LatticePoint(vec![n]), span_cap)
}

/// Uncentered cube maximal function: every lattice box through `n` whose side
/// counts are at most `span_cap` and differ pairwise by at most one.
///
/// Boxes missing the support average to zero and are only kept when `f` is
/// zero. Ties: fewest points, then lexicographically smallest lower corner,
/// then upper corner.
pub fn brute_uncentered_cube(f: &GridFunction<Q>, n: &LatticePoint, span_cap: u64) -> Result<ArgmaxWitness<Q>> {
    let d = n.dim();
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: d });
    }
    let need = required_span(f, n.coords());
    if span_cap < need {
        return Err(Error::TruncationTooSmall { given: span_cap, required: need });
    }
    let mut best: Option<(Q, Average<Q>, LatticeBox)> = None;
    // every count vector in [1, span_cap]^d
    let mut counts = vec![1u64; d];
    loop {
        let admissible = counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1;
        if admissible {
            // every lower corner keeping n inside
            let lo_min: Vec<i64> = (0..d).map(|a| n.0[a] - counts[a] as i64 + 1).collect();
            let mut lower = lo_min.clone();
            loop {
                let upper: Vec<i64> = (0..d).map(|a| lower[a] + counts[a] as i64 - 1).collect();
                let b = LatticeBox::new(LatticePoint(lower.clone()), LatticePoint(upper))?;
                let mut mass = Q::zero();
                let mut hits = false;
                for (p, v) in f.iter() {
                    if b.contains(p.coords()) {
                        mass += v.abs();
                        hits = true;
                    }
                }
                if hits || f.is_zero() {
                    let count: u128 = counts.iter().map(|&c| c as u128).product();
                    let value = &mass / Q::from_integer(count.into());
                    let better = match &best {
                        None => true,
                        Some((v, a, bb)) => match value.cmp(v) {
                            Ordering::Greater => true,
                            Ordering::Less => false,
                            Ordering::Equal => {
                                (count, &b.lower().0, &b.upper().0) < (a.count, &bb.lower().0, &bb.upper().0)
                            }
                        },
                    };
                    if better {
                        best = Some((value, Average { mass, count }, b));
                    }
                }
                if !advance(&mut lower, &lo_min, &n.0) {
                    break;
                }
            }
        }
        let mut axis = 0;
        while axis < d && counts[axis] == span_cap {
            counts[axis] = 1;
            axis += 1;
        }
        if axis == d {
            break;
        }
        counts[axis] += 1;
    }
    let (_, average, b) = best.expect("the singleton box is always admissible");
    Ok(ArgmaxWitness { average, set: WitnessSet::Box(b) })
}

/// Steps `cur` to the lexicographic successor within `[min, max]`.
fn advance(cur: &mut [i64], min: &[i64], max: &[i64]) -> bool {
    for axis in (0..cur.len()).rev() {
        if cur[axis] < max[axis] {
            cur[axis] += 1;
            return true;
        }
        cur[axis] = min[axis];
    }
    false
}

/// Literal neighbour-difference variation of values on a box.
///
/// With `zero_extended`, edges leaving the box (to an implicit zero) count too.
pub fn brute_variation(grid: &Grid<Q>, zero_extended: bool) -> Q {
    let b = grid.bounds();
    let mut total = Q::zero();
    for (p, v) in grid.iter() {
        for axis in 0..b.dim() {
            let next = p.offset(axis, 1);
            match grid.get(next.coords()) {
                Some(w) => total += (w - v).abs(),
                None if zero_extended => total += v.abs(),
                None => {}
            }
            if zero_extended && grid.get(p.offset(axis, -1).coords()).is_none() {
                total += v.abs();
            }
        }
    }
    total
}

/// Number of lattice points with `|p|₁ ≤ k`, by enumerating the cube `[-k, k]^d`.
pub fn brute_ball_count(d: usize, k: u64) -> u128 {
    LatticeBox::centered(d, k)
        .points()
        .filter(|p| p.l1_norm() <= k)
        .count() as u128
}
