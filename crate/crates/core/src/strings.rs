//! Strings of local extrema of one-dimensional sequences.
//!
//! A string of local maxima of `g` is an integer interval `[n, m]` with
//! `g(n-1) < g(n) = … = g(m) > g(m+1)`; minima analogously. For a sequence
//! decaying to its limit on both sides the variation is twice the sum of the
//! string maxima minus twice the sum of the string minima, which is how the
//! variation of a maximal function along a lattice line is accumulated.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Field;

/// How a truncated window continues beyond its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct TailContract<F> {
    /// Value approached as the index goes to `-∞`.
    pub left_limit: F,
    /// Value approached as the index goes to `+∞`.
    pub right_limit: F,
    /// Whether, beyond the window, the sequence moves monotonically from the
    /// boundary value to the limit. When set, the full variation is exact.
    pub monotone_tails: bool,
}

impl<F: Field> TailContract<F> {
    /// Zero limits with monotone decay, the contract of a maximal function of a
    /// finitely supported input.
    pub fn decaying() -> Self {
        Self { left_limit: F::zero(), right_limit: F::zero(), monotone_tails: true }
    }
}

/// A maximal constant run `[start, end]` (absolute indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: i64,
    pub end: i64,
    /// The run reaches the truncation boundary, so in the untruncated sequence
    /// it may continue further.
    pub touches_boundary: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StringDecomposition<F> {
    pub maxima: Vec<Run>,
    pub minima: Vec<Run>,
    /// `2 Σ max - 2 Σ min` over the listed strings.
    pub extrema_term: F,
    /// `extrema_term - boundary_correction` is the variation inside the window.
    pub boundary_correction: F,
    /// Variation across all of `ℤ` when the tails are monotone.
    pub full_variation: Option<F>,
    /// Both the window and its limits are one constant.
    pub constant: bool,
}

impl<F: Field> StringDecomposition<F> {
    pub fn truncated_variation(&self) -> F {
        self.extrema_term.clone() - self.boundary_correction.clone()
    }

    /// Whether the strings interleave `max < min < max < …` strictly.
    pub fn is_interleaved(&self) -> bool {
        let mut all: Vec<(&Run, bool)> = self
            .maxima
            .iter()
            .map(|r| (r, true))
            .chain(self.minima.iter().map(|r| (r, false)))
            .collect();
        all.sort_by_key(|(r, _)| r.start);
        all.windows(2).all(|w| w[0].0.end < w[1].0.start && w[0].1 != w[1].1)
    }
}

fn sign<F: PartialOrd>(from: &F, to: &F) -> i32 {
    match to.partial_cmp(from) {
        Some(Ordering::Greater) => 1,
        Some(Ordering::Less) => -1,
        _ => 0,
    }
}

/// Decomposes `values` (indexed from `first_index`) into strings of local
/// maxima and minima, with neighbours outside the window given by the limits.
pub fn string_decomposition<F: Field>(
    values: &[F],
    first_index: i64,
    tail: &TailContract<F>,
) -> Result<StringDecomposition<F>> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    let last = values.len() - 1;
    let two = F::one() + F::one();

    // Maximal constant runs inside the window.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] != values[start] {
            runs.push((start, i - 1));
            start = i;
        }
    }

    let constant = runs.len() == 1 && values[0] == tail.left_limit && values[0] == tail.right_limit;
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    let mut extrema_term = F::zero();
    for (k, &(s, e)) in runs.iter().enumerate() {
        let v = &values[s];
        let left = if k == 0 { &tail.left_limit } else { &values[runs[k - 1].0] };
        let right = if k + 1 == runs.len() { &tail.right_limit } else { &values[runs[k + 1].0] };
        let run = Run {
            start: first_index + s as i64,
            end: first_index + e as i64,
            touches_boundary: s == 0 || e == last,
        };
        if v > left && v > right {
            extrema_term = extrema_term + two.clone() * v.clone();
            maxima.push(run);
        } else if v < left && v < right {
            extrema_term = extrema_term - two.clone() * v.clone();
            minima.push(run);
        }
    }

    // Runs of the extended sequence [left_limit, values…, right_limit] that
    // contain a limit marker contribute -L·(exit sign) on the left and
    // +L·(entry sign) on the right; the two jumps into the limits are not part
    // of the window.
    let mut correction = F::zero();
    if !constant {
        let first_run_end = runs[0].1;
        let (left_exit, left_value) = if values[0] == tail.left_limit {
            let next = if first_run_end == last { &tail.right_limit } else { &values[first_run_end + 1] };
            (sign(&values[0], next), &values[0])
        } else {
            (sign(&tail.left_limit, &values[0]), &tail.left_limit)
        };
        let last_run_start = runs[runs.len() - 1].0;
        let (right_entry, right_value) = if values[last] == tail.right_limit {
            let prev = if last_run_start == 0 { &tail.left_limit } else { &values[last_run_start - 1] };
            (sign(prev, &values[last]), &values[last])
        } else {
            (sign(&values[last], &tail.right_limit), &tail.right_limit)
        };
        // When the whole window equals both limits' run only one marker run
        // exists; that case is `constant` and excluded above.
        let tails = left_value.clone() * signed::<F>(-left_exit) + right_value.clone() * signed::<F>(right_entry);
        let jumps = (values[0].clone() - tail.left_limit.clone()).abs()
            + (values[last].clone() - tail.right_limit.clone()).abs();
        // extended variation = extrema + tails; window = extended - jumps
        correction = jumps - tails;
    }

    let full_variation = tail.monotone_tails.then(|| {
        extrema_term.clone() - correction.clone()
            + (values[0].clone() - tail.left_limit.clone()).abs()
            + (values[last].clone() - tail.right_limit.clone()).abs()
    });
    Ok(StringDecomposition {
        maxima,
        minima,
        extrema_term,
        boundary_correction: correction,
        full_variation,
        constant,
    })
}

fn signed<F: Field>(s: i32) -> F {
    match s {
        1 => F::one(),
        -1 => -F::one(),
        _ => F::zero(),
    }
}

/// Window variation `Σ |v[i+1] - v[i]|` written as `Σ c_i v[i]` with
/// `c_i ∈ {-2, …, 2}`; pushes the nonzero `(index, c_i)` pairs.
///
/// Monotone stretches cancel, so only string extrema and the two window ends
/// survive.
pub(crate) fn variation_coefficients<V>(
    len: usize,
    value: impl Fn(usize) -> V,
    cmp: impl Fn(&V, &V) -> Ordering,
    out: &mut Vec<(usize, i8)>,
) {
    if len < 2 {
        return;
    }
    let mut prev_sign: i8 = 0;
    let mut cur = value(0);
    for i in 0..len {
        let s: i8 = if i + 1 < len {
            let next = value(i + 1);
            let s = match cmp(&next, &cur) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            };
            cur = next;
            s
        } else {
            0
        };
        let c = prev_sign - s;
        if c != 0 {
            out.push((i, c));
        }
        prev_sign = s;
    }
}
