//! CSV tables and JSON summaries. Every rational is written as canonical
//! `p/q` text; rows come out in a fixed order so reruns are byte-identical.

use std::io::Write;

use hlvar::battery::Check;
use hlvar::maxop::grid_values;
use hlvar::{format_decimal, format_rational, Average, BigRational, Grid, SharpnessRecord, StopReason};
use serde::Serialize;

use crate::document::GridFunctionDocument;

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::Converged => "converged",
        StopReason::RadiusLimit => "radius-limit",
    }
}

/// `point,value,decimal`, one row per grid point in lexicographic order.
pub fn write_maxfn_csv<W: Write>(out: W, grid: &Grid<Average<BigRational>>, digits: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point", "value", "decimal"])?;
    for (p, v) in grid_values(grid).iter() {
        w.write_record([p.to_string(), format_rational(v), format_decimal(v, digits)])?;
    }
    w.flush()?;
    Ok(())
}

fn support_text(rec: &SharpnessRecord) -> String {
    rec.support
        .iter()
        .map(|(p, v)| format!("{}@{p}", format_rational(v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// One row per record, in the order given (the scan sorts by gap).
pub fn write_scan_csv<W: Write>(out: W, records: &[SharpnessRecord], digits: usize) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "rank",
        "support",
        "support_size",
        "l1_norm",
        "geometry",
        "dim",
        "truncation_radius",
        "ratio",
        "ratio_decimal",
        "bound",
        "gap",
        "gap_decimal",
        "is_delta",
    ])?;
    for (i, r) in records.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            support_text(r),
            r.support_size().to_string(),
            format_rational(&r.l1_norm),
            r.spec.geometry().name().to_string(),
            r.spec.dim().to_string(),
            r.truncation_radius.to_string(),
            format_rational(&r.ratio),
            format_decimal(&r.ratio, digits),
            format_rational(&r.bound),
            format_rational(&r.gap),
            format_decimal(&r.gap, digits),
            r.is_delta.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct TracePoint {
    pub radius: u64,
    pub variation: String,
}

#[derive(Serialize)]
pub struct VerifySummary {
    pub geometry: &'static str,
    pub dim: usize,
    pub epsilon: String,
    pub r_max: u64,
    pub truncation_radius: u64,
    pub stop: &'static str,
    pub l1_norm: String,
    pub variation: String,
    pub ratio: String,
    pub bound: String,
    pub gap: String,
    pub gap_decimal: String,
    pub passed: bool,
    pub trace: Vec<TracePoint>,
    pub instance: GridFunctionDocument,
}

impl VerifySummary {
    pub fn new(rec: &SharpnessRecord, epsilon: &BigRational, r_max: u64, instance: GridFunctionDocument) -> Self {
        VerifySummary {
            geometry: rec.spec.geometry().name(),
            dim: rec.spec.dim(),
            epsilon: format_rational(epsilon),
            r_max,
            truncation_radius: rec.truncation_radius,
            stop: stop_name(rec.stop),
            l1_norm: format_rational(&rec.l1_norm),
            variation: format_rational(&(&rec.ratio * &rec.l1_norm)),
            ratio: format_rational(&rec.ratio),
            bound: format_rational(&rec.bound),
            gap: format_rational(&rec.gap),
            gap_decimal: format_decimal(&rec.gap, 12),
            passed: rec.gap_nonnegative(),
            trace: rec
                .trace
                .iter()
                .map(|(r, v)| TracePoint { radius: *r, variation: format_rational(v) })
                .collect(),
            instance,
        }
    }

    pub fn human(&self, rec: &SharpnessRecord) -> String {
        let mut s = String::new();
        let line = |s: &mut String, k: &str, v: String| s.push_str(&format!("{k:<12}{v}\n"));
        line(&mut s, "operator", rec.spec.to_string());
        line(&mut s, "support", format!("{} point(s), l1 norm {}", rec.support_size(), self.l1_norm));
        line(&mut s, "truncation", format!("R = {} ({})", self.truncation_radius, self.stop));
        line(&mut s, "variation", self.variation.clone());
        line(&mut s, "ratio", format!("{} ~ {}", self.ratio, format_decimal(&rec.ratio, 12)));
        line(&mut s, "bound", format!("{} ~ {}", self.bound, format_decimal(&rec.bound, 12)));
        line(&mut s, "gap", format!("{} ~ {}", self.gap, self.gap_decimal));
        for t in &rec.trace {
            line(&mut s, "trace", format!("R = {:<6} Var = {}", t.0, format_decimal(&t.1, 12)));
        }
        s.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        s
    }
}

#[derive(Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GridFunctionDocument>,
}

#[derive(Serialize)]
pub struct SuiteSummary {
    pub suite: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

impl SuiteSummary {
    pub fn new(suite: &'static str, seed: u64, checks: &[Check]) -> Self {
        SuiteSummary {
            suite,
            seed,
            passed: checks.iter().all(|c| c.passed),
            checks: checks
                .iter()
                .map(|c| CheckSummary {
                    name: c.name.clone(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                    witness: c.witness.as_ref().map(GridFunctionDocument::from_function),
                })
                .collect(),
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        s.push_str(&format!("{}/{} checks passed\n", passed, self.checks.len()));
        s
    }
}
