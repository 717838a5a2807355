//! Verification report structure and its two serializations: a
//! human-readable text layout and a stable machine-readable key-value
//! document (see `docs/report-format.md`).
//!
//! Rendering is deterministic: identical report data produces
//! byte-identical output.

use std::fmt::Write as _;

use crate::fields::TangentPoint;

/// How a record's `value` compares against its `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Pass iff `value < tolerance` (residual max-norms).
    ResidualMax,
    /// Pass iff `value > tolerance` (nondegeneracy margins).
    LowerBound,
}

#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub kind: CheckKind,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst_point: Option<TangentPoint>,
}

impl CheckRecord {
    pub fn residual(
        name: impl Into<String>,
        value: f64,
        tolerance: f64,
        worst_point: Option<TangentPoint>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            kind: CheckKind::ResidualMax,
            value,
            tolerance,
            pass: value < tolerance,
            worst_point,
        }
    }

    pub fn lower_bound(
        name: impl Into<String>,
        value: f64,
        tolerance: f64,
        worst_point: Option<TangentPoint>,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            kind: CheckKind::LowerBound,
            value,
            tolerance,
            pass: value > tolerance,
            worst_point,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportSection {
    pub name: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl ReportSection {
    pub fn from_records(name: impl Into<String>, records: Vec<CheckRecord>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        ReportSection {
            name: name.into(),
            records,
            pass,
        }
    }
}

/// Verdict of an equivalence suite: a list of member booleans that a
/// mathematical identity forces to coincide. `consistent` is true iff all
/// members agree; `pass` is true iff all members hold.
#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub name: String,
    pub members: Vec<(String, bool)>,
    pub consistent: bool,
    pub pass: bool,
}

impl EquivalenceVerdict {
    pub fn new(name: impl Into<String>, members: Vec<(String, bool)>) -> Self {
        let consistent = members.windows(2).all(|w| w[0].1 == w[1].1);
        let pass = members.iter().all(|m| m.1);
        EquivalenceVerdict {
            name: name.into(),
            members,
            consistent,
            pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportMeta {
    pub model_name: String,
    pub dim: usize,
    pub coordinate_names: Vec<String>,
    pub seed: u64,
    pub points_requested: usize,
    pub points_used: usize,
    pub points_skipped: usize,
    pub residual_tolerance: f64,
    pub nondegeneracy_tolerance: f64,
    pub config_hash: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub meta: ReportMeta,
    pub sections: Vec<ReportSection>,
    pub verdicts: Vec<EquivalenceVerdict>,
    /// Per-point evaluation failures (domain errors), as diagnostics.
    pub diagnostics: Vec<String>,
    /// False when more than 10% of requested points were skipped.
    pub sampling_valid: bool,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.sampling_valid
            && self.sections.iter().all(|s| s.pass)
            && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn all_consistent(&self) -> bool {
        self.verdicts.iter().all(|v| v.consistent)
    }
}

fn fmt_point(p: &TangentPoint) -> String {
    let xs: Vec<String> = p.x.iter().map(|v| format!("{v:.6}")).collect();
    let vs: Vec<String> = p.xdot.iter().map(|v| format!("{v:.6}")).collect();
    format!("x=[{}] v=[{}]", xs.join(","), vs.join(","))
}

/// Human-readable rendering.
pub fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let m = &report.meta;
    let _ = writeln!(out, "verification report: {}", m.model_name);
    let _ = writeln!(
        out,
        "  dim {} | seed {} | points {}/{} used, {} skipped{}",
        m.dim,
        m.seed,
        m.points_used,
        m.points_requested,
        m.points_skipped,
        if report.sampling_valid {
            ""
        } else {
            " | SAMPLING INVALID (>10% skipped)"
        }
    );
    let _ = writeln!(
        out,
        "  tolerances: residual {:e}, nondegeneracy {:e}",
        m.residual_tolerance, m.nondegeneracy_tolerance
    );
    if let Some(h) = &m.config_hash {
        let _ = writeln!(out, "  config hash: {h}");
    }
    for section in &report.sections {
        let _ = writeln!(
            out,
            "section {}: {}",
            section.name,
            if section.pass { "PASS" } else { "FAIL" }
        );
        for r in &section.records {
            let rel = match r.kind {
                CheckKind::ResidualMax => "<",
                CheckKind::LowerBound => ">",
            };
            let _ = writeln!(
                out,
                "  {:<28} {:>13.6e} {} {:e} : {}",
                r.name,
                r.value,
                rel,
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            );
            if !r.pass {
                if let Some(p) = &r.worst_point {
                    let _ = writeln!(out, "      worst point: {}", fmt_point(p));
                }
            }
        }
    }
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "suite {}: {}{}",
            v.name,
            if v.pass { "PASS" } else { "FAIL" },
            if v.consistent {
                " (members consistent)"
            } else {
                " (MEMBERS INCONSISTENT)"
            }
        );
        for (name, value) in &v.members {
            let _ = writeln!(out, "  {:<28} {}", name, value);
        }
    }
    if !report.diagnostics.is_empty() {
        let _ = writeln!(out, "diagnostics ({}):", report.diagnostics.len());
        for d in &report.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    let _ = writeln!(
        out,
        "overall: {}",
        if report.all_pass() { "PASS" } else { "FAIL" }
    );
    out
}

/// Stable machine-readable key-value rendering.
pub fn render_machine(report: &VerificationReport) -> String {
    let mut out = String::new();
    let m = &report.meta;
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("meta.model", m.model_name.clone());
    kv("meta.dim", m.dim.to_string());
    kv("meta.coordinates", m.coordinate_names.join(","));
    kv("meta.seed", m.seed.to_string());
    kv("meta.points.requested", m.points_requested.to_string());
    kv("meta.points.used", m.points_used.to_string());
    kv("meta.points.skipped", m.points_skipped.to_string());
    kv(
        "meta.tolerance.residual",
        format!("{:e}", m.residual_tolerance),
    );
    kv(
        "meta.tolerance.nondegeneracy",
        format!("{:e}", m.nondegeneracy_tolerance),
    );
    if let Some(h) = &m.config_hash {
        kv("meta.config_hash", h.clone());
    }
    kv("meta.sampling_valid", report.sampling_valid.to_string());
    for section in &report.sections {
        for r in &section.records {
            let base = format!("check.{}.{}", section.name, r.name);
            kv(&format!("{base}.value"), format!("{:e}", r.value));
            kv(&format!("{base}.tolerance"), format!("{:e}", r.tolerance));
            kv(&format!("{base}.pass"), r.pass.to_string());
            if let Some(p) = &r.worst_point {
                kv(&format!("{base}.worst_point"), fmt_point(p));
            }
        }
        kv(
            &format!("check.{}.pass", section.name),
            section.pass.to_string(),
        );
    }
    for v in &report.verdicts {
        for (name, value) in &v.members {
            kv(&format!("suite.{}.member.{}", v.name, name), value.to_string());
        }
        kv(&format!("suite.{}.consistent", v.name), v.consistent.to_string());
        kv(&format!("suite.{}.pass", v.name), v.pass.to_string());
    }
    kv("diagnostics.count", report.diagnostics.len().to_string());
    for (i, d) in report.diagnostics.iter().enumerate() {
        kv(&format!("diagnostics.{i}"), d.clone());
    }
    kv("overall.pass", report.all_pass().to_string());
    kv("overall.consistent", report.all_consistent().to_string());
    out
}
