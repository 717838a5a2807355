//! Sampling-based verification of the induced structures.
//!
//! A [`Suite`] evaluates a (metric, connection) pair at seeded sample
//! points and runs the condition checks over them:
//!
//! - [`Suite::check_symplectic`]: the induced 2-form is closed (residual
//!   of its exterior derivative) and nondegenerate.
//! - [`Suite::check_poisson`]: the Schouten bracket of the induced
//!   2-vector vanishes and the 2-vector is nondegenerate.
//! - [`Suite::check_linear_equivalence`]: for a linear connection the four
//!   conditions {L_K g-flat = 0, d_K g = 0, d-upsilon = 0, schouten = 0}
//!   are mathematically equivalent; the suite evaluates all four booleans
//!   and flags any disagreement as an internal inconsistency.
//! - [`Suite::check_torsion_free_symmetry`]: for a torsion-free linear
//!   connection, {nabla g symmetric, d-upsilon = 0, schouten = 0} are
//!   equivalent.
//! - [`Suite::fd_oracle`]: recomputes the derivative-bearing residuals
//!   with central finite differences and reports the relative deviation.
//!
//! Per-point evaluations are independent; report assembly is an ordered
//! reduction over the sample index, so identical inputs yield
//! byte-identical reports.

mod fd;
pub mod random;
mod report;
mod sample;

pub use fd::{fd_d_upsilon, fd_residual_mixed, fd_schouten, FD_STEP};
pub use report::{
    render_machine, render_text, CheckKind, CheckRecord, EquivalenceVerdict, ReportMeta,
    ReportSection, VerificationReport,
};
pub use sample::{sample_points, SampleSpec, Samples};

use crate::fields::{Antisym2, Chart, ConnectionField, MetricField, TangentPoint};
use crate::geometry::{GeometryError, PointOps};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid sample spec: {0}")]
    BadSampleSpec(String),
    #[error("no sample point evaluated successfully")]
    NoValidPoints,
    #[error("suite requires a linear connection")]
    NotLinear,
    #[error("connection has torsion (max |T| = {max:.3e} at tolerance {tol:.1e})")]
    HasTorsion { max: f64, tol: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Residual and nondegeneracy thresholds. Residual vanishing is judged in
/// absolute max-norm over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub residual: f64,
    pub nondegeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            nondegeneracy: 1e-10,
        }
    }
}

/// Scale-aware nondegeneracy margin of a stored 2-form or 2-vector:
/// smallest singular value over `max(1, largest singular value)`.
pub fn nondegeneracy_margin(a: &Antisym2) -> f64 {
    let svd = a.to_matrix().svd(false, false);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for s in svd.singular_values.iter() {
        lo = lo.min(*s);
        hi = hi.max(*s);
    }
    lo / hi.max(1.0)
}

/// One (metric, connection) pair evaluated over a sampled point set.
pub struct Suite<'a> {
    pub g: &'a MetricField,
    pub k: &'a ConnectionField,
    pub tol: Tolerances,
    pub samples: Samples,
    pub points: Vec<PointOps>,
    pub diagnostics: Vec<String>,
}

impl<'a> Suite<'a> {
    pub fn new(
        chart: &Chart,
        g: &'a MetricField,
        k: &'a ConnectionField,
        spec: &SampleSpec,
        tol: Tolerances,
    ) -> Result<Self, VerifyError> {
        let samples = sample_points(chart, spec)?;
        let mut points = Vec::with_capacity(samples.points.len());
        let mut diagnostics = Vec::new();
        for (i, p) in samples.points.iter().enumerate() {
            match PointOps::new(g, k, p) {
                Ok(ops) => points.push(ops),
                Err(e) => diagnostics.push(format!("point {i}: {e}")),
            }
        }
        if points.is_empty() {
            return Err(VerifyError::NoValidPoints);
        }
        Ok(Suite {
            g,
            k,
            tol,
            samples,
            points,
            diagnostics,
        })
    }

    fn max_residual(&self, f: impl Fn(&PointOps) -> f64) -> (f64, Option<TangentPoint>) {
        let mut max = -1.0;
        let mut worst = None;
        for ops in &self.points {
            let v = f(ops);
            if v > max {
                max = v;
                worst = Some(ops.point.clone());
            }
        }
        (max.max(0.0), worst)
    }

    fn min_margin(&self, f: impl Fn(&PointOps) -> f64) -> (f64, Option<TangentPoint>) {
        let mut min = f64::INFINITY;
        let mut worst = None;
        for ops in &self.points {
            let v = f(ops);
            if v < min {
                min = v;
                worst = Some(ops.point.clone());
            }
        }
        (min, worst)
    }

    /// Closedness and nondegeneracy of the induced 2-form.
    pub fn check_symplectic(&self) -> ReportSection {
        let (res, worst) = self.max_residual(|o| o.d_upsilon().max_abs());
        let (margin, tight) = self.min_margin(|o| nondegeneracy_margin(o.upsilon().as_d2()));
        ReportSection::from_records(
            "symplectic",
            vec![
                CheckRecord::residual("d-upsilon", res, self.tol.residual, worst),
                CheckRecord::lower_bound(
                    "upsilon-nondegenerate",
                    margin,
                    self.tol.nondegeneracy,
                    tight,
                ),
            ],
        )
    }

    /// Vanishing Schouten bracket and nondegeneracy of the induced
    /// 2-vector.
    pub fn check_poisson(&self) -> ReportSection {
        let (res, worst) = self.max_residual(|o| o.schouten().max_abs());
        let (margin, tight) = self.min_margin(|o| nondegeneracy_margin(o.lambda().as_d2()));
        ReportSection::from_records(
            "poisson",
            vec![
                CheckRecord::residual("schouten", res, self.tol.residual, worst),
                CheckRecord::lower_bound(
                    "lambda-nondegenerate",
                    margin,
                    self.tol.nondegeneracy,
                    tight,
                ),
            ],
        )
    }

    /// Maximum torsion coefficient over the samples (linear connections).
    pub fn max_torsion_linear(&self) -> Result<f64, VerifyError> {
        if !self.k.is_linear() {
            return Err(VerifyError::NotLinear);
        }
        let mut max = 0.0f64;
        for ops in &self.points {
            max = max.max(ops.torsion_linear()?.max_abs());
        }
        Ok(max)
    }

    /// Four-way equivalence for linear connections.
    pub fn check_linear_equivalence(&self) -> Result<EquivalenceVerdict, VerifyError> {
        if !self.k.is_linear() {
            return Err(VerifyError::NotLinear);
        }
        let tol = self.tol.residual;
        let (lie, _) = self.max_residual(|o| o.lie_k_gflat().max_abs());
        let mut dkg = 0.0f64;
        for ops in &self.points {
            dkg = dkg.max(ops.d_k_g()?.max_abs());
        }
        let (dup, _) = self.max_residual(|o| o.d_upsilon().max_abs());
        let (sch, _) = self.max_residual(|o| o.schouten().max_abs());
        Ok(EquivalenceVerdict::new(
            "linear-equivalence",
            vec![
                ("lie-k-gflat".into(), lie < tol),
                ("d-k-g".into(), dkg < tol),
                ("d-upsilon".into(), dup < tol),
                ("schouten".into(), sch < tol),
            ],
        ))
    }

    /// Three-way equivalence for torsion-free linear connections. Errors
    /// when the connection carries torsion above the residual tolerance.
    pub fn check_torsion_free_symmetry(&self) -> Result<EquivalenceVerdict, VerifyError> {
        let max_torsion = self.max_torsion_linear()?;
        if max_torsion >= self.tol.residual {
            return Err(VerifyError::HasTorsion {
                max: max_torsion,
                tol: self.tol.residual,
            });
        }
        let tol = self.tol.residual;
        let mut nabla_asym = 0.0f64;
        for ops in &self.points {
            let nabla = ops.nabla_g()?;
            let n = ops.n;
            for l in 0..n {
                for m in 0..n {
                    for v in 0..n {
                        nabla_asym = nabla_asym
                            .max((nabla.tensor.get(l, m, v) - nabla.tensor.get(m, l, v)).abs());
                    }
                }
            }
        }
        let (dup, _) = self.max_residual(|o| o.d_upsilon().max_abs());
        let (sch, _) = self.max_residual(|o| o.schouten().max_abs());
        Ok(EquivalenceVerdict::new(
            "torsion-free-symmetry",
            vec![
                ("nabla-g-symmetric".into(), nabla_asym < tol),
                ("d-upsilon".into(), dup < tol),
                ("schouten".into(), sch < tol),
            ],
        ))
    }

    /// Finite-difference cross oracle: recomputes the mixed closedness
    /// residual, the exterior derivative of the 2-form, and the Schouten
    /// bracket with central differences and reports the worst relative
    /// deviation from the closed-form path. Relative means the sup-norm
    /// difference divided by `max(1, sup-norm of the closed form value)`,
    /// so exactly vanishing residuals compare in absolute terms.
    pub fn fd_oracle(&self) -> ReportSection {
        let h = FD_STEP;
        let mut records = Vec::new();
        let mut skipped_total = 0usize;

        let mut dev_mixed = 0.0f64;
        let mut worst_mixed = None;
        let mut dev_dup = 0.0f64;
        let mut worst_dup = None;
        let mut dev_sch = 0.0f64;
        let mut worst_sch = None;

        for ops in &self.points {
            let p = &ops.point;
            let ad_mixed = ops.residual_mixed();
            match fd_residual_mixed(self.g, self.k, p, h) {
                Ok(fd) => {
                    let diff = max_abs_diff3(ad_mixed.as_slice(), fd.as_slice());
                    let rel = diff / ad_mixed.max_abs().max(1.0);
                    if rel > dev_mixed {
                        dev_mixed = rel;
                        worst_mixed = Some(p.clone());
                    }
                }
                Err(_) => skipped_total += 1,
            }
            let ad_dup = ops.d_upsilon();
            match fd_d_upsilon(self.g, self.k, p, h) {
                Ok(fd) => {
                    let diff = max_abs_diff3(ad_dup.as_d3().as_slice(), fd.as_slice());
                    let rel = diff / ad_dup.max_abs().max(1.0);
                    if rel > dev_dup {
                        dev_dup = rel;
                        worst_dup = Some(p.clone());
                    }
                }
                Err(_) => skipped_total += 1,
            }
            let ad_sch = ops.schouten();
            match fd_schouten(self.g, self.k, p, h) {
                Ok(fd) => {
                    let diff = max_abs_diff3(ad_sch.as_d3().as_slice(), fd.as_slice());
                    let rel = diff / ad_sch.max_abs().max(1.0);
                    if rel > dev_sch {
                        dev_sch = rel;
                        worst_sch = Some(p.clone());
                    }
                }
                Err(_) => skipped_total += 1,
            }
        }

        records.push(CheckRecord::residual(
            "residual-mixed-fd-deviation",
            dev_mixed,
            1e-5,
            worst_mixed,
        ));
        records.push(CheckRecord::residual(
            "d-upsilon-fd-deviation",
            dev_dup,
            1e-5,
            worst_dup,
        ));
        records.push(CheckRecord::residual(
            "schouten-fd-deviation",
            dev_sch,
            1e-5,
            worst_sch,
        ));
        // Skips come from steps leaving the chart domain; tolerate up to
        // 5% of the 3 * points FD evaluations.
        let budget = (3 * self.points.len()) as f64 * 0.05;
        records.push(CheckRecord::residual(
            "fd-points-skipped",
            skipped_total as f64,
            budget.max(1.0),
            None,
        ));
        ReportSection::from_records("fd-oracle", records)
    }

    /// Runs the applicable suites: symplectic and Poisson always, the
    /// four-way equivalence for linear connections, and the torsion-free
    /// symmetry suite when the connection is additionally torsion free.
    pub fn run(
        &self,
        model_name: &str,
        coordinate_names: Vec<String>,
        seed: u64,
        config_hash: Option<String>,
    ) -> Result<VerificationReport, VerifyError> {
        let symplectic = self.check_symplectic();
        let poisson = self.check_poisson();
        let mut verdicts = vec![EquivalenceVerdict::new(
            "symplectic-poisson-agreement",
            vec![
                ("symplectic".into(), symplectic.pass),
                ("poisson".into(), poisson.pass),
            ],
        )];
        if self.k.is_linear() {
            verdicts.push(self.check_linear_equivalence()?);
            if self.max_torsion_linear()? < self.tol.residual {
                verdicts.push(self.check_torsion_free_symmetry()?);
            }
        }
        let meta = ReportMeta {
            model_name: model_name.to_string(),
            dim: self.g.dim(),
            coordinate_names,
            seed,
            points_requested: self.samples.requested,
            points_used: self.points.len(),
            points_skipped: self.samples.skipped,
            residual_tolerance: self.tol.residual,
            nondegeneracy_tolerance: self.tol.nondegeneracy,
            config_hash,
        };
        Ok(VerificationReport {
            meta,
            sections: vec![symplectic, poisson],
            verdicts,
            diagnostics: self.diagnostics.clone(),
            sampling_valid: self.samples.valid(),
        })
    }
}

fn max_abs_diff3(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Convenience accessor used by tests: evaluates one operation over the
/// suite's points and returns the max-norm.
pub fn max_over_points(points: &[PointOps], f: impl Fn(&PointOps) -> f64) -> f64 {
    points.iter().fold(0.0, |acc, o| acc.max(f(o)))
}
