use nalgebra::DMatrix;

use crate::expr::{eval_jet2, eval_value, Expr};

use super::{FieldError, TangentPoint};

/// Eigenvalues within this band around zero flag the metric as singular.
pub const SIGNATURE_EIGEN_TOL: f64 = 1e-10;

/// Symmetric n x n array of scalar expressions on the base manifold, with
/// Lorentzian signature (1, n-1): one negative and n-1 positive
/// eigenvalues at every valid point.
///
/// `length_unit_power` is inert bookkeeping for the scale dimension of the
/// field; it propagates additively through operations and never affects a
/// numeric value.
#[derive(Debug, Clone)]
pub struct MetricField {
    dim: usize,
    comps: Vec<Expr>,
    pub length_unit_power: i32,
}

impl MetricField {
    pub fn new(dim: usize, comps: Vec<Expr>, length_unit_power: i32) -> Result<Self, FieldError> {
        if dim < 3 {
            return Err(FieldError::DimensionTooSmall { dim });
        }
        if comps.len() != dim * dim {
            return Err(FieldError::LengthMismatch {
                what: "metric components",
                expected: dim * dim,
                got: comps.len(),
            });
        }
        for (idx, e) in comps.iter().enumerate() {
            if e.mentions_velocity() {
                return Err(FieldError::VelocityInBaseField {
                    what: "metric component",
                    expr: comps[idx].pretty(),
                });
            }
        }
        for r in 0..dim {
            for c in (r + 1)..dim {
                let upper = comps[r * dim + c].pretty();
                let lower = comps[c * dim + r].pretty();
                if upper != lower {
                    return Err(FieldError::MetricNotSymmetric {
                        row: r,
                        col: c,
                        upper,
                        lower,
                    });
                }
            }
        }
        Ok(MetricField {
            dim,
            comps,
            length_unit_power,
        })
    }

    /// Builds the component expressions from source strings (row-major).
    pub fn parse(
        dim: usize,
        sources: &[&str],
        length_unit_power: i32,
    ) -> Result<Self, FieldError> {
        let comps = sources
            .iter()
            .map(|s| crate::expr::parse(s, dim).map_err(FieldError::from))
            .collect::<Result<Vec<_>, _>>()?;
        MetricField::new(dim, comps, length_unit_power)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, r: usize, c: usize) -> &Expr {
        &self.comps[r * self.dim + c]
    }

    /// Component values only, without inversion or signature checks; used
    /// by the finite-difference oracles at slightly shifted points.
    pub fn value_at(&self, x: &[f64]) -> Result<Vec<f64>, FieldError> {
        let zeros = vec![0.0; self.dim];
        self.comps
            .iter()
            .map(|e| eval_value(e, x, &zeros).map_err(FieldError::from))
            .collect()
    }

    /// Full pointwise evaluation: values, inverse, first and second
    /// derivatives, and the derivative of the inverse. The Lorentzian
    /// signature is verified on every call.
    pub fn eval(&self, p: &TangentPoint) -> Result<MetricEval, FieldError> {
        let n = self.dim;
        if p.dim() != n {
            return Err(FieldError::LengthMismatch {
                what: "tangent point",
                expected: n,
                got: p.dim(),
            });
        }
        let mut g = vec![0.0; n * n];
        let mut dg = vec![0.0; n * n * n];
        let mut ddg = vec![0.0; n * n * n * n];
        for r in 0..n {
            for c in 0..n {
                let jet = eval_jet2(&self.comps[r * n + c], &p.x, &p.xdot)?;
                g[r * n + c] = jet.value;
                for d in 0..n {
                    dg[(d * n + r) * n + c] = jet.grad[d];
                    for d2 in 0..n {
                        ddg[((d * n + d2) * n + r) * n + c] = jet.hess_at(d, d2);
                    }
                }
            }
        }

        let gm = DMatrix::from_fn(n, n, |r, c| g[r * n + c]);
        check_signature(&gm, &p.x)?;
        let ginv_m = gm.clone().try_inverse().ok_or(FieldError::SingularMetric {
            x: p.x.clone(),
            det: gm.determinant(),
        })?;
        let mut ginv = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                ginv[r * n + c] = ginv_m[(r, c)];
            }
        }

        // d(g^-1) = -g^-1 (dg) g^-1
        let mut dginv = vec![0.0; n * n * n];
        for d in 0..n {
            for r in 0..n {
                for c in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += ginv[r * n + a] * dg[(d * n + a) * n + b] * ginv[b * n + c];
                        }
                    }
                    dginv[(d * n + r) * n + c] = -acc;
                }
            }
        }

        Ok(MetricEval {
            n,
            g,
            ginv,
            dg,
            ddg,
            dginv,
            length_unit_power: self.length_unit_power,
        })
    }
}

fn check_signature(gm: &DMatrix<f64>, x: &[f64]) -> Result<(), FieldError> {
    let n = gm.nrows();
    let sym = (gm + gm.transpose()) * 0.5;
    let eigen = sym.symmetric_eigen();
    let mut neg = 0usize;
    let mut pos = 0usize;
    for ev in eigen.eigenvalues.iter() {
        if *ev < -SIGNATURE_EIGEN_TOL {
            neg += 1;
        } else if *ev > SIGNATURE_EIGEN_TOL {
            pos += 1;
        } else {
            return Err(FieldError::SingularMetric {
                x: x.to_vec(),
                det: gm.determinant(),
            });
        }
    }
    if neg != 1 || pos != n - 1 {
        return Err(FieldError::WrongSignature {
            x: x.to_vec(),
            negative: neg,
            positive: pos,
        });
    }
    Ok(())
}

/// Dual (inverse) metric values at a point.
#[derive(Debug, Clone)]
pub struct DualMetricValue {
    pub n: usize,
    pub components: Vec<f64>,
}

impl DualMetricValue {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.components[r * self.n + c]
    }
}

/// Pointwise metric data: values, inverse, and exact derivatives.
///
/// Index conventions (all row-major, derivative slots first):
/// - `g(r, c)` = g_rc
/// - `dg(d, r, c)` = d_d g_rc
/// - `ddg(d, e, r, c)` = d_d d_e g_rc
/// - `dginv(d, r, c)` = d_d g^rc
#[derive(Debug, Clone)]
pub struct MetricEval {
    pub n: usize,
    g: Vec<f64>,
    ginv: Vec<f64>,
    dg: Vec<f64>,
    ddg: Vec<f64>,
    dginv: Vec<f64>,
    pub length_unit_power: i32,
}

impl MetricEval {
    #[inline]
    pub fn g(&self, r: usize, c: usize) -> f64 {
        self.g[r * self.n + c]
    }

    #[inline]
    pub fn ginv(&self, r: usize, c: usize) -> f64 {
        self.ginv[r * self.n + c]
    }

    #[inline]
    pub fn dg(&self, d: usize, r: usize, c: usize) -> f64 {
        self.dg[(d * self.n + r) * self.n + c]
    }

    #[inline]
    pub fn ddg(&self, d: usize, e: usize, r: usize, c: usize) -> f64 {
        self.ddg[((d * self.n + e) * self.n + r) * self.n + c]
    }

    #[inline]
    pub fn dginv(&self, d: usize, r: usize, c: usize) -> f64 {
        self.dginv[(d * self.n + r) * self.n + c]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |r, c| self.g(r, c))
    }

    pub fn dual(&self) -> DualMetricValue {
        DualMetricValue {
            n: self.n,
            components: self.ginv.clone(),
        }
    }
}

/// Spec-level entry point: metric matrix, dual metric and jets at `p`.
pub fn eval_metric(g: &MetricField, p: &TangentPoint) -> Result<MetricEval, FieldError> {
    g.eval(p)
}
