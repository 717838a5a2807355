use crate::expr::{eval_jet2, eval_value, Expr};

use super::{FieldError, MetricField, TangentPoint};

/// A connection on the tangent bundle.
///
/// `General` holds n x n coefficient expressions `K_l^u(x, v)` over the
/// whole tangent bundle; `Linear` holds data equivalent to n^3 base
/// coefficients `K_l^u_m(x)` contracting against the fiber coordinate,
/// `K_l^u = K_l^u_m v^m`.
#[derive(Debug, Clone)]
pub enum ConnectionField {
    General(GeneralConnection),
    Linear(LinearConnection),
}

impl ConnectionField {
    pub fn dim(&self) -> usize {
        match self {
            ConnectionField::General(g) => g.dim,
            ConnectionField::Linear(l) => l.dim,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, ConnectionField::Linear(_))
    }

    pub fn as_linear(&self) -> Option<&LinearConnection> {
        match self {
            ConnectionField::Linear(l) => Some(l),
            ConnectionField::General(_) => None,
        }
    }

    /// Coefficient values `K_l^u` and their full first derivatives over
    /// the 2n tangent-bundle directions.
    pub fn eval(&self, p: &TangentPoint) -> Result<ConnEval, FieldError> {
        match self {
            ConnectionField::General(g) => g.eval(p),
            ConnectionField::Linear(l) => promote_linear(l.clone()).eval(p),
        }
    }

    /// Values only, for the finite-difference oracles.
    pub fn value_at(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>, FieldError> {
        match self {
            ConnectionField::General(g) => g.value_at(x, v),
            ConnectionField::Linear(l) => {
                let n = l.dim;
                let lin = l.eval_base(x)?;
                let mut k = vec![0.0; n * n];
                for a in 0..n {
                    for b in 0..n {
                        let mut acc = 0.0;
                        for m in 0..n {
                            acc += lin.c(a, b, m) * v[m];
                        }
                        k[a * n + b] = acc;
                    }
                }
                Ok(k)
            }
        }
    }
}

/// General connection backing: explicit expressions on the tangent bundle,
/// or the promotion of a linear connection.
#[derive(Debug, Clone)]
enum GeneralBacking {
    Explicit { comps: Vec<Expr> },
    Promoted { linear: LinearConnection },
}

#[derive(Debug, Clone)]
pub struct GeneralConnection {
    dim: usize,
    backing: GeneralBacking,
}

impl GeneralConnection {
    pub fn new(dim: usize, comps: Vec<Expr>) -> Result<Self, FieldError> {
        if comps.len() != dim * dim {
            return Err(FieldError::LengthMismatch {
                what: "general connection components",
                expected: dim * dim,
                got: comps.len(),
            });
        }
        Ok(GeneralConnection {
            dim,
            backing: GeneralBacking::Explicit { comps },
        })
    }

    pub fn parse(dim: usize, sources: &[&str]) -> Result<Self, FieldError> {
        let comps = sources
            .iter()
            .map(|s| crate::expr::parse(s, dim).map_err(FieldError::from))
            .collect::<Result<Vec<_>, _>>()?;
        GeneralConnection::new(dim, comps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &TangentPoint) -> Result<ConnEval, FieldError> {
        let n = self.dim;
        if p.dim() != n {
            return Err(FieldError::LengthMismatch {
                what: "tangent point",
                expected: n,
                got: p.dim(),
            });
        }
        match &self.backing {
            GeneralBacking::Explicit { comps } => {
                let m = 2 * n;
                let mut k = vec![0.0; n * n];
                let mut dk = vec![0.0; n * n * m];
                for a in 0..n {
                    for b in 0..n {
                        let jet = eval_jet2(&comps[a * n + b], &p.x, &p.xdot)?;
                        k[a * n + b] = jet.value;
                        for d in 0..m {
                            dk[(a * n + b) * m + d] = jet.grad[d];
                        }
                    }
                }
                Ok(ConnEval { n, k, dk })
            }
            GeneralBacking::Promoted { linear } => {
                let lin = linear.eval_base(&p.x)?;
                let m = 2 * n;
                let mut k = vec![0.0; n * n];
                let mut dk = vec![0.0; n * n * m];
                for a in 0..n {
                    for b in 0..n {
                        let mut value = 0.0;
                        for mu in 0..n {
                            value += lin.c(a, b, mu) * p.xdot[mu];
                        }
                        k[a * n + b] = value;
                        for d in 0..n {
                            let mut acc = 0.0;
                            for mu in 0..n {
                                acc += lin.dc(d, a, b, mu) * p.xdot[mu];
                            }
                            dk[(a * n + b) * m + d] = acc;
                        }
                        // Fiber derivatives of a contraction are the base
                        // coefficients themselves, with no roundoff.
                        for mu in 0..n {
                            dk[(a * n + b) * m + n + mu] = lin.c(a, b, mu);
                        }
                    }
                }
                Ok(ConnEval { n, k, dk })
            }
        }
    }

    pub fn value_at(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>, FieldError> {
        match &self.backing {
            GeneralBacking::Explicit { comps } => comps
                .iter()
                .map(|e| eval_value(e, x, v).map_err(FieldError::from))
                .collect(),
            GeneralBacking::Promoted { linear } => {
                ConnectionField::Linear(linear.clone()).value_at(x, v)
            }
        }
    }
}

/// Linear connection backing: explicit base expressions, or the
/// metric-compatible torsion-free connection derived from a metric (whose
/// coefficients and their derivatives are computed from the metric jets;
/// the component functions involve the inverse metric and are not
/// representable as closed-form DSL expressions).
#[derive(Debug, Clone)]
enum LinearBacking {
    Explicit { comps: Vec<Expr> },
    LeviCivita { metric: MetricField },
}

#[derive(Debug, Clone)]
pub struct LinearConnection {
    dim: usize,
    backing: LinearBacking,
}

impl LinearConnection {
    /// `comps` is row-major `[l][u][m]` for coefficients `K_l^u_m`, all
    /// expressions on the base manifold.
    pub fn new(dim: usize, comps: Vec<Expr>) -> Result<Self, FieldError> {
        if comps.len() != dim * dim * dim {
            return Err(FieldError::LengthMismatch {
                what: "linear connection components",
                expected: dim * dim * dim,
                got: comps.len(),
            });
        }
        for e in &comps {
            if e.mentions_velocity() {
                return Err(FieldError::VelocityInBaseField {
                    what: "linear connection component",
                    expr: e.pretty(),
                });
            }
        }
        Ok(LinearConnection {
            dim,
            backing: LinearBacking::Explicit { comps },
        })
    }

    pub fn parse(dim: usize, sources: &[&str]) -> Result<Self, FieldError> {
        let comps = sources
            .iter()
            .map(|s| crate::expr::parse(s, dim).map_err(FieldError::from))
            .collect::<Result<Vec<_>, _>>()?;
        LinearConnection::new(dim, comps)
    }

    pub(crate) fn levi_civita(metric: MetricField) -> Self {
        LinearConnection {
            dim: metric.dim(),
            backing: LinearBacking::LeviCivita { metric },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_levi_civita(&self) -> bool {
        matches!(self.backing, LinearBacking::LeviCivita { .. })
    }

    /// Coefficients `K_l^u_m(x)` and their base derivatives.
    pub fn eval_base(&self, x: &[f64]) -> Result<LinEval, FieldError> {
        let n = self.dim;
        if x.len() != n {
            return Err(FieldError::LengthMismatch {
                what: "base point",
                expected: n,
                got: x.len(),
            });
        }
        match &self.backing {
            LinearBacking::Explicit { comps } => {
                let zeros = vec![0.0; n];
                let mut c = vec![0.0; n * n * n];
                let mut dc = vec![0.0; n * n * n * n];
                for a in 0..n {
                    for b in 0..n {
                        for m in 0..n {
                            let jet = eval_jet2(&comps[(a * n + b) * n + m], x, &zeros)?;
                            c[(a * n + b) * n + m] = jet.value;
                            for d in 0..n {
                                dc[((d * n + a) * n + b) * n + m] = jet.grad[d];
                            }
                        }
                    }
                }
                Ok(LinEval { n, c, dc })
            }
            LinearBacking::LeviCivita { metric } => {
                let p = TangentPoint::new(x.to_vec(), vec![0.0; n])?;
                let met = metric.eval(&p)?;
                let mut c = vec![0.0; n * n * n];
                let mut dc = vec![0.0; n * n * n * n];
                // K[g]_m^l_v = -1/2 g^{l r} (d_m g_{r v} + d_v g_{r m} - d_r g_{m v})
                for mu in 0..n {
                    for l in 0..n {
                        for v in 0..n {
                            let mut acc = 0.0;
                            for r in 0..n {
                                acc += met.ginv(l, r)
                                    * (met.dg(mu, r, v) + met.dg(v, r, mu) - met.dg(r, mu, v));
                            }
                            c[(mu * n + l) * n + v] = -0.5 * acc;
                            for d in 0..n {
                                let mut dacc = 0.0;
                                for r in 0..n {
                                    dacc += met.dginv(d, l, r)
                                        * (met.dg(mu, r, v) + met.dg(v, r, mu)
                                            - met.dg(r, mu, v))
                                        + met.ginv(l, r)
                                            * (met.ddg(d, mu, r, v) + met.ddg(d, v, r, mu)
                                                - met.ddg(d, r, mu, v));
                                }
                                dc[((d * n + mu) * n + l) * n + v] = -0.5 * dacc;
                            }
                        }
                    }
                }
                Ok(LinEval { n, c, dc })
            }
        }
    }
}

/// Promotes a linear connection to a general one via the fiber
/// contraction `K_l^u = K_l^u_m v^m`. The fiber derivative of the result
/// reproduces the base coefficients exactly.
pub fn promote_linear(linear: LinearConnection) -> GeneralConnection {
    GeneralConnection {
        dim: linear.dim,
        backing: GeneralBacking::Promoted { linear },
    }
}

/// Pointwise general-connection data at a tangent point.
///
/// - `k(a, b)` = K_a^b
/// - `dk(a, b, d)` with `d < 2n`: derivative along base direction `d` for
///   `d < n`, along fiber direction `d - n` otherwise.
#[derive(Debug, Clone)]
pub struct ConnEval {
    pub n: usize,
    k: Vec<f64>,
    dk: Vec<f64>,
}

impl ConnEval {
    #[inline]
    pub fn k(&self, a: usize, b: usize) -> f64 {
        self.k[a * self.n + b]
    }

    #[inline]
    pub fn dk(&self, a: usize, b: usize, d: usize) -> f64 {
        self.dk[(a * self.n + b) * 2 * self.n + d]
    }

    /// Base derivative d_d K_a^b.
    #[inline]
    pub fn dk_base(&self, a: usize, b: usize, d: usize) -> f64 {
        self.dk(a, b, d)
    }

    /// Fiber derivative along v^d.
    #[inline]
    pub fn dk_fiber(&self, a: usize, b: usize, d: usize) -> f64 {
        self.dk(a, b, self.n + d)
    }
}

/// Pointwise linear-connection data at a base point.
///
/// - `c(a, b, m)` = K_a^b_m
/// - `dc(d, a, b, m)` = d_d K_a^b_m
#[derive(Debug, Clone)]
pub struct LinEval {
    pub n: usize,
    c: Vec<f64>,
    dc: Vec<f64>,
}

impl LinEval {
    #[inline]
    pub fn c(&self, a: usize, b: usize, m: usize) -> f64 {
        self.c[(a * self.n + b) * self.n + m]
    }

    #[inline]
    pub fn dc(&self, d: usize, a: usize, b: usize, m: usize) -> f64 {
        self.dc[((d * self.n + a) * self.n + b) * self.n + m]
    }
}
