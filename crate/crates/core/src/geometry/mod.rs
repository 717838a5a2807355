//! Pointwise coordinate operations on the tangent bundle.
//!
//! Everything here is a pure function of field evaluations at a tangent
//! point. Index conventions, shared with [`crate::fields`]:
//!
//! - The 2n-dimensional basis is ordered base block first, fiber block
//!   second; index `A < n` is a base slot, `A >= n` the fiber slot `A - n`.
//! - Antisymmetric arrays store full coefficient hypercubes with no 1/r!
//!   weights; wedge monomials scatter signed copies over all slot
//!   permutations.
//! - The connection coefficient array is `k(l, u)` for `K_l^u`; linear
//!   coefficients are `c(l, u, m)` for `K_l^u_m` with `K_l^u = K_l^u_m v^m`.
//!
//! Sign conventions follow the source formulas exactly: the
//! metric-compatible linear connection carries a leading `-1/2`, and
//! curvature carries a leading `-2`. All identity tests in this crate pin
//! those signs.

mod exterior;

pub use exterior::{
    basis_three_form, central_diff, contract_2_2, contract_2_3, contract_3_3, d_one_form,
    d_two_form,
};

use crate::fields::{
    promote_linear, Antisym2, Antisym3, AntisymData, ConnEval, ConnectionField, FieldError,
    FormOnTE, LinEval, LinearConnection, MetricEval, MetricField, MultivectorOnTE, TangentPoint,
    Tensor03Value, Tensor3, Tensor4,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("operation requires a linear connection")]
    NotLinear,
    #[error("operands live at different tangent points")]
    PointMismatch,
    #[error("expected degree-{expected} operands, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The metric-compatible torsion-free linear connection of `g`:
/// `K[g]_m^l_v = -1/2 g^{l r} (d_m g_{r v} + d_v g_{r m} - d_r g_{m v})`.
///
/// The coefficients are symmetric in the two lower slots, so the result is
/// torsion free, and its covariant derivative of `g` vanishes.
pub fn levi_civita(g: &MetricField) -> ConnectionField {
    ConnectionField::Linear(LinearConnection::levi_civita(g.clone()))
}

/// All field data needed by the pointwise operations, evaluated once at a
/// tangent point and shared across them.
#[derive(Debug, Clone)]
pub struct PointOps {
    pub n: usize,
    pub point: TangentPoint,
    pub met: MetricEval,
    pub conn: ConnEval,
    pub lin: Option<LinEval>,
}

impl PointOps {
    pub fn new(
        g: &MetricField,
        k: &ConnectionField,
        p: &TangentPoint,
    ) -> Result<Self, GeometryError> {
        let met = g.eval(p)?;
        let conn = k.eval(p)?;
        let lin = match k.as_linear() {
            Some(l) => Some(l.eval_base(&p.x)?),
            None => None,
        };
        Ok(PointOps {
            n: g.dim(),
            point: p.clone(),
            met,
            conn,
            lin,
        })
    }

    fn unit(&self) -> i32 {
        self.met.length_unit_power
    }

    fn lin(&self) -> Result<&LinEval, GeometryError> {
        self.lin.as_ref().ok_or(GeometryError::NotLinear)
    }

    /// Torsion of the connection: wedge coefficients of
    /// `d-fiber_m K_l^u  d^l ∧ d^m`, stored as `T(l, m, u)` antisymmetric
    /// in `(l, m)`.
    pub fn torsion(&self) -> Tensor3 {
        let n = self.n;
        let mut t = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for u in 0..n {
                    t.set(
                        l,
                        m,
                        u,
                        self.conn.dk_fiber(l, u, m) - self.conn.dk_fiber(m, u, l),
                    );
                }
            }
        }
        t
    }

    /// Torsion of a linear connection from its base coefficients:
    /// `T(l, m, u) = K_l^u_m - K_m^u_l`.
    pub fn torsion_linear(&self) -> Result<Tensor3, GeometryError> {
        let lin = self.lin()?;
        let n = self.n;
        let mut t = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for u in 0..n {
                    t.set(l, m, u, lin.c(l, u, m) - lin.c(m, u, l));
                }
            }
        }
        Ok(t)
    }

    /// Curvature wedge coefficients
    /// `R(l, m, u) = -2 (d_l K_m^u + K_l^r d-fiber_r K_m^u)` antisymmetrized
    /// in `(l, m)`.
    pub fn curvature(&self) -> Tensor3 {
        let n = self.n;
        let mut r = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for u in 0..n {
                    let c_lm = self.curvature_half(l, m, u);
                    let c_ml = self.curvature_half(m, l, u);
                    r.set(l, m, u, c_lm - c_ml);
                }
            }
        }
        r
    }

    fn curvature_half(&self, l: usize, m: usize, u: usize) -> f64 {
        let n = self.n;
        let mut acc = self.conn.dk_base(m, u, l);
        for rho in 0..n {
            acc += self.conn.k(l, rho) * self.conn.dk_fiber(m, u, rho);
        }
        -2.0 * acc
    }

    /// Linear-case curvature `R(l, m, u, s)` with
    /// `-2 (d_l K_m^u_s + K_l^r_s K_m^u_r)` antisymmetrized in `(l, m)`.
    /// Contracting the last slot with the fiber coordinate reproduces
    /// [`PointOps::curvature`].
    pub fn curvature_linear(&self) -> Result<Tensor4, GeometryError> {
        let lin = self.lin()?;
        let n = self.n;
        let mut r = Tensor4::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for u in 0..n {
                    for s in 0..n {
                        let half = |a: usize, b: usize| {
                            let mut acc = lin.dc(a, b, u, s);
                            for rho in 0..n {
                                acc += lin.c(a, rho, s) * lin.c(b, u, rho);
                            }
                            -2.0 * acc
                        };
                        r.set(l, m, u, s, half(l, m) - half(m, l));
                    }
                }
            }
        }
        Ok(r)
    }

    /// The induced 2-form: coefficients of
    /// `g_{l m} (fiber-d^l - K_v^l d^v) ∧ d^m` over the 2n basis.
    pub fn upsilon(&self) -> FormOnTE {
        let n = self.n;
        let mut a = Antisym2::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                a.scatter(n + l, m, self.met.g(l, m));
            }
        }
        for v in 0..n {
            for m in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += self.met.g(l, m) * self.conn.k(v, l);
                }
                a.scatter(v, m, -acc);
            }
        }
        FormOnTE {
            data: AntisymData::D2(a),
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        }
    }

    /// The induced 2-vector: coefficients of
    /// `g^{l m} (∂_l + K_l^v fiber-∂_v) ∧ fiber-∂_m`.
    pub fn lambda(&self) -> MultivectorOnTE {
        let n = self.n;
        let mut a = Antisym2::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                a.scatter(l, n + m, self.met.ginv(l, m));
            }
        }
        for v in 0..n {
            for m in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += self.met.ginv(l, m) * self.conn.k(l, v);
                }
                a.scatter(n + v, n + m, acc);
            }
        }
        MultivectorOnTE {
            data: AntisymData::D2(a),
            base_point: self.point.clone(),
            length_unit_power: -self.unit(),
        }
    }

    /// Exterior derivative of the induced 2-form, via its closed-form
    /// expansion:
    /// `-(d_l g_{r v} K_m^r + g_{r v} d_l K_m^r) d^l ∧ d^m ∧ d^v`
    /// `- (d_m g_{l v} + g_{r v} fiber-d_l K_m^r) fiber-d^l ∧ d^m ∧ d^v`.
    pub fn d_upsilon(&self) -> FormOnTE {
        let n = self.n;
        let mut a = Antisym3::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut base = 0.0;
                    let mut mixed = 0.0;
                    for r in 0..n {
                        base += self.met.dg(l, r, v) * self.conn.k(m, r)
                            + self.met.g(r, v) * self.conn.dk_base(m, r, l);
                        mixed += self.met.g(r, v) * self.conn.dk_fiber(m, r, l);
                    }
                    a.scatter(l, m, v, -base);
                    a.scatter(n + l, m, v, -(self.met.dg(m, l, v) + mixed));
                }
            }
        }
        FormOnTE {
            data: AntisymData::D3(a),
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        }
    }

    /// Mixed-block closedness residual, indexed `(v, l, m)`:
    /// `d_v g_{l m} + g_{r m} fiber-d_l K_v^r - d_m g_{l v} - g_{r v} fiber-d_l K_m^r`.
    /// Together with [`PointOps::residual_cyclic`], its vanishing is
    /// equivalent to the induced 2-form being closed.
    pub fn residual_mixed(&self) -> Tensor3 {
        let n = self.n;
        let mut t = Tensor3::zeros(n);
        for v in 0..n {
            for l in 0..n {
                for m in 0..n {
                    let mut acc = self.met.dg(v, l, m) - self.met.dg(m, l, v);
                    for r in 0..n {
                        acc += self.met.g(r, m) * self.conn.dk_fiber(v, r, l)
                            - self.met.g(r, v) * self.conn.dk_fiber(m, r, l);
                    }
                    t.set(v, l, m, acc);
                }
            }
        }
        t
    }

    /// Cyclic sum of the metric-lowered curvature, indexed `(l, m, v)`.
    pub fn residual_cyclic(&self) -> Tensor3 {
        let n = self.n;
        let r = self.curvature();
        let mut low = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = 0.0;
                    for rho in 0..n {
                        acc += self.met.g(rho, v) * r.get(l, m, rho);
                    }
                    low.set(l, m, v, acc);
                }
            }
        }
        let mut t = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    t.set(
                        l,
                        m,
                        v,
                        low.get(l, m, v) + low.get(m, v, l) + low.get(v, l, m),
                    );
                }
            }
        }
        t
    }

    fn schouten_w(&self) -> Tensor3 {
        // W(l, m, v) = 2 g^{r v} (d_r g^{l m} - g^{s l} fiber-d_s K_r^m)
        let n = self.n;
        let mut w = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = 0.0;
                    for r in 0..n {
                        let mut inner = self.met.dginv(r, l, m);
                        for s in 0..n {
                            inner -= self.met.ginv(s, l) * self.conn.dk_fiber(r, m, s);
                        }
                        acc += self.met.ginv(r, v) * inner;
                    }
                    w.set(l, m, v, 2.0 * acc);
                }
            }
        }
        w
    }

    fn curvature_raised(&self) -> Tensor3 {
        // Rup(k, m, v) = g^{k r} g^{m s} R(r, s, v)
        let n = self.n;
        let r = self.curvature();
        let mut up = Tensor3::zeros(n);
        for k in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = 0.0;
                    for rho in 0..n {
                        for s in 0..n {
                            acc += self.met.ginv(k, rho) * self.met.ginv(m, s) * r.get(rho, s, v);
                        }
                    }
                    up.set(k, m, v, acc);
                }
            }
        }
        up
    }

    /// Raw curvature half-coefficients `-2 (d_r K_s^v + K_r^a fiber-d_a K_s^v)`
    /// before wedge antisymmetrization. [`PointOps::curvature`] stores the
    /// scattered (already antisymmetric) array; terms destined for a wedge
    /// scatter must use this raw form or the scatter would double them.
    fn curvature_raw_raised(&self) -> Tensor3 {
        let n = self.n;
        let mut up = Tensor3::zeros(n);
        for k in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = 0.0;
                    for rho in 0..n {
                        for s in 0..n {
                            acc += self.met.ginv(k, rho)
                                * self.met.ginv(m, s)
                                * self.curvature_half(rho, s, v);
                        }
                    }
                    up.set(k, m, v, acc);
                }
            }
        }
        up
    }

    /// The Schouten bracket of the induced 2-vector with itself:
    /// `W^{l m v} (∂_l + K_l^k fiber-∂_k) ∧ fiber-∂_m ∧ fiber-∂_v
    ///  + Rup^{k m v} fiber-∂_k ∧ fiber-∂_m ∧ fiber-∂_v`
    /// with `W(l,m,v) = 2 g^{rv} (d_r g^{lm} - g^{sl} fiber-d_s K_r^m)`
    /// and `Rup` the doubly raised raw curvature coefficient. Cross-checked
    /// against the bracket identity `i(S) beta = 2 i(L) d i(L) beta` over
    /// constant 3-forms `beta`, with `S` this bracket and `L` the 2-vector.
    pub fn schouten(&self) -> MultivectorOnTE {
        let n = self.n;
        let w = self.schouten_w();
        let rup = self.curvature_raw_raised();
        let mut a = Antisym3::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let c = w.get(l, m, v);
                    if c != 0.0 {
                        a.scatter(l, n + m, n + v, c);
                        for k in 0..n {
                            a.scatter(n + k, n + m, n + v, c * self.conn.k(l, k));
                        }
                    }
                }
            }
        }
        for k in 0..n {
            for m in 0..n {
                for v in 0..n {
                    a.scatter(n + k, n + m, n + v, rup.get(k, m, v));
                }
            }
        }
        MultivectorOnTE {
            data: AntisymData::D3(a),
            base_point: self.point.clone(),
            length_unit_power: -2 * self.unit(),
        }
    }

    /// Raised-index companion of [`PointOps::residual_mixed`], indexed
    /// `(l, m, v)`:
    /// `g^{r v}(d_r g^{l m} - g^{s l} fiber-d_s K_r^m)
    ///  - g^{r m}(d_r g^{l v} - g^{s l} fiber-d_s K_r^v)`.
    ///
    /// The sign of the second parenthesis is fixed by requiring this to be
    /// the mixed block of the Schouten bracket (it equals half the
    /// antisymmetrization of `W` in its last two slots).
    pub fn residual_mixed_raised(&self) -> Tensor3 {
        let n = self.n;
        let w = self.schouten_w();
        let mut t = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    t.set(l, m, v, 0.5 * (w.get(l, m, v) - w.get(l, v, m)));
                }
            }
        }
        t
    }

    /// Cyclic sum of the doubly raised curvature, indexed `(k, m, v)`.
    pub fn residual_cyclic_raised(&self) -> Tensor3 {
        let n = self.n;
        let rup = self.curvature_raised();
        let mut t = Tensor3::zeros(n);
        for k in 0..n {
            for m in 0..n {
                for v in 0..n {
                    t.set(
                        k,
                        m,
                        v,
                        rup.get(k, m, v) + rup.get(m, v, k) + rup.get(v, k, m),
                    );
                }
            }
        }
        t
    }

    /// Lie derivative of the musical 1-form `g_{l m} v^l d^m` along the
    /// connection: wedge coefficients
    /// `(d_l g_{r m} v^r + g_{r m} K_l^r) d^l ∧ d^m`, horizontal block only.
    pub fn lie_k_gflat(&self) -> FormOnTE {
        let n = self.n;
        let mut a = Antisym2::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                let mut acc = 0.0;
                for r in 0..n {
                    acc += self.met.dg(l, r, m) * self.point.xdot[r]
                        + self.met.g(r, m) * self.conn.k(l, r);
                }
                a.scatter(l, m, acc);
            }
        }
        FormOnTE {
            data: AntisymData::D2(a),
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        }
    }

    /// Lie derivative along the Liouville field of
    /// [`PointOps::lie_k_gflat`]: wedge coefficients
    /// `v^r (d_l g_{r m} + g_{s m} fiber-d_r K_l^s) d^l ∧ d^m`.
    /// Equals the fiber-coordinate contraction of the middle slot of
    /// [`PointOps::residual_mixed`] after antisymmetrization.
    pub fn lie_liouville_lie_k_gflat(&self) -> FormOnTE {
        let n = self.n;
        let mut a = Antisym2::zeros(2 * n);
        for l in 0..n {
            for m in 0..n {
                let mut acc = 0.0;
                for r in 0..n {
                    let mut inner = self.met.dg(l, r, m);
                    for s in 0..n {
                        inner += self.met.g(s, m) * self.conn.dk_fiber(l, s, r);
                    }
                    acc += self.point.xdot[r] * inner;
                }
                a.scatter(l, m, acc);
            }
        }
        FormOnTE {
            data: AntisymData::D2(a),
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        }
    }

    /// Covariant exterior differential of `g` for a linear connection,
    /// indexed `(r; l, m)` with the last two slots antisymmetric:
    /// `(d_l g_{r m} + g_{s m} K_l^s_r)` antisymmetrized in `(l, m)`.
    pub fn d_k_g(&self) -> Result<Tensor03Value, GeometryError> {
        let lin = self.lin()?;
        let n = self.n;
        let b = |l: usize, r: usize, m: usize| {
            let mut acc = self.met.dg(l, r, m);
            for s in 0..n {
                acc += self.met.g(s, m) * lin.c(l, s, r);
            }
            acc
        };
        let mut t = Tensor3::zeros(n);
        for r in 0..n {
            for l in 0..n {
                for m in 0..n {
                    t.set(r, l, m, b(l, r, m) - b(m, r, l));
                }
            }
        }
        Ok(Tensor03Value {
            tensor: t,
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        })
    }

    /// Covariant derivative of `g` for a linear connection, indexed
    /// `(l, m, v)`:
    /// `nabla_l g_{m v} = d_l g_{m v} + g_{s v} K_l^s_m + g_{m s} K_l^s_v`.
    /// Symmetry in the first two slots is the torsion-free compatibility
    /// criterion; it vanishes identically for the metric-compatible
    /// connection.
    pub fn nabla_g(&self) -> Result<Tensor03Value, GeometryError> {
        let lin = self.lin()?;
        let n = self.n;
        let mut t = Tensor3::zeros(n);
        for l in 0..n {
            for m in 0..n {
                for v in 0..n {
                    let mut acc = self.met.dg(l, m, v);
                    for s in 0..n {
                        acc += self.met.g(s, v) * lin.c(l, s, m) + self.met.g(m, s) * lin.c(l, s, v);
                    }
                    t.set(l, m, v, acc);
                }
            }
        }
        Ok(Tensor03Value {
            tensor: t,
            base_point: self.point.clone(),
            length_unit_power: self.unit(),
        })
    }
}

/// Full contraction of the induced 2-vector against the induced 2-form:
/// `(1/2) L^{AB} U_{AB}`. For any admissible pair this equals minus the
/// chart dimension.
pub fn contract_lambda_upsilon(l: &MultivectorOnTE, u: &FormOnTE) -> Result<f64, GeometryError> {
    if l.base_point != u.base_point {
        return Err(GeometryError::PointMismatch);
    }
    match (&l.data, &u.data) {
        (AntisymData::D2(lv), AntisymData::D2(uv)) => Ok(contract_2_2(lv, uv)),
        (ld, ud) => Err(GeometryError::DegreeMismatch {
            expected: 2,
            got: if ld.degree() != 2 {
                ld.degree()
            } else {
                ud.degree()
            },
        }),
    }
}

/// Value-only build of the induced 2-form array at raw coordinates; used
/// by the finite-difference cross-checks.
pub fn upsilon_value(
    g: &MetricField,
    k: &ConnectionField,
    x: &[f64],
    v: &[f64],
) -> Result<Antisym2, GeometryError> {
    let n = g.dim();
    let gv = g.value_at(x)?;
    let kv = k.value_at(x, v)?;
    let mut a = Antisym2::zeros(2 * n);
    for l in 0..n {
        for m in 0..n {
            a.scatter(n + l, m, gv[l * n + m]);
        }
    }
    for vv in 0..n {
        for m in 0..n {
            let mut acc = 0.0;
            for l in 0..n {
                acc += gv[l * n + m] * kv[vv * n + l];
            }
            a.scatter(vv, m, -acc);
        }
    }
    Ok(a)
}

/// Value-only build of the induced 2-vector array at raw coordinates.
pub fn lambda_value(
    g: &MetricField,
    k: &ConnectionField,
    x: &[f64],
    v: &[f64],
) -> Result<Antisym2, GeometryError> {
    let n = g.dim();
    let gv = g.value_at(x)?;
    let kv = k.value_at(x, v)?;
    let gm = nalgebra::DMatrix::from_fn(n, n, |r, c| gv[r * n + c]);
    let ginv = gm
        .clone()
        .try_inverse()
        .ok_or_else(|| FieldError::SingularMetric {
            x: x.to_vec(),
            det: gm.determinant(),
        })?;
    let mut a = Antisym2::zeros(2 * n);
    for l in 0..n {
        for m in 0..n {
            a.scatter(l, n + m, ginv[(l, m)]);
        }
    }
    for vv in 0..n {
        for m in 0..n {
            let mut acc = 0.0;
            for l in 0..n {
                acc += ginv[(l, m)] * kv[l * n + vv];
            }
            a.scatter(n + vv, n + m, acc);
        }
    }
    Ok(a)
}

/// Convenience wrappers taking fields and a point directly.
pub fn upsilon(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<FormOnTE, GeometryError> {
    Ok(PointOps::new(g, k, p)?.upsilon())
}

pub fn lambda(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<MultivectorOnTE, GeometryError> {
    Ok(PointOps::new(g, k, p)?.lambda())
}

pub fn d_upsilon(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<FormOnTE, GeometryError> {
    Ok(PointOps::new(g, k, p)?.d_upsilon())
}

pub fn schouten(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<MultivectorOnTE, GeometryError> {
    Ok(PointOps::new(g, k, p)?.schouten())
}

pub fn torsion(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<Tensor3, GeometryError> {
    Ok(PointOps::new(g, k, p)?.torsion())
}

pub fn curvature(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<Tensor3, GeometryError> {
    Ok(PointOps::new(g, k, p)?.curvature())
}

pub fn nabla_g(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<Tensor03Value, GeometryError> {
    PointOps::new(g, k, p)?.nabla_g()
}

pub fn d_k_g(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<Tensor03Value, GeometryError> {
    PointOps::new(g, k, p)?.d_k_g()
}

pub fn lie_k_gflat(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
) -> Result<FormOnTE, GeometryError> {
    Ok(PointOps::new(g, k, p)?.lie_k_gflat())
}

/// Promotes then evaluates; exposed for symmetry with the linear ops.
pub fn promote(linear: LinearConnection) -> ConnectionField {
    ConnectionField::General(promote_linear(linear))
}
