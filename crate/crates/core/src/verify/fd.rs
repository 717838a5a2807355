//! Finite-difference recomputation of the derivative-bearing residuals.
//!
//! These paths share no derivative code with the jet evaluator: every
//! partial derivative is a central difference of plain value evaluations,
//! so agreement with the closed-form operations validates the whole
//! derivative pipeline. Step size is 1e-5 throughout.

use crate::fields::{Antisym2, Antisym3, ConnectionField, MetricField, TangentPoint, Tensor3};
use crate::geometry::{
    basis_three_form, contract_2_2, contract_2_3, lambda_value, upsilon_value, GeometryError,
};

pub const FD_STEP: f64 = 1e-5;

fn shifted(z: &[f64], d: usize, h: f64) -> Vec<f64> {
    let mut out = z.to_vec();
    out[d] += h;
    out
}

/// Mixed closedness residual with all derivatives replaced by central
/// differences of field values.
pub fn fd_residual_mixed(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
    h: f64,
) -> Result<Tensor3, GeometryError> {
    let n = g.dim();
    let gv = g.value_at(&p.x)?;
    // dg_fd[d][r][c] = d_d g_rc
    let mut dg_fd = vec![0.0; n * n * n];
    for d in 0..n {
        let gp = g.value_at(&shifted(&p.x, d, h))?;
        let gm = g.value_at(&shifted(&p.x, d, -h))?;
        for i in 0..n * n {
            dg_fd[d * n * n + i] = (gp[i] - gm[i]) / (2.0 * h);
        }
    }
    // dk_fiber_fd[d][a][b] = fiber-d_d K_a^b
    let mut dk_fd = vec![0.0; n * n * n];
    for d in 0..n {
        let kp = k.value_at(&p.x, &shifted(&p.xdot, d, h))?;
        let km = k.value_at(&p.x, &shifted(&p.xdot, d, -h))?;
        for i in 0..n * n {
            dk_fd[d * n * n + i] = (kp[i] - km[i]) / (2.0 * h);
        }
    }
    let dg = |d: usize, r: usize, c: usize| dg_fd[(d * n + r) * n + c];
    let dkf = |a: usize, b: usize, d: usize| dk_fd[(d * n + a) * n + b];
    let mut t = Tensor3::zeros(n);
    for v in 0..n {
        for l in 0..n {
            for m in 0..n {
                let mut acc = dg(v, l, m) - dg(m, l, v);
                for r in 0..n {
                    acc += gv[r * n + m] * dkf(v, r, l) - gv[r * n + v] * dkf(m, r, l);
                }
                t.set(v, l, m, acc);
            }
        }
    }
    Ok(t)
}

/// Generic exterior derivative of the induced 2-form by central
/// differences over all 2n tangent-bundle directions.
pub fn fd_d_upsilon(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
    h: f64,
) -> Result<Antisym3, GeometryError> {
    let n = g.dim();
    let w = 2 * n;
    let at = |z: &[f64]| -> Result<Antisym2, GeometryError> {
        upsilon_value(g, k, &z[..n], &z[n..])
    };
    let z: Vec<f64> = p.x.iter().chain(p.xdot.iter()).copied().collect();
    let mut partials = Vec::with_capacity(w);
    for d in 0..w {
        let up = at(&shifted(&z, d, h))?;
        let um = at(&shifted(&z, d, -h))?;
        let mut der = Antisym2::zeros(w);
        for a in 0..w {
            for b in 0..w {
                der.set_raw(a, b, (up.get(a, b) - um.get(a, b)) / (2.0 * h));
            }
        }
        partials.push(der);
    }
    let mut out = Antisym3::zeros(w);
    for a in 0..w {
        for b in 0..w {
            for c in 0..w {
                out.set_raw(
                    a,
                    b,
                    c,
                    partials[a].get(b, c) + partials[b].get(c, a) + partials[c].get(a, b),
                );
            }
        }
    }
    Ok(out)
}

/// Schouten bracket recovered one component at a time from the identity
/// `i([L,L]) beta = 2 i(L) d i(L) beta` over the basis of constant
/// 3-forms, with the exterior derivative taken by central differences.
pub fn fd_schouten(
    g: &MetricField,
    k: &ConnectionField,
    p: &TangentPoint,
    h: f64,
) -> Result<Antisym3, GeometryError> {
    let n = g.dim();
    let w = 2 * n;
    let z: Vec<f64> = p.x.iter().chain(p.xdot.iter()).copied().collect();
    let lam_at = |z: &[f64]| -> Result<Antisym2, GeometryError> {
        lambda_value(g, k, &z[..n], &z[n..])
    };
    let lam0 = lam_at(&z)?;
    let mut lam_plus = Vec::with_capacity(w);
    let mut lam_minus = Vec::with_capacity(w);
    for d in 0..w {
        lam_plus.push(lam_at(&shifted(&z, d, h))?);
        lam_minus.push(lam_at(&shifted(&z, d, -h))?);
    }
    let mut out = Antisym3::zeros(w);
    for a in 0..w {
        for b in (a + 1)..w {
            for c in (b + 1)..w {
                let beta = basis_three_form(w, a, b, c);
                // gamma = i(L) beta, differentiated entrywise.
                let mut dgamma = Antisym2::zeros(w);
                let gplus: Vec<Vec<f64>> = (0..w)
                    .map(|d| contract_2_3(&lam_plus[d], &beta))
                    .collect();
                let gminus: Vec<Vec<f64>> = (0..w)
                    .map(|d| contract_2_3(&lam_minus[d], &beta))
                    .collect();
                for pp in 0..w {
                    for q in 0..w {
                        let dp_gq = (gplus[pp][q] - gminus[pp][q]) / (2.0 * h);
                        let dq_gp = (gplus[q][pp] - gminus[q][pp]) / (2.0 * h);
                        dgamma.set_raw(pp, q, dp_gq - dq_gp);
                    }
                }
                let value = 2.0 * contract_2_2(&lam0, &dgamma);
                out.scatter(a, b, c, value);
            }
        }
    }
    Ok(out)
}
