//! Generic exterior calculus over stored coefficient arrays.
//!
//! These routines know nothing about metrics or connections: they
//! differentiate arbitrary coefficient functions of the 2n tangent-bundle
//! coordinates and contract stored antisymmetric arrays. They serve as
//! independent cross-checks for the closed-form operations.
//!
//! Contractions carry the 1/r! weights that the storage convention leaves
//! out: a degree-p multivector paired against the first p slots of a
//! degree-r form contributes `1/p!` times the free index sum.

use crate::fields::{Antisym2, Antisym3};

/// Exterior derivative of a 1-form given its coefficient function
/// `coeffs(z) -> 2n values`, differentiated by the supplied directional
/// derivative operator `deriv(d, z)` returning `d/dz^d` of all coefficients.
pub fn d_one_form<E>(
    width: usize,
    z: &[f64],
    mut deriv: impl FnMut(usize, &[f64]) -> Result<Vec<f64>, E>,
) -> Result<Antisym2, E> {
    let mut partials = Vec::with_capacity(width);
    for d in 0..width {
        partials.push(deriv(d, z)?);
    }
    let mut out = Antisym2::zeros(width);
    for p in 0..width {
        for q in 0..width {
            out.set_raw(p, q, partials[p][q] - partials[q][p]);
        }
    }
    Ok(out)
}

/// Exterior derivative of a 2-form given directional derivatives of its
/// stored array: `(dA)_{pqr} = d_p A_{qr} + d_q A_{rp} + d_r A_{pq}`.
pub fn d_two_form<E>(
    width: usize,
    z: &[f64],
    mut deriv: impl FnMut(usize, &[f64]) -> Result<Antisym2, E>,
) -> Result<Antisym3, E> {
    let mut partials = Vec::with_capacity(width);
    for d in 0..width {
        partials.push(deriv(d, z)?);
    }
    let mut out = Antisym3::zeros(width);
    for p in 0..width {
        for q in 0..width {
            for r in 0..width {
                out.set_raw(
                    p,
                    q,
                    r,
                    partials[p].get(q, r) + partials[q].get(r, p) + partials[r].get(p, q),
                );
            }
        }
    }
    Ok(out)
}

/// Central finite difference of a vector-valued function along direction
/// `d` with step `h`.
pub fn central_diff<E>(
    z: &[f64],
    d: usize,
    h: f64,
    mut f: impl FnMut(&[f64]) -> Result<Vec<f64>, E>,
) -> Result<Vec<f64>, E> {
    let mut zp = z.to_vec();
    let mut zm = z.to_vec();
    zp[d] += h;
    zm[d] -= h;
    let fp = f(&zp)?;
    let fm = f(&zm)?;
    Ok(fp
        .iter()
        .zip(fm.iter())
        .map(|(a, b)| (a - b) / (2.0 * h))
        .collect())
}

/// Full contraction of a 2-vector against a 2-form: `(1/2) P^{AB} W_{AB}`.
pub fn contract_2_2(p: &Antisym2, w: &Antisym2) -> f64 {
    let width = p.width();
    let mut acc = 0.0;
    for a in 0..width {
        for b in 0..width {
            acc += p.get(a, b) * w.get(a, b);
        }
    }
    0.5 * acc
}

/// Interior product of a 2-vector with a 3-form: the 1-form with
/// coefficients `(1/2) P^{AB} B_{ABc}`.
pub fn contract_2_3(p: &Antisym2, b: &Antisym3) -> Vec<f64> {
    let width = p.width();
    let mut out = vec![0.0; width];
    for c in 0..width {
        let mut acc = 0.0;
        for a in 0..width {
            for bb in 0..width {
                acc += p.get(a, bb) * b.get(a, bb, c);
            }
        }
        out[c] = 0.5 * acc;
    }
    out
}

/// Full contraction of a 3-vector against a 3-form: `(1/6) S^{ABC} B_{ABC}`.
pub fn contract_3_3(s: &Antisym3, b: &Antisym3) -> f64 {
    let width = s.width();
    let mut acc = 0.0;
    for a in 0..width {
        for bb in 0..width {
            for c in 0..width {
                acc += s.get(a, bb, c) * b.get(a, bb, c);
            }
        }
    }
    acc / 6.0
}

/// The basis 3-form `e^a ∧ e^b ∧ e^c` as a stored array.
pub fn basis_three_form(width: usize, a: usize, b: usize, c: usize) -> Antisym3 {
    let mut out = Antisym3::zeros(width);
    out.scatter(a, b, c, 1.0);
    out
}
