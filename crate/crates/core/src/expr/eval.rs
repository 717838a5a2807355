//! Jet and value evaluation of parsed expressions.

use super::ast::{Expr, Func};
use super::jet::Jet2;

/// Value, gradient and Hessian of a scalar field at a tangent point.
///
/// Derivative slots are ordered base block first: entries `0..n` are
/// `d/dx0..d/dx{n-1}`, entries `n..2n` are `d/dv0..d/dv{n-1}`. The Hessian
/// is `2n x 2n` row-major and symmetric.
#[derive(Debug, Clone)]
pub struct Jet2Value {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl Jet2Value {
    pub fn width(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.grad.len() + j]
    }
}

/// Domain error during evaluation, identifying the offending subexpression.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero in '{subexpr}'")]
    DivisionByZero { subexpr: String },
    #[error("log of non-positive value {value} in '{subexpr}'")]
    LogNonPositive { subexpr: String, value: f64 },
    #[error("sqrt of negative value {value} in '{subexpr}'")]
    SqrtNegative { subexpr: String, value: f64 },
    #[error("power domain error: base {base} with exponent {exponent} in '{subexpr}'")]
    PowDomain {
        subexpr: String,
        base: f64,
        exponent: f64,
    },
    #[error("point dimension {got} does not match expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

fn func_derivatives(func: Func, expr: &Expr, u: f64) -> Result<(f64, f64, f64), EvalError> {
    Ok(match func {
        Func::Sin => (u.sin(), u.cos(), -u.sin()),
        Func::Cos => (u.cos(), -u.sin(), -u.cos()),
        Func::Exp => {
            let e = u.exp();
            (e, e, e)
        }
        Func::Log => {
            if u <= 0.0 {
                return Err(EvalError::LogNonPositive {
                    subexpr: expr.pretty(),
                    value: u,
                });
            }
            (u.ln(), 1.0 / u, -1.0 / (u * u))
        }
        Func::Sqrt => {
            if u < 0.0 {
                return Err(EvalError::SqrtNegative {
                    subexpr: expr.pretty(),
                    value: u,
                });
            }
            if u == 0.0 {
                return Err(EvalError::PowDomain {
                    subexpr: expr.pretty(),
                    base: 0.0,
                    exponent: 0.5,
                });
            }
            let s = u.sqrt();
            (s, 0.5 / s, -0.25 / (s * u))
        }
        Func::Abs => {
            // Subgradient 0 at the kink.
            let sign = if u > 0.0 {
                1.0
            } else if u < 0.0 {
                -1.0
            } else {
                0.0
            };
            (u.abs(), sign, 0.0)
        }
        Func::Tanh => {
            let t = u.tanh();
            let sech2 = 1.0 - t * t;
            (t, sech2, -2.0 * t * sech2)
        }
    })
}

fn pow_derivatives(expr: &Expr, base: f64, c: f64) -> Result<(f64, f64, f64), EvalError> {
    if c == 0.0 {
        return Ok((1.0, 0.0, 0.0));
    }
    let is_int = c.fract() == 0.0 && c.abs() <= i32::MAX as f64;
    if is_int {
        let k = c as i32;
        if base == 0.0 && k < 0 {
            return Err(EvalError::DivisionByZero {
                subexpr: expr.pretty(),
            });
        }
        // powi keeps integer powers exact for small bases and avoids the
        // libm pow branch cuts.
        let f0 = base.powi(k);
        let f1 = c * base.powi(k - 1);
        let f2 = if k == 1 {
            0.0
        } else {
            c * (c - 1.0) * base.powi(k - 2)
        };
        return Ok((f0, f1, f2));
    }
    if base <= 0.0 {
        return Err(EvalError::PowDomain {
            subexpr: expr.pretty(),
            base,
            exponent: c,
        });
    }
    let f0 = base.powf(c);
    let f1 = c * base.powf(c - 1.0);
    let f2 = c * (c - 1.0) * base.powf(c - 2.0);
    Ok((f0, f1, f2))
}

fn eval_jet_inner(expr: &Expr, x: &[f64], v: &[f64], m: usize) -> Result<Jet2, EvalError> {
    let n = x.len();
    Ok(match expr {
        Expr::Const(c) => Jet2::constant(*c, m),
        Expr::Coord(i) => Jet2::variable(x[*i], *i, m),
        Expr::Vel(i) => Jet2::variable(v[*i], n + *i, m),
        Expr::Neg(a) => eval_jet_inner(a, x, v, m)?.neg(),
        Expr::Add(a, b) => eval_jet_inner(a, x, v, m)?.add(&eval_jet_inner(b, x, v, m)?),
        Expr::Sub(a, b) => eval_jet_inner(a, x, v, m)?.sub(&eval_jet_inner(b, x, v, m)?),
        Expr::Mul(a, b) => eval_jet_inner(a, x, v, m)?.mul(&eval_jet_inner(b, x, v, m)?),
        Expr::Div(a, b) => {
            let num = eval_jet_inner(a, x, v, m)?;
            let den = eval_jet_inner(b, x, v, m)?;
            if den.value == 0.0 {
                return Err(EvalError::DivisionByZero {
                    subexpr: expr.pretty(),
                });
            }
            num.div(&den)
        }
        Expr::Pow(a, c) => {
            let base = eval_jet_inner(a, x, v, m)?;
            let (f0, f1, f2) = pow_derivatives(expr, base.value, *c)?;
            base.chain(f0, f1, f2)
        }
        Expr::Call(func, a) => {
            let arg = eval_jet_inner(a, x, v, m)?;
            let (f0, f1, f2) = func_derivatives(*func, expr, arg.value)?;
            arg.chain(f0, f1, f2)
        }
    })
}

/// Evaluates the expression with exact first and second derivatives at the
/// tangent point `(x, v)`. Both slices must have the chart dimension.
pub fn eval_jet2(expr: &Expr, x: &[f64], v: &[f64]) -> Result<Jet2Value, EvalError> {
    if x.len() != v.len() {
        return Err(EvalError::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    let m = 2 * x.len();
    let jet = eval_jet_inner(expr, x, v, m)?;
    Ok(Jet2Value {
        value: jet.value,
        grad: jet.grad,
        hess: jet.hess,
    })
}

/// Plain value evaluation (no derivatives); used by guards and the
/// finite-difference oracles.
pub fn eval_value(expr: &Expr, x: &[f64], v: &[f64]) -> Result<f64, EvalError> {
    let n = x.len();
    Ok(match expr {
        Expr::Const(c) => *c,
        Expr::Coord(i) => x[*i],
        Expr::Vel(i) => {
            debug_assert!(*i < n);
            v[*i]
        }
        Expr::Neg(a) => -eval_value(a, x, v)?,
        Expr::Add(a, b) => eval_value(a, x, v)? + eval_value(b, x, v)?,
        Expr::Sub(a, b) => eval_value(a, x, v)? - eval_value(b, x, v)?,
        Expr::Mul(a, b) => eval_value(a, x, v)? * eval_value(b, x, v)?,
        Expr::Div(a, b) => {
            let den = eval_value(b, x, v)?;
            if den == 0.0 {
                return Err(EvalError::DivisionByZero {
                    subexpr: expr.pretty(),
                });
            }
            eval_value(a, x, v)? / den
        }
        Expr::Pow(a, c) => {
            let base = eval_value(a, x, v)?;
            pow_derivatives(expr, base, *c)?.0
        }
        Expr::Call(func, a) => {
            let u = eval_value(a, x, v)?;
            func_derivatives(*func, expr, u)?.0
        }
    })
}
