//! Seeded random field generators for property tests and fuzzing.
//!
//! Coefficients are degree-at-most-2 polynomials with entries drawn
//! uniformly from a symmetric interval. Generated ASTs are canonical:
//! constants are non-negative, with sign carried by negation nodes, so
//! pretty-printing and re-parsing is structurally stable.

use rand::Rng;

use crate::expr::Expr;
use crate::fields::{GeneralConnection, LinearConnection, MetricField};

fn coef(c: f64) -> Expr {
    if c < 0.0 {
        Expr::Neg(Box::new(Expr::Const(-c)))
    } else {
        Expr::Const(c)
    }
}

fn symbol<R: Rng>(rng: &mut R, dim: usize, with_velocity: bool) -> Expr {
    let idx = rng.gen_range(0..dim);
    if with_velocity && rng.gen_bool(0.5) {
        Expr::Vel(idx)
    } else {
        Expr::Coord(idx)
    }
}

/// A random polynomial of degree at most 2: a constant, two linear terms
/// and two quadratic terms, coefficients uniform in `[-scale, scale]`.
pub fn random_poly_expr<R: Rng>(rng: &mut R, dim: usize, scale: f64, with_velocity: bool) -> Expr {
    let mut e = coef(rng.gen_range(-scale..scale));
    for _ in 0..2 {
        let c = coef(rng.gen_range(-scale..scale));
        let s = symbol(rng, dim, with_velocity);
        e = Expr::Add(Box::new(e), Box::new(Expr::Mul(Box::new(c), Box::new(s))));
    }
    for _ in 0..2 {
        let c = coef(rng.gen_range(-scale..scale));
        let s1 = symbol(rng, dim, with_velocity);
        let s2 = symbol(rng, dim, with_velocity);
        e = Expr::Add(
            Box::new(e),
            Box::new(Expr::Mul(
                Box::new(c),
                Box::new(Expr::Mul(Box::new(s1), Box::new(s2))),
            )),
        );
    }
    e
}

/// Random linear connection with polynomial base coefficients.
pub fn random_linear_connection<R: Rng>(rng: &mut R, n: usize, scale: f64) -> LinearConnection {
    let comps: Vec<Expr> = (0..n * n * n)
        .map(|_| random_poly_expr(rng, n, scale, false))
        .collect();
    LinearConnection::new(n, comps).expect("generated components are valid")
}

/// Random torsion-free linear connection: coefficients symmetric in the
/// two lower slots.
pub fn random_torsion_free_linear<R: Rng>(rng: &mut R, n: usize, scale: f64) -> LinearConnection {
    let mut comps = vec![Expr::Const(0.0); n * n * n];
    for l in 0..n {
        for u in 0..n {
            for m in l..n {
                let e = random_poly_expr(rng, n, scale, false);
                comps[(l * n + u) * n + m] = e.clone();
                comps[(m * n + u) * n + l] = e;
            }
        }
    }
    LinearConnection::new(n, comps).expect("generated components are valid")
}

/// Random general (typically nonlinear) connection: polynomial in both
/// base and fiber coordinates.
pub fn random_general_connection<R: Rng>(rng: &mut R, n: usize, scale: f64) -> GeneralConnection {
    let comps: Vec<Expr> = (0..n * n)
        .map(|_| random_poly_expr(rng, n, scale, true))
        .collect();
    GeneralConnection::new(n, comps).expect("generated components are valid")
}

/// Random Lorentzian metric: the flat diagonal plus a small symmetric
/// polynomial perturbation. With `eps` well below 1/n and points drawn
/// from a unit-scale box the signature stays (1, n-1).
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, eps: f64) -> MetricField {
    let mut comps = vec![Expr::Const(0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let pert = random_poly_expr(rng, n, eps, false);
            if i == j {
                let flat = if i == 0 {
                    Expr::Neg(Box::new(Expr::Const(1.0)))
                } else {
                    Expr::Const(1.0)
                };
                comps[i * n + j] = Expr::Add(Box::new(flat), Box::new(pert));
            } else {
                comps[i * n + j] = pert.clone();
                comps[j * n + i] = pert;
            }
        }
    }
    MetricField::new(n, comps, 2).expect("generated metric is valid")
}
