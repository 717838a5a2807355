//! Second-order multivariate jets.
//!
//! A [`Jet2`] carries a value, its gradient and its full Hessian with
//! respect to `m` seed variables, propagated through every arithmetic
//! operation by the chain rule. Results are exact to roundoff; there is no
//! truncation error. Hessians are computed on the upper triangle and
//! mirrored, so `h[i][j] == h[j][i]` holds bitwise.

#[derive(Debug, Clone)]
pub struct Jet2 {
    pub value: f64,
    /// Length `m` gradient.
    pub grad: Vec<f64>,
    /// Row-major `m x m` Hessian, symmetric by construction.
    pub hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64, m: usize) -> Self {
        Jet2 {
            value,
            grad: vec![0.0; m],
            hess: vec![0.0; m * m],
        }
    }

    /// Seeds variable `index` with unit derivative.
    pub fn variable(value: f64, index: usize, m: usize) -> Self {
        let mut jet = Jet2::constant(value, m);
        jet.grad[index] = 1.0;
        jet
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    #[inline]
    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim() + j]
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let m = self.dim();
        let mut out = Jet2::constant(self.value + other.value, m);
        for i in 0..m {
            out.grad[i] = self.grad[i] + other.grad[i];
        }
        for k in 0..m * m {
            out.hess[k] = self.hess[k] + other.hess[k];
        }
        out
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        let m = self.dim();
        let mut out = Jet2::constant(self.value - other.value, m);
        for i in 0..m {
            out.grad[i] = self.grad[i] - other.grad[i];
        }
        for k in 0..m * m {
            out.hess[k] = self.hess[k] - other.hess[k];
        }
        out
    }

    pub fn neg(&self) -> Jet2 {
        let m = self.dim();
        let mut out = Jet2::constant(-self.value, m);
        for i in 0..m {
            out.grad[i] = -self.grad[i];
        }
        for k in 0..m * m {
            out.hess[k] = -self.hess[k];
        }
        out
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let m = self.dim();
        let mut out = Jet2::constant(self.value * other.value, m);
        for i in 0..m {
            out.grad[i] = self.grad[i] * other.value + self.value * other.grad[i];
        }
        for i in 0..m {
            for j in i..m {
                let h = self.h(i, j) * other.value
                    + self.grad[i] * other.grad[j]
                    + self.grad[j] * other.grad[i]
                    + self.value * other.h(i, j);
                out.hess[i * m + j] = h;
                out.hess[j * m + i] = h;
            }
        }
        out
    }

    /// Quotient; the caller must reject a zero denominator beforehand.
    pub fn div(&self, other: &Jet2) -> Jet2 {
        let m = self.dim();
        let q = self.value / other.value;
        let mut out = Jet2::constant(q, m);
        for i in 0..m {
            out.grad[i] = (self.grad[i] - q * other.grad[i]) / other.value;
        }
        for i in 0..m {
            for j in i..m {
                let h = (self.h(i, j)
                    - out.grad[i] * other.grad[j]
                    - out.grad[j] * other.grad[i]
                    - q * other.h(i, j))
                    / other.value;
                out.hess[i * m + j] = h;
                out.hess[j * m + i] = h;
            }
        }
        out
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let m = self.dim();
        let mut out = Jet2::constant(f0, m);
        for i in 0..m {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..m {
            for j in i..m {
                let h = f2 * self.grad[i] * self.grad[j] + f1 * self.h(i, j);
                out.hess[i * m + j] = h;
                out.hess[j * m + i] = h;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        // f = u*v with u = x0, v = x1 at (2, 3)
        let u = Jet2::variable(2.0, 0, 2);
        let v = Jet2::variable(3.0, 1, 2);
        let f = u.mul(&v);
        assert_eq!(f.value, 6.0);
        assert_eq!(f.grad, vec![3.0, 2.0]);
        assert_eq!(f.h(0, 1), 1.0);
        assert_eq!(f.h(1, 0), 1.0);
        assert_eq!(f.h(0, 0), 0.0);
    }

    #[test]
    fn quotient_inverts_product() {
        let u = Jet2::variable(1.7, 0, 3);
        let v = Jet2::variable(-0.4, 1, 3);
        let w = u.mul(&v).div(&v);
        assert!((w.value - u.value).abs() < 1e-15);
        for i in 0..3 {
            assert!((w.grad[i] - u.grad[i]).abs() < 1e-14);
            for j in 0..3 {
                assert!((w.h(i, j) - u.h(i, j)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn hessian_bitwise_symmetric() {
        let u = Jet2::variable(0.3, 0, 4);
        let v = Jet2::variable(1.9, 2, 4);
        let f = u.mul(&v).div(&v.add(&u)).chain(2.0, -0.5, 0.25);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(f.h(i, j).to_bits(), f.h(j, i).to_bits());
            }
        }
    }
}
