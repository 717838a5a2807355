use crate::expr::{eval_value, Expr};

use super::FieldError;

/// An n-dimensional coordinate domain (n >= 3) with optional guard
/// expressions that must be strictly positive at valid base points.
#[derive(Debug, Clone)]
pub struct Chart {
    dim: usize,
    names: Vec<String>,
    guards: Vec<Expr>,
}

impl Chart {
    pub fn new(dim: usize, names: Vec<String>, guards: Vec<Expr>) -> Result<Self, FieldError> {
        if dim < 3 {
            return Err(FieldError::DimensionTooSmall { dim });
        }
        if names.len() != dim {
            return Err(FieldError::LengthMismatch {
                what: "coordinate names",
                expected: dim,
                got: names.len(),
            });
        }
        for g in &guards {
            if g.mentions_velocity() {
                return Err(FieldError::VelocityInBaseField {
                    what: "chart guard",
                    expr: g.pretty(),
                });
            }
        }
        Ok(Chart { dim, names, guards })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn guards(&self) -> &[Expr] {
        &self.guards
    }

    /// True when every guard is strictly positive at `x`. Guard evaluation
    /// errors count as "outside the domain".
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        let zeros = vec![0.0; self.dim];
        self.guards
            .iter()
            .all(|g| matches!(eval_value(g, x, &zeros), Ok(v) if v > 0.0))
    }
}

/// A point of the tangent bundle: base coordinates `x` and fiber
/// coordinates `xdot`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentPoint {
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
}

impl TangentPoint {
    pub fn new(x: Vec<f64>, xdot: Vec<f64>) -> Result<Self, FieldError> {
        if x.len() != xdot.len() {
            return Err(FieldError::LengthMismatch {
                what: "tangent point fiber coordinates",
                expected: x.len(),
                got: xdot.len(),
            });
        }
        Ok(TangentPoint { x, xdot })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn rejects_small_dimension() {
        let err = Chart::new(2, vec!["a".into(), "b".into()], vec![]).unwrap_err();
        assert!(matches!(err, FieldError::DimensionTooSmall { dim: 2 }));
    }

    #[test]
    fn guards_bound_the_domain() {
        let chart = Chart::new(
            4,
            ["t", "r", "theta", "phi"].map(String::from).to_vec(),
            vec![parse("x1 - 2.1", 4).unwrap()],
        )
        .unwrap();
        assert!(chart.contains(&[0.0, 5.0, 1.0, 0.0]));
        assert!(!chart.contains(&[0.0, 2.0, 1.0, 0.0]));
        assert!(!chart.contains(&[0.0, 2.1, 1.0, 0.0]));
    }

    #[test]
    fn guard_evaluation_error_means_outside() {
        let chart = Chart::new(
            3,
            ["a", "b", "c"].map(String::from).to_vec(),
            vec![parse("1/x0", 3).unwrap()],
        )
        .unwrap();
        assert!(!chart.contains(&[0.0, 0.0, 0.0]));
        assert!(chart.contains(&[2.0, 0.0, 0.0]));
    }
}
