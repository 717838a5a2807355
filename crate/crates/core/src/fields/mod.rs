//! Chart-level domain objects: charts, tangent points, metrics,
//! connections, and the pointwise form/multivector containers.
//!
//! All field objects are immutable after construction; pointwise
//! evaluations are independent and safe to run concurrently.

mod arrays;
mod chart;
mod connection;
mod metric;

pub use arrays::{Antisym2, Antisym3, Tensor3, Tensor4};
pub use chart::{Chart, TangentPoint};
pub use connection::{
    promote_linear, ConnEval, ConnectionField, GeneralConnection, LinEval, LinearConnection,
};
pub use metric::{eval_metric, DualMetricValue, MetricEval, MetricField, SIGNATURE_EIGEN_TOL};

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("chart dimension must be at least 3, got {dim}")]
    DimensionTooSmall { dim: usize },
    #[error("{what}: expected length {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} must not mention velocity symbols: '{expr}'")]
    VelocityInBaseField { what: &'static str, expr: String },
    #[error("metric is not symmetric: component ({row},{col}) is '{upper}' but ({col},{row}) is '{lower}'")]
    MetricNotSymmetric {
        row: usize,
        col: usize,
        upper: String,
        lower: String,
    },
    #[error("metric is singular at {x:?} (det = {det:.3e})")]
    SingularMetric { x: Vec<f64>, det: f64 },
    #[error("metric has signature ({negative} negative, {positive} positive) at {x:?}, expected (1, n-1)")]
    WrongSignature {
        x: Vec<f64>,
        negative: usize,
        positive: usize,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Degree-r antisymmetric coefficient data over the 2n-dimensional basis.
#[derive(Debug, Clone, PartialEq)]
pub enum AntisymData {
    D1(Vec<f64>),
    D2(Antisym2),
    D3(Antisym3),
}

impl AntisymData {
    pub fn degree(&self) -> usize {
        match self {
            AntisymData::D1(_) => 1,
            AntisymData::D2(_) => 2,
            AntisymData::D3(_) => 3,
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            AntisymData::D1(v) => v.iter().fold(0.0, |a, x| a.max(x.abs())),
            AntisymData::D2(a) => a.max_abs(),
            AntisymData::D3(a) => a.max_abs(),
        }
    }
}

/// A degree-r form on the tangent bundle at a point, stored over the 2n
/// basis covectors ordered (d^0..d^{n-1}, fiber d^0..d^{n-1}).
#[derive(Debug, Clone)]
pub struct FormOnTE {
    pub data: AntisymData,
    pub base_point: TangentPoint,
    pub length_unit_power: i32,
}

/// A degree-r multivector on the tangent bundle at a point, over the 2n
/// basis vectors in the same block order.
#[derive(Debug, Clone)]
pub struct MultivectorOnTE {
    pub data: AntisymData,
    pub base_point: TangentPoint,
    pub length_unit_power: i32,
}

impl FormOnTE {
    pub fn degree(&self) -> usize {
        self.data.degree()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.max_abs()
    }

    pub fn as_d2(&self) -> &Antisym2 {
        match &self.data {
            AntisymData::D2(a) => a,
            _ => panic!("expected a degree-2 form"),
        }
    }

    pub fn as_d3(&self) -> &Antisym3 {
        match &self.data {
            AntisymData::D3(a) => a,
            _ => panic!("expected a degree-3 form"),
        }
    }
}

impl MultivectorOnTE {
    pub fn degree(&self) -> usize {
        self.data.degree()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.max_abs()
    }

    pub fn as_d2(&self) -> &Antisym2 {
        match &self.data {
            AntisymData::D2(a) => a,
            _ => panic!("expected a degree-2 multivector"),
        }
    }

    pub fn as_d3(&self) -> &Antisym3 {
        match &self.data {
            AntisymData::D3(a) => a,
            _ => panic!("expected a degree-3 multivector"),
        }
    }
}

/// A (0,3) tensor value at a base point, with no symmetry assumed.
#[derive(Debug, Clone)]
pub struct Tensor03Value {
    pub tensor: Tensor3,
    pub base_point: TangentPoint,
    pub length_unit_power: i32,
}

impl Tensor03Value {
    pub fn max_abs(&self) -> f64 {
        self.tensor.max_abs()
    }
}
