// Tensor index gymnastics reads best as explicit index loops.
#![allow(clippy::needless_range_loop)]

//! Coordinate tensor calculus on the tangent bundle of a spacetime chart.
//!
//! Given a Lorentzian metric `g` and a (possibly nonlinear) connection `K`
//! on an n-dimensional coordinate chart (n >= 3), this crate evaluates the
//! geometric objects the pair induces on the tangent bundle: the 2-form
//! `Upsilon[g,K]`, the 2-vector `Lambda[g,K]`, torsion, curvature, Lie
//! derivatives of the musical 1-form, the covariant exterior differential
//! of `g`, and the Schouten bracket `[Lambda,Lambda]`. On top of the
//! pointwise operations it runs sampling-based verification suites that
//! certify, at a configurable tolerance, whether `(g, K)` defines
//! symplectic and Poisson structures on the tangent bundle.
//!
//! Modules:
//! - [`expr`]: the scalar field definition DSL and its second-order jet
//!   evaluator (exact first and second derivatives, no truncation error).
//! - [`fields`]: charts, tangent points, metrics, connections and the
//!   pointwise form/multivector containers.
//! - [`geometry`]: the pointwise coordinate formulas.
//! - [`verify`]: sampling, residual checks, equivalence suites, reports,
//!   and the finite-difference cross oracle.
//! - [`gallery`]: built-in example models.

pub mod expr;
pub mod fields;
pub mod gallery;
pub mod geometry;
pub mod verify;
