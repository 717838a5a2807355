//! The field definition DSL: parsing, canonical printing, and evaluation
//! with exact first and second derivatives via second-order jets.
//!
//! Expressions are immutable after parsing and contain no interior
//! mutability, so they can be evaluated from many threads concurrently.

mod ast;
mod eval;
mod jet;
mod parse;

pub use ast::{Expr, Func};
pub use eval::{eval_jet2, eval_value, EvalError, Jet2Value};
pub use jet::Jet2;
pub use parse::{parse, ParseError, ParseErrorKind};
