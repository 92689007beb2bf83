//! Exact symbolic engine for contact metric geometry.
//!
//! Everything is computed over big-integer rationals: charts carry
//! orthonormal frames of symbolic vector fields, curvature comes out of the
//! Koszul formula, and curvature tensors are decomposed against the six
//! canonical building-block tensors of almost contact metric geometry with
//! zero symbolic residual. Floats never appear.

// Tensor and frame arithmetic is written with explicit index loops; ranged
// indexing reads better than iterator gymnastics for multi-index math.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod rat;
pub mod poly;
pub mod ratfunc;
pub mod expr;
pub mod parse;
pub mod matrix;
pub mod chart;
pub mod connection;
pub mod curvature;
pub mod acm;
pub mod blocks;
pub mod linalg;
pub mod fit;
pub mod check;
pub mod identities;
pub mod ricci;
pub mod quadext;
pub mod deform;
pub mod random_frames;

pub use error::{EvalError, ExprError, GeomError};
pub use expr::Expr;
pub use parse::parse_expr;
pub use poly::{MPoly, Symbol};
pub use rat::Rat;
pub use ratfunc::RatFunc;
