//! Error types shared across the engine.

use std::fmt;

use crate::poly::Symbol;

/// Errors raised by scalar-expression arithmetic and parsing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprError {
    /// Division by an expression that normalizes to zero.
    DivisionByZero,
    /// Square root applied to an expression that already carries radicals.
    NestedRadical,
    /// Division by a mixed radical expression the engine cannot rationalize.
    UnsupportedRadicalDivision,
    Parse(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::DivisionByZero => write!(f, "division by the zero expression"),
            ExprError::NestedRadical => write!(f, "nested radicals are not representable"),
            ExprError::UnsupportedRadicalDivision => {
                write!(f, "division by this radical expression is not supported")
            }
            ExprError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for ExprError {}

/// Errors raised by exact evaluation at a rational point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    /// A denominator vanishes at the point.
    Domain(String),
    /// A radicand evaluates to a rational with no rational square root;
    /// the caller must pick a different sample point.
    IrrationalAtPoint(String),
    /// The point does not assign a value to some symbol.
    MissingCoordinate(Symbol),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain(what) => write!(f, "domain error: {what}"),
            EvalError::IrrationalAtPoint(what) => {
                write!(f, "irrational square root at point: {what}")
            }
            EvalError::MissingCoordinate(s) => write!(f, "point does not assign `{s}`"),
        }
    }
}

impl std::error::Error for EvalError {}

/// Errors raised by chart/structure construction and geometric operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeomError {
    SingularFrame,
    BadDimension(String),
    Structure(String),
    Expr(ExprError),
    Eval(EvalError),
    /// Directional derivative of a non-constant scalar on a chart that has
    /// no coordinates.
    NoCoordinates,
    Unsupported(String),
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::SingularFrame => {
                write!(f, "frame matrix is not invertible on the chart domain")
            }
            GeomError::BadDimension(msg) => write!(f, "dimension error: {msg}"),
            GeomError::Structure(msg) => write!(f, "structure error: {msg}"),
            GeomError::Expr(e) => write!(f, "{e}"),
            GeomError::Eval(e) => write!(f, "{e}"),
            GeomError::NoCoordinates => write!(
                f,
                "directional derivative of a non-constant scalar on a bracket-seeded chart"
            ),
            GeomError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl std::error::Error for GeomError {}

impl From<ExprError> for GeomError {
    fn from(e: ExprError) -> Self {
        GeomError::Expr(e)
    }
}

impl From<EvalError> for GeomError {
    fn from(e: EvalError) -> Self {
        GeomError::Eval(e)
    }
}
