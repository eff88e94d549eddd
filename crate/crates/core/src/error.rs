use thiserror::Error;

use crate::farey::Fraction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{num}/{den} is not a reduced fraction in [0, 1]")]
    InvalidFraction { num: i64, den: i64 },

    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i64, modulus: i64 },

    #[error("order {order} is below the minimum {min}")]
    OrderTooSmall { order: i64, min: i64 },

    #[error("{left} < {right} is not a unimodular pair")]
    NotUnimodular { left: Fraction, right: Fraction },

    #[error("{prev} < {cur} are not consecutive in the Farey sequence of order {order}")]
    NotConsecutive { order: i64, prev: Fraction, cur: Fraction },

    #[error("1/1 has no successor")]
    NoSuccessor,

    #[error("({a} {b}; {c} {d}) is not in the monoid")]
    NotInMonoid { a: i64, b: i64, c: i64, d: i64 },

    #[error("invalid continued-fraction word {0:?}: need even length >= 2 and positive digits")]
    InvalidWord(Vec<i64>),

    #[error("point ({x}, {y}) lies outside the triangle 0 < x, y <= 1, x + y > 1")]
    OutsideTriangle { x: f64, y: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
