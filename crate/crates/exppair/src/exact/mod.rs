//! Exact numerics: big rationals, quadratic surds, certified intervals.

pub mod interval;
pub mod rat;
pub mod surd;

use num_bigint::BigInt;
use thiserror::Error;

pub use interval::CertInterval;
pub use rat::{fmt_decimal, fmt_rat, parse_rat, rat, rat_int, Rat};
pub use surd::QuadraticSurd;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("negative radicand {0}")]
    NegativeRadicand(BigInt),
    #[error("surds over distinct radicands {0} and {1}")]
    IncompatibleRadicands(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("interval endpoints out of order")]
    EmptyInterval,
    #[error("log of a non-positive value")]
    LogDomain,
    #[error("integer exponent does not fit")]
    ExponentTooLarge,
}

/// Exact value that is either rational or a single quadratic surd.
#[derive(Clone, Debug)]
pub enum Value {
    Rat(Rat),
    Surd(QuadraticSurd),
}

impl Value {
    pub fn as_surd(&self) -> QuadraticSurd {
        match self {
            Value::Rat(x) => QuadraticSurd::from_rat(x.clone()),
            Value::Surd(s) => s.clone(),
        }
    }

    pub fn enclosure(&self, bits: u32) -> CertInterval {
        self.as_surd().enclosure(bits)
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Rat(x) => write!(f, "{}", fmt_rat(x)),
            Value::Surd(s) => write!(f, "{s}"),
        }
    }
}
