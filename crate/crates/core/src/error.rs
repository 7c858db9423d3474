use alloc::string::String;
use core::fmt;

/// Errors raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The integer is not the fundamental discriminant of an imaginary quadratic field.
    InvalidDiscriminant { d: i64, reason: &'static str },
    /// A conductor, modulus or similar size parameter is out of range.
    InvalidConductor(i64),
    /// An evaluation point lies on or below the real axis.
    NotInUpperHalfPlane,
    /// Two integers were required to be coprime but are not.
    NotCoprime { a: i64, b: i64 },
    /// A matrix was required to have determinant 1 modulo N.
    DeterminantNotOne { det: i64, modulus: i64 },
    /// A Siegel index with both entries integral.
    IntegralSiegelIndex,
    /// A quadratic form of the wrong discriminant or shape.
    InvalidForm(String),
    /// A precision context below the supported minimum.
    InvalidPrecision { bits: u32, guard_bits: u32 },
    /// The zero polynomial (or a constant) where a positive degree is required.
    DegenerateInput(&'static str),
    /// Integer recognition did not stabilize within the allowed precision doublings.
    NoConvergence {
        bits: u32,
        /// log2 of the largest distance of a coefficient to the nearest integer.
        residual_log2: f64,
    },
    /// Integer overflow in an exact computation on machine integers.
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDiscriminant { d, reason } => {
                write!(f, "{d} is not a fundamental discriminant: {reason}")
            }
            Error::InvalidConductor(n) => write!(f, "invalid conductor or modulus {n}"),
            Error::NotInUpperHalfPlane => f.write_str("point is not in the upper half-plane"),
            Error::NotCoprime { a, b } => write!(f, "gcd({a}, {b}) != 1"),
            Error::DeterminantNotOne { det, modulus } => {
                write!(f, "determinant {det} is not 1 modulo {modulus}")
            }
            Error::IntegralSiegelIndex => f.write_str("Siegel index must not lie in Z^2"),
            Error::InvalidForm(msg) => write!(f, "invalid quadratic form: {msg}"),
            Error::InvalidPrecision { bits, guard_bits } => write!(
                f,
                "precision {bits} bits with {guard_bits} guard bits is below the minimum (64, 32)"
            ),
            Error::DegenerateInput(what) => write!(f, "degenerate input: {what}"),
            Error::NoConvergence { bits, residual_log2 } => write!(
                f,
                "integer recognition did not converge (last attempt {bits} bits, residual 2^{residual_log2:.1})"
            ),
            Error::Overflow => f.write_str("integer overflow in exact arithmetic"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
