//! Exact and certified number types: rationals, real algebraic numbers and
//! midpoint-radius balls.

pub mod algebraic;
pub mod ball;
pub mod rational;
pub mod scalar;

pub use algebraic::{AlgebraicError, AlgebraicReal};
pub use ball::{BallReal, Dyadic, DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
pub use rational::{gcd, int, parse_rational, rat, reduced, truncate_decimal, ParseRationalError, Rational};
pub use scalar::Scalar;
