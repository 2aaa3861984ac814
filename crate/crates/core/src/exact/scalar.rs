use super::ball::BallReal;
use super::rational::{add_fast, div_fast, mul_fast, to_f64, truncate_decimal, Rational};
use num_traits::Signed;
use std::cmp::Ordering;
use std::fmt::Debug;

/// Coordinate arithmetic shared by the exact and the ball backend.
///
/// `sign` returns `None` only when the value cannot be certified at the
/// current precision; the rational backend always answers.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    /// Construction context: nothing for rationals, the precision for balls.
    type Ctx: Copy + Debug + Send + Sync;

    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` if the divisor is zero (or not certifiably non-zero).
    fn checked_div(&self, o: &Self) -> Option<Self>;
    fn sign(&self) -> Option<Ordering>;
    /// Structural equality; balls never claim equality.
    fn exact_eq(&self, o: &Self) -> Option<bool>;
    fn approx(&self) -> f64;
    fn decimal(&self, digits: usize) -> String;
    fn is_exact_backend() -> bool;
    /// Working precision in bits; 0 for exact values.
    fn precision_bits(&self) -> u32;
    /// The value itself for the exact backend.
    fn as_exact(&self) -> Option<&Rational>;
}

impl Scalar for Rational {
    type Ctx = ();

    fn from_rational(r: &Rational, _: ()) -> Self {
        r.clone()
    }
    fn ctx(&self) {}
    fn add(&self, o: &Self) -> Self {
        add_fast(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        add_fast(self, &-o)
    }
    fn mul(&self, o: &Self) -> Self {
        mul_fast(self, o)
    }
    fn checked_div(&self, o: &Self) -> Option<Self> {
        div_fast(self, o)
    }
    fn sign(&self) -> Option<Ordering> {
        Some(if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }
    fn exact_eq(&self, o: &Self) -> Option<bool> {
        Some(self == o)
    }
    fn approx(&self) -> f64 {
        to_f64(self)
    }
    fn decimal(&self, digits: usize) -> String {
        truncate_decimal(self, digits)
    }
    fn is_exact_backend() -> bool {
        true
    }
    fn precision_bits(&self) -> u32 {
        0
    }
    fn as_exact(&self) -> Option<&Rational> {
        Some(self)
    }
}

impl Scalar for BallReal {
    type Ctx = u32;

    fn from_rational(r: &Rational, prec: u32) -> Self {
        BallReal::from_rational(r, prec)
    }
    fn ctx(&self) -> u32 {
        self.precision()
    }
    fn add(&self, o: &Self) -> Self {
        BallReal::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        BallReal::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        BallReal::mul(self, o)
    }
    fn checked_div(&self, o: &Self) -> Option<Self> {
        BallReal::checked_div(self, o)
    }
    fn sign(&self) -> Option<Ordering> {
        self.sign_certain()
    }
    fn exact_eq(&self, _: &Self) -> Option<bool> {
        None
    }
    fn approx(&self) -> f64 {
        self.to_f64()
    }
    fn decimal(&self, digits: usize) -> String {
        BallReal::decimal(self, digits)
    }
    fn is_exact_backend() -> bool {
        false
    }
    fn precision_bits(&self) -> u32 {
        self.precision()
    }
    fn as_exact(&self) -> Option<&Rational> {
        None
    }
}
