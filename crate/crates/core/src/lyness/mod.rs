//! Periodic Lyness maps: one-step maps `F_α(x, y) = (y, (α + y)/x)`, their
//! composition over a coefficient period, first integrals, orbits, fixed
//! points and critical levels.

pub mod fixed;
pub mod map;
pub mod orbit;

pub use fixed::{critical_level, critical_level_of, fixed_point, fixed_point_nonneg, FixedPoint, RatFn};
pub use map::{composed_step, invariant, invariant_terms, jacobian_at, step, LynessMap, Matrix2};
pub use orbit::{orbit, orbit_ball, Orbit};

use crate::exact::{AlgebraicError, AlgebraicReal, BallReal, Rational, Scalar};
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LynessError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sign not certifiable at {0} bits")]
    Uncertain(u32),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

/// Coefficients of a 2- or 3-periodic Lyness recurrence, in the order they
/// are applied: the composed map is `F_b ∘ F_a` or `F_c ∘ F_b ∘ F_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    coeffs: Vec<Rational>,
}

impl Params {
    /// `k = 2`; the composed map is `F_{b,a} = F_b ∘ F_a`.
    pub fn two(a: Rational, b: Rational) -> Result<Self, LynessError> {
        Self::from_coeffs(vec![a, b])
    }

    /// `k = 3`; the composed map is `F_{c,b,a} = F_c ∘ F_b ∘ F_a`.
    pub fn three(a: Rational, b: Rational, c: Rational) -> Result<Self, LynessError> {
        Self::from_coeffs(vec![a, b, c])
    }

    pub fn new(k: usize, a: Rational, b: Rational, c: Option<Rational>) -> Result<Self, LynessError> {
        match (k, c) {
            (2, None) => Self::two(a, b),
            (3, Some(c)) => Self::three(a, b, c),
            (2, Some(_)) => Err(LynessError::InvalidParams("c is only used when k = 3".into())),
            (3, None) => Err(LynessError::InvalidParams("k = 3 requires c".into())),
            _ => Err(LynessError::InvalidParams(format!("k must be 2 or 3, got {k}"))),
        }
    }

    fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self, LynessError> {
        if let Some(c) = coeffs.iter().find(|c| c.is_negative()) {
            return Err(LynessError::InvalidParams(format!("coefficient {c} is negative")));
        }
        Ok(Params { coeffs })
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn a(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn b(&self) -> &Rational {
        &self.coeffs[1]
    }

    pub fn c(&self) -> Option<&Rational> {
        self.coeffs.get(2)
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_positive())
    }

    pub fn require_positive(&self) -> Result<(), LynessError> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(LynessError::InvalidParams(format!("all coefficients must be positive, got {self}")))
        }
    }

    /// Parameters of the `s`-th cyclic shift: the map conjugated by the
    /// first `s` one-step maps, e.g. `F_{a,b}` for `k = 2, s = 1`.
    pub fn shifted(&self, s: usize) -> Params {
        let mut c = self.coeffs.clone();
        c.rotate_left(s % self.k());
        Params { coeffs: c }
    }

    /// True when every cyclic shift has the same parameters.
    pub fn is_symmetric(&self) -> bool {
        self.coeffs.iter().all(|c| c == &self.coeffs[0])
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} a={} b={}", self.k(), self.a(), self.b())?;
        if let Some(c) = self.c() {
            write!(f, " c={c}")?;
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.k() + 1))?;
        m.serialize_entry("k", &self.k())?;
        for (name, c) in ["a", "b", "c"].iter().zip(&self.coeffs) {
            m.serialize_entry(name, &c.to_string())?;
        }
        m.end()
    }
}

/// A point of the open positive quadrant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

impl Point<Rational> {
    pub fn to_scalar<S: Scalar>(&self, ctx: S::Ctx) -> Point<S> {
        Point::new(S::from_rational(&self.x, ctx), S::from_rational(&self.y, ctx))
    }
}

/// An exact coordinate: rational, or a real algebraic number.
#[derive(Clone, Debug, PartialEq)]
pub enum Coord {
    Rational(Rational),
    Algebraic(AlgebraicReal),
}

impl Coord {
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Coord::Rational(r) => Some(r.clone()),
            Coord::Algebraic(a) => a.as_rational(),
        }
    }

    pub fn to_ball(&self, prec: u32) -> BallReal {
        match self {
            Coord::Rational(r) => BallReal::from_rational(r, prec),
            Coord::Algebraic(a) => a.to_ball(prec + 8).with_precision(prec),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Coord::Rational(r) => r.is_positive(),
            Coord::Algebraic(a) => a.compare_rational(&Rational::zero()) == std::cmp::Ordering::Greater,
        }
    }

    pub fn decimal(&self, digits: usize) -> String {
        match self {
            Coord::Rational(r) => crate::exact::truncate_decimal(r, digits),
            Coord::Algebraic(a) => a.decimal(digits),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Rational(r) => write!(f, "{r}"),
            Coord::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl From<Rational> for Coord {
    fn from(r: Rational) -> Self {
        Coord::Rational(r)
    }
}

impl From<AlgebraicReal> for Coord {
    fn from(a: AlgebraicReal) -> Self {
        match a.as_rational() {
            Some(r) => Coord::Rational(r),
            None => Coord::Algebraic(a),
        }
    }
}

/// Starting point whose coordinates may be algebraic.
pub type StartPoint = Point<Coord>;

impl StartPoint {
    pub fn rational(x: Rational, y: Rational) -> Self {
        Point::new(Coord::Rational(x), Coord::Rational(y))
    }

    /// Both coordinates as rationals, if they are.
    pub fn as_rational(&self) -> Option<Point<Rational>> {
        Some(Point::new(self.x.as_rational()?, self.y.as_rational()?))
    }

    pub fn to_ball(&self, prec: u32) -> Point<BallReal> {
        Point::new(self.x.to_ball(prec), self.y.to_ball(prec))
    }

    pub fn require_positive(&self) -> Result<(), LynessError> {
        if self.x.is_positive() && self.y.is_positive() {
            Ok(())
        } else {
            Err(LynessError::Domain(format!("initial point ({}, {}) is not in the open positive quadrant", self.x, self.y)))
        }
    }
}
