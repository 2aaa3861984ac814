//! Midpoint-radius balls over dyadic rationals.
//!
//! A [`BallReal`] stands for the closed interval `[mid - rad, mid + rad]`.
//! Every operation returns a ball containing the exact image of its input
//! balls: midpoints are rounded to the working precision and the rounding
//! error is folded into the radius, which is itself always rounded up.

use super::rational::{format_scaled, Rational};
use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;
/// Default ceiling for adaptive precision doubling.
pub const DEFAULT_PRECISION_CAP: u32 = 16384;

const RAD_BITS: u64 = 30;

/// `man * 2^exp`, with `man` odd unless the value is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { man: man >> tz as usize, exp: exp + tz as i64 }
        } else {
            Dyadic { man, exp }
        }
    }

    pub fn pow2(exp: i64) -> Self {
        Dyadic { man: BigInt::one(), exp }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.man.sign() {
            BigSign::Minus => Ordering::Less,
            BigSign::NoSign => Ordering::Equal,
            BigSign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    /// Bit length of the mantissa.
    fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit plus one; `value < 2^top()` in magnitude.
    fn top(&self) -> i64 {
        self.exp + self.bits() as i64
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as usize;
        let b = &o.man << (o.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Dyadic::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as usize)
        } else {
            Rational::new(self.man.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let shift = (b - 60).max(0);
        let head = (&self.man >> shift as usize).to_f64().unwrap_or(0.0);
        head * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Rounds toward minus infinity to `prec` significant bits. Returns the
    /// rounded value and an upper bound on the discarded part.
    fn round_floor(&self, prec: u64) -> (Dyadic, Dyadic) {
        let b = self.bits();
        if b <= prec {
            return (self.clone(), Dyadic::zero());
        }
        let shift = b - prec;
        let m = self.man.div_floor(&(BigInt::one() << shift as usize));
        let e = self.exp + shift as i64;
        (Dyadic::new(m, e), Dyadic::pow2(e))
    }

    /// Smallest value with at most `prec` significant bits that is `>= self`.
    fn round_up(&self, prec: u64) -> Dyadic {
        let b = self.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        let d = BigInt::one() << shift as usize;
        let m = self.man.div_ceil(&d);
        Dyadic::new(m, self.exp + shift as i64)
    }

    /// Exact dyadic floor of a rational at `prec` significant bits, with the
    /// truncation error bound.
    fn from_rational(r: &Rational, prec: u64) -> (Dyadic, Dyadic) {
        if r.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let s = prec as i64 - (nb - db) + 1;
        let (num, den) = if s >= 0 {
            (r.numer() << s as usize, r.denom().clone())
        } else {
            (r.numer().clone(), r.denom() << (-s) as usize)
        };
        let (q, rem) = num.div_mod_floor(&den);
        let exact = rem.is_zero();
        let d = Dyadic::new(q, -s);
        if exact {
            (d, Dyadic::zero())
        } else {
            (d, Dyadic::pow2(-s))
        }
    }

    /// `self / o` for positive operands, rounded up to `prec` bits.
    fn div_up(&self, o: &Self, prec: u64) -> Dyadic {
        debug_assert!(self.signum() != Ordering::Less && o.signum() == Ordering::Greater);
        if self.is_zero() {
            return Dyadic::zero();
        }
        let s = prec as i64 + o.bits() as i64 - self.bits() as i64 + 1;
        let (num, den) = if s >= 0 {
            (&self.man << s as usize, o.man.clone())
        } else {
            (self.man.clone(), &o.man << (-s) as usize)
        };
        let q = num.div_ceil(&den);
        Dyadic::new(q, self.exp - o.exp - s)
    }

    /// `self / o` rounded toward minus infinity, with error bound.
    fn div_floor(&self, o: &Self, prec: u64) -> (Dyadic, Dyadic) {
        if self.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let s = prec as i64 + o.bits() as i64 - self.bits() as i64 + 1;
        let (num, den) = if s >= 0 {
            (&self.man << s as usize, o.man.clone())
        } else {
            (self.man.clone(), &o.man << (-s) as usize)
        };
        let (q, rem) = num.div_mod_floor(&den);
        let e = self.exp - o.exp - s;
        let err = if rem.is_zero() { Dyadic::zero() } else { Dyadic::pow2(e) };
        (Dyadic::new(q, e), err)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let ds = self.sub(other);
        ds.signum()
    }
}

/// Certified enclosure `[mid - rad, mid + rad]` of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl BallReal {
    pub fn exact(d: Dyadic, prec: u32) -> Self {
        BallReal { mid: d, rad: Dyadic::zero(), prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::exact(Dyadic::new(BigInt::from(n), 0), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (mid, err) = Dyadic::from_rational(r, prec as u64);
        BallReal { mid, rad: err.round_up(RAD_BITS), prec }
    }

    /// Ball containing `[mid - rad, mid + rad]` for rational inputs.
    pub fn from_mid_rad(mid: &Rational, rad: &Rational, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        let (m, err) = Dyadic::from_rational(mid, prec as u64);
        let (r, rerr) = Dyadic::from_rational(rad, RAD_BITS);
        let rad = r.add(&rerr).add(&err).round_up(RAD_BITS);
        BallReal { mid: m, rad, prec }
    }

    /// Ball with the given rational endpoints.
    pub fn from_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
        let rad = (hi - lo).abs() / Rational::from_integer(BigInt::from(2));
        Self::from_mid_rad(&mid, &rad, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn midpoint(&self) -> Rational {
        self.mid.to_rational()
    }

    pub fn radius(&self) -> Rational {
        self.rad.to_rational()
    }

    pub fn lower(&self) -> Rational {
        self.mid.sub(&self.rad).to_rational()
    }

    pub fn upper(&self) -> Rational {
        self.mid.add(&self.rad).to_rational()
    }

    pub fn contains(&self, r: &Rational) -> bool {
        (r - self.midpoint()).abs() <= self.radius()
    }

    /// `+`/`-` (as `Greater`/`Less`) when 0 lies outside the ball; `Equal` for
    /// the exact zero ball; `None` when the ball straddles 0.
    pub fn sign_certain(&self) -> Option<Ordering> {
        if self.rad.is_zero() {
            return Some(self.mid.signum());
        }
        if self.mid.abs() > self.rad {
            Some(self.mid.signum())
        } else {
            None
        }
    }

    fn p(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    fn finish(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (m, err) = mid.round_floor(prec as u64);
        let rad = rad.add(&err).round_up(RAD_BITS);
        BallReal { mid: m, rad, prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::finish(self.mid.add(&o.mid), self.rad.add(&o.rad), self.p(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::finish(self.mid.sub(&o.mid), self.rad.add(&o.rad), self.p(o))
    }

    pub fn neg(&self) -> Self {
        BallReal { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mid = self.mid.mul(&o.mid);
        let a1 = self.mid.abs().round_up(RAD_BITS);
        let a2 = o.mid.abs().round_up(RAD_BITS);
        let rad = a1.mul(&o.rad).add(&a2.mul(&self.rad)).add(&self.rad.mul(&o.rad));
        Self::finish(mid, rad, self.p(o))
    }

    /// Division; `None` when the divisor ball contains zero.
    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        let am2 = o.mid.abs();
        if am2 <= o.rad {
            return None;
        }
        let prec = self.p(o);
        let (q, err) = self.mid.div_floor(&o.mid, prec as u64);
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            err
        } else {
            let a1 = self.mid.abs().round_up(RAD_BITS);
            let a2 = am2.round_up(RAD_BITS);
            let num = a2.mul(&self.rad).add(&a1.mul(&o.rad)).round_up(RAD_BITS);
            // |m2| (|m2| - r2), rounded down so the quotient rounds up
            let gap = am2.sub(&o.rad);
            let (g, _) = gap.round_floor(RAD_BITS);
            let (m2d, _) = am2.round_floor(RAD_BITS);
            let den = g.mul(&m2d);
            if den.signum() != Ordering::Greater {
                return None;
            }
            num.div_up(&den, RAD_BITS).add(&err)
        };
        Some(BallReal { mid: q, rad: rad.round_up(RAD_BITS), prec })
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn abs_upper(&self) -> Rational {
        self.mid.abs().add(&self.rad).to_rational()
    }

    /// Adds `e >= 0` to the radius.
    pub fn widen(&self, e: &Dyadic) -> Self {
        BallReal { mid: self.mid.clone(), rad: self.rad.add(&e.abs()).round_up(RAD_BITS), prec: self.prec }
    }

    /// Smallest ball containing both.
    pub fn union(&self, o: &Self) -> Self {
        let lo = self.mid.sub(&self.rad).min(o.mid.sub(&o.rad));
        let hi = self.mid.add(&self.rad).max(o.mid.add(&o.rad));
        let sum = lo.add(&hi);
        let mid = Dyadic::new(sum.man.clone(), sum.exp - 1);
        let rad = hi.sub(&mid);
        BallReal { mid, rad: rad.round_up(RAD_BITS), prec: self.p(o) }
    }

    /// Certified comparison; `None` when the balls overlap.
    pub fn cmp_certain(&self, o: &Self) -> Option<Ordering> {
        self.sub(o).sign_certain()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// `log2` of the radius (approximately), `None` for exact balls.
    pub fn radius_log2(&self) -> Option<i64> {
        if self.rad.is_zero() {
            None
        } else {
            Some(self.rad.top())
        }
    }

    /// Midpoint truncated toward zero to `digits` decimals.
    pub fn decimal(&self, digits: usize) -> String {
        let q = self.midpoint();
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (q.abs() * Rational::from_integer(scale)).to_integer();
        format_scaled(&scaled, digits, q.is_negative() && !scaled.is_zero())
    }

    /// Certified enclosure of pi via Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let wp = prec + 16;
        let a = arctan_inv(5, wp);
        let b = arctan_inv(239, wp);
        let r = a.mul(&BallReal::from_int(16, wp)).sub(&b.mul(&BallReal::from_int(4, wp)));
        r.with_precision(prec)
    }

    /// Cosine by Taylor series; intended for `|self| <= 4`.
    pub fn cos(&self) -> Self {
        let prec = self.prec;
        let wp = prec + 16;
        let x = self.clone().with_precision(wp);
        let x2 = x.sqr();
        let bound = x.abs_upper();
        let bound2 = &bound * &bound;
        let mut term = BallReal::from_int(1, wp);
        let mut sum = term.clone();
        let tiny = Rational::new(BigInt::one(), BigInt::one() << (wp as usize + 2));
        let mut k: i64 = 0;
        loop {
            k += 1;
            let d = BallReal::from_int((2 * k - 1) * (2 * k), wp);
            term = term.mul(&x2).checked_div(&d).expect("positive divisor").neg();
            sum = sum.add(&term);
            let next_ratio_small =
                bound2.clone() < Rational::from_integer(BigInt::from((2 * k + 1) * (2 * k + 2)));
            if next_ratio_small && term.abs_upper() < tiny {
                // alternating tail bounded by the next term, itself below this one
                let e = Dyadic::from_rational(&term.abs_upper(), RAD_BITS);
                sum = sum.widen(&e.0.add(&e.1));
                break;
            }
        }
        sum.with_precision(prec)
    }

    /// `acos(self)` for a ball strictly inside `(-1, 1)`, by bisection on the
    /// decreasing branch of cosine over `[0, pi]`.
    pub fn acos(&self) -> Option<Self> {
        let prec = self.prec;
        let one = BallReal::from_int(1, prec);
        if self.cmp_certain(&one) != Some(Ordering::Less)
            || self.cmp_certain(&one.neg()) != Some(Ordering::Greater)
        {
            return None;
        }
        let pi = BallReal::pi(prec + 8);
        let mut lo = Rational::zero();
        let mut hi = pi.upper();
        let target = Rational::new(BigInt::one(), BigInt::one() << (prec as usize).saturating_sub(8));
        while &hi - &lo > target {
            let m = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            let c = BallReal::from_rational(&m, prec + 8).cos();
            match c.cmp_certain(self) {
                Some(Ordering::Greater) => lo = m,
                Some(Ordering::Less) => hi = m,
                _ => break,
            }
        }
        Some(BallReal::from_bounds(&lo, &hi, prec))
    }
}

/// arctan(1/m) by its alternating series.
fn arctan_inv(m: i64, prec: u32) -> BallReal {
    let mm = BigInt::from(m);
    let m2 = &mm * &mm;
    let mut pow = mm.clone();
    let mut sum = BallReal::from_int(0, prec);
    let tiny = Rational::new(BigInt::one(), BigInt::one() << (prec as usize + 2));
    let mut k: i64 = 0;
    loop {
        let den = BigInt::from(2 * k + 1) * &pow;
        let t = Rational::new(BigInt::one(), den);
        let tb = BallReal::from_rational(&t, prec);
        if k % 2 == 0 {
            sum = sum.add(&tb);
        } else {
            sum = sum.sub(&tb);
        }
        if t < tiny {
            let (e, err) = Dyadic::from_rational(&t, RAD_BITS);
            return sum.widen(&e.add(&err));
        }
        pow *= &m2;
        k += 1;
    }
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:.3e}]", self.decimal(12), self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn ball(m: Rational, r: Rational) -> BallReal {
        BallReal::from_mid_rad(&m, &r, 64)
    }

    #[test]
    fn sign_examples() {
        assert_eq!(ball(int(1), rat(1, 4)).sign_certain(), Some(Ordering::Greater));
        assert_eq!(ball(int(0), int(1)).sign_certain(), None);
        let tiny = BallReal::from_mid_rad(&rat(-1, 1_000_000_000), &rat(1, 1_000_000_000_000), 128);
        assert_eq!(tiny.sign_certain(), Some(Ordering::Less));
        assert_eq!(BallReal::from_int(0, 64).sign_certain(), Some(Ordering::Equal));
    }

    #[test]
    fn rational_round_trip_contains() {
        let r = rat(1, 3);
        let b = BallReal::from_rational(&r, 100);
        assert!(b.contains(&r));
        assert!(b.radius() < rat(1, 1 << 40) * rat(1, 1 << 40) * rat(1, 1 << 18));
        let e = BallReal::from_rational(&rat(3, 8), 10);
        assert_eq!(e.radius(), int(0));
    }

    #[test]
    fn division_by_ball_containing_zero() {
        let a = BallReal::from_int(1, 64);
        let z = ball(rat(1, 10), rat(1, 5));
        assert!(a.checked_div(&z).is_none());
    }

    #[test]
    fn pi_and_cos() {
        let pi = BallReal::pi(200);
        assert!(pi.lower() > rat(314159265358979, 100_000_000_000_000));
        assert!(pi.upper() < rat(314159265358980, 100_000_000_000_000));
        assert!(pi.radius() < rat(1, 1 << 60));
        let c = pi.cos();
        assert!(c.contains(&int(-1)));
        let c0 = BallReal::from_rational(&rat(1, 2), 128).cos();
        assert!((c0.to_f64() - 0.5f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn acos_of_half() {
        let t = BallReal::from_rational(&rat(1, 2), 128);
        let th = t.acos().unwrap();
        let third_pi = BallReal::pi(128).checked_div(&BallReal::from_int(3, 128)).unwrap();
        assert!(th.sub(&third_pi).abs_upper() < rat(1, 1 << 50));
        assert!(BallReal::from_int(1, 64).acos().is_none());
    }
}
