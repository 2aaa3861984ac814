//! Helpers around [`BigRational`], which is the exact scalar everywhere in
//! this crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Arbitrary-precision fraction kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Operands below this many bits use `num-integer`'s gcd.
const SMALL_GCD_BITS: u64 = 256;

fn to_ubig(n: &BigInt) -> dashu_int::UBig {
    dashu_int::UBig::from_le_bytes(&n.magnitude().to_bytes_le())
}

/// Non-negative gcd; Lehmer-type for large operands.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.bits() < SMALL_GCD_BITS || b.bits() < SMALL_GCD_BITS {
        if a.is_zero() || b.is_zero() {
            return a.gcd(b);
        }
        // One Euclidean step brings a large operand down to the small one.
        let (big, small) = if a.bits() >= b.bits() { (a, b) } else { (b, a) };
        return small.gcd(&(big % small));
    }
    let g = dashu_int::ops::Gcd::gcd(&to_ubig(a), &to_ubig(b));
    BigInt::from(num_bigint::BigUint::from_bytes_le(&g.to_le_bytes()))
}

/// `n / d` in lowest terms. Panics when `d == 0`.
pub fn reduced(n: BigInt, d: BigInt) -> Rational {
    assert!(!d.is_zero(), "zero denominator");
    let g = gcd(&n, &d);
    let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        Rational::new_raw(-n, -d)
    } else {
        Rational::new_raw(n, d)
    }
}

/// Sum with the gcds taken on denominators only (Henrici).
pub fn add_fast(x: &Rational, y: &Rational) -> Rational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if b.is_one() && d.is_one() {
        return Rational::from_integer(a + c);
    }
    let g = gcd(b, d);
    if g.is_one() {
        return Rational::new_raw(a * d + c * b, b * d);
    }
    let (b1, d1) = (b / &g, d / &g);
    let t = a * &d1 + c * &b1;
    if t.is_zero() {
        return Rational::zero();
    }
    let g2 = gcd(&t, &g);
    Rational::new_raw(&t / &g2, b1 * (d / &g2))
}

/// Product with cross cancellation.
pub fn mul_fast(x: &Rational, y: &Rational) -> Rational {
    let (a, b, c, d) = (x.numer(), x.denom(), y.numer(), y.denom());
    if a.is_zero() || c.is_zero() {
        return Rational::zero();
    }
    let g1 = gcd(a, d);
    let g2 = gcd(c, b);
    Rational::new_raw((a / &g1) * (c / &g2), (b / &g2) * (d / &g1))
}

/// Quotient; `None` for a zero divisor.
pub fn div_fast(x: &Rational, y: &Rational) -> Option<Rational> {
    if y.is_zero() {
        return None;
    }
    let inv = if y.numer().is_negative() {
        Rational::new_raw(-y.denom(), -y.numer())
    } else {
        Rational::new_raw(y.denom().clone(), y.numer().clone())
    };
    Some(mul_fast(x, &inv))
}

/// Shorthand for `n / d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid fraction {:?}: expected \"num\" or \"num/den\"", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"n"` or `"n/d"` with optional sign. Decimal notation is rejected:
/// fractions are the only exact input format.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let parse = |x: &str| -> Result<BigInt, ParseRationalError> {
        if x.is_empty() || x.contains(|c: char| !(c.is_ascii_digit() || c == '-' || c == '+')) {
            return Err(err());
        }
        x.parse::<BigInt>().map_err(|_| err())
    };
    let n = parse(n)?;
    let d = parse(d)?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// `num/den`, or just `num` for integers.
pub fn fraction_string(r: &Rational) -> String {
    r.to_string()
}

/// Decimal expansion truncated toward zero after `digits` fractional digits.
pub fn truncate_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.abs() * Rational::from_integer(scale.clone())).to_integer();
    let neg = r.is_negative() && !scaled.is_zero();
    format_scaled(&scaled, digits, neg)
}

/// Renders `|scaled| / 10^digits` with a sign.
pub(crate) fn format_scaled(scaled: &BigInt, digits: usize, negative: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let (ip, fp) = scaled.abs().div_rem(&scale);
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        let f = fp.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale by bit lengths first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        r / Rational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * Rational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Largest `k / 2^bits` not exceeding `r`.
pub fn dyadic_floor(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let m = (r * Rational::from_integer(scale.clone())).floor().to_integer();
    Rational::new(m, scale)
}

/// Simple midpoint.
pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("34").unwrap(), int(34));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("3/-4").unwrap(), rat(-3, 4));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1.5", "1/0", "a/b", "1//2", "/3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_form() {
        let r = rat(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        assert_eq!(fraction_string(&r), "-3/4");
        assert_eq!(fraction_string(&int(5)), "5");
    }

    #[test]
    fn truncation() {
        assert_eq!(truncate_decimal(&rat(2, 3), 4), "0.6666");
        assert_eq!(truncate_decimal(&rat(-2, 3), 2), "-0.66");
        assert_eq!(truncate_decimal(&rat(1, 200), 2), "0.00");
        assert_eq!(truncate_decimal(&int(7), 0), "7");
        assert_eq!(truncate_decimal(&rat(1, 20), 3), "0.050");
    }

    #[test]
    fn f64_of_huge_values() {
        let big = Rational::new(BigInt::one() << 2000usize, BigInt::from(3) << 1998usize);
        assert!((to_f64(&big) - 4.0 / 3.0).abs() < 1e-12);
    }
}
