//! Real algebraic numbers as a defining polynomial plus an isolating
//! interval.

use super::ball::BallReal;
use super::rational::{dyadic_floor, format_scaled, midpoint, to_f64, truncate_decimal, Rational};
use crate::poly::dense::{BiPoly, Poly, UniPoly, Var};
use crate::poly::resultant::resultant;
use crate::poly::sturm::{isolate_all, refine_interval, sturm_count, RootInterval};
use crate::poly::PolyError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraicError {
    #[error("interval [{lo}, {hi}] does not isolate exactly one root (found {count})")]
    NotIsolating { lo: String, hi: String, count: usize },
    #[error("denominator vanishes at the algebraic number")]
    ZeroDenominator,
    #[error("precision cap reached while separating roots")]
    Unresolved,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A real root of a squarefree primitive rational polynomial.
///
/// Either `lo == hi` and the number is that rational (the polynomial is then
/// linear), or `lo < hi`, `poly(lo)` and `poly(hi)` are non-zero with
/// opposite signs, and `poly` has exactly one root in `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    poly: UniPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicReal {
    pub fn from_rational(r: &Rational) -> Self {
        let p = UniPoly::new(vec![-r.clone(), Rational::one()], Var::X).primitive();
        AlgebraicReal { poly: p, lo: r.clone(), hi: r.clone() }
    }

    /// The unique root of `p` in the closed interval `[lo, hi]`.
    pub fn from_interval(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<Self, AlgebraicError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial.into());
        }
        let sf = p.squarefree_part().with_var(p.var());
        let at_lo = sf.sign_at(lo) == Ordering::Equal;
        let inner = if lo < hi { sturm_count(&sf, lo, hi)? } else { 0 };
        let count = inner + usize::from(at_lo);
        if count != 1 {
            return Err(AlgebraicError::NotIsolating { lo: lo.to_string(), hi: hi.to_string(), count });
        }
        if at_lo {
            return Ok(Self::from_rational(lo));
        }
        if sf.sign_at(hi) == Ordering::Equal {
            return Ok(Self::from_rational(hi));
        }
        Ok(AlgebraicReal { poly: sf.primitive(), lo: lo.clone(), hi: hi.clone() }.normalized())
    }

    /// Wraps an interval produced by root isolation of the squarefree `sf`.
    pub(crate) fn from_isolated(sf: &UniPoly, iv: &RootInterval) -> Self {
        if iv.is_exact() {
            Self::from_rational(&iv.lo)
        } else {
            AlgebraicReal { poly: sf.primitive(), lo: iv.lo.clone(), hi: iv.hi.clone() }.normalized()
        }
    }

    /// Collapses a rational root to its exact form. A rational root of the
    /// primitive `p` has the shape `k / lc(p)`, so after refining below
    /// `1 / |lc|` at most one candidate remains.
    fn normalized(self) -> Self {
        if self.lo == self.hi || self.poly.degree() == Some(1) {
            return self;
        }
        let lc = self.poly.leading().expect("nonzero polynomial").abs();
        let w = lc.recip() / Rational::from_integer(2.into());
        let r = self.refine(&w);
        if let Some(q) = r.as_rational() {
            return Self::from_rational(&q);
        }
        let k = (r.lo() * &lc).floor() + Rational::one();
        let cand = &k / &lc;
        if &cand < r.hi() && r.poly.sign_at(&cand) == Ordering::Equal {
            return Self::from_rational(&cand);
        }
        r
    }

    /// All distinct real roots of `p` in `(lo, hi)`, ascending.
    pub fn roots_in(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<Vec<Self>, AlgebraicError> {
        let (sf, ivs) = crate::poly::sturm::isolate_roots(p, lo, hi)?;
        Ok(ivs.iter().map(|iv| Self::from_isolated(&sf, iv)).collect())
    }

    /// All distinct real roots of `p` greater than `lo`, ascending.
    pub fn roots_above(p: &UniPoly, lo: &Rational) -> Result<Vec<Self>, AlgebraicError> {
        let (sf, ivs) = crate::poly::sturm::isolate_roots_above(p, lo)?;
        Ok(ivs.iter().map(|iv| Self::from_isolated(&sf, iv)).collect())
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.lo == self.hi {
            return Some(self.lo.clone());
        }
        if self.poly.degree() == Some(1) {
            let c = self.poly.coeffs();
            return Some(-&c[0] / &c[1]);
        }
        None
    }

    fn interval(&self) -> RootInterval {
        RootInterval { lo: self.lo.clone(), hi: self.hi.clone() }
    }

    fn with_interval(&self, iv: RootInterval) -> Self {
        if iv.is_exact() {
            Self::from_rational(&iv.lo)
        } else {
            AlgebraicReal { poly: self.poly.clone(), lo: iv.lo, hi: iv.hi }
        }
    }

    /// Same number with an isolating interval no wider than `width`; the new
    /// interval is contained in the old one.
    pub fn refine(&self, width: &Rational) -> Self {
        assert!(width.is_positive(), "refinement width must be positive");
        if let Some(r) = self.as_rational() {
            return Self::from_rational(&r);
        }
        if &self.width() <= width {
            return self.clone();
        }
        let target_bits = bits_for(width);
        self.with_interval(self.newton_refine(target_bits))
    }

    /// Refines to width at most `2^-bits`, using Newton steps with a
    /// bisection fallback; every accepted interval is certified by a sign
    /// change inside the previous one.
    fn newton_refine(&self, bits: u64) -> RootInterval {
        let p = &self.poly;
        let dp = p.derivative();
        let target = Rational::new(BigInt::one(), BigInt::one() << bits as usize);
        let mut iv = self.interval();
        let s_lo = p.sign_at(&iv.lo);
        while &iv.hi - &iv.lo > target {
            let w = &iv.hi - &iv.lo;
            let m = midpoint(&iv.lo, &iv.hi);
            let d = dp.eval(&m);
            let mut advanced = false;
            if !d.is_zero() {
                let x = &m - p.eval(&m) / d;
                let wb = bits_for(&w);
                let eb = (2 * wb + 4).min(bits + 2);
                let eps = Rational::new(BigInt::one(), BigInt::one() << eb as usize);
                let xr = dyadic_floor(&x, (eb + 4) as u32);
                let (a, b) = (&xr - &eps, &xr + &eps);
                if a > iv.lo && b < iv.hi && &b - &a < w / Rational::from_integer(2.into()) {
                    let sa = p.sign_at(&a);
                    let sb = p.sign_at(&b);
                    if sa == Ordering::Equal {
                        return RootInterval { lo: a.clone(), hi: a };
                    }
                    if sb == Ordering::Equal {
                        return RootInterval { lo: b.clone(), hi: b };
                    }
                    if sa != sb {
                        iv = RootInterval { lo: a, hi: b };
                        advanced = true;
                    }
                }
            }
            if !advanced {
                let sm = p.sign_at(&m);
                match sm {
                    Ordering::Equal => return RootInterval { lo: m.clone(), hi: m },
                    s if s == s_lo => iv.lo = m,
                    _ => iv.hi = m,
                }
            }
        }
        iv
    }

    /// Exact ordering against a rational.
    pub fn compare_rational(&self, r: &Rational) -> Ordering {
        if let Some(q) = self.as_rational() {
            return q.cmp(r);
        }
        if r <= &self.lo {
            return Ordering::Greater;
        }
        if r >= &self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at(r);
        if s == Ordering::Equal {
            Ordering::Equal
        } else if s == self.poly.sign_at(&self.lo) {
            // the sign change lies to the right of r
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// Exact ordering of two algebraic numbers.
    pub fn compare(&self, o: &Self) -> Ordering {
        if let Some(q) = o.as_rational() {
            return self.compare_rational(&q);
        }
        if let Some(q) = self.as_rational() {
            return o.compare_rational(&q).reverse();
        }
        let g = self.poly.gcd(&o.poly);
        let mut a = self.clone();
        let mut b = o.clone();
        loop {
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if g.degree().unwrap_or(0) > 0 {
                let lo = a.lo.clone().max(b.lo.clone());
                let hi = a.hi.clone().min(b.hi.clone());
                // a common root inside both isolating intervals is the
                // unique root of each there
                if roots_in_open(&g, &lo, &hi) > 0 {
                    return Ordering::Equal;
                }
            }
            let wa = a.width() / Rational::from_integer(4.into());
            let wb = b.width() / Rational::from_integer(4.into());
            a = a.refine(&wa);
            b = b.refine(&wb);
            if a.as_rational().is_some() || b.as_rational().is_some() {
                return a.compare(&b);
            }
        }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        let p = self.poly.reflect().primitive();
        AlgebraicReal { poly: p, lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// Ball enclosure with radius at most about `2^-prec`.
    pub fn to_ball(&self, prec: u32) -> BallReal {
        if let Some(r) = self.as_rational() {
            return BallReal::from_rational(&r, prec);
        }
        let iv = self.newton_refine(prec as u64 + 2);
        BallReal::from_bounds(&iv.lo, &iv.hi, prec)
    }

    pub fn to_f64(&self) -> f64 {
        match self.as_rational() {
            Some(r) => to_f64(&r),
            None => to_f64(&midpoint(&self.refine(&Rational::new(BigInt::one(), BigInt::one() << 60usize)).lo, &self.hi)),
        }
    }

    /// Decimal expansion truncated toward zero.
    pub fn decimal(&self, digits: usize) -> String {
        if let Some(r) = self.as_rational() {
            return truncate_decimal(&r, digits);
        }
        if self.compare_rational(&Rational::zero()) == Ordering::Less {
            let s = self.neg().decimal(digits);
            return if s.chars().all(|c| c == '0' || c == '.') { s } else { format!("-{s}") };
        }
        let scale = Rational::from_integer(BigInt::from(10u32).pow(digits as u32));
        let mut a = self.clone();
        loop {
            let kl = (&a.lo * &scale).floor().to_integer();
            let kh = (&a.hi * &scale).floor().to_integer();
            if kl == kh {
                return format_scaled(&kl, digits, false);
            }
            if &kh - &kl == BigInt::one() {
                let grid = Rational::from_integer(kh.clone()) / &scale;
                let k = if self.compare_rational(&grid) == Ordering::Less { kl } else { kh };
                return format_scaled(&k, digits, false);
            }
            let w = a.width() / Rational::from_integer(1024.into());
            a = a.refine(&w);
        }
    }

    /// The algebraic number `num(self) / den(self)`.
    ///
    /// Its defining polynomial is the squarefree part of
    /// `res_x(p(x), t den(x) - num(x))`, with common factors of `p` and `den`
    /// removed first; the right root is selected by ball enclosure.
    pub fn rational_image(&self, num: &UniPoly, den: &UniPoly, max_prec: u32) -> Result<Self, AlgebraicError> {
        if let Some(r) = self.as_rational() {
            let d = den.eval(&r);
            if d.is_zero() {
                return Err(AlgebraicError::ZeroDenominator);
            }
            return Ok(Self::from_rational(&(num.eval(&r) / d)));
        }
        let g = self.poly.gcd(den);
        let mut p = self.poly.clone();
        if g.degree().unwrap_or(0) > 0 {
            if g.sign_at(&self.lo) != g.sign_at(&self.hi) || sturm_count(&g, &self.lo, &self.hi)? > 0 {
                return Err(AlgebraicError::ZeroDenominator);
            }
            p = p.div_rem(&g).0;
        }
        let n = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        let coeffs: Vec<UniPoly> = (0..=n)
            .map(|i| UniPoly::new(vec![-num.coeff(i), den.coeff(i)], Var::T))
            .collect();
        let pt = p.lift(Var::T);
        let q: BiPoly = Poly::new(coeffs, Var::X);
        let image = resultant(&pt, &q)?;
        let mut prec = 64u32;
        loop {
            let x = self.to_ball(prec);
            let nb = num.eval_ball(&x);
            let db = den.eval_ball(&x);
            if let Some(v) = nb.checked_div(&db) {
                if let Some(r) = Self::from_enclosure(&image, &v.lower(), &v.upper())? {
                    return Ok(r);
                }
            }
            if prec >= max_prec {
                return Err(AlgebraicError::Unresolved);
            }
            prec = (prec * 2).min(max_prec);
        }
    }

    /// The unique root of `p` meeting `[l, u]`, or `None` if there is not
    /// exactly one.
    pub fn from_enclosure(p: &UniPoly, l: &Rational, u: &Rational) -> Result<Option<Self>, AlgebraicError> {
        let (sf, roots) = isolate_all(p)?;
        let w = u - l;
        let mut hits = Vec::new();
        for iv in &roots {
            let iv = if w.is_positive() { refine_interval(&sf, iv, &w) } else { iv.clone() };
            if &iv.hi >= l && &iv.lo <= u {
                hits.push(iv);
            }
        }
        Ok(if hits.len() == 1 { Some(Self::from_isolated(&sf, &hits[0])) } else { None })
    }
}

fn roots_in_open(g: &UniPoly, lo: &Rational, hi: &Rational) -> usize {
    let n = sturm_count(g, lo, hi).unwrap_or(0);
    n - usize::from(n > 0 && g.sign_at(hi) == Ordering::Equal)
}

/// Smallest `k` with `2^-k <= w`.
fn bits_for(w: &Rational) -> u64 {
    let nb = w.numer().bits() as i64;
    let db = w.denom().bits() as i64;
    (db - nb + 1).max(0) as u64
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, o: &Self) -> bool {
        self.compare(o) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, o: &Self) -> Ordering {
        self.compare(o)
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "root of {} in ({}, {})", self.poly, self.lo, self.hi),
        }
    }
}

impl Serialize for AlgebraicReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlgebraicReal", 4)?;
        st.serialize_field("decimal", &self.decimal(12))?;
        st.serialize_field("defining_poly", &self.poly.to_string())?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn p(c: &[i64], v: Var) -> UniPoly {
        UniPoly::from_ints(c, v)
    }

    fn sqrt2() -> AlgebraicReal {
        AlgebraicReal::from_interval(&p(&[-2, 0, 1], Var::Y), &int(1), &int(2)).unwrap()
    }

    fn prop2_z() -> AlgebraicReal {
        AlgebraicReal::from_interval(&p(&[17, -2, -12, 0, 2], Var::Z), &int(2), &int(3)).unwrap()
    }

    #[test]
    fn refine_sqrt2() {
        let r = sqrt2().refine(&rat(1, 100));
        assert!(r.width() <= rat(1, 100));
        assert!(r.lo() < &rat(14142, 10000) && r.hi() > &rat(14142, 10000));
        assert!(r.lo() >= &int(1) && r.hi() <= &int(2));
    }

    #[test]
    fn refine_prop2_root() {
        let z = prop2_z().refine(&rat(1, 10_000));
        assert!(z.width() <= rat(1, 10_000));
        assert_eq!(z.decimal(4), "2.1513");
    }

    #[test]
    fn rational_root_collapses() {
        let r = AlgebraicReal::from_interval(&p(&[-3, 1], Var::Y), &int(0), &int(10)).unwrap();
        assert_eq!(r.as_rational(), Some(int(3)));
        assert_eq!(r.refine(&rat(1, 10)).lo(), &int(3));
    }

    #[test]
    fn comparisons() {
        assert_eq!(sqrt2().compare_rational(&rat(3, 2)), Ordering::Less);
        assert_eq!(prop2_z().compare_rational(&int(2)), Ordering::Greater);
        let three = AlgebraicReal::from_interval(&p(&[-3, 1], Var::Y), &int(0), &int(10)).unwrap();
        assert_eq!(three.compare_rational(&int(3)), Ordering::Equal);
        // sqrt2 via a different polynomial: x^4 - 4
        let other = AlgebraicReal::from_interval(&p(&[-4, 0, 0, 0, 1], Var::X), &rat(13, 10), &rat(15, 10)).unwrap();
        assert_eq!(sqrt2().compare(&other), Ordering::Equal);
        assert!(sqrt2() < prop2_z());
    }

    #[test]
    fn not_isolating_is_rejected() {
        assert!(AlgebraicReal::from_interval(&p(&[-6, 11, -6, 1], Var::X), &int(0), &int(10)).is_err());
    }

    #[test]
    fn balls_and_decimals() {
        let b = sqrt2().to_ball(200);
        assert!(b.radius() < rat(1, 1 << 30).pow(6));
        assert!(b.lower() * b.lower() < int(2) && b.upper() * b.upper() > int(2));
        assert_eq!(sqrt2().decimal(9), "1.414213562");
        assert_eq!(sqrt2().neg().decimal(3), "-1.414");
    }

    #[test]
    fn image_of_sqrt2() {
        // (x + 1) / (x - 1) at sqrt2 is 3 + 2 sqrt2
        let num = p(&[1, 1], Var::X);
        let den = p(&[-1, 1], Var::X);
        let v = sqrt2().rational_image(&num, &den, 4096).unwrap();
        assert_eq!(v.decimal(6), "5.828427");
        assert_eq!(v.poly().degree(), Some(2));
        let zero_den = sqrt2().rational_image(&num, &p(&[-2, 0, 1], Var::X), 4096);
        assert_eq!(zero_den.unwrap_err(), AlgebraicError::ZeroDenominator);
    }
}
