use crate::exact::ball::BallReal;
use crate::exact::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Variable tag used for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Var {
    #[default]
    X,
    Y,
    H,
    Z,
    T,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
            Var::H => "h",
            Var::Z => "z",
            Var::T => "t",
        })
    }
}

/// Integral domain in which polynomial coefficients live.
///
/// `exact_div` returns `None` unless the division is exact; Bareiss
/// elimination and exact polynomial quotients rely on it.
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, o: &Self) -> Option<Self>;
    /// Text for use as a coefficient; `atomic` is false when the rendering
    /// needs parentheses before a monomial.
    fn render(&self) -> (String, bool);
    /// Sign of the rendering's leading term, used to print `a - b`.
    fn is_negative_term(&self) -> bool;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn render(&self) -> (String, bool) {
        (self.to_string(), true)
    }
    fn is_negative_term(&self) -> bool {
        self.is_negative()
    }
}

/// Dense polynomial in one variable, `coeffs[i]` multiplying `var^i`.
///
/// The coefficient list never ends in a zero; the zero polynomial is the
/// empty list. The variable tag only affects rendering and is ignored by
/// equality.
#[derive(Clone, Debug)]
pub struct Poly<C> {
    coeffs: Vec<C>,
    var: Var,
}

/// Univariate polynomial over the rationals.
pub type UniPoly = Poly<Rational>;
/// Polynomial in an outer variable whose coefficients are polynomials in an
/// inner one (here: `x` over `h`).
pub type BiPoly = Poly<UniPoly>;

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: Coeff> Poly<C> {
    pub fn new(mut coeffs: Vec<C>, var: Var) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, var }
    }

    pub fn zero_in(var: Var) -> Self {
        Poly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: C, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// `var`
    pub fn identity(var: Var) -> Self {
        Self::new(vec![C::zero(), C::one()], var)
    }

    pub fn monomial(c: C, deg: usize, var: Var) -> Self {
        let mut v = vec![C::zero(); deg];
        v.push(c);
        Self::new(v, var)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    fn pick_var(&self, o: &Self) -> Var {
        if self.degree().unwrap_or(0) == 0 {
            o.var
        } else {
            self.var
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        Self::new(v, self.pick_var(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect();
        Self::new(v, self.pick_var(o))
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), var: self.var }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero_in(self.pick_var(o));
        }
        let mut v = vec![C::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v, self.pick_var(o))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.var)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::constant(C::one(), self.var);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&C::from_int(i as i64)))
            .collect();
        Self::new(v, self.var)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    /// Composition `self(q)`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero_in(self.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone(), q.var));
        }
        acc.with_var(q.var)
    }

    /// Exact quotient `self / d`, `None` if `d` does not divide `self`.
    pub fn exact_quotient(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero_in(self.var));
        }
        let ld = d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let n = self.degree().unwrap();
        if n < dd {
            return None;
        }
        let mut q = vec![C::zero(); n - dd + 1];
        for k in (0..=(n - dd)).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.exact_div(ld)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(q, self.var))
        } else {
            None
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect(), self.var)
    }
}

impl<C: Coeff> Coeff for Poly<C> {
    fn zero() -> Self {
        Poly::zero_in(Var::default())
    }
    fn one() -> Self {
        Poly::constant(C::one(), Var::default())
    }
    fn from_int(n: i64) -> Self {
        Poly::constant(C::from_int(n), Var::default())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        self.exact_quotient(o)
    }
    fn render(&self) -> (String, bool) {
        let s = self.to_string();
        let atomic = self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1;
        (s, atomic)
    }
    fn is_negative_term(&self) -> bool {
        self.leading().is_some_and(|c| c.is_negative_term())
    }
}

impl<C: Coeff> fmt::Display for Poly<C> {
    /// Monomials in decreasing degree, e.g. `2*z^4 - 12*z^2 - 2*z + 17`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (body, atomic) = c.render();
            let neg = atomic && c.is_negative_term();
            let mag = if neg { body.trim_start_matches('-').to_string() } else { body };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let coef = if !atomic { format!("({mag})") } else { mag };
            match i {
                0 => f.write_str(&coef)?,
                _ => {
                    if coef != "1" {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        write!(f, "{}", self.var)?;
                    } else {
                        write!(f, "{}^{}", self.var, i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect(), var)
    }

    /// Euclidean division over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let ld = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let n = match self.degree() {
            Some(n) if n >= dd => n,
            _ => return (Self::zero_in(self.var), self.clone()),
        };
        let mut q = vec![<Rational as Zero>::zero(); n - dd + 1];
        for k in (0..=(n - dd)).rev() {
            let top = &rem[k + dd];
            if Zero::is_zero(top) {
                continue;
            }
            let c = top / &ld;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &c * dc;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q, self.var), Self::new(rem, self.var))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, made primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g);
        q.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect(), self.var)
    }

    pub fn sign_at(&self, t: &Rational) -> Ordering {
        let v = self.eval(t);
        if v.is_positive() {
            Ordering::Greater
        } else if v.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    pub fn eval_ball(&self, t: &BallReal) -> BallReal {
        let prec = t.precision();
        let mut acc = BallReal::from_int(0, prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(&BallReal::from_rational(c, prec));
        }
        acc
    }

    /// Every real root satisfies `|r| < bound`.
    pub fn cauchy_bound(&self) -> Rational {
        let l = self.leading().expect("zero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(<Rational as Zero>::zero);
        m + <Rational as One>::one()
    }

    /// `self(-x)`
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
            self.var,
        )
    }

    /// View as a bivariate polynomial with constant inner coefficients.
    pub fn lift(&self, inner: Var) -> BiPoly {
        Poly::new(self.coeffs.iter().map(|c| UniPoly::constant(c.clone(), inner)).collect(), self.var)
    }
}

impl BiPoly {
    /// Substitutes a rational value for the inner variable.
    pub fn eval_inner(&self, t: &Rational) -> UniPoly {
        Poly::new(self.coeffs.iter().map(|c| c.eval(t)).collect(), self.var)
    }

    /// Largest inner degree.
    pub fn inner_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    pub fn inner_var(&self) -> Var {
        self.coeffs.iter().find(|c| c.degree().unwrap_or(0) > 0).map(|c| c.var).unwrap_or(Var::H)
    }

    /// Exchanges the roles of the outer and inner variables.
    pub fn swap_vars(&self) -> BiPoly {
        let inner = self.inner_var();
        let n = self.inner_degree() + 1;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let v: Vec<Rational> = self.coeffs.iter().map(|c| c.coeff(j)).collect();
            out.push(UniPoly::new(v, self.var));
        }
        Poly::new(out, inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c, Var::X)
    }

    #[test]
    fn normalization_drops_trailing_zeros() {
        let q = p(&[1, 2, 0, 0]);
        assert_eq!(q.degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn arithmetic_and_division() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.exact_quotient(&b).unwrap(), q);
        assert!(a.exact_quotient(&p(&[2, 1])).is_none());
        assert_eq!(b.mul(&q), a);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(a.gcd(&a.derivative()), p(&[-1, 1]));
        assert_eq!(a.squarefree_part(), p(&[-2, 1, 1]));
        assert!(!a.is_squarefree());
        assert!(p(&[-2, 0, 1]).is_squarefree());
    }

    #[test]
    fn primitive_form() {
        let q = UniPoly::new(vec![rat(1, 2), rat(-3, 4), rat(-1, 6)], Var::X);
        assert_eq!(q.primitive(), p(&[-6, 9, 2]));
    }

    #[test]
    fn rendering() {
        assert_eq!(UniPoly::from_ints(&[17, -2, -12, 0, 2], Var::Z).to_string(), "2*z^4 - 12*z^2 - 2*z + 17");
        assert_eq!(UniPoly::new(vec![rat(-11, 4), int(-1), int(-1), int(0), int(1)], Var::Y).to_string(), "y^4 - y^2 - y - 11/4");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
        let bi: BiPoly = Poly::new(vec![UniPoly::from_ints(&[1, 1], Var::H), UniPoly::from_ints(&[0, -1], Var::H)], Var::X);
        assert_eq!(bi.to_string(), "-h*x + (h + 1)");
    }

    #[test]
    fn swap_vars_round_trip() {
        let bi: BiPoly = Poly::new(
            vec![UniPoly::from_ints(&[1, 2], Var::H), UniPoly::from_ints(&[0, 0, 3], Var::H)],
            Var::X,
        );
        let s = bi.swap_vars();
        assert_eq!(s.var(), Var::H);
        assert_eq!(s.swap_vars(), bi);
        assert_eq!(bi.eval_inner(&int(2)), UniPoly::from_ints(&[5, 12], Var::X));
    }

    #[test]
    fn cauchy_bound_encloses_roots() {
        let q = p(&[-6, 11, -6, 1]);
        assert!(q.cauchy_bound() > int(3));
    }
}
