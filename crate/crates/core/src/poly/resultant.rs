//! Sylvester resultants by fraction-free (Bareiss) elimination, and
//! discriminants.

use super::dense::{BiPoly, Coeff, Poly, UniPoly, Var};
use super::PolyError;

/// Determinant by Bareiss elimination; every division is exact in an
/// integral domain.
pub fn bareiss_determinant<C: Coeff>(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    if n == 0 {
        return C::one();
    }
    let mut negate = false;
    let mut prev = C::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return C::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = C::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sylvester matrix: `deg q` shifted rows of `p` followed by `deg p`
/// shifted rows of `q`, coefficients from the leading one down.
pub fn sylvester_matrix<C: Coeff>(p: &Poly<C>, q: &Poly<C>) -> Vec<Vec<C>> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![C::zero(); size];
        for (i, c) in p.coeffs().iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![C::zero(); size];
        for (i, c) in q.coeffs().iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant with respect to the outer variable.
pub fn resultant<C: Coeff>(p: &Poly<C>, q: &Poly<C>) -> Result<C, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let m = p.degree().unwrap();
    let n = q.degree().unwrap();
    if m == 0 && n == 0 {
        return Ok(C::one());
    }
    Ok(bareiss_determinant(sylvester_matrix(p, q)))
}

/// Resultant of two bivariate polynomials eliminating `var`, which is
/// taken to be the inner variable whenever it is not the outer one.
pub fn resultant_eliminating(p: &BiPoly, q: &BiPoly, var: Var) -> Result<UniPoly, PolyError> {
    if p.var() == var {
        resultant(p, q)
    } else {
        resultant(&p.swap_vars().with_var(var), &q.swap_vars().with_var(var))
    }
}

/// Discriminant with respect to the outer variable. For a quadratic
/// `a y^2 + b y + c` this is `b^2 - 4ac`; in general
/// `(-1)^(n(n-1)/2) res(p, p') / lc(p)`.
pub fn discriminant<C: Coeff>(p: &Poly<C>) -> Result<C, PolyError> {
    let n = match p.degree() {
        None => return Err(PolyError::ZeroPolynomial),
        Some(0) => return Err(PolyError::ConstantPolynomial),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(C::one());
    }
    if n == 2 {
        let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
        return Ok(b.mul(&b).sub(&C::from_int(4).mul(&a).mul(&c)));
    }
    let r = resultant(p, &p.derivative())?;
    let q = r.exact_div(p.leading().unwrap()).expect("leading coefficient divides res(p, p')");
    Ok(if (n * (n - 1) / 2) % 2 == 1 { q.neg() } else { q })
}
