use super::{LynessError, Params, Point};
use crate::exact::{reduced, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;

/// Coefficient grid of `xy V(x, y)`: entry `[i][j]` multiplies `x^i y^j`.
pub type InvariantTerms = [[Rational; 3]; 3];

/// `xy V_{b,a}` for `k = 2` and `xy V_{c,b,a}` for `k = 3`.
pub fn invariant_terms(p: &Params) -> InvariantTerms {
    let z = || Rational::from_integer(0.into());
    let mut n: InvariantTerms = Default::default();
    for row in n.iter_mut() {
        for e in row.iter_mut() {
            *e = z();
        }
    }
    let (a, b) = (p.a().clone(), p.b().clone());
    match p.c() {
        None => {
            n[2][1] = a.clone();
            n[1][2] = b.clone();
            n[2][0] = b.clone();
            n[0][2] = a.clone();
            n[1][0] = &b * &b + &a;
            n[0][1] = &b + &a * &a;
            n[0][0] = &a * &b;
        }
        Some(c) => {
            n[2][1] = c.clone();
            n[1][2] = a.clone();
            n[2][0] = b.clone();
            n[0][2] = b.clone();
            n[1][0] = &a + &b * c;
            n[0][1] = c + &a * &b;
            n[0][0] = &a * c;
        }
    }
    n
}

/// Composed Lyness map over one coefficient period, with coefficients
/// converted once to the scalar backend.
#[derive(Clone, Debug)]
pub struct LynessMap<S: Scalar> {
    params: Params,
    coeffs: Vec<S>,
    terms: Vec<((usize, usize), S)>,
}

fn require_q_plus<S: Scalar>(z: &Point<S>) -> Result<(), LynessError> {
    for v in [&z.x, &z.y] {
        match v.sign() {
            Some(Ordering::Greater) => {}
            Some(_) => {
                return Err(LynessError::Domain(format!(
                    "point ({}, {}) is outside the open positive quadrant",
                    z.x.decimal(12),
                    z.y.decimal(12)
                )))
            }
            None => return Err(LynessError::Uncertain(v.precision_bits())),
        }
    }
    Ok(())
}

fn div<S: Scalar>(n: &S, d: &S) -> Result<S, LynessError> {
    n.checked_div(d).ok_or_else(|| match d.sign() {
        None => LynessError::Uncertain(d.precision_bits()),
        Some(_) => LynessError::Domain("division by zero".into()),
    })
}

impl<S: Scalar> LynessMap<S> {
    pub fn new(params: &Params, ctx: S::Ctx) -> Self {
        let coeffs = params.coeffs().iter().map(|c| S::from_rational(c, ctx)).collect();
        let n = invariant_terms(params);
        let mut terms = Vec::new();
        for (i, row) in n.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    terms.push(((i, j), S::from_rational(c, ctx)));
                }
            }
        }
        LynessMap { params: params.clone(), coeffs, terms }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `F_α(x, y) = (y, (α + y)/x)` with `α` the `i`-th coefficient.
    pub fn step(&self, i: usize, z: &Point<S>) -> Result<Point<S>, LynessError> {
        require_q_plus(z)?;
        let y = div(&self.coeffs[i].add(&z.y), &z.x)?;
        Ok(Point::new(z.y.clone(), y))
    }

    /// The composed map via its closed form.
    pub fn apply(&self, z: &Point<S>) -> Result<Point<S>, LynessError> {
        require_q_plus(z)?;
        if let (Some(x), Some(y)) = (z.x.as_exact(), z.y.as_exact()) {
            let (u, v) = apply_exact(self.params.coeffs(), x, y);
            let ctx = z.x.ctx();
            return Ok(Point::new(S::from_rational(&u, ctx), S::from_rational(&v, ctx)));
        }
        let (x, y) = (&z.x, &z.y);
        let a = &self.coeffs[0];
        let b = &self.coeffs[1];
        let xy = x.mul(y);
        let s = a.add(&b.mul(x)).add(y);
        match self.coeffs.get(2) {
            None => Ok(Point::new(div(&a.add(y), x)?, div(&s, &xy)?)),
            Some(c) => {
                let ny = s.add(&c.mul(&xy));
                Ok(Point::new(div(&s, &xy)?, div(&ny, &y.mul(&a.add(y)))?))
            }
        }
    }

    /// The composed map as `k` successive one-step maps.
    pub fn apply_by_steps(&self, z: &Point<S>) -> Result<Point<S>, LynessError> {
        let mut w = z.clone();
        for i in 0..self.coeffs.len() {
            w = self.step(i, &w)?;
        }
        Ok(w)
    }

    /// First integral of the composed map.
    pub fn invariant(&self, z: &Point<S>) -> Result<S, LynessError> {
        require_q_plus(z)?;
        let ctx = z.x.ctx();
        let xs = powers(&z.x, ctx);
        let ys = powers(&z.y, ctx);
        let mut acc = S::from_rational(&Rational::from_integer(0.into()), ctx);
        for ((i, j), c) in &self.terms {
            acc = acc.add(&c.mul(&xs[*i]).mul(&ys[*j]));
        }
        div(&acc, &z.x.mul(&z.y))
    }

    /// Whether `V(z) = h`, decided exactly; `None` for inexact scalars.
    pub fn on_level(&self, z: &Point<S>, h: &S) -> Option<bool> {
        let (x, y, h) = (z.x.as_exact()?, z.y.as_exact()?, h.as_exact()?);
        Some(on_level_exact(&self.params, x, y, h))
    }

    /// Differential of the composed map at `z`, by the chain rule over the
    /// one-step differentials `[[0, 1], [-(α + y)/x^2, 1/x]]`.
    pub fn jacobian_at(&self, z: &Point<S>) -> Result<Matrix2<S>, LynessError> {
        let ctx = z.x.ctx();
        let mut j = Matrix2::identity(ctx);
        let mut w = z.clone();
        for i in 0..self.coeffs.len() {
            let d = self.step_jacobian(i, &w)?;
            j = d.mul(&j);
            w = self.step(i, &w)?;
        }
        Ok(j)
    }

    /// Differential of the `i`-th one-step map at `z`.
    pub fn step_jacobian(&self, i: usize, z: &Point<S>) -> Result<Matrix2<S>, LynessError> {
        require_q_plus(z)?;
        let ctx = z.x.ctx();
        let zero = S::from_rational(&Rational::from_integer(0.into()), ctx);
        let one = S::from_rational(&Rational::from_integer(1.into()), ctx);
        let num = self.coeffs[i].add(&z.y);
        let m21 = zero.sub(&div(&num, &z.x.mul(&z.x))?);
        let m22 = div(&one, &z.x)?;
        Ok(Matrix2 { m: [[zero, one], [m21, m22]] })
    }
}

fn powers<S: Scalar>(v: &S, ctx: S::Ctx) -> [S; 3] {
    let one = S::from_rational(&Rational::from_integer(1.into()), ctx);
    [one, v.clone(), v.mul(v)]
}

/// Row-major 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2<S> {
    pub m: [[S; 2]; 2],
}

impl<S: Scalar> Matrix2<S> {
    pub fn identity(ctx: S::Ctx) -> Self {
        let z = S::from_rational(&Rational::from_integer(0.into()), ctx);
        let o = S::from_rational(&Rational::from_integer(1.into()), ctx);
        Matrix2 { m: [[o.clone(), z.clone()], [z, o]] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.m[i][0].mul(&o.m[0][j]).add(&self.m[i][1].mul(&o.m[1][j]));
        Matrix2 { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn det(&self) -> S {
        self.m[0][0].mul(&self.m[1][1]).sub(&self.m[0][1].mul(&self.m[1][0]))
    }

    pub fn trace(&self) -> S {
        self.m[0][0].add(&self.m[1][1])
    }
}

/// Closed form on numerators and denominators with `x = p/q`, `y = r/s`
/// in lowest terms, reducing each coordinate once.
fn apply_exact(coeffs: &[Rational], x: &Rational, y: &Rational) -> (Rational, Rational) {
    let (p, q, r, s) = (x.numer(), x.denom(), y.numer(), y.denom());
    let (a1, a2) = (coeffs[0].numer(), coeffs[0].denom());
    let (b1, b2) = (coeffs[1].numer(), coeffs[1].denom());
    let qs = q * s;
    let pr = p * r;
    // a + y = ay / (a2 s)
    let ay = a1 * s + a2 * r;
    // a + bx + y = sn / (a2 b2 q s)
    let sn = a1 * b2 * &qs + b1 * a2 * p * s + a2 * b2 * q * r;
    match coeffs.get(2) {
        None => (reduced(&ay * q, a2 * s * p), reduced(sn, a2 * b2 * pr)),
        Some(c) => {
            let (c1, c2) = (c.numer(), c.denom());
            let num = (&sn * c2 + c1 * a2 * b2 * &pr) * s;
            let den = c2 * b2 * q * r * &ay;
            (reduced(sn, a2 * b2 * &pr), reduced(num, den))
        }
    }
}

/// `xyV(x, y) = h xy` cleared of all denominators.
fn on_level_exact(params: &Params, x: &Rational, y: &Rational, h: &Rational) -> bool {
    let n = invariant_terms(params);
    let (p, q, r, s) = (x.numer(), x.denom(), y.numer(), y.denom());
    let mut l = h.denom().clone();
    for c in n.iter().flatten() {
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    let pw = |u: &BigInt, v: &BigInt| [v * v, u * v, u * u];
    let (xs, ys) = (pw(p, q), pw(r, s));
    let mut lhs = BigInt::zero();
    for (i, row) in n.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let k = c.numer() * (&l / c.denom());
                lhs += k * &xs[i] * &ys[j];
            }
        }
    }
    let rhs = h.numer() * (&l / h.denom()) * &xs[1] * &ys[1];
    lhs == rhs
}

/// `F_α(z)` over the rationals.
pub fn step(alpha: &Rational, z: &Point<Rational>) -> Result<Point<Rational>, LynessError> {
    if num_traits::Signed::is_negative(alpha) {
        return Err(LynessError::InvalidParams(format!("coefficient {alpha} is negative")));
    }
    require_q_plus(z)?;
    Ok(Point::new(z.y.clone(), (alpha + &z.y) / &z.x))
}

/// The composed map `F_{b,a}` or `F_{c,b,a}` over the rationals.
pub fn composed_step(p: &Params, z: &Point<Rational>) -> Result<Point<Rational>, LynessError> {
    LynessMap::<Rational>::new(p, ()).apply(z)
}

/// `V_{b,a}(z)` or `V_{c,b,a}(z)` over the rationals.
pub fn invariant(p: &Params, z: &Point<Rational>) -> Result<Rational, LynessError> {
    LynessMap::<Rational>::new(p, ()).invariant(z)
}

/// Exact differential of the composed map.
pub fn jacobian_at(p: &Params, z: &Point<Rational>) -> Result<Matrix2<Rational>, LynessError> {
    LynessMap::<Rational>::new(p, ()).jacobian_at(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, BallReal};

    fn pt(x: Rational, y: Rational) -> Point<Rational> {
        Point::new(x, y)
    }

    #[test]
    fn exact_closed_form_matches_generic_steps() {
        for p in [Params::two(rat(7, 3), rat(2, 5)).unwrap(), Params::three(rat(1, 2), rat(9, 4), rat(5, 7)).unwrap()] {
            let m = LynessMap::<Rational>::new(&p, ());
            let mut z = pt(rat(3, 11), rat(13, 6));
            for _ in 0..6 {
                let next = m.apply(&z).unwrap();
                assert_eq!(next, m.apply_by_steps(&z).unwrap());
                let h = m.invariant(&z).unwrap();
                assert_eq!(m.on_level(&next, &h), Some(true));
                assert_eq!(m.on_level(&next, &(&h + rat(1, 1000))), Some(false));
                z = next;
            }
        }
    }

    #[test]
    fn one_step_examples() {
        assert_eq!(step(&int(3), &pt(int(1), int(1))).unwrap(), pt(int(1), int(4)));
        assert_eq!(step(&int(2), &pt(int(1), int(4))).unwrap(), pt(int(4), int(6)));
        assert_eq!(step(&int(0), &pt(int(2), int(4))).unwrap(), pt(int(4), int(2)));
        assert!(matches!(step(&int(1), &pt(int(0), int(1))), Err(LynessError::Domain(_))));
    }

    #[test]
    fn composed_examples() {
        let p = Params::two(int(3), int(2)).unwrap();
        let z1 = composed_step(&p, &pt(int(1), int(1))).unwrap();
        assert_eq!(z1, pt(int(4), int(6)));
        let z2 = composed_step(&p, &z1).unwrap();
        assert_eq!(z2, pt(rat(9, 4), rat(17, 24)));
        assert_eq!(composed_step(&p, &z2).unwrap(), pt(rat(89, 54), rat(788, 153)));
        let p3 = Params::three(int(1), int(1), int(1)).unwrap();
        assert_eq!(composed_step(&p3, &pt(int(1), int(1))).unwrap(), pt(int(3), int(2)));
        let p11 = Params::two(int(1), int(1)).unwrap();
        assert_eq!(composed_step(&p11, &pt(int(1), int(1))).unwrap(), pt(int(2), int(3)));
    }

    #[test]
    fn closed_form_matches_steps() {
        for p in [Params::two(rat(1, 2), rat(3, 2)).unwrap(), Params::three(rat(1, 2), int(2), int(3)).unwrap()] {
            let m = LynessMap::<Rational>::new(&p, ());
            let z = pt(rat(7, 5), rat(2, 9));
            assert_eq!(m.apply(&z).unwrap(), m.apply_by_steps(&z).unwrap());
        }
    }

    #[test]
    fn invariant_examples() {
        let p = Params::two(int(3), int(2)).unwrap();
        assert_eq!(invariant(&p, &pt(int(1), int(1))).unwrap(), int(34));
        let q = Params::two(rat(1, 2), rat(3, 2)).unwrap();
        assert_eq!(invariant(&q, &pt(rat(149, 100), rat(173, 100))).unwrap(), rat(10655559, 1288850));
        let r = Params::three(int(1), int(1), int(1)).unwrap();
        assert_eq!(invariant(&r, &pt(int(1), int(1))).unwrap(), int(9));
    }

    #[test]
    fn jacobian_examples() {
        let p = Params::two(int(3), int(2)).unwrap();
        let m = LynessMap::<Rational>::new(&p, ());
        let z = pt(int(1), int(1));
        let d = m.step_jacobian(0, &z).unwrap();
        assert_eq!(d.m, [[int(0), int(1)], [int(-4), int(1)]]);
        let chain = m.step_jacobian(1, &m.step(0, &z).unwrap()).unwrap().mul(&d);
        assert_eq!(jacobian_at(&p, &z).unwrap(), chain);
    }

    #[test]
    fn ball_backend_agrees() {
        let p = Params::two(int(3), int(2)).unwrap();
        let m = LynessMap::<BallReal>::new(&p, 128);
        let z = Point::new(BallReal::from_int(1, 128), BallReal::from_int(1, 128));
        let z3 = m.apply(&m.apply(&m.apply(&z).unwrap()).unwrap()).unwrap();
        assert!(z3.x.contains(&rat(89, 54)) && z3.y.contains(&rat(788, 153)));
        assert!(m.invariant(&z3).unwrap().contains(&int(34)));
    }
}
