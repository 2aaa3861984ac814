use super::map::invariant_terms;
use super::{LynessError, Params, Point};
use crate::exact::{AlgebraicReal, BallReal, Rational, DEFAULT_PRECISION_CAP};
use crate::poly::{UniPoly, Var};
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Rational function `num(t) / den(t)` of the fixed-point generator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFn {
    fn poly(p: UniPoly) -> Self {
        RatFn { num: p, den: UniPoly::constant(Rational::one(), Var::T) }
    }

    fn reduced(num: UniPoly, den: UniPoly) -> Self {
        let g = num.gcd(&den);
        if g.degree().unwrap_or(0) > 0 {
            RatFn { num: num.div_rem(&g).0, den: den.div_rem(&g).0 }
        } else {
            RatFn { num, den }
        }
    }

    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(t) / d)
        }
    }

    pub fn eval_ball(&self, t: &BallReal) -> Option<BallReal> {
        self.num.eval_ball(t).checked_div(&self.den.eval_ball(t))
    }
}

/// The unique fixed point of the composed map in the open quadrant.
///
/// Both coordinates are rational functions of one algebraic generator `t`:
/// `t = ȳ` for `k = 2` (with `x̄ = ȳ² - b`) and `t = x̄` for `k = 3` (with
/// `ȳ = (b x̄ + a)/(x̄² - 1)`).
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub params: Params,
    pub t: AlgebraicReal,
    pub x_fn: RatFn,
    pub y_fn: RatFn,
    pub x: AlgebraicReal,
    pub y: AlgebraicReal,
}

fn upoly(c: Vec<Rational>) -> UniPoly {
    UniPoly::new(c, Var::T)
}

/// Defining polynomial of the generator, and the coordinates in terms of it.
fn fixed_point_system(p: &Params) -> (UniPoly, RatFn, RatFn) {
    let one = Rational::one;
    let z = Rational::zero;
    let (a, b) = (p.a().clone(), p.b().clone());
    match p.c() {
        None => {
            // P(y) = y^4 - 2b y^2 - y + b^2 - a
            let poly = upoly(vec![&b * &b - &a, -one(), -(&b + &b), z(), one()]);
            let x = RatFn::poly(upoly(vec![-b.clone(), z(), one()]));
            let y = RatFn::poly(upoly(vec![z(), one()]));
            (poly, x, y)
        }
        Some(c) => {
            // x^5 + c x^4 - 2x^3 - (2c + ab) x^2 + (1 - a^2 - b^2) x + c - ab
            let ab = &a * &b;
            let poly = upoly(vec![
                c - &ab,
                one() - &a * &a - &b * &b,
                -(c + c + &ab),
                Rational::from_integer((-2).into()),
                c.clone(),
                one(),
            ]);
            let x = RatFn::poly(upoly(vec![z(), one()]));
            let y = RatFn { num: upoly(vec![a.clone(), b.clone()]), den: upoly(vec![-one(), z(), one()]) };
            (poly, x, y)
        }
    }
}

/// Fixed point for strictly positive parameters.
pub fn fixed_point(p: &Params) -> Result<FixedPoint, LynessError> {
    p.require_positive()?;
    fixed_point_nonneg(p)
}

/// Fixed point allowing zero coefficients, where it still exists in the
/// open quadrant.
pub fn fixed_point_nonneg(p: &Params) -> Result<FixedPoint, LynessError> {
    let (poly, x_fn, y_fn) = fixed_point_system(p);
    let lower = if p.k() == 3 { Rational::one() } else { Rational::zero() };
    let roots = AlgebraicReal::roots_above(&poly, &lower)?;
    let t = roots
        .last()
        .cloned()
        .ok_or_else(|| LynessError::InvalidParams(format!("no fixed point in the open quadrant for {p}")))?;
    let x = image(&t, &x_fn)?;
    let y = image(&t, &y_fn)?;
    if x.compare_rational(&Rational::zero()) != Ordering::Greater || y.compare_rational(&Rational::zero()) != Ordering::Greater {
        return Err(LynessError::InvalidParams(format!("fixed point of {p} leaves the open quadrant")));
    }
    Ok(FixedPoint { params: p.clone(), t, x_fn, y_fn, x, y })
}

fn image(t: &AlgebraicReal, f: &RatFn) -> Result<AlgebraicReal, LynessError> {
    Ok(t.rational_image(&f.num.clone().with_var(Var::X), &f.den.clone().with_var(Var::X), DEFAULT_PRECISION_CAP)?)
}

impl FixedPoint {
    /// Ball enclosure of `(x̄, ȳ)`.
    pub fn ball(&self, prec: u32) -> Point<BallReal> {
        let t = self.t.to_ball(prec + 32).with_precision(prec);
        let x = self.x_fn.eval_ball(&t).expect("fixed point denominators do not vanish");
        let y = self.y_fn.eval_ball(&t).expect("fixed point denominators do not vanish");
        Point::new(x, y)
    }

    /// A rational point within roughly `width` of the fixed point.
    pub fn approx(&self, width: &Rational) -> Point<Rational> {
        let t = self.t.refine(width);
        let m = (t.lo() + t.hi()) / Rational::from_integer(2.into());
        let x = self.x_fn.eval(&m).expect("fixed point denominators do not vanish");
        let y = self.y_fn.eval(&m).expect("fixed point denominators do not vanish");
        Point::new(x, y)
    }

    /// The orbit `p, F_a(p), F_b(F_a(p)), ...` of the fixed point under the
    /// one-step maps, as rational functions of the generator.
    pub fn step_images(&self) -> Vec<(RatFn, RatFn)> {
        let mut out = vec![(self.x_fn.clone(), self.y_fn.clone())];
        for c in self.params.coeffs().iter().take(self.params.k() - 1) {
            let (x, y) = out.last().unwrap().clone();
            // F_α(x, y) = (y, (α + y)/x) with x = xn/xd, y = yn/yd
            let num = y.num.add(&y.den.scale(c)).mul(&x.den);
            let den = y.den.mul(&x.num);
            out.push((y.clone(), RatFn::reduced(num, den)));
        }
        out
    }

    /// x-coordinates of the fixed-point images, one per cyclic shift.
    pub fn image_xs(&self) -> Result<Vec<AlgebraicReal>, LynessError> {
        self.step_images().iter().map(|(x, _)| image(&self.t, x)).collect()
    }

    /// `V` at the fixed point as a rational function of the generator.
    pub fn level_fn(&self) -> RatFn {
        let n = invariant_terms(&self.params);
        let (xn, xd, yn, yd) = (&self.x_fn.num, &self.x_fn.den, &self.y_fn.num, &self.y_fn.den);
        let mut num = UniPoly::zero_in(Var::T);
        for (i, row) in n.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = xn.pow(i as u32).mul(&xd.pow(2 - i as u32)).mul(&yn.pow(j as u32)).mul(&yd.pow(2 - j as u32));
                num = num.add(&term.scale(c));
            }
        }
        let den = xn.mul(xd).mul(yn).mul(yd);
        RatFn::reduced(num, den)
    }
}

/// `h_c = V(p)`: the minimum of the invariant, attained at the fixed point.
pub fn critical_level(p: &Params) -> Result<AlgebraicReal, LynessError> {
    let fp = fixed_point(p)?;
    critical_level_of(&fp)
}

pub fn critical_level_of(fp: &FixedPoint) -> Result<AlgebraicReal, LynessError> {
    image(&fp.t, &fp.level_fn())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::lyness::map::LynessMap;

    #[test]
    fn symmetric_fixed_point_is_rational() {
        let fp = fixed_point(&Params::two(int(2), int(2)).unwrap()).unwrap();
        assert_eq!(fp.x.as_rational(), Some(int(2)));
        assert_eq!(fp.y.as_rational(), Some(int(2)));
    }

    #[test]
    fn proposition_two_fixed_point() {
        let p = Params::two(int(3), rat(1, 2)).unwrap();
        let fp = fixed_point(&p).unwrap();
        assert_eq!(fp.x.poly().clone().with_var(Var::Z).to_string(), "2*z^4 - 12*z^2 - 2*z + 17");
        assert_eq!(fp.x.decimal(4), "2.1513");
        // ȳ = x̄² - 3
        let y = fp.x.rational_image(&UniPoly::from_ints(&[-3, 0, 1], Var::X), &UniPoly::from_ints(&[1], Var::X), 4096).unwrap();
        assert_eq!(y, fp.y);
        let hc = critical_level(&p).unwrap();
        assert_eq!(hc.decimal(4), "17.0394");
    }

    #[test]
    fn golden_fixed_points() {
        let fp = fixed_point(&Params::three(int(1), int(1), int(1)).unwrap()).unwrap();
        assert_eq!(fp.x.decimal(9), "1.618033988");
        assert_eq!(fp.x, fp.y);
        let hc = critical_level(&Params::two(int(1), int(1)).unwrap()).unwrap();
        // 5φ
        assert_eq!(hc.decimal(6), "8.090169");
    }

    #[test]
    fn fixed_point_residual() {
        for p in [Params::two(rat(1, 2), rat(3, 2)).unwrap(), Params::three(rat(1, 2), int(2), int(3)).unwrap()] {
            let fp = fixed_point(&p).unwrap();
            let z = fp.ball(300);
            let m = LynessMap::<BallReal>::new(&p, 300);
            let w = m.apply(&z).unwrap();
            assert!(w.x.sub(&z.x).abs_upper() < rat(1, 1 << 30).pow(8));
            assert!(w.y.sub(&z.y).abs_upper() < rat(1, 1 << 30).pow(8));
        }
    }

    #[test]
    fn critical_data_section_five() {
        let p = Params::two(rat(1, 2), rat(3, 2)).unwrap();
        let fp = fixed_point(&p).unwrap();
        let close = |v: &AlgebraicReal, r: Rational| (v.to_f64() - crate::exact::rational::to_f64(&r)).abs() < 1e-9;
        assert!(close(&fp.x, rat(1493363282, 1_000_000_000)));
        assert!(close(&fp.y, rat(1730133891, 1_000_000_000)));
        assert!(close(&critical_level(&p).unwrap(), rat(8267483381, 1_000_000_000)));
    }

    #[test]
    fn zero_parameters() {
        let fp = fixed_point_nonneg(&Params::two(int(0), int(0)).unwrap()).unwrap();
        assert_eq!(fp.x.as_rational(), Some(int(1)));
        assert!(fixed_point(&Params::two(int(0), int(1)).unwrap()).is_err());
    }
}
