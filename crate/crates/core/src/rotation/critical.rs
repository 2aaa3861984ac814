use super::RotationError;
use crate::exact::{BallReal, DEFAULT_PRECISION_CAP};
use crate::lyness::{fixed_point_nonneg, LynessError, LynessMap, Params};
use std::cmp::Ordering;

/// Rotation number at the critical level, `θ/2π` for the eigenvalues
/// `e^{±iθ}` of the composed-map differential at the fixed point.
///
/// `acos(trace/2)` gives `θ ∈ (0, π)`; the counterclockwise branch is `θ`
/// when `DF e_1` turns counterclockwise from `e_1` (positive `(2,1)` entry),
/// and `2π - θ` otherwise.
pub fn rotation_at_critical(p: &Params, digits: usize) -> Result<BallReal, RotationError> {
    let fp = fixed_point_nonneg(p)?;
    let mut prec = (digits as f64 * 3.33) as u32 + 64;
    loop {
        match attempt(p, &fp, prec, digits) {
            Err(RotationError::Lyness(LynessError::Uncertain(_))) if prec < DEFAULT_PRECISION_CAP => {
                prec = (prec * 2).min(DEFAULT_PRECISION_CAP);
            }
            Err(RotationError::Lyness(LynessError::Uncertain(b))) => return Err(RotationError::PrecisionExhausted(b)),
            r => return r,
        }
    }
}

fn attempt(p: &Params, fp: &crate::lyness::FixedPoint, prec: u32, digits: usize) -> Result<BallReal, RotationError> {
    let z = fp.ball(prec);
    let m = LynessMap::<BallReal>::new(p, prec);
    let j = m.jacobian_at(&z)?;
    let half = j.trace().checked_div(&BallReal::from_int(2, prec)).expect("2 is nonzero");
    let one = BallReal::from_int(1, prec);
    for gap in [one.sub(&half), half.add(&one)] {
        match gap.sign_certain() {
            Some(Ordering::Greater) => {}
            Some(_) => return Err(RotationError::NotElliptic(format!("trace/2 = {}", half.decimal(12)))),
            None => {
                if gap.abs_upper() < crate::exact::rat(1, 1 << 20).pow(3) {
                    return Err(RotationError::NotElliptic(format!("trace/2 = {} is numerically ±1", half.decimal(12))));
                }
                return Err(LynessError::Uncertain(prec).into());
            }
        }
    }
    let theta = half.acos().ok_or(LynessError::Uncertain(prec))?;
    let two_pi = BallReal::pi(prec).mul(&BallReal::from_int(2, prec));
    let frac = theta.checked_div(&two_pi).expect("pi is nonzero");
    let rho = match j.m[1][0].sign_certain() {
        Some(Ordering::Greater) => frac,
        Some(Ordering::Less) => one.sub(&frac),
        _ => return Err(LynessError::Uncertain(prec).into()),
    };
    let tol = crate::exact::Rational::new(1.into(), num_bigint::BigInt::from(10u32).pow(digits as u32 + 1));
    if rho.radius() > tol {
        return Err(LynessError::Uncertain(prec).into());
    }
    Ok(rho)
}
