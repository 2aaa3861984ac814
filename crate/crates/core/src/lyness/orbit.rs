use super::map::LynessMap;
use super::{LynessError, Params, Point, StartPoint};
use crate::exact::{BallReal, Rational, Scalar};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt::Write as _;

/// Points `z_0, ..., z_n` of the composed map with their conserved level.
#[derive(Clone, Debug)]
pub struct Orbit<S> {
    pub params: Params,
    pub points: Vec<Point<S>>,
    pub level: S,
    /// Least `m` with `z_m = z_0`; only ever set by the exact backend.
    pub period: Option<usize>,
}

/// Exact orbit of `n` composed steps.
pub fn orbit(p: &Params, z0: &Point<Rational>, n: usize) -> Result<Orbit<Rational>, LynessError> {
    let m = LynessMap::<Rational>::new(p, ());
    let level = m.invariant(z0)?;
    let mut points = Vec::with_capacity(n + 1);
    points.push(z0.clone());
    let mut period = None;
    for j in 1..=n {
        let z = m.apply(&points[j - 1])?;
        if period.is_none() && &z == z0 {
            period = Some(j);
        }
        points.push(z);
    }
    Ok(Orbit { params: p.clone(), points, level, period })
}

/// Ball orbit of `n` composed steps. Starts at `prec` bits and doubles the
/// precision (replaying from `z_0`) whenever a sign cannot be certified.
pub fn orbit_ball(p: &Params, z0: &StartPoint, n: usize, prec: u32, cap: u32) -> Result<Orbit<BallReal>, LynessError> {
    z0.require_positive()?;
    let mut prec = prec;
    loop {
        match orbit_ball_at(p, z0, n, prec) {
            Err(LynessError::Uncertain(_)) if prec < cap => prec = (prec * 2).min(cap),
            r => return r,
        }
    }
}

fn orbit_ball_at(p: &Params, z0: &StartPoint, n: usize, prec: u32) -> Result<Orbit<BallReal>, LynessError> {
    let m = LynessMap::<BallReal>::new(p, prec);
    let start = z0.to_ball(prec);
    let level = m.invariant(&start)?;
    let mut points = Vec::with_capacity(n + 1);
    points.push(start);
    for j in 1..=n {
        let z = m.apply(&points[j - 1])?;
        points.push(z);
    }
    Ok(Orbit { params: p.clone(), points, level, period: None })
}

impl<S: Scalar> Orbit<S> {
    /// Period of the sequence `{x_n}` implied by the composed-map period:
    /// `k` times the latter, with no minimality claim.
    pub fn sequence_period(&self) -> Option<usize> {
        self.period.map(|q| q * self.params.k())
    }

    /// Checks `V(z_j) = level` for every point: exactly for rationals, by
    /// ball overlap otherwise.
    pub fn is_conserved(&self) -> Result<bool, LynessError> {
        let ctx = self.level.ctx();
        let m = LynessMap::<S>::new(&self.params, ctx);
        for z in &self.points {
            if let Some(on) = m.on_level(z, &self.level) {
                if !on {
                    return Ok(false);
                }
                continue;
            }
            let v = m.invariant(z)?;
            let ok = match v.exact_eq(&self.level) {
                Some(eq) => eq,
                None => !matches!(v.sub(&self.level).sign(), Some(Ordering::Less | Ordering::Greater)),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Serialize)]
struct PointRecord {
    j: usize,
    x: String,
    y: String,
}

#[derive(Serialize)]
struct OrbitRecord<'a> {
    params: &'a Params,
    level: String,
    period: Option<usize>,
    sequence_period: Option<usize>,
    points: Vec<PointRecord>,
}

impl Orbit<Rational> {
    /// Columns `j,x_num,x_den,y_num,y_den`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,x_num,x_den,y_num,y_den\n");
        for (j, z) in self.points.iter().enumerate() {
            let _ = writeln!(s, "{},{},{},{},{}", j, z.x.numer(), z.x.denom(), z.y.numer(), z.y.denom());
        }
        s
    }

    /// Exact fractions as strings.
    pub fn to_json(&self) -> serde_json::Value {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(j, z)| PointRecord { j, x: z.x.to_string(), y: z.y.to_string() })
            .collect();
        let rec = OrbitRecord {
            params: &self.params,
            level: self.level.to_string(),
            period: self.period,
            sequence_period: self.sequence_period(),
            points,
        };
        serde_json::to_value(rec).expect("orbit record serializes")
    }
}

impl Orbit<BallReal> {
    /// Columns `j,x,y` with midpoints truncated to `digits` decimals.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut s = String::from("j,x,y\n");
        for (j, z) in self.points.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", j, z.x.decimal(digits), z.y.decimal(digits));
        }
        s
    }

    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(j, z)| PointRecord { j, x: z.x.decimal(digits), y: z.y.decimal(digits) })
            .collect();
        let rec = OrbitRecord { params: &self.params, level: self.level.decimal(digits), period: None, sequence_period: None, points };
        serde_json::to_value(rec).expect("orbit record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn period_five_for_unit_parameters() {
        let p = Params::two(int(1), int(1)).unwrap();
        let o = orbit(&p, &Point::new(int(1), int(1)), 10).unwrap();
        assert_eq!(o.period, Some(5));
        assert_eq!(o.sequence_period(), Some(10));
        assert_eq!(o.points[5], o.points[0]);
    }

    #[test]
    fn worked_orbit_is_conserved() {
        let p = Params::two(int(3), int(2)).unwrap();
        let o = orbit(&p, &Point::new(int(1), int(1)), 3).unwrap();
        assert_eq!(o.level, int(34));
        assert_eq!(o.points[3], Point::new(rat(89, 54), rat(788, 153)));
        assert!(o.is_conserved().unwrap());
        assert!(o.to_csv().starts_with("j,x_num,x_den,y_num,y_den\n0,1,1,1,1\n1,4,1,6,1\n"));
    }

    #[test]
    fn three_periodic_single_step() {
        let p = Params::three(int(1), int(1), int(1)).unwrap();
        let o = orbit(&p, &Point::new(int(1), int(1)), 1).unwrap();
        assert_eq!(o.points[1], Point::new(int(3), int(2)));
        assert_eq!(o.level, int(9));
        assert!(o.is_conserved().unwrap());
    }

    #[test]
    fn ball_orbit_tracks_exact_orbit() {
        let p = Params::two(int(3), int(2)).unwrap();
        let z0 = StartPoint::rational(int(1), int(1));
        let b = orbit_ball(&p, &z0, 50, 256, 4096).unwrap();
        let e = orbit(&p, &Point::new(int(1), int(1)), 50).unwrap();
        for (zb, ze) in b.points.iter().zip(&e.points) {
            assert!(zb.x.contains(&ze.x) && zb.y.contains(&ze.y));
        }
        assert!(b.is_conserved().unwrap());
    }
}
