use super::{Backend, RotationError, WindingOptions};
use crate::exact::{BallReal, Rational, Scalar, DEFAULT_PRECISION};
use crate::lyness::{fixed_point_nonneg, LynessError, LynessMap, Params, Point, StartPoint};
use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

/// Auto backend: exact arithmetic up to this many points, balls beyond.
pub const AUTO_EXACT_MAX_POINTS: usize = 400;

const CENTER_RETRIES: usize = 8;

/// Unreduced fraction `num / den` of turns per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TurnFraction {
    pub num: u64,
    pub den: u64,
}

impl TurnFraction {
    pub fn new(num: u64, den: u64) -> Self {
        TurnFraction { num, den }
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Exact comparison of the values, ignoring representation.
    pub fn cmp_value(&self, o: &Self) -> Ordering {
        (self.num as u128 * o.den as u128).cmp(&(o.num as u128 * self.den as u128))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for TurnFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Certified enclosure `low < ρ < upp`. `low = w_j/j` maximises and
/// `upp = (w_j + 1)/j` minimises over the observed steps `j`; ties keep the
/// first step attaining the extremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RotationBounds {
    pub low: TurnFraction,
    pub upp: TurnFraction,
    /// Number of orbit points `z_0, ..., z_{n-1}` used.
    pub steps_used: usize,
}

impl RotationBounds {
    pub fn contains(&self, r: &Rational) -> bool {
        &self.low.to_rational() < r && r < &self.upp.to_rational()
    }
}

impl fmt::Display for RotationBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho in ({}, {})", self.low, self.upp)
    }
}

/// Outcome of turn counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationEstimate {
    Enclosure(RotationBounds),
    /// The orbit closed at step `den` after `num` turns: `ρ = num/den`.
    Exact(TurnFraction),
}

impl RotationEstimate {
    /// `(low, upp)` with `low = upp` for an exact value.
    pub fn bounds(&self) -> (TurnFraction, TurnFraction) {
        match self {
            RotationEstimate::Enclosure(b) => (b.low, b.upp),
            RotationEstimate::Exact(f) => (*f, *f),
        }
    }

    pub fn enclosure(&self) -> Option<&RotationBounds> {
        match self {
            RotationEstimate::Enclosure(b) => Some(b),
            RotationEstimate::Exact(_) => None,
        }
    }
}

impl fmt::Display for RotationEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationEstimate::Enclosure(b) => write!(f, "{b}"),
            RotationEstimate::Exact(r) => write!(f, "rho = {r} (periodic orbit, period {})", r.den),
        }
    }
}

/// Record of one turn-counting run.
#[derive(Clone, Debug, Serialize)]
pub struct WindingLog {
    /// Rational center strictly inside the oval.
    pub center: (String, String),
    /// `w_j` for `j = 1, ..., n - 1`: crossings of the ray from the center
    /// through `z_0` in the first `j` steps.
    pub crossings: Vec<u64>,
    /// Whether the first step turns counterclockwise the short way round.
    pub first_step_ccw: bool,
    pub backend: &'static str,
    /// Working precision of the ball backend, zero for exact runs.
    pub precision: u32,
    pub center_retries: usize,
}

impl WindingLog {
    /// Steps `j` at which a crossing happened.
    pub fn crossing_steps(&self) -> Vec<usize> {
        let mut prev = 0;
        let mut out = Vec::new();
        for (i, &w) in self.crossings.iter().enumerate() {
            if w > prev {
                out.push(i + 1);
            }
            prev = w;
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WindingResult {
    pub estimate: RotationEstimate,
    pub log: WindingLog,
}

/// Value of the invariant on the starting oval.
#[derive(Clone, Debug)]
pub enum Level {
    Exact(Rational),
    Enclosed(BallReal),
}

impl Level {
    /// Certified `v < h`.
    pub fn exceeds(&self, v: &Rational) -> bool {
        match self {
            Level::Exact(h) => v < h,
            Level::Enclosed(b) => v < &b.lower(),
        }
    }

    pub fn of(p: &Params, z0: &StartPoint) -> Result<Level, LynessError> {
        match z0.as_rational() {
            Some(z) => Ok(Level::Exact(LynessMap::<Rational>::new(p, ()).invariant(&z)?)),
            None => {
                let prec = 512;
                let m = LynessMap::<BallReal>::new(p, prec);
                Ok(Level::Enclosed(m.invariant(&z0.to_ball(prec))?))
            }
        }
    }

    pub fn decimal(&self, digits: usize) -> String {
        match self {
            Level::Exact(h) => crate::exact::truncate_decimal(h, digits),
            Level::Enclosed(b) => b.decimal(digits),
        }
    }

    /// Rational key for ordering levels.
    pub fn sort_key(&self) -> Rational {
        match self {
            Level::Exact(h) => h.clone(),
            Level::Enclosed(b) => b.midpoint(),
        }
    }
}

fn invariant_exact(p: &Params, q: &Point<Rational>) -> Option<Rational> {
    LynessMap::<Rational>::new(p, ()).invariant(q).ok()
}

/// A rational point with `V(q) < h`: the hint if it qualifies, otherwise a
/// rational approximation of the fixed point refined until it does.
pub fn choose_center(p: &Params, h: &Level, hint: Option<&Point<Rational>>) -> Result<Point<Rational>, RotationError> {
    if let Some(q) = hint {
        if invariant_exact(p, q).is_some_and(|v| h.exceeds(&v)) {
            return Ok(q.clone());
        }
    }
    center_near_fixed_point(p, h, 0)
}

fn center_near_fixed_point(p: &Params, h: &Level, attempt: usize) -> Result<Point<Rational>, RotationError> {
    let fp = fixed_point_nonneg(p).map_err(|e| RotationError::NoCenter(e.to_string()))?;
    for i in 0..12 {
        let bits = 16 + 8 * (attempt + i);
        let w = Rational::new(BigInt::one(), BigInt::one() << bits);
        let q = fp.approx(&w);
        if invariant_exact(p, &q).is_some_and(|v| h.exceeds(&v)) {
            return Ok(q);
        }
    }
    Err(RotationError::NoCenter(format!("no rational point below the level found near the fixed point of {p}")))
}

enum TurnError {
    Lyness(LynessError),
    /// A later iterate on the reference ray or collinear with its
    /// predecessor through the center.
    Degenerate(usize),
}

impl From<LynessError> for TurnError {
    fn from(e: LynessError) -> Self {
        TurnError::Lyness(e)
    }
}

struct Turns {
    crossings: Vec<u64>,
    closure: Option<usize>,
    first_step_ccw: bool,
}

fn sign_of<S: Scalar>(v: &S) -> Result<Ordering, TurnError> {
    v.sign().ok_or(TurnError::Lyness(LynessError::Uncertain(v.precision_bits())))
}

fn cross<S: Scalar>(u: &Point<S>, v: &Point<S>) -> S {
    u.x.mul(&v.y).sub(&u.y.mul(&v.x))
}

fn dot<S: Scalar>(u: &Point<S>, v: &Point<S>) -> S {
    u.x.mul(&v.x).add(&u.y.mul(&v.y))
}

/// Angular position relative to the reference direction `r`: the half
/// plane (0 for angles in `[0, π)`, 1 for `[π, 2π)`) plus the vector, so
/// that positions compare by half and then by cross-product sign.
struct Angle<S> {
    half: u8,
    on_ray: bool,
    u: Point<S>,
}

fn angle<S: Scalar>(r: &Point<S>, u: Point<S>) -> Result<Angle<S>, TurnError> {
    let c = sign_of(&cross(r, &u))?;
    let (half, on_ray) = match c {
        Ordering::Greater => (0, false),
        Ordering::Less => (1, false),
        Ordering::Equal => match sign_of(&dot(r, &u))? {
            Ordering::Greater => (0, true),
            _ => (1, false),
        },
    };
    Ok(Angle { half, on_ray, u })
}

/// `φ(a) < φ(b)` for angles measured counterclockwise from the ray.
fn before<S: Scalar>(a: &Angle<S>, b: &Angle<S>) -> Result<Option<bool>, TurnError> {
    if a.half != b.half {
        return Ok(Some(a.half < b.half));
    }
    if a.on_ray != b.on_ray {
        return Ok(Some(a.on_ray));
    }
    match sign_of(&cross(&a.u, &b.u))? {
        Ordering::Greater => Ok(Some(true)),
        Ordering::Less => Ok(Some(false)),
        Ordering::Equal => Ok(None),
    }
}

fn count_turns<S: Scalar>(m: &LynessMap<S>, z0: &Point<S>, c: &Point<S>, n: usize, stop_at_closure: bool) -> Result<Turns, TurnError> {
    let rel = |z: &Point<S>| Point::new(z.x.sub(&c.x), z.y.sub(&c.y));
    let r = rel(z0);
    let mut prev = Angle { half: 0, on_ray: true, u: r.clone() };
    let mut z = z0.clone();
    let mut w = 0u64;
    let mut crossings = Vec::with_capacity(n.saturating_sub(1));
    let mut first_step_ccw = true;
    for j in 1..n {
        z = m.apply(&z)?;
        let closed = z.x.exact_eq(&z0.x) == Some(true) && z.y.exact_eq(&z0.y) == Some(true);
        let cur = angle(&r, rel(&z))?;
        if j == 1 {
            first_step_ccw = sign_of(&cross(&prev.u, &cur.u))? == Ordering::Greater;
        }
        if closed {
            w += 1;
            crossings.push(w);
            if stop_at_closure {
                return Ok(Turns { crossings, closure: Some(j), first_step_ccw });
            }
        } else {
            if cur.on_ray {
                return Err(TurnError::Degenerate(j));
            }
            match before(&cur, &prev)? {
                Some(true) => w += 1,
                Some(false) => {}
                None => return Err(TurnError::Degenerate(j)),
            }
            crossings.push(w);
        }
        prev = cur;
    }
    Ok(Turns { crossings, closure: None, first_step_ccw })
}

/// `low = max w_j/j`, `upp = min (w_j+1)/j`, first attaining step kept.
pub fn assemble_bounds(crossings: &[u64]) -> Option<RotationBounds> {
    let mut low: Option<TurnFraction> = None;
    let mut upp: Option<TurnFraction> = None;
    for (i, &w) in crossings.iter().enumerate() {
        let j = i as u64 + 1;
        let l = TurnFraction::new(w, j);
        let u = TurnFraction::new(w + 1, j);
        if low.is_none_or(|b| l.cmp_value(&b) == Ordering::Greater) {
            low = Some(l);
        }
        if upp.is_none_or(|b| u.cmp_value(&b) == Ordering::Less) {
            upp = Some(u);
        }
    }
    Some(RotationBounds { low: low?, upp: upp?, steps_used: crossings.len() + 1 })
}

fn resolve_backend(opts: &WindingOptions, z0: &StartPoint, n: usize) -> Backend {
    match opts.backend {
        Backend::Auto => {
            if z0.as_rational().is_some() && n <= AUTO_EXACT_MAX_POINTS {
                Backend::Exact
            } else {
                Backend::Ball
            }
        }
        b => b,
    }
}

/// Certified rotation-number enclosure from the first `n` orbit points
/// `z_0, ..., z_{n-1}`, or the exact value if the orbit closes.
pub fn winding_bounds(p: &Params, z0: &StartPoint, n: usize, opts: &WindingOptions) -> Result<WindingResult, RotationError> {
    if n < 2 {
        return Err(RotationError::Lyness(LynessError::Domain("turn counting needs at least two points".into())));
    }
    z0.require_positive()?;
    let backend = resolve_backend(opts, z0, n);
    let exact_z0 = z0.as_rational();
    if backend == Backend::Exact && exact_z0.is_none() {
        return Err(RotationError::Lyness(LynessError::Domain("the exact backend needs a rational initial point".into())));
    }
    let h = Level::of(p, z0)?;
    let mut center = choose_center(p, &h, opts.hint.as_ref())?;
    if let Some(z) = &exact_z0 {
        if z == &center {
            return Err(RotationError::Lyness(LynessError::Domain("the initial point is the fixed point".into())));
        }
    }
    let mut last_err = String::new();
    for retry in 0..=CENTER_RETRIES {
        if retry > 0 {
            center = center_near_fixed_point(p, &h, 2 * retry)?;
        }
        let run = match backend {
            Backend::Exact => {
                let m = LynessMap::<Rational>::new(p, ());
                let z = exact_z0.clone().expect("checked above");
                count_turns(&m, &z, &center, n, true).map(|t| (t, 0))
            }
            _ => run_ball(p, z0, &center, n, opts),
        };
        match run {
            Ok((t, prec)) => {
                let log = WindingLog {
                    center: (center.x.to_string(), center.y.to_string()),
                    crossings: t.crossings,
                    first_step_ccw: t.first_step_ccw,
                    backend: if backend == Backend::Exact { "exact" } else { "ball" },
                    precision: prec,
                    center_retries: retry,
                };
                if let Some(m) = t.closure {
                    let w = log.crossings[m - 1];
                    return Ok(WindingResult { estimate: RotationEstimate::Exact(TurnFraction::new(w, m as u64)), log });
                }
                let b = assemble_bounds(&log.crossings).expect("at least one step");
                if b.low.cmp_value(&b.upp) != Ordering::Less {
                    last_err = format!("bounds {} >= {}", b.low, b.upp);
                    continue;
                }
                return Ok(WindingResult { estimate: RotationEstimate::Enclosure(b), log });
            }
            Err(TurnError::Degenerate(j)) => {
                last_err = format!("iterate {j} is degenerate with respect to the reference ray");
            }
            Err(TurnError::Lyness(LynessError::Uncertain(b))) => return Err(RotationError::PrecisionExhausted(b)),
            Err(TurnError::Lyness(e)) => return Err(e.into()),
        }
    }
    Err(RotationError::InconsistentWinding(last_err))
}

fn run_ball(p: &Params, z0: &StartPoint, center: &Point<Rational>, n: usize, opts: &WindingOptions) -> Result<(Turns, u32), TurnError> {
    let mut prec = opts.precision.max(DEFAULT_PRECISION.min(opts.precision_cap));
    loop {
        let m = LynessMap::<BallReal>::new(p, prec);
        let c = center.to_scalar::<BallReal>(prec);
        match count_turns(&m, &z0.to_ball(prec), &c, n, false) {
            Err(TurnError::Lyness(LynessError::Uncertain(_))) if prec < opts.precision_cap => {
                prec = (prec * 2).min(opts.precision_cap);
            }
            Err(TurnError::Lyness(LynessError::Uncertain(_))) => {
                return Err(TurnError::Lyness(LynessError::Uncertain(prec)));
            }
            r => return r.map(|t| (t, prec)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn opts(backend: Backend) -> WindingOptions {
        WindingOptions { backend, ..WindingOptions::default() }
    }

    #[test]
    fn worked_example_27_points() {
        let p = Params::two(int(3), int(2)).unwrap();
        let z0 = StartPoint::rational(int(1), int(1));
        let r = winding_bounds(&p, &z0, 27, &opts(Backend::Exact)).unwrap();
        assert_eq!(r.estimate.to_string(), "rho in (4/7, 15/26)");
        assert!(!r.log.first_step_ccw);
    }

    #[test]
    fn unit_parameters_close_after_five_steps() {
        let p = Params::two(int(1), int(1)).unwrap();
        let z0 = StartPoint::rational(int(1), int(1));
        let r = winding_bounds(&p, &z0, 10, &opts(Backend::Exact)).unwrap();
        assert_eq!(r.estimate, RotationEstimate::Exact(TurnFraction::new(3, 5)));
    }

    #[test]
    fn center_hint_on_the_oval_is_rejected() {
        let p = Params::two(int(3), int(2)).unwrap();
        let h = Level::Exact(int(34));
        let one = Point::new(int(1), int(1));
        let c = choose_center(&p, &h, Some(&one)).unwrap();
        assert_ne!(c, one);
        assert!(invariant_exact(&p, &c).unwrap() < int(34));
        let sym = Params::two(int(2), int(2)).unwrap();
        let two = Point::new(int(2), int(2));
        assert_eq!(choose_center(&sym, &Level::Exact(int(30)), Some(&two)).unwrap(), two);
    }

    #[test]
    fn backends_agree_on_prefix() {
        let p = Params::two(rat(1, 2), rat(3, 2)).unwrap();
        let z0 = StartPoint::rational(rat(3, 40), rat(173, 100));
        let e = winding_bounds(&p, &z0, 120, &opts(Backend::Exact)).unwrap();
        let b = winding_bounds(&p, &z0, 120, &opts(Backend::Ball)).unwrap();
        assert_eq!(e.log.crossings, b.log.crossings);
        assert_eq!(e.estimate, b.estimate);
    }

    #[test]
    fn tie_keeps_first_step() {
        // w = 0, 1, 1, 2: low 1/2 first attained at j = 2, not 2/4 at j = 4
        let b = assemble_bounds(&[0, 1, 1, 2]).unwrap();
        assert_eq!(b.low, TurnFraction::new(1, 2));
        assert_eq!(b.upp, TurnFraction::new(2, 3));
    }
}
