//! Number of intervals in the closure of `{x_n}`: projection discriminants
//! of the invariant ovals of each cyclic shift, their pairwise resultants,
//! and the bifurcation levels where two projections touch.

use crate::exact::{AlgebraicError, AlgebraicReal, Rational};
use crate::lyness::{critical_level_of, fixed_point, invariant_terms, LynessError, Params};
use crate::poly::{discriminant, resultant_eliminating, BiPoly, PolyError, UniPoly, Var};
use num_traits::{One, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdherenceError {
    #[error("level {h} does not exceed the critical level {h_c}")]
    LevelBelowCritical { h: String, h_c: String },
    #[error("root selection ambiguous for shift {shift}: {reason}")]
    RootSelectionAmbiguous { shift: usize, reason: String },
    #[error("degenerate symmetric parameters {0}: one interval for every level")]
    DegenerateSymmetric(String),
    #[error("projection discriminants {0} and {1} share a factor")]
    CommonFactor(usize, usize),
    #[error(transparent)]
    Lyness(#[from] LynessError),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn hconst(c: &Rational) -> UniPoly {
    UniPoly::constant(c.clone(), Var::H)
}

/// `xyV - hxy = α y^2 + β y + γ` for the invariant of `p`, with `α, β, γ`
/// polynomials in `x` over `Q[h]`.
pub fn level_quadratic(p: &Params) -> [BiPoly; 3] {
    let n = invariant_terms(p);
    let bx = |c: Vec<UniPoly>| BiPoly::new(c, Var::X);
    let alpha = bx(vec![hconst(&n[0][2]), hconst(&n[1][2])]);
    let minus_h = UniPoly::new(vec![n[1][1].clone(), -Rational::one()], Var::H);
    let beta = bx(vec![hconst(&n[0][1]), minus_h, hconst(&n[2][1])]);
    let gamma = bx(vec![hconst(&n[0][0]), hconst(&n[1][0]), hconst(&n[2][0])]);
    [alpha, beta, gamma]
}

/// `R(x, h) = β^2 - 4αγ`: the discriminant in `y` of the level curve.
pub fn projection_discriminant(p: &Params) -> BiPoly {
    let [alpha, beta, gamma] = level_quadratic(p);
    let y_quadratic = crate::poly::Poly::new(vec![gamma, beta, alpha], Var::Y);
    discriminant(&y_quadratic).expect("the level curve is quadratic in y")
}

/// `R_1, ..., R_k`: `R_{i+1}` belongs to the shift whose composed map
/// applies the coefficients starting from position `i`.
pub fn proj_discriminants(p: &Params) -> Vec<BiPoly> {
    (0..p.k()).map(|s| projection_discriminant(&p.shifted(s))).collect()
}

/// Shift pairs whose resultants give `R_4, ...`: `(1,2)` for `k = 2` and
/// `(1,2), (2,3), (1,3)` for `k = 3`, zero based.
pub fn shift_pairs(k: usize) -> Vec<(usize, usize)> {
    if k == 2 {
        vec![(0, 1)]
    } else {
        vec![(0, 1), (1, 2), (0, 2)]
    }
}

/// `res_x(R_i, R_j)` and its squarefree part; zero when the two
/// discriminants share a factor, as for symmetric parameters.
#[derive(Clone, Debug)]
pub struct BifurcationPoly {
    pub shifts: (usize, usize),
    pub resultant: UniPoly,
    pub squarefree: UniPoly,
}

impl BifurcationPoly {
    pub fn is_degenerate(&self) -> bool {
        self.resultant.is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "shifts": [self.shifts.0 + 1, self.shifts.1 + 1],
            "resultant": self.resultant.to_string(),
            "squarefree": self.squarefree.to_string(),
            "degree": self.resultant.degree(),
        })
    }
}

pub fn bifurcation_polys(p: &Params) -> Result<Vec<BifurcationPoly>, AdherenceError> {
    let rs = proj_discriminants(p);
    shift_pairs(p.k())
        .into_iter()
        .map(|(i, j)| {
            let r = resultant_eliminating(&rs[i], &rs[j], Var::X)?.with_var(Var::H);
            let sf = if r.is_zero() { r.clone() } else { r.squarefree_part().primitive() };
            Ok(BifurcationPoly { shifts: (i, j), resultant: r, squarefree: sf })
        })
        .collect()
}

/// Projection on the `x`-axis of the oval of one shift at a given level.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionInterval {
    pub shift: usize,
    pub x_lo: AlgebraicReal,
    pub x_hi: AlgebraicReal,
    /// x-coordinate of the fixed-point image belonging to this shift.
    pub image_x: AlgebraicReal,
}

impl ProjectionInterval {
    /// Exact `x_lo <= x <= x_hi`.
    pub fn contains(&self, x: &Rational) -> bool {
        self.x_lo.compare_rational(x) != Ordering::Greater && self.x_hi.compare_rational(x) != Ordering::Less
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub h: String,
    pub count: usize,
    /// Indexed by shift.
    pub intervals: Vec<ProjectionInterval>,
    /// Shifts grouped into connected components, ordered left to right.
    pub components: Vec<Vec<usize>>,
    /// Whether two fixed-point images share their x-coordinate.
    pub images_coincide: bool,
}

impl Classification {
    /// Columns `shift,x_lo,x_hi,image_x,component`.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut s = String::from("shift,x_lo,x_hi,image_x,component\n");
        for iv in &self.intervals {
            let comp = self.components.iter().position(|c| c.contains(&iv.shift)).unwrap_or(0);
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                iv.shift + 1,
                iv.x_lo.decimal(digits),
                iv.x_hi.decimal(digits),
                iv.image_x.decimal(digits),
                comp
            );
        }
        s
    }
}

/// Rational strictly between `a < b`.
fn rational_between(a: &AlgebraicReal, b: &AlgebraicReal) -> Rational {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut w = b.hi() - a.lo() + Rational::one();
    loop {
        if a.hi() < b.lo() {
            return (a.hi() + b.lo()) / Rational::from_integer(2.into());
        }
        w /= Rational::from_integer(4.into());
        a = a.refine(&w);
        b = b.refine(&w);
    }
}

/// Classifies the closure of `{x_n}` at level `h > h_c`: for each shift the
/// adjacent positive roots of `R_i(·, h)` around the fixed-point image, then
/// the connected components of their union.
pub fn classify(p: &Params, h: &Rational) -> Result<Classification, AdherenceError> {
    let fp = fixed_point(p)?;
    let h_c = critical_level_of(&fp)?;
    if h_c.compare_rational(h) != Ordering::Less {
        return Err(AdherenceError::LevelBelowCritical { h: h.to_string(), h_c: h_c.decimal(12) });
    }
    let xs = fp.image_xs()?;
    let rs = proj_discriminants(p);
    let mut intervals = Vec::with_capacity(p.k());
    for (shift, (r, x_star)) in rs.iter().zip(&xs).enumerate() {
        intervals.push(projection_interval(shift, &r.eval_inner(h), x_star)?);
    }
    let components = components(&intervals);
    let mut images_coincide = false;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            images_coincide |= xs[i] == xs[j];
        }
    }
    Ok(Classification { h: h.to_string(), count: components.len(), intervals, components, images_coincide })
}

fn projection_interval(shift: usize, r: &UniPoly, x_star: &AlgebraicReal) -> Result<ProjectionInterval, AdherenceError> {
    let ambiguous = |reason: String| AdherenceError::RootSelectionAmbiguous { shift, reason };
    let roots = AlgebraicReal::roots_above(r, &Rational::zero())?;
    let above = roots.partition_point(|z| z < x_star);
    if roots.get(above).is_some_and(|z| z == x_star) {
        return Err(ambiguous("the fixed-point image is an endpoint".into()));
    }
    if above == 0 || above == roots.len() {
        return Err(ambiguous(format!("{} positive endpoints do not bracket the fixed-point image", roots.len())));
    }
    let (lo, hi) = (&roots[above - 1], &roots[above]);
    // On the projection the level curve has real points: R > 0 inside.
    if r.sign_at(&rational_between(lo, hi)) != Ordering::Greater {
        return Err(ambiguous("the bracketing pair encloses no real branch".into()));
    }
    Ok(ProjectionInterval { shift, x_lo: lo.clone(), x_hi: hi.clone(), image_x: x_star.clone() })
}

/// Connected components of a union of closed intervals; touching intervals
/// form one component.
fn components(intervals: &[ProjectionInterval]) -> Vec<Vec<usize>> {
    let mut order: Vec<&ProjectionInterval> = intervals.iter().collect();
    order.sort_by(|a, b| a.x_lo.cmp(&b.x_lo));
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut reach: Option<&AlgebraicReal> = None;
    for iv in order {
        match reach {
            Some(r) if iv.x_lo <= *r => {
                out.last_mut().expect("a component is open").push(iv.shift);
                if iv.x_hi > *r {
                    reach = Some(&iv.x_hi);
                }
            }
            _ => {
                out.push(vec![iv.shift]);
                reach = Some(&iv.x_hi);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BifurcationLevel {
    pub value: AlgebraicReal,
    /// Shift pairs whose resultant vanishes here.
    pub shifts: Vec<(usize, usize)>,
}

/// Maximal level range with a constant interval count; `hi = None` is
/// unbounded. Ranges are `(h_c, h_1)`, `[h_1, h_2)`, ..., `[h_m, ∞)`.
#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub lo: AlgebraicReal,
    pub hi: Option<AlgebraicReal>,
    pub count: usize,
    /// Rational level inside the range where the count was computed.
    pub sample: String,
    #[serde(skip)]
    pub sample_value: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct BifurcationReport {
    pub h_c: AlgebraicReal,
    pub levels: Vec<BifurcationLevel>,
    pub regions: Vec<Region>,
    /// Resultant roots above `h_c` at which the count does not change.
    pub discarded: Vec<AlgebraicReal>,
}

impl BifurcationReport {
    /// `{h_c, levels, regions: [{lo, hi, count}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Bifurcation levels above `h_c`: roots of the pairwise resultants where
/// the interval count differs on the two sides.
pub fn bifurcation_levels(p: &Params) -> Result<BifurcationReport, AdherenceError> {
    p.require_positive()?;
    if p.is_symmetric() {
        return Err(AdherenceError::DegenerateSymmetric(p.to_string()));
    }
    let h_c = critical_level_of(&fixed_point(p)?)?;
    let mut cands: Vec<BifurcationLevel> = Vec::new();
    for bp in bifurcation_polys(p)? {
        if bp.is_degenerate() {
            return Err(AdherenceError::CommonFactor(bp.shifts.0 + 1, bp.shifts.1 + 1));
        }
        for z in AlgebraicReal::roots_above(&bp.squarefree, h_c.lo())? {
            if z <= h_c {
                continue;
            }
            match cands.iter_mut().find(|c| c.value == z) {
                Some(c) => c.shifts.push(bp.shifts),
                None => cands.push(BifurcationLevel { value: z, shifts: vec![bp.shifts] }),
            }
        }
    }
    cands.sort_by(|a, b| a.value.cmp(&b.value));

    let mut samples = Vec::with_capacity(cands.len() + 1);
    let mut prev = &h_c;
    for c in &cands {
        samples.push(rational_between(prev, &c.value));
        prev = &c.value;
    }
    samples.push(prev.hi() + Rational::one());
    let counts = samples.iter().map(|h| classify(p, h).map(|c| c.count)).collect::<Result<Vec<_>, _>>()?;

    let mut levels = Vec::new();
    let mut discarded = Vec::new();
    let mut regions = vec![Region {
        lo: h_c.clone(),
        hi: None,
        count: counts[0],
        sample: samples[0].to_string(),
        sample_value: samples[0].clone(),
    }];
    for (g, c) in cands.into_iter().enumerate() {
        if counts[g] == counts[g + 1] {
            discarded.push(c.value);
            continue;
        }
        regions.last_mut().expect("regions start nonempty").hi = Some(c.value.clone());
        regions.push(Region {
            lo: c.value.clone(),
            hi: None,
            count: counts[g + 1],
            sample: samples[g + 1].to_string(),
            sample_value: samples[g + 1].clone(),
        });
        levels.push(c);
    }
    Ok(BifurcationReport { h_c, levels, regions, discarded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn h_poly(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c, Var::H)
    }

    /// `(a x^2 - h x + a^2 + b)^2 - 4(bx + a)(b x^2 + b^2 x + a x + ab)`.
    fn r1_closed_form(a: &Rational, b: &Rational) -> BiPoly {
        let c = |r: Rational| hconst(&r);
        let bx = |v: Vec<UniPoly>| BiPoly::new(v, Var::X);
        let q = bx(vec![c(a * a + b), h_poly(&[0, -1]), c(a.clone())]);
        let l = bx(vec![c(a.clone()), c(b.clone())]);
        let m = bx(vec![c(a * b), c(b * b + a), c(b.clone())]);
        q.mul(&q).sub(&l.mul(&m).scale(&hconst(&int(4))))
    }

    #[test]
    fn two_periodic_discriminants_match_closed_forms() {
        let (a, b) = (int(3), rat(1, 2));
        let p = Params::two(a.clone(), b.clone()).unwrap();
        let rs = proj_discriminants(&p);
        assert_eq!(rs[0], r1_closed_form(&a, &b));
        assert_eq!(rs[1], r1_closed_form(&b, &a));
    }

    #[test]
    fn symmetric_discriminants_coincide() {
        let rs = proj_discriminants(&Params::two(int(2), int(2)).unwrap());
        assert_eq!(rs[0], rs[1]);
        let rs = proj_discriminants(&Params::three(int(1), int(1), int(1)).unwrap());
        assert!(rs[0] == rs[1] && rs[1] == rs[2]);
        let bp = bifurcation_polys(&Params::two(int(2), int(2)).unwrap()).unwrap();
        assert!(bp[0].is_degenerate());
        assert!(matches!(
            bifurcation_levels(&Params::two(int(2), int(2)).unwrap()),
            Err(AdherenceError::DegenerateSymmetric(_))
        ));
    }

    /// Agreement with a value rounded to four decimals.
    fn rounds_to(z: &AlgebraicReal, v: f64) -> bool {
        (z.to_f64() - v).abs() <= 5e-5
    }

    fn p4() -> UniPoly {
        h_poly(&[7613699255, 564028596, -48390204, -2548088, 112900])
    }

    #[test]
    fn proposition_two_resultant_factors() {
        let p = Params::two(int(3), rat(1, 2)).unwrap();
        let r = &bifurcation_polys(&p).unwrap()[0].resultant;
        let other = h_poly(&[1816975, 287380, 308, -1176, 4]);
        let cof = r.exact_quotient(&p4()).unwrap().exact_quotient(&other).unwrap();
        assert_eq!(cof.degree(), Some(0));
        assert_eq!(num_traits::Signed::abs(&cof.coeff(0)), rat(625, 65536));
    }

    #[test]
    fn proposition_two_levels_and_counts() {
        let p = Params::two(int(3), rat(1, 2)).unwrap();
        let rep = bifurcation_levels(&p).unwrap();
        assert!(rounds_to(&rep.h_c, 17.0394));
        assert_eq!(rep.levels.len(), 1);
        assert!(rounds_to(&rep.levels[0].value, 17.1198));
        assert_eq!(rep.regions.iter().map(|r| r.count).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(classify(&p, &rat(171, 10)).unwrap().count, 2);
        assert_eq!(classify(&p, &int(20)).unwrap().count, 1);
        assert!(matches!(classify(&p, &int(17)), Err(AdherenceError::LevelBelowCritical { .. })));
    }

    #[test]
    fn example_three_levels_and_counts() {
        let p = Params::three(rat(1, 2), int(2), int(3)).unwrap();
        for bp in bifurcation_polys(&p).unwrap() {
            assert_eq!(bp.squarefree.degree(), Some(8));
        }
        let rep = bifurcation_levels(&p).unwrap();
        assert!(rounds_to(&rep.h_c, 15.9283));
        assert_eq!(rep.levels.len(), 2);
        assert!(rounds_to(&rep.levels[0].value, 15.9614) && rounds_to(&rep.levels[1].value, 16.0015));
        assert_eq!(rep.regions.iter().map(|r| r.count).collect::<Vec<_>>(), vec![3, 2, 1]);
        for (h, n) in [(rat(319, 20), 3), (rat(799, 50), 2), (rat(161, 10), 1)] {
            assert_eq!(classify(&p, &h).unwrap().count, n);
        }
    }

    #[test]
    fn endpoints_are_double_roots_with_positive_ordinate() {
        let p = Params::two(int(3), rat(1, 2)).unwrap();
        let cl = classify(&p, &rat(171, 10)).unwrap();
        let h = rat(171, 10);
        for iv in &cl.intervals {
            let sp = p.shifted(iv.shift);
            let r = projection_discriminant(&sp).eval_inner(&h);
            let [_, beta, _] = level_quadratic(&sp);
            let beta = beta.eval_inner(&h);
            for e in [&iv.x_lo, &iv.x_hi] {
                // R(e, h) = 0 exactly, and the double root y = -β/(2α) is
                // positive since α > 0 on the positive axis.
                assert!(r.rem(e.poly()).is_zero());
                assert_eq!(beta.eval_ball(&e.to_ball(256)).sign_certain(), Some(Ordering::Less));
            }
        }
    }
}
