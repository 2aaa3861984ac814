//! Randomized structural properties on rational instances.

use lyness_core::adherence::{classify, projection_discriminant, AdherenceError};
use lyness_core::exact::{gcd, rat, reduced, AlgebraicReal, BallReal, Rational, Scalar};
use lyness_core::lyness::{critical_level, fixed_point, invariant, orbit, orbit_ball, step, LynessMap, Params, Point, StartPoint};
use lyness_core::poly::{resultant, UniPoly, Var};
use lyness_core::rotation::{assemble_bounds, winding_bounds, Backend, WindingOptions};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn any_rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=50).prop_map(|(n, d)| rat(n, d))
}

fn params() -> impl Strategy<Value = Params> {
    prop_oneof![
        (positive(), positive()).prop_map(|(a, b)| Params::two(a, b).unwrap()),
        (positive(), positive(), positive()).prop_map(|(a, b, c)| Params::three(a, b, c).unwrap()),
    ]
}

fn point() -> impl Strategy<Value = Point<Rational>> {
    (positive(), positive()).prop_map(|(x, y)| Point::new(x, y))
}

/// `z, F_a(z), F_b(F_a(z)), ...` within one coefficient period.
fn step_chain(p: &Params, z: &Point<Rational>) -> Vec<Point<Rational>> {
    let mut out = vec![z.clone()];
    for c in p.coeffs().iter().take(p.k() - 1) {
        let next = step(c, out.last().unwrap()).unwrap();
        out.push(next);
    }
    out
}

fn poly_from_roots(roots: &[Rational], lead: &Rational) -> UniPoly {
    let mut p = UniPoly::constant(lead.clone(), Var::X);
    for r in roots {
        p = p.mul(&UniPoly::new(vec![-r.clone(), Rational::one()], Var::X));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariant_is_conserved_exactly(p in params(), z in point()) {
        let o = orbit(&p, &z, 10).unwrap();
        prop_assert!(o.is_conserved().unwrap());
        for q in &o.points {
            prop_assert_eq!(invariant(&p, q).unwrap(), o.level.clone());
        }
    }

    #[test]
    fn closed_form_equals_successive_steps(p in params(), z in point()) {
        let m = LynessMap::<Rational>::new(&p, ());
        prop_assert_eq!(m.apply(&z).unwrap(), m.apply_by_steps(&z).unwrap());
    }

    #[test]
    fn invariants_are_conjugate_along_the_step_chain(p in params(), z in point()) {
        let v = invariant(&p, &z).unwrap();
        for (s, w) in step_chain(&p, &z).iter().enumerate() {
            prop_assert_eq!(invariant(&p.shifted(s), w).unwrap(), v.clone());
        }
    }

    #[test]
    fn xy_is_a_cocycle(p in params(), z in point(), alpha in positive()) {
        let mu = |q: &Point<Rational>| &q.x * &q.y;
        let one = Params::two(alpha.clone(), alpha.clone()).unwrap();
        let m1 = LynessMap::<Rational>::new(&one, ());
        let d = m1.step_jacobian(0, &z).unwrap().det();
        prop_assert_eq!(mu(&step(&alpha, &z).unwrap()), d * mu(&z));
        let m = LynessMap::<Rational>::new(&p, ());
        let d = m.jacobian_at(&z).unwrap().det();
        prop_assert_eq!(mu(&m.apply(&z).unwrap()), d * mu(&z));
    }

    #[test]
    fn fixed_point_minimizes_the_invariant(p in params(), q in point(), dx in -50i64..=50, dy in -50i64..=50) {
        let fp = fixed_point(&p).unwrap();
        let h_c = critical_level(&p).unwrap();
        let near = fp.approx(&rat(1, 1 << 24));
        let close = Point::new(&near.x + rat(dx, 10_000), &near.y + rat(dy, 10_000));
        for s in [q, close] {
            if s.x.is_positive() && s.y.is_positive() {
                let v = invariant(&p, &s).unwrap();
                prop_assert!(h_c.compare_rational(&v).is_lt());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enclosures_nest(a in positive(), b in positive(), z in point()) {
        let p = Params::two(a, b).unwrap();
        let opts = WindingOptions { backend: Backend::Exact, ..WindingOptions::default() };
        let r = winding_bounds(&p, &StartPoint::rational(z.x, z.y), 40, &opts).unwrap();
        let w = &r.log.crossings;
        let mut prev = assemble_bounds(&w[..1]).unwrap();
        for m in 2..=w.len() {
            let b = assemble_bounds(&w[..m]).unwrap();
            prop_assert!(b.low.cmp_value(&prev.low).is_ge());
            prop_assert!(b.upp.cmp_value(&prev.upp).is_le());
            prop_assert!(b.low.cmp_value(&b.upp).is_lt());
            prev = b;
        }
    }

    #[test]
    fn backends_agree(a in positive(), b in positive(), z in point()) {
        let p = Params::two(a, b).unwrap();
        let start = StartPoint::rational(z.x.clone(), z.y.clone());
        let ex = WindingOptions { backend: Backend::Exact, ..WindingOptions::default() };
        let ba = WindingOptions { backend: Backend::Ball, ..WindingOptions::default() };
        let e = winding_bounds(&p, &start, 30, &ex).unwrap();
        let f = winding_bounds(&p, &start, 30, &ba).unwrap();
        let m = f.log.crossings.len().min(e.log.crossings.len());
        prop_assert_eq!(&e.log.crossings[..m], &f.log.crossings[..m]);
        let eo = orbit(&p, &z, 20).unwrap();
        let bo = orbit_ball(&p, &start, 20, 256, 4096).unwrap();
        for (x, y) in eo.points.iter().zip(&bo.points) {
            prop_assert!(y.x.contains(&x.x) && y.y.contains(&x.y));
        }
    }

    #[test]
    fn orbits_stay_in_their_projection_intervals(p in params(), z in point()) {
        let h = invariant(&p, &z).unwrap();
        match classify(&p, &h) {
            Err(AdherenceError::LevelBelowCritical { .. }) => {}
            Err(e) => prop_assert!(false, "classify failed: {e}"),
            Ok(cl) => {
                prop_assert!((1..=p.k()).contains(&cl.count));
                for q in &orbit(&p, &z, 6).unwrap().points {
                    for (s, w) in step_chain(&p, q).iter().enumerate() {
                        prop_assert!(cl.intervals[s].contains(&w.x));
                    }
                }
            }
        }
    }

    #[test]
    fn projection_endpoints_are_discriminant_roots(p in params(), z in point()) {
        let h = invariant(&p, &z).unwrap();
        if let Ok(cl) = classify(&p, &h) {
            for iv in &cl.intervals {
                let r = projection_discriminant(&p.shifted(iv.shift)).eval_inner(&h);
                prop_assert!(r.rem(iv.x_lo.poly()).is_zero() && r.rem(iv.x_hi.poly()).is_zero());
                prop_assert!(iv.x_lo < iv.image_x && iv.image_x < iv.x_hi);
            }
        }
    }

    #[test]
    fn resultant_antisymmetry_and_common_roots(
        rs in proptest::collection::vec(any_rational(), 1..4),
        ss in proptest::collection::vec(any_rational(), 1..4),
        shared in any_rational(),
        lead in positive(),
    ) {
        let p = poly_from_roots(&rs, &lead);
        let q = poly_from_roots(&ss, &Rational::one());
        let (m, n) = (rs.len(), ss.len());
        let pq = resultant(&p, &q).unwrap();
        let qp = resultant(&q, &p).unwrap();
        let sign = if m * n % 2 == 0 { Rational::one() } else { -Rational::one() };
        prop_assert_eq!(pq.clone(), sign * qp);
        // res = lead^n prod (r_i - s_j)
        let mut prod = num_traits::pow(lead.clone(), n);
        for r in &rs {
            for s in &ss {
                prod *= r - s;
            }
        }
        prop_assert_eq!(pq.clone(), prod);
        prop_assert_eq!(pq.is_zero(), p.gcd(&q).degree() != Some(0));
        let p2 = poly_from_roots(&[rs.clone(), vec![shared.clone()]].concat(), &lead);
        let q2 = poly_from_roots(&[ss.clone(), vec![shared]].concat(), &Rational::one());
        prop_assert!(resultant(&p2, &q2).unwrap().is_zero());
    }

    #[test]
    fn exact_scalar_field_axioms(a in any_rational(), b in any_rational(), c in any_rational()) {
        prop_assert_eq!(a.add(&b), &a + &b);
        prop_assert_eq!(a.sub(&b), &a - &b);
        prop_assert_eq!(a.mul(&b), &a * &b);
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        if !b.is_zero() {
            prop_assert_eq!(a.checked_div(&b).unwrap().mul(&b), a.clone());
        } else {
            prop_assert!(a.checked_div(&b).is_none());
        }
        let big = |r: &Rational| BigInt::from(10).pow(90) * r.numer() + BigInt::one();
        let (x, y) = (big(&a), big(&b) * BigInt::from(6));
        let g = gcd(&x, &y);
        prop_assert_eq!(g.clone(), num_integer::Integer::gcd(&x, &y));
        let r = reduced(x.clone() * BigInt::from(4), y.clone() * BigInt::from(4));
        prop_assert_eq!(r, Rational::new(x, y));
    }

    #[test]
    fn ball_operations_contain_exact_results(a in any_rational(), b in any_rational(), prec in 64u32..300) {
        let (x, y) = (BallReal::from_rational(&a, prec), BallReal::from_rational(&b, prec));
        prop_assert!(x.contains(&a) && y.contains(&b));
        prop_assert!(x.add(&y).contains(&(&a + &b)));
        prop_assert!(x.sub(&y).contains(&(&a - &b)));
        prop_assert!(x.mul(&y).contains(&(&a * &b)));
        if !b.is_zero() {
            prop_assert!(x.checked_div(&y).unwrap().contains(&(&a / &b)));
        }
    }

    #[test]
    fn refinement_nests(n in 2i64..500, k in 1u32..40) {
        // sqrt(n) for non-squares, otherwise the rational root itself
        let p = UniPoly::new(vec![rat(-n, 1), Rational::zero(), Rational::one()], Var::X);
        let z = AlgebraicReal::roots_above(&p, &Rational::zero()).unwrap().pop().unwrap();
        let w = Rational::new(BigInt::one(), BigInt::one() << k);
        let r = z.refine(&w);
        prop_assert!(r.width() <= w);
        prop_assert!(r.lo() >= z.lo() && r.hi() <= z.hi());
        prop_assert_eq!(r.compare(&z), std::cmp::Ordering::Equal);
        let sq = r.lo() * r.lo() <= rat(n, 1) && rat(n, 1) <= r.hi() * r.hi();
        prop_assert!(sq);
    }
}
