//! Sturm sequences, real root counting and isolation over the rationals.

use super::dense::UniPoly;
use super::PolyError;
use crate::exact::rational::{midpoint, Rational};
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

/// Canonical Sturm chain `p, p', -rem(p_{i-1}, p_i), ...`; every member is
/// scaled by a positive constant, which preserves the sign pattern.
pub fn sturm_sequence(p: &UniPoly) -> Result<Vec<UniPoly>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let norm = |q: UniPoly| {
        let l = q.leading().map(|c| c.abs());
        match l {
            Some(l) => q.scale(&l.recip()),
            None => q,
        }
    };
    let mut seq = vec![norm(p.clone())];
    let d = p.derivative();
    if d.is_zero() {
        return Ok(seq);
    }
    seq.push(norm(d));
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(norm(r.neg()));
    }
    Ok(seq)
}

fn sign_changes(seq: &[UniPoly], t: &Rational) -> usize {
    let mut changes = 0;
    let mut last = Ordering::Equal;
    for q in seq {
        let s = q.sign_at(t);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Number of distinct real roots in `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<usize, PolyError> {
    let seq = sturm_sequence(p)?;
    Ok(count_with(&seq, lo, hi))
}

fn count_with(seq: &[UniPoly], lo: &Rational, hi: &Rational) -> usize {
    if lo >= hi {
        return 0;
    }
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// Number of distinct real roots strictly greater than `lo`.
pub fn count_roots_above(p: &UniPoly, lo: &Rational) -> Result<usize, PolyError> {
    let b = root_bound(p, lo)?;
    sturm_count(p, lo, &b)
}

fn root_bound(p: &UniPoly, lo: &Rational) -> Result<Rational, PolyError> {
    match p.degree() {
        None => Err(PolyError::ZeroPolynomial),
        _ => {
            let b = p.cauchy_bound();
            Ok(if &b > lo { b } else { lo + Rational::from_integer(1.into()) })
        }
    }
}

/// Isolating interval of a single real root. Either `lo == hi` and the root
/// is that rational, or `lo < hi`, the squarefree polynomial changes sign
/// strictly between the endpoints and has exactly one root in between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Isolates the distinct real roots of `p` in the open interval `(lo, hi)`,
/// in increasing order. Intervals are with respect to the squarefree part
/// of `p`, which is also returned.
pub fn isolate_roots(p: &UniPoly, lo: &Rational, hi: &Rational) -> Result<(UniPoly, Vec<RootInterval>), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    if sf.degree() == Some(0) || lo >= hi {
        return Ok((sf, Vec::new()));
    }
    let seq = sturm_sequence(&sf)?;
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    // Depth-first on the left half first keeps the output sorted.
    while let Some((a, b)) = stack.pop() {
        let n = count_with(&seq, &a, &b);
        if n == 0 {
            continue;
        }
        let b_root = sf.sign_at(&b) == Ordering::Equal;
        if n == 1 {
            if b_root {
                if &b < hi {
                    out.push(RootInterval { lo: b.clone(), hi: b });
                }
            } else {
                out.push(tighten(&sf, &seq, a, b));
            }
            continue;
        }
        let m = midpoint(&a, &b);
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    Ok((sf, out))
}

/// Moves a zero left endpoint inward until both endpoint signs are non-zero.
fn tighten(sf: &UniPoly, seq: &[UniPoly], mut a: Rational, mut b: Rational) -> RootInterval {
    while sf.sign_at(&a) == Ordering::Equal {
        let m = midpoint(&a, &b);
        match sf.sign_at(&m) {
            Ordering::Equal => return RootInterval { lo: m.clone(), hi: m },
            _ => {
                if count_with(seq, &a, &m) == 1 {
                    b = m;
                } else {
                    a = m;
                }
            }
        }
    }
    RootInterval { lo: a, hi: b }
}

/// Roots in `(lo, infinity)`.
pub fn isolate_roots_above(p: &UniPoly, lo: &Rational) -> Result<(UniPoly, Vec<RootInterval>), PolyError> {
    let b = root_bound(p, lo)?;
    isolate_roots(p, lo, &b)
}

/// All real roots.
pub fn isolate_all(p: &UniPoly) -> Result<(UniPoly, Vec<RootInterval>), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let b = p.cauchy_bound();
    isolate_roots(p, &(-b.clone()), &b)
}

/// Bisects an isolating interval of a squarefree `p` until it is narrower
/// than `width` (or hits the root exactly).
pub fn refine_interval(p: &UniPoly, iv: &RootInterval, width: &Rational) -> RootInterval {
    let mut a = iv.lo.clone();
    let mut b = iv.hi.clone();
    if a == b {
        return iv.clone();
    }
    let sa = p.sign_at(&a);
    while &b - &a > *width {
        let m = midpoint(&a, &b);
        let sm = p.sign_at(&m);
        if sm == Ordering::Equal {
            return RootInterval { lo: m.clone(), hi: m };
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    RootInterval { lo: a, hi: b }
}

/// True if `p` has no positive root, checked exactly.
pub fn no_positive_root(p: &UniPoly) -> Result<bool, PolyError> {
    Ok(count_roots_above(p, &Rational::zero())? == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::poly::dense::Var;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c, Var::X)
    }

    #[test]
    fn counts_on_half_open_intervals() {
        let q = p(&[-6, 11, -6, 1]); // roots 1, 2, 3
        assert_eq!(sturm_count(&q, &int(0), &int(4)).unwrap(), 3);
        assert_eq!(sturm_count(&q, &int(1), &int(3)).unwrap(), 2);
        assert_eq!(sturm_count(&q, &int(0), &int(1)).unwrap(), 1);
        assert_eq!(count_roots_above(&q, &int(2)).unwrap(), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &int(-10), &int(10)).unwrap(), 0);
    }

    #[test]
    fn isolation_with_rational_and_multiple_roots() {
        // (x - 1)^2 (x^2 - 2)
        let q = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[-2, 0, 1]));
        let (sf, roots) = isolate_all(&q).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[1].lo <= int(1) && roots[1].hi >= int(1));
        for r in roots.iter().filter(|r| !r.is_exact()) {
            assert_eq!(sf.sign_at(&r.lo) as i32 * sf.sign_at(&r.hi) as i32, -1);
        }
        assert!(roots[0].hi <= roots[1].lo && roots[1].hi <= roots[2].lo);
    }

    #[test]
    fn open_interval_excludes_endpoints() {
        let q = p(&[-6, 11, -6, 1]);
        let (_, r) = isolate_roots(&q, &int(1), &int(3)).unwrap();
        assert_eq!(r, vec![RootInterval { lo: int(2), hi: int(2) }]);
        let (_, r) = isolate_roots_above(&q, &int(0)).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn refinement_narrows() {
        let q = p(&[-2, 0, 1]);
        let (sf, r) = isolate_roots_above(&q, &int(0)).unwrap();
        let t = refine_interval(&sf, &r[0], &rat(1, 1_000_000));
        assert!(&t.hi - &t.lo <= rat(1, 1_000_000));
        assert!(&t.lo * &t.lo < int(2) && &t.hi * &t.hi > int(2));
    }
}
