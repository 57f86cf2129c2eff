//! Certified continued fraction expansions.
//!
//! Partial quotients are extracted from an outward-rounded enclosure of
//! the value: a quotient is accepted only when both endpoints of the
//! (exact rational) interval have the same floor, and the fractional
//! remainder is certified strictly positive before inverting.  Any failure
//! escalates the evaluation precision and starts over, so every reported
//! quotient holds for the true value, not for an approximation of it.
//!
//! Convergents use the standard recurrence with `p(0)/q(0) = a0/1`, and
//! every batch is checked against the determinant identity
//! `p(k) q(k-1) - p(k-1) q(k) = (-1)^(k-1)`.

use crate::realnum::{Expr, Precision, RealError};
use rug::{Integer, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub k: usize,
    pub p: Integer,
    pub q: Integer,
}

fn floor_int(r: &Rational) -> Integer {
    let (q, _) = <(Integer, Integer)>::from(r.numer().div_rem_floor_ref(r.denom()));
    q
}

/// Quotients certified by an exact rational interval; stops early when the
/// interval no longer pins down the next quotient.
fn interval_quotients(mut lo: Rational, mut hi: Rational, max: usize) -> Vec<Integer> {
    let mut out = Vec::new();
    while out.len() < max {
        let a = floor_int(&lo);
        if a != floor_int(&hi) {
            break;
        }
        lo -= Rational::from(&a);
        hi -= Rational::from(&a);
        out.push(a);
        if lo.cmp0() == std::cmp::Ordering::Equal {
            break;
        }
        let new_lo = Rational::from(hi.recip_ref());
        let new_hi = Rational::from(lo.recip_ref());
        lo = new_lo;
        hi = new_hi;
    }
    out
}

fn rational_quotients(mut r: Rational, max: usize) -> Vec<Integer> {
    let mut out = Vec::new();
    while out.len() < max {
        let a = floor_int(&r);
        r -= Rational::from(&a);
        out.push(a);
        if r.cmp0() == std::cmp::Ordering::Equal {
            break;
        }
        r.recip_mut();
    }
    out
}

/// The first `count` partial quotients of `x`.
///
/// Rational values use exact arithmetic and may terminate early;
/// irrational values never do, and an error is returned only if the
/// precision cap cannot certify the requested prefix.
pub fn partial_quotients(
    x: &Expr,
    count: usize,
    pol: Precision,
) -> Result<Vec<Integer>, RealError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if let Some(r) = x.as_rational() {
        return Ok(rational_quotients(r, count));
    }
    let mut last = pol.start;
    for bits in pol.ladder() {
        last = bits;
        let c = match x.eval(bits) {
            Ok(c) => c,
            Err(RealError::OutOfDomain { what }) => {
                return Err(RealError::OutOfDomain { what })
            }
            Err(_) => continue,
        };
        let Some((lo, hi)) = c.as_enclosure().to_rationals() else {
            continue;
        };
        let qs = interval_quotients(lo, hi, count);
        if qs.len() >= count {
            return Ok(qs);
        }
    }
    Err(RealError::UndecidableSign {
        what: format!("continued fraction prefix of length {count} for {x}"),
        precision_bits: last,
    })
}

/// Convergents `p(k)/q(k)` from a quotient prefix.
pub fn convergents_from_quotients(quotients: &[Integer]) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(quotients.len());
    let mut p_prev2 = Integer::from(0);
    let mut p_prev = Integer::from(1);
    let mut q_prev2 = Integer::from(1);
    let mut q_prev = Integer::from(0);
    for (k, a) in quotients.iter().enumerate() {
        let p = Integer::from(a * &p_prev) + &p_prev2;
        let q = Integer::from(a * &q_prev) + &q_prev2;
        out.push(Convergent {
            k,
            p: p.clone(),
            q: q.clone(),
        });
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    debug_assert!(determinant_holds(&out));
    out
}

/// `p(k) q(k-1) - p(k-1) q(k) = (-1)^(k-1)` for every adjacent pair.
pub fn determinant_holds(convs: &[Convergent]) -> bool {
    convs.windows(2).all(|w| {
        let det = Integer::from(&w[1].p * &w[0].q) - Integer::from(&w[0].p * &w[1].q);
        if w[1].k % 2 == 1 {
            det == 1
        } else {
            det == -1
        }
    })
}

pub fn convergents(x: &Expr, count: usize, pol: Precision) -> Result<Vec<Convergent>, RealError> {
    let qs = partial_quotients(x, count, pol)?;
    Ok(convergents_from_quotients(&qs))
}

/// The convergent with index `k` (0-based, `p(0)/q(0) = a0/1`).
pub fn convergent(x: &Expr, k: usize, pol: Precision) -> Result<Convergent, RealError> {
    let mut cs = convergents(x, k + 1, pol)?;
    cs.pop().ok_or_else(|| RealError::UndecidableSign {
        what: format!("convergent {k} of {x}"),
        precision_bits: pol.cap,
    })
}

/// First convergent whose denominator exceeds `bound`.
pub fn first_denominator_exceeding(
    x: &Expr,
    bound: &Integer,
    pol: Precision,
) -> Result<Convergent, RealError> {
    let mut count = 64;
    loop {
        let qs = partial_quotients(x, count, pol)?;
        for c in convergents_from_quotients(&qs) {
            if c.q > *bound {
                return Ok(c);
            }
        }
        if qs.len() < count {
            // Rational value exhausted: no denominator ever exceeds.
            return Err(RealError::OutOfDomain {
                what: format!("no convergent denominator of {x} exceeds {bound}"),
            });
        }
        count *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::parse::parse_expr;

    #[test]
    fn sqrt2_quotients() {
        let qs = partial_quotients(&Expr::int(2).sqrt(), 12, Precision::default()).unwrap();
        assert_eq!(qs[0], 1);
        assert!(qs[1..].iter().all(|a| *a == 2));
    }

    #[test]
    fn rational_terminates() {
        let qs = partial_quotients(&Expr::ratio(355, 113), 10, Precision::default()).unwrap();
        assert_eq!(qs, vec![3, 7, 16]);
    }

    #[test]
    fn convergents_of_pi_like() {
        let cs = convergents_from_quotients(
            &[3, 7, 15, 1].iter().map(|&v| Integer::from(v)).collect::<Vec<_>>(),
        );
        assert_eq!(cs[1].p, 22);
        assert_eq!(cs[1].q, 7);
        assert_eq!(cs[3].p, 355);
        assert_eq!(cs[3].q, 113);
        assert!(determinant_holds(&cs));
    }

    #[test]
    fn approximation_quality() {
        let x = parse_expr("log(10)/log(alpha)").unwrap();
        let cs = convergents(&x, 20, Precision::default()).unwrap();
        for w in cs.windows(2) {
            // |x - p/q| < 1 / (q(k) q(k+1)), certified.
            let err = &x - Expr::ratio(w[0].p.clone(), w[0].q.clone());
            let err = if w[0].k % 2 == 0 { err } else { -err };
            let rhs = Expr::ratio(1, Integer::from(&w[0].q * &w[1].q));
            assert!(crate::realnum::certify_less(&err, &rhs, Precision::default()).unwrap());
            assert!(crate::realnum::certify_positive(&err, Precision::default()).unwrap());
        }
    }

    #[test]
    fn doubled_precision_agrees() {
        let x = parse_expr("log(10)/log(alpha)").unwrap();
        let a = partial_quotients(&x, 40, Precision::new(192, 8192)).unwrap();
        let b = partial_quotients(&x, 40, Precision::new(384, 8192)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn first_exceeding_matches_scan() {
        let x = parse_expr("log(10)/log(alpha)").unwrap();
        let bound = Integer::from(1_000_000_000u64);
        let c = first_denominator_exceeding(&x, &bound, Precision::default()).unwrap();
        let all = convergents(&x, c.k + 1, Precision::default()).unwrap();
        assert!(all[c.k].q > bound);
        assert!(all[..c.k].iter().all(|cv| cv.q <= bound));
    }
}
