//! Real numbers as certified enclosures.
//!
//! Every real quantity in this crate is described by an expression tree
//! ([`Expr`]) over integers, rationals, field operations, `sqrt`, `log` and
//! `exp`.  Evaluating an expression at a working precision produces a
//! [`CReal`]: an interval with outward-rounded endpoints that provably
//! contains the exact value.  Predicates (comparisons, signs, distance to
//! the nearest integer) re-evaluate the tree at doubling precision until
//! the interval separates, so a `true`/`false` answer is always backed by
//! a finite-precision proof.  When the escalation cap is reached without a
//! decision the caller gets [`RealError::UndecidableSign`] instead of a
//! guess.

mod expr;
mod interval;
pub mod parse;

pub use expr::Expr;
pub use interval::Enclosure;

use rug::{Integer, Rational};
use std::fmt;

/// Working-precision policy: evaluation starts at `start` bits and doubles
/// until a predicate is decided or `cap` is exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start: u32,
    pub cap: u32,
}

pub const DEFAULT_START_BITS: u32 = 192;
pub const DEFAULT_CAP_BITS: u32 = 8192;

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start: DEFAULT_START_BITS,
            cap: DEFAULT_CAP_BITS,
        }
    }
}

impl Precision {
    pub fn new(start: u32, cap: u32) -> Self {
        let start = start.max(8);
        Precision {
            start,
            cap: cap.max(start),
        }
    }

    /// Reads `QPELL_PREC_BITS` and `QPELL_PREC_CAP`, falling back to the
    /// compiled defaults for anything missing or malformed.
    pub fn from_env() -> Self {
        let read = |key: &str, dflt: u32| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.parse::<u32>().ok())
                .unwrap_or(dflt)
        };
        Precision::new(
            read("QPELL_PREC_BITS", DEFAULT_START_BITS),
            read("QPELL_PREC_CAP", DEFAULT_CAP_BITS),
        )
    }

    /// Precisions to try, in order: start, 2*start, ... up to the cap.
    pub fn ladder(self) -> impl Iterator<Item = u32> {
        let cap = self.cap;
        std::iter::successors(Some(self.start), move |&p| {
            p.checked_mul(2).filter(|&n| n <= cap)
        })
    }
}

/// Errors from certified evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealError {
    /// The enclosures never separated before the precision cap.
    UndecidableSign { what: String, precision_bits: u32 },
    /// The value is provably outside the domain of an operation
    /// (logarithm of a non-positive number, division by exact zero, ...).
    OutOfDomain { what: String },
}

impl fmt::Display for RealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealError::UndecidableSign {
                what,
                precision_bits,
            } => write!(f, "UNDECIDABLE_SIGN: {what} (cap {precision_bits} bits)"),
            RealError::OutOfDomain { what } => write!(f, "out of domain: {what}"),
        }
    }
}

impl std::error::Error for RealError {}

/// A certified enclosure of a real number: `lo <= x <= hi` with both
/// endpoints exact binary floats at `precision_bits` working precision.
#[derive(Clone, Debug)]
pub struct CReal {
    lo: rug::Float,
    hi: rug::Float,
    precision_bits: u32,
}

impl CReal {
    pub(crate) fn from_enclosure(e: Enclosure, bits: u32) -> Self {
        CReal {
            lo: e.lo,
            hi: e.hi,
            precision_bits: bits,
        }
    }

    pub fn lo(&self) -> &rug::Float {
        &self.lo
    }

    pub fn hi(&self) -> &rug::Float {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Interval midpoint, rounded to nearest.
    pub fn center(&self) -> rug::Float {
        let p = self.lo.prec().max(self.hi.prec());
        let mut c = rug::Float::with_val(p + 1, &self.lo + &self.hi);
        c /= 2u32;
        c
    }

    /// Half-width of the interval, rounded up.
    pub fn radius(&self) -> rug::Float {
        let p = self.lo.prec().max(self.hi.prec());
        let (mut r, _) = rug::Float::with_val_round(p, &self.hi - &self.lo, rug::float::Round::Up);
        r /= 2u32;
        r
    }

    pub fn contains_integer(&self, n: &Integer) -> bool {
        self.lo <= *n && *n <= self.hi
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    /// Midpoint as `f64` (convenience for display and reports; never used
    /// in certified decisions).
    pub fn to_f64(&self) -> f64 {
        self.center().to_f64()
    }

    pub(crate) fn as_enclosure(&self) -> Enclosure {
        Enclosure {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }
}

impl fmt::Display for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12e} (+/- {:.3e})", self.center(), self.radius())
    }
}

/// Certifies `a < b`, escalating precision until the enclosures separate.
/// Returns `Ok(false)` when `b < a` is certified instead.
pub fn certify_less(a: &Expr, b: &Expr, pol: Precision) -> Result<bool, RealError> {
    let mut last = pol.start;
    for bits in pol.ladder() {
        last = bits;
        let (ea, eb) = match (a.eval_enclosure(bits), b.eval_enclosure(bits)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(expr::EvalError::Domain(d)), _) | (_, Err(expr::EvalError::Domain(d))) => {
                return Err(RealError::OutOfDomain { what: d.into() })
            }
            _ => continue,
        };
        if ea.hi < eb.lo {
            return Ok(true);
        }
        if eb.hi < ea.lo {
            return Ok(false);
        }
    }
    Err(RealError::UndecidableSign {
        what: format!("compare {a} vs {b}"),
        precision_bits: last,
    })
}

/// Certifies the sign of `a`: `Ok(1)` for provably positive, `Ok(-1)` for
/// provably negative, `Ok(0)` only for an exactly-zero enclosure.
pub fn certify_sign(a: &Expr, pol: Precision) -> Result<i32, RealError> {
    let mut last = pol.start;
    for bits in pol.ladder() {
        last = bits;
        let e = match a.eval_enclosure(bits) {
            Ok(x) => x,
            Err(expr::EvalError::Domain(d)) => return Err(RealError::OutOfDomain { what: d.into() }),
            Err(expr::EvalError::Inconclusive(_)) => continue,
        };
        if e.lo.is_sign_positive() && !e.lo.is_zero() {
            return Ok(1);
        }
        if e.hi.is_sign_negative() && !e.hi.is_zero() {
            return Ok(-1);
        }
        if e.lo.is_zero() && e.hi.is_zero() {
            return Ok(0);
        }
    }
    Err(RealError::UndecidableSign {
        what: format!("sign of {a}"),
        precision_bits: last,
    })
}

pub fn certify_positive(a: &Expr, pol: Precision) -> Result<bool, RealError> {
    certify_sign(a, pol).map(|s| s > 0)
}

/// Distance from an expression's value to its nearest integer.
#[derive(Clone, Debug)]
pub struct NearestInt {
    pub nearest: Integer,
    pub distance: CReal,
}

/// Computes `|| x ||`, the distance from `x` to the nearest integer,
/// together with that integer.
///
/// Exact rationals short-circuit to exact arithmetic, so a half-integer
/// input yields distance exactly 1/2.  Irrational inputs escalate
/// precision until the enclosure fits inside one half-open unit interval
/// around a single integer.
pub fn nearest_int_distance(x: &Expr, pol: Precision) -> Result<NearestInt, RealError> {
    if let Some(r) = x.as_rational() {
        let nearest = Integer::from(r.round_ref());
        let dist: Rational = (r - &nearest).abs();
        let bits = pol.start.max(64);
        let enc = Enclosure::from_rational(&dist, bits);
        return Ok(NearestInt {
            nearest,
            distance: CReal::from_enclosure(enc, bits),
        });
    }
    let mut last = pol.start;
    for bits in pol.ladder() {
        last = bits;
        let e = match x.eval_enclosure(bits) {
            Ok(x) => x,
            Err(expr::EvalError::Domain(d)) => return Err(RealError::OutOfDomain { what: d.into() }),
            Err(expr::EvalError::Inconclusive(_)) => continue,
        };
        let mid = e.midpoint();
        let Some(mid_rat) = mid.to_rational() else {
            continue;
        };
        let nearest = Integer::from(mid_rat.round_ref());
        // The enclosure must lie strictly inside (nearest - 1/2, nearest + 1/2)
        // for the nearest integer to be certain.
        let work = bits.max(nearest.significant_bits() + 8);
        let half_lo = Enclosure::from_integer(&nearest, work)
            .sub(&Enclosure::from_rational(&Rational::from((1, 2)), work), work);
        let half_hi = Enclosure::from_integer(&nearest, work)
            .add(&Enclosure::from_rational(&Rational::from((1, 2)), work), work);
        if !(e.lo > half_lo.hi && e.hi < half_hi.lo) {
            continue;
        }
        let n_enc = Enclosure::from_integer(&nearest, work);
        let dist = e.sub(&n_enc, work).abs();
        return Ok(NearestInt {
            nearest,
            distance: CReal::from_enclosure(dist, work),
        });
    }
    Err(RealError::UndecidableSign {
        what: format!("nearest integer of {x}"),
        precision_bits: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Expr {
        Expr::int(2).sqrt()
    }

    fn alpha() -> Expr {
        Expr::int(1) + sqrt2()
    }

    #[test]
    fn sqrt2_encloses_truth() {
        let c = sqrt2().eval(192).unwrap();
        let lo = c.lo().to_f64();
        let hi = c.hi().to_f64();
        assert!(lo <= 1.4142135623730951 && 1.4142135623730951 <= hi);
        assert!(c.radius().to_f64() < 2f64.powi(-60));
    }

    #[test]
    fn conjugate_product_is_minus_one() {
        let beta = Expr::int(1) - sqrt2();
        let prod = alpha() * beta;
        let c = prod.eval(192).unwrap();
        assert!(c.contains_integer(&rug::Integer::from(-1)));
        assert!(c.radius().to_f64() < 1e-50);
    }

    #[test]
    fn log_alpha_matches_f64() {
        let c = alpha().log().eval(192).unwrap();
        let want = (1f64 + 2f64.sqrt()).ln();
        assert!((c.to_f64() - want).abs() < 1e-14);
    }

    #[test]
    fn certified_comparisons() {
        let pol = Precision::default();
        assert!(certify_less(&sqrt2(), &Expr::ratio(15, 10), pol).unwrap());
        assert!(!certify_less(&Expr::int(2), &sqrt2(), pol).unwrap());
        assert_eq!(certify_sign(&(alpha().log()), pol).unwrap(), 1);
        assert_eq!(
            certify_sign(&(Expr::int(1) - sqrt2()), pol).unwrap(),
            -1
        );
    }

    #[test]
    fn equal_expressions_are_undecidable() {
        let pol = Precision::new(64, 256);
        let e = sqrt2() * sqrt2();
        let err = certify_less(&e, &(sqrt2() * sqrt2()), pol).unwrap_err();
        match err {
            RealError::UndecidableSign { precision_bits, .. } => {
                assert_eq!(precision_bits, 256)
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn domain_errors_are_final() {
        let e = (Expr::int(0) - Expr::int(3)).log();
        assert!(matches!(
            e.eval(64),
            Err(RealError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn nearest_int_exact_rationals() {
        let pol = Precision::default();
        let r = nearest_int_distance(&Expr::ratio(7, 2), pol).unwrap();
        assert!(r.distance.contains_rational(&rug::Rational::from((1, 2))));
        assert_eq!(r.distance.radius(), 0);
        let r = nearest_int_distance(&Expr::ratio(22, 7), pol).unwrap();
        assert_eq!(r.nearest, 3);
        assert!(r.distance.contains_rational(&rug::Rational::from((1, 7))));
    }

    #[test]
    fn nearest_int_irrational() {
        let pol = Precision::default();
        let r = nearest_int_distance(&alpha().pow_int(2), pol).unwrap();
        assert_eq!(r.nearest, 6);
        let d = r.distance.to_f64();
        assert!((d - (6.0 - (3.0 + 2.0 * 2f64.sqrt()))).abs() < 1e-12);
    }

    #[test]
    fn refinement_tightens() {
        let e = (alpha().log() / Expr::int(10).log()) * Expr::int(12345);
        let mut prev: Option<rug::Float> = None;
        for bits in [64u32, 128, 256, 512, 1024] {
            let c = e.eval(bits).unwrap();
            let rad = c.radius();
            if let Some(p) = prev {
                assert!(rad <= p, "radius grew at {bits} bits");
            }
            prev = Some(rad);
        }
    }

    #[test]
    fn parser_round_trip() {
        let pol = Precision::default();
        let e = parse::parse_expr("log(10)/log(alpha)").unwrap();
        let c = e.eval(192).unwrap();
        assert!((c.to_f64() - 10f64.ln() / (1.0 + 2f64.sqrt()).ln()).abs() < 1e-14);
        let again = parse::parse_expr(&e.to_string()).unwrap();
        assert!(!certify_less(&e, &again, Precision::new(64, 128)).is_ok());
        for (src, val) in [
            ("4.5", 4.5),
            ("3.2e30", 3.2e30),
            ("21/10 * 2", 4.2),
            ("-(2^-2)", -0.25),
            ("exp(1)", std::f64::consts::E),
            ("sqrt(2)^2", 2.0),
        ] {
            let c = parse::parse_expr(src).unwrap().eval(128).unwrap();
            assert!(
                (c.to_f64() - val).abs() < 1e-10,
                "{src} -> {} want {val}",
                c.to_f64()
            );
        }
        assert!(parse::parse_expr("frob(3)").is_err());
        assert!(parse::parse_expr("1 +").is_err());
        let _ = pol;
    }
}
