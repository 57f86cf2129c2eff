//! Outward-rounded interval kernel on top of MPFR directed rounding.
//!
//! Lower endpoints are computed with `Round::Down`, upper endpoints with
//! `Round::Up`, so closure under every operation is a machine-checkable
//! consequence of MPFR's correct rounding.  The kernel is deliberately
//! dumb: multiplication and division take the min/max over endpoint
//! products instead of a sign-classified case split.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

#[derive(Clone, Debug)]
pub struct Enclosure {
    pub(crate) lo: Float,
    pub(crate) hi: Float,
}

fn down<T>(bits: u32, src: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(bits, src, Round::Down).0
}

fn up<T>(bits: u32, src: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = std::cmp::Ordering>,
{
    Float::with_val_round(bits, src, Round::Up).0
}

impl Enclosure {
    pub fn from_integer(n: &Integer, bits: u32) -> Self {
        Enclosure {
            lo: Float::with_val_round(bits, n, Round::Down).0,
            hi: Float::with_val_round(bits, n, Round::Up).0,
        }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        Enclosure {
            lo: Float::with_val_round(bits, r, Round::Down).0,
            hi: Float::with_val_round(bits, r, Round::Up).0,
        }
    }

    pub fn exact_zero(bits: u32) -> Self {
        Enclosure {
            lo: Float::with_val(bits, 0),
            hi: Float::with_val(bits, 0),
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn midpoint(&self) -> Float {
        let p = self.lo.prec().max(self.hi.prec());
        let mut m = Float::with_val(p + 1, &self.lo + &self.hi);
        m /= 2u32;
        m
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_sign_positive() && !self.lo.is_zero()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_sign_negative() && !self.hi.is_zero()
    }

    pub fn add(&self, rhs: &Enclosure, bits: u32) -> Enclosure {
        Enclosure {
            lo: Float::with_val_round(bits, &self.lo + &rhs.lo, Round::Down).0,
            hi: Float::with_val_round(bits, &self.hi + &rhs.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, rhs: &Enclosure, bits: u32) -> Enclosure {
        Enclosure {
            lo: Float::with_val_round(bits, &self.lo - &rhs.hi, Round::Down).0,
            hi: Float::with_val_round(bits, &self.hi - &rhs.lo, Round::Up).0,
        }
    }

    pub fn neg(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: Float::with_val_round(bits, -&self.hi, Round::Down).0,
            hi: Float::with_val_round(bits, -&self.lo, Round::Up).0,
        }
    }

    pub fn abs(&self) -> Enclosure {
        if self.is_strictly_negative() {
            let p = self.lo.prec();
            self.neg(p)
        } else if self.contains_zero() {
            let p = self.lo.prec();
            let hi = {
                let a = up(p, -&self.lo);
                if a > self.hi {
                    a
                } else {
                    self.hi.clone()
                }
            };
            Enclosure {
                lo: Float::with_val(p, 0),
                hi,
            }
        } else {
            self.clone()
        }
    }

    pub fn mul(&self, rhs: &Enclosure, bits: u32) -> Enclosure {
        let cands = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let l = down(bits, a * b);
            let h = up(bits, a * b);
            lo = Some(match lo {
                Some(cur) if cur <= l => cur,
                _ => l,
            });
            hi = Some(match hi {
                Some(cur) if cur >= h => cur,
                _ => h,
            });
        }
        Enclosure {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    /// `None` when the divisor encloses zero.
    pub fn div(&self, rhs: &Enclosure, bits: u32) -> Option<Enclosure> {
        if rhs.contains_zero() {
            return None;
        }
        let cands = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let l = down(bits, a / b);
            let h = up(bits, a / b);
            lo = Some(match lo {
                Some(cur) if cur <= l => cur,
                _ => l,
            });
            hi = Some(match hi {
                Some(cur) if cur >= h => cur,
                _ => h,
            });
        }
        Some(Enclosure {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    /// `None` when the argument cannot be certified non-negative.
    pub fn sqrt(&self, bits: u32) -> Option<Enclosure> {
        if self.lo.is_sign_negative() && !self.lo.is_zero() {
            return None;
        }
        Some(Enclosure {
            lo: down(bits, self.lo.sqrt_ref()),
            hi: up(bits, self.hi.sqrt_ref()),
        })
    }

    /// `None` when the argument cannot be certified strictly positive.
    pub fn log(&self, bits: u32) -> Option<Enclosure> {
        if !self.is_strictly_positive() {
            return None;
        }
        Some(Enclosure {
            lo: down(bits, self.lo.ln_ref()),
            hi: up(bits, self.hi.ln_ref()),
        })
    }

    pub fn exp(&self, bits: u32) -> Enclosure {
        Enclosure {
            lo: down(bits, self.lo.exp_ref()),
            hi: up(bits, self.hi.exp_ref()),
        }
    }

    /// Integer power; negative exponents go through the reciprocal and
    /// return `None` on an enclosure of zero.
    pub fn pow_int(&self, k: i64, bits: u32) -> Option<Enclosure> {
        if k < 0 {
            let pos = self.pow_int(-k, bits)?;
            let one = Enclosure::from_integer(&Integer::from(1), bits);
            return one.div(&pos, bits);
        }
        if k == 0 {
            return Some(Enclosure::from_integer(&Integer::from(1), bits));
        }
        let k = u32::try_from(k).ok()?;
        let lo_p_down = down(bits, (&self.lo).pow(k));
        let lo_p_up = up(bits, (&self.lo).pow(k));
        let hi_p_down = down(bits, (&self.hi).pow(k));
        let hi_p_up = up(bits, (&self.hi).pow(k));
        if k % 2 == 1 {
            return Some(Enclosure {
                lo: lo_p_down,
                hi: hi_p_up,
            });
        }
        // Even power: the image of an interval straddling zero starts at 0.
        if self.contains_zero() {
            let hi = if lo_p_up > hi_p_up { lo_p_up } else { hi_p_up };
            return Some(Enclosure {
                lo: Float::with_val(bits, 0),
                hi,
            });
        }
        if self.is_strictly_negative() {
            return Some(Enclosure {
                lo: hi_p_down,
                hi: lo_p_up,
            });
        }
        Some(Enclosure {
            lo: lo_p_down,
            hi: hi_p_up,
        })
    }

    /// Exact rational endpoints (binary floats are rationals).
    pub fn to_rationals(&self) -> Option<(Rational, Rational)> {
        Some((self.lo.to_rational()?, self.hi.to_rational()?))
    }

    /// Width `hi - lo`, rounded up.
    pub fn width(&self) -> Float {
        let p = self.lo.prec().max(self.hi.prec());
        up(p, &self.hi - &self.lo)
    }
}
