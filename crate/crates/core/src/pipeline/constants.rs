//! Reference values the pipeline compares against: published convergent
//! denominators, epsilon values, thresholds, and bound constants, together
//! with exact parsers for decimal literals.
//!
//! Denominator provenance: `TAU` refers to log10/logα, `INV` to
//! logα/log10.  Values marked "confirmed" are bit-identical to our own
//! certified continued-fraction computation; `REPORTED_INDEX_MULTIPLIER`
//! is the one published denominator that is not a convergent denominator
//! of τ at all (it equals twice the index-71 denominator), which the
//! explicit-multiplier entry point of the reduction engine handles.

use rug::{Integer, Rational};

fn int(s: &str) -> Integer {
    Integer::from_str_radix(s, 10).expect("integer literal")
}

/// Exact rational from a plain decimal literal like "0.000389" or "4.5".
pub fn dec(s: &str) -> Rational {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i32, rest),
        None => (1, s),
    };
    let (digits, scale) = match body.split_once('.') {
        Some((a, b)) => (format!("{a}{b}"), b.len() as u32),
        None => (body.to_string(), 0),
    };
    let num = int(&digits) * sign;
    let den = Integer::from(Integer::u_pow_u(10, scale));
    Rational::from((num, den))
}

/// Exact rational from mantissa-times-power notation, e.g. ("3.2", 30).
pub fn dec_pow10(mantissa: &str, exp: u32) -> Rational {
    dec(mantissa) * Rational::from(Integer::from(Integer::u_pow_u(10, exp)))
}

// confirmed convergent denominators of tau = log10/logalpha
pub fn tau_den_40() -> Integer {
    int("30910886367884945")
}
pub fn tau_den_42() -> Integer {
    int("920197043232024959")
}
pub fn tau_den_63() -> Integer {
    int("7250590983807477127734940855")
}
pub fn tau_den_66() -> Integer {
    int("309528919400258431712617167824")
}
pub fn tau_den_68() -> Integer {
    int("27232938992914655197439992935676")
}
pub fn tau_den_71() -> Integer {
    int("248942652375305382029206704387920")
}

// confirmed convergent denominator of inv = logalpha/log10
pub fn inv_den_68() -> Integer {
    int("2512046602227734280329853086909")
}

/// The published multiplier for the second reduction of the difference
/// theorem.  Not a convergent denominator of tau; equals
/// `2 * tau_den_71()`.
pub fn reported_index_multiplier() -> Integer {
    int("497885304750610764058413408775840")
}

// published epsilon values
pub const EPS_THM3_GAP: &str = "0.000389";
pub const EPS_THM3_INDEX: &str = "0.107792";
pub const EPS_THM4_LEADING: &str = "0.241531";
pub const EPS_THM5_GAP: &str = "0.1967722";
pub const EPS_THM5_INDEX: &str = "0.462984";

// published reduction thresholds (claimed upper bounds on log(Aq/eps)/logB)
pub const THRESHOLD_THM3_GAP: &str = "94";
pub const THRESHOLD_THM4_LEADING: &str = "83.71";
pub const THRESHOLD_THM4_MID: &str = "75.24";
pub const THRESHOLD_THM4_FULL: &str = "46.29";
pub const THRESHOLD_THM5_GAP: &str = "80.35";
pub const THRESHOLD_THM5_INDEX: &str = "49.26";

// published reduced bounds
pub const BOUND_THM3_GAP: i64 = 94; // n - m
pub const BOUND_THM3_INDEX: i64 = 91; // n
pub const BOUND_THM4_M1: i64 = 83;
pub const BOUND_THM4_M2: i64 = 75;
pub const BOUND_THM4_N: i64 = 46; // stated strictly: n < 46
pub const BOUND_THM5_GAP: i64 = 80; // n - m
pub const BOUND_THM5_INDEX: i64 = 49; // k

// published initial-bound constants
pub fn c_thm3_case1() -> Rational {
    dec_pow10("4.1", 13)
}
pub fn c_thm3_case1_absorbed() -> Rational {
    dec_pow10("4.2", 13)
}
pub fn c_thm3_case2() -> Rational {
    dec_pow10("1.8", 26)
}
pub fn c_thm3_case2_absorbed() -> Rational {
    dec_pow10("1.9", 26)
}
pub fn m_thm3() -> Rational {
    dec_pow10("3.2", 30)
}
pub fn c_thm4_leading() -> Rational {
    dec_pow10("2.3", 13)
}
pub fn c_thm4_base() -> Rational {
    dec_pow10("4", 12)
}
pub fn m_thm4_combined() -> Rational {
    dec_pow10("5", 27)
}
pub fn m_thm4_after_m1() -> Rational {
    dec_pow10("1.2", 27)
}
pub fn m_thm4_after_m2() -> Rational {
    dec_pow10("5", 15)
}
pub fn c_thm5_case1() -> Rational {
    dec_pow10("4.1", 13)
}
pub fn c_thm5_case1_absorbed() -> Rational {
    dec_pow10("4.2", 13)
}
pub fn c_thm5_case2() -> Rational {
    dec_pow10("4", 12)
}
pub fn m_thm5_combined() -> Rational {
    dec_pow10("2", 28)
}
pub fn m_thm5_after_gap() -> Rational {
    dec_pow10("8.8", 15)
}

// default sweep limits
pub const SWEEP_THM3: usize = 95;
pub const SWEEP_THM4: usize = 50;
pub const SWEEP_THM5: usize = 50;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(dec("0.000389"), Rational::from((389, 1000000)));
        assert_eq!(dec("4.5"), Rational::from((9, 2)));
        assert_eq!(dec("94"), Rational::from(94));
        assert_eq!(dec("-0.25"), Rational::from((-1, 4)));
        assert_eq!(
            dec_pow10("3.2", 30),
            Rational::from(int("3200000000000000000000000000000"))
        );
    }

    #[test]
    fn reported_multiplier_is_twice_the_index_71_denominator() {
        assert_eq!(reported_index_multiplier(), Integer::from(2) * tau_den_71());
    }
}
