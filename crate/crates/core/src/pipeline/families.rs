//! Builders for the inhomogeneous shift families fed to the reduction
//! engine.  Small families are materialized; the three-block family is
//! streamed because its faithful range runs to several million cases.

use crate::realnum::Expr;
use crate::reduction::{MuCase, MuFamily};
use crate::sequences::log_alpha;
use rug::{Integer, Rational};
use std::cmp::Ordering;

fn pow10(k: u32) -> Integer {
    Integer::from(Integer::u_pow_u(10, k))
}

/// Exact arithmetic in the quadratic field generated by sqrt(2).  Used
/// to certify which family shifts are exact powers of alpha: the
/// inhomogeneous lemma cannot treat those cases (their epsilon is
/// negative at every multiplier), so the pipelines carry them as
/// excluded and cover them with the classical homogeneous bound.
#[derive(Clone, Debug, PartialEq)]
struct Qr2 {
    a: Rational,
    b: Rational,
}

impl Qr2 {
    fn new<A: Into<Rational>, B: Into<Rational>>(a: A, b: B) -> Self {
        Qr2 {
            a: a.into(),
            b: b.into(),
        }
    }

    fn one() -> Self {
        Qr2::new(1, 0)
    }

    fn alpha() -> Self {
        Qr2::new(1, 1)
    }

    fn alpha_inv() -> Self {
        // 1/(1 + sqrt 2) = sqrt(2) - 1
        Qr2::new(-1, 1)
    }

    fn mul(&self, o: &Qr2) -> Qr2 {
        let a = Rational::from(&self.a * &o.a) + Rational::from(&self.b * &o.b) * 2u32;
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        Qr2::new(a, b)
    }

    fn sub(&self, o: &Qr2) -> Qr2 {
        Qr2::new(
            Rational::from(&self.a - &o.a),
            Rational::from(&self.b - &o.b),
        )
    }

    fn inv(&self) -> Qr2 {
        // the norm a^2 - 2 b^2 vanishes only at zero
        let n = Rational::from(&self.a * &self.a) - Rational::from(&self.b * &self.b) * 2u32;
        Qr2::new(
            Rational::from(&self.a / &n),
            -Rational::from(&self.b / &n),
        )
    }

    fn pow(&self, k: u32) -> Qr2 {
        let mut out = Qr2::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

/// Returns `t` when `2d / (9 (1 - alpha^(-j))) = alpha^t` exactly.
/// The only such case with a digit `d` is `d = 9, j = 2`, where
/// `1 - alpha^(-2) = 2/alpha` turns the shift into exactly 1.
pub fn gap_shift_alpha_power(d: u32, j: u32) -> Option<i64> {
    let denom = Qr2::one().sub(&Qr2::alpha_inv().pow(j));
    let x = Qr2::new(Rational::from((2 * d as i64, 9)), 0).mul(&denom.inv());
    let mut y = x.clone();
    for t in 0..=8i64 {
        if y == Qr2::one() {
            return Some(t);
        }
        y = y.mul(&Qr2::alpha_inv());
    }
    let mut y = x.mul(&Qr2::alpha());
    for t in 1..=8i64 {
        if y == Qr2::one() {
            return Some(-t);
        }
        y = y.mul(&Qr2::alpha());
    }
    None
}

/// Returns `b` when `2 inner / 9 = 10^b` exactly, which collapses a
/// block-family shift to `b` times the base constant itself.
pub fn block_shift_power_of_ten(inner: &Integer) -> Option<u32> {
    let two = Integer::from(inner * 2u32);
    let mut p = Integer::from(9);
    for b in 0..64u32 {
        match two.cmp(&p) {
            Ordering::Equal => return Some(b),
            Ordering::Less => return None,
            Ordering::Greater => {}
        }
        p *= 10;
    }
    None
}

/// `log(2d/9)/logalpha` for `d = 1..9`.  Exact form for the repdigit-gap
/// and leading-block reductions, and the large-exponent limit of the
/// mid-block family.
pub fn digit_ratio_family() -> Vec<MuCase> {
    (1..=9i64)
        .map(|d| {
            MuCase::new(
                format!("d={d}"),
                Expr::ratio(2 * d, 9).log() / log_alpha(),
            )
        })
        .collect()
}

fn gap_corrected_cases(j_max: u32, mark_resonant: bool) -> Vec<MuCase> {
    let mut out = Vec::with_capacity(9 * j_max as usize);
    for d in 1..=9i64 {
        for j in 1..=j_max {
            let denom = Expr::int(1) - crate::sequences::alpha().pow_int(-(j as i64));
            let mu = (Expr::ratio(2 * d, 9) / denom).log() / log_alpha();
            let label = format!("d={d},j={j}");
            if mark_resonant && gap_shift_alpha_power(d as u32, j).is_some() {
                out.push(MuCase::excluded_case(label, mu));
            } else {
                out.push(MuCase::new(label, mu));
            }
        }
    }
    out
}

/// `log(2d / (9 (1 - alpha^-j))) / logalpha` for `d = 1..9`,
/// `j = 1..j_max` (j is the index gap).
pub fn gap_corrected_family(j_max: u32) -> Vec<MuCase> {
    gap_corrected_cases(j_max, false)
}

/// Same family with the resonant case `d = 9, j = 2` (shift exactly 1)
/// carried as excluded, for the certified reduction walk; the pipeline
/// covers that case with the homogeneous bound.
pub fn gap_corrected_family_certified(j_max: u32) -> Vec<MuCase> {
    gap_corrected_cases(j_max, true)
}

/// `log(9/(2d))/log10` for `d = 1..9`.
pub fn inverse_digit_family() -> Vec<MuCase> {
    (1..=9i64)
        .map(|d| {
            MuCase::new(
                format!("d={d}"),
                Expr::ratio(9, 2 * d).log() / Expr::int(10).log(),
            )
        })
        .collect()
}

fn mid_block_cases(m1_max: u32, mark_resonant: bool) -> Vec<MuCase> {
    let mut out = Vec::with_capacity(81 * m1_max as usize);
    for d1 in 1..=9i64 {
        for d2 in 0..=9i64 {
            if d1 == d2 {
                continue;
            }
            for m1 in 1..=m1_max {
                let inner = pow10(m1) * d1 - (d1 - d2);
                let resonant = mark_resonant && block_shift_power_of_ten(&inner).is_some();
                let mu = Expr::ratio(inner * 2, 9).log() / log_alpha();
                let label = format!("d1={d1},d2={d2},m1={m1}");
                if resonant {
                    out.push(MuCase::excluded_case(label, mu));
                } else {
                    out.push(MuCase::new(label, mu));
                }
            }
        }
    }
    out
}

/// `log(2 (d1 10^m1 - (d1 - d2)) / 9) / logalpha` for `d1 = 1..9`,
/// `d2 = 0..9`, `d1 != d2`, `m1 = 1..m1_max`.
pub fn mid_block_family(m1_max: u32) -> Vec<MuCase> {
    mid_block_cases(m1_max, false)
}

/// Same family with the two resonant cases (`d1=4,d2=9` and
/// `d1=5,d2=0` at `m1 = 1`, both with inner value 45 and shift exactly
/// equal to the base constant) carried as excluded for the certified
/// walk; the pipeline covers them with the homogeneous bound.
pub fn mid_block_family_certified(m1_max: u32) -> Vec<MuCase> {
    mid_block_cases(m1_max, true)
}

/// `log(2 d 10^shift / 9) / logalpha` for `d = 1..9`: the equal-digits
/// diagonal of the three-block family at a representative exponent.
pub fn diagonal_slice(shift: u32) -> Vec<MuCase> {
    (1..=9i64)
        .map(|d| {
            let inner = pow10(shift) * (2 * d);
            MuCase::new(
                format!("d={d},shift={shift}"),
                Expr::ratio(inner, 9).log() / log_alpha(),
            )
        })
        .collect()
}

/// `log((d1 10^j - d2) / (18 10^j)) / logalpha` for `d1, d2 = 1..9`,
/// `j = j_min..j_max` (j is the repunit-length gap).
pub fn repdigit_difference_family(j_min: u32, j_max: u32) -> Vec<MuCase> {
    let mut out = Vec::new();
    for d1 in 1..=9i64 {
        for d2 in 1..=9i64 {
            for j in j_min..=j_max {
                let num = pow10(j) * d1 - d2;
                let den = pow10(j) * 18;
                let mu = Expr::ratio(num, den).log() / log_alpha();
                out.push(MuCase::new(format!("d1={d1},d2={d2},j={j}"), mu));
            }
        }
    }
    out
}

/// Same family with the corrected normalization
/// `log(2 (d1 10^j - d2) / (9 10^j)) / logalpha`.  Dividing the
/// difference form by `alpha^k / 2` gives the factor `2/9`, not `1/18`;
/// the certified column reduces with this version.
pub fn repdigit_difference_family_true(j_min: u32, j_max: u32) -> Vec<MuCase> {
    let mut out = Vec::new();
    for d1 in 1..=9i64 {
        for d2 in 1..=9i64 {
            for j in j_min..=j_max {
                let num = (pow10(j) * d1 - d2) * 2;
                let den = pow10(j) * 9;
                let mu = Expr::ratio(num, den).log() / log_alpha();
                out.push(MuCase::new(format!("d1={d1},d2={d2},j={j}"), mu));
            }
        }
    }
    out
}

/// `log(d1/18)/logalpha` for `d1 = 1..9`: the large-gap limit of
/// [`repdigit_difference_family`].
pub fn repdigit_difference_limit_slice() -> Vec<MuCase> {
    (1..=9i64)
        .map(|d1| {
            MuCase::new(
                format!("d1={d1},limit"),
                Expr::ratio(d1, 18).log() / log_alpha(),
            )
        })
        .collect()
}

/// The full three-block family
/// `log(2 (d1 10^(m1+m2) - (d1-d2) 10^m2 - (d2-d3)) / 9) / logalpha`
/// over all digit triples (`d1 = 1..9`, `d2, d3 = 0..9`) and block
/// lengths `m1 = 1..m1_max`, `m2 = 1..m2_max`.  Triples with `d1 = d2`
/// or `d2 = d3` are carried as excluded cases: those patterns collapse
/// to at most two blocks and are ruled out by the membership oracles.
/// Cases are constructed on demand; nothing is materialized.
pub struct ThreeBlockFamily {
    pub m1_max: u32,
    pub m2_max: u32,
}

impl ThreeBlockFamily {
    fn per_triple(&self) -> usize {
        self.m1_max as usize * self.m2_max as usize
    }
}

impl MuFamily for ThreeBlockFamily {
    fn len(&self) -> usize {
        900 * self.per_triple()
    }

    fn case(&self, index: usize) -> MuCase {
        let per = self.per_triple();
        let t = index / per;
        let r = index % per;
        let m1 = (r / self.m2_max as usize) as u32 + 1;
        let m2 = (r % self.m2_max as usize) as u32 + 1;
        let d1 = (t / 100) as i64 + 1;
        let d2 = ((t / 10) % 10) as i64;
        let d3 = (t % 10) as i64;
        let excluded = d1 == d2 || d2 == d3;
        let inner = pow10(m1 + m2) * d1 - pow10(m2) * (d1 - d2) - (d2 - d3);
        let mu = Expr::ratio(inner * 2, 9).log() / log_alpha();
        let label = format!("d1={d1},d2={d2},d3={d3},m1={m1},m2={m2}");
        if excluded {
            MuCase::excluded_case(label, mu)
        } else {
            MuCase::new(label, mu)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::Precision;

    #[test]
    fn family_sizes() {
        assert_eq!(digit_ratio_family().len(), 9);
        assert_eq!(gap_corrected_family(94).len(), 846);
        assert_eq!(inverse_digit_family().len(), 9);
        assert_eq!(mid_block_family(83).len(), 6723);
        assert_eq!(repdigit_difference_family(2, 80).len(), 6399);
        let f = ThreeBlockFamily {
            m1_max: 83,
            m2_max: 75,
        };
        assert_eq!(MuFamily::len(&f), 5_602_500);
        let excluded = (0..900)
            .map(|t| f.case(t * f.per_triple()))
            .filter(|c| c.excluded)
            .count();
        assert_eq!(excluded, 171);
    }

    #[test]
    fn three_block_case_decoding() {
        let f = ThreeBlockFamily {
            m1_max: 3,
            m2_max: 2,
        };
        // index 0: triple (1,0,0), m1=1, m2=1; d2 = d3 = 0 is excluded
        let c = f.case(0);
        assert_eq!(c.label, "d1=1,d2=0,d3=0,m1=1,m2=1");
        assert!(c.excluded);
        // triple (1,2,3): t = 023 -> offset 23 * 6
        let c = f.case(23 * 6 + 5);
        assert_eq!(c.label, "d1=1,d2=2,d3=3,m1=3,m2=2");
        assert!(!c.excluded);
        // mu encodes 2 * (1 * 10^5 - (-1) * 10^2 - (-1)) / 9 = 2 * 100101 / 9
        let v = c.mu.enclose(Precision::default()).unwrap().to_f64();
        let expect = (2.0 * 100101.0 / 9.0_f64).ln() / (1.0 + 2.0_f64.sqrt()).ln();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn resonant_shift_detection() {
        // 2*9/(9 (1 - alpha^-2)) = 2/(2 sqrt(2) - 2) = alpha exactly
        assert_eq!(gap_shift_alpha_power(9, 2), Some(1));
        for d in 1..=9u32 {
            for j in 1..=94u32 {
                if (d, j) != (9, 2) {
                    assert_eq!(gap_shift_alpha_power(d, j), None, "d={d} j={j}");
                }
            }
        }
        assert_eq!(block_shift_power_of_ten(&Integer::from(45)), Some(1));
        assert_eq!(block_shift_power_of_ten(&Integer::from(450)), Some(2));
        assert_eq!(block_shift_power_of_ten(&Integer::from(44)), None);
        assert_eq!(block_shift_power_of_ten(&Integer::from(9)), None);

        let excluded: Vec<String> = gap_corrected_family_certified(94)
            .into_iter()
            .filter(|c| c.excluded)
            .map(|c| c.label)
            .collect();
        assert_eq!(excluded, ["d=9,j=2"]);
        let excluded: Vec<String> = mid_block_family_certified(83)
            .into_iter()
            .filter(|c| c.excluded)
            .map(|c| c.label)
            .collect();
        assert_eq!(excluded, ["d1=4,d2=9,m1=1", "d1=5,d2=0,m1=1"]);
    }

    #[test]
    fn gap_corrected_family_approaches_digit_ratio() {
        let pol = Precision::default();
        let base = digit_ratio_family();
        let fam = gap_corrected_family(40);
        // d=5, j=40 sits at index (5-1)*40 + 39
        let far = &fam[4 * 40 + 39];
        let near = &base[4];
        let a = far.mu.enclose(pol).unwrap().to_f64();
        let b = near.mu.enclose(pol).unwrap().to_f64();
        assert!((a - b).abs() < 1e-14);
        // d=5, j=1 differs materially
        let close = &fam[4 * 40];
        let c = close.mu.enclose(pol).unwrap().to_f64();
        assert!((c - b).abs() > 0.1);
    }
}
