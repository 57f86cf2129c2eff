//! Repdigits and runs of repeated digits in base 10.
//!
//! A repdigit is d * (10^k - 1) / 9 with 1 <= d <= 9 and k >= 1.  A
//! number's block pattern is the sequence of maximal runs of equal digits
//! in its decimal expansion; "concatenation of three repdigits" means the
//! pattern has exactly three blocks.

use rug::Integer;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub digit: u8,
    pub len: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepdigitError {
    BadDigit { digit: u8 },
    BadLength,
    LeadingZero,
}

impl fmt::Display for RepdigitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepdigitError::BadDigit { digit } => write!(f, "digit {digit} outside 0..=9"),
            RepdigitError::BadLength => write!(f, "block length must be at least 1"),
            RepdigitError::LeadingZero => write!(f, "leading block digit must be non-zero"),
        }
    }
}

impl std::error::Error for RepdigitError {}

/// (10^k - 1) / 9, the k-digit repunit.
pub fn repunit(k: u32) -> Integer {
    let mut v = Integer::from(Integer::u_pow_u(10, k));
    v -= 1;
    v / 9u32
}

/// d * (10^k - 1) / 9.
pub fn repdigit(d: u8, k: u32) -> Result<Integer, RepdigitError> {
    if !(1..=9).contains(&d) {
        return Err(RepdigitError::BadDigit { digit: d });
    }
    if k == 0 {
        return Err(RepdigitError::BadLength);
    }
    Ok(repunit(k) * d)
}

/// Maximal runs of equal digits of a non-negative integer, most
/// significant first.
pub fn decompose(n: &Integer) -> Vec<Block> {
    assert!(*n >= 0, "block pattern is defined for non-negative integers");
    let digits = n.to_string();
    let mut blocks: Vec<Block> = Vec::new();
    for b in digits.bytes() {
        let d = b - b'0';
        match blocks.last_mut() {
            Some(blk) if blk.digit == d => blk.len += 1,
            _ => blocks.push(Block { digit: d, len: 1 }),
        }
    }
    blocks
}

/// Rebuilds the integer from a block pattern using the closed form
/// value = sum_i d_i * repunit(len_i) * 10^(trailing digits).
pub fn concat(blocks: &[Block]) -> Result<Integer, RepdigitError> {
    if blocks.is_empty() {
        return Err(RepdigitError::BadLength);
    }
    for (i, b) in blocks.iter().enumerate() {
        if b.digit > 9 {
            return Err(RepdigitError::BadDigit { digit: b.digit });
        }
        if b.len == 0 {
            return Err(RepdigitError::BadLength);
        }
        if i == 0 && b.digit == 0 && !(blocks.len() == 1 && b.len == 1) {
            return Err(RepdigitError::LeadingZero);
        }
    }
    let mut trailing: u32 = blocks.iter().skip(1).map(|b| b.len).sum();
    let mut value = Integer::from(0);
    for (i, b) in blocks.iter().enumerate() {
        let part = repunit(b.len) * b.digit;
        value += part * Integer::from(Integer::u_pow_u(10, trailing));
        if i + 1 < blocks.len() {
            trailing -= blocks[i + 1].len;
        }
    }
    Ok(value)
}

/// `Some((d, k))` when n is a repdigit.
pub fn as_repdigit(n: &Integer) -> Option<(u8, u32)> {
    let blocks = decompose(n);
    match blocks.as_slice() {
        [b] if b.digit >= 1 => Some((b.digit, b.len)),
        _ => None,
    }
}

/// The three-block value written as a single division-free expansion:
/// (d1 * 10^(m1+m2+m3) - (d1-d2) * 10^(m2+m3) - (d2-d3) * 10^m3 - d3) / 9.
///
/// `debug_assert`ed against digit-string concatenation; the two agree
/// identically, and the tests exercise the full digit range.
pub fn three_block_value(
    d: (u8, u8, u8),
    m: (u32, u32, u32),
) -> Result<Integer, RepdigitError> {
    let (d1, d2, d3) = d;
    let (m1, m2, m3) = m;
    if d1 == 0 {
        return Err(RepdigitError::LeadingZero);
    }
    for di in [d1, d2, d3] {
        if di > 9 {
            return Err(RepdigitError::BadDigit { digit: di });
        }
    }
    if m1 == 0 || m2 == 0 || m3 == 0 {
        return Err(RepdigitError::BadLength);
    }
    let pow = |k: u32| Integer::from(Integer::u_pow_u(10, k));
    let mut v = pow(m1 + m2 + m3) * d1;
    v -= pow(m2 + m3) * (Integer::from(d1) - d2);
    v -= pow(m3) * (Integer::from(d2) - d3);
    v -= d3;
    let value = v / 9u32;
    debug_assert_eq!(
        value,
        concat(&[
            Block { digit: d1, len: m1 },
            Block { digit: d2, len: m2 },
            Block { digit: d3, len: m3 },
        ])
        .unwrap()
    );
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repdigit_values() {
        assert_eq!(repdigit(7, 3).unwrap(), 777);
        assert_eq!(repdigit(1, 1).unwrap(), 1);
        assert_eq!(repdigit(9, 10).unwrap(), Integer::from(9999999999u64));
        assert!(repdigit(0, 3).is_err());
        assert!(repdigit(10, 3).is_err());
        assert!(repdigit(4, 0).is_err());
    }

    #[test]
    fn decompose_examples() {
        let b = decompose(&Integer::from(8119));
        assert_eq!(
            b,
            vec![
                Block { digit: 8, len: 1 },
                Block { digit: 1, len: 2 },
                Block { digit: 9, len: 1 },
            ]
        );
        assert_eq!(decompose(&Integer::from(777)).len(), 1);
        assert_eq!(decompose(&Integer::from(0)).len(), 1);
        assert_eq!(concat(&b).unwrap(), 8119);
    }

    #[test]
    fn three_blocks_match_strings() {
        for d1 in 1..=9u8 {
            for d2 in 0..=9u8 {
                for d3 in 0..=9u8 {
                    for m in [(1, 1, 1), (2, 1, 3), (3, 3, 3)] {
                        let v = three_block_value((d1, d2, d3), m).unwrap();
                        let s: String = format!(
                            "{}{}{}",
                            String::from(char::from(b'0' + d1)).repeat(m.0 as usize),
                            String::from(char::from(b'0' + d2)).repeat(m.1 as usize),
                            String::from(char::from(b'0' + d3)).repeat(m.2 as usize),
                        );
                        assert_eq!(v.to_string(), s);
                    }
                }
            }
        }
    }
}
