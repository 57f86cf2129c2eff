//! The associated Pell sequence and its closed form.
//!
//! q(0) = q(1) = 1 and q(n+1) = 2 q(n) + q(n-1), so
//! 1, 1, 3, 7, 17, 41, 99, 239, 577, ...  With alpha = 1 + sqrt(2) and
//! beta = 1 - sqrt(2), the closed form is q(n) = (alpha^n + beta^n) / 2,
//! which pins every term between alpha^(n-1) and alpha^(n+1) (up to the
//! factor 2 used throughout the growth arguments).

use crate::realnum::{CReal, Expr, Precision, RealError};
use rug::Integer;

/// q(n) by the integer recurrence.
pub fn q(n: usize) -> Integer {
    let mut prev = Integer::from(1);
    let mut cur = Integer::from(1);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = Integer::from(2 * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// q(0) ..= q(n) in one pass.
pub fn q_upto(n: usize) -> Vec<Integer> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(Integer::from(1));
    if n == 0 {
        return v;
    }
    v.push(Integer::from(1));
    for i in 2..=n {
        let next = Integer::from(2 * &v[i - 1]) + &v[i - 2];
        v.push(next);
    }
    v
}

/// A memoised view of the sequence for callers that index repeatedly.
pub struct AssocPell {
    cache: Vec<Integer>,
}

impl AssocPell {
    pub fn new() -> Self {
        AssocPell {
            cache: vec![Integer::from(1), Integer::from(1)],
        }
    }

    pub fn q(&mut self, n: usize) -> &Integer {
        while self.cache.len() <= n {
            let k = self.cache.len();
            let next = Integer::from(2 * &self.cache[k - 1]) + &self.cache[k - 2];
            self.cache.push(next);
        }
        &self.cache[n]
    }

    pub fn upto(&mut self, n: usize) -> &[Integer] {
        self.q(n);
        &self.cache[..=n]
    }
}

impl Default for AssocPell {
    fn default() -> Self {
        AssocPell::new()
    }
}

/// alpha = 1 + sqrt(2), the dominant root of x^2 = 2x + 1.
pub fn alpha() -> Expr {
    Expr::int(1) + Expr::int(2).sqrt()
}

/// beta = 1 - sqrt(2), the conjugate root.
pub fn beta() -> Expr {
    Expr::int(1) - Expr::int(2).sqrt()
}

pub fn log_alpha() -> Expr {
    alpha().log()
}

/// The closed form (alpha^n + beta^n) / 2 as an expression.
pub fn binet(n: i64) -> Expr {
    (alpha().pow_int(n) + beta().pow_int(n)) / Expr::int(2)
}

/// Certified enclosures of the growth envelope `[alpha^(n-1), alpha^(n+1)]`
/// around 2 q(n), valid for n >= 1.
pub fn binet_envelope(n: i64, pol: Precision) -> Result<(CReal, CReal), RealError> {
    let lo = alpha().pow_int(n - 1).enclose(pol)?;
    let hi = alpha().pow_int(n + 1).enclose(pol)?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let want = [1, 1, 3, 7, 17, 41, 99, 239, 577, 1393, 3363, 8119];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(q(n), *w, "q({n})");
        }
        assert_eq!(q_upto(11).last().unwrap(), &Integer::from(8119));
    }

    #[test]
    fn memo_matches_direct() {
        let mut s = AssocPell::new();
        for n in [0usize, 1, 5, 40, 100, 37] {
            assert_eq!(*s.q(n), q(n));
        }
        assert_eq!(s.upto(20).len(), 21);
    }
}
