//! Exhaustive oracles for the five solution sets: repdigit differences of
//! two sequence terms, terms that are three-block concatenations, terms
//! that are differences of two repdigits, and the repdigit / two-block
//! membership lists the proofs lean on.
//!
//! Everything here is exact big-integer arithmetic; no rounding is
//! involved and every solution object is re-verified against its defining
//! equation before being returned.  These oracles serve both as the final
//! below-bound sweep of each proof pipeline and as ground truth for the
//! acceptance tests.

use crate::repdigits::{as_repdigit, decompose, repdigit, repunit, Block};
use crate::sequences::q_upto;
use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;
use std::collections::HashMap;

/// `q(n) - q(m) = d * (10^k - 1) / 9` with `n > m >= 0`, `1 <= d <= 9`,
/// `k >= 1`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Eq3Solution {
    pub n: usize,
    pub m: usize,
    pub d: u8,
    pub k: u32,
    #[serde(serialize_with = "crate::pipeline::report::serialize_integer")]
    pub value: Integer,
}

/// `q(n)` whose decimal expansion is exactly three maximal runs.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Eq4Solution {
    pub n: usize,
    #[serde(serialize_with = "crate::pipeline::report::serialize_integer")]
    pub value: Integer,
    pub pattern: Vec<Block>,
}

/// `q(k) = d1 * (10^n - 1) / 9 - d2 * (10^m - 1) / 9` with `n > m >= 1`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Eq5Solution {
    pub k: usize,
    pub n: u32,
    pub m: u32,
    pub d1: u8,
    pub d2: u8,
    #[serde(serialize_with = "crate::pipeline::report::serialize_integer")]
    pub value: Integer,
}

/// An equal-length difference `d1 * R(n) - d2 * R(n)` hitting a sequence
/// term.  These fall outside the equation's `n > m` constraint and are
/// reported separately.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Eq5Degenerate {
    pub k: usize,
    pub n: u32,
    pub d1: u8,
    pub d2: u8,
    #[serde(serialize_with = "crate::pipeline::report::serialize_integer")]
    pub value: Integer,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Eq5Search {
    pub solutions: Vec<Eq5Solution>,
    pub degenerate: Vec<Eq5Degenerate>,
}

/// A sequence term with its run pattern, for the membership lists.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Member {
    pub n: usize,
    #[serde(serialize_with = "crate::pipeline::report::serialize_integer")]
    pub value: Integer,
    pub pattern: Vec<Block>,
}

/// All repdigit differences `q(n) - q(m)` with `n <= n_max`.
pub fn solve_eq3(n_max: usize) -> Vec<Eq3Solution> {
    let qs = q_upto(n_max);
    let qs = &qs;
    let mut out: Vec<Eq3Solution> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            (0..n)
                .filter_map(move |m| {
                    let diff = Integer::from(&qs[n] - &qs[m]);
                    if diff <= 0 {
                        return None;
                    }
                    as_repdigit(&diff).map(|(d, k)| Eq3Solution {
                        n,
                        m,
                        d,
                        k,
                        value: diff,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by_key(|s| (s.n, s.m, s.d, s.k));
    for s in &out {
        assert_eq!(
            Integer::from(&qs[s.n] - &qs[s.m]),
            repdigit(s.d, s.k).expect("valid repdigit"),
            "eq3 solution fails re-verification"
        );
    }
    out
}

/// All terms `q(n)`, `n <= n_max`, whose decimal expansion consists of
/// exactly three maximal runs of equal digits.
pub fn solve_eq4(n_max: usize) -> Vec<Eq4Solution> {
    let qs = q_upto(n_max);
    let qs = &qs;
    let mut out: Vec<Eq4Solution> = (0..=n_max)
        .into_par_iter()
        .filter_map(|n| {
            let pattern = decompose(&qs[n]);
            if pattern.len() == 3 {
                Some(Eq4Solution {
                    n,
                    value: qs[n].clone(),
                    pattern,
                })
            } else {
                None
            }
        })
        .collect();
    out.sort_by_key(|s| s.n);
    for s in &out {
        let rebuilt = crate::repdigits::concat(&s.pattern).expect("valid pattern");
        assert_eq!(rebuilt, s.value, "eq4 solution fails re-verification");
    }
    out
}

/// All differences of two repdigits hitting a term `q(k)`, `k <= k_max`,
/// with repunit lengths up to `n_max`.  Strict solutions have `n > m`;
/// equal-length representations are collected separately.
pub fn solve_eq5(k_max: usize, n_max: u32) -> Eq5Search {
    let qs = q_upto(k_max);
    let mut by_value: HashMap<Integer, Vec<usize>> = HashMap::new();
    for (k, v) in qs.iter().enumerate() {
        by_value.entry(v.clone()).or_default().push(k);
    }

    let mut solutions = Vec::new();
    let mut degenerate = Vec::new();
    for n in 1..=n_max {
        let rn = repunit(n);
        for d1 in 1..=9u8 {
            let top = Integer::from(&rn * d1);
            for m in 1..=n {
                let rm = repunit(m);
                for d2 in 1..=9u8 {
                    let value = Integer::from(&top - Integer::from(&rm * d2));
                    if value <= 0 {
                        continue;
                    }
                    let Some(ks) = by_value.get(&value) else {
                        continue;
                    };
                    for &k in ks {
                        if m < n {
                            solutions.push(Eq5Solution {
                                k,
                                n,
                                m,
                                d1,
                                d2,
                                value: value.clone(),
                            });
                        } else {
                            degenerate.push(Eq5Degenerate {
                                k,
                                n,
                                d1,
                                d2,
                                value: value.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    solutions.sort_by_key(|s| (s.k, s.n, s.m, s.d1, s.d2));
    degenerate.sort_by_key(|s| (s.k, s.n, s.d1, s.d2));
    for s in &solutions {
        assert!(s.n > s.m && s.m >= 1);
        let lhs = Integer::from(&qs[s.k]);
        let rhs = repdigit(s.d1, s.n).unwrap() - repdigit(s.d2, s.m).unwrap();
        assert_eq!(lhs, rhs, "eq5 solution fails re-verification");
    }
    Eq5Search {
        solutions,
        degenerate,
    }
}

fn members_with_block_count(n_max: usize, count: usize) -> Vec<Member> {
    let qs = q_upto(n_max);
    (0..=n_max)
        .filter_map(|n| {
            let pattern = decompose(&qs[n]);
            if pattern.len() == count {
                Some(Member {
                    n,
                    value: qs[n].clone(),
                    pattern,
                })
            } else {
                None
            }
        })
        .collect()
}

/// Terms that are repdigits (a single run), `n <= n_max`.
pub fn repdigit_members(n_max: usize) -> Vec<Member> {
    members_with_block_count(n_max, 1)
}

/// Terms that are concatenations of exactly two repdigit blocks.
pub fn two_block_members(n_max: usize) -> Vec<Member> {
    members_with_block_count(n_max, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq3_small_range() {
        let sols = solve_eq3(95);
        let tuples: Vec<(usize, usize, u8, u32)> =
            sols.iter().map(|s| (s.n, s.m, s.d, s.k)).collect();
        assert_eq!(
            tuples,
            vec![
                (2, 0, 2, 1),
                (2, 1, 2, 1),
                (3, 0, 6, 1),
                (3, 1, 6, 1),
                (3, 2, 4, 1),
                (7, 4, 2, 3),
            ]
        );
        // 239 - 17 = 222 = 2 * 111: the three-digit difference has digit 2
        let last = sols.last().unwrap();
        assert_eq!(last.value, 222);
        assert_eq!((last.d, last.k), (2, 3));
    }

    #[test]
    fn eq4_matches_known_terms() {
        let sols = solve_eq4(50);
        let found: Vec<(usize, u32)> = sols
            .iter()
            .map(|s| (s.n, s.value.to_u32().unwrap()))
            .collect();
        assert_eq!(found, vec![(7, 239), (10, 3363), (11, 8119)]);
        assert!(solve_eq4(6).is_empty());
        assert!(solve_eq4(3).is_empty());
        // 577 = 5|77 is two runs, not three
        assert!(!sols.iter().any(|s| s.value == 577));
    }

    #[test]
    fn eq5_strict_and_degenerate() {
        let r = solve_eq5(50, 30);
        let strict: Vec<(usize, u32, u32, u8, u8)> = r
            .solutions
            .iter()
            .map(|s| (s.k, s.n, s.m, s.d1, s.d2))
            .collect();
        assert_eq!(
            strict,
            vec![
                (2, 2, 1, 1, 8),
                (3, 2, 1, 1, 4),
                (4, 2, 1, 2, 5),
                (5, 2, 1, 4, 3),
            ]
        );
        // value 1 appears only through equal-length differences 2-1, ..., 9-8,
        // recorded for q(0) and q(1)
        assert!(!r.solutions.iter().any(|s| s.value == 1));
        let ones: Vec<&Eq5Degenerate> =
            r.degenerate.iter().filter(|s| s.value == 1).collect();
        assert_eq!(ones.len(), 16);
        assert!(ones.iter().all(|s| s.n == 1 && s.d1 == s.d2 + 1));
        assert!(ones.iter().any(|s| s.k == 0) && ones.iter().any(|s| s.k == 1));
    }

    #[test]
    fn membership_lists() {
        let reps: Vec<u32> = repdigit_members(50)
            .iter()
            .map(|m| m.value.to_u32().unwrap())
            .collect();
        assert_eq!(reps, vec![1, 1, 3, 7, 99]);
        let two: Vec<u32> = two_block_members(50)
            .iter()
            .map(|m| m.value.to_u32().unwrap())
            .collect();
        assert_eq!(two, vec![17, 41, 577]);
        let reps2: Vec<u32> = repdigit_members(2)
            .iter()
            .map(|m| m.value.to_u32().unwrap())
            .collect();
        assert_eq!(reps2, vec![1, 1, 3]);
    }

    #[test]
    fn block_counts_are_exclusive() {
        let eq4: Vec<usize> = solve_eq4(50).iter().map(|s| s.n).collect();
        let reps: Vec<usize> = repdigit_members(50).iter().map(|m| m.n).collect();
        let two: Vec<usize> = two_block_members(50).iter().map(|m| m.n).collect();
        for n in &eq4 {
            assert!(!reps.contains(n) && !two.contains(n));
        }
    }
}
