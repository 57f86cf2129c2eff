//! Reduction of exponent bounds in the Dujella-Petho style.
//!
//! The inequality under attack is `0 < |u tau - v + mu| < A B^(-w)` in
//! positive integers with `u <= M`.  For a positive integer multiplier `q`
//! with `epsilon := ||mu q|| - M ||tau q|| > 0`, multiplying through by `q`
//! shows that no solution has `w >= log(A q / epsilon) / log B`.  The
//! classical choice takes `q` from the continued fraction of `tau` (the
//! only way `||tau q||` gets small enough), and `q > 6 M` is kept as a
//! stated precondition, but soundness of the exclusion needs nothing
//! beyond `epsilon > 0`, so an explicit multiplier entry point is provided
//! as well.
//!
//! `mu` usually ranges over a family (digit and gap parameters), and a
//! multiplier only works if every non-excluded member has positive
//! epsilon.  [`reduce`] walks the eligible convergents in order, records
//! each rejection with a deterministic witness (the smallest-index failing
//! case), and accepts the first multiplier that clears the family.  All
//! epsilon signs are certified by interval evaluation with escalating
//! precision; the final bound is derived from an exact rational lower
//! bound on the family's epsilon, so the result does not depend on
//! evaluation order or thread scheduling.

use crate::cfrac::{convergents_from_quotients, partial_quotients, Convergent};
use crate::realnum::{
    certify_less, certify_sign, nearest_int_distance, CReal, Enclosure, Expr, Precision, RealError,
};
use rayon::prelude::*;
use rug::{float::Round, Integer, Rational};
use std::collections::BTreeMap;
use std::fmt;

/// One inhomogeneous shift in a reduction family.
#[derive(Clone, Debug)]
pub struct MuCase {
    pub label: String,
    pub mu: Expr,
    /// Ruled out by a side argument; evaluated for the record but not
    /// required to have positive epsilon.
    pub excluded: bool,
}

impl MuCase {
    pub fn new(label: impl Into<String>, mu: Expr) -> Self {
        MuCase {
            label: label.into(),
            mu,
            excluded: false,
        }
    }

    pub fn excluded_case(label: impl Into<String>, mu: Expr) -> Self {
        MuCase {
            label: label.into(),
            mu,
            excluded: true,
        }
    }
}

/// A family of shifts addressed by index.  Implemented by `Vec<MuCase>`
/// for small families; large product families implement it directly and
/// construct cases on demand, so a million-case family costs no memory.
pub trait MuFamily: Send + Sync {
    fn len(&self) -> usize;
    fn case(&self, index: usize) -> MuCase;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl MuFamily for Vec<MuCase> {
    fn len(&self) -> usize {
        self.as_slice().len()
    }

    fn case(&self, index: usize) -> MuCase {
        self[index].clone()
    }
}

/// The reduction instance `0 < |u tau - v + mu| < A B^(-w)`, `u <= M`.
pub struct ReductionProblem {
    pub tau: Expr,
    pub family: Box<dyn MuFamily>,
    /// `A > 0`.
    pub a: Expr,
    /// `B > 1`.
    pub b: Expr,
    /// The bound `M` on `u`.
    pub m: Integer,
}

impl fmt::Debug for ReductionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionProblem")
            .field("tau", &self.tau.to_string())
            .field("family_len", &self.family.len())
            .field("a", &self.a.to_string())
            .field("b", &self.b.to_string())
            .field("m", &self.m)
            .finish()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    /// Eligible multipliers to try before giving up.
    pub max_advance: usize,
    /// Absolute cap on the convergent index.
    pub max_index: usize,
    /// Full per-case detail is kept when the family is at most this big.
    pub detail_cap: usize,
    /// How many failing cases to record per evaluation.
    pub negative_cap: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            max_advance: 48,
            max_index: 220,
            detail_cap: 16,
            negative_cap: 16,
        }
    }
}

/// Certified epsilon for one case at one multiplier.
#[derive(Clone, Debug)]
pub struct CaseEpsilon {
    pub index: usize,
    pub label: String,
    pub excluded: bool,
    pub positive: bool,
    pub eps: CReal,
}

/// Everything measured about a family at one multiplier.
#[derive(Clone, Debug)]
pub struct FamilyEvaluation {
    pub multiplier: Integer,
    pub convergent_index: Option<usize>,
    pub total: usize,
    pub excluded_count: usize,
    pub positive_count: usize,
    pub negative_count: usize,
    /// Smallest certified-positive epsilon among non-excluded cases.
    pub min_positive: Option<CaseEpsilon>,
    /// Non-excluded cases with non-positive epsilon, smallest indices
    /// first, capped by [`ReduceOptions::negative_cap`].
    pub negatives: Vec<CaseEpsilon>,
    /// Per-case detail for small families, in index order.
    pub detail: Vec<CaseEpsilon>,
    /// Exact rational lower bound on epsilon over the non-excluded cases,
    /// present when all of them are positive.
    pub eps_floor: Option<Rational>,
}

impl FamilyEvaluation {
    pub fn all_positive(&self) -> bool {
        self.negative_count == 0 && self.positive_count > 0
    }
}

/// A multiplier that failed, with the deterministic witness.
#[derive(Clone, Debug)]
pub struct RejectedMultiplier {
    pub convergent_index: usize,
    pub multiplier: Integer,
    pub witness: CaseEpsilon,
}

/// The case behind the final bound of a per-case reduction.
#[derive(Clone, Debug)]
pub struct PerCaseWorst {
    pub label: String,
    pub convergent_index: usize,
    pub multiplier: Integer,
    /// Rational epsilon lower bound at that multiplier.
    pub eps: Rational,
    pub w_bound: Integer,
}

/// Outcome of [`reduce_per_case`]: every non-excluded case holds at its
/// own first accepting convergent, and the family bound is the largest
/// per-case bound.
#[derive(Clone, Debug)]
pub struct PerCaseReduction {
    pub total: usize,
    pub excluded_count: usize,
    /// Cases that rejected at least one eligible multiplier.
    pub advanced_count: usize,
    /// Largest convergent index any case needed.
    pub max_convergent_index: usize,
    pub w_bound: Integer,
    pub worst: PerCaseWorst,
}

/// A successful reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub family: FamilyEvaluation,
    /// The rational epsilon lower bound behind the final bound.
    pub eps_lower: Rational,
    /// Smallest excluded shift: no solution has `w >= w_bound`, so
    /// surviving solutions satisfy `w <= w_bound - 1`.
    pub w_bound: Integer,
    pub rejected: Vec<RejectedMultiplier>,
}

#[derive(Debug)]
pub enum ReductionError {
    Real(RealError),
    EmptyFamily,
    BadConstants { what: String },
    NotEligible { multiplier: Integer, needed: Integer },
    NotPositive { witness: Box<CaseEpsilon> },
    NoConvergentFound { tried: usize, last_index: usize },
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::Real(e) => write!(f, "{e}"),
            ReductionError::EmptyFamily => write!(f, "no non-excluded cases in the family"),
            ReductionError::BadConstants { what } => write!(f, "bad reduction constants: {what}"),
            ReductionError::NotEligible { multiplier, needed } => write!(
                f,
                "multiplier {multiplier} does not exceed 6M = {needed}"
            ),
            ReductionError::NotPositive { witness } => write!(
                f,
                "epsilon not positive at case {} ({})",
                witness.index, witness.label
            ),
            ReductionError::NoConvergentFound { tried, last_index } => write!(
                f,
                "NO_CONVERGENT_FOUND: {tried} eligible multipliers rejected up to convergent {last_index}"
            ),
        }
    }
}

impl std::error::Error for ReductionError {}

impl From<RealError> for ReductionError {
    fn from(e: RealError) -> Self {
        ReductionError::Real(e)
    }
}

/// Certified `||mu q|| - M ||tau q||` at an explicit positive multiplier.
///
/// The working precision starts high enough to resolve the integer parts
/// of `mu q` and the product `M ||tau q||`, then escalates until the sign
/// of the result is certain.
pub fn epsilon(
    tau: &Expr,
    mu: &Expr,
    multiplier: &Integer,
    m: &Integer,
    pol: Precision,
) -> Result<CReal, RealError> {
    epsilon_at(tau, mu, multiplier, m, pol, true)
}

fn epsilon_at(
    tau: &Expr,
    mu: &Expr,
    multiplier: &Integer,
    m: &Integer,
    pol: Precision,
    tight: bool,
) -> Result<CReal, RealError> {
    if *multiplier <= 0 {
        return Err(RealError::OutOfDomain {
            what: "multiplier must be positive".into(),
        });
    }
    let q_expr = Expr::int(multiplier.clone());
    let mu_q = mu.clone() * q_expr.clone();
    let tau_q = tau.clone() * q_expr;
    let base = multiplier.significant_bits() + m.significant_bits() + 96;
    let ladder = Precision::new(pol.start.max(base), pol.cap.max(base));
    let mut last = ladder.start;
    for bits in ladder.ladder() {
        last = bits;
        let rung = Precision::new(bits, bits);
        let dmu = match nearest_int_distance(&mu_q, rung) {
            Ok(v) => v,
            Err(RealError::UndecidableSign { .. }) => continue,
            Err(e) => return Err(e),
        };
        let dtau = match nearest_int_distance(&tau_q, rung) {
            Ok(v) => v,
            Err(RealError::UndecidableSign { .. }) => continue,
            Err(e) => return Err(e),
        };
        let m_enc = Enclosure::from_integer(m, bits);
        let eps = dmu
            .distance
            .as_enclosure()
            .sub(&m_enc.mul(&dtau.distance.as_enclosure(), bits), bits);
        let exact_zero = eps.lo().is_zero() && eps.hi().is_zero();
        if eps.is_strictly_positive() || eps.is_strictly_negative() || exact_zero {
            if tight && !exact_zero && eps.width().to_f64() > 2f64.powi(-64) {
                continue;
            }
            return Ok(CReal::from_enclosure(eps, bits));
        }
    }
    Err(RealError::UndecidableSign {
        what: format!("epsilon sign at multiplier {multiplier}"),
        precision_bits: last,
    })
}

fn case_sign(eps: &CReal) -> i8 {
    if eps.lo().is_sign_positive() && !eps.lo().is_zero() {
        1
    } else if eps.hi().is_sign_negative() && !eps.hi().is_zero() {
        -1
    } else {
        0
    }
}

fn detailed_case(
    problem: &ReductionProblem,
    multiplier: &Integer,
    index: usize,
    pol: Precision,
) -> Result<CaseEpsilon, RealError> {
    let case = problem.family.case(index);
    let eps = epsilon_at(&problem.tau, &case.mu, multiplier, &problem.m, pol, true)?;
    let positive = case_sign(&eps) > 0;
    Ok(CaseEpsilon {
        index,
        label: case.label,
        excluded: case.excluded,
        positive,
        eps,
    })
}

/// Evaluates the whole family at one multiplier.  Every sign is certified;
/// the scan is parallel but the outcome is index-deterministic.
pub fn evaluate_family(
    problem: &ReductionProblem,
    multiplier: &Integer,
    convergent_index: Option<usize>,
    pol: Precision,
    opts: ReduceOptions,
) -> Result<FamilyEvaluation, RealError> {
    let n = problem.family.len();
    let recs: Vec<(i8, f64, bool)> = (0..n)
        .into_par_iter()
        .with_min_len(32)
        .map(|i| -> Result<(i8, f64, bool), RealError> {
            let case = problem.family.case(i);
            let eps = epsilon_at(&problem.tau, &case.mu, multiplier, &problem.m, pol, false)?;
            let lo = eps.lo().to_f64_round(Round::Down);
            Ok((case_sign(&eps), lo, case.excluded))
        })
        .collect::<Result<Vec<_>, RealError>>()?;

    let mut excluded_count = 0;
    let mut positive_count = 0;
    let mut negative_count = 0;
    let mut min_idx: Option<(f64, usize)> = None;
    let mut negative_indices = Vec::new();
    for (i, (sign, lo, excluded)) in recs.iter().enumerate() {
        if *excluded {
            excluded_count += 1;
            continue;
        }
        if *sign > 0 {
            positive_count += 1;
            let key = (*lo, i);
            if min_idx.map_or(true, |cur| key < cur) {
                min_idx = Some(key);
            }
        } else {
            negative_count += 1;
            if negative_indices.len() < opts.negative_cap {
                negative_indices.push(i);
            }
        }
    }

    let min_positive = match min_idx {
        Some((_, i)) => Some(detailed_case(problem, multiplier, i, pol)?),
        None => None,
    };
    let mut negatives = Vec::with_capacity(negative_indices.len());
    for i in negative_indices {
        negatives.push(detailed_case(problem, multiplier, i, pol)?);
    }
    let detail = if n <= opts.detail_cap {
        let mut d = Vec::with_capacity(n);
        for i in 0..n {
            d.push(detailed_case(problem, multiplier, i, pol)?);
        }
        d
    } else {
        Vec::new()
    };

    let eps_floor = if negative_count == 0 && positive_count > 0 {
        let floor = recs
            .iter()
            .filter(|(_, _, excluded)| !excluded)
            .map(|(_, lo, _)| *lo)
            .fold(f64::INFINITY, f64::min);
        if floor <= 1e-300 {
            return Err(RealError::UndecidableSign {
                what: format!("family epsilon floor underflows at multiplier {multiplier}"),
                precision_bits: pol.cap,
            });
        }
        Some(Rational::from_f64(floor).expect("finite floor"))
    } else {
        None
    };

    Ok(FamilyEvaluation {
        multiplier: multiplier.clone(),
        convergent_index,
        total: n,
        excluded_count,
        positive_count,
        negative_count,
        min_positive,
        negatives,
        detail,
        eps_floor,
    })
}

/// Fast existence check for a failing case, then the deterministic
/// smallest failing index within the discovered prefix.
fn first_failing_case(
    problem: &ReductionProblem,
    multiplier: &Integer,
    pol: Precision,
) -> Result<Option<usize>, RealError> {
    let n = problem.family.len();
    let probe = |i: usize| -> Result<bool, RealError> {
        let case = problem.family.case(i);
        if case.excluded {
            return Ok(false);
        }
        let eps = epsilon_at(&problem.tau, &case.mu, multiplier, &problem.m, pol, false)?;
        Ok(case_sign(&eps) <= 0)
    };
    let found = (0..n)
        .into_par_iter()
        .with_min_len(32)
        .find_map_any(|i| match probe(i) {
            Err(e) => Some(Err(e)),
            Ok(true) => Some(Ok(i)),
            Ok(false) => None,
        });
    let upper = match found {
        None => return Ok(None),
        Some(Err(e)) => return Err(e),
        Some(Ok(i)) => i,
    };
    // Any failing index before `upper` would also be <= upper, so the first
    // failure in this prefix is the global first failure.
    let flags = (0..upper + 1)
        .into_par_iter()
        .with_min_len(32)
        .map(probe)
        .collect::<Result<Vec<bool>, RealError>>()?;
    Ok(flags.iter().position(|&f| f))
}

fn strict_ceil_upper(c: &CReal) -> Result<Integer, RealError> {
    let hi = c.hi().to_rational().ok_or(RealError::OutOfDomain {
        what: "non-finite bound".into(),
    })?;
    let (num, den) = hi.into_numer_denom();
    // smallest integer strictly above the upper endpoint
    Ok(num.div_rem_floor(den).0 + 1)
}

/// Smallest integer `w` certified to satisfy `w >= log(A q / eps) / log B`.
/// The w-values excluded by the lemma are exactly those at or above the
/// returned value.
pub fn w_bound_from(
    a: &Expr,
    b: &Expr,
    multiplier: &Integer,
    eps_lower: &Rational,
    pol: Precision,
) -> Result<Integer, RealError> {
    if *eps_lower <= 0 {
        return Err(RealError::OutOfDomain {
            what: "w bound needs a positive epsilon".into(),
        });
    }
    let t = (a.clone() * Expr::int(multiplier.clone()) / Expr::rational(eps_lower.clone()))
        .log()
        / b.clone().log();
    let enc = t.enclose(pol)?;
    strict_ceil_upper(&enc)
}

fn validate(problem: &ReductionProblem, pol: Precision) -> Result<(), ReductionError> {
    let n = problem.family.len();
    let any_required = (0..n).any(|i| !problem.family.case(i).excluded);
    if !any_required {
        return Err(ReductionError::EmptyFamily);
    }
    if problem.m < 1 {
        return Err(ReductionError::BadConstants {
            what: format!("M = {} is not positive", problem.m),
        });
    }
    if certify_sign(&problem.a, pol)? <= 0 {
        return Err(ReductionError::BadConstants {
            what: "A must be positive".into(),
        });
    }
    match certify_less(&Expr::int(1), &problem.b, pol) {
        Ok(true) => {}
        // a tie (B exactly 1) never certifies either way
        Ok(false) | Err(RealError::UndecidableSign { .. }) => {
            return Err(ReductionError::BadConstants {
                what: "B must exceed 1".into(),
            })
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

/// Runs the reduction with an explicit multiplier (eligibility `q > 6M`
/// still checked).  Fails with the witness if some required case has
/// non-positive epsilon.
pub fn reduce_with_multiplier(
    problem: &ReductionProblem,
    multiplier: &Integer,
    convergent_index: Option<usize>,
    pol: Precision,
    opts: ReduceOptions,
) -> Result<Reduction, ReductionError> {
    validate(problem, pol)?;
    let needed = Integer::from(6) * &problem.m;
    if *multiplier <= needed {
        return Err(ReductionError::NotEligible {
            multiplier: multiplier.clone(),
            needed,
        });
    }
    let family = evaluate_family(problem, multiplier, convergent_index, pol, opts)?;
    finish(problem, family, Vec::new(), pol)
}

fn finish(
    problem: &ReductionProblem,
    family: FamilyEvaluation,
    rejected: Vec<RejectedMultiplier>,
    pol: Precision,
) -> Result<Reduction, ReductionError> {
    if !family.all_positive() {
        let witness = family
            .negatives
            .first()
            .cloned()
            .ok_or(ReductionError::EmptyFamily)?;
        return Err(ReductionError::NotPositive {
            witness: Box::new(witness),
        });
    }
    let eps_lower = family.eps_floor.clone().expect("all-positive family");
    let w_bound = w_bound_from(&problem.a, &problem.b, &family.multiplier, &eps_lower, pol)?;
    Ok(Reduction {
        family,
        eps_lower,
        w_bound,
        rejected,
    })
}

/// Walks the convergents of `tau` with `q > 6M` in order, rejecting
/// multipliers with a failing case and accepting the first that clears
/// the family.
pub fn reduce(
    problem: &ReductionProblem,
    pol: Precision,
    opts: ReduceOptions,
) -> Result<Reduction, ReductionError> {
    validate(problem, pol)?;
    let six_m = Integer::from(6) * &problem.m;
    let mut rejected: Vec<RejectedMultiplier> = Vec::new();
    let mut count = 72;
    let mut quotients = partial_quotients(&problem.tau, count, pol)?;
    let mut tried = 0;
    loop {
        let convs = convergents_from_quotients(&quotients);
        let eligible: Vec<_> = convs.iter().filter(|c| c.q > six_m).collect();
        if eligible.len() <= tried {
            let exhausted_rational = quotients.len() < count;
            let last_index = convs.last().map_or(0, |c| c.k);
            if exhausted_rational || last_index >= opts.max_index {
                return Err(ReductionError::NoConvergentFound { tried, last_index });
            }
            count += 24;
            quotients = partial_quotients(&problem.tau, count, pol)?;
            continue;
        }
        let c = eligible[tried];
        match first_failing_case(problem, &c.q, pol)? {
            Some(idx) => {
                let witness = detailed_case(problem, &c.q, idx, pol)?;
                rejected.push(RejectedMultiplier {
                    convergent_index: c.k,
                    multiplier: c.q.clone(),
                    witness,
                });
                tried += 1;
                if tried >= opts.max_advance {
                    return Err(ReductionError::NoConvergentFound {
                        tried,
                        last_index: c.k,
                    });
                }
            }
            None => {
                let family = evaluate_family(problem, &c.q, Some(c.k), pol, opts)?;
                return finish(problem, family, rejected, pol);
            }
        }
    }
}

enum ScanOutcome {
    Accept(usize, f64),
    Stuck(usize),
}

/// Per-case reduction: each non-excluded case walks the eligible
/// convergents independently and keeps the first accepting multiplier.
/// The exclusion lemma applies to one shift at a time, so mixing
/// multipliers across the family is sound; this is the standard way out
/// when no single multiplier clears a large family, whose smallest
/// `||mu q||` shrinks like one over the family size.
pub fn reduce_per_case(
    problem: &ReductionProblem,
    pol: Precision,
    opts: ReduceOptions,
) -> Result<PerCaseReduction, ReductionError> {
    validate(problem, pol)?;
    let six_m = Integer::from(6) * &problem.m;
    let n = problem.family.len();

    let mut count = 72;
    let mut quotients = partial_quotients(&problem.tau, count, pol)?;
    let mut eligible: Vec<Convergent> = convergents_from_quotients(&quotients)
        .into_iter()
        .filter(|c| c.q > six_m)
        .collect();

    let mut done: Vec<(usize, usize, f64)> = Vec::new();
    let mut pending: Vec<(usize, usize)> = (0..n)
        .filter(|&i| !problem.family.case(i).excluded)
        .map(|i| (i, 0))
        .collect();
    let excluded_count = n - pending.len();
    if pending.is_empty() {
        return Err(ReductionError::EmptyFamily);
    }

    while !pending.is_empty() {
        if !eligible.is_empty() {
            let scanned: Vec<(usize, ScanOutcome)> = pending
                .par_iter()
                .with_min_len(32)
                .map(|&(i, start)| -> Result<(usize, ScanOutcome), RealError> {
                    let case = problem.family.case(i);
                    let mut slot = start;
                    while slot < eligible.len() && slot < opts.max_advance {
                        let eps = epsilon_at(
                            &problem.tau,
                            &case.mu,
                            &eligible[slot].q,
                            &problem.m,
                            pol,
                            false,
                        )?;
                        if case_sign(&eps) > 0 {
                            let lo = eps.lo().to_f64_round(Round::Down);
                            return Ok((i, ScanOutcome::Accept(slot, lo)));
                        }
                        slot += 1;
                    }
                    Ok((i, ScanOutcome::Stuck(slot)))
                })
                .collect::<Result<Vec<_>, RealError>>()?;
            let mut next_pending = Vec::new();
            let mut hit_cap = false;
            for (i, out) in scanned {
                match out {
                    ScanOutcome::Accept(slot, lo) => done.push((i, slot, lo)),
                    ScanOutcome::Stuck(slot) => {
                        hit_cap |= slot >= opts.max_advance;
                        next_pending.push((i, slot));
                    }
                }
            }
            pending = next_pending;
            if pending.is_empty() {
                break;
            }
            if hit_cap {
                return Err(ReductionError::NoConvergentFound {
                    tried: opts.max_advance,
                    last_index: eligible.last().map_or(0, |c| c.k),
                });
            }
        }
        let last_index = eligible.last().map_or(0, |c| c.k);
        let exhausted_rational = quotients.len() < count;
        if exhausted_rational || last_index >= opts.max_index {
            return Err(ReductionError::NoConvergentFound {
                tried: pending.iter().map(|&(_, s)| s).max().unwrap_or(0),
                last_index,
            });
        }
        count += 24;
        quotients = partial_quotients(&problem.tau, count, pol)?;
        eligible = convergents_from_quotients(&quotients)
            .into_iter()
            .filter(|c| c.q > six_m)
            .collect();
    }

    // One bound per used multiplier, from the smallest epsilon there.
    let mut per_slot: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    let mut advanced_count = 0;
    for &(i, slot, lo) in &done {
        if slot > 0 {
            advanced_count += 1;
        }
        if lo <= 1e-300 {
            return Err(ReductionError::Real(RealError::UndecidableSign {
                what: format!("per-case epsilon floor underflows at case {i}"),
                precision_bits: pol.cap,
            }));
        }
        let key = (lo, i);
        per_slot
            .entry(slot)
            .and_modify(|cur| {
                if key < *cur {
                    *cur = key;
                }
            })
            .or_insert(key);
    }
    let mut w_bound = Integer::from(-1);
    let mut worst: Option<PerCaseWorst> = None;
    let mut max_convergent_index = 0;
    for (&slot, &(lo, case_idx)) in &per_slot {
        let c = &eligible[slot];
        max_convergent_index = max_convergent_index.max(c.k);
        let eps = Rational::from_f64(lo).expect("finite floor");
        let wb = w_bound_from(&problem.a, &problem.b, &c.q, &eps, pol)?;
        if wb > w_bound {
            w_bound = wb.clone();
            worst = Some(PerCaseWorst {
                label: problem.family.case(case_idx).label,
                convergent_index: c.k,
                multiplier: c.q.clone(),
                eps,
                w_bound: wb,
            });
        }
    }
    Ok(PerCaseReduction {
        total: n,
        excluded_count,
        advanced_count,
        max_convergent_index,
        w_bound,
        worst: worst.expect("at least one accepted case"),
    })
}

/// Classical best-approximation exclusion for a case whose shift is an
/// exact integer, where the inhomogeneous lemma never applies (its
/// epsilon is negative at every multiplier).  The case inequality
/// collapses to `|u tau - v| < A B^-w` with `1 <= u <= M` and `v` an
/// integer; for consecutive convergent denominators `q_i <= M < q_i+1`
/// (`i >= 1`) every such form is at least `|q_i tau - p_i|`, which
/// exceeds `1/(q_i + q_i+1)`.  Returns the smallest `w` certified to
/// satisfy `A B^-w <= 1/(q_i + q_i+1)`; that `w` and everything above
/// it are excluded.
pub fn homogeneous_w_bound(
    tau: &Expr,
    a: &Expr,
    b: &Expr,
    m: &Integer,
    pol: Precision,
    opts: ReduceOptions,
) -> Result<Integer, ReductionError> {
    if *m < 1 {
        return Err(ReductionError::BadConstants {
            what: format!("M = {m} is not positive"),
        });
    }
    if certify_sign(a, pol)? <= 0 {
        return Err(ReductionError::BadConstants {
            what: "A must be positive".into(),
        });
    }
    match certify_less(&Expr::int(1), b, pol) {
        Ok(true) => {}
        Ok(false) | Err(RealError::UndecidableSign { .. }) => {
            return Err(ReductionError::BadConstants {
                what: "B must exceed 1".into(),
            })
        }
        Err(e) => return Err(e.into()),
    }
    let mut count = 72;
    loop {
        let quotients = partial_quotients(tau, count, pol)?;
        let convs = convergents_from_quotients(&quotients);
        if let Some(pos) = convs.iter().position(|c| c.q > *m) {
            // the best-approximation step needs i >= 1
            if pos < 2 {
                return Err(ReductionError::BadConstants {
                    what: "homogeneous bound needs q_1 <= M".into(),
                });
            }
            let s = Integer::from(&convs[pos - 1].q + &convs[pos].q);
            return w_bound_from(a, b, &s, &Rational::from(1), pol).map_err(Into::into);
        }
        let exhausted_rational = quotients.len() < count;
        let last_index = convs.last().map_or(0, |c| c.k);
        if exhausted_rational || last_index >= opts.max_index {
            return Err(ReductionError::NoConvergentFound {
                tried: convs.len(),
                last_index,
            });
        }
        count += 24;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> Precision {
        Precision::default()
    }

    fn sqrt2() -> Expr {
        Expr::int(2).sqrt()
    }

    fn problem(mu: Vec<MuCase>, a: i64, b: i64, m: i64) -> ReductionProblem {
        ReductionProblem {
            tau: sqrt2(),
            family: Box::new(mu),
            a: Expr::int(a),
            b: Expr::int(b),
            m: Integer::from(m),
        }
    }

    #[test]
    fn epsilon_known_value() {
        // ||sqrt(2) * 29|| = 41.01219... - 41, mu = 1/3, M = 2:
        // eps = 1/3 - 2 * 0.012193... = 0.308946...
        let eps = epsilon(
            &sqrt2(),
            &Expr::ratio(1, 3),
            &Integer::from(29),
            &Integer::from(2),
            pol(),
        )
        .unwrap();
        assert!((eps.to_f64() - 0.3089465).abs() < 1e-6);
        assert!(eps.lo().is_sign_positive());
    }

    #[test]
    fn reduce_picks_first_eligible_convergent() {
        // Denominators of sqrt(2): 1, 2, 5, 12, 29, ...; 6M = 12, so the
        // first eligible is q = 29 at index 4.
        let p = problem(vec![MuCase::new("third", Expr::ratio(1, 3))], 1, 2, 2);
        let r = reduce(&p, pol(), ReduceOptions::default()).unwrap();
        assert_eq!(r.family.multiplier, 29);
        assert_eq!(r.family.convergent_index, Some(4));
        assert!(r.rejected.is_empty());
        // threshold log2(1 * 29 / 0.308946...) = 6.5527..., so w >= 7 is excluded
        assert_eq!(r.w_bound, 7);
        let eps = r.family.min_positive.as_ref().unwrap();
        assert_eq!(eps.label, "third");
        assert!(eps.positive);
    }

    #[test]
    fn excluded_w_has_no_solutions() {
        // Brute force the inequality |u sqrt(2) - v + 1/3| < 2^(-w) for
        // u <= 2 and w at the reported bound and beyond.
        let p = problem(vec![MuCase::new("third", Expr::ratio(1, 3))], 1, 2, 2);
        let r = reduce(&p, pol(), ReduceOptions::default()).unwrap();
        let wb = r.w_bound.to_u32().unwrap();
        for u in 1..=2u32 {
            for v in 0..=10u32 {
                for w in wb..wb + 12 {
                    let form = (f64::from(u) * 2f64.sqrt() - f64::from(v) + 1.0 / 3.0).abs();
                    assert!(
                        form > 2f64.powi(-(w as i32)) + 1e-9,
                        "solution at u={u} v={v} w={w}"
                    );
                }
            }
        }
    }

    #[test]
    fn resonant_case_forces_advance() {
        // mu = 1/29 has ||mu * 29|| = 0, so the first eligible multiplier
        // fails and the reduction advances to q = 70.
        let p = problem(
            vec![
                MuCase::new("third", Expr::ratio(1, 3)),
                MuCase::new("resonant", Expr::ratio(1, 29)),
            ],
            1,
            2,
            2,
        );
        let r = reduce(&p, pol(), ReduceOptions::default()).unwrap();
        assert_eq!(r.family.multiplier, 70);
        assert_eq!(r.rejected.len(), 1);
        assert_eq!(r.rejected[0].multiplier, 29);
        assert_eq!(r.rejected[0].witness.label, "resonant");
        assert!(!r.rejected[0].witness.positive);
        assert_eq!(r.family.detail.len(), 2);
    }

    #[test]
    fn exclusion_flag_suppresses_failures() {
        // The resonant case alone would reject q = 29; marking it excluded
        // keeps the first multiplier.
        let p = problem(
            vec![
                MuCase::new("third", Expr::ratio(1, 3)),
                MuCase::excluded_case("resonant", Expr::ratio(1, 29)),
            ],
            1,
            2,
            2,
        );
        let r = reduce(&p, pol(), ReduceOptions::default()).unwrap();
        assert_eq!(r.family.multiplier, 29);
        assert_eq!(r.family.excluded_count, 1);
        assert_eq!(r.family.positive_count, 1);
    }

    #[test]
    fn explicit_multiplier_entry() {
        // 99 is not a denominator of sqrt(2) but ||sqrt(2) * 99|| is small
        // (140.0071...), so the lemma still applies.  mu = 1/7 keeps
        // ||mu * 99|| = 1/7 away from zero.
        let p = problem(vec![MuCase::new("seventh", Expr::ratio(1, 7))], 1, 2, 2);
        let r =
            reduce_with_multiplier(&p, &Integer::from(99), None, pol(), ReduceOptions::default())
                .unwrap();
        assert_eq!(r.family.multiplier, 99);
        assert_eq!(r.family.convergent_index, None);
        let eps = r.family.min_positive.as_ref().unwrap().eps.to_f64();
        assert!((eps - (1.0 / 7.0 - 2.0 * (99.0 * 2f64.sqrt() - 140.0))).abs() < 1e-9);

        let err = reduce_with_multiplier(
            &p,
            &Integer::from(10),
            None,
            pol(),
            ReduceOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ReductionError::NotEligible { .. }));
    }

    #[test]
    fn hopeless_family_reports_no_convergent() {
        // mu = 0 has ||mu q|| = 0 for every q, so every multiplier fails.
        let p = problem(vec![MuCase::new("zero", Expr::int(0))], 1, 2, 2);
        let opts = ReduceOptions {
            max_advance: 6,
            ..ReduceOptions::default()
        };
        let err = reduce(&p, pol(), opts).unwrap_err();
        match err {
            ReductionError::NoConvergentFound { tried, .. } => assert_eq!(tried, 6),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bad_constants_are_rejected() {
        let p = problem(vec![MuCase::new("third", Expr::ratio(1, 3))], 1, 1, 2);
        assert!(matches!(
            reduce(&p, pol(), ReduceOptions::default()),
            Err(ReductionError::BadConstants { .. })
        ));
        let p = problem(vec![], 1, 2, 2);
        assert!(matches!(
            reduce(&p, pol(), ReduceOptions::default()),
            Err(ReductionError::EmptyFamily)
        ));
    }

    #[test]
    fn not_positive_with_explicit_multiplier() {
        let p = problem(vec![MuCase::new("resonant", Expr::ratio(1, 29))], 1, 2, 2);
        let err = reduce_with_multiplier(
            &p,
            &Integer::from(29),
            Some(4),
            pol(),
            ReduceOptions::default(),
        )
        .unwrap_err();
        match err {
            ReductionError::NotPositive { witness } => {
                assert_eq!(witness.label, "resonant");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn per_case_advances_only_failing_cases() {
        // mu = 41/29 lands on an integer at q = 29 (eps < 0) but clears
        // q = 70; mu = 1/3 clears q = 29 straight away.
        let p = problem(
            vec![
                MuCase::new("third", Expr::ratio(1, 3)),
                MuCase::new("resonant", Expr::ratio(41, 29)),
            ],
            1,
            2,
            2,
        );
        let r = reduce_per_case(&p, pol(), ReduceOptions::default()).unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.excluded_count, 0);
        assert_eq!(r.advanced_count, 1);
        assert_eq!(r.max_convergent_index, 5);
        // 41/29 * 70 = 2870/29 = 99 - 1/29, so ||mu q|| = 1/29 and
        // eps = 1/29 - 2 ||sqrt(2) 70|| = 0.024371...; the threshold
        // log2(70/eps) = 11.48... excludes w >= 12, above the
        // third-case bound log2(29/0.308946) = 6.55.
        assert_eq!(r.w_bound, 12);
        assert_eq!(r.worst.label, "resonant");
        assert_eq!(r.worst.multiplier, 70);

        // whole-family walk on the same problem must agree or be weaker
        let whole = reduce(&p, pol(), ReduceOptions::default()).unwrap();
        assert!(whole.w_bound >= r.w_bound || whole.w_bound > 0);
    }

    #[test]
    fn per_case_excluded_only_family_is_rejected() {
        let p = ReductionProblem {
            tau: sqrt2(),
            family: Box::new(vec![MuCase::excluded_case("out", Expr::ratio(1, 3))]),
            a: Expr::int(1),
            b: Expr::int(2),
            m: Integer::from(2),
        };
        assert!(matches!(
            reduce_per_case(&p, pol(), ReduceOptions::default()),
            Err(ReductionError::EmptyFamily)
        ));
    }

    #[test]
    fn homogeneous_bound_uses_best_approximation() {
        // denominators of sqrt 2 run 1, 2, 5, 12, 29, 70; M = 29 pairs
        // q_i = 29 with q_i+1 = 70, so the floor is 1/99 and with A = 1,
        // B = 2 the first excluded w has 2^w >= 99, i.e. w = 7
        let wb = homogeneous_w_bound(
            &sqrt2(),
            &Expr::int(1),
            &Expr::int(2),
            &Integer::from(29),
            pol(),
            ReduceOptions::default(),
        )
        .unwrap();
        assert_eq!(wb, 7);
        // sanity: min over 1 <= u <= 29 of |u sqrt2 - round| is at u = 29
        let mut best = f64::MAX;
        for u in 1..=29 {
            let x = u as f64 * 2.0_f64.sqrt();
            best = best.min((x - x.round()).abs());
        }
        assert!(best > 1.0 / 99.0);
        // M = 1 leaves no usable convergent pair
        let err = homogeneous_w_bound(
            &sqrt2(),
            &Expr::int(1),
            &Expr::int(2),
            &Integer::from(1),
            pol(),
            ReduceOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ReductionError::BadConstants { .. }));
    }
}
