//! Orchestrated proofs: initial linear-form bounds, iterated reductions,
//! and the final exhaustive sweep, emitted as structured [`ProofReport`]s.
//!
//! Every numeric stage is carried in two columns.  The faithful column
//! follows the reference derivation step for step, adopting its printed
//! constants, multipliers, and bounds, and checks each against our own
//! certified computation at the printed precision.  The certified column
//! re-derives the whole chain from scratch: exact constants, honest
//! family minima, convergent advance on any non-positive epsilon, and
//! corrected preconditions where the reference argument is loose.  The
//! final sweep always covers the larger of the two bounds, so the
//! end-to-end statement is certified regardless of which column is
//! followed.

pub mod constants;
pub mod families;
pub mod report;
pub mod thm3;
pub mod thm4;
pub mod thm5;

pub use report::{Discrepancy, NamedValue, ProofReport, StageKind, StageRecord};
pub use thm3::prove_thm3;
pub use thm4::prove_thm4;
pub use thm5::prove_thm5;

use crate::realnum::{certify_less, Expr, Precision, RealError};
use crate::reduction::ReductionError;
use rug::{Integer, Rational};
use std::fmt;

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub precision: Precision,
    /// Overrides the default sweep limit when larger.
    pub sweep_limit: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            precision: Precision::from_env(),
            sweep_limit: None,
        }
    }
}

#[derive(Debug)]
pub enum PipelineError {
    Real { stage: String, source: RealError },
    Reduction { stage: String, source: ReductionError },
}

impl PipelineError {
    pub fn real(stage: &str) -> impl Fn(RealError) -> PipelineError + '_ {
        move |source| PipelineError::Real {
            stage: stage.to_string(),
            source,
        }
    }

    pub fn reduction(stage: &str) -> impl Fn(ReductionError) -> PipelineError + '_ {
        move |source| PipelineError::Reduction {
            stage: stage.to_string(),
            source,
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Real { stage, source } => write!(f, "stage {stage}: {source}"),
            PipelineError::Reduction { stage, source } => write!(f, "stage {stage}: {source}"),
        }
    }
}

impl std::error::Error for PipelineError {}

/// `log 10 / log alpha`, the ratio that drives every reduction here.
pub fn tau_expr() -> Expr {
    Expr::int(10).log() / crate::sequences::log_alpha()
}

/// `log alpha / log 10`, used when the roles of the exponents swap.
pub fn inv_tau_expr() -> Expr {
    crate::sequences::log_alpha() / Expr::int(10).log()
}

/// Dispatch by theorem id: `thm3`, `thm4`, or `thm5`.
pub fn prove(theorem: &str, opts: &PipelineOptions) -> Option<Result<ProofReport, PipelineError>> {
    match theorem {
        "thm3" => Some(prove_thm3(opts)),
        "thm4" => Some(prove_thm4(opts)),
        "thm5" => Some(prove_thm5(opts)),
        _ => None,
    }
}

pub(crate) fn to_int(r: &Rational) -> Integer {
    assert_eq!(*r.denom(), 1, "constant is not an integer: {r}");
    r.numer().clone()
}

pub(crate) fn fmt_sci(v: f64) -> String {
    format!("{v:.4e}")
}

pub(crate) fn fmt_dec(v: f64) -> String {
    format!("{v:.6}")
}

/// A certified constant against its printed counterpart: `dominated` is
/// the one-sided soundness check (certified below printed), `ratio_ok`
/// holds when the two agree within 5 percent either way.
pub(crate) struct ConstantCheck {
    pub certified: f64,
    pub dominated: bool,
    pub ratio_ok: bool,
}

pub(crate) fn check_constant(
    certified: &Expr,
    printed: &Rational,
    pol: Precision,
) -> Result<ConstantCheck, RealError> {
    let printed_expr = Expr::rational(printed.clone());
    let dominated = match certify_less(certified, &printed_expr, pol) {
        Ok(v) => v,
        Err(RealError::UndecidableSign { .. }) => false,
        Err(e) => return Err(e),
    };
    let c = certified.enclose(pol)?.to_f64();
    let p = printed.to_f64();
    let ratio = if c > 0.0 { p / c } else { f64::INFINITY };
    Ok(ConstantCheck {
        certified: c,
        dominated,
        ratio_ok: (1.0 / 1.05..=1.05).contains(&ratio),
    })
}
