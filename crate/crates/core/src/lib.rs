//! Certified arithmetic for three finiteness results tying the associated
//! Pell sequence (q(0) = q(1) = 1, q(n+1) = 2 q(n) + q(n-1)) to repdigits:
//! repdigits arising as differences q(n) - q(m), terms that are
//! concatenations of three repdigit blocks, and terms that are differences
//! of two repdigits.
//!
//! The crate is organised as a pipeline: interval arithmetic with outward
//! rounding ([`realnum`]), the integer sequence itself ([`sequences`]),
//! repdigit block algebra ([`repdigits`]), certified continued fractions
//! ([`cfrac`]), lower bounds for linear forms in logarithms ([`linforms`]),
//! lattice-style bound reduction ([`reduction`]), exhaustive sweeps below
//! the reduced bounds ([`search`]), and the orchestrated proofs with
//! machine-checkable reports ([`pipeline`]).

pub mod cfrac;
pub mod linforms;
pub mod pipeline;
pub mod realnum;
pub mod reduction;
pub mod repdigits;
pub mod search;
pub mod sequences;

pub use cfrac::Convergent;
pub use pipeline::{prove, PipelineError, PipelineOptions, ProofReport};
pub use realnum::{CReal, Expr, Precision, RealError};
pub use reduction::{
    MuCase, MuFamily, Reduction, ReductionError, ReductionProblem, ReduceOptions,
};
pub use search::{Eq3Solution, Eq4Solution, Eq5Search, Eq5Solution, Member};
pub use sequences::AssocPell;

