//! Reconstructing an error mapper from the coder that corrects it.
//!
//! If a coder corrects every error of a source `f(U_m)` while touching `f`
//! only through sample and membership oracles, then `f` cannot be too random:
//! the coder's behavior pins down part of the table. This module makes that
//! concrete. [`classify`] sorts seeds by whether the decoder locates their
//! errors through the sample oracle; [`describe`] then emits a compressed
//! [`Description`] of the table using the dominant behavior, and [`recover`]
//! rebuilds the exact table from it by replaying the coder. [`ledger_for`]
//! counts both description spaces exactly and compares them against storing
//! the table outright.
//!
//! Everything here is deterministic: descriptions are canonical for a given
//! coder and table, and recovery retraces construction query for query.

mod classify;
mod coders;
mod construct;
mod description;
mod ledger;
mod oracle;
mod recover;

use thiserror::Error;

use crate::codes::CodeError;
use crate::gf2::Gf2Error;

pub use classify::{classify, Classification, Verdict};
pub use coders::{
    random_syndrome_distinct_table, syndromes_distinct, LookupCoder, LookupConfirmCoder,
    MembershipScanCoder, OracleEnumCoder,
};
pub use construct::{describe, DEFAULT_EPS};
pub use description::{Description, DescriptionBody, ForgeableAdvice};
pub use ledger::{binomial, factorial, ledger_for, log2_biguint, DescriptionLedger};
pub use oracle::{
    exact_corrector, run_with_truth, Halted, OracleResult, Query, RunTrace, SourceOracle,
    SourceTable, StopKind, TracedCoder,
};
pub use recover::{recover, recover_forgeable, recover_invertible};

#[derive(Debug, Error)]
pub enum ReconError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("coder exceeded its query budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("construction invariant failed: {0}")]
    Faithfulness(String),
    #[error("simulation stuck: {0}")]
    SimulationStuck(String),
    #[error("description verdict does not match the requested recovery")]
    VerdictMismatch,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
