//! Splits seeds by how the coder treats their errors.
//!
//! A seed `y` is *sampled-on* when the decode run on `Enc(x) + f(y)` queries
//! the sample oracle at `y` for every message `x`; the decoder effectively
//! finds the error by locating its seed. Otherwise some message forgoes the
//! query, and that message witnesses that `f(y)` is corrected without seed
//! access. The verdict picks the description strategy: seed-driven
//! descriptions when sampled-on seeds dominate, deletion-driven ones
//! otherwise.

use std::collections::BTreeMap;

use crate::gf2::BitVector;

use super::oracle::{run_with_truth, SourceTable, TracedCoder};
use super::ReconError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// More than an `eps` fraction of seeds are sampled-on.
    Invertible,
    /// At least a `1 - eps` fraction of seeds have a witness message.
    Forgeable,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub verdict: Verdict,
    /// Sampled-on seeds, ascending.
    pub invertible_seeds: Vec<BitVector>,
    /// Seed -> lexicographically smallest witness message.
    pub forgeable_witnesses: BTreeMap<BitVector, BitVector>,
    /// Threshold fraction as an exact rational.
    pub eps: (u64, u64),
}

/// Tests every seed against every message. `eps = (num, den)` sets the
/// verdict threshold; the verdict is `Invertible` exactly when
/// `#sampled-on * den > num * 2^m`, so exactly one verdict always holds.
pub fn classify(
    coder: &dyn TracedCoder,
    source: &SourceTable,
    eps: (u64, u64),
) -> Result<Classification, ReconError> {
    let (num, den) = eps;
    if den == 0 || num > den {
        return Err(ReconError::Parameter(format!("eps {num}/{den} not in [0, 1]")));
    }
    if coder.m() != source.m() || coder.n() != source.n() {
        return Err(ReconError::Parameter("coder and source dimensions differ".into()));
    }
    let m = source.m();
    let k = coder.k();
    let mut invertible_seeds = Vec::new();
    let mut forgeable_witnesses = BTreeMap::new();
    for yv in 0..1u64 << m {
        let y = BitVector::from_uint(m, yv);
        let z = source.lookup(&y).clone();
        let mut witness = None;
        for xv in 0..1u64 << k {
            let x = BitVector::from_uint(k, xv);
            let trace = run_with_truth(coder, source, &x, &z)?;
            if !trace.dec_samples.contains(&y) {
                witness = Some(x);
                break;
            }
        }
        match witness {
            Some(x) => {
                forgeable_witnesses.insert(y, x);
            }
            None => invertible_seeds.push(y),
        }
    }
    let total = 1u64 << m;
    let verdict = if (invertible_seeds.len() as u64) * den > num * total {
        Verdict::Invertible
    } else {
        Verdict::Forgeable
    };
    Ok(Classification { verdict, invertible_seeds, forgeable_witnesses, eps })
}
