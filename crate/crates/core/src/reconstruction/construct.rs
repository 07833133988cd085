//! Builds a description of a mapper table relative to a coder that corrects
//! its errors.
//!
//! Seed-driven branch: keep a pool of images of sampled-on seeds. Pop the
//! smallest image, run the coder on it, and stop at the first sample query
//! whose answer is that image; the queried seed will be rediscoverable, so
//! its entry is dropped from the explicit table. Images sampled earlier in
//! the run leave the pool, which keeps every pre-stop query answerable
//! during recovery.
//!
//! Deletion-driven branch, pass one: pop seeds with witness messages in
//! ascending order and re-run each witness against the true oracles. A seed
//! stays dropped only when the run touches its image with a membership
//! query; the run's sampled seeds and the preimages of its queried members
//! leave the pool so later drops cannot invalidate the recorded runs. Pass
//! two replays each witness against the recovery's partial view to compute
//! the rank advice, mutating that view exactly as recovery will.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::BitVector;

use super::classify::{classify, Verdict};
use super::description::{Description, DescriptionBody, ForgeableAdvice};
use super::oracle::{
    run_enc_dec, run_with_truth, AnswerMode, ExecOracle, Query, SourceTable, StopKind, TracedCoder,
};
use super::recover::candidate_accepts;
use super::ReconError;

/// Threshold used throughout: a verdict flips when more than half the seeds
/// are sampled-on.
pub const DEFAULT_EPS: (u64, u64) = (1, 2);

pub fn describe(
    coder: &dyn TracedCoder,
    source: &SourceTable,
    eps: (u64, u64),
) -> Result<Description, ReconError> {
    let classification = classify(coder, source, eps)?;
    match classification.verdict {
        Verdict::Invertible => describe_invertible(coder, source, &classification.invertible_seeds),
        Verdict::Forgeable => {
            describe_forgeable(coder, source, &classification.forgeable_witnesses)
        }
    }
}

fn describe_invertible(
    coder: &dyn TracedCoder,
    source: &SourceTable,
    invertible_seeds: &[BitVector],
) -> Result<Description, ReconError> {
    let mut pool: BTreeSet<BitVector> =
        invertible_seeds.iter().map(|y| source.lookup(y).clone()).collect();
    let x0 = BitVector::zeros(coder.k());
    let mut t_images = Vec::new();
    let mut discovered: BTreeMap<BitVector, BitVector> = BTreeMap::new();
    while let Some(z) = pool.pop_first() {
        let mut oracle = ExecOracle::new(
            source.m(),
            source.n(),
            coder.query_budget(),
            AnswerMode::Full { table: source },
        );
        oracle.halt_image = Some(z.clone());
        let trace = run_enc_dec(coder, oracle, &x0, &z)?;
        let y = match trace.stop {
            StopKind::HaltSample(y) => y,
            StopKind::BudgetExceeded => {
                return Err(ReconError::BudgetExceeded { budget: coder.query_budget() })
            }
            _ => {
                return Err(ReconError::Faithfulness(format!(
                    "run on image {} of a sampled-on seed made no sample query hitting it",
                    z.to_hex()
                )))
            }
        };
        // Drop pool images sampled before the stop; their seeds stay
        // explicit, so recovery can answer those queries.
        for q in &trace.queries[..trace.queries.len() - 1] {
            if let Query::Sample(y_pre) = q {
                pool.remove(source.lookup(y_pre));
            }
        }
        discovered.insert(y, z.clone());
        t_images.push(z);
    }
    let rest: Vec<(BitVector, BitVector)> = source
        .entries()
        .iter()
        .filter(|(y, _)| !discovered.contains_key(*y))
        .map(|(y, z)| (y.clone(), z.clone()))
        .collect();
    Ok(Description {
        m: source.m(),
        n: source.n(),
        k: coder.k(),
        q: coder.query_budget(),
        body: DescriptionBody::Invertible { t_images },
        rest,
    })
}

fn describe_forgeable(
    coder: &dyn TracedCoder,
    source: &SourceTable,
    witnesses: &BTreeMap<BitVector, BitVector>,
) -> Result<Description, ReconError> {
    if source.n() > 24 {
        return Err(ReconError::Parameter("candidate scans need n <= 24".into()));
    }
    // Pass one: pick the dropped seeds and record witness runs.
    let mut pool: BTreeSet<BitVector> = witnesses.keys().cloned().collect();
    let mut picked: Vec<(BitVector, BitVector, usize)> = Vec::new();
    while let Some(y) = pool.pop_first() {
        let z = source.lookup(&y).clone();
        // A dropped image must have no other preimage, else its value leaks
        // into the explicit table and recovery would skip it as known.
        if source.preimages(&z).len() > 1 {
            continue;
        }
        let x = witnesses[&y].clone();
        let trace = run_with_truth(coder, source, &x, &z)?;
        let Some(b) = trace.distinct_membership_queries().position(|w| w == &z) else {
            // The run never touches the image; it cannot anchor the advice.
            continue;
        };
        for q in &trace.queries {
            match q {
                Query::Sample(y_q) => {
                    pool.remove(y_q);
                }
                Query::Membership(w) => {
                    for p in source.preimages(w) {
                        pool.remove(p);
                    }
                }
            }
        }
        picked.push((y, x, b + 1));
    }
    let dropped: BTreeSet<&BitVector> = picked.iter().map(|(y, _, _)| y).collect();
    let rest: Vec<(BitVector, BitVector)> = source
        .entries()
        .iter()
        .filter(|(y, _)| !dropped.contains(y))
        .map(|(y, z)| (y.clone(), z.clone()))
        .collect();
    // Pass two: compute rank advice against the evolving recovery view.
    let mut known: BTreeMap<BitVector, BitVector> = rest.iter().cloned().collect();
    let mut known_images: BTreeSet<BitVector> = known.values().cloned().collect();
    let mut entries = Vec::with_capacity(picked.len());
    for (y, x, b) in picked {
        let tv = source.lookup(&y).clone();
        let mut rank = 0u64;
        let mut found = None;
        for vv in 0..1u64 << source.n() {
            let v = BitVector::from_uint(source.n(), vv);
            if known_images.contains(&v) {
                continue;
            }
            if candidate_accepts(coder, &known, &known_images, &x, b, &v)? {
                rank += 1;
                if v == tv {
                    found = Some(rank);
                    break;
                }
            } else if v == tv {
                return Err(ReconError::Faithfulness(format!(
                    "true image {} rejected by its own advice",
                    tv.to_hex()
                )));
            }
        }
        let a = found.ok_or_else(|| {
            ReconError::Faithfulness(format!("true image {} never scanned", tv.to_hex()))
        })?;
        if a > 1u64 << source.m() {
            return Err(ReconError::Faithfulness(format!(
                "candidate rank {a} exceeds the advice width"
            )));
        }
        entries.push((y.clone(), ForgeableAdvice { x, a, b }));
        known_images.insert(tv.clone());
        known.insert(y, tv);
    }
    Ok(Description {
        m: source.m(),
        n: source.n(),
        k: coder.k(),
        q: coder.query_budget(),
        body: DescriptionBody::Forgeable { entries },
        rest,
    })
}
