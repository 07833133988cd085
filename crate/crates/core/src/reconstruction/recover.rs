//! Rebuilds the full mapper table from a description by replaying the coder
//! against partially-known oracles.
//!
//! Seed-driven recovery processes the listed images in ascending order; the
//! first sample query outside the known table names the image's seed.
//! Deletion-driven recovery re-runs the witness message against every
//! candidate value in ascending order, keeping candidates whose `b`-th
//! distinct membership query is the candidate itself, and takes the one at
//! the advised rank. Both replays see exactly the oracle answers the
//! construction saw, so they retrace its runs query for query.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::BitVector;

use super::description::{Description, DescriptionBody, ForgeableAdvice};
use super::oracle::{
    run_enc_dec, AnswerMode, ExecOracle, Query, SourceTable, StopKind, TracedCoder,
};
use super::ReconError;

/// Simulate the witness run for candidate value `v`: sample queries answered
/// from `known` (an unknown seed rejects the candidate), membership queries
/// answered by `known_images`, stopping at the `b`-th distinct membership
/// query. The candidate is accepted when that query is `v` itself.
pub(crate) fn candidate_accepts(
    coder: &dyn TracedCoder,
    known: &BTreeMap<BitVector, BitVector>,
    known_images: &BTreeSet<BitVector>,
    x: &BitVector,
    b: usize,
    v: &BitVector,
) -> Result<bool, ReconError> {
    let mut oracle = ExecOracle::new(
        coder.m(),
        coder.n(),
        coder.query_budget(),
        AnswerMode::Partial { known, members: known_images },
    );
    oracle.halt_on_miss = true;
    oracle.membership_quota = Some(b);
    let trace = run_enc_dec(coder, oracle, x, v)?;
    Ok(trace.stop == StopKind::MembershipQuota
        && trace.queries.last() == Some(&Query::Membership(v.clone())))
}

fn validate(coder: &dyn TracedCoder, desc: &Description) -> Result<(), ReconError> {
    if (desc.m, desc.n, desc.k, desc.q) != (coder.m(), coder.n(), coder.k(), coder.query_budget()) {
        return Err(ReconError::Parameter("description dimensions do not match the coder".into()));
    }
    let total = 1usize << desc.m;
    if desc.rest.len() + desc.omitted() != total {
        return Err(ReconError::SimulationStuck(format!(
            "{} rest entries plus {} omitted do not cover {total} seeds",
            desc.rest.len(),
            desc.omitted()
        )));
    }
    let mut seeds: BTreeSet<&BitVector> = BTreeSet::new();
    for (y, z) in &desc.rest {
        if y.len() != desc.m || z.len() != desc.n {
            return Err(ReconError::SimulationStuck("rest entry with wrong lengths".into()));
        }
        if !seeds.insert(y) {
            return Err(ReconError::SimulationStuck(format!("duplicate seed {}", y.to_hex())));
        }
    }
    match &desc.body {
        DescriptionBody::Invertible { t_images } => {
            if t_images.iter().any(|z| z.len() != desc.n) {
                return Err(ReconError::SimulationStuck("image with wrong length".into()));
            }
            if t_images.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ReconError::SimulationStuck("images not strictly ascending".into()));
            }
        }
        DescriptionBody::Forgeable { entries } => {
            for (y, adv) in entries {
                if y.len() != desc.m || adv.x.len() != desc.k {
                    return Err(ReconError::SimulationStuck(
                        "advice entry with wrong lengths".into(),
                    ));
                }
                if !seeds.insert(y) {
                    return Err(ReconError::SimulationStuck(format!(
                        "seed {} both dropped and explicit",
                        y.to_hex()
                    )));
                }
                if adv.b == 0 || adv.b > desc.q {
                    return Err(ReconError::SimulationStuck(format!(
                        "membership index {} outside 1..={}",
                        adv.b, desc.q
                    )));
                }
                if adv.a == 0 || adv.a > 1 << desc.m {
                    return Err(ReconError::SimulationStuck(format!(
                        "candidate rank {} outside advice width",
                        adv.a
                    )));
                }
            }
            if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(ReconError::SimulationStuck(
                    "dropped seeds not strictly ascending".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Recover the table with the strategy recorded in the description.
pub fn recover(coder: &dyn TracedCoder, desc: &Description) -> Result<SourceTable, ReconError> {
    match &desc.body {
        DescriptionBody::Invertible { .. } => recover_invertible(coder, desc),
        DescriptionBody::Forgeable { .. } => recover_forgeable(coder, desc),
    }
}

pub fn recover_invertible(
    coder: &dyn TracedCoder,
    desc: &Description,
) -> Result<SourceTable, ReconError> {
    let DescriptionBody::Invertible { t_images } = &desc.body else {
        return Err(ReconError::VerdictMismatch);
    };
    validate(coder, desc)?;
    let mut known: BTreeMap<BitVector, BitVector> = desc.rest.iter().cloned().collect();
    // The explicit values plus the listed images are the full image set, so
    // membership answers are exact from the start.
    let members: BTreeSet<BitVector> =
        known.values().cloned().chain(t_images.iter().cloned()).collect();
    let x0 = BitVector::zeros(coder.k());
    for z in t_images {
        let mut oracle = ExecOracle::new(
            desc.m,
            desc.n,
            desc.q,
            AnswerMode::Partial { known: &known, members: &members },
        );
        oracle.halt_on_miss = true;
        let trace = run_enc_dec(coder, oracle, &x0, z)?;
        match trace.stop {
            StopKind::SampleMiss(y) => {
                known.insert(y, z.clone());
            }
            StopKind::Completed => {
                return Err(ReconError::SimulationStuck(format!(
                    "replay on image {} sampled no unknown seed",
                    z.to_hex()
                )));
            }
            StopKind::BudgetExceeded => {
                return Err(ReconError::SimulationStuck("budget exceeded during replay".into()));
            }
            StopKind::HaltSample(_) | StopKind::MembershipQuota => unreachable!(),
        }
    }
    if known.len() != 1usize << desc.m {
        return Err(ReconError::SimulationStuck("recovered table is incomplete".into()));
    }
    SourceTable::from_pairs(desc.m, desc.n, &known)
}

pub fn recover_forgeable(
    coder: &dyn TracedCoder,
    desc: &Description,
) -> Result<SourceTable, ReconError> {
    let DescriptionBody::Forgeable { entries } = &desc.body else {
        return Err(ReconError::VerdictMismatch);
    };
    validate(coder, desc)?;
    if desc.n > 24 {
        return Err(ReconError::Parameter("candidate scans need n <= 24".into()));
    }
    let mut known: BTreeMap<BitVector, BitVector> = desc.rest.iter().cloned().collect();
    let mut known_images: BTreeSet<BitVector> = known.values().cloned().collect();
    for (y, adv) in entries {
        let z = scan_to_rank(coder, &known, &known_images, adv, desc.n)?.ok_or_else(|| {
            ReconError::SimulationStuck(format!(
                "fewer than {} accepted candidates for seed {}",
                adv.a,
                y.to_hex()
            ))
        })?;
        known_images.insert(z.clone());
        known.insert(y.clone(), z);
    }
    SourceTable::from_pairs(desc.m, desc.n, &known)
}

/// Ascending scan over unknown values; returns the `adv.a`-th accepted one.
fn scan_to_rank(
    coder: &dyn TracedCoder,
    known: &BTreeMap<BitVector, BitVector>,
    known_images: &BTreeSet<BitVector>,
    adv: &ForgeableAdvice,
    n: usize,
) -> Result<Option<BitVector>, ReconError> {
    let mut rank = 0u64;
    for vv in 0..1u64 << n {
        let v = BitVector::from_uint(n, vv);
        if known_images.contains(&v) {
            continue;
        }
        if candidate_accepts(coder, known, known_images, &adv.x, adv.b, &v)? {
            rank += 1;
            if rank == adv.a {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}
