//! Empirical failure estimation: seeded Monte Carlo trials and exhaustive
//! support sweeps. A trial fails when decoding `Enc(x) + z` does not return
//! `x`; decoder errors (ambiguity, missing syndrome) count as failures.

use std::str::FromStr;

use rand::Rng;

use saec::codes::{LinearCode, Recoverer};
use saec::error_models::ErrorSource;
use saec::gf2::BitVector;
use saec::seeding::trial_rng;

use crate::stats::ErrorEstimate;
use crate::{ConfigError, LabError};

const TRIAL_TAG: u64 = 0x6d63_7472;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessagePolicy {
    /// Exhaustive over all `2^k` messages; required for any-message claims.
    All,
    /// A fresh uniform message per trial; only valid for ensemble averages.
    UniformSampled,
}

impl MessagePolicy {
    pub fn name(&self) -> &'static str {
        match self {
            MessagePolicy::All => "all",
            MessagePolicy::UniformSampled => "uniform-sampled",
        }
    }
}

impl FromStr for MessagePolicy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "all" => Ok(MessagePolicy::All),
            "uniform-sampled" => Ok(MessagePolicy::UniformSampled),
            other => Err(ConfigError::BadValue {
                key: "message_policy".into(),
                value: other.into(),
                reason: "expected `all` or `uniform-sampled`".into(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PolicyOutcome {
    /// All trials pooled.
    pub pooled: ErrorEstimate,
    /// Worst message and its estimate; present under the exhaustive policy.
    pub worst: Option<(BitVector, ErrorEstimate)>,
}

fn trial_fails(code: &LinearCode, rec: &dyn Recoverer, x: &BitVector, z: &BitVector) -> bool {
    let y = code.encode(x).expect("message length").xor(z);
    match code.syndrome_decode(rec, &y) {
        Ok(decoded) => &decoded != x,
        Err(_) => true,
    }
}

/// Monte Carlo failure estimate. Each trial draws its generator from
/// `(seed, message index, trial index)`, so results do not depend on
/// execution order. Under [`MessagePolicy::All`] the `trials` count applies
/// per message.
pub fn estimate_error(
    code: &LinearCode,
    rec: &dyn Recoverer,
    source: &ErrorSource,
    trials: u64,
    seed: u64,
    policy: MessagePolicy,
) -> Result<PolicyOutcome, LabError> {
    if source.block_len() != code.n() {
        return Err(LabError::Parameter(format!(
            "source length {} does not match block length {}",
            source.block_len(),
            code.n()
        )));
    }
    if trials == 0 {
        return Err(LabError::Parameter("need at least one trial".into()));
    }
    match policy {
        MessagePolicy::UniformSampled => {
            let mut failures = 0;
            for t in 0..trials {
                let mut rng = trial_rng(seed, &[TRIAL_TAG, 0, t]);
                let x = BitVector::random(code.k(), &mut rng);
                let z = source.sample(&mut rng);
                failures += trial_fails(code, rec, &x, &z) as u64;
            }
            Ok(PolicyOutcome { pooled: ErrorEstimate::from_counts(failures, trials), worst: None })
        }
        MessagePolicy::All => {
            if code.k() > 20 {
                return Err(LabError::Parameter(format!(
                    "exhaustive policy over 2^{} messages is not tractable",
                    code.k()
                )));
            }
            let mut total = 0;
            let mut worst: Option<(BitVector, ErrorEstimate)> = None;
            for xv in 0..1u64 << code.k() {
                let x = BitVector::from_uint(code.k(), xv);
                let mut failures = 0;
                for t in 0..trials {
                    let mut rng = trial_rng(seed, &[TRIAL_TAG, xv + 1, t]);
                    let z = source.sample(&mut rng);
                    failures += trial_fails(code, rec, &x, &z) as u64;
                }
                total += failures;
                let est = ErrorEstimate::from_counts(failures, trials);
                if worst.as_ref().is_none_or(|(_, w)| est.p_hat > w.p_hat) {
                    worst = Some((x, est));
                }
            }
            Ok(PolicyOutcome {
                pooled: ErrorEstimate::from_counts(total, trials << code.k()),
                worst,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub failures: u64,
    pub trials: u64,
    /// Pooled failure fraction; exact for flat sources.
    pub p_hat: f64,
    /// Largest per-message failure fraction.
    pub worst_message: f64,
    pub estimate: ErrorEstimate,
}

/// Exhaustive failure counts over every (message, support vector) pair.
pub fn exact_error(
    code: &LinearCode,
    rec: &dyn Recoverer,
    support: &[BitVector],
) -> Result<ExactOutcome, LabError> {
    if support.is_empty() {
        return Err(LabError::Parameter("empty support".into()));
    }
    if code.k() > 20 {
        return Err(LabError::Parameter(format!(
            "exhaustive sweep over 2^{} messages is not tractable",
            code.k()
        )));
    }
    let mut total = 0u64;
    let mut worst = 0u64;
    for xv in 0..1u64 << code.k() {
        let x = BitVector::from_uint(code.k(), xv);
        let failures = support.iter().map(|z| trial_fails(code, rec, &x, z) as u64).sum::<u64>();
        total += failures;
        worst = worst.max(failures);
    }
    let trials = (support.len() as u64) << code.k();
    Ok(ExactOutcome {
        failures: total,
        trials,
        p_hat: total as f64 / trials as f64,
        worst_message: worst as f64 / support.len() as f64,
        estimate: ErrorEstimate::from_counts(total, trials),
    })
}

/// Uniformly sample `count` distinct vectors of length `n`.
pub fn random_distinct_support<R: Rng + ?Sized>(
    n: usize,
    count: usize,
    rng: &mut R,
) -> Vec<BitVector> {
    assert!(n >= 64 || count <= 1 << n, "support larger than the space");
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < count {
        seen.insert(BitVector::random(n, rng));
    }
    seen.into_iter().collect()
}
