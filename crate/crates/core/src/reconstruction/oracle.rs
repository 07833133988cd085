//! Oracle access to an error-mapper table, with traced execution.
//!
//! A coder sees the mapper `f: {0,1}^m -> {0,1}^n` only through two oracles:
//! a sample oracle answering `seed -> f(seed)` and a membership oracle
//! answering `value -> value in image(f)`. The executor wrapped around a run
//! records the distinct queries in first-occurrence order, enforces the
//! coder's query budget, and can stop a run early; early stops drive both
//! description construction and recovery.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::BitVector;

use super::ReconError;

/// Signal that the executor stopped the run; coders must propagate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Halted;

pub type OracleResult<T> = Result<T, Halted>;

/// Oracle interface handed to coders. `Ok(None)` answers a malformed query
/// (wrong length); it carries no information and costs no budget.
pub trait SourceOracle {
    fn seed_len(&self) -> usize;
    fn value_len(&self) -> usize;
    fn sample(&mut self, seed: &BitVector) -> OracleResult<Option<BitVector>>;
    fn membership(&mut self, value: &BitVector) -> OracleResult<Option<bool>>;
}

/// Deterministic oracle coder: an encoder/decoder pair for `k`-bit messages
/// in `n`-bit blocks, correcting additive errors drawn from a mapper with
/// `m`-bit seeds. `query_budget` bounds the distinct oracle queries of any
/// single encode-then-decode run.
pub trait TracedCoder {
    fn k(&self) -> usize;
    fn n(&self) -> usize;
    fn m(&self) -> usize;
    fn query_budget(&self) -> usize;
    fn encode(&self, x: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector>;
    fn decode(&self, word: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector>;
}

/// Ground-truth table for a mapper `{0,1}^m -> {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceTable {
    m: usize,
    n: usize,
    table: BTreeMap<BitVector, BitVector>,
    image: BTreeSet<BitVector>,
    preimages: BTreeMap<BitVector, Vec<BitVector>>,
}

impl SourceTable {
    pub fn from_fn(m: usize, n: usize, f: &dyn Fn(&BitVector) -> BitVector) -> Self {
        assert!(m <= 24, "tables need small seed length");
        let mut table = BTreeMap::new();
        let mut image = BTreeSet::new();
        let mut preimages: BTreeMap<BitVector, Vec<BitVector>> = BTreeMap::new();
        for v in 0..1u64 << m {
            let seed = BitVector::from_uint(m, v);
            let z = f(&seed);
            assert_eq!(z.len(), n, "mapper output length");
            image.insert(z.clone());
            preimages.entry(z.clone()).or_default().push(seed.clone());
            table.insert(seed, z);
        }
        SourceTable { m, n, table, image, preimages }
    }

    pub fn from_map(map: &crate::error_models::InjectiveMap) -> Self {
        Self::from_fn(map.m(), map.n(), &|seed| map.apply(seed))
    }

    pub fn from_pairs(
        m: usize,
        n: usize,
        pairs: &BTreeMap<BitVector, BitVector>,
    ) -> Result<Self, ReconError> {
        if pairs.len() != 1usize << m {
            return Err(ReconError::Parameter(format!(
                "table has {} entries, want {}",
                pairs.len(),
                1usize << m
            )));
        }
        if pairs.keys().any(|y| y.len() != m) || pairs.values().any(|z| z.len() != n) {
            return Err(ReconError::Parameter("table entry lengths do not match dims".into()));
        }
        Ok(Self::from_fn(m, n, &|seed| pairs[seed].clone()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed_count(&self) -> u64 {
        1u64 << self.m
    }

    pub fn lookup(&self, seed: &BitVector) -> &BitVector {
        &self.table[seed]
    }

    pub fn entries(&self) -> &BTreeMap<BitVector, BitVector> {
        &self.table
    }

    pub fn image(&self) -> &BTreeSet<BitVector> {
        &self.image
    }

    pub fn preimages(&self, value: &BitVector) -> &[BitVector] {
        self.preimages.get(value).map_or(&[], Vec::as_slice)
    }

    pub fn is_injective(&self) -> bool {
        self.image.len() == self.table.len()
    }
}

/// One oracle query, deduplicated by value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Query {
    Sample(BitVector),
    Membership(BitVector),
}

/// How a traced run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopKind {
    Completed,
    /// Sample query whose true answer equals the watched image.
    HaltSample(BitVector),
    /// Sample query outside the known part of the table.
    SampleMiss(BitVector),
    /// The configured number of distinct membership queries was reached.
    MembershipQuota,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    /// Distinct queries in first-occurrence order, both phases.
    pub queries: Vec<Query>,
    pub stop: StopKind,
    /// Decoder output, when the run completed.
    pub output: Option<BitVector>,
    /// Seeds sampled during the decode phase (raw, including repeats).
    pub dec_samples: BTreeSet<BitVector>,
}

impl RunTrace {
    pub fn distinct_membership_queries(&self) -> impl Iterator<Item = &BitVector> {
        self.queries.iter().filter_map(|q| match q {
            Query::Membership(w) => Some(w),
            Query::Sample(_) => None,
        })
    }
}

pub(crate) enum AnswerMode<'a> {
    /// Full knowledge of the table.
    Full { table: &'a SourceTable },
    /// Partial table plus an explicit membership answer set.
    Partial { known: &'a BTreeMap<BitVector, BitVector>, members: &'a BTreeSet<BitVector> },
}

pub(crate) struct ExecOracle<'a> {
    m: usize,
    n: usize,
    mode: AnswerMode<'a>,
    /// Stop before answering a sample query whose true image equals this.
    pub(crate) halt_image: Option<BitVector>,
    /// Stop on a sample query missing from the known table (partial mode).
    pub(crate) halt_on_miss: bool,
    /// Stop once this many distinct membership queries were recorded.
    pub(crate) membership_quota: Option<usize>,
    budget: usize,
    queries: Vec<Query>,
    seen: BTreeSet<Query>,
    distinct_membership: usize,
    dec_phase: bool,
    dec_samples: BTreeSet<BitVector>,
    stop: Option<StopKind>,
}

impl<'a> ExecOracle<'a> {
    pub(crate) fn new(m: usize, n: usize, budget: usize, mode: AnswerMode<'a>) -> Self {
        ExecOracle {
            m,
            n,
            mode,
            halt_image: None,
            halt_on_miss: false,
            membership_quota: None,
            budget,
            queries: Vec::new(),
            seen: BTreeSet::new(),
            distinct_membership: 0,
            dec_phase: false,
            dec_samples: BTreeSet::new(),
            stop: None,
        }
    }

    /// Register a well-formed query; repeats are free.
    fn register(&mut self, q: Query) -> OracleResult<bool> {
        if self.seen.contains(&q) {
            return Ok(false);
        }
        if self.queries.len() == self.budget {
            self.stop = Some(StopKind::BudgetExceeded);
            return Err(Halted);
        }
        self.seen.insert(q.clone());
        if matches!(q, Query::Membership(_)) {
            self.distinct_membership += 1;
        }
        self.queries.push(q);
        Ok(true)
    }

    fn finish(self, output: Option<BitVector>) -> RunTrace {
        RunTrace {
            queries: self.queries,
            stop: self.stop.unwrap_or(StopKind::Completed),
            output,
            dec_samples: self.dec_samples,
        }
    }
}

impl SourceOracle for ExecOracle<'_> {
    fn seed_len(&self) -> usize {
        self.m
    }

    fn value_len(&self) -> usize {
        self.n
    }

    fn sample(&mut self, seed: &BitVector) -> OracleResult<Option<BitVector>> {
        if seed.len() != self.m {
            return Ok(None);
        }
        if self.dec_phase {
            self.dec_samples.insert(seed.clone());
        }
        self.register(Query::Sample(seed.clone()))?;
        match &self.mode {
            AnswerMode::Full { table } => {
                let img = table.lookup(seed);
                if self.halt_image.as_ref() == Some(img) {
                    self.stop = Some(StopKind::HaltSample(seed.clone()));
                    return Err(Halted);
                }
                Ok(Some(img.clone()))
            }
            AnswerMode::Partial { known, .. } => match known.get(seed) {
                Some(img) => Ok(Some(img.clone())),
                None => {
                    if self.halt_on_miss {
                        self.stop = Some(StopKind::SampleMiss(seed.clone()));
                        Err(Halted)
                    } else {
                        Ok(None)
                    }
                }
            },
        }
    }

    fn membership(&mut self, value: &BitVector) -> OracleResult<Option<bool>> {
        if value.len() != self.n {
            return Ok(None);
        }
        self.register(Query::Membership(value.clone()))?;
        if self.membership_quota == Some(self.distinct_membership) {
            self.stop = Some(StopKind::MembershipQuota);
            return Err(Halted);
        }
        let answer = match &self.mode {
            AnswerMode::Full { table } => table.image().contains(value),
            AnswerMode::Partial { members, .. } => members.contains(value),
        };
        Ok(Some(answer))
    }
}

/// Run `Enc(x)` then `Dec(Enc(x) + offset)` against the given oracle,
/// returning the unified trace. An early stop set by the oracle ends the run
/// without error; the caller decides what each stop kind means.
pub(crate) fn run_enc_dec(
    coder: &dyn TracedCoder,
    mut oracle: ExecOracle<'_>,
    x: &BitVector,
    offset: &BitVector,
) -> Result<RunTrace, ReconError> {
    assert_eq!(x.len(), coder.k(), "message length");
    assert_eq!(offset.len(), coder.n(), "offset length");
    let encoded = match coder.encode(x, &mut oracle) {
        Ok(word) => word,
        Err(Halted) => return Ok(oracle.finish(None)),
    };
    if encoded.len() != coder.n() {
        return Err(ReconError::Faithfulness(format!(
            "encoder produced {} bits, expected {}",
            encoded.len(),
            coder.n()
        )));
    }
    oracle.dec_phase = true;
    let received = encoded.xor(offset);
    match coder.decode(&received, &mut oracle) {
        Ok(out) => Ok(oracle.finish(Some(out))),
        Err(Halted) => Ok(oracle.finish(None)),
    }
}

/// Full-knowledge run with no early stops; budget overruns are errors.
pub fn run_with_truth(
    coder: &dyn TracedCoder,
    source: &SourceTable,
    x: &BitVector,
    offset: &BitVector,
) -> Result<RunTrace, ReconError> {
    let oracle = ExecOracle::new(
        source.m(),
        source.n(),
        coder.query_budget(),
        AnswerMode::Full { table: source },
    );
    let trace = run_enc_dec(coder, oracle, x, offset)?;
    if trace.stop == StopKind::BudgetExceeded {
        return Err(ReconError::BudgetExceeded { budget: coder.query_budget() });
    }
    Ok(trace)
}

/// Checks `Dec(Enc(x) + f(y)) = x` for every message and seed.
pub fn exact_corrector(coder: &dyn TracedCoder, source: &SourceTable) -> Result<bool, ReconError> {
    if coder.m() != source.m() || coder.n() != source.n() {
        return Err(ReconError::Parameter("coder and source dimensions differ".into()));
    }
    for xv in 0..1u64 << coder.k() {
        let x = BitVector::from_uint(coder.k(), xv);
        for z in source.entries().values() {
            let trace = run_with_truth(coder, source, &x, z)?;
            if trace.output.as_ref() != Some(&x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
