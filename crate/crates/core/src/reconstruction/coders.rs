//! Example oracle coders, two per verdict.
//!
//! All four transmit with a fixed linear code and correct any mapper whose
//! images have pairwise distinct syndromes under that code; the received
//! word then pins the error's syndrome down to a unique image. They differ
//! in how the decoder locates that image, which drives the classification:
//!
//! - [`OracleEnumCoder`] scans seeds through the sample oracle, so every
//!   seed is sampled-on (budget `2^m`);
//! - [`LookupConfirmCoder`] stores the syndrome table internally and makes
//!   one confirming sample query (budget 1), the cheapest sampled-on shape;
//! - [`LookupCoder`] stores the same table but confirms with one membership
//!   query, so no seed is ever sampled (budget 1); an optional probe query
//!   shifts the confirmation to the second membership index;
//! - [`MembershipScanCoder`] tries messages and asks the membership oracle
//!   about the implied error (budget `2^k`), also never sampling. Its
//!   decisive query is always `word + Enc(x)` for a fixed scan position, so
//!   every candidate value passes its own replay test and the constructor's
//!   rank cap refuses to describe it. It exists to exercise that refusal.

use std::collections::BTreeMap;

use crate::codes::LinearCode;
use crate::gf2::BitVector;
use crate::seeding::trial_rng;

use super::oracle::{OracleResult, SourceOracle, SourceTable, TracedCoder};
use super::ReconError;

/// True when all `2^m` images have distinct syndromes (which also forces
/// the mapper to be injective).
pub fn syndromes_distinct(code: &LinearCode, source: &SourceTable) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    source
        .entries()
        .values()
        .all(|z| seen.insert(code.syndrome(z).expect("image length matches code")))
}

/// Random injective table whose images have distinct syndromes, found by
/// rejection sampling. Needs syndrome space headroom: `n - k >= m`.
pub fn random_syndrome_distinct_table(code: &LinearCode, m: usize, seed: u64) -> SourceTable {
    assert!(code.n() - code.k() >= m, "syndrome space too small for 2^{m} images");
    let mut rng = trial_rng(seed, &[0x7461_626c, m as u64]);
    let mut by_seed: BTreeMap<BitVector, BitVector> = BTreeMap::new();
    let mut used = std::collections::BTreeSet::new();
    for v in 0..1u64 << m {
        loop {
            let z = BitVector::random(code.n(), &mut rng);
            if used.insert(code.syndrome(&z).unwrap()) {
                by_seed.insert(BitVector::from_uint(m, v), z);
                break;
            }
        }
    }
    SourceTable::from_pairs(m, code.n(), &by_seed).expect("complete table")
}

fn check_dims(code: &LinearCode, m: usize) -> Result<(), ReconError> {
    if m == 0 || m > 24 {
        return Err(ReconError::Parameter(format!("seed length {m} out of range 1..=24")));
    }
    if code.n() - code.k() < m {
        return Err(ReconError::Parameter(format!(
            "code has {} syndrome bits, need at least {m}",
            code.n() - code.k()
        )));
    }
    Ok(())
}

/// Decoder that enumerates seeds through the sample oracle until one image
/// matches the received syndrome.
pub struct OracleEnumCoder {
    code: LinearCode,
    m: usize,
}

impl OracleEnumCoder {
    pub fn new(code: LinearCode, m: usize) -> Result<Self, ReconError> {
        check_dims(&code, m)?;
        Ok(OracleEnumCoder { code, m })
    }
}

impl TracedCoder for OracleEnumCoder {
    fn k(&self) -> usize {
        self.code.k()
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn query_budget(&self) -> usize {
        1 << self.m
    }

    fn encode(&self, x: &BitVector, _oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        Ok(self.code.encode(x).expect("message length"))
    }

    fn decode(&self, word: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        let target = self.code.syndrome(word).expect("word length");
        for v in 0..1u64 << self.m {
            let seed = BitVector::from_uint(self.m, v);
            if let Some(img) = oracle.sample(&seed)? {
                if self.code.syndrome(&img).expect("image length") == target {
                    return Ok(word
                        .xor(&img)
                        .mul_mat(self.code.generator_right_inverse())
                        .unwrap());
                }
            }
        }
        Ok(word.mul_mat(self.code.generator_right_inverse()).unwrap())
    }
}

/// Decoder with a hardwired syndrome table that confirms the stored seed
/// with a single sample query.
pub struct LookupConfirmCoder {
    code: LinearCode,
    m: usize,
    by_syndrome: BTreeMap<BitVector, (BitVector, BitVector)>,
}

impl LookupConfirmCoder {
    pub fn new(code: LinearCode, source: &SourceTable) -> Result<Self, ReconError> {
        check_dims(&code, source.m())?;
        if !syndromes_distinct(&code, source) {
            return Err(ReconError::Parameter("image syndromes collide under this code".into()));
        }
        let by_syndrome = source
            .entries()
            .iter()
            .map(|(y, z)| (code.syndrome(z).unwrap(), (y.clone(), z.clone())))
            .collect();
        Ok(LookupConfirmCoder { code, m: source.m(), by_syndrome })
    }
}

impl TracedCoder for LookupConfirmCoder {
    fn k(&self) -> usize {
        self.code.k()
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn query_budget(&self) -> usize {
        1
    }

    fn encode(&self, x: &BitVector, _oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        Ok(self.code.encode(x).expect("message length"))
    }

    fn decode(&self, word: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        let s = self.code.syndrome(word).expect("word length");
        let ginv = self.code.generator_right_inverse();
        match self.by_syndrome.get(&s) {
            Some((y, z)) => {
                let _ = oracle.sample(y)?;
                Ok(word.xor(z).mul_mat(ginv).unwrap())
            }
            None => Ok(word.mul_mat(ginv).unwrap()),
        }
    }
}

/// Decoder with a hardwired syndrome table that confirms the stored error
/// with a single membership query; it never samples a seed.
pub struct LookupCoder {
    code: LinearCode,
    m: usize,
    by_syndrome: BTreeMap<BitVector, BitVector>,
    probe: Option<BitVector>,
}

impl LookupCoder {
    pub fn new(code: LinearCode, source: &SourceTable) -> Result<Self, ReconError> {
        check_dims(&code, source.m())?;
        if !syndromes_distinct(&code, source) {
            return Err(ReconError::Parameter("image syndromes collide under this code".into()));
        }
        let by_syndrome =
            source.entries().values().map(|z| (code.syndrome(z).unwrap(), z.clone())).collect();
        Ok(LookupCoder { code, m: source.m(), by_syndrome, probe: None })
    }

    /// Same decoder, but it pings a fixed probe value first, moving the
    /// confirming query to the second distinct membership index. If the
    /// probe equals a stored image, that entry collapses back to index one.
    pub fn with_probe(
        code: LinearCode,
        source: &SourceTable,
        probe: BitVector,
    ) -> Result<Self, ReconError> {
        if probe.len() != code.n() {
            return Err(ReconError::Parameter("probe length differs from block length".into()));
        }
        let mut coder = LookupCoder::new(code, source)?;
        coder.probe = Some(probe);
        Ok(coder)
    }
}

impl TracedCoder for LookupCoder {
    fn k(&self) -> usize {
        self.code.k()
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn query_budget(&self) -> usize {
        1 + self.probe.is_some() as usize
    }

    fn encode(&self, x: &BitVector, _oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        Ok(self.code.encode(x).expect("message length"))
    }

    fn decode(&self, word: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        if let Some(p) = &self.probe {
            let _ = oracle.membership(p)?;
        }
        let s = self.code.syndrome(word).expect("word length");
        let ginv = self.code.generator_right_inverse();
        match self.by_syndrome.get(&s) {
            Some(z) => {
                let _ = oracle.membership(z)?;
                Ok(word.xor(z).mul_mat(ginv).unwrap())
            }
            None => Ok(word.mul_mat(ginv).unwrap()),
        }
    }
}

/// Decoder that guesses the message: for each candidate `x'` it asks the
/// membership oracle whether `word + Enc(x')` is an image, returning the
/// first hit. With distinct image syndromes only the true message hits.
pub struct MembershipScanCoder {
    code: LinearCode,
    m: usize,
    /// Scan candidates in descending order instead (moves the hit to a
    /// later membership index).
    descending: bool,
}

impl MembershipScanCoder {
    pub fn new(code: LinearCode, m: usize, descending: bool) -> Result<Self, ReconError> {
        check_dims(&code, m)?;
        if code.k() > 16 {
            return Err(ReconError::Parameter("message scan needs k <= 16".into()));
        }
        Ok(MembershipScanCoder { code, m, descending })
    }
}

impl TracedCoder for MembershipScanCoder {
    fn k(&self) -> usize {
        self.code.k()
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    fn m(&self) -> usize {
        self.m
    }

    fn query_budget(&self) -> usize {
        1 << self.code.k()
    }

    fn encode(&self, x: &BitVector, _oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        Ok(self.code.encode(x).expect("message length"))
    }

    fn decode(&self, word: &BitVector, oracle: &mut dyn SourceOracle) -> OracleResult<BitVector> {
        let total = 1u64 << self.code.k();
        for i in 0..total {
            let xv = if self.descending { total - 1 - i } else { i };
            let x = BitVector::from_uint(self.code.k(), xv);
            let v = word.xor(&self.code.encode(&x).unwrap());
            if oracle.membership(&v)? == Some(true) {
                return Ok(x);
            }
        }
        Ok(word.mul_mat(self.code.generator_right_inverse()).unwrap())
    }
}
