//! Samplable additive error sources.
//!
//! Every source draws `n`-bit error vectors from a seeded generator. Flat
//! kinds are uniform over their support and report exact entropy; the
//! expander-image kind only certifies an entropy upper bound (its seed
//! length). Sources advertise two optional capabilities: support enumeration
//! and membership testing.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::codes::{CodeError, ErrorSampler, LinearCode};
use crate::gf2::{BitMatrix, BitVector, Gf2Error};

#[derive(Debug, Error)]
pub enum ErrorModelError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("support vectors must be distinct")]
    DuplicateSupport,
    #[error("map images must be distinct")]
    NotInjective,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("requested entropy {m} exceeds code dimension {k}")]
    EntropyTooLarge { m: usize, k: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Entropy in bits; `exact` is false when the value is only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entropy {
    pub bits: f64,
    pub exact: bool,
}

impl Entropy {
    pub fn exact(bits: f64) -> Self {
        Entropy { bits, exact: true }
    }

    pub fn upper_bound(bits: f64) -> Self {
        Entropy { bits, exact: false }
    }
}

/// Tabulated injective map `{0,1}^m -> {0,1}^n`, stored in seed order.
#[derive(Clone, PartialEq, Eq)]
pub struct InjectiveMap {
    m: usize,
    n: usize,
    table: Vec<BitVector>,
    image: BTreeSet<BitVector>,
}

impl fmt::Debug for InjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InjectiveMap({} -> {} bits)", self.m, self.n)
    }
}

impl InjectiveMap {
    /// `table[v]` is the image of the seed with numeric value `v`.
    pub fn from_table(m: usize, n: usize, table: Vec<BitVector>) -> Result<Self, ErrorModelError> {
        assert!(m <= 24, "tabulated maps need small seed length");
        if table.len() != 1 << m {
            return Err(ErrorModelError::Parameter(format!(
                "table has {} rows, want {}",
                table.len(),
                1 << m
            )));
        }
        if table.iter().any(|z| z.len() != n) {
            return Err(ErrorModelError::Parameter(format!("images must have length {n}")));
        }
        let image: BTreeSet<BitVector> = table.iter().cloned().collect();
        if image.len() != table.len() {
            return Err(ErrorModelError::NotInjective);
        }
        Ok(InjectiveMap { m, n, table, image })
    }

    /// Seed bits placed at positions `0..m`, zero elsewhere.
    pub fn identity_embed(m: usize, n: usize) -> Self {
        assert!(m <= n, "cannot embed {m} bits into {n}");
        let table = (0..1u64 << m)
            .map(|v| {
                let seed = BitVector::from_uint(m, v);
                let mut z = BitVector::zeros(n);
                for i in 0..m {
                    z.set(i, seed.get(i));
                }
                z
            })
            .collect();
        Self::from_table(m, n, table).expect("embedding is injective")
    }

    /// Uniformly random injective map (rejection sampling on images).
    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Self {
        assert!(m <= n, "need 2^{m} distinct images in {n} bits");
        let mut image = BTreeSet::new();
        let mut table = Vec::with_capacity(1 << m);
        while table.len() < 1 << m {
            let z = BitVector::random(n, rng);
            if image.insert(z.clone()) {
                table.push(z);
            }
        }
        InjectiveMap { m, n, table, image }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, seed: &BitVector) -> BitVector {
        assert_eq!(seed.len(), self.m, "seed length");
        self.table[seed.to_uint() as usize].clone()
    }

    pub fn invert(&self, z: &BitVector) -> Option<BitVector> {
        if z.len() != self.n {
            return None;
        }
        // Small tables: scan. Seed order makes the result deterministic.
        self.table.iter().position(|img| img == z).map(|v| BitVector::from_uint(self.m, v as u64))
    }

    pub fn image_contains(&self, z: &BitVector) -> bool {
        z.len() == self.n && self.image.contains(z)
    }

    pub fn image_in_seed_order(&self) -> &[BitVector] {
        &self.table
    }

    /// Text form: `map <m> <n>` followed by `2^m` image rows in seed order.
    pub fn to_text(&self) -> String {
        let mut out = format!("map {} {}\n", self.m, self.n);
        for z in &self.table {
            out.push_str(&z.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, ErrorModelError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| ErrorModelError::Parse("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "map" {
            return Err(ErrorModelError::Parse(format!(
                "bad header {header:?}, want `map <m> <n>`"
            )));
        }
        let m: usize = parts[1]
            .parse()
            .map_err(|_| ErrorModelError::Parse(format!("bad m {:?}", parts[1])))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| ErrorModelError::Parse(format!("bad n {:?}", parts[2])))?;
        let mut table = Vec::with_capacity(1usize << m);
        for _ in 0..1usize << m {
            let line = lines
                .next()
                .ok_or_else(|| ErrorModelError::Parse(format!("expected {} image rows", 1 << m)))?;
            table.push(BitVector::from_hex(n, line.trim())?);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(ErrorModelError::Parse("trailing content after image rows".into()));
        }
        Self::from_table(m, n, table)
    }
}

enum SourceKind {
    FlatSupport { support: Vec<BitVector>, member: BTreeSet<BitVector> },
    FlatMap { map: InjectiveMap },
    Subspace { basis: Vec<BitVector> },
    Expander { ell: usize, expander: Box<dyn Fn(&BitVector) -> BitVector + Send + Sync> },
    CodewordFlat { code: LinearCode, m: usize },
}

/// A samplable distribution of additive errors.
pub struct ErrorSource {
    n: usize,
    kind: SourceKind,
}

impl fmt::Debug for ErrorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ErrorSource({}, n={}, H={:?})", self.kind_name(), self.n, self.entropy())
    }
}

/// Uniform over an explicit list of distinct vectors.
pub fn flat_from_support(support: Vec<BitVector>) -> Result<ErrorSource, ErrorModelError> {
    let Some(first) = support.first() else {
        return Err(ErrorModelError::Parameter("support must be nonempty".into()));
    };
    let n = first.len();
    if support.iter().any(|z| z.len() != n) {
        return Err(ErrorModelError::Parameter("support vectors must share one length".into()));
    }
    let member: BTreeSet<BitVector> = support.iter().cloned().collect();
    if member.len() != support.len() {
        return Err(ErrorModelError::DuplicateSupport);
    }
    Ok(ErrorSource { n, kind: SourceKind::FlatSupport { support, member } })
}

/// `f(U_m)` for an injective `f`: flat over the image with entropy exactly `m`.
pub fn flat_from_map(map: InjectiveMap) -> ErrorSource {
    ErrorSource { n: map.n(), kind: SourceKind::FlatMap { map } }
}

/// Uniform over the span of independent basis vectors.
pub fn subspace_source(basis: Vec<BitVector>) -> Result<ErrorSource, ErrorModelError> {
    let Some(first) = basis.first() else {
        return Err(ErrorModelError::Parameter("basis must be nonempty".into()));
    };
    let n = first.len();
    if basis.iter().any(|z| z.len() != n) {
        return Err(ErrorModelError::Parameter("basis vectors must share one length".into()));
    }
    let bm = BitMatrix::from_rows(basis.clone());
    if bm.rank() != basis.len() {
        return Err(ErrorModelError::DependentBasis);
    }
    Ok(ErrorSource { n, kind: SourceKind::Subspace { basis } })
}

/// Image of a seeded expander `{0,1}^ell -> {0,1}^n` with `ell < n`. The
/// expander need not be injective, so entropy is only bounded by `ell`;
/// membership testing is not offered.
pub fn prg_source(
    ell: usize,
    n: usize,
    expander: Box<dyn Fn(&BitVector) -> BitVector + Send + Sync>,
) -> Result<ErrorSource, ErrorModelError> {
    if ell >= n {
        return Err(ErrorModelError::Parameter(format!(
            "seed length {ell} must be shorter than output length {n}"
        )));
    }
    let probe = expander(&BitVector::zeros(ell));
    if probe.len() != n {
        return Err(ErrorModelError::Parameter(format!(
            "expander produced {} bits, want {n}",
            probe.len()
        )));
    }
    Ok(ErrorSource { n, kind: SourceKind::Expander { ell, expander } })
}

/// Default toy expander: keyed xorshift64* stream truncated to `n` bits.
pub fn keyed_xorshift_expander(
    ell: usize,
    n: usize,
    key: u64,
) -> Box<dyn Fn(&BitVector) -> BitVector + Send + Sync> {
    Box::new(move |seed: &BitVector| {
        assert_eq!(seed.len(), ell, "seed length");
        let mut state = seed.to_uint() ^ key ^ 0x9e37_79b9_7f4a_7c15;
        let mut out = BitVector::zeros(n);
        let mut produced = 0;
        while produced < n {
            // xorshift64* step.
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            let word = state.wrapping_mul(0x2545_f491_4f6c_dd1d);
            for b in 0..64.min(n - produced) {
                if (word >> b) & 1 == 1 {
                    out.set(produced + b, true);
                }
            }
            produced += 64;
        }
        out
    })
}

/// Uniform over the `2^m` encodings of the lexicographically smallest
/// messages: adversarial support made entirely of codewords.
pub fn codeword_flat(code: &LinearCode, m: usize) -> Result<ErrorSource, ErrorModelError> {
    if m == 0 {
        return Err(ErrorModelError::Parameter("entropy must be positive".into()));
    }
    if m > code.k() {
        return Err(ErrorModelError::EntropyTooLarge { m, k: code.k() });
    }
    Ok(ErrorSource { n: code.n(), kind: SourceKind::CodewordFlat { code: code.clone(), m } })
}

impl ErrorSource {
    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            SourceKind::FlatSupport { .. } => "flat-support",
            SourceKind::FlatMap { .. } => "flat-map",
            SourceKind::Subspace { .. } => "subspace",
            SourceKind::Expander { .. } => "prg",
            SourceKind::CodewordFlat { .. } => "codeword-flat",
        }
    }

    /// Flat kinds sample uniformly over their support.
    pub fn is_flat(&self) -> bool {
        !matches!(self.kind, SourceKind::Expander { .. })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitVector {
        match &self.kind {
            SourceKind::FlatSupport { support, .. } => {
                support[rng.gen_range(0..support.len())].clone()
            }
            SourceKind::FlatMap { map } => map.apply(&BitVector::random(map.m(), rng)),
            SourceKind::Subspace { basis } => {
                let coeffs = BitVector::random(basis.len(), rng);
                let mut acc = BitVector::zeros(self.n);
                for i in coeffs.ones() {
                    acc.xor_assign(&basis[i]);
                }
                acc
            }
            SourceKind::Expander { ell, expander } => expander(&BitVector::random(*ell, rng)),
            SourceKind::CodewordFlat { code, m } => {
                let v = rng.gen_range(0..1u64 << m);
                code.encode(&BitVector::from_uint(code.k(), v)).expect("message length fits")
            }
        }
    }

    pub fn entropy(&self) -> Entropy {
        match &self.kind {
            SourceKind::FlatSupport { support, .. } => {
                Entropy::exact((support.len() as f64).log2())
            }
            SourceKind::FlatMap { map } => Entropy::exact(map.m() as f64),
            SourceKind::Subspace { basis } => Entropy::exact(basis.len() as f64),
            SourceKind::Expander { ell, .. } => Entropy::upper_bound(*ell as f64),
            SourceKind::CodewordFlat { m, .. } => Entropy::exact(*m as f64),
        }
    }

    pub fn is_enumerable(&self) -> bool {
        match &self.kind {
            SourceKind::Expander { ell, .. } => *ell <= 20,
            _ => true,
        }
    }

    /// Support elements. Flat kinds enumerate in their canonical order
    /// (given order, seed order, coefficient order, message order); the
    /// expander kind deduplicates its image in first-seed order.
    pub fn enumerate_support(&self) -> Option<Vec<BitVector>> {
        match &self.kind {
            SourceKind::FlatSupport { support, .. } => Some(support.clone()),
            SourceKind::FlatMap { map } => Some(map.image_in_seed_order().to_vec()),
            SourceKind::Subspace { basis } => {
                let mut out = Vec::with_capacity(1 << basis.len());
                for v in 0..1u64 << basis.len() {
                    let coeffs = BitVector::from_uint(basis.len(), v);
                    let mut acc = BitVector::zeros(self.n);
                    for i in coeffs.ones() {
                        acc.xor_assign(&basis[i]);
                    }
                    out.push(acc);
                }
                Some(out)
            }
            SourceKind::Expander { ell, expander } => {
                if *ell > 20 {
                    return None;
                }
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                for v in 0..1u64 << ell {
                    let z = expander(&BitVector::from_uint(*ell, v));
                    if seen.insert(z.clone()) {
                        out.push(z);
                    }
                }
                Some(out)
            }
            SourceKind::CodewordFlat { code, m } => Some(
                (0..1u64 << m)
                    .map(|v| code.encode(&BitVector::from_uint(code.k(), v)).unwrap())
                    .collect(),
            ),
        }
    }

    pub fn supports_membership(&self) -> bool {
        !matches!(self.kind, SourceKind::Expander { .. })
    }

    /// `Some(true/false)` when the capability exists, `None` otherwise.
    pub fn membership(&self, z: &BitVector) -> Option<bool> {
        if z.len() != self.n {
            return self.supports_membership().then_some(false);
        }
        match &self.kind {
            SourceKind::FlatSupport { member, .. } => Some(member.contains(z)),
            SourceKind::FlatMap { map } => Some(map.image_contains(z)),
            SourceKind::Subspace { basis } => {
                let mut rows = basis.clone();
                rows.push(z.clone());
                Some(BitMatrix::from_rows(rows).rank() == basis.len())
            }
            SourceKind::Expander { .. } => None,
            SourceKind::CodewordFlat { code, m } => {
                let in_span = code.is_codeword(z).expect("length checked");
                if !in_span {
                    return Some(false);
                }
                let msg = z.mul_mat(code.generator_right_inverse()).expect("length checked");
                Some(msg.to_uint() < 1u64 << m)
            }
        }
    }

    /// `SD(Z, U_n) >= 1 - |support| / 2^n`; uses the entropy upper bound for
    /// the expander kind.
    pub fn uniform_distance_lower_bound(&self) -> f64 {
        let support_bits = match &self.kind {
            SourceKind::Expander { ell, .. } => *ell as f64,
            _ => (self.enumerate_support().expect("flat kinds are enumerable").len() as f64).log2(),
        };
        1.0 - (support_bits - self.n as f64).exp2()
    }
}

impl ErrorSampler for ErrorSource {
    fn block_len(&self) -> usize {
        self.n
    }

    fn sample_error(&self, rng: &mut dyn RngCore) -> BitVector {
        self.sample(rng)
    }

    fn enumerate(&self) -> Option<Vec<BitVector>> {
        self.enumerate_support()
    }
}

/// Text form for explicit supports: `support <n> <count>`, one hex row each.
pub fn write_support(vectors: &[BitVector]) -> String {
    let n = vectors.first().map_or(0, BitVector::len);
    let mut out = format!("support {} {}\n", n, vectors.len());
    for z in vectors {
        out.push_str(&z.to_hex());
        out.push('\n');
    }
    out
}

pub fn read_support(text: &str) -> Result<Vec<BitVector>, ErrorModelError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| ErrorModelError::Parse("empty input".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "support" {
        return Err(ErrorModelError::Parse(format!(
            "bad header {header:?}, want `support <n> <count>`"
        )));
    }
    let n: usize =
        parts[1].parse().map_err(|_| ErrorModelError::Parse(format!("bad n {:?}", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| ErrorModelError::Parse(format!("bad count {:?}", parts[2])))?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let line = lines
            .next()
            .ok_or_else(|| ErrorModelError::Parse(format!("expected {count} vectors")))?;
        out.push(BitVector::from_hex(n, line.trim())?);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(ErrorModelError::Parse("trailing content after vectors".into()));
    }
    Ok(out)
}
