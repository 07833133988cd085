//! Decoders for codes facing low-entropy additive error sources.
//!
//! Three constructions, in increasing generality:
//! - flat syndrome tables, exact whenever support elements have distinct
//!   syndromes, with exact accounting of the ambiguous mass;
//! - a subspace recoverer whose parity check reads off span coefficients,
//!   hence never fails on subspace errors;
//! - a hash-sketch decoder for sources given only as `f(U_m)`, which
//!   resamples a random linear sketch until few seeds collide.
//!
//! A decoder that beats guessing also distinguishes the source from uniform
//! noise; [`distinguisher_from_decoder`] measures that advantage.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::codes::{CodeError, ErrorSampler, LinearCode, Recoverer};
use crate::gf2::{BitMatrix, BitVector, Gf2Error};
use crate::seeding::trial_rng;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no sketch with small collision set after {attempts} attempts")]
    HashSelectionFailed { attempts: usize },
    #[error("syndrome {0} matches no table entry")]
    NoPreimage(String),
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1);
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(BitVector),
    /// Several support elements share this syndrome.
    Ambiguous,
    /// No support element has this syndrome.
    NoMatch,
}

/// Syndrome table for a flat source: maps each syndrome reached by exactly
/// one support element to that element, and records the others as ambiguous.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    unique: BTreeMap<BitVector, BitVector>,
    /// Ambiguous syndrome -> number of support elements mapping to it.
    ambiguous: BTreeMap<BitVector, usize>,
    support_size: usize,
}

pub fn build_flat_table(
    code: &LinearCode,
    support: &[BitVector],
) -> Result<SyndromeTable, DecoderError> {
    if support.is_empty() {
        return Err(DecoderError::Parameter("support must be nonempty".into()));
    }
    let mut groups: BTreeMap<BitVector, Vec<&BitVector>> = BTreeMap::new();
    for z in support {
        groups.entry(code.syndrome(z)?).or_default().push(z);
    }
    let mut unique = BTreeMap::new();
    let mut ambiguous = BTreeMap::new();
    for (s, zs) in groups {
        if zs.len() == 1 {
            unique.insert(s, zs[0].clone());
        } else {
            ambiguous.insert(s, zs.len());
        }
    }
    Ok(SyndromeTable { unique, ambiguous, support_size: support.len() })
}

impl SyndromeTable {
    pub fn lookup(&self, syndrome: &BitVector) -> DecodeOutcome {
        if let Some(z) = self.unique.get(syndrome) {
            DecodeOutcome::Decoded(z.clone())
        } else if self.ambiguous.contains_key(syndrome) {
            DecodeOutcome::Ambiguous
        } else {
            DecodeOutcome::NoMatch
        }
    }

    /// Exact failure probability for errors drawn uniformly from the support:
    /// the fraction of support mass landing on ambiguous syndromes.
    pub fn failure_probability(&self) -> f64 {
        self.ambiguous_mass() as f64 / self.support_size as f64
    }

    /// Number of support elements sharing their syndrome with another.
    pub fn ambiguous_mass(&self) -> usize {
        self.ambiguous.values().sum()
    }

    pub fn ambiguous_syndrome_count(&self) -> usize {
        self.ambiguous.len()
    }

    pub fn unique_count(&self) -> usize {
        self.unique.len()
    }

    pub fn support_size(&self) -> usize {
        self.support_size
    }
}

impl Recoverer for SyndromeTable {
    fn recover(&self, syndrome: &BitVector) -> Option<BitVector> {
        match self.lookup(syndrome) {
            DecodeOutcome::Decoded(z) => Some(z),
            _ => None,
        }
    }
}

/// Recoverer for errors confined to the span of a fixed basis; the paired
/// parity check makes the syndrome equal to the span coefficients.
#[derive(Debug, Clone)]
pub struct SubspaceRecoverer {
    basis: Vec<BitVector>,
}

impl Recoverer for SubspaceRecoverer {
    fn recover(&self, syndrome: &BitVector) -> Option<BitVector> {
        if syndrome.len() != self.basis.len() {
            return None;
        }
        let mut acc = BitVector::zeros(self.basis[0].len());
        for i in syndrome.ones() {
            acc.xor_assign(&self.basis[i]);
        }
        Some(acc)
    }
}

/// Builds a code of dimension `n - m` whose syndrome map restricted to the
/// span of `basis` inverts the coefficient map, plus the matching recoverer.
/// Decoding is then exact for every error in the span.
///
/// Construction: extend `basis` to a basis `B` of the full space with unit
/// vectors at the non-pivot columns of its reduced form; the first `m`
/// columns of `B^{-1}` read off span coefficients, so their transpose is the
/// parity check.
pub fn subspace_recoverer(
    basis: &[BitVector],
) -> Result<(LinearCode, SubspaceRecoverer), DecoderError> {
    let m = basis.len();
    let Some(first) = basis.first() else {
        return Err(DecoderError::Parameter("basis must be nonempty".into()));
    };
    let n = first.len();
    if basis.iter().any(|z| z.len() != n) {
        return Err(DecoderError::Parameter("basis vectors must share one length".into()));
    }
    if m >= n {
        return Err(DecoderError::Parameter(format!(
            "span of dimension {m} leaves no message bits in {n}"
        )));
    }
    let bm = BitMatrix::from_rows(basis.to_vec());
    let rref = bm.rref();
    if rref.pivots.len() != m {
        return Err(DecoderError::Parameter("basis vectors are linearly dependent".into()));
    }
    let mut rows = basis.to_vec();
    for j in 0..n {
        if !rref.pivots.contains(&j) {
            let mut e = BitVector::zeros(n);
            e.set(j, true);
            rows.push(e);
        }
    }
    let b = BitMatrix::from_rows(rows);
    let binv = b.inverse().expect("unit extension at free columns is invertible");
    // h[i][j] = binv[j][i] for the first m columns of B^{-1}.
    let mut h = BitMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            h.set(i, j, binv.get(j, i));
        }
    }
    let code = LinearCode::from_parity_check(&h, n - m)?;
    Ok((code, SubspaceRecoverer { basis: basis.to_vec() }))
}

/// Decoder for sources presented as `f(U_m)` with `f` arbitrary (not
/// necessarily injective). A random linear sketch is resampled until the
/// set of seeds whose image collides with a differing image is small; the
/// sketch then doubles as the parity check.
pub struct HashDecoder {
    code: LinearCode,
    /// Sketch value -> image of the numerically smallest seed reaching it.
    image_by_hash: BTreeMap<BitVector, BitVector>,
    seed_by_hash: BTreeMap<BitVector, BitVector>,
    m: usize,
    collision_count: usize,
    collision_bound: usize,
    exact_failures: usize,
    attempts: usize,
}

/// Picks a sketch with `r = m + 2c*ceil(log2 n)` rows. A sketch is accepted
/// when at most `floor(2^m / n^c)` seeds collide with a differing image;
/// sampled sketches fail that test with probability below `n^-c`.
pub fn build_hash_decoder(
    n: usize,
    m: usize,
    c: u32,
    f: &dyn Fn(&BitVector) -> BitVector,
    seed: u64,
) -> Result<HashDecoder, DecoderError> {
    if m == 0 || m > 24 {
        return Err(DecoderError::Parameter(format!("seed length {m} out of range 1..=24")));
    }
    let r = m + 2 * c as usize * ceil_log2(n);
    if r >= n {
        return Err(DecoderError::Parameter(format!(
            "sketch needs {r} rows, leaving no message bits in {n}"
        )));
    }
    let images: Vec<BitVector> = (0..1u64 << m).map(|v| f(&BitVector::from_uint(m, v))).collect();
    if images.iter().any(|z| z.len() != n) {
        return Err(DecoderError::Parameter(format!("images must have length {n}")));
    }
    let denom = (n as u128)
        .checked_pow(c)
        .ok_or_else(|| DecoderError::Parameter(format!("n^c overflows for n={n}, c={c}")))?;
    let collision_bound = ((1u128 << m) / denom) as usize;

    const MAX_ATTEMPTS: usize = 64;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = trial_rng(seed, &[0x6861_7368, attempt as u64]);
        let h0 = BitMatrix::random(r, n, &mut rng);
        let hashes: Vec<BitVector> =
            images.iter().map(|z| z.mul_mat_transpose(&h0).unwrap()).collect();
        let mut groups: BTreeMap<&BitVector, Vec<usize>> = BTreeMap::new();
        for (v, hv) in hashes.iter().enumerate() {
            groups.entry(hv).or_default().push(v);
        }
        let collision_count = sketch_collision_count(&images, &h0)?;
        if collision_count > collision_bound {
            continue;
        }
        let code = LinearCode::from_parity_check(&h0, n - r)?;
        let mut image_by_hash = BTreeMap::new();
        let mut seed_by_hash = BTreeMap::new();
        for (hv, seeds) in &groups {
            // Ascending seed order, so the first entry is the lex-smallest.
            let v = seeds[0];
            image_by_hash.insert((*hv).clone(), images[v].clone());
            seed_by_hash.insert((*hv).clone(), BitVector::from_uint(m, v as u64));
        }
        let exact_failures =
            (0..images.len()).filter(|&v| image_by_hash[&hashes[v]] != images[v]).count();
        return Ok(HashDecoder {
            code,
            image_by_hash,
            seed_by_hash,
            m,
            collision_count,
            collision_bound,
            exact_failures,
            attempts: attempt + 1,
        });
    }
    Err(DecoderError::HashSelectionFailed { attempts: MAX_ATTEMPTS })
}

impl HashDecoder {
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `|C_h| / 2^m`: analysis upper bound on the failure probability.
    pub fn collision_fraction(&self) -> f64 {
        self.collision_count as f64 / (1u64 << self.m) as f64
    }

    pub fn collision_count(&self) -> usize {
        self.collision_count
    }

    pub fn collision_bound(&self) -> usize {
        self.collision_bound
    }

    pub fn attempts(&self) -> usize {
        self.attempts
    }

    /// Exact failure probability over a uniform seed: the fraction of seeds
    /// whose image differs from the one stored for their sketch value.
    pub fn exact_failure_probability(&self) -> f64 {
        self.exact_failures as f64 / (1u64 << self.m) as f64
    }

    /// Lex-smallest seed whose image reaches this sketch value.
    pub fn invert_hash(&self, hash: &BitVector) -> Option<&BitVector> {
        self.seed_by_hash.get(hash)
    }

    pub fn decode(&self, y: &BitVector) -> Result<BitVector, DecoderError> {
        let s = self.code.syndrome(y)?;
        let img = self.image_by_hash.get(&s).ok_or_else(|| DecoderError::NoPreimage(s.to_hex()))?;
        Ok(y.xor(img).mul_mat(self.code.generator_right_inverse())?)
    }
}

impl Recoverer for HashDecoder {
    fn recover(&self, syndrome: &BitVector) -> Option<BitVector> {
        self.image_by_hash.get(syndrome).cloned()
    }
}

/// Number of seeds whose image shares a sketch value with a differing image.
/// This is the quantity the sketch selection in [`build_hash_decoder`] tests
/// against `floor(2^m / n^c)`.
pub fn sketch_collision_count(images: &[BitVector], h0: &BitMatrix) -> Result<usize, DecoderError> {
    let mut groups: BTreeMap<BitVector, Vec<usize>> = BTreeMap::new();
    for (v, z) in images.iter().enumerate() {
        groups.entry(z.mul_mat_transpose(h0)?).or_default().push(v);
    }
    Ok(groups
        .values()
        .map(|seeds| {
            let distinct: std::collections::BTreeSet<&BitVector> =
                seeds.iter().map(|&v| &images[v]).collect();
            if distinct.len() > 1 {
                seeds.len()
            } else {
                0
            }
        })
        .sum())
}

/// Reference inverter: scan seeds in numeric order and return the first
/// whose sketched image equals `target`.
pub fn brute_force_hash_inverter(
    m: usize,
    f: &dyn Fn(&BitVector) -> BitVector,
    h0: &BitMatrix,
    target: &BitVector,
) -> Option<BitVector> {
    (0..1u64 << m)
        .map(|v| BitVector::from_uint(m, v))
        .find(|x| f(x).mul_mat_transpose(h0).map(|hv| &hv == target).unwrap_or(false))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguisherOutcome {
    /// Acceptance rate when the offset comes from the source.
    pub source_accept: f64,
    /// Acceptance rate when the offset is a uniform vector.
    pub uniform_accept: f64,
    /// `source_accept - uniform_accept`.
    pub advantage: f64,
    pub trials: usize,
}

/// Turns a decoder into a distinguisher between the error source and uniform
/// noise: accept a candidate offset `w` when decoding `Enc(x) + w` returns
/// `x`. Decoders that usually correct the source accept its offsets, while a
/// uniform offset is accepted only when it behaves like a correctable error.
pub fn distinguisher_from_decoder(
    code: &LinearCode,
    rec: &dyn Recoverer,
    source: &dyn ErrorSampler,
    trials: usize,
    seed: u64,
) -> DistinguisherOutcome {
    assert!(trials > 0);
    let accepts = |w: &BitVector, x: &BitVector| -> bool {
        let y = code.encode(x).expect("message length").xor(w);
        match code.syndrome_decode(rec, &y) {
            Ok(decoded) => &decoded == x,
            Err(_) => false,
        }
    };
    let mut source_hits = 0usize;
    let mut uniform_hits = 0usize;
    for t in 0..trials {
        let mut rng_s = trial_rng(seed, &[0x7372_6300, t as u64]);
        let x = BitVector::random(code.k(), &mut rng_s);
        let w = source.sample_error(&mut rng_s);
        if accepts(&w, &x) {
            source_hits += 1;
        }
        let mut rng_u = trial_rng(seed, &[0x756e_6900, t as u64]);
        let x = BitVector::random(code.k(), &mut rng_u);
        let w = BitVector::random(code.n(), &mut rng_u);
        if accepts(&w, &x) {
            uniform_hits += 1;
        }
    }
    let source_accept = source_hits as f64 / trials as f64;
    let uniform_accept = uniform_hits as f64 / trials as f64;
    DistinguisherOutcome {
        source_accept,
        uniform_accept,
        advantage: source_accept - uniform_accept,
        trials,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::ErrorSampler;
    use proptest::prelude::*;
    use rand::RngCore;
    use std::collections::HashMap;

    fn bv(bits: &str) -> BitVector {
        BitVector::from_bits(
            &bits.chars().map(|c| c.to_digit(2).unwrap() as u8).collect::<Vec<_>>(),
        )
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(rows.iter().map(|r| bv(r)).collect())
    }

    fn toy_code() -> LinearCode {
        // G = [1100; 0011], H = [1111; 0011].
        LinearCode::from_parity_check(&mat(&["1111", "0011"]), 2).unwrap()
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(32), 5);
        assert_eq!(ceil_log2(33), 6);
    }

    #[test]
    fn flat_table_distinct_syndromes_decode_exactly() {
        let code = toy_code();
        let support = vec![bv("0000"), bv("1000")];
        let table = build_flat_table(&code, &support).unwrap();
        assert_eq!(table.failure_probability(), 0.0);
        assert_eq!(table.unique_count(), 2);
        assert_eq!(table.ambiguous_syndrome_count(), 0);
        for xv in 0..4u64 {
            let x = BitVector::from_uint(2, xv);
            for e in &support {
                let y = code.encode(&x).unwrap().xor(e);
                assert_eq!(code.syndrome_decode(&table, &y).unwrap(), x);
            }
        }
    }

    #[test]
    fn flat_table_reports_ambiguity() {
        let code = toy_code();
        // s(1000) = 10 and s(0111) = 10 collide; 0000 stays unique.
        let table = build_flat_table(&code, &[bv("1000"), bv("0111"), bv("0000")]).unwrap();
        assert_eq!(table.ambiguous_mass(), 2);
        assert_eq!(table.ambiguous_syndrome_count(), 1);
        assert_eq!(table.failure_probability(), 2.0 / 3.0);
        assert_eq!(table.lookup(&bv("10")), DecodeOutcome::Ambiguous);
        assert_eq!(table.lookup(&bv("00")), DecodeOutcome::Decoded(bv("0000")));
        assert_eq!(table.lookup(&bv("01")), DecodeOutcome::NoMatch);
        // Ambiguous syndromes surface as a decode error.
        let y = code.encode(&bv("11")).unwrap().xor(&bv("1000"));
        assert!(code.syndrome_decode(&table, &y).is_err());
    }

    #[test]
    fn all_codeword_support_always_fails() {
        let code = toy_code();
        let support: Vec<BitVector> =
            (0..4u64).map(|v| code.encode(&BitVector::from_uint(2, v)).unwrap()).collect();
        let table = build_flat_table(&code, &support).unwrap();
        assert_eq!(table.failure_probability(), 1.0);
        assert_eq!(table.unique_count(), 0);
    }

    #[test]
    fn subspace_recoverer_reads_off_coefficients() {
        let basis = vec![bv("1100"), bv("0011")];
        let (code, rec) = subspace_recoverer(&basis).unwrap();
        assert_eq!(code.n(), 4);
        assert_eq!(code.k(), 2);
        // The syndrome of a span element is its coefficient vector.
        for c in 0..4u64 {
            let coeffs = BitVector::from_uint(2, c);
            let mut e = BitVector::zeros(4);
            for i in coeffs.ones() {
                e.xor_assign(&basis[i]);
            }
            assert_eq!(code.syndrome(&e).unwrap(), coeffs);
            assert_eq!(rec.recover(&coeffs), Some(e));
        }
    }

    #[test]
    fn subspace_decoding_is_exact() {
        let mut rng = crate::seeding::trial_rng(31, &[]);
        let basis = loop {
            let cand: Vec<BitVector> = (0..5).map(|_| BitVector::random(12, &mut rng)).collect();
            if BitMatrix::from_rows(cand.clone()).rank() == 5 {
                break cand;
            }
        };
        let (code, rec) = subspace_recoverer(&basis).unwrap();
        assert_eq!(code.k(), 7);
        for c in 0..32u64 {
            let coeffs = BitVector::from_uint(5, c);
            let mut e = BitVector::zeros(12);
            for i in coeffs.ones() {
                e.xor_assign(&basis[i]);
            }
            for xv in [0u64, 1, 77, 127] {
                let x = BitVector::from_uint(7, xv);
                let y = code.encode(&x).unwrap().xor(&e);
                assert_eq!(code.syndrome_decode(&rec, &y).unwrap(), x);
            }
        }
    }

    #[test]
    fn subspace_recoverer_rejects_bad_bases() {
        assert!(matches!(subspace_recoverer(&[]), Err(DecoderError::Parameter(_))));
        assert!(matches!(
            subspace_recoverer(&[bv("1100"), bv("0011"), bv("1111")]),
            Err(DecoderError::Parameter(_))
        ));
        let full: Vec<BitVector> = (0..3)
            .map(|i| {
                let mut e = BitVector::zeros(3);
                e.set(i, true);
                e
            })
            .collect();
        assert!(matches!(subspace_recoverer(&full), Err(DecoderError::Parameter(_))));
    }

    fn embed_f(m: usize, n: usize) -> impl Fn(&BitVector) -> BitVector {
        move |seed: &BitVector| {
            let mut z = BitVector::zeros(n);
            for i in 0..m {
                z.set(n - m + i, seed.get(i));
            }
            z
        }
    }

    #[test]
    fn hash_decoder_rejects_tight_dimensions() {
        // r = 3 + 2*3 = 9 >= 8 leaves no message bits.
        let f = embed_f(3, 8);
        assert!(matches!(build_hash_decoder(8, 3, 1, &f, 5), Err(DecoderError::Parameter(_))));
    }

    #[test]
    fn hash_decoder_with_zero_collision_bound_is_exact() {
        // n=16, m=3, c=1: r=11, k=5, bound = floor(8/16) = 0, so any
        // accepted sketch decodes perfectly.
        let f = embed_f(3, 16);
        let hd = build_hash_decoder(16, 3, 1, &f, 42).unwrap();
        assert_eq!(hd.collision_bound(), 0);
        assert_eq!(hd.collision_count(), 0);
        assert_eq!(hd.exact_failure_probability(), 0.0);
        assert_eq!(hd.code().k(), 5);
        for sv in 0..8u64 {
            let e = f(&BitVector::from_uint(3, sv));
            for xv in [0u64, 9, 31] {
                let x = BitVector::from_uint(5, xv);
                let y = hd.code().encode(&x).unwrap().xor(&e);
                assert_eq!(hd.decode(&y).unwrap(), x);
                // The Recoverer view agrees.
                assert_eq!(hd.code().syndrome_decode(&hd, &y).unwrap(), x);
            }
        }
    }

    #[test]
    fn hash_decoder_inverter_matches_brute_force() {
        let f = embed_f(3, 16);
        let hd = build_hash_decoder(16, 3, 1, &f, 43).unwrap();
        let h0 = hd.code().parity_check();
        for sv in 0..8u64 {
            let seed = BitVector::from_uint(3, sv);
            let hash = f(&seed).mul_mat_transpose(h0).unwrap();
            let brute = brute_force_hash_inverter(3, &f, h0, &hash).unwrap();
            assert_eq!(hd.invert_hash(&hash), Some(&brute));
        }
        let absent = bv("10101010101");
        assert_eq!(
            hd.invert_hash(&absent).is_some(),
            brute_force_hash_inverter(3, &f, h0, &absent).is_some()
        );
    }

    #[test]
    fn hash_decoder_reports_unknown_syndromes() {
        let f = embed_f(3, 16);
        let hd = build_hash_decoder(16, 3, 1, &f, 44).unwrap();
        let mut hit = false;
        for v in 0..200u64 {
            let y = BitVector::from_uint(16, v);
            if let Err(DecoderError::NoPreimage(_)) = hd.decode(&y) {
                hit = true;
                break;
            }
        }
        assert!(hit, "some word should miss the 8-entry table");
    }

    #[test]
    fn hash_decoder_tolerates_repeated_images() {
        // f maps two seeds to the same image: those seeds never count as
        // collisions, and both decode correctly.
        let base = embed_f(2, 16);
        let f = move |seed: &BitVector| {
            if seed.to_uint() == 1 {
                base(&BitVector::zeros(2))
            } else {
                base(seed)
            }
        };
        let hd = build_hash_decoder(16, 2, 1, &f, 45).unwrap();
        assert_eq!(hd.exact_failure_probability(), 0.0);
        for sv in 0..4u64 {
            let e = f(&BitVector::from_uint(2, sv));
            let x = BitVector::from_uint(6, 33);
            let y = hd.code().encode(&x).unwrap().xor(&e);
            assert_eq!(hd.decode(&y).unwrap(), x);
        }
    }

    struct ListSource(Vec<BitVector>);

    impl ErrorSampler for ListSource {
        fn block_len(&self) -> usize {
            self.0[0].len()
        }

        fn sample_error(&self, rng: &mut dyn RngCore) -> BitVector {
            let i = (rng.next_u64() % self.0.len() as u64) as usize;
            self.0[i].clone()
        }

        fn enumerate(&self) -> Option<Vec<BitVector>> {
            Some(self.0.clone())
        }
    }

    #[test]
    fn perfect_decoder_distinguishes_source_from_uniform() {
        let mut rng = crate::seeding::trial_rng(32, &[]);
        let basis = loop {
            let cand: Vec<BitVector> = (0..2).map(|_| BitVector::random(8, &mut rng)).collect();
            if BitMatrix::from_rows(cand.clone()).rank() == 2 {
                break cand;
            }
        };
        let (code, rec) = subspace_recoverer(&basis).unwrap();
        let mut span = Vec::new();
        for c in 0..4u64 {
            let coeffs = BitVector::from_uint(2, c);
            let mut e = BitVector::zeros(8);
            for i in coeffs.ones() {
                e.xor_assign(&basis[i]);
            }
            span.push(e);
        }
        let source = ListSource(span);
        let out = distinguisher_from_decoder(&code, &rec, &source, 200, 77);
        assert_eq!(out.source_accept, 1.0);
        assert!(out.advantage > 0.9, "advantage {} too small", out.advantage);
        let again = distinguisher_from_decoder(&code, &rec, &source, 200, 77);
        assert_eq!(out, again);
    }

    proptest! {
        #[test]
        fn prop_failure_matches_grouping_oracle(seed in 0u64..300) {
            let mut rng = crate::seeding::trial_rng(seed, &[2]);
            let code = LinearCode::random(10, 4, seed.wrapping_add(1000));
            // Random distinct support of size 12.
            let mut support = Vec::new();
            let mut seen = std::collections::BTreeSet::new();
            while support.len() < 12 {
                let z = BitVector::random(10, &mut rng);
                if seen.insert(z.clone()) {
                    support.push(z);
                }
            }
            let table = build_flat_table(&code, &support).unwrap();
            // Oracle: group syndromes independently with a HashMap.
            let mut groups: HashMap<String, usize> = HashMap::new();
            for z in &support {
                *groups.entry(code.syndrome(z).unwrap().to_hex()).or_default() += 1;
            }
            let mass: usize = groups.values().filter(|&&c| c > 1).sum();
            prop_assert_eq!(table.ambiguous_mass(), mass);
            prop_assert_eq!(table.failure_probability(), mass as f64 / 12.0);
        }

        #[test]
        fn prop_hash_decoder_failure_matches_exhaustive_check(seed in 0u64..50) {
            let mut rng = crate::seeding::trial_rng(seed, &[3]);
            let map = crate::error_models::InjectiveMap::random(3, 16, &mut rng);
            let f = |s: &BitVector| map.apply(s);
            let hd = build_hash_decoder(16, 3, 1, &f, seed).unwrap();
            let x = BitVector::from_uint(hd.code().k(), 7);
            let mut failures = 0usize;
            for sv in 0..8u64 {
                let e = f(&BitVector::from_uint(3, sv));
                let y = hd.code().encode(&x).unwrap().xor(&e);
                if hd.decode(&y).ok() != Some(x.clone()) {
                    failures += 1;
                }
            }
            prop_assert_eq!(hd.exact_failure_probability(), failures as f64 / 8.0);
            prop_assert!(hd.collision_count() <= hd.collision_bound());
        }
    }
}
