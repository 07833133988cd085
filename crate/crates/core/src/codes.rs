//! Binary linear codes and syndrome decoding.
//!
//! A rate `k/n` code is carried as `(G, H, Ginv)` with `G` a `k x n`
//! generator, `H` a parity-check matrix orthogonal to `G`, and `Ginv` the
//! canonical right inverse of `G`. Decoding against an additive error is a
//! pure function of the syndrome: `dec(y) = (y + rec(y H^T)) Ginv`, where
//! `rec` maps syndromes back to error vectors and may declare failure.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector, Gf2Error};
use crate::seeding;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("generator rows are not independent")]
    RankDeficient,
    #[error("nullspace of the parity-check matrix has dimension {available}, need {requested}")]
    InvalidDimension { requested: usize, available: usize },
    #[error("generator is not orthogonal to the parity-check matrix")]
    NotOrthogonal,
    #[error("recoverer declared failure on syndrome {0}")]
    RecFailure(String),
    #[error("operation needs an enumerable error source")]
    NotEnumerable,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Supplies additive error vectors. Implemented by the concrete error-source
/// types; defined here so code-level operations can consume any of them.
pub trait ErrorSampler {
    /// Length of sampled vectors.
    fn block_len(&self) -> usize;
    /// Draw one error vector.
    fn sample_error(&self, rng: &mut dyn RngCore) -> BitVector;
    /// All support elements, when the source is enumerable.
    fn enumerate(&self) -> Option<Vec<BitVector>>;
}

/// Maps a syndrome to an error-vector estimate; `None` declares failure.
/// Implementations must be pure functions of the syndrome.
pub trait Recoverer {
    fn recover(&self, syndrome: &BitVector) -> Option<BitVector>;
}

#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    g: BitMatrix,
    h: BitMatrix,
    ginv: BitMatrix,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinearCode(n={}, k={})", self.n, self.k)
    }
}

impl LinearCode {
    /// Validates `G H^T = 0` and full row rank of `G`, then derives the
    /// canonical right inverse.
    pub fn new(g: BitMatrix, h: BitMatrix) -> Result<Self, CodeError> {
        let (k, n) = (g.rows(), g.cols());
        if h.cols() != n {
            return Err(Gf2Error::DimensionMismatch(format!(
                "parity-check cols {} vs block length {n}",
                h.cols()
            ))
            .into());
        }
        if !g.mat_mul(&h.transpose())?.is_zero() {
            return Err(CodeError::NotOrthogonal);
        }
        let ginv = g.right_inverse().map_err(|_| CodeError::RankDeficient)?;
        Ok(LinearCode { n, k, g, h, ginv })
    }

    /// Code with the first `k` nullspace basis vectors of `h` as generator
    /// rows. Works for any `h` whose nullspace has dimension at least `k`;
    /// a rank-deficient `h` simply leaves a larger nullspace.
    pub fn from_parity_check(h: &BitMatrix, k: usize) -> Result<Self, CodeError> {
        let basis = h.nullspace_basis();
        if basis.len() < k {
            return Err(CodeError::InvalidDimension { requested: k, available: basis.len() });
        }
        let g = BitMatrix::from_rows(basis[..k].to_vec());
        LinearCode::new(g, h.clone())
    }

    /// Uniformly random `(n-k) x n` parity-check matrix from `seed`.
    pub fn random(n: usize, k: usize, seed: u64) -> Self {
        assert!(k <= n, "dimension {k} exceeds block length {n}");
        let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive_seed(seed, &[n as u64, k as u64]));
        let h = BitMatrix::random(n - k, n, &mut rng);
        // n - k parity rows always leave a nullspace of dimension >= k.
        LinearCode::from_parity_check(&h, k).expect("nullspace cannot be smaller than k")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator_right_inverse(&self) -> &BitMatrix {
        &self.ginv
    }

    pub fn encode(&self, x: &BitVector) -> Result<BitVector, CodeError> {
        Ok(x.mul_mat(&self.g)?)
    }

    pub fn syndrome(&self, y: &BitVector) -> Result<BitVector, CodeError> {
        Ok(y.mul_mat_transpose(&self.h)?)
    }

    pub fn is_codeword(&self, y: &BitVector) -> Result<bool, CodeError> {
        Ok(self.syndrome(y)?.is_zero())
    }

    /// Syndrome decoding: subtract the recovered error, then invert the
    /// encoding.
    pub fn syndrome_decode(
        &self,
        rec: &dyn Recoverer,
        y: &BitVector,
    ) -> Result<BitVector, CodeError> {
        let s = self.syndrome(y)?;
        let e = rec.recover(&s).ok_or_else(|| CodeError::RecFailure(s.to_hex()))?;
        Ok(y.xor(&e).mul_mat(&self.ginv)?)
    }

    /// Text form: `code <n> <k>` followed by `G` and `H` blocks.
    pub fn to_text(&self) -> String {
        format!("code {} {}\n{}{}", self.n, self.k, self.g.to_text(), self.h.to_text())
    }

    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| CodeError::Parse("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "code" {
            return Err(CodeError::Parse(format!("bad header {header:?}, want `code <n> <k>`")));
        }
        let n: usize =
            parts[1].parse().map_err(|_| CodeError::Parse(format!("bad n {:?}", parts[1])))?;
        let k: usize =
            parts[2].parse().map_err(|_| CodeError::Parse(format!("bad k {:?}", parts[2])))?;
        let rest: Vec<&str> = lines.collect();
        if rest.len() < k + 1 {
            return Err(CodeError::Parse("missing generator block".into()));
        }
        let (g_lines, h_lines) = rest.split_at(k + 1);
        let g = BitMatrix::from_text(&g_lines.join("\n"))?;
        let h = BitMatrix::from_text(&h_lines.join("\n"))?;
        if g.rows() != k || g.cols() != n {
            return Err(CodeError::Parse(format!(
                "generator block is {}x{}, header says {k}x{n}",
                g.rows(),
                g.cols()
            )));
        }
        LinearCode::new(g, h)
    }
}

/// How to evaluate a candidate encoder's failure probability.
#[derive(Debug, Clone, Copy)]
pub enum EvalBudget {
    /// Exhaust the (enumerable) error support.
    Exact,
    /// Monte Carlo with a deterministic per-trial generator.
    Sampled { trials: usize, seed: u64 },
}

/// Per-message outcome of derandomization.
#[derive(Debug, Clone)]
pub struct CoinChoice {
    pub message: BitVector,
    pub coins: BitVector,
    /// Failure probability of the chosen coins.
    pub failure: f64,
    /// Mean failure over all coin strings, i.e. the randomized scheme's
    /// error for this message.
    pub randomized_mean: f64,
}

#[derive(Debug, Clone)]
pub struct DerandomizedEncoder {
    pub ell: usize,
    /// Indexed by message value; covers all `2^k` messages.
    pub choices: Vec<CoinChoice>,
}

impl DerandomizedEncoder {
    pub fn coins_for(&self, x: &BitVector) -> &BitVector {
        &self.choices[x.to_uint() as usize].coins
    }
}

/// Fixes the coins of a randomized encoder message by message: for each `x`,
/// keeps the lexicographically first coin string minimizing the failure
/// probability against `source`. The averaging argument guarantees the
/// chosen coins do at least as well as the randomized scheme's mean.
pub fn derandomize_encoder(
    k: usize,
    ell: usize,
    renc: &dyn Fn(&BitVector, &BitVector) -> BitVector,
    dec: &dyn Fn(&BitVector) -> Option<BitVector>,
    source: &dyn ErrorSampler,
    budget: EvalBudget,
) -> Result<DerandomizedEncoder, CodeError> {
    assert!(k <= 20 && ell <= 20, "exhaustive derandomization needs small k and ell");
    let support = match budget {
        EvalBudget::Exact => Some(source.enumerate().ok_or(CodeError::NotEnumerable)?),
        EvalBudget::Sampled { .. } => None,
    };
    let mut choices = Vec::with_capacity(1 << k);
    for xv in 0..(1u64 << k) {
        let x = BitVector::from_uint(k, xv);
        let mut best: Option<(f64, BitVector)> = None;
        let mut total = 0.0;
        for rv in 0..(1u64 << ell) {
            let r = BitVector::from_uint(ell, rv);
            let word = renc(&x, &r);
            let failure = match (&support, budget) {
                (Some(sup), _) => {
                    let bad = sup.iter().filter(|z| dec(&word.xor(z)) != Some(x.clone())).count();
                    bad as f64 / sup.len() as f64
                }
                (None, EvalBudget::Sampled { trials, seed }) => {
                    let mut bad = 0usize;
                    for t in 0..trials {
                        let mut rng = seeding::trial_rng(seed, &[xv, rv, t as u64]);
                        let z = source.sample_error(&mut rng);
                        if dec(&word.xor(&z)) != Some(x.clone()) {
                            bad += 1;
                        }
                    }
                    bad as f64 / trials as f64
                }
                (None, EvalBudget::Exact) => unreachable!(),
            };
            total += failure;
            // Strict improvement keeps the lexicographically first minimizer.
            if best.as_ref().is_none_or(|(b, _)| failure < *b) {
                best = Some((failure, r));
            }
        }
        let (failure, coins) = best.expect("at least one coin string");
        choices.push(CoinChoice {
            message: x,
            coins,
            failure,
            randomized_mean: total / (1u64 << ell) as f64,
        });
    }
    Ok(DerandomizedEncoder { ell, choices })
}
