//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors are fixed-length bit strings. Index 0 is the leftmost position:
//! lexicographic order on bit strings equals numeric order of
//! [`BitVector::from_uint`] values, and the text format writes index 0 as the
//! most significant bit of the first hex digit.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Fixed-length vector over GF(2).
///
/// Bit `i` is stored at bit `i % 64` of word `i / 64`; bits past `len` in the
/// last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            debug_assert!(b <= 1);
            if b == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Big-endian embedding: `value` bit `b` lands at index `len - 1 - b`, so
    /// numeric order of `value` equals lexicographic order of the vectors.
    pub fn from_uint(len: usize, value: u64) -> Self {
        assert!(len >= 64 || value < (1u64 << len), "value {value} does not fit in {len} bits");
        let mut v = BitVector::zeros(len);
        for b in 0..64.min(len) {
            if (value >> b) & 1 == 1 {
                v.set(len - 1 - b, true);
            }
        }
        v
    }

    pub fn to_uint(&self) -> u64 {
        assert!(self.len <= 64, "vector of length {} does not fit in u64", self.len);
        let mut value = 0u64;
        for b in 0..self.len {
            if self.get(self.len - 1 - b) {
                value |= 1 << b;
            }
        }
        value
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut words: Vec<u64> = (0..words_for(len)).map(|_| rng.gen()).collect();
        mask_tail(len, &mut words);
        BitVector { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Row vector times matrix: `self (1xr) * m (rxc) -> 1xc`.
    pub fn mul_mat(&self, m: &BitMatrix) -> Result<BitVector, Gf2Error> {
        if self.len != m.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "vector length {} vs matrix rows {}",
                self.len, m.rows
            )));
        }
        let mut acc = BitVector::zeros(m.cols);
        for j in self.ones() {
            acc.xor_assign(m.row(j));
        }
        Ok(acc)
    }

    /// Row vector times transposed matrix: `self (1xc) * m^T (cxr) -> 1xr`.
    pub fn mul_mat_transpose(&self, m: &BitMatrix) -> Result<BitVector, Gf2Error> {
        if self.len != m.cols {
            return Err(Gf2Error::DimensionMismatch(format!(
                "vector length {} vs matrix cols {}",
                self.len, m.cols
            )));
        }
        let mut acc = BitVector::zeros(m.rows);
        for i in 0..m.rows {
            if self.dot(m.row(i)) {
                acc.set(i, true);
            }
        }
        Ok(acc)
    }

    /// Hex string, index 0 as the most significant bit of the first digit;
    /// the last digit is zero-padded when `len % 4 != 0`.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for d in 0..digits {
            let mut nibble = 0u8;
            for b in 0..4 {
                let idx = 4 * d + b;
                if idx < self.len && self.get(idx) {
                    nibble |= 8 >> b;
                }
            }
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(len: usize, s: &str) -> Result<Self, Gf2Error> {
        let digits = len.div_ceil(4);
        if s.len() != digits {
            return Err(Gf2Error::Parse(format!(
                "expected {digits} hex digits for {len} bits, got {}",
                s.len()
            )));
        }
        let mut v = BitVector::zeros(len);
        for (d, ch) in s.chars().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Gf2Error::Parse(format!("invalid hex digit {ch:?}")))?
                as u8;
            for b in 0..4 {
                if nibble & (8 >> b) != 0 {
                    let idx = 4 * d + b;
                    if idx >= len {
                        return Err(Gf2Error::Parse(format!(
                            "padding bits must be zero in {s:?} for length {len}"
                        )));
                    }
                    v.set(idx, true);
                }
            }
        }
        Ok(v)
    }
}

fn mask_tail(len: usize, words: &mut [u64]) {
    if !len.is_multiple_of(64) {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << (len % 64)) - 1;
        }
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversing each word makes per-word numeric order agree with
        // index-0-first lexicographic order.
        assert_eq!(self.len, other.len, "comparing vectors of different lengths");
        for (a, b) in self.words.iter().zip(&other.words) {
            match a.reverse_bits().cmp(&b.reverse_bits()) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows, cols, data: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Self {
        let cols = rows.first().map_or(0, BitVector::len);
        assert!(rows.iter().all(|r| r.len() == cols), "rows must have equal length");
        BitMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMatrix { rows, cols, data: (0..rows).map(|_| BitVector::random(cols, rng)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn set_row(&mut self, i: usize, row: BitVector) {
        assert_eq!(row.len(), self.cols);
        self.data[i] = row;
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mat_mul(&self, rhs: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != rhs.rows {
            return Err(Gf2Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(rhs.cols);
                for j in r.ones() {
                    acc.xor_assign(rhs.row(j));
                }
                acc
            })
            .collect();
        Ok(BitMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    /// Reduced row echelon form with leftmost pivots eliminated above and
    /// below; deterministic for a given input.
    pub fn rref(&self) -> Rref {
        let mut m = self.data.clone();
        let mut transform = BitMatrix::identity(self.rows).data;
        let mut pivots = Vec::new();
        let mut cur = 0;
        for col in 0..self.cols {
            let Some(pivot_row) = (cur..self.rows).find(|&r| m[r].get(col)) else {
                continue;
            };
            m.swap(cur, pivot_row);
            transform.swap(cur, pivot_row);
            for r in 0..self.rows {
                if r != cur && m[r].get(col) {
                    let (src, dst) = (m[cur].clone(), &mut m[r]);
                    dst.xor_assign(&src);
                    let (src, dst) = (transform[cur].clone(), &mut transform[r]);
                    dst.xor_assign(&src);
                }
            }
            pivots.push(col);
            cur += 1;
            if cur == self.rows {
                break;
            }
        }
        Rref {
            matrix: BitMatrix { rows: self.rows, cols: self.cols, data: m },
            transform: BitMatrix { rows: self.rows, cols: self.rows, data: transform },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{ v : M v^T = 0 }`, one vector per free column, ascending by
    /// free column index. Empty when the matrix has full column rank.
    pub fn nullspace_basis(&self) -> Vec<BitVector> {
        let rref = self.rref();
        let mut basis = Vec::with_capacity(self.cols - rref.pivots.len());
        let mut next_pivot = 0;
        for free in 0..self.cols {
            if next_pivot < rref.pivots.len() && rref.pivots[next_pivot] == free {
                next_pivot += 1;
                continue;
            }
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (r, &pc) in rref.pivots.iter().enumerate() {
                if rref.matrix.get(r, free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Canonical right inverse `X` with `self * X = I`: solves each unit
    /// target with free variables fixed to zero. Requires full row rank.
    pub fn right_inverse(&self) -> Result<BitMatrix, Gf2Error> {
        let rref = self.rref();
        if rref.pivots.len() < self.rows {
            return Err(Gf2Error::RankDeficient);
        }
        let mut x = BitMatrix::zeros(self.cols, self.rows);
        for (r, &pc) in rref.pivots.iter().enumerate() {
            x.data[pc] = rref.transform.row(r).clone();
        }
        Ok(x)
    }

    /// Two-sided inverse of a square full-rank matrix.
    pub fn inverse(&self) -> Result<BitMatrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::DimensionMismatch(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        self.right_inverse()
    }

    /// Text form: header `gf2 <rows> <cols>`, one hex row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("gf2 {} {}\n", self.rows, self.cols);
        for r in &self.data {
            out.push_str(&r.to_hex());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Gf2Error> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Gf2Error::Parse("empty input".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "gf2" {
            return Err(Gf2Error::Parse(format!(
                "bad header {header:?}, want `gf2 <rows> <cols>`"
            )));
        }
        let rows: usize = parts[1]
            .parse()
            .map_err(|_| Gf2Error::Parse(format!("bad row count {:?}", parts[1])))?;
        let cols: usize = parts[2]
            .parse()
            .map_err(|_| Gf2Error::Parse(format!("bad col count {:?}", parts[2])))?;
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Gf2Error::Parse(format!("expected {rows} rows")))?
                .trim();
            data.push(BitVector::from_hex(cols, line)?);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Gf2Error::Parse("trailing content after matrix rows".into()));
        }
        Ok(BitMatrix { rows, cols, data })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Result of Gaussian elimination: `transform * original = matrix`, with
/// `pivots[r]` the pivot column of row `r`.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub transform: BitMatrix,
    pub pivots: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn bv(bits: &str) -> BitVector {
        BitVector::from_bits(
            &bits.chars().map(|c| c.to_digit(2).unwrap() as u8).collect::<Vec<_>>(),
        )
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(rows.iter().map(|r| bv(r)).collect())
    }

    /// Oracle: rank via the size of the row span, enumerating all 2^rows
    /// combinations.
    fn rank_oracle(m: &BitMatrix) -> usize {
        assert!(m.rows() <= 16);
        let mut span = HashSet::new();
        for mask in 0u32..(1 << m.rows()) {
            let mut acc = BitVector::zeros(m.cols());
            for i in 0..m.rows() {
                if (mask >> i) & 1 == 1 {
                    acc.xor_assign(m.row(i));
                }
            }
            span.insert(acc);
        }
        assert!(span.len().is_power_of_two());
        span.len().trailing_zeros() as usize
    }

    /// Oracle: nullspace as the set of all vectors killed by the matrix.
    fn nullspace_oracle(m: &BitMatrix) -> HashSet<BitVector> {
        assert!(m.cols() <= 16);
        let mut out = HashSet::new();
        for value in 0u64..(1 << m.cols()) {
            let v = BitVector::from_uint(m.cols(), value);
            if v.mul_mat_transpose(m).unwrap().is_zero() {
                out.insert(v);
            }
        }
        out
    }

    fn span_of(vectors: &[BitVector], len: usize) -> HashSet<BitVector> {
        let mut span = HashSet::new();
        for mask in 0u32..(1 << vectors.len()) {
            let mut acc = BitVector::zeros(len);
            for (i, v) in vectors.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    acc.xor_assign(v);
                }
            }
            span.insert(acc);
        }
        span
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        let m = mat(&["110", "011", "101"]);
        assert_eq!(rank_oracle(&m), 2);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_full_rank_is_empty() {
        assert!(BitMatrix::identity(3).nullspace_basis().is_empty());
    }

    #[test]
    fn nullspace_single_parity() {
        let m = mat(&["11"]);
        assert_eq!(m.nullspace_basis(), vec![bv("11")]);
    }

    #[test]
    fn nullspace_two_constraints() {
        let m = mat(&["110", "011"]);
        let basis = m.nullspace_basis();
        assert_eq!(basis, vec![bv("111")]);
        let oracle = nullspace_oracle(&m);
        assert_eq!(span_of(&basis, 3), oracle);
    }

    #[test]
    fn right_inverse_identity() {
        let i4 = BitMatrix::identity(4);
        assert_eq!(i4.right_inverse().unwrap(), i4);
    }

    #[test]
    fn right_inverse_canonical_free_vars_zero() {
        let g = mat(&["101", "011"]);
        let x = g.right_inverse().unwrap();
        assert_eq!(x, mat(&["10", "01", "00"]));
        assert_eq!(g.mat_mul(&x).unwrap(), BitMatrix::identity(2));
    }

    #[test]
    fn right_inverse_rank_deficient() {
        let m = mat(&["110", "110"]);
        assert_eq!(m.right_inverse(), Err(Gf2Error::RankDeficient));
    }

    #[test]
    fn mat_mul_identity_and_mismatch() {
        let m = mat(&["1011", "0110", "1100"]);
        assert_eq!(BitMatrix::identity(3).mat_mul(&m).unwrap(), m);
        assert!(matches!(m.mat_mul(&BitMatrix::identity(3)), Err(Gf2Error::DimensionMismatch(_))));
        assert!(matches!(bv("1011").mul_mat(&m), Err(Gf2Error::DimensionMismatch(_))));
        assert!(matches!(bv("101").mul_mat_transpose(&m), Err(Gf2Error::DimensionMismatch(_))));
    }

    #[test]
    fn vec_mat_products() {
        let h = mat(&["1111", "0011"]);
        let y = bv("1000");
        assert_eq!(y.mul_mat_transpose(&h).unwrap(), bv("10"));
        assert_eq!(bv("10").mul_mat(&h).unwrap(), bv("1111"));
        let zero = BitVector::zeros(4);
        assert_eq!(zero.mul_mat_transpose(&h).unwrap(), bv("00"));
    }

    #[test]
    fn hex_msb_first_convention() {
        assert_eq!(bv("1000").to_hex(), "8");
        assert_eq!(bv("0001").to_hex(), "1");
        assert_eq!(bv("10001").to_hex(), "88");
        assert_eq!(BitVector::from_hex(4, "8").unwrap(), bv("1000"));
        assert_eq!(BitVector::from_hex(5, "88").unwrap(), bv("10001"));
        // Padding bits beyond the declared length must be zero.
        assert!(matches!(BitVector::from_hex(5, "81"), Err(Gf2Error::Parse(_))));
        assert!(matches!(BitVector::from_hex(4, "88"), Err(Gf2Error::Parse(_))));
        assert!(matches!(BitVector::from_hex(4, "g"), Err(Gf2Error::Parse(_))));
    }

    #[test]
    fn uint_round_trip_and_order() {
        for value in 0..32 {
            let v = BitVector::from_uint(5, value);
            assert_eq!(v.to_uint(), value);
        }
        assert_eq!(BitVector::from_uint(5, 1), bv("00001"));
        assert_eq!(BitVector::from_uint(5, 16), bv("10000"));
        // Lexicographic order equals numeric order.
        for a in 0..32 {
            for b in 0..32 {
                assert_eq!(BitVector::from_uint(5, a).cmp(&BitVector::from_uint(5, b)), a.cmp(&b));
            }
        }
    }

    #[test]
    fn matrix_text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (rows, cols) in [(1, 1), (3, 7), (4, 64), (5, 65), (2, 130)] {
            let m = BitMatrix::random(rows, cols, &mut rng);
            let text = m.to_text();
            assert_eq!(BitMatrix::from_text(&text).unwrap(), m);
        }
        assert!(matches!(BitMatrix::from_text("nope 1 1\n0\n"), Err(Gf2Error::Parse(_))));
        assert!(matches!(BitMatrix::from_text("gf2 2 4\nf\n"), Err(Gf2Error::Parse(_))));
    }

    #[test]
    fn transpose_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = BitMatrix::random(5, 9, &mut rng);
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn square_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        while found < 5 {
            let m = BitMatrix::random(8, 8, &mut rng);
            if m.rank() == 8 {
                let inv = m.inverse().unwrap();
                assert_eq!(m.mat_mul(&inv).unwrap(), BitMatrix::identity(8));
                assert_eq!(inv.mat_mul(&m).unwrap(), BitMatrix::identity(8));
                found += 1;
            }
        }
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(0u8..2, c), r).prop_map(|rows| {
                BitMatrix::from_rows(rows.iter().map(|b| BitVector::from_bits(b)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn prop_rank_matches_oracle(m in arb_matrix(6, 8)) {
            prop_assert_eq!(m.rank(), rank_oracle(&m));
        }

        #[test]
        fn prop_nullspace_spans_kernel(m in arb_matrix(6, 8)) {
            let basis = m.nullspace_basis();
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            for v in &basis {
                prop_assert!(v.mul_mat_transpose(&m).unwrap().is_zero());
            }
            if !basis.is_empty() {
                let bm = BitMatrix::from_rows(basis.clone());
                prop_assert_eq!(bm.rank(), basis.len());
            }
            prop_assert_eq!(span_of(&basis, m.cols()), nullspace_oracle(&m));
        }

        #[test]
        fn prop_rref_transform_is_recorded(m in arb_matrix(6, 8)) {
            let rref = m.rref();
            prop_assert_eq!(rref.transform.mat_mul(&m).unwrap(), rref.matrix.clone());
            prop_assert_eq!(rref.transform.rank(), m.rows());
            // Pivot columns hold unit vectors after full reduction.
            for (r, &pc) in rref.pivots.iter().enumerate() {
                for i in 0..m.rows() {
                    prop_assert_eq!(rref.matrix.get(i, pc), i == r);
                }
            }
        }

        #[test]
        fn prop_right_inverse(m in arb_matrix(5, 10)) {
            match m.right_inverse() {
                Ok(x) => {
                    prop_assert_eq!(m.rank(), m.rows());
                    prop_assert_eq!(m.mat_mul(&x).unwrap(), BitMatrix::identity(m.rows()));
                }
                Err(Gf2Error::RankDeficient) => prop_assert!(m.rank() < m.rows()),
                Err(e) => return Err(TestCaseError::fail(format!("unexpected {e}"))),
            }
        }

        #[test]
        fn prop_dot_is_bilinear(a in proptest::collection::vec(0u8..2, 12),
                                b in proptest::collection::vec(0u8..2, 12),
                                c in proptest::collection::vec(0u8..2, 12)) {
            let (a, b, c) = (BitVector::from_bits(&a), BitVector::from_bits(&b), BitVector::from_bits(&c));
            prop_assert_eq!(a.xor(&b).dot(&c), a.dot(&c) ^ b.dot(&c));
        }

        #[test]
        fn prop_vec_mat_agrees_with_transpose(m in arb_matrix(6, 9), bits in proptest::collection::vec(0u8..2, 6)) {
            let x = BitVector::from_bits(&bits[..m.rows()]);
            prop_assert_eq!(x.mul_mat(&m).unwrap(), x.mul_mat_transpose(&m.transpose()).unwrap());
        }

        #[test]
        fn prop_hex_round_trip(bits in proptest::collection::vec(0u8..2, 1..130)) {
            let v = BitVector::from_bits(&bits);
            prop_assert_eq!(BitVector::from_hex(v.len(), &v.to_hex()).unwrap(), v);
        }
    }
}
