//! Dense matrices used throughout the crate.
//!
//! [`BitMatrix`] packs rows into 64-bit words with zeroed padding so that
//! Hamming distances reduce to `popcount(a ^ b)` over whole words and
//! equality is plain word equality. [`ScalarMatrix`] stores extended reals
//! (`f64` with `+inf`) and never holds NaN. [`WitnessMatrix`] stores an
//! optional index per entry.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Borrowed view of one packed bit row.
#[derive(Clone, Copy)]
pub struct BitRow<'a> {
    words: &'a [u64],
    len: usize,
}

impl<'a> BitRow<'a> {
    pub fn new(words: &'a [u64], len: usize) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        BitRow { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &'a [u64] {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + 'a {
        set_bits(self.words.iter().copied())
    }
}

impl fmt::Debug for BitRow<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl PartialEq for BitRow<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

/// Iterates the indices of set bits in a word stream.
fn set_bits(words: impl Iterator<Item = u64>) -> impl Iterator<Item = usize> {
    words.enumerate().flat_map(|(wi, mut w)| {
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * WORD_BITS + tz)
        })
    })
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: BitRow<'_>, b: BitRow<'_>) -> Result<usize> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    Ok(hamming_words(a.words, b.words))
}

#[inline]
pub(crate) fn hamming_words(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Splits the symmetric difference of two rows by side.
///
/// Returns `(only_a, only_b)`: positions set in `a` but not `b`, and
/// positions set in `b` but not `a`, both ascending.
pub fn diff_positions(a: BitRow<'_>, b: BitRow<'_>) -> Result<(Vec<usize>, Vec<usize>)> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    let only_a = set_bits(a.words.iter().zip(b.words).map(|(x, y)| x & !y)).collect();
    let only_b = set_bits(a.words.iter().zip(b.words).map(|(x, y)| !x & y)).collect();
    Ok((only_a, only_b))
}

/// Bit-packed row-major Boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Builds a matrix from rows of `'0'`/`'1'` characters.
    ///
    /// Panics on ragged input or other characters; intended for literals.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged bit matrix literal");
            for (j, ch) in r.bytes().enumerate() {
                match ch {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    _ => panic!("invalid bit character {:?}", ch as char),
                }
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        (self.bits[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        let w = &mut self.bits[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> BitRow<'_> {
        BitRow {
            words: &self.bits[r * self.stride..(r + 1) * self.stride],
            len: self.cols,
        }
    }

    pub fn row_distance(&self, a: usize, b: usize) -> usize {
        hamming_words(self.row(a).words, self.row(b).words)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.bits[c * t.stride + r / WORD_BITS] |= 1u64 << (r % WORD_BITS);
            }
        }
        t
    }

    /// Entrywise OR.
    pub fn union(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(
                "union operands",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let mut out = self.clone();
        for (w, o) in out.bits.iter_mut().zip(&other.bits) {
            *w |= o;
        }
        Ok(out)
    }

    /// Stable 64-bit digest of shape and contents.
    pub fn fingerprint(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64 ^ (self.rows as u64).rotate_left(32) ^ self.cols as u64;
        for &w in &self.bits {
            h = (h ^ w).wrapping_mul(0x0000_0100_0000_01b3);
            h ^= h >> 29;
        }
        h
    }

    /// True when every padding bit past `cols` is zero.
    pub fn padding_is_clean(&self) -> bool {
        let rem = self.cols % WORD_BITS;
        if rem == 0 || self.stride == 0 {
            return true;
        }
        let mask = !0u64 << rem;
        (0..self.rows).all(|r| self.bits[r * self.stride + self.stride - 1] & mask == 0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Dense matrix over the reals extended with `+inf`. NaN is rejected.
#[derive(Clone, PartialEq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl ScalarMatrix {
    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        assert!(!value.is_nan(), "NaN fill value");
        ScalarMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn infinite(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, f64::INFINITY)
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("scalar matrix data", rows * cols, data.len()));
        }
        if let Some(pos) = data.iter().position(|v| v.is_nan()) {
            return Err(Error::NotANumber {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(ScalarMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::dims("scalar matrix row", c, bad.len()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: f64) {
        debug_assert!(!value.is_nan());
        self.data[r * self.cols + c] = value;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        ScalarMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Bitwise equality, treating `+inf == +inf`.
    pub fn bit_eq(&self, other: &ScalarMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    /// First entry where the two matrices disagree beyond relative tolerance
    /// `rel` (absolute for magnitudes below 1), or where the `+inf` patterns
    /// differ.
    pub fn first_mismatch(&self, other: &ScalarMatrix, rel: f64) -> Option<(usize, usize, f64, f64)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((usize::MAX, usize::MAX, f64::NAN, f64::NAN));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let (a, b) = (self.get(r, c), other.get(r, c));
                if !approx_eq(a, b, rel) {
                    return Some((r, c, a, b));
                }
            }
        }
        None
    }
}

/// Relative comparison on extended reals: infinities must match exactly.
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScalarMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Per-entry optional witness index.
#[derive(Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl WitnessMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        WitnessMatrix {
            rows,
            cols,
            data: vec![ABSENT; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Option<usize> {
        match self.data[r * self.cols + c] {
            ABSENT => None,
            k => Some(k as usize),
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, k: Option<usize>) {
        self.data[r * self.cols + c] = match k {
            Some(k) => u32::try_from(k).expect("witness index exceeds u32"),
            None => ABSENT,
        };
    }

    pub(crate) fn raw_row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn present_count(&self) -> usize {
        self.data.iter().filter(|&&k| k != ABSENT).count()
    }

    pub fn transpose(&self) -> WitnessMatrix {
        let mut t = WitnessMatrix::empty(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }
}

impl fmt::Debug for WitnessMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "WitnessMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<i64> = (0..self.cols)
                .map(|c| self.get(r, c).map_or(-1, |k| k as i64))
                .collect();
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(s: &str) -> BitMatrix {
        BitMatrix::from_strs(&[s])
    }

    #[test]
    fn hamming_examples() {
        let (a, b) = (row("0110"), row("0110"));
        assert_eq!(hamming_distance(a.row(0), b.row(0)).unwrap(), 0);
        let (a, b) = (row("0000"), row("1111"));
        assert_eq!(hamming_distance(a.row(0), b.row(0)).unwrap(), 4);
        let (a, b) = (row("0110"), row("1100"));
        assert_eq!(hamming_distance(a.row(0), b.row(0)).unwrap(), 2);
    }

    #[test]
    fn hamming_rejects_length_mismatch() {
        let (a, b) = (row("011"), row("0110"));
        assert_eq!(
            hamming_distance(a.row(0), b.row(0)),
            Err(Error::LengthMismatch { left: 3, right: 4 })
        );
        assert!(diff_positions(a.row(0), b.row(0)).is_err());
    }

    #[test]
    fn diff_examples() {
        let (a, b) = (row("0110"), row("0110"));
        assert_eq!(diff_positions(a.row(0), b.row(0)).unwrap(), (vec![], vec![]));
        let (a, b) = (row("1100"), row("0110"));
        assert_eq!(diff_positions(a.row(0), b.row(0)).unwrap(), (vec![0], vec![2]));
        let (a, b) = (row("1111"), row("0000"));
        assert_eq!(
            diff_positions(a.row(0), b.row(0)).unwrap(),
            (vec![0, 1, 2, 3], vec![])
        );
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(BitMatrix::identity(3).transpose(), BitMatrix::identity(3));
        let t = row("101").transpose();
        assert_eq!((t.rows(), t.cols()), (3, 1));
        assert!(t.get(0, 0) && !t.get(1, 0) && t.get(2, 0));
    }

    #[test]
    fn padding_stays_zero() {
        let m = BitMatrix::ones(5, 70);
        assert!(m.padding_is_clean());
        assert!(m.transpose().padding_is_clean());
        assert_eq!(m.count_ones(), 350);
    }

    #[test]
    fn scalar_rejects_nan() {
        let err = ScalarMatrix::from_rows(vec![vec![1.0, f64::NAN]]).unwrap_err();
        assert_eq!(err, Error::NotANumber { row: 0, col: 1 });
    }

    #[test]
    fn witness_roundtrip_absent() {
        let mut w = WitnessMatrix::empty(2, 2);
        w.set(0, 1, Some(7));
        assert_eq!(w.get(0, 1), Some(7));
        assert_eq!(w.get(1, 0), None);
        assert_eq!(w.transpose().get(1, 0), Some(7));
    }

    fn bit_matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(any::<bool>(), rows * cols)
            .prop_map(move |v| BitMatrix::from_fn(rows, cols, |i, j| v[i * cols + j]))
    }

    proptest! {
        #[test]
        fn double_transpose_is_identity(m in bit_matrix(64, 64)) {
            prop_assert_eq!(m.transpose().transpose(), m);
        }

        #[test]
        fn popcount_matches_naive(a in proptest::collection::vec(any::<bool>(), 1..200), seed in any::<u64>()) {
            let n = a.len();
            let b: Vec<bool> = (0..n).map(|i| (seed >> (i % 64)) & 1 == 1 || a[i] ^ (i % 3 == 0)).collect();
            let ma = BitMatrix::from_fn(1, n, |_, j| a[j]);
            let mb = BitMatrix::from_fn(1, n, |_, j| b[j]);
            let naive = a.iter().zip(&b).filter(|(x, y)| x != y).count();
            prop_assert_eq!(hamming_distance(ma.row(0), mb.row(0)).unwrap(), naive);
        }

        #[test]
        fn diff_sizes_sum_to_distance(m in bit_matrix(12, 97)) {
            for a in 0..m.rows() {
                for b in 0..m.rows() {
                    let (x, y) = diff_positions(m.row(a), m.row(b)).unwrap();
                    prop_assert_eq!(x.len() + y.len(), m.row_distance(a, b));
                    prop_assert!(x.iter().all(|p| !y.contains(p)));
                }
            }
        }

        #[test]
        fn triangle_inequality(m in bit_matrix(8, 40)) {
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        prop_assert!(m.row_distance(a, c) <= m.row_distance(a, b) + m.row_distance(b, c));
                    }
                }
            }
        }
    }
}
