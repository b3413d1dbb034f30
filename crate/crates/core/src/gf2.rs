//! Generator matrices, erasure matrices and ternary encoding.
//!
//! A codeword is computed from integer column sums `Σ m_i G_ij`. A zero
//! column sum gives a *hard* zero that no erasure can ever flip; an even
//! positive sum gives a *soft* zero that flips when an odd number of the
//! contributing ones are erased.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{BinaryWord, BitVec, Message};
use crate::error::{Error, Result};

/// Caps on exhaustive enumeration. Operations that would exceed them fail
/// with [`Error::Capacity`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `k` for which the full codebook (`2^k` words) is enumerated.
    pub max_message_bits: usize,
    /// Largest number of ones in `G` for which erasure patterns are enumerated.
    pub max_erasure_ones: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_message_bits: 20,
            max_erasure_ones: 24,
        }
    }
}

impl Limits {
    pub fn check_codebook(&self, k: usize) -> Result<()> {
        if k > self.max_message_bits {
            return Err(Error::Capacity {
                what: "message length k",
                limit: self.max_message_bits,
                actual: k,
            });
        }
        Ok(())
    }

    pub fn check_erasures(&self, ones: usize) -> Result<()> {
        if ones > self.max_erasure_ones {
            return Err(Error::Capacity {
                what: "number of ones in G",
                limit: self.max_erasure_ones,
                actual: ones,
            });
        }
        Ok(())
    }
}

/// Dense row-major binary matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension {
                what: "row length",
                expected: cols,
                actual: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitVec::count_ones).sum()
    }

    /// `m · self` over GF(2).
    pub fn mul_left(&self, m: &Message) -> Result<BinaryWord> {
        check_len("message length", self.nrows(), m.len())?;
        let mut out = BitVec::zeros(self.cols);
        for i in m.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        Ok(out)
    }

    /// Positions `(i, j)` of all ones, row-major.
    pub fn ones_positions(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter_ones().map(move |j| (i, j)))
            .collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.to_string()).collect()
    }
}

fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Dimension {
            what,
            expected,
            actual,
        });
    }
    Ok(())
}

/// A `k × n` generator matrix with `1 <= k <= n` and cached column degrees.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorMatrix {
    bits: BitMatrix,
    degrees: Vec<u32>,
}

impl GeneratorMatrix {
    pub fn new(bits: BitMatrix) -> Result<Self> {
        let (k, n) = (bits.nrows(), bits.ncols());
        if k == 0 || k > n {
            return Err(Error::Shape { k, n });
        }
        let mut degrees = vec![0u32; n];
        for row in bits.rows() {
            for j in row.iter_ones() {
                degrees[j] += 1;
            }
        }
        Ok(Self { bits, degrees })
    }

    /// Builds a matrix from rows written as `"0110"` strings.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(line, r)| {
                BitVec::parse(r).map_err(|col| Error::Parse {
                    line: line + 1,
                    col: col + 1,
                    msg: "expected '0' or '1'".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(BitMatrix::from_rows(parsed, n)?)
    }

    /// Random matrix with each entry set independently with probability
    /// `density`.
    pub fn random<R: Rng + ?Sized>(k: usize, n: usize, density: f64, rng: &mut R) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::domain(format!("density {density} not in [0, 1]")));
        }
        let mut bits = BitMatrix::zeros(k, n);
        for i in 0..k {
            for j in 0..n {
                if rng.gen_bool(density) {
                    bits.set(i, j, true);
                }
            }
        }
        Self::new(bits)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.bits.nrows()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.bits.ncols()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        self.bits.row(i)
    }

    pub fn ones(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).sum()
    }

    /// `d_j`: number of ones in column `j`.
    pub fn column_degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `d*`: the largest column degree.
    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `d_j^(m)`: ones of column `j` in rows selected by `m`.
    pub fn relative_degrees(&self, m: &Message) -> Result<Vec<u32>> {
        check_len("message length", self.k(), m.len())?;
        let mut sums = vec![0u32; self.n()];
        for i in m.iter_ones() {
            for j in self.bits.row(i).iter_ones() {
                sums[j] += 1;
            }
        }
        Ok(sums)
    }
}

/// Ternary codeword symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Symbol {
    /// Column sum zero: can never flip.
    Hard0,
    /// Even positive column sum: currently 0, may flip to 1.
    Soft0,
    /// Odd column sum.
    One,
}

impl Symbol {
    pub fn from_sum(sum: u32) -> Self {
        match sum {
            0 => Symbol::Hard0,
            s if s % 2 == 0 => Symbol::Soft0,
            _ => Symbol::One,
        }
    }

    /// Value of the bit actually produced by a fault-free encoder.
    #[inline]
    pub fn bit(self) -> bool {
        self == Symbol::One
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Hard0 => '0',
            Symbol::Soft0 => 's',
            Symbol::One => '1',
        }
    }
}

/// A codeword over `{hard 0, soft 0, 1}` together with the integer column
/// sums and the message that produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryCodeword {
    message: Message,
    sums: Vec<u32>,
    symbols: Vec<Symbol>,
}

impl TernaryCodeword {
    pub fn message(&self) -> &Message {
        &self.message
    }

    /// Integer column sums, i.e. the relative degrees `d_j^(m)`.
    pub fn sums(&self) -> &[u32] {
        &self.sums
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The binary word `mG` (soft zeros read as 0).
    pub fn effective(&self) -> BinaryWord {
        BitVec::from_bools(self.symbols.iter().map(|s| s.bit()))
    }

    /// Compact rendering: `1`, `s` (soft zero) and `0` (hard zero).
    pub fn render(&self) -> String {
        self.symbols.iter().map(|s| s.as_char()).collect()
    }
}

/// Encodes `m` with `G`, keeping the hard/soft zero distinction.
pub fn encode(m: &Message, g: &GeneratorMatrix) -> Result<TernaryCodeword> {
    let sums = g.relative_degrees(m)?;
    let symbols = sums.iter().map(|&s| Symbol::from_sum(s)).collect();
    Ok(TernaryCodeword {
        message: m.clone(),
        sums,
        symbols,
    })
}

/// An erasure pattern `E ∈ 2^G`: ones only where `G` has ones.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ErasureMatrix {
    bits: BitMatrix,
    weight: usize,
}

impl ErasureMatrix {
    pub fn zero(g: &GeneratorMatrix) -> Self {
        Self {
            bits: BitMatrix::zeros(g.k(), g.n()),
            weight: 0,
        }
    }

    /// Wraps `bits`, checking shape and support containment against `g`.
    pub fn new(g: &GeneratorMatrix, bits: BitMatrix) -> Result<Self> {
        check_len("erasure rows", g.k(), bits.nrows())?;
        check_len("erasure columns", g.n(), bits.ncols())?;
        check_support(g, &bits)?;
        let weight = bits.count_ones();
        Ok(Self { bits, weight })
    }

    pub fn from_positions(g: &GeneratorMatrix, positions: &[(usize, usize)]) -> Result<Self> {
        let mut bits = BitMatrix::zeros(g.k(), g.n());
        for &(i, j) in positions {
            if i >= g.k() || j >= g.n() {
                return Err(Error::domain(format!("erasure position ({i}, {j}) out of range")));
            }
            bits.set(i, j, true);
        }
        Self::new(g, bits)
    }

    /// Erase every one of `G`.
    pub fn full(g: &GeneratorMatrix) -> Self {
        Self {
            bits: g.bits().clone(),
            weight: g.ones(),
        }
    }

    pub(crate) fn from_trusted(bits: BitMatrix) -> Self {
        let weight = bits.count_ones();
        Self { bits, weight }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn positions(&self) -> Vec<(usize, usize)> {
        self.bits.ones_positions()
    }
}

fn check_support(g: &GeneratorMatrix, e: &BitMatrix) -> Result<()> {
    for (i, (er, gr)) in e.rows().iter().zip(g.bits().rows()).enumerate() {
        if let Some(j) = er.first_outside(gr) {
            return Err(Error::SupportViolation { row: i, col: j });
        }
    }
    Ok(())
}

/// `m (G + E)` over GF(2): the word emitted by an encoder with erased edges.
pub fn encode_faulty(m: &Message, g: &GeneratorMatrix, e: &ErasureMatrix) -> Result<BinaryWord> {
    check_len("erasure rows", g.k(), e.bits.nrows())?;
    check_len("erasure columns", g.n(), e.bits.ncols())?;
    check_support(g, &e.bits)?;
    check_len("message length", g.k(), m.len())?;
    Ok(encode_faulty_unchecked(m, g, e.bits()))
}

/// `m (G ⊕ F)` for an arbitrary fault matrix `F` (no support constraint).
pub fn encode_with_faults(m: &Message, g: &GeneratorMatrix, faults: &BitMatrix) -> Result<BinaryWord> {
    check_len("fault rows", g.k(), faults.nrows())?;
    check_len("fault columns", g.n(), faults.ncols())?;
    check_len("message length", g.k(), m.len())?;
    Ok(encode_faulty_unchecked(m, g, faults))
}

pub(crate) fn encode_faulty_unchecked(m: &Message, g: &GeneratorMatrix, faults: &BitMatrix) -> BinaryWord {
    let mut out = BitVec::zeros(g.n());
    for i in m.iter_ones() {
        out.xor_assign(g.row(i));
        out.xor_assign(faults.row(i));
    }
    out
}

/// All `2^k` codewords in lexicographic message order.
pub fn enumerate_codebook(g: &GeneratorMatrix, limits: &Limits) -> Result<Vec<TernaryCodeword>> {
    limits.check_codebook(g.k())?;
    (0..1u64 << g.k())
        .map(|idx| encode(&BitVec::from_index(g.k(), idx), g))
        .collect()
}

/// Every `E ∈ 2^G` of weight at most `max_weight`, lightest first; within
/// one weight, erased positions follow row-major lexicographic order.
pub fn enumerate_erasure_matrices(
    g: &GeneratorMatrix,
    max_weight: usize,
    limits: &Limits,
) -> Result<ErasureIter> {
    limits.check_erasures(g.ones())?;
    let positions = g.bits().ones_positions();
    let max_weight = max_weight.min(positions.len());
    Ok(ErasureIter {
        k: g.k(),
        n: g.n(),
        positions,
        max_weight,
        current: Some(Vec::new()),
    })
}

/// Iterator returned by [`enumerate_erasure_matrices`].
pub struct ErasureIter {
    k: usize,
    n: usize,
    positions: Vec<(usize, usize)>,
    max_weight: usize,
    current: Option<Vec<usize>>,
}

impl ErasureIter {
    fn advance(&mut self) {
        let t = self.positions.len();
        let Some(comb) = self.current.as_mut() else {
            return;
        };
        let w = comb.len();
        // next combination of the same size
        let mut i = w;
        while i > 0 {
            i -= 1;
            if comb[i] < t - w + i {
                comb[i] += 1;
                for j in i + 1..w {
                    comb[j] = comb[j - 1] + 1;
                }
                return;
            }
        }
        if w < self.max_weight {
            *comb = (0..w + 1).collect();
        } else {
            self.current = None;
        }
    }
}

impl Iterator for ErasureIter {
    type Item = ErasureMatrix;

    fn next(&mut self) -> Option<ErasureMatrix> {
        let comb = self.current.as_ref()?;
        let mut bits = BitMatrix::zeros(self.k, self.n);
        for &p in comb {
            let (i, j) = self.positions[p];
            bits.set(i, j, true);
        }
        self.advance();
        Some(ErasureMatrix::from_trusted(bits))
    }
}
