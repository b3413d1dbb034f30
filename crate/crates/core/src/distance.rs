//! The erasure distance between codewords and the perfect-decoding radius.
//!
//! For an ordered pair `(c, c')` every position falls in one of nine blocks
//! according to the symbol pair `(c_j, c'_j)`:
//!
//! | block | 1 | 2 | 3 | 4 | 5 | 6 | 7 | 8 | 9 |
//! |-------|---|---|---|---|---|---|---|---|---|
//! | `c`   | 1 | 1 | 1 | s | s | s | 0 | 0 | 0 |
//! | `c'`  | 1 | s | 0 | 1 | s | 0 | 1 | s | 0 |
//!
//! (`s` is a soft zero, `0` a hard zero.) Only blocks 2, 3, 4 and 7 hold
//! positions that must change for the two codewords to collide, and
//! blocks 3 and 7 can only change on one side.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::bits::{BinaryWord, BitVec, Message};
use crate::error::{Error, Result};
use crate::gf2::{
    encode_faulty_unchecked, enumerate_codebook, enumerate_erasure_matrices, BitMatrix,
    ErasureMatrix, GeneratorMatrix, Limits, Symbol, TernaryCodeword,
};

/// A non-negative integer or infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Eta {
    Finite(u64),
    Infinite,
}

impl Eta {
    pub fn finite(self) -> Option<u64> {
        match self {
            Eta::Finite(v) => Some(v),
            Eta::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Eta::Infinite
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Finite(v) => write!(f, "{v}"),
            Eta::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Eta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Eta::Finite(v) => s.serialize_u64(*v),
            Eta::Infinite => s.serialize_str("inf"),
        }
    }
}

#[inline]
fn symbol_rank(s: Symbol) -> usize {
    match s {
        Symbol::One => 0,
        Symbol::Soft0 => 1,
        Symbol::Hard0 => 2,
    }
}

/// Block index (1..=9) of a symbol pair.
#[inline]
pub fn block_of(c: Symbol, c_prime: Symbol) -> usize {
    3 * symbol_rank(c) + symbol_rank(c_prime) + 1
}

/// Block sizes `w_1..w_9` for an ordered codeword pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct BlockProfile {
    w: [u64; 9],
    n: u64,
}

impl BlockProfile {
    /// Builds a profile from raw block sizes (used for synthetic profiles).
    pub fn from_counts(w: [u64; 9]) -> Self {
        Self {
            w,
            n: w.iter().sum(),
        }
    }

    /// Size of block `b`, `1 <= b <= 9`.
    #[inline]
    pub fn w(&self, b: usize) -> u64 {
        self.w[b - 1]
    }

    pub fn counts(&self) -> [u64; 9] {
        self.w
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `α_b = w_b / n`.
    pub fn alpha(&self, b: usize) -> f64 {
        self.w(b) as f64 / self.n as f64
    }

    pub fn alphas(&self) -> [f64; 9] {
        std::array::from_fn(|i| self.alpha(i + 1))
    }

    /// Profile of the reversed pair `(c', c)`.
    pub fn reversed(&self) -> Self {
        let w = &self.w;
        Self {
            w: [w[0], w[3], w[6], w[1], w[4], w[7], w[2], w[5], w[8]],
            n: self.n,
        }
    }

    /// Hamming distance between the effective binary words.
    pub fn hamming(&self) -> u64 {
        self.w(2) + self.w(3) + self.w(4) + self.w(7)
    }
}

pub fn block_profile(c: &TernaryCodeword, c_prime: &TernaryCodeword) -> Result<BlockProfile> {
    if c.len() != c_prime.len() {
        return Err(Error::Dimension {
            what: "codeword length",
            expected: c.len(),
            actual: c_prime.len(),
        });
    }
    let mut w = [0u64; 9];
    for (&a, &b) in c.symbols().iter().zip(c_prime.symbols()) {
        w[block_of(a, b) - 1] += 1;
    }
    Ok(BlockProfile::from_counts(w))
}

/// Fewest erasures that make `c` decode as `c'` under the minimum-distance
/// rule (ties included); `Infinite` when no pattern can do it.
pub fn eta0_directed(p: &BlockProfile) -> Eta {
    let (w2, w3, w4, w7) = (p.w(2), p.w(3), p.w(4), p.w(7));
    if w7 > w3 + w2 + w4 {
        return Eta::Infinite;
    }
    Eta::Finite(w3.max((w2 + w3 + w4 + w7).div_ceil(2)))
}

/// Fewest erasures, counted as `max{w(E1), w(E2)}`, that encode `c` and
/// `c'` to a common word.
pub fn eta0_undirected(p: &BlockProfile) -> u64 {
    let (w2, w3, w4, w7) = (p.w(2), p.w(3), p.w(4), p.w(7));
    if w3 > w7 + w2 + w4 {
        w3
    } else if w7 > w3 + w2 + w4 {
        w7
    } else {
        (w2 + w3 + w4 + w7).div_ceil(2)
    }
}

/// Perfect-decoding radius of a code.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Radius {
    /// Two messages share a codeword: no erasure budget is safe (`-1`).
    InherentlyAmbiguous,
    Finite(u64),
    Unbounded,
}

impl Radius {
    /// Integer form with `-1` for an inherently ambiguous code.
    pub fn as_i64(self) -> Option<i64> {
        match self {
            Radius::InherentlyAmbiguous => Some(-1),
            Radius::Finite(v) => Some(v as i64),
            Radius::Unbounded => None,
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::InherentlyAmbiguous => f.write_str("-1"),
            Radius::Finite(v) => write!(f, "{v}"),
            Radius::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str("inf"),
        }
    }
}

/// `η_max` together with the codeword pair that attains it.
#[derive(Clone, Debug)]
pub struct RadiusReport {
    pub radius: Radius,
    /// Message indices (lexicographic) of the closest pair.
    pub pair: Option<(usize, usize)>,
    pub min_eta0: Option<u64>,
}

/// `η_max = min_{c != c'} η0(c, c') - 1` over pairs of distinct messages.
pub fn eta_max(g: &GeneratorMatrix, limits: &Limits) -> Result<RadiusReport> {
    let book = enumerate_codebook(g, limits)?;
    Ok(eta_max_of_codebook(&book))
}

pub fn eta_max_of_codebook(book: &[TernaryCodeword]) -> RadiusReport {
    let best = closest_pair(book);
    match best {
        None => RadiusReport {
            radius: Radius::Unbounded,
            pair: None,
            min_eta0: None,
        },
        Some((eta, i, j)) => RadiusReport {
            radius: if eta == 0 {
                Radius::InherentlyAmbiguous
            } else {
                Radius::Finite(eta - 1)
            },
            pair: Some((i, j)),
            min_eta0: Some(eta),
        },
    }
}

fn pair_eta0(book: &[TernaryCodeword], i: usize, j: usize) -> u64 {
    let mut w = [0u64; 9];
    for (&a, &b) in book[i].symbols().iter().zip(book[j].symbols()) {
        w[block_of(a, b) - 1] += 1;
    }
    eta0_undirected(&BlockProfile::from_counts(w))
}

#[cfg(feature = "parallel")]
fn closest_pair(book: &[TernaryCodeword]) -> Option<(u64, usize, usize)> {
    use rayon::prelude::*;
    (0..book.len())
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..book.len())
                .map(|j| (pair_eta0(book, i, j), i, j))
                .min()
        })
        .min()
}

#[cfg(not(feature = "parallel"))]
fn closest_pair(book: &[TernaryCodeword]) -> Option<(u64, usize, usize)> {
    (0..book.len())
        .flat_map(|i| (i + 1..book.len()).map(move |j| (i, j)))
        .map(|(i, j)| (pair_eta0(book, i, j), i, j))
        .min()
}

/// Certificate that two distinct messages collide under bounded erasures:
/// `m1 (G + E1) = m2 (G + E2) = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityWitness {
    pub m1: Message,
    pub e1: ErasureMatrix,
    pub m2: Message,
    pub e2: ErasureMatrix,
    pub r: BinaryWord,
}

impl AmbiguityWitness {
    /// Number of erasures the witness needs: `max{w(E1), w(E2)}`.
    pub fn erasures(&self) -> usize {
        self.e1.weight().max(self.e2.weight())
    }
}

/// Exhaustive search for two messages `m1 != m2` and erasure patterns of
/// weight at most `eta` with `m1 (G + E1) = m2 (G + E2)`.
///
/// Patterns are visited lightest first and the search stops at the first
/// collision, so a returned witness uses the fewest possible erasures.
pub fn ambiguity_oracle(
    g: &GeneratorMatrix,
    eta: usize,
    limits: &Limits,
) -> Result<Option<AmbiguityWitness>> {
    limits.check_codebook(g.k())?;
    let messages: Vec<Message> = (0..1u64 << g.k())
        .map(|idx| BitVec::from_index(g.k(), idx))
        .collect();
    // first (message, pattern) seen for each reachable word
    let mut seen: HashMap<BinaryWord, (usize, ErasureMatrix)> = HashMap::new();
    for e in enumerate_erasure_matrices(g, eta, limits)? {
        for (mi, m) in messages.iter().enumerate() {
            let r = encode_faulty_unchecked(m, g, e.bits());
            match seen.get(&r) {
                Some((other, e_other)) if *other != mi => {
                    return Ok(Some(AmbiguityWitness {
                        m1: messages[*other].clone(),
                        e1: e_other.clone(),
                        m2: m.clone(),
                        e2: e.clone(),
                        r,
                    }));
                }
                Some(_) => {}
                None => {
                    seen.insert(r, (mi, e.clone()));
                }
            }
        }
    }
    Ok(None)
}

/// Largest `η` for which [`ambiguity_oracle`] finds no witness (`-1` when
/// two messages already collide without erasures).
pub fn ambiguity_threshold(g: &GeneratorMatrix, limits: &Limits) -> Result<i64> {
    // Erasing all of G maps every message to zero, so a witness always exists.
    let w = ambiguity_oracle(g, g.ones(), limits)?
        .expect("full erasure collapses every message to the zero word");
    Ok(w.erasures() as i64 - 1)
}

/// Explicit erasure patterns that confuse `c` and `c'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionWitness {
    pub e1: ErasureMatrix,
    pub e2: ErasureMatrix,
    pub r: BinaryWord,
}

/// Builds `E1`, `E2` with `m (G + E1) = m' (G + E2)` and
/// `max{w(E1), w(E2)} = η0(c, c')`.
///
/// Block 3 flips on `c` and block 7 on `c'`. Blocks 2 and 4 are split with
/// `Δη = η1 - η1'` taken as the rounded-up balance point clamped to
/// `[-w2, w4]`, which puts the odd erasure on the `E1` side.
pub fn confusion_witness(
    c: &TernaryCodeword,
    c_prime: &TernaryCodeword,
    g: &GeneratorMatrix,
) -> Result<ConfusionWitness> {
    let prof = block_profile(c, c_prime)?;
    if c.len() != g.n() {
        return Err(Error::Dimension {
            what: "codeword length",
            expected: g.n(),
            actual: c.len(),
        });
    }
    let mut blocks: [Vec<usize>; 9] = Default::default();
    for (j, (&a, &b)) in c.symbols().iter().zip(c_prime.symbols()).enumerate() {
        blocks[block_of(a, b) - 1].push(j);
    }
    let (w2, w3, w4, w7) = (
        prof.w(2) as i64,
        prof.w(3) as i64,
        prof.w(4) as i64,
        prof.w(7) as i64,
    );
    let balance = w7 - w3 + w4 - w2;
    let delta = (balance.div_euclid(2) + balance.rem_euclid(2)).clamp(-w2, w4);
    let (eta1, eta1p) = if delta >= 0 {
        (delta as usize, 0usize)
    } else {
        (0usize, (-delta) as usize)
    };

    let b2 = &blocks[1];
    let b4 = &blocks[3];
    let mut flips_c: Vec<usize> = blocks[2].clone();
    flips_c.extend_from_slice(&b4[..eta1]);
    flips_c.extend_from_slice(&b2[eta1p..]);
    let mut flips_cp: Vec<usize> = blocks[6].clone();
    flips_cp.extend_from_slice(&b2[..eta1p]);
    flips_cp.extend_from_slice(&b4[eta1..]);

    let e1 = erasures_for_flips(g, c.message(), &flips_c)?;
    let e2 = erasures_for_flips(g, c_prime.message(), &flips_cp)?;
    let r = encode_faulty_unchecked(c.message(), g, e1.bits());
    debug_assert_eq!(r, encode_faulty_unchecked(c_prime.message(), g, e2.bits()));
    Ok(ConfusionWitness { e1, e2, r })
}

/// One erasure per flipped column, in the first row that contributes to it.
fn erasures_for_flips(g: &GeneratorMatrix, m: &Message, cols: &[usize]) -> Result<ErasureMatrix> {
    let mut bits = BitMatrix::zeros(g.k(), g.n());
    for &j in cols {
        let i = m
            .iter_ones()
            .find(|&i| g.get(i, j))
            .ok_or_else(|| Error::domain(format!("column {j} cannot flip: its sum is zero")))?;
        bits.set(i, j, true);
    }
    ErasureMatrix::new(g, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::encode;

    fn g23() -> GeneratorMatrix {
        GeneratorMatrix::from_strs(&["101", "011"]).unwrap()
    }

    fn cw(g: &GeneratorMatrix, m: &str) -> TernaryCodeword {
        encode(&BitVec::parse(m).unwrap(), g).unwrap()
    }

    #[test]
    fn profile_examples() {
        let g = g23();
        let c = cw(&g, "10");
        let p = block_profile(&c, &c).unwrap();
        assert_eq!(p.counts(), [2, 0, 0, 0, 0, 0, 0, 0, 1]);

        let p = block_profile(&c, &cw(&g, "01")).unwrap();
        assert_eq!(p.counts(), [1, 0, 1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(p.reversed(), p);

        let zero = cw(&g, "00");
        let c11 = cw(&g, "11");
        let p = block_profile(&zero, &c11).unwrap();
        assert_eq!((p.w(7), p.w(8), p.w(9)), (2, 1, 0));
    }

    #[test]
    fn eta0_examples() {
        let g = g23();
        let (c10, c01, zero) = (cw(&g, "10"), cw(&g, "01"), cw(&g, "00"));
        let same = block_profile(&c10, &c10).unwrap();
        assert_eq!(eta0_directed(&same), Eta::Finite(0));
        assert_eq!(eta0_undirected(&same), 0);

        let p = block_profile(&zero, &c10).unwrap();
        assert_eq!(eta0_directed(&p), Eta::Infinite);
        assert_eq!(eta0_undirected(&p), 2);

        let p = block_profile(&c10, &c01).unwrap();
        assert_eq!(eta0_directed(&p), Eta::Finite(1));
        assert_eq!(eta0_undirected(&p), 1);
    }

    #[test]
    fn eta_max_examples() {
        let lim = Limits::default();
        assert_eq!(eta_max(&g23(), &lim).unwrap().radius, Radius::Finite(0));
        for n in 1..=6 {
            let row = "1".repeat(n);
            let g = GeneratorMatrix::from_strs(&[&row]).unwrap();
            assert_eq!(eta_max(&g, &lim).unwrap().radius, Radius::Finite(n as u64 - 1));
        }
        let dup = GeneratorMatrix::from_strs(&["110", "110"]).unwrap();
        assert_eq!(
            eta_max(&dup, &lim).unwrap().radius,
            Radius::InherentlyAmbiguous
        );
    }

    #[test]
    fn oracle_finds_single_erasure_confusion() {
        let g = g23();
        let lim = Limits::default();
        assert_eq!(ambiguity_oracle(&g, 0, &lim).unwrap(), None);
        let w = ambiguity_oracle(&g, 1, &lim).unwrap().unwrap();
        assert_eq!(w.erasures(), 1);
        assert_ne!(w.m1, w.m2);
        assert_eq!(encode_faulty_unchecked(&w.m1, &g, w.e1.bits()), w.r);
        assert_eq!(encode_faulty_unchecked(&w.m2, &g, w.e2.bits()), w.r);
        assert_eq!(ambiguity_threshold(&g, &lim).unwrap(), 0);
    }

    #[test]
    fn witness_for_zero_vs_weight_codeword() {
        let g = GeneratorMatrix::from_strs(&["1111"]).unwrap();
        let zero = cw(&g, "0");
        let ones = cw(&g, "1");
        let w = confusion_witness(&zero, &ones, &g).unwrap();
        assert_eq!(w.e1.weight(), 0);
        assert_eq!(w.e2.weight(), 4);
        assert!(w.r.is_zero());

        let c = cw(&g, "1");
        let w = confusion_witness(&c, &c, &g).unwrap();
        assert_eq!((w.e1.weight(), w.e2.weight()), (0, 0));
        assert_eq!(w.r, c.effective());
    }

    #[test]
    fn witness_matches_the_k2_example() {
        let g = g23();
        let (c10, c11) = (cw(&g, "10"), cw(&g, "11"));
        let w = confusion_witness(&c10, &c11, &g).unwrap();
        let eta = eta0_undirected(&block_profile(&c10, &c11).unwrap());
        assert_eq!(w.e1.weight().max(w.e2.weight()) as u64, eta);
        assert_eq!(eta, 1);
        assert_eq!(w.r.to_string(), "100");
    }
}
