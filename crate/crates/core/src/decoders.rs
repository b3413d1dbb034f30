//! Decoders for words produced by a faulty encoder.
//!
//! Both decoders measure the asymmetric distance `δ(c → r)`: a hard zero of
//! `c` that reads as 1 in `r` makes `r` unreachable from `c`; otherwise each
//! differing position costs one erasure.

use rand::Rng;

use crate::bits::{BinaryWord, BitVec, Message};
use crate::distance::Eta;
use crate::error::{Error, Result};
use crate::gf2::{encode, enumerate_codebook, GeneratorMatrix, Limits, Symbol, TernaryCodeword};

/// `δ(c → r)`.
pub fn delta(c: &TernaryCodeword, r: &BinaryWord) -> Result<Eta> {
    if c.len() != r.len() {
        return Err(Error::Dimension {
            what: "word length",
            expected: c.len(),
            actual: r.len(),
        });
    }
    let mut d = 0u64;
    for (j, &s) in c.symbols().iter().enumerate() {
        match (s, r.get(j)) {
            (Symbol::Hard0, true) => return Ok(Eta::Infinite),
            (Symbol::One, false) | (Symbol::Soft0, true) => d += 1,
            _ => {}
        }
    }
    Ok(Eta::Finite(d))
}

/// Decoder verdict; indices refer to positions in the [`Codebook`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Decoded(usize),
    /// Several codewords share the minimum distance.
    Tie(Vec<usize>),
    /// No codeword can produce the word.
    Unreachable,
    /// More than one codeword fits within the erasure budget.
    Ambiguous(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    /// Smallest `δ` over the codebook.
    pub distance: Eta,
}

impl DecodeResult {
    pub fn decoded(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Decoded(i) => Some(i),
            _ => None,
        }
    }

    /// Codewords the decoder points at: the decoded one, or every member
    /// of a tie / ambiguity set.
    pub fn candidates(&self) -> &[usize] {
        match &self.outcome {
            Outcome::Decoded(i) => std::slice::from_ref(i),
            Outcome::Tie(s) | Outcome::Ambiguous(s) => s,
            Outcome::Unreachable => &[],
        }
    }
}

/// A fully enumerated codebook with per-codeword masks for fast `δ`.
#[derive(Clone, Debug)]
pub struct Codebook {
    words: Vec<TernaryCodeword>,
    ones: Vec<BitVec>,
    soft: Vec<BitVec>,
    hard: Vec<BitVec>,
}

impl Codebook {
    pub fn new(g: &GeneratorMatrix, limits: &Limits) -> Result<Self> {
        Ok(Self::from_words(enumerate_codebook(g, limits)?))
    }

    pub fn from_words(words: Vec<TernaryCodeword>) -> Self {
        let mask = |w: &TernaryCodeword, s: Symbol| BitVec::from_bools(w.symbols().iter().map(|&x| x == s));
        let ones = words.iter().map(|w| mask(w, Symbol::One)).collect();
        let soft = words.iter().map(|w| mask(w, Symbol::Soft0)).collect();
        let hard = words.iter().map(|w| mask(w, Symbol::Hard0)).collect();
        Self {
            words,
            ones,
            soft,
            hard,
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn n(&self) -> usize {
        self.words.first().map_or(0, TernaryCodeword::len)
    }

    pub fn words(&self) -> &[TernaryCodeword] {
        &self.words
    }

    pub fn get(&self, i: usize) -> &TernaryCodeword {
        &self.words[i]
    }

    /// `δ(c_i → r)`; `r` must have length `n`.
    #[inline]
    pub fn delta(&self, i: usize, r: &BinaryWord) -> Eta {
        let mut d = 0u64;
        for (((&wr, &o), &s), &h) in r
            .words()
            .iter()
            .zip(self.ones[i].words())
            .zip(self.soft[i].words())
            .zip(self.hard[i].words())
        {
            if wr & h != 0 {
                return Eta::Infinite;
            }
            d += ((o & !wr).count_ones() + (s & wr).count_ones()) as u64;
        }
        Eta::Finite(d)
    }

    fn check(&self, r: &BinaryWord) -> Result<()> {
        if r.len() != self.n() {
            return Err(Error::Dimension {
                what: "word length",
                expected: self.n(),
                actual: r.len(),
            });
        }
        Ok(())
    }

    /// Minimum-distance decoding: the codeword minimising `δ(c → r)`.
    /// Ties are reported, not broken.
    pub fn md_decode(&self, r: &BinaryWord) -> Result<DecodeResult> {
        self.check(r)?;
        let mut best = Eta::Infinite;
        let mut argmin: Vec<usize> = Vec::new();
        for i in 0..self.len() {
            let d = self.delta(i, r);
            if d < best {
                best = d;
                argmin.clear();
                argmin.push(i);
            } else if d == best && !d.is_infinite() {
                argmin.push(i);
            }
        }
        let outcome = match argmin.len() {
            0 => Outcome::Unreachable,
            1 => Outcome::Decoded(argmin[0]),
            _ => Outcome::Tie(argmin),
        };
        Ok(DecodeResult {
            outcome,
            distance: best,
        })
    }

    /// Worst-case decoding with an erasure budget: succeeds only when
    /// exactly one codeword reaches `r` within `budget` erasures.
    pub fn worstcase_decode(&self, r: &BinaryWord, budget: u64) -> Result<DecodeResult> {
        self.check(r)?;
        let mut best = Eta::Infinite;
        let mut within: Vec<usize> = Vec::new();
        for i in 0..self.len() {
            let d = self.delta(i, r);
            best = best.min(d);
            if let Eta::Finite(v) = d {
                if v <= budget {
                    within.push(i);
                }
            }
        }
        let outcome = match within.len() {
            0 => Outcome::Unreachable,
            1 => Outcome::Decoded(within[0]),
            _ => Outcome::Ambiguous(within),
        };
        Ok(DecodeResult {
            outcome,
            distance: best,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderKind {
    Md,
    Worstcase { budget: u64 },
}

/// What a tie (or ambiguity set) containing the sent codeword counts as.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TiePolicy {
    #[default]
    CountAsError,
    /// Pick uniformly among the tied codewords.
    UniformRandom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    pub ties: TiePolicy,
}

impl DecoderConfig {
    pub fn md() -> Self {
        Self {
            kind: DecoderKind::Md,
            ties: TiePolicy::CountAsError,
        }
    }

    pub fn worstcase(budget: u64) -> Self {
        Self {
            kind: DecoderKind::Worstcase { budget },
            ties: TiePolicy::CountAsError,
        }
    }

    pub fn with_ties(mut self, ties: TiePolicy) -> Self {
        self.ties = ties;
        self
    }

    pub fn name(&self) -> String {
        let base = match self.kind {
            DecoderKind::Md => "md".to_string(),
            DecoderKind::Worstcase { budget } => format!("worstcase:{budget}"),
        };
        match self.ties {
            TiePolicy::CountAsError => base,
            TiePolicy::UniformRandom => format!("{base}+uniform-ties"),
        }
    }

    pub fn decode(&self, book: &Codebook, r: &BinaryWord) -> Result<DecodeResult> {
        match self.kind {
            DecoderKind::Md => book.md_decode(r),
            DecoderKind::Worstcase { budget } => book.worstcase_decode(r, budget),
        }
    }

    /// Probability that decoding `r` does not return `sent`, averaged over
    /// the tie-breaking coin only.
    pub fn error_weight(&self, book: &Codebook, r: &BinaryWord, sent: usize) -> Result<f64> {
        let res = self.decode(book, r)?;
        Ok(match &res.outcome {
            Outcome::Decoded(i) => (*i != sent) as u8 as f64,
            Outcome::Unreachable => 1.0,
            Outcome::Tie(s) | Outcome::Ambiguous(s) => match self.ties {
                TiePolicy::CountAsError => 1.0,
                TiePolicy::UniformRandom if s.contains(&sent) => 1.0 - 1.0 / s.len() as f64,
                TiePolicy::UniformRandom => 1.0,
            },
        })
    }

    /// One draw of the decoding error indicator.
    pub fn is_error<R: Rng + ?Sized>(
        &self,
        book: &Codebook,
        r: &BinaryWord,
        sent: usize,
        rng: &mut R,
    ) -> Result<bool> {
        let res = self.decode(book, r)?;
        Ok(match &res.outcome {
            Outcome::Decoded(i) => *i != sent,
            Outcome::Unreachable => true,
            Outcome::Tie(s) | Outcome::Ambiguous(s) => match self.ties {
                TiePolicy::CountAsError => true,
                TiePolicy::UniformRandom => s[rng.gen_range(0..s.len())] != sent,
            },
        })
    }
}

/// Convenience wrapper enumerating the codebook of `g`.
pub fn md_decode(r: &BinaryWord, g: &GeneratorMatrix, limits: &Limits) -> Result<DecodeResult> {
    Codebook::new(g, limits)?.md_decode(r)
}

/// Convenience wrapper enumerating the codebook of `g`.
pub fn worstcase_decode(
    r: &BinaryWord,
    g: &GeneratorMatrix,
    budget: u64,
    limits: &Limits,
) -> Result<DecodeResult> {
    Codebook::new(g, limits)?.worstcase_decode(r, budget)
}

/// Searches for a message `m' != sent` whose codeword is at least as close
/// to `r` as the sent one, i.e. `δ(m'G → r) <= δ(sent G → r)`.
///
/// Finding one proves the minimum-distance decoder does not return `sent`
/// uniquely, so it certifies a decoding error for codes too large to
/// enumerate. Not finding one proves nothing. The search combines random
/// messages with greedy single-bit descent on `δ`.
pub fn find_md_competitor<R: Rng + ?Sized>(
    g: &GeneratorMatrix,
    sent: &Message,
    r: &BinaryWord,
    restarts: usize,
    rng: &mut R,
) -> Result<Option<Message>> {
    let target = delta(&encode(sent, g)?, r)?;
    let k = g.k();
    let score = |m: &Message| -> Result<Eta> { delta(&encode(m, g)?, r) };
    for _ in 0..restarts {
        let mut m = BitVec::from_bools((0..k).map(|_| rng.gen_bool(0.5)));
        let mut cur = score(&m)?;
        loop {
            if &m != sent && cur <= target {
                return Ok(Some(m));
            }
            // steepest single-bit improvement
            let mut best: Option<(Eta, usize)> = None;
            for i in 0..k {
                m.flip(i);
                let s = score(&m)?;
                if &m != sent && s <= target {
                    return Ok(Some(m));
                }
                m.flip(i);
                if s < cur && best.is_none_or(|(b, _)| s < b) {
                    best = Some((s, i));
                }
            }
            match best {
                Some((s, i)) => {
                    m.flip(i);
                    cur = s;
                }
                None => break,
            }
        }
    }
    Ok(None)
}
