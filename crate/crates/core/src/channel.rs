//! Random encoder faults and Monte Carlo decoding experiments.
//!
//! Under the erasure model every one of `G` is dropped independently with
//! probability `p`. For a fixed message, bit `j` of the codeword flips when
//! an odd number of the `d_j^(m)` contributing ones are dropped, which
//! happens with probability `P_d = (1 - (1 - 2p)^d) / 2`, independently
//! across positions.
//!
//! The insertion model additionally turns zeros of `G` into ones with
//! probability `p0` (ones are dropped with probability `p1`).

use rand::Rng;
use serde::Serialize;

use crate::bits::{BinaryWord, BitVec, Message};
use crate::decoders::{find_md_competitor, Codebook, DecoderConfig};
use crate::error::{Error, Result};
use crate::gf2::{encode, encode_faulty_unchecked, BitMatrix, ErasureMatrix, GeneratorMatrix, Limits};
use crate::rng::{Substreams, RNG_NAME};

/// Flip probability of a bit whose column sum is `d`.
pub fn bit_flip_prob(d: u32, p: f64) -> f64 {
    if d == 0 {
        return 0.0;
    }
    let base = 1.0 - 2.0 * p;
    // powi is exact enough here; fall back to powf beyond i32 range
    let pow = if d <= i32::MAX as u32 {
        base.powi(d as i32)
    } else {
        base.powf(d as f64)
    };
    (1.0 - pow) / 2.0
}

/// `1/2 - P_d = (1 - 2p)^d / 2`, without the cancellation that makes
/// `P_d` round to exactly 1/2 for large `d`.
pub fn flip_gap(d: u32, p: f64) -> f64 {
    let base = 1.0 - 2.0 * p;
    let pow = if d <= i32::MAX as u32 {
        base.powi(d as i32)
    } else {
        base.powf(d as f64)
    };
    pow / 2.0
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("{name} = {p} must lie in [0, 1)")));
    }
    Ok(())
}

/// Drops each one of `G` independently with probability `p`.
pub fn sample_erasure<R: Rng + ?Sized>(g: &GeneratorMatrix, p: f64, rng: &mut R) -> ErasureMatrix {
    let mut bits = BitMatrix::zeros(g.k(), g.n());
    for (i, row) in g.bits().rows().iter().enumerate() {
        for j in row.iter_ones() {
            if rng.gen_bool(p) {
                bits.set(i, j, true);
            }
        }
    }
    ErasureMatrix::new(g, bits).expect("sampled inside the support of G")
}

/// Sets entry `(i, j)` with probability `p0` where `G` is 0 and `p1` where
/// `G` is 1.
pub fn sample_insertion<R: Rng + ?Sized>(g: &GeneratorMatrix, p0: f64, p1: f64, rng: &mut R) -> BitMatrix {
    let mut bits = BitMatrix::zeros(g.k(), g.n());
    for i in 0..g.k() {
        for j in 0..g.n() {
            let p = if g.get(i, j) { p1 } else { p0 };
            if rng.gen_bool(p) {
                bits.set(i, j, true);
            }
        }
    }
    bits
}

/// Source of encoder faults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ChannelModel {
    /// Ones of `G` are erased with probability `p`.
    Erasure { p: f64 },
    /// Zeros flip with probability `p0`, ones with probability `p1`.
    Insertion { p0: f64, p1: f64 },
}

impl ChannelModel {
    pub fn erasure(p: f64) -> Result<Self> {
        check_prob("p", p)?;
        Ok(ChannelModel::Erasure { p })
    }

    pub fn insertion(p0: f64, p1: f64) -> Result<Self> {
        check_prob("p0", p0)?;
        check_prob("p1", p1)?;
        Ok(ChannelModel::Insertion { p0, p1 })
    }

    /// The scalar `p` reported for this model (`min{p0, p1}` for insertions).
    pub fn p(&self) -> f64 {
        match *self {
            ChannelModel::Erasure { p } => p,
            ChannelModel::Insertion { p0, p1 } => p0.min(p1),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelModel::Erasure { .. } => "erasure",
            ChannelModel::Insertion { .. } => "insertion",
        }
    }

    /// Encodes `m` through a freshly sampled faulty encoder.
    ///
    /// Faults are only drawn for rows selected by `m`; the others cannot
    /// affect the output, so the distribution matches sampling the whole
    /// fault matrix.
    pub fn transmit<R: Rng + ?Sized>(&self, m: &Message, g: &GeneratorMatrix, rng: &mut R) -> BinaryWord {
        let mut r = BitVec::zeros(g.n());
        for i in m.iter_ones() {
            let row = g.row(i);
            r.xor_assign(row);
            match *self {
                ChannelModel::Erasure { p } => {
                    for j in row.iter_ones() {
                        if rng.gen_bool(p) {
                            r.flip(j);
                        }
                    }
                }
                ChannelModel::Insertion { p0, p1 } => {
                    for j in 0..g.n() {
                        if rng.gen_bool(if row.get(j) { p1 } else { p0 }) {
                            r.flip(j);
                        }
                    }
                }
            }
        }
        r
    }
}

/// Erasure-channel output by sampling the erasure matrix.
pub fn transmit<R: Rng + ?Sized>(m: &Message, g: &GeneratorMatrix, p: f64, rng: &mut R) -> Result<BinaryWord> {
    check_prob("p", p)?;
    let c = encode(m, g)?;
    let e = sample_erasure(g, p, rng);
    let r = encode_faulty_unchecked(c.message(), g, e.bits());
    Ok(r)
}

/// Erasure-channel output by flipping each codeword bit independently with
/// probability `P_{d_j^(m)}`. Same distribution as [`transmit`].
pub fn transmit_bitflip<R: Rng + ?Sized>(
    m: &Message,
    g: &GeneratorMatrix,
    p: f64,
    rng: &mut R,
) -> Result<BinaryWord> {
    check_prob("p", p)?;
    let c = encode(m, g)?;
    let mut r = c.effective();
    for (j, &d) in c.sums().iter().enumerate() {
        if d > 0 && rng.gen_bool(bit_flip_prob(d, p)) {
            r.flip(j);
        }
    }
    Ok(r)
}

/// How messages are chosen across trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MessagePolicy {
    UniformRandom,
    /// Trial `t` sends message index `t mod 2^k`.
    ExhaustiveCycle,
    Fixed(Message),
}

impl MessagePolicy {
    pub fn name(&self) -> String {
        match self {
            MessagePolicy::UniformRandom => "uniform".into(),
            MessagePolicy::ExhaustiveCycle => "cycle".into(),
            MessagePolicy::Fixed(m) => format!("fixed:{m}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub channel: ChannelModel,
    pub decoder: DecoderConfig,
    pub policy: MessagePolicy,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MessageTally {
    pub message: String,
    pub trials: u64,
    pub errors: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub p: f64,
    pub decoder: String,
    pub policy: String,
    pub channel: ChannelModel,
    pub rng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_message: Option<Vec<MessageTally>>,
}

/// Flat record with the fixed JSON/CSV field set.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct SimulationRecord {
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub p: f64,
    pub decoder: String,
    pub policy: String,
}

impl SimulationRecord {
    pub const CSV_HEADER: &'static str = "trials,errors,error_rate,ci_low,ci_high,seed,p,decoder,policy";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.trials,
            self.errors,
            self.error_rate,
            self.ci_low,
            self.ci_high,
            self.seed,
            self.p,
            self.decoder,
            self.policy
        )
    }
}

impl SimulationReport {
    pub fn record(&self) -> SimulationRecord {
        SimulationRecord {
            trials: self.trials,
            errors: self.errors,
            error_rate: self.error_rate,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
            seed: self.seed,
            p: self.p,
            decoder: self.decoder.clone(),
            policy: self.policy.clone(),
        }
    }
}

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` successes out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let x = errors as f64;
    let z2 = z * z;
    let denom = n + z2;
    let center = (x + z2 / 2.0) / denom;
    let half = z / denom * (x * (n - x) / n + z2 / 4.0).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Largest `k` for which per-message tallies are kept.
const BREAKDOWN_MAX_K: usize = 12;

#[derive(Clone, Default)]
struct Tally {
    trials: u64,
    errors: u64,
    per_message: Vec<(u64, u64)>,
}

impl Tally {
    fn with_slots(slots: usize) -> Self {
        Self {
            per_message: vec![(0, 0); slots],
            ..Self::default()
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.errors += other.errors;
        for (a, b) in self.per_message.iter_mut().zip(other.per_message) {
            a.0 += b.0;
            a.1 += b.1;
        }
        self
    }
}

/// Runs `trials` independent encode/decode rounds and counts errors.
///
/// Trial `t` uses substream `t` of the seed, so the report is identical for
/// any thread count.
pub fn monte_carlo(g: &GeneratorMatrix, config: &SimulationConfig, limits: &Limits) -> Result<SimulationReport> {
    if config.trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    match config.channel {
        ChannelModel::Erasure { p } => check_prob("p", p)?,
        ChannelModel::Insertion { p0, p1 } => {
            check_prob("p0", p0)?;
            check_prob("p1", p1)?;
        }
    }
    if let MessagePolicy::Fixed(m) = &config.policy {
        if m.len() != g.k() {
            return Err(Error::Dimension {
                what: "message length",
                expected: g.k(),
                actual: m.len(),
            });
        }
    }
    let book = Codebook::new(g, limits)?;
    let messages: Vec<Message> = book.words().iter().map(|c| c.message().clone()).collect();
    let slots = if g.k() <= BREAKDOWN_MAX_K { messages.len() } else { 0 };
    let streams = Substreams::new(config.seed);

    let run_trial = |t: u64| -> Result<(usize, bool)> {
        let mut rng = streams.get(t);
        let sent = match &config.policy {
            MessagePolicy::UniformRandom => rng.gen_range(0..messages.len()),
            MessagePolicy::ExhaustiveCycle => (t % messages.len() as u64) as usize,
            MessagePolicy::Fixed(m) => m.to_index() as usize,
        };
        let r = config.channel.transmit(&messages[sent], g, &mut rng);
        let err = config.decoder.is_error(&book, &r, sent, &mut rng)?;
        Ok((sent, err))
    };
    let fold_range = |range: std::ops::Range<u64>| -> Result<Tally> {
        let mut tally = Tally::with_slots(slots);
        for t in range {
            let (sent, err) = run_trial(t)?;
            tally.trials += 1;
            tally.errors += err as u64;
            if let Some(slot) = tally.per_message.get_mut(sent) {
                slot.0 += 1;
                slot.1 += err as u64;
            }
        }
        Ok(tally)
    };

    const CHUNK: u64 = 4096;
    let chunks: Vec<std::ops::Range<u64>> = (0..config.trials.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(config.trials))
        .collect();
    #[cfg(feature = "parallel")]
    let tallies: Vec<Tally> = {
        use rayon::prelude::*;
        chunks.into_par_iter().map(fold_range).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let tallies: Vec<Tally> = chunks.into_iter().map(fold_range).collect::<Result<_>>()?;
    let total = tallies
        .into_iter()
        .fold(Tally::with_slots(slots), Tally::merge);

    let (ci_low, ci_high) = wilson_interval(total.errors, total.trials, Z95);
    let per_message = (slots > 0).then(|| {
        messages
            .iter()
            .zip(&total.per_message)
            .filter(|(_, (t, _))| *t > 0)
            .map(|(m, &(trials, errors))| MessageTally {
                message: m.to_string(),
                trials,
                errors,
            })
            .collect()
    });
    Ok(SimulationReport {
        trials: total.trials,
        errors: total.errors,
        error_rate: total.errors as f64 / total.trials as f64,
        ci_low,
        ci_high,
        seed: config.seed,
        p: config.channel.p(),
        decoder: config.decoder.name(),
        policy: config.policy.name(),
        channel: config.channel,
        rng: RNG_NAME,
        per_message,
    })
}

/// Lower bound on the minimum-distance error rate for codes too large to
/// enumerate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedErrorRate {
    pub trials: u64,
    /// Trials where a competing codeword at least as close as the sent one
    /// was exhibited.
    pub certified_errors: u64,
    pub rate_lower_bound: f64,
    pub ci_low: f64,
}

/// Sends uniformly random messages through `channel` and counts trials in
/// which [`find_md_competitor`] exhibits a codeword that beats or ties the
/// sent one. Each such trial is a minimum-distance decoding error (ties
/// count as errors).
pub fn certified_md_error_rate(
    g: &GeneratorMatrix,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    restarts: usize,
) -> Result<CertifiedErrorRate> {
    let streams = Substreams::new(seed);
    let trial = |t: u64| -> Result<bool> {
        let mut rng = streams.get(t);
        let m = BitVec::from_bools((0..g.k()).map(|_| rng.gen_bool(0.5)));
        let r = channel.transmit(&m, g, &mut rng);
        Ok(find_md_competitor(g, &m, &r, restarts, &mut rng)?.is_some())
    };
    #[cfg(feature = "parallel")]
    let hits: Vec<bool> = {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(trial).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let hits: Vec<bool> = (0..trials).map(trial).collect::<Result<_>>()?;
    let certified_errors = hits.iter().filter(|&&h| h).count() as u64;
    let (ci_low, _) = wilson_interval(certified_errors, trials, Z95);
    Ok(CertifiedErrorRate {
        trials,
        certified_errors,
        rate_lower_bound: certified_errors as f64 / trials.max(1) as f64,
        ci_low,
    })
}
