//! Achievable-rate bounds for minimum-distance decoding under random
//! generator-matrix erasures.
//!
//! For an ordered pair `(c, c')` the pairwise error probability satisfies
//! `P(c -> c') <= n(n+1) C beta^n`, with `beta` depending only on the
//! normalized block profile `alpha_i = w_i / n`, the erasure probability `p`
//! and the largest column degree `d*`. Every rate `R < -log2 beta_max`
//! drives the average error probability to zero.
//!
//! All `beta` arithmetic is carried out on logarithms; `psi(x) = x^x` enters
//! as `x ln x` with the `x = 0` limit 0.

use serde::{Serialize, Serializer};

use crate::bits::Message;
use crate::channel::bit_flip_prob;
use crate::decoders::{Codebook, DecoderConfig};
use crate::distance::{block_profile, eta0_directed, eta_max_of_codebook, BlockProfile, Eta, Radius};
use crate::error::{Error, Result};
use crate::gf2::{GeneratorMatrix, Limits, TernaryCodeword};

/// Slack for comparing normalized quantities that are sums of `w_i / n`.
const EPS: f64 = 1e-12;

/// `x ln x` with the continuous limit at 0.
fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `x ln y`, treating `0 * ln 0` as 0.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `psi(x) = x^x`, with `psi(0) = 1`.
pub fn psi(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("psi needs x >= 0, got {x}")));
    }
    Ok(xlnx(x).exp())
}

/// `sqrt(C)`, the constant in the Stirling binomial bound.
pub fn stirling_sqrt_c() -> f64 {
    std::f64::consts::E / (std::f64::consts::PI * std::f64::consts::SQRT_2)
}

/// `C = (e / (pi sqrt 2))^2`.
pub fn stirling_c() -> f64 {
    stirling_sqrt_c().powi(2)
}

/// Normalized block profile of an ordered codeword pair, together with the
/// channel parameters the bound depends on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaProfile {
    alpha: [f64; 9],
    /// `eta0(c -> c') / n`; `None` when no erasure pattern confuses the pair.
    alpha0: Option<f64>,
    d_star: u32,
    p: f64,
}

impl AlphaProfile {
    pub fn from_block_profile(bp: &BlockProfile, d_star: u32, p: f64) -> Result<Self> {
        let n = bp.n() as f64;
        if bp.n() == 0 {
            return Err(Error::domain("empty block profile"));
        }
        let alpha0 = eta0_directed(bp).finite().map(|e| e as f64 / n);
        Self::new(bp.alphas(), alpha0, d_star, p)
    }

    /// Builds a profile from raw `alpha_1..alpha_9` and `alpha_0`.
    pub fn new(alpha: [f64; 9], alpha0: Option<f64>, d_star: u32, p: f64) -> Result<Self> {
        if alpha.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::domain("alpha entries must be non-negative"));
        }
        let total: f64 = alpha.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("alphas sum to {total}, expected 1")));
        }
        if !(0.0..1.0).contains(&p) {
            return Err(Error::domain(format!("p = {p} must lie in [0, 1)")));
        }
        if let Some(a0) = alpha0 {
            if !(a0 >= 0.0) {
                return Err(Error::domain("alpha0 must be non-negative"));
            }
        }
        Ok(Self {
            alpha,
            alpha0,
            d_star,
            p,
        })
    }

    /// Real-valued `eta0(c -> c') / n` for arbitrary alphas: infinite when
    /// block 7 outweighs blocks 2, 3, 4, else `max{a3, (a2+a3+a4+a7)/2}`.
    pub fn continuous_alpha0(alpha: &[f64; 9]) -> Option<f64> {
        let [_, a2, a3, a4, _, _, a7, _, _] = *alpha;
        if a7 > a3 + a2 + a4 {
            None
        } else {
            Some(a3.max((a2 + a3 + a4 + a7) / 2.0))
        }
    }

    /// `alpha_b`, 1-based.
    pub fn alpha(&self, b: usize) -> f64 {
        self.alpha[b - 1]
    }

    pub fn alphas(&self) -> &[f64; 9] {
        &self.alpha
    }

    pub fn alpha0(&self) -> Option<f64> {
        self.alpha0
    }

    pub fn d_star(&self) -> u32 {
        self.d_star
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `alpha_1 + ... + alpha_6`.
    pub fn alpha_bar(&self) -> f64 {
        self.alpha[..6].iter().sum()
    }

    /// `alpha_1 + alpha_2 + alpha_4 + alpha_5`.
    pub fn gamma(&self) -> f64 {
        self.alpha(1) + self.alpha(2) + self.alpha(4) + self.alpha(5)
    }

    /// `P_{d*}`.
    pub fn p_dstar(&self) -> f64 {
        bit_flip_prob(self.d_star, self.p)
    }

    /// Interior maximizer `alpha_3 + gamma P / (P + 1 - p)`.
    pub fn alpha_star(&self) -> f64 {
        let pd = self.p_dstar();
        let denom = pd + 1.0 - self.p;
        self.alpha(3) + self.gamma() * pd / denom
    }

    /// Unconstrained maximizer of `b(lambda)` at `alpha'`.
    pub fn lambda_star(&self, alpha_prime: f64) -> f64 {
        let g1 = self.alpha(2) + self.alpha(4);
        let g = self.gamma();
        if g == 0.0 {
            0.0
        } else {
            g1 * (alpha_prime - self.alpha(3)) / g
        }
    }

    /// Feasible interval for `lambda` at `alpha'`.
    pub fn lambda_range(&self, alpha_prime: f64) -> Option<(f64, f64)> {
        let a0 = self.alpha0?;
        let a3 = self.alpha(3);
        let g1 = self.alpha(2) + self.alpha(4);
        let g2 = self.alpha(1) + self.alpha(5);
        let lo = (a0 - a3).max(alpha_prime - a3 - g2).max(0.0);
        let hi = g1.min(alpha_prime - a3);
        (lo <= hi + EPS).then_some((lo, hi.max(lo)))
    }
}

/// `b(lambda)` at `alpha'`, the product of the two binomial exponents.
pub fn b_of_lambda(profile: &AlphaProfile, alpha_prime: f64, lambda: f64) -> Result<f64> {
    Ok(ln_b_of_lambda(profile, alpha_prime, lambda)?.exp())
}

pub fn ln_b_of_lambda(profile: &AlphaProfile, alpha_prime: f64, lambda: f64) -> Result<f64> {
    let (lo, hi) = profile
        .lambda_range(alpha_prime)
        .ok_or_else(|| Error::domain(format!("no feasible lambda at alpha' = {alpha_prime}")))?;
    if lambda < lo - EPS || lambda > hi + EPS {
        return Err(Error::domain(format!(
            "lambda = {lambda} outside the feasible range [{lo}, {hi}]"
        )));
    }
    let a3 = profile.alpha(3);
    let g1 = profile.alpha(2) + profile.alpha(4);
    let g2 = profile.alpha(1) + profile.alpha(5);
    let delta = alpha_prime - a3;
    Ok(xlnx(g1) - xlnx(lambda) - xlnx(g1 - lambda) + xlnx(g2) - xlnx(delta - lambda)
        - xlnx(g2 - delta + lambda))
}

/// Argument of the log whose sign equals the sign of `db/dlambda`.
pub fn db_dlambda_sign_term(profile: &AlphaProfile, alpha_prime: f64, lambda: f64) -> f64 {
    let a3 = profile.alpha(3);
    let g1 = profile.alpha(2) + profile.alpha(4);
    let g2 = profile.alpha(1) + profile.alpha(5);
    ((g1 - lambda) * (alpha_prime - a3 - lambda) / (lambda * (g2 + a3 - alpha_prime + lambda))).ln()
}

/// Argument of the log whose sign equals the sign of `dbeta/dalpha'`.
pub fn dbeta_dalpha_sign_term(profile: &AlphaProfile, alpha_prime: f64) -> f64 {
    let a3 = profile.alpha(3);
    let pd = profile.p_dstar();
    (pd * (profile.gamma() + a3 - alpha_prime) / ((1.0 - profile.p) * (alpha_prime - a3))).ln()
}

fn ln_beta_unchecked(profile: &AlphaProfile, alpha_prime: f64) -> f64 {
    let a3 = profile.alpha(3);
    let g = profile.gamma();
    let rest = g + a3 - alpha_prime;
    if alpha_prime < a3 - EPS || rest < -EPS {
        // no way to spend alpha' bit errors on blocks 1-5
        return f64::NEG_INFINITY;
    }
    xlny(alpha_prime, profile.p_dstar()) + xlny(profile.alpha_bar() - alpha_prime, 1.0 - profile.p) + xlnx(g)
        - xlnx(alpha_prime - a3)
        - xlnx(rest)
}

/// `beta(alpha') = P^{alpha'} (1-p)^{abar - alpha'} psi(gamma) /
/// (psi(alpha' - alpha_3) psi(abar - alpha_6 - alpha'))`.
///
/// Zero for `alpha' > alpha_3 + gamma`, where no error configuration exists.
pub fn beta_of_alpha_prime(profile: &AlphaProfile, alpha_prime: f64) -> Result<f64> {
    Ok(ln_beta_of_alpha_prime(profile, alpha_prime)?.exp())
}

pub fn ln_beta_of_alpha_prime(profile: &AlphaProfile, alpha_prime: f64) -> Result<f64> {
    let a0 = profile
        .alpha0
        .ok_or_else(|| Error::domain("beta(alpha') is undefined when alpha0 is infinite"))?;
    let abar = profile.alpha_bar();
    if alpha_prime < a0 - EPS || alpha_prime > abar + EPS {
        return Err(Error::domain(format!(
            "alpha' = {alpha_prime} outside [{a0}, {abar}]"
        )));
    }
    Ok(ln_beta_unchecked(profile, alpha_prime))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// The pair cannot be confused; `beta = 0`.
    InfiniteEta0,
    /// `alpha* >= alpha0`; the maximum sits at `alpha*`.
    InteriorMax,
    /// `alpha* < alpha0`; the maximum sits at `alpha0`.
    BoundaryMax,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairBound {
    pub beta: f64,
    pub ln_beta: f64,
    pub case: BoundCase,
    pub alpha0: Option<f64>,
    pub alpha_star: f64,
    pub gamma: f64,
    /// `b` at the maximizing `alpha'` (1 when the pair is unconfusable).
    pub b_star: f64,
    pub beta_tilde: Option<f64>,
}

impl PairBound {
    /// `-log2 beta`, infinite when `beta = 0`.
    pub fn minus_log2_beta(&self) -> f64 {
        -self.ln_beta / std::f64::consts::LN_2
    }
}

/// Closed-form `beta(c -> c')`.
pub fn beta_closed_form(profile: &AlphaProfile) -> PairBound {
    let gamma = profile.gamma();
    let alpha_star = profile.alpha_star();
    let Some(a0) = profile.alpha0 else {
        return PairBound {
            beta: 0.0,
            ln_beta: f64::NEG_INFINITY,
            case: BoundCase::InfiniteEta0,
            alpha0: None,
            alpha_star,
            gamma,
            b_star: 1.0,
            beta_tilde: None,
        };
    };
    let a3 = profile.alpha(3);
    let pd = profile.p_dstar();
    let q = 1.0 - profile.p;
    let head = xlny(a3, pd) + xlny(profile.alpha(6), q);
    let ln_b_at = |a: f64| xlnx(gamma) - xlnx(a - a3) - xlnx(gamma + a3 - a);
    if alpha_star >= a0 {
        let ln_beta = head + xlny(gamma, pd + q);
        PairBound {
            beta: ln_beta.exp(),
            ln_beta,
            case: BoundCase::InteriorMax,
            alpha0: Some(a0),
            alpha_star,
            gamma,
            b_star: ln_b_at(alpha_star).exp(),
            beta_tilde: None,
        }
    } else {
        let x = a0 - a3;
        let y = gamma + a3 - a0;
        let ln_tilde = if y < -EPS {
            f64::NEG_INFINITY
        } else {
            xlny(x, pd) + xlny(y, q) + xlnx(gamma) - xlnx(x) - xlnx(y)
        };
        let ln_beta = head + ln_tilde;
        PairBound {
            beta: ln_beta.exp(),
            ln_beta,
            case: BoundCase::BoundaryMax,
            alpha0: Some(a0),
            alpha_star,
            gamma,
            b_star: ln_b_at(a0).exp(),
            beta_tilde: Some(ln_tilde.exp()),
        }
    }
}

/// `ln` of the pairwise bound `n(n+1) C beta^n`.
pub fn ln_pairwise_bound(n: usize, ln_beta: f64) -> f64 {
    let n_f = n as f64;
    (n_f * (n_f + 1.0) * stirling_c()).ln() + n_f * ln_beta
}

/// `n(n+1) C beta^n`.
pub fn pairwise_bound(n: usize, beta: f64) -> f64 {
    if beta == 0.0 {
        return 0.0;
    }
    ln_pairwise_bound(n, beta.ln()).exp()
}

/// `P_e <= n(n+1) C (2^R beta_max)^n`.
pub fn pe_upper_bound(n: usize, rate: f64, beta_max: f64) -> f64 {
    if beta_max == 0.0 {
        return 0.0;
    }
    let n_f = n as f64;
    let ln = (n_f * (n_f + 1.0) * stirling_c()).ln() + n_f * (rate * std::f64::consts::LN_2 + beta_max.ln());
    ln.exp()
}

/// Bound for every ordered pair of a code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRecord {
    pub m: String,
    pub m_prime: String,
    pub w1: u64,
    pub w2: u64,
    pub w3: u64,
    pub w4: u64,
    pub w5: u64,
    pub w6: u64,
    pub w7: u64,
    pub w8: u64,
    pub w9: u64,
    pub eta0_directed: Eta,
    pub case: BoundCase,
    pub beta: f64,
    #[serde(serialize_with = "ser_ext_real")]
    pub minus_log2_beta: f64,
}

fn ser_ext_real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

fn ser_rate<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("unbounded")
    } else {
        s.serialize_f64(*x)
    }
}

fn pair_bound_of(c: &TernaryCodeword, c2: &TernaryCodeword, d_star: u32, p: f64) -> Result<(BlockProfile, PairBound)> {
    let bp = block_profile(c, c2)?;
    let prof = AlphaProfile::from_block_profile(&bp, d_star, p)?;
    Ok((bp, beta_closed_form(&prof)))
}

/// `beta(c -> c')` for two messages of `g`.
pub fn pair_bound(g: &GeneratorMatrix, p: f64, m: &Message, m_prime: &Message) -> Result<PairBound> {
    let c = crate::gf2::encode(m, g)?;
    let c2 = crate::gf2::encode(m_prime, g)?;
    Ok(pair_bound_of(&c, &c2, g.max_degree(), p)?.1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaMax {
    pub beta_max: f64,
    pub ln_beta_max: f64,
    /// Codebook indices `(c, c')` attaining the maximum; `None` for `k`
    /// with a single codeword pair set that is empty.
    pub argmax: Option<(usize, usize)>,
    pub d_star: u32,
}

impl BetaMax {
    /// `-log2 beta_max`.
    pub fn rate_bound(&self) -> f64 {
        -self.ln_beta_max / std::f64::consts::LN_2
    }
}

fn row_max(book: &[TernaryCodeword], i: usize, d_star: u32, p: f64) -> Result<(f64, usize)> {
    let mut best = (f64::NEG_INFINITY, usize::MAX);
    for (j, c2) in book.iter().enumerate() {
        if j == i {
            continue;
        }
        let (_, pb) = pair_bound_of(&book[i], c2, d_star, p)?;
        if pb.ln_beta > best.0 || best.1 == usize::MAX {
            best = (pb.ln_beta, j);
        }
    }
    Ok(best)
}

/// Largest `beta` over ordered pairs of distinct messages.
pub fn beta_max(g: &GeneratorMatrix, p: f64, limits: &Limits) -> Result<BetaMax> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} must lie in [0, 1)")));
    }
    let book = crate::gf2::enumerate_codebook(g, limits)?;
    let d_star = g.max_degree();
    let idx: Vec<usize> = (0..book.len()).collect();
    #[cfg(feature = "parallel")]
    let rows: Vec<(f64, usize)> = {
        use rayon::prelude::*;
        idx.par_iter()
            .map(|&i| row_max(&book, i, d_star, p))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| row_max(&book, i, d_star, p))
        .collect::<Result<_>>()?;
    let mut best = (f64::NEG_INFINITY, None);
    for (i, &(v, j)) in rows.iter().enumerate() {
        if j != usize::MAX && (best.1.is_none() || v > best.0) {
            best = (v, Some((i, j)));
        }
    }
    Ok(BetaMax {
        beta_max: best.0.exp(),
        ln_beta_max: best.0,
        argmax: best.1,
        d_star,
    })
}

/// `-log2 beta_max`; infinite when no pair can be confused.
pub fn rate_bound(g: &GeneratorMatrix, p: f64, limits: &Limits) -> Result<f64> {
    Ok(beta_max(g, p, limits)?.rate_bound())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSummary {
    pub beta_max: f64,
    #[serde(serialize_with = "ser_rate")]
    pub rate_bound: f64,
    pub eta_max: Radius,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub n: usize,
    pub rate: f64,
    pub p: f64,
    pub d_star: u32,
    pub pairs: Vec<PairRecord>,
    pub summary: BoundSummary,
}

/// Per-pair table plus summary for `g` at erasure probability `p`.
pub fn bound_report(g: &GeneratorMatrix, p: f64, limits: &Limits) -> Result<BoundReport> {
    let bm = beta_max(g, p, limits)?;
    let book = crate::gf2::enumerate_codebook(g, limits)?;
    let d_star = g.max_degree();
    let mut pairs = Vec::with_capacity(book.len() * book.len().saturating_sub(1));
    for (i, c) in book.iter().enumerate() {
        for (j, c2) in book.iter().enumerate() {
            if i == j {
                continue;
            }
            let (bp, pb) = pair_bound_of(c, c2, d_star, p)?;
            let w = bp.counts();
            pairs.push(PairRecord {
                m: c.message().to_string(),
                m_prime: c2.message().to_string(),
                w1: w[0],
                w2: w[1],
                w3: w[2],
                w4: w[3],
                w5: w[4],
                w6: w[5],
                w7: w[6],
                w8: w[7],
                w9: w[8],
                eta0_directed: eta0_directed(&bp),
                case: pb.case,
                beta: pb.beta,
                minus_log2_beta: pb.minus_log2_beta(),
            });
        }
    }
    Ok(BoundReport {
        k: g.k(),
        n: g.n(),
        rate: g.rate(),
        p,
        d_star,
        pairs,
        summary: BoundSummary {
            beta_max: bm.beta_max,
            rate_bound: bm.rate_bound(),
            eta_max: eta_max_of_codebook(&book).radius,
        },
    })
}

/// Erasable ones of `g` that influence the codeword of `m`: the ones in
/// rows where `m` is 1. Erasures elsewhere do not change the output.
fn active_ones(g: &GeneratorMatrix, m: &Message) -> Vec<usize> {
    let mut cols = Vec::new();
    for i in m.iter_ones() {
        cols.extend(g.row(i).iter_ones());
    }
    cols
}

/// Calls `f(r, weight)` for every received word `r` produced by an erasure
/// pattern on the active ones of `m`, with its probability.
fn for_each_output(
    g: &GeneratorMatrix,
    book: &Codebook,
    sent: usize,
    p: f64,
    limits: &Limits,
    mut f: impl FnMut(&crate::bits::BinaryWord, f64) -> Result<()>,
) -> Result<()> {
    let c = book.get(sent);
    let cols = active_ones(g, c.message());
    limits.check_erasures(cols.len())?;
    let t = cols.len();
    let ln_p = p.ln();
    let ln_q = (1.0 - p).ln();
    let base = c.effective();
    for mask in 0u64..(1u64 << t) {
        let w = mask.count_ones() as usize;
        let weight = if p == 0.0 {
            if w == 0 {
                1.0
            } else {
                continue;
            }
        } else {
            (w as f64 * ln_p + (t - w) as f64 * ln_q).exp()
        };
        let mut r = base.clone();
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            r.flip(cols[b]);
            bits &= bits - 1;
        }
        f(&r, weight)?;
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} must lie in [0, 1)")));
    }
    Ok(())
}

/// Error probability of `decoder` given that message `sent` was encoded.
pub fn exact_error_given(
    g: &GeneratorMatrix,
    book: &Codebook,
    sent: usize,
    p: f64,
    decoder: &DecoderConfig,
    limits: &Limits,
) -> Result<f64> {
    check_p(p)?;
    let mut total = 0.0;
    for_each_output(g, book, sent, p, limits, |r, w| {
        total += w * decoder.error_weight(book, r, sent)?;
        Ok(())
    })?;
    Ok(total)
}

/// Exact average error probability over uniform messages, by enumerating
/// every erasure pattern.
pub fn exact_error_probability(
    g: &GeneratorMatrix,
    p: f64,
    decoder: &DecoderConfig,
    limits: &Limits,
) -> Result<f64> {
    check_p(p)?;
    limits.check_erasures(g.ones())?;
    let book = Codebook::new(g, limits)?;
    let idx: Vec<usize> = (0..book.len()).collect();
    let per = |&i: &usize| exact_error_given(g, &book, i, p, decoder, limits);
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        idx.par_iter().map(per).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = idx.iter().map(per).collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / book.len() as f64)
}

/// For each codebook index `j`, the probability that the minimum-distance
/// decoder lands on `c_j` (uniquely or inside a tie) when `c_sent` was
/// encoded.
pub fn exact_pairwise_row(
    g: &GeneratorMatrix,
    book: &Codebook,
    sent: usize,
    p: f64,
    limits: &Limits,
) -> Result<Vec<f64>> {
    check_p(p)?;
    let mut row = vec![0.0; book.len()];
    for_each_output(g, book, sent, p, limits, |r, w| {
        for &j in book.md_decode(r)?.candidates() {
            row[j] += w;
        }
        Ok(())
    })?;
    Ok(row)
}

/// Probability that the minimum-distance decoder outputs (or ties on) `c'`
/// when `c` was encoded.
pub fn exact_pairwise(
    g: &GeneratorMatrix,
    p: f64,
    m: &Message,
    m_prime: &Message,
    limits: &Limits,
) -> Result<f64> {
    for (what, x) in [("message length", m), ("message length", m_prime)] {
        if x.len() != g.k() {
            return Err(Error::Dimension {
                what,
                expected: g.k(),
                actual: x.len(),
            });
        }
    }
    let book = Codebook::new(g, limits)?;
    let row = exact_pairwise_row(g, &book, m.to_index() as usize, p, limits)?;
    Ok(row[m_prime.to_index() as usize])
}

fn check_mk(m: u64, k: u64) -> Result<()> {
    if m == 0 || k > m {
        return Err(Error::domain(format!("need 0 <= k <= m and m >= 1, got m={m}, k={k}")));
    }
    Ok(())
}

/// `(e / (pi sqrt 2)) m^m / (k^k (m-k)^(m-k))`.
pub fn stirling_binom_bound(m: u64, k: u64) -> Result<f64> {
    check_mk(m, k)?;
    let (m, k) = (m as f64, k as f64);
    Ok((stirling_sqrt_c().ln() + xlnx(m) - xlnx(k) - xlnx(m - k)).exp())
}

/// `A_{m,k}`: 1 at the endpoints, `m / (k (m-k))` otherwise.
pub fn a_mk(m: u64, k: u64) -> Result<f64> {
    check_mk(m, k)?;
    if k == 0 || k == m {
        return Ok(1.0);
    }
    Ok(m as f64 / (k as f64 * (m - k) as f64))
}
