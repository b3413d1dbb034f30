//! Best-of-N random search over generator matrices.
//!
//! Nothing clever: sample `N` seeded random `k x n` matrices and keep the one
//! with the largest erasure radius and the one with the largest rate bound.

use serde::Serialize;

use crate::bounds::beta_max;
use crate::distance::{eta_max, Radius};
use crate::error::{Error, Result};
use crate::gf2::{GeneratorMatrix, Limits};
use crate::rng::{Substreams, RNG_NAME};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub k: usize,
    pub n: usize,
    pub samples: u64,
    /// Probability that an entry is 1.
    pub density: f64,
    pub seed: u64,
    /// Erasure probability for the rate bound; `None` skips it.
    pub p: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    /// Sample index the matrix came from.
    pub sample: u64,
    pub rows: Vec<String>,
    pub eta_max: Radius,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_bound: Option<RateBound>,
}

/// `-log2 beta_max`, or unbounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBound(pub f64);

impl Serialize for RateBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("unbounded")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub k: usize,
    pub n: usize,
    pub samples: u64,
    pub density: f64,
    pub seed: u64,
    pub rng: &'static str,
    pub best_eta_max: Candidate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_rate_bound: Option<Candidate>,
}

fn radius_key(r: Radius) -> i64 {
    match r {
        Radius::InherentlyAmbiguous => -1,
        Radius::Finite(v) => v as i64,
        Radius::Unbounded => i64::MAX,
    }
}

fn evaluate(cfg: &SearchConfig, streams: &Substreams, s: u64, limits: &Limits) -> Result<Candidate> {
    let mut rng = streams.get(s);
    let g = GeneratorMatrix::random(cfg.k, cfg.n, cfg.density, &mut rng)?;
    let radius = eta_max(&g, limits)?.radius;
    let (beta, rate) = match cfg.p {
        Some(p) => {
            let bm = beta_max(&g, p, limits)?;
            (Some(bm.beta_max), Some(RateBound(bm.rate_bound())))
        }
        None => (None, None),
    };
    Ok(Candidate {
        sample: s,
        rows: g.bits().to_strings(),
        eta_max: radius,
        beta_max: beta,
        rate_bound: rate,
    })
}

/// Samples `cfg.samples` matrices; ties go to the earliest sample.
pub fn random_search(cfg: &SearchConfig, limits: &Limits) -> Result<SearchReport> {
    if cfg.samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    if cfg.k == 0 || cfg.k > cfg.n {
        return Err(Error::Shape { k: cfg.k, n: cfg.n });
    }
    limits.check_codebook(cfg.k)?;
    let streams = Substreams::new(cfg.seed);
    #[cfg(feature = "parallel")]
    let all: Vec<Candidate> = {
        use rayon::prelude::*;
        (0..cfg.samples)
            .into_par_iter()
            .map(|s| evaluate(cfg, &streams, s, limits))
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let all: Vec<Candidate> = (0..cfg.samples)
        .map(|s| evaluate(cfg, &streams, s, limits))
        .collect::<Result<_>>()?;

    let mut best_eta = &all[0];
    let mut best_rate = &all[0];
    for c in &all[1..] {
        if radius_key(c.eta_max) > radius_key(best_eta.eta_max) {
            best_eta = c;
        }
        if let (Some(a), Some(b)) = (c.rate_bound, best_rate.rate_bound) {
            if a.0 > b.0 {
                best_rate = c;
            }
        }
    }
    Ok(SearchReport {
        k: cfg.k,
        n: cfg.n,
        samples: cfg.samples,
        density: cfg.density,
        seed: cfg.seed,
        rng: RNG_NAME,
        best_eta_max: best_eta.clone(),
        best_rate_bound: cfg.p.map(|_| best_rate.clone()),
    })
}
