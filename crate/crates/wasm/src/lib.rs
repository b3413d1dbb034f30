//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes plain strings and numbers and returns JSON text, so the
//! page needs no generated TypeScript types. The `*_json` functions hold the
//! logic and run natively in tests.

use encfault_core::{
    bit_flip_prob, bound_report, confusion_witness, enumerate_codebook, parse_matrix, BoundReport,
    GeneratorMatrix, Limits, Radius,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Tighter than the library defaults so a careless input cannot hang the tab.
const LIMITS: Limits = Limits {
    max_message_bits: 12,
    max_erasure_ones: 20,
};

#[derive(Serialize)]
struct Witness {
    m: String,
    m_prime: String,
    c: String,
    c_prime: String,
    r: String,
    e1: Vec<(usize, usize)>,
    e2: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct Analysis {
    k: usize,
    n: usize,
    rate: f64,
    column_degrees: Vec<u32>,
    d_star: u32,
    eta_max: Radius,
    witness: Option<Witness>,
}

fn load(text: &str) -> Result<GeneratorMatrix, String> {
    parse_matrix(text).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn analyze_json(matrix: &str) -> Result<String, String> {
    let g = load(matrix)?;
    let book = enumerate_codebook(&g, &LIMITS).map_err(|e| e.to_string())?;
    let radius = encfault_core::distance::eta_max_of_codebook(&book);
    let witness = match radius.pair {
        Some((i, j)) => {
            let w = confusion_witness(&book[i], &book[j], &g).map_err(|e| e.to_string())?;
            Some(Witness {
                m: book[i].message().to_string(),
                m_prime: book[j].message().to_string(),
                c: book[i].render(),
                c_prime: book[j].render(),
                r: w.r.to_string(),
                e1: w.e1.positions(),
                e2: w.e2.positions(),
            })
        }
        None => None,
    };
    to_json(&Analysis {
        k: g.k(),
        n: g.n(),
        rate: g.rate(),
        column_degrees: g.column_degrees().to_vec(),
        d_star: g.max_degree(),
        eta_max: radius.radius,
        witness,
    })
}

/// `P_d` for `d = 0..=dmax`.
pub fn flip_curve(p: f64, dmax: u32) -> Result<Vec<f64>, String> {
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("p = {p} is not a probability"));
    }
    if dmax > 4096 {
        return Err("dmax is capped at 4096".into());
    }
    Ok((0..=dmax).map(|d| bit_flip_prob(d, p)).collect())
}

pub fn bound_json(matrix: &str, p: f64) -> Result<String, String> {
    let g = load(matrix)?;
    let report: BoundReport = bound_report(&g, p, &LIMITS).map_err(|e| e.to_string())?;
    to_json(&report)
}

#[wasm_bindgen]
pub fn analyze(matrix: &str) -> Result<String, JsError> {
    analyze_json(matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn flip_probabilities(p: f64, dmax: u32) -> Result<Vec<f64>, JsError> {
    flip_curve(p, dmax).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bound(matrix: &str, p: f64) -> Result<String, JsError> {
    bound_json(matrix, p).map_err(|e| JsError::new(&e))
}
