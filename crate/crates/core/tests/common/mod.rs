//! Reference implementations used as ground truth by the integration tests.
//! They deliberately avoid the library's own algorithms: plain loops,
//! `powf`, exact integer arithmetic.

#![allow(dead_code)]

use std::collections::HashMap;

use encfault_core::rng::substream;
use encfault_core::{BitMatrix, BitVec, GeneratorMatrix};
use rand::Rng;

/// Matrices shipped in `matrices/`.
pub fn bundled() -> Vec<(&'static str, GeneratorMatrix)> {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../matrices");
    ["k2n3", "rep4", "hamming74"]
        .into_iter()
        .map(|name| {
            let text = std::fs::read_to_string(format!("{root}/{name}.txt")).unwrap();
            (name, encfault_core::parse_matrix(&text).unwrap())
        })
        .collect()
}

pub fn matrix_from_index(k: usize, n: usize, idx: u64) -> GeneratorMatrix {
    let mut bits = BitMatrix::zeros(k, n);
    for i in 0..k {
        for j in 0..n {
            if idx >> (i * n + j) & 1 == 1 {
                bits.set(i, j, true);
            }
        }
    }
    GeneratorMatrix::new(bits).unwrap()
}

/// Every `2 x n` matrix for `n <= 4`, then 240 seeded random matrices with
/// `k <= 4`, `k <= n <= 6` and at most 10 ones.
pub fn code_sweep() -> Vec<GeneratorMatrix> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for idx in 0..1u64 << (2 * n) {
            out.push(matrix_from_index(2, n, idx));
        }
    }
    out.extend(random_codes(240, 4, 6, 10, 0x5eed));
    out
}

pub fn random_codes(count: usize, max_k: usize, max_n: usize, max_ones: usize, seed: u64) -> Vec<GeneratorMatrix> {
    let mut rng = substream(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(1..=max_k);
        let n = rng.gen_range(k..=max_n);
        let density = rng.gen_range(0.2..0.8);
        let g = GeneratorMatrix::random(k, n, density, &mut rng).unwrap();
        if g.ones() <= max_ones {
            out.push(g);
        }
    }
    out
}

/// Naive GF(2) product `m G`.
pub fn gf2_mul(m: &BitVec, g: &GeneratorMatrix) -> BitVec {
    BitVec::from_bools((0..g.n()).map(|j| (0..g.k()).filter(|&i| m.get(i) && g.get(i, j)).count() % 2 == 1))
}

/// For each output word reachable from message `m`, the fewest erasures
/// that produce it. Words are packed as integers (bit `j` = position `j`).
pub fn min_erasures_to_outputs(g: &GeneratorMatrix, m: &BitVec) -> HashMap<u64, u32> {
    let mut ones = Vec::new();
    for i in 0..g.k() {
        if m.get(i) {
            for j in 0..g.n() {
                if g.get(i, j) {
                    ones.push((i, j));
                }
            }
        }
    }
    let mut best: HashMap<u64, u32> = HashMap::new();
    for mask in 0u64..1 << ones.len() {
        let mut word = 0u64;
        for j in 0..g.n() {
            let mut parity = false;
            for (b, &(_, col)) in ones.iter().enumerate() {
                if col == j && mask >> b & 1 == 0 {
                    parity = !parity;
                }
            }
            if parity {
                word |= 1 << j;
            }
        }
        let w = mask.count_ones();
        best.entry(word).and_modify(|x| *x = (*x).min(w)).or_insert(w);
    }
    best
}

/// Largest `eta` such that no two distinct messages can be driven to the
/// same output with at most `eta` erasures each.
pub fn brute_force_threshold(g: &GeneratorMatrix) -> i64 {
    let msgs: Vec<BitVec> = (0..1u64 << g.k()).map(|i| BitVec::from_index(g.k(), i)).collect();
    let maps: Vec<HashMap<u64, u32>> = msgs.iter().map(|m| min_erasures_to_outputs(g, m)).collect();
    let mut best = u32::MAX;
    for a in 0..maps.len() {
        for b in a + 1..maps.len() {
            for (r, &wa) in &maps[a] {
                if let Some(&wb) = maps[b].get(r) {
                    best = best.min(wa.max(wb));
                }
            }
        }
    }
    best as i64 - 1
}

pub fn binom(m: u64, k: u64) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Probability that an odd number of `d` independent coins with bias `p`
/// land heads, summed term by term.
pub fn odd_binomial_sum(d: u32, p: f64) -> f64 {
    (1..=d)
        .step_by(2)
        .map(|l| binom(d as u64, l as u64) as f64 * p.powi(l as i32) * (1.0 - p).powi((d - l) as i32))
        .sum()
}

fn psi(x: f64) -> f64 {
    x.powf(x)
}

/// `beta(alpha')` written out directly with `powf`.
pub fn beta_reference(alpha: &[f64; 9], d_star: u32, p: f64, a: f64) -> f64 {
    let pd = odd_binomial_sum(d_star, p);
    let gamma = alpha[0] + alpha[1] + alpha[3] + alpha[4];
    let abar: f64 = alpha[..6].iter().sum();
    let x = a - alpha[2];
    let y = gamma + alpha[2] - a;
    if x < -1e-12 || y < -1e-12 {
        return 0.0;
    }
    let (x, y) = (x.max(0.0), y.max(0.0));
    pd.powf(a) * (1.0 - p).powf(abar - a) * psi(gamma) / (psi(x) * psi(y))
}

/// Maximum of `f` on `[lo, hi]`: a grid of spacing `step`, then golden
/// section search between the neighbours of the best grid point.
pub fn grid_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let steps = ((hi - lo) / step).ceil().max(0.0) as usize;
    let at = |i: usize| (lo + i as f64 * step).min(hi);
    let mut best = (at(0), f(at(0)));
    let mut best_i = 0;
    for i in 1..=steps {
        let x = at(i);
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let mut a = at(best_i.saturating_sub(1));
    let mut b = at((best_i + 1).min(steps));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let mid = (a + b) / 2.0;
    let v = f(mid);
    if v > best.1 {
        best = (mid, v);
    }
    best
}

/// Exact error probability by enumerating per-column flip patterns, each
/// column `j` flipping with probability `P_{d_j^(m)}` independently.
pub fn flip_pattern_error_probability(
    g: &GeneratorMatrix,
    p: f64,
    decide: impl Fn(&BitVec, usize) -> f64,
) -> f64 {
    let k = g.k();
    let n = g.n();
    let mut total = 0.0;
    for mi in 0..1u64 << k {
        let m = BitVec::from_index(k, mi);
        let clean = gf2_mul(&m, g);
        let degs: Vec<u32> = (0..n)
            .map(|j| (0..k).filter(|&i| m.get(i) && g.get(i, j)).count() as u32)
            .collect();
        let live: Vec<usize> = (0..n).filter(|&j| degs[j] > 0).collect();
        for mask in 0u64..1 << live.len() {
            let mut prob = 1.0;
            let mut r = clean.clone();
            for (b, &j) in live.iter().enumerate() {
                let q = odd_binomial_sum(degs[j], p);
                if mask >> b & 1 == 1 {
                    prob *= q;
                    r.flip(j);
                } else {
                    prob *= 1.0 - q;
                }
            }
            total += prob * decide(&r, mi as usize);
        }
    }
    total / (1u64 << k) as f64
}
