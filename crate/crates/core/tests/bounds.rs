mod common;

use encfault_core::bounds::{db_dlambda_sign_term, dbeta_dalpha_sign_term, ln_b_of_lambda, BoundSummary};
use encfault_core::rng::substream;
use encfault_core::*;
use rand::Rng;

fn random_profile<R: Rng>(rng: &mut R) -> AlphaProfile {
    let mut a = [0.0f64; 9];
    for x in a.iter_mut() {
        *x = rng.gen_range(0.01..1.0);
    }
    let s: f64 = a.iter().sum();
    a.iter_mut().for_each(|x| *x /= s);
    let d = rng.gen_range(1..=5);
    let p = rng.gen_range(0.02..0.4);
    AlphaProfile::new(a, AlphaProfile::continuous_alpha0(&a), d, p).unwrap()
}

fn finite_profiles(count: usize, seed: u64) -> Vec<AlphaProfile> {
    let mut rng = substream(seed, 0);
    let mut out = Vec::new();
    while out.len() < count {
        let prof = random_profile(&mut rng);
        if prof.alpha0().is_some() {
            out.push(prof);
        }
    }
    out
}

#[test]
fn interior_identity_holds_at_alpha_star() {
    for prof in finite_profiles(300, 1) {
        let a = prof.alphas();
        let pd = common::odd_binomial_sum(prof.d_star(), prof.p());
        let gamma = a[0] + a[1] + a[3] + a[4];
        let star = a[2] + gamma * pd / (pd + 1.0 - prof.p());
        let lhs = common::beta_reference(a, prof.d_star(), prof.p(), star);
        let rhs = pd.powf(a[2]) * (1.0 - prof.p()).powf(a[5]) * (pd + 1.0 - prof.p()).powf(gamma);
        assert!((lhs - rhs).abs() <= 1e-12, "{lhs} vs {rhs}");
        // and the library agrees wherever alpha* is admissible
        if star >= prof.alpha0().unwrap() {
            let lib = beta_of_alpha_prime(&prof, star).unwrap();
            assert!((lib - rhs).abs() <= 1e-12);
        }
    }
}

#[test]
fn boundary_identity_holds_at_half_sum() {
    for prof in finite_profiles(300, 2) {
        let a = prof.alphas();
        let a0 = (a[1] + a[2] + a[3] + a[6]) / 2.0;
        if a0 < a[2] {
            continue;
        }
        let pd = common::odd_binomial_sum(prof.d_star(), prof.p());
        let q = 1.0 - prof.p();
        let x = (a[1] + a[3] + a[6] - a[2]) / 2.0;
        let y = a[0] + a[4] + (a[1] + a[3] - a[6] + a[2]) / 2.0;
        let psi = |v: f64| v.powf(v);
        let tilde = pd.powf(x) * q.powf(y) * psi(a[0] + a[4] + a[1] + a[3]) / (psi(x) * psi(y));
        let want = pd.powf(a[2]) * q.powf(a[5]) * tilde;
        let got = common::beta_reference(a, prof.d_star(), prof.p(), a0);
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
        let pb = beta_closed_form(&prof);
        if pb.case == BoundCase::BoundaryMax {
            assert!((pb.beta - want).abs() <= 1e-12);
            assert!((pb.beta_tilde.unwrap() - tilde).abs() <= 1e-12);
        }
    }
}

#[test]
fn b_of_lambda_peaks_at_lambda_star() {
    for prof in finite_profiles(200, 3) {
        let a3 = prof.alpha(3);
        let g1 = prof.alpha(2) + prof.alpha(4);
        let g2 = prof.alpha(1) + prof.alpha(5);
        let a0 = prof.alpha0().unwrap();
        let alpha_prime = (a0 + a3 + prof.gamma()) / 2.0;
        let (lo, hi) = prof.lambda_range(alpha_prime).unwrap();
        let star = g1 * (alpha_prime - a3) / (g1 + g2);
        let grid = common::grid_max(|l| ln_b_of_lambda(&prof, alpha_prime, l).unwrap(), lo, hi, 1e-4);
        if star >= lo && star <= hi {
            assert!((grid.0 - star).abs() < 1e-6, "argmax {} vs {star}", grid.0);
            let psi = |v: f64| v.powf(v);
            let closed = psi(prof.gamma()) / (psi(alpha_prime - a3) * psi(prof.gamma() + a3 - alpha_prime));
            let at_star = b_of_lambda(&prof, alpha_prime, star).unwrap();
            assert!((at_star - closed).abs() <= 1e-10 * closed.max(1.0));
        } else {
            // the unconstrained value upper-bounds the feasible maximum
            let psi = |v: f64| v.powf(v);
            let closed = psi(prof.gamma()) / (psi(alpha_prime - a3) * psi(prof.gamma() + a3 - alpha_prime));
            assert!(grid.1.exp() <= closed * (1.0 + 1e-12));
        }
    }
}

#[test]
fn b_derivative_sign_matches_log_ratio() {
    for prof in finite_profiles(100, 4) {
        let a3 = prof.alpha(3);
        let a0 = prof.alpha0().unwrap();
        let alpha_prime = (a0 + a3 + prof.gamma()) / 2.0;
        let (lo, hi) = prof.lambda_range(alpha_prime).unwrap();
        let h = 1e-7;
        let steps = 200;
        for s in 1..steps {
            let l = lo + (hi - lo) * s as f64 / steps as f64;
            if l - h <= lo || l + h >= hi {
                continue;
            }
            let fd = ln_b_of_lambda(&prof, alpha_prime, l + h).unwrap() - ln_b_of_lambda(&prof, alpha_prime, l - h).unwrap();
            let term = db_dlambda_sign_term(&prof, alpha_prime, l);
            if term.abs() > 1e-5 {
                assert_eq!(fd > 0.0, term > 0.0, "lambda={l} fd={fd} term={term}");
            }
        }
    }
}

#[test]
fn beta_derivative_sign_matches_log_ratio_and_flips_at_alpha_star() {
    for prof in finite_profiles(100, 5) {
        let a3 = prof.alpha(3);
        let lo = prof.alpha0().unwrap().max(a3);
        let hi = a3 + prof.gamma();
        let star = prof.alpha_star();
        let h = 1e-7;
        let f = |x: f64| common::beta_reference(prof.alphas(), prof.d_star(), prof.p(), x).ln();
        for s in 1..200 {
            let x = lo + (hi - lo) * s as f64 / 200.0;
            if x - h <= lo || x + h >= hi {
                continue;
            }
            let fd = f(x + h) - f(x - h);
            let term = dbeta_dalpha_sign_term(&prof, x);
            if term.abs() > 1e-5 {
                assert_eq!(fd > 0.0, term > 0.0, "alpha'={x}");
                assert_eq!(term > 0.0, x < star, "sign flip away from alpha* at {x}");
            }
        }
    }
}

#[test]
fn beta_vanishes_as_p_goes_to_zero() {
    let a = [0.1, 0.1, 0.3, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05];
    let mut last = f64::INFINITY;
    for &p in &[0.1, 0.01, 1e-4, 1e-8] {
        let prof = AlphaProfile::new(a, AlphaProfile::continuous_alpha0(&a), 2, p).unwrap();
        let b = beta_closed_form(&prof).beta;
        assert!(b < last);
        last = b;
    }
    assert!(last < 1e-2);
}

#[test]
fn repetition_code_beta_max_matches_grid() {
    let g = parse_matrix("1 4\n1111\n").unwrap();
    let bm = beta_max(&g, 0.1, &Limits::default()).unwrap();
    let book = enumerate_codebook(&g, &Limits::default()).unwrap();
    let mut best: f64 = 0.0;
    for (i, c) in book.iter().enumerate() {
        for (j, c2) in book.iter().enumerate() {
            if i == j {
                continue;
            }
            let bp = block_profile(c, c2).unwrap();
            if let Eta::Finite(e) = eta0_directed(&bp) {
                let a = bp.alphas();
                let a0 = e as f64 / 4.0;
                let abar: f64 = a[..6].iter().sum();
                best = best.max(common::grid_max(|x| common::beta_reference(&a, 1, 0.1, x), a0, abar, 1e-4).1);
            }
        }
    }
    assert!((bm.beta_max - best).abs() <= 1e-6, "{} vs {best}", bm.beta_max);
}

#[test]
fn beta_max_dominates_every_pair() {
    for g in common::random_codes(30, 3, 6, 12, 9) {
        let bm = beta_max(&g, 0.1, &Limits::default()).unwrap();
        let rep = bound_report(&g, 0.1, &Limits::default()).unwrap();
        for rec in &rep.pairs {
            assert!(rec.beta <= bm.beta_max);
        }
        assert_eq!(rep.summary.beta_max, bm.beta_max);
    }
}

fn replicate(g: &GeneratorMatrix, t: usize) -> GeneratorMatrix {
    let rows: Vec<String> = g
        .bits()
        .to_strings()
        .iter()
        .map(|r| r.chars().flat_map(|ch| std::iter::repeat(ch).take(t)).collect())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    GeneratorMatrix::from_strs(&refs).unwrap()
}

#[test]
fn rate_bound_is_invariant_under_even_column_replication() {
    let lim = Limits::default();
    for g in common::random_codes(30, 3, 5, 10, 13) {
        let a = beta_max(&replicate(&g, 2), 0.1, &lim).unwrap();
        let b = beta_max(&replicate(&g, 6), 0.1, &lim).unwrap();
        assert!((a.ln_beta_max - b.ln_beta_max).abs() <= 1e-12 || a.beta_max == b.beta_max);
    }
}

#[test]
fn odd_half_sums_make_replication_visible() {
    // c = (1, 1) and c' = (s, 1): a single block-2 position, so eta0 is
    // ceil(1/2) = 1 of 2 positions; doubling the columns gives 1 of 4
    let g = GeneratorMatrix::from_strs(&["11", "10"]).unwrap();
    let m = BitVec::parse("10").unwrap();
    let m2 = BitVec::parse("11").unwrap();
    let one = pair_bound(&g, 0.1, &m, &m2).unwrap();
    let two = pair_bound(&replicate(&g, 2), 0.1, &m, &m2).unwrap();
    let four = pair_bound(&replicate(&g, 4), 0.1, &m, &m2).unwrap();
    assert_eq!(one.alpha0, Some(0.5));
    assert_eq!(two.alpha0, Some(0.25));
    assert_eq!(four.alpha0, Some(0.25));
}

#[test]
fn pe_bound_decays_below_the_rate_threshold() {
    let beta: f64 = 0.3;
    let rate = 0.5 * -beta.log2();
    let mut last = f64::INFINITY;
    for n in (50..=1000).step_by(50) {
        let v = pe_upper_bound(n, rate, beta);
        assert!(v < last);
        last = v;
    }
    assert!(last < 1e-100);
}

#[test]
fn interior_binomials_respect_the_stirling_bound() {
    for m in 2..=60u64 {
        for k in 1..m {
            assert!((common::binom(m, k) as f64) <= stirling_binom_bound(m, k).unwrap());
        }
    }
    assert_eq!(a_mk(2, 1).unwrap(), 2.0);
}

#[test]
fn unbounded_rate_renders_as_text() {
    let s = BoundSummary {
        beta_max: 0.0,
        rate_bound: f64::INFINITY,
        eta_max: Radius::Finite(2),
    };
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v["rate_bound"], "unbounded");
    assert_eq!(v["eta_max"], 2);
}

#[test]
fn bound_report_fields() {
    let g = parse_matrix("2 3\n101\n011\n").unwrap();
    let rep = bound_report(&g, 0.1, &Limits::default()).unwrap();
    assert_eq!(rep.pairs.len(), 12);
    let v = serde_json::to_value(&rep).unwrap();
    let rec = &v["pairs"][0];
    for key in ["m", "m_prime", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9", "eta0_directed", "case", "beta", "minus_log2_beta"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    // 00 -> anything nonzero needs a hard zero to become 1
    assert_eq!(rec["eta0_directed"], "inf");
    assert_eq!(rec["minus_log2_beta"], "inf");
    assert_eq!(v["summary"]["eta_max"], 0);
}
