use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use encfault_core::bounds::PairRecord;
use encfault_core::rng::substream;
use encfault_core::search::{random_search, Candidate, SearchConfig, SearchReport};
use encfault_core::*;
use serde::Serialize;

use crate::{
    BoundArgs, BoundTable, ChannelKind, DecoderArg, GenArgs, GlobalArgs, MatrixArg, OracleArgs,
    PolicyArg, SearchArgs, SimulateArgs, TiesArg,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Matrix { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Capacity { .. })
            | CliError::Matrix {
                source: Error::Capacity { .. },
                ..
            } => 3,
            _ => 2,
        }
    }
}

/// A finished command result in all three output formats.
pub trait Report {
    fn json(&self) -> String;
    fn csv(&self) -> String;
    fn text(&self) -> String;
    /// `false` turns into exit code 1.
    fn passed(&self) -> bool {
        true
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn load(path: &Path) -> std::result::Result<GeneratorMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_matrix(&text).map_err(|source| CliError::Matrix {
        path: path.to_owned(),
        source,
    })
}

/// Real numbers that may be infinite; JSON has no infinity.
fn ext(x: f64) -> serde_json::Value {
    if x.is_infinite() {
        serde_json::Value::String(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        serde_json::json!(x)
    }
}

fn rate_text(x: f64) -> String {
    if x.is_infinite() {
        "unbounded".into()
    } else {
        format!("{x}")
    }
}

#[derive(Serialize, Clone, Copy)]
pub struct Profile {
    w1: u64,
    w2: u64,
    w3: u64,
    w4: u64,
    w5: u64,
    w6: u64,
    w7: u64,
    w8: u64,
    w9: u64,
}

impl From<&BlockProfile> for Profile {
    fn from(bp: &BlockProfile) -> Self {
        let [w1, w2, w3, w4, w5, w6, w7, w8, w9] = bp.counts();
        Profile {
            w1,
            w2,
            w3,
            w4,
            w5,
            w6,
            w7,
            w8,
            w9,
        }
    }
}

#[derive(Serialize)]
pub struct Witness {
    r: String,
    /// `(row, column)` positions erased when `m` is sent.
    e1: Vec<(usize, usize)>,
    /// Positions erased when `m_prime` is sent.
    e2: Vec<(usize, usize)>,
    erasures: usize,
}

#[derive(Serialize)]
pub struct ClosestPair {
    m: String,
    m_prime: String,
    c: String,
    c_prime: String,
    profile: Profile,
    eta0_forward: Eta,
    eta0_backward: Eta,
    eta0: u64,
    witness: Witness,
}

#[derive(Serialize)]
pub struct AnalyzeReport {
    command: &'static str,
    seed: u64,
    matrix: String,
    k: usize,
    n: usize,
    rate: f64,
    column_degrees: Vec<u32>,
    d_star: u32,
    eta_max: Radius,
    closest_pair: Option<ClosestPair>,
}

pub fn analyze(a: &MatrixArg, g_args: &GlobalArgs) -> std::result::Result<AnalyzeReport, CliError> {
    let g = load(&a.matrix)?;
    let book = enumerate_codebook(&g, &g_args.limits())?;
    let radius = distance::eta_max_of_codebook(&book);
    let closest_pair = match radius.pair {
        Some((i, j)) => {
            let (c, c2) = (&book[i], &book[j]);
            let bp = block_profile(c, c2)?;
            let w = confusion_witness(c, c2, &g)?;
            Some(ClosestPair {
                m: c.message().to_string(),
                m_prime: c2.message().to_string(),
                c: c.render(),
                c_prime: c2.render(),
                profile: Profile::from(&bp),
                eta0_forward: eta0_directed(&bp),
                eta0_backward: eta0_directed(&bp.reversed()),
                eta0: eta0_undirected(&bp),
                witness: Witness {
                    r: w.r.to_string(),
                    erasures: w.e1.weight().max(w.e2.weight()),
                    e1: w.e1.positions(),
                    e2: w.e2.positions(),
                },
            })
        }
        None => None,
    };
    Ok(AnalyzeReport {
        command: "analyze",
        seed: g_args.seed,
        matrix: a.matrix.display().to_string(),
        k: g.k(),
        n: g.n(),
        rate: g.rate(),
        column_degrees: g.column_degrees().to_vec(),
        d_star: g.max_degree(),
        eta_max: radius.radius,
        closest_pair,
    })
}

fn positions(ps: &[(usize, usize)]) -> String {
    let v: Vec<String> = ps.iter().map(|(i, j)| format!("({i},{j})")).collect();
    v.join(" ")
}

impl Report for AnalyzeReport {
    fn json(&self) -> String {
        to_json(self)
    }

    fn csv(&self) -> String {
        let mut s = String::from("k,n,rate,d_star,eta_max,m,m_prime,eta0,witness_r,seed\n");
        let (m, m2, eta0, r) = match &self.closest_pair {
            Some(p) => (p.m.as_str(), p.m_prime.as_str(), p.eta0.to_string(), p.witness.r.as_str()),
            None => ("", "", String::new(), ""),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{m},{m2},{eta0},{r},{}",
            self.k, self.n, self.rate, self.d_star, self.eta_max, self.seed
        );
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "matrix          {}", self.matrix);
        let _ = writeln!(s, "k, n, R         {}, {}, {:.6}", self.k, self.n, self.rate);
        let degs: Vec<String> = self.column_degrees.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "column degrees  {}", degs.join(" "));
        let _ = writeln!(s, "d*              {}", self.d_star);
        let _ = writeln!(s, "eta_max         {}", self.eta_max);
        if let Some(p) = &self.closest_pair {
            let _ = writeln!(s, "closest pair    m = {}  m' = {}", p.m, p.m_prime);
            let _ = writeln!(s, "  c             {}", p.c);
            let _ = writeln!(s, "  c'            {}", p.c_prime);
            let pr = &p.profile;
            let _ = writeln!(
                s,
                "  w1..w9        {} {} {} {} {} {} {} {} {}",
                pr.w1, pr.w2, pr.w3, pr.w4, pr.w5, pr.w6, pr.w7, pr.w8, pr.w9
            );
            let _ = writeln!(
                s,
                "  eta0          {} (c -> c' {}, c' -> c {})",
                p.eta0, p.eta0_forward, p.eta0_backward
            );
            let _ = writeln!(s, "witness r       {}", p.witness.r);
            let _ = writeln!(s, "  E1            {}", positions(&p.witness.e1));
            let _ = writeln!(s, "  E2            {}", positions(&p.witness.e2));
        }
        let _ = writeln!(s, "seed            {}", self.seed);
        s
    }
}

#[derive(Serialize)]
pub struct CurvePoint {
    n: usize,
    pe_bound: f64,
}

#[derive(Serialize)]
pub struct BoundCliReport {
    command: &'static str,
    seed: u64,
    matrix: String,
    #[serde(flatten)]
    report: BoundReport,
    curve_rate: f64,
    pe_curve: Vec<CurvePoint>,
    #[serde(skip)]
    table: BoundTable,
}

pub fn bound(a: &BoundArgs, g_args: &GlobalArgs) -> std::result::Result<BoundCliReport, CliError> {
    let g = load(&a.matrix)?;
    let report = bound_report(&g, a.p, &g_args.limits())?;
    let rate = a.rate.unwrap_or(g.rate());
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(CliError::Usage(format!("rate = {rate} must be a non-negative number")));
    }
    let pe_curve = a
        .n_list
        .iter()
        .map(|&n| CurvePoint {
            n,
            pe_bound: pe_upper_bound(n, rate, report.summary.beta_max),
        })
        .collect();
    Ok(BoundCliReport {
        command: "bound",
        seed: g_args.seed,
        matrix: a.matrix.display().to_string(),
        report,
        curve_rate: rate,
        pe_curve,
        table: a.table,
    })
}

fn case_name(r: &PairRecord) -> String {
    serde_json::to_value(r.case)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

impl Report for BoundCliReport {
    fn json(&self) -> String {
        to_json(self)
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        match self.table {
            BoundTable::Pairs => {
                s.push_str("m,m_prime,w1,w2,w3,w4,w5,w6,w7,w8,w9,eta0_directed,case,beta,minus_log2_beta,seed\n");
                for r in &self.report.pairs {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        r.m,
                        r.m_prime,
                        r.w1,
                        r.w2,
                        r.w3,
                        r.w4,
                        r.w5,
                        r.w6,
                        r.w7,
                        r.w8,
                        r.w9,
                        r.eta0_directed,
                        case_name(r),
                        r.beta,
                        ext(r.minus_log2_beta).to_string().trim_matches('"'),
                        self.seed,
                    );
                }
            }
            BoundTable::Curve => {
                s.push_str("n,rate,pe_bound,seed\n");
                for pt in &self.pe_curve {
                    let _ = writeln!(s, "{},{},{},{}", pt.n, self.curve_rate, pt.pe_bound, self.seed);
                }
            }
        }
        s
    }

    fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "matrix      {}", self.matrix);
        let _ = writeln!(s, "k, n, R     {}, {}, {:.6}", r.k, r.n, r.rate);
        let _ = writeln!(s, "p, d*       {}, {}", r.p, r.d_star);
        let _ = writeln!(s, "{:<6} {:<6} {:>26} {:>5} {:<12} {:>12} {:>10}", "m", "m'", "w1..w9", "eta0", "case", "beta", "-log2 b");
        for pr in &r.pairs {
            let w = format!(
                "{} {} {} {} {} {} {} {} {}",
                pr.w1, pr.w2, pr.w3, pr.w4, pr.w5, pr.w6, pr.w7, pr.w8, pr.w9
            );
            let _ = writeln!(
                s,
                "{:<6} {:<6} {:>26} {:>5} {:<12} {:>12.5e} {:>10}",
                pr.m,
                pr.m_prime,
                w,
                pr.eta0_directed.to_string(),
                case_name(pr),
                pr.beta,
                rate_text(pr.minus_log2_beta).chars().take(10).collect::<String>()
            );
        }
        let _ = writeln!(s, "beta_max    {:e}", r.summary.beta_max);
        let _ = writeln!(s, "rate bound  {}", rate_text(r.summary.rate_bound));
        let _ = writeln!(s, "eta_max     {}", r.summary.eta_max);
        let _ = writeln!(s, "P_e bound at R = {}", self.curve_rate);
        for pt in &self.pe_curve {
            let _ = writeln!(s, "  n = {:<8} {:e}", pt.n, pt.pe_bound);
        }
        let _ = writeln!(s, "seed        {}", self.seed);
        s
    }
}

pub struct SimulateOutput {
    report: SimulationReport,
}

pub fn simulate(a: &SimulateArgs, g_args: &GlobalArgs) -> std::result::Result<SimulateOutput, CliError> {
    let g = load(&a.matrix)?;
    let limits = g_args.limits();
    let channel = match a.channel {
        ChannelKind::Erasure => ChannelModel::erasure(a.p.expect("required by clap"))?,
        ChannelKind::Insertion => {
            ChannelModel::insertion(a.p0.expect("required by clap"), a.p1.expect("required by clap"))?
        }
    };
    let decoder = match a.decoder {
        DecoderArg::Md => DecoderConfig::md(),
        DecoderArg::Worstcase => {
            let budget = match a.budget {
                Some(b) => b,
                None => eta_max(&g, &limits)?.radius.as_i64().unwrap_or(0).max(0) as u64,
            };
            DecoderConfig::worstcase(budget)
        }
    };
    let decoder = decoder.with_ties(match a.ties {
        TiesArg::Error => TiePolicy::CountAsError,
        TiesArg::Uniform => TiePolicy::UniformRandom,
    });
    let policy = match a.policy {
        PolicyArg::Uniform => MessagePolicy::UniformRandom,
        PolicyArg::Cycle => MessagePolicy::ExhaustiveCycle,
        PolicyArg::Fixed => {
            let text = a.message.as_deref().expect("required by clap");
            let m = BitVec::parse(text)
                .map_err(|pos| CliError::Usage(format!("--message: bad bit at position {pos}")))?;
            MessagePolicy::Fixed(m)
        }
    };
    let cfg = SimulationConfig {
        channel,
        decoder,
        policy,
        trials: a.trials,
        seed: g_args.seed,
    };
    Ok(SimulateOutput {
        report: monte_carlo(&g, &cfg, &limits)?,
    })
}

impl Report for SimulateOutput {
    fn json(&self) -> String {
        to_json(&self.report)
    }

    fn csv(&self) -> String {
        format!("{}\n{}\n", SimulationRecord::CSV_HEADER, self.report.record().csv_row())
    }

    fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "channel     {} {:?}", r.channel.name(), r.channel);
        let _ = writeln!(s, "decoder     {}", r.decoder);
        let _ = writeln!(s, "policy      {}", r.policy);
        let _ = writeln!(s, "errors      {} / {}", r.errors, r.trials);
        let _ = writeln!(s, "error rate  {:.6e}  95% CI [{:.6e}, {:.6e}]", r.error_rate, r.ci_low, r.ci_high);
        let _ = writeln!(s, "seed        {} ({})", r.seed, r.rng);
        s
    }
}

#[derive(Serialize)]
pub struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
pub struct OracleReport {
    command: &'static str,
    seed: u64,
    matrix: String,
    p: f64,
    trials: u64,
    checks: Vec<Check>,
    passed: bool,
}

/// Normal quantile for the oracle's Monte Carlo interval (99.9%). A 95%
/// interval would flag one correct run in twenty.
const ORACLE_Z: f64 = 3.290_526_731_491_926;

pub fn oracle(a: &OracleArgs, g_args: &GlobalArgs) -> std::result::Result<OracleReport, CliError> {
    let g = load(&a.matrix)?;
    let limits = g_args.limits();
    let mut checks = Vec::new();

    let radius = eta_max(&g, &limits)?.radius;
    let threshold = ambiguity_threshold(&g, &limits)?;
    let formula = radius.as_i64();
    checks.push(Check {
        name: "ambiguity_vs_eta_max",
        passed: formula == Some(threshold),
        detail: format!("eta_max = {radius}, exhaustive ambiguity threshold = {threshold}"),
    });

    let decoder = DecoderConfig::md();
    let exact = exact_error_probability(&g, a.p, &decoder, &limits)?;
    let mc = monte_carlo(
        &g,
        &SimulationConfig {
            channel: ChannelModel::erasure(a.p)?,
            decoder,
            policy: MessagePolicy::UniformRandom,
            trials: a.trials,
            seed: g_args.seed,
        },
        &limits,
    )?;
    let (lo, hi) = wilson_interval(mc.errors, mc.trials, ORACLE_Z);
    checks.push(Check {
        name: "exact_vs_monte_carlo",
        passed: lo <= exact && exact <= hi,
        detail: format!(
            "exact P_e = {exact:.6e}, simulated {:.6e} with 99.9% CI [{lo:.6e}, {hi:.6e}]",
            mc.error_rate
        ),
    });

    let book = Codebook::new(&g, &limits)?;
    let n = g.n();
    let mut violations = 0usize;
    let mut worst: Option<(f64, String)> = None;
    let mut pairs = 0usize;
    for i in 0..book.len() {
        let row = bounds::exact_pairwise_row(&g, &book, i, a.p, &limits)?;
        let m = book.get(i).message();
        for (j, &pe) in row.iter().enumerate() {
            if j == i {
                continue;
            }
            pairs += 1;
            let m2 = book.get(j).message();
            let pb = pair_bound(&g, a.p, m, m2)?;
            let bnd = pairwise_bound(n, pb.beta);
            if pe > bnd {
                violations += 1;
                let ratio = pe / bnd;
                if worst.as_ref().is_none_or(|(r, _)| ratio > *r) {
                    worst = Some((ratio, format!("{m} -> {m2}: exact {pe:.4e} > bound {bnd:.4e}")));
                }
            }
        }
    }
    let mut detail = format!("{violations} of {pairs} ordered pairs exceed n(n+1)C beta^n");
    if let Some((_, w)) = &worst {
        let _ = write!(detail, "; worst {w}");
    }
    checks.push(Check {
        name: "pairwise_vs_bound",
        passed: violations == 0,
        detail,
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(OracleReport {
        command: "oracle",
        seed: g_args.seed,
        matrix: a.matrix.display().to_string(),
        p: a.p,
        trials: a.trials,
        checks,
        passed,
    })
}

impl Report for OracleReport {
    fn json(&self) -> String {
        to_json(self)
    }

    fn csv(&self) -> String {
        let mut s = String::from("check,passed,detail,seed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},\"{}\",{}", c.name, c.passed, c.detail.replace('"', "'"), self.seed);
        }
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(s, "matrix {}  p = {}  seed = {}", self.matrix, self.p, self.seed);
        s
    }

    fn passed(&self) -> bool {
        self.passed
    }
}

#[derive(Serialize)]
pub struct GenReport {
    command: &'static str,
    seed: u64,
    k: usize,
    n: usize,
    density: f64,
    rows: Vec<String>,
    #[serde(skip)]
    text: String,
}

/// Uses the same stream as sample 0 of `search` with equal settings.
pub fn gen(a: &GenArgs, g_args: &GlobalArgs) -> std::result::Result<GenReport, CliError> {
    let mut rng = substream(g_args.seed, 0);
    let g = GeneratorMatrix::random(a.k, a.n, a.density, &mut rng)?;
    let text = format_matrix(&g);
    if let Some(path) = &a.out {
        fs::write(path, &text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(GenReport {
        command: "gen",
        seed: g_args.seed,
        k: a.k,
        n: a.n,
        density: a.density,
        rows: g.bits().to_strings(),
        text,
    })
}

impl Report for GenReport {
    fn json(&self) -> String {
        to_json(self)
    }

    fn csv(&self) -> String {
        let mut s = String::from("row,bits,seed\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = writeln!(s, "{i},{row},{}", self.seed);
        }
        s
    }

    /// The matrix file itself; the format has no room for the seed, so it
    /// goes to stderr.
    fn text(&self) -> String {
        eprintln!("seed {}", self.seed);
        self.text.clone()
    }
}

pub struct SearchOutput {
    report: SearchReport,
}

pub fn search(a: &SearchArgs, g_args: &GlobalArgs) -> std::result::Result<SearchOutput, CliError> {
    let cfg = SearchConfig {
        k: a.k,
        n: a.n,
        samples: a.samples,
        density: a.density,
        seed: g_args.seed,
        p: a.p,
    };
    Ok(SearchOutput {
        report: random_search(&cfg, &g_args.limits())?,
    })
}

fn candidate_csv(which: &str, c: &Candidate, seed: u64) -> String {
    let beta = c.beta_max.map(|b| b.to_string()).unwrap_or_default();
    let rate = c.rate_bound.map(|r| rate_text(r.0)).unwrap_or_default();
    format!("{which},{},{},{beta},{rate},{},{seed}\n", c.sample, c.eta_max, c.rows.join(";"))
}

impl Report for SearchOutput {
    fn json(&self) -> String {
        to_json(&self.report)
    }

    fn csv(&self) -> String {
        let mut s = String::from("best_by,sample,eta_max,beta_max,rate_bound,rows,seed\n");
        s.push_str(&candidate_csv("eta_max", &self.report.best_eta_max, self.report.seed));
        if let Some(c) = &self.report.best_rate_bound {
            s.push_str(&candidate_csv("rate_bound", c, self.report.seed));
        }
        s
    }

    fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "{} samples of {}x{} at density {}", r.samples, r.k, r.n, r.density);
        let mut show = |label: &str, c: &Candidate| {
            let _ = writeln!(s, "best {label}: sample {}  eta_max = {}", c.sample, c.eta_max);
            if let Some(rb) = c.rate_bound {
                let _ = writeln!(s, "  rate bound {}", rate_text(rb.0));
            }
            for row in &c.rows {
                let _ = writeln!(s, "  {row}");
            }
        };
        show("eta_max", &r.best_eta_max);
        if let Some(c) = &r.best_rate_bound {
            show("rate bound", c);
        }
        let _ = writeln!(s, "seed {} ({})", r.seed, r.rng);
        s
    }
}
