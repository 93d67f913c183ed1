//! `harmsum`: constructions and checks for signed harmonic sums.
//!
//! JSON output is an experiment record with a top-level `"schema": 1`.
//! CSV columns: `sieve --table rho` writes `u,rho_u`; `sieve --table psi`
//! writes `x,y,psi`; `density --csv` writes `t,log_abs_rho,bound_log`.
//!
//! Exit status: 0 on success, 1 when a construction is infeasible or misses
//! its threshold, 2 on usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use harmonic_core::constructor::{
    dense_set_signs, flip_to_target, greedy_toward, mitm_optimize_with_eta, randomized_search, report_for,
    verify_signs, DenseConfig, Method, DEFAULT_FREE,
};
use harmonic_core::density::{
    decay_certificate, density_profile, eta_budget, exhaustive_probability, log_spaced_samples, mc_probability,
    LogValue, EXHAUSTIVE_MAX,
};
use harmonic_core::multiplicative::{
    geometric_scales, locality_violations, multiplicativity_violations, theorem1_pipeline, PipelineConfig,
    PipelineMode, SeedRule,
};
use harmonic_core::numerics::precision_for_log10;
use harmonic_core::sieve::{build_sieve, DickmanTable, DICKMAN_STEPS};
use harmonic_core::{BigFixed, Comparison, Error, ExactRational, SetSpec, SignSequence, SupportSet};

#[derive(Parser, Debug)]
#[command(name = "harmsum", version, about = "Tiny signed harmonic sums, rigorously verified")]
#[command(args_override_self = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Starting precision, in bits, for interval evaluation.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// JSON object whose keys mirror the long flags; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ψ(x, y) counts or Dickman ρ(u) values as CSV.
    Sieve(SieveArgs),
    /// Characteristic-function profile and decay certificate.
    Density(DensityArgs),
    /// Signs with a tiny signed harmonic sum over a set.
    Construct(ConstructArgs),
    /// A completely multiplicative function with tiny logarithmic means.
    Pipeline(PipelineArgs),
    /// Re-evaluates a construction report from its signs alone.
    Verify(VerifyArgs),
    /// Exact minimum over all sign patterns of a small set.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Table {
    Psi,
    Rho,
}

#[derive(Args, Debug, Serialize)]
struct SieveArgs {
    #[arg(long, value_enum, default_value = "psi")]
    table: Table,
    /// Comma-separated x values.
    #[arg(long, default_value = "1000000", value_delimiter = ',')]
    x: Vec<u64>,
    /// Comma-separated y values.
    #[arg(long, default_value = "1000", value_delimiter = ',')]
    y: Vec<u64>,
    #[arg(long, default_value_t = 4.0)]
    u_max: f64,
    #[arg(long, default_value_t = 0.1)]
    u_step: f64,
    /// Integration steps per unit of u.
    #[arg(long, default_value_t = DICKMAN_STEPS)]
    steps: usize,
}

#[derive(Args, Debug, Serialize)]
struct DensityArgs {
    /// Set specification: `a..b`, `mod m: r1,r2`, `@file` or `all`.
    #[arg(long)]
    set: String,
    /// Scale N; the set is cut to [1, N].
    #[arg(long)]
    n: u64,
    /// Basis B ⊆ A as a set specification, or `primes` for the primes of A.
    #[arg(long, default_value = "primes")]
    basis: String,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value = "0")]
    x0: String,
    /// Constant in T₀ = min{1/(4x₀), cN/4}.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Sample points for the decay certificate.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Upper end of the sampling window; defaults to max(T, N²).
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    grid_points: usize,
    /// Write the profile here as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also estimate P(|X_A − x₀| ≤ η).
    #[arg(long)]
    eta: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    mc_samples: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Greedy,
    Flip,
    Mitm,
    Randomized,
    Pipeline,
}

#[derive(Args, Debug, Serialize)]
#[group(id = "source", required = true, multiple = false)]
struct SetSource {
    #[arg(long, group = "source")]
    set: Option<String>,
    /// Inclusive interval `a..b`.
    #[arg(long, group = "source")]
    interval: Option<String>,
    /// Residue classes `m: r1,r2,...`.
    #[arg(long, group = "source")]
    residues: Option<String>,
    /// File with one integer per line.
    #[arg(long, group = "source")]
    file: Option<PathBuf>,
}

impl SetSource {
    fn spec(&self) -> anyhow::Result<SetSpec> {
        Ok(match (&self.set, &self.interval, &self.residues, &self.file) {
            (Some(s), ..) | (_, Some(s), ..) => s.parse()?,
            (_, _, Some(r), _) => format!("mod {r}").parse()?,
            (_, _, _, Some(f)) => SetSpec::from_file(f)?,
            _ => bail!("no set given"),
        })
    }
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[command(flatten)]
    source: SetSource,
    /// Scale N; defaults to the end of an interval or the largest listed value.
    #[arg(long)]
    n: Option<u64>,
    /// Density of the set in [1, N]; defaults to the observed density.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    eps0: f64,
    /// Threshold for the verified sum.
    #[arg(long)]
    eta: Option<String>,
    /// Target value of the sum (the pipeline always aims at 0).
    #[arg(long, default_value = "0")]
    target: String,
    #[arg(long, value_enum, default_value = "pipeline")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_FREE)]
    max_free: usize,
    /// Draws for randomized search.
    #[arg(long, default_value_t = 1_000_000)]
    iters: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Strict,
    Relaxed,
}

#[derive(Args, Debug, Serialize)]
struct PipelineArgs {
    /// `liouville`, `one`, `chi3` or `liouville+p1,p2,...`.
    #[arg(long, default_value = "liouville")]
    seed_rule: String,
    /// Crossing constant, or `auto` to search for one.
    #[arg(long, default_value = "3")]
    c_cross: String,
    #[arg(long, default_value_t = 1_000_000)]
    crossing_limit: u64,
    #[arg(long, default_value_t = 2000)]
    scale_start: u64,
    #[arg(long, default_value_t = 8)]
    scale_factor: u64,
    #[arg(long, default_value_t = 2)]
    num_scales: usize,
    #[arg(long, value_enum, default_value = "relaxed")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_FREE)]
    max_free: usize,
    #[arg(long, default_value = "1/10000000000")]
    eta: String,
    /// Random pairs for the multiplicativity check.
    #[arg(long, default_value_t = 100_000)]
    pairs: usize,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    /// JSON file holding a construction report (or a record containing one).
    #[arg(long)]
    signs: PathBuf,
    /// Replaces the report's threshold.
    #[arg(long)]
    eta: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct OracleArgs {
    #[arg(long)]
    set: String,
    /// Upper end for unbounded sets.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value = "0")]
    x0: String,
}

#[derive(Serialize)]
struct ExperimentRecord<'a> {
    schema: u32,
    command: &'a [String],
    config: Value,
    rng_seed: u64,
    reports: Value,
    version: &'static str,
    wall_time_ms: u64,
}

/// Outcome of a subcommand: its reports and whether it met its goal.
struct Outcome {
    reports: Value,
    success: bool,
}

fn rational(s: &str) -> anyhow::Result<ExactRational> {
    s.parse().with_context(|| format!("bad rational {s:?}"))
}

fn upper_end(spec: &SetSpec, n: Option<u64>) -> anyhow::Result<u64> {
    match (n, spec) {
        (Some(n), _) => Ok(n),
        (None, SetSpec::Interval { hi, .. }) => Ok(*hi),
        (None, SetSpec::Explicit(s)) => s.max().ok_or_else(|| anyhow!("empty set")),
        _ => bail!("--n is required for unbounded sets"),
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run_sieve(a: &SieveArgs) -> anyhow::Result<String> {
    let mut csv = String::new();
    match a.table {
        Table::Rho => {
            if !(a.u_step > 0.0) {
                bail!("--u-step must be positive");
            }
            let table = DickmanTable::new(a.u_max, a.steps)?;
            csv.push_str("u,rho_u\n");
            let count = (a.u_max / a.u_step + 1e-9).floor() as usize;
            for i in 0..=count {
                let u = i as f64 * a.u_step;
                csv.push_str(&format!("{u:.6},{:.12e}\n", table.rho(u)?));
            }
        }
        Table::Psi => {
            let top = a.x.iter().copied().max().unwrap_or(1);
            let sieve = build_sieve(top)?;
            csv.push_str("x,y,psi\n");
            for &x in &a.x {
                for &y in &a.y {
                    csv.push_str(&format!("{x},{y},{}\n", sieve.psi_count(x, y)?));
                }
            }
        }
    }
    Ok(csv)
}

fn log_value_csv(v: LogValue) -> String {
    match v {
        LogValue::NegInfinity => "-inf".into(),
        LogValue::Finite(x) => format!("{x:.12e}"),
    }
}

fn run_density(a: &DensityArgs, seed: u64) -> anyhow::Result<Outcome> {
    let spec: SetSpec = a.set.parse()?;
    let set = spec.materialize(1, a.n);
    if set.is_empty() {
        bail!("the set has no elements in [1, {}]", a.n);
    }
    let basis = if a.basis == "primes" {
        let sieve = build_sieve(a.n)?;
        set.filter(|m| sieve.is_prime(m).unwrap_or(false))
    } else {
        a.basis.parse::<SetSpec>()?.materialize(1, a.n)
    };
    let x0 = rational(&a.x0)?;
    let budget = eta_budget(a.n, basis.len(), a.k, x0.to_f64(), a.c);
    let hi = a.t_max.unwrap_or_else(|| budget.t().max((a.n as f64).powi(2)));
    let ts = log_spaced_samples(budget.t0, hi, a.samples, seed)?;
    let certificate = decay_certificate(&set, &basis, a.n, a.k, &ts);

    let grid: Vec<f64> = (0..a.grid_points)
        .map(|i| hi * i as f64 / a.grid_points.max(2).saturating_sub(1) as f64)
        .collect();
    let profile = density_profile(&set, &grid);
    if let Some(path) = &a.csv {
        let mut csv = String::from("t,log_abs_rho,bound_log\n");
        for ((t, l), b) in profile.t.iter().zip(&profile.log_abs_rho).zip(&profile.bound_log) {
            csv.push_str(&format!("{t:.12e},{},{b:.12e}\n", log_value_csv(*l)));
        }
        fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }

    let probability = match &a.eta {
        None => Value::Null,
        Some(eta) => {
            let eta = rational(eta)?;
            let exact = if set.len() <= EXHAUSTIVE_MAX {
                Some(exhaustive_probability(&set, &x0, &eta)?.to_string())
            } else {
                None
            };
            let (p, stderr) = mc_probability(&set, &x0, &eta, a.mc_samples, seed)?;
            json!({ "eta": eta, "exhaustive": exact, "monte_carlo": p, "stderr": stderr })
        }
    };
    let success = certificate.passed();
    Ok(Outcome {
        reports: json!({
            "set_size": set.len(),
            "basis_size": basis.len(),
            "budget": budget,
            "window": [budget.t0, hi],
            "certificate": certificate,
            "probability": probability,
        }),
        success,
    })
}

fn run_construct(a: &ConstructArgs, seed: u64) -> anyhow::Result<Outcome> {
    let spec = a.source.spec()?;
    let n = upper_end(&spec, a.n)?;
    let eta = a.eta.as_deref().map(rational).transpose()?;
    if let MethodArg::Pipeline = a.method {
        let delta = a.delta.unwrap_or_else(|| spec.count_upto(n) as f64 / n as f64);
        let cfg = DenseConfig {
            max_free: a.max_free,
            eta,
            random_iters: a.iters,
            ..DenseConfig::default()
        };
        let report = dense_set_signs(&spec, n, delta, a.eps0, seed, &cfg)?;
        let success = report.report.is_below();
        return Ok(Outcome {
            reports: json!({ "construction": report }),
            success,
        });
    }
    let set = spec.materialize(1, n);
    if set.is_empty() {
        bail!("the set has no elements in [1, {n}]");
    }
    let target = rational(&a.target)?;
    let default_eta = || ExactRational::unit(set.min().expect("nonempty"));
    let report = match a.method {
        MethodArg::Greedy => report_for(greedy_toward(&set, &target)?, &target, &eta.map_or_else(default_eta, Ok)?, Method::Greedy, None),
        MethodArg::Flip => report_for(flip_to_target(&set, &target)?, &target, &eta.map_or_else(default_eta, Ok)?, Method::Flip, None),
        MethodArg::Mitm => mitm_optimize_with_eta(&set, &target, a.max_free, eta.as_ref())?,
        MethodArg::Randomized => {
            randomized_search(&set, &target, &eta.map_or_else(default_eta, Ok)?, seed, a.iters)?
        }
        MethodArg::Pipeline => unreachable!("handled above"),
    };
    let success = report.is_below();
    Ok(Outcome {
        reports: json!({ "construction": { "report": report, "n": n } }),
        success,
    })
}

fn run_pipeline(a: &PipelineArgs, seed: u64) -> anyhow::Result<Outcome> {
    let c_cross = match a.c_cross.as_str() {
        "auto" => None,
        c => Some(c.parse::<u64>().with_context(|| format!("bad --c-cross {c:?}"))?),
    };
    let cfg = PipelineConfig {
        seed_rule: a.seed_rule.parse::<SeedRule>()?,
        c_cross,
        crossing_limit: a.crossing_limit,
        scales: geometric_scales(a.scale_start, a.scale_factor, a.num_scales),
        mode: match a.mode {
            ModeArg::Strict => PipelineMode::Strict,
            ModeArg::Relaxed => PipelineMode::Relaxed,
        },
        max_free: a.max_free,
        eta: rational(&a.eta)?,
        rng_seed: seed,
    };
    let top = cfg.scales.iter().copied().max().unwrap_or(1);
    let limit = if c_cross.is_none() { top.max(a.crossing_limit) } else { top };
    let sieve = Arc::new(build_sieve(limit)?);
    let (f, state) = theorem1_pipeline(sieve, &cfg)?;
    let locality = locality_violations(&f, &state, top)?;
    let mult = multiplicativity_violations(&f, a.pairs, seed);
    let success = state.all_below() && locality.is_empty() && mult == 0;
    Ok(Outcome {
        reports: json!({
            "pipeline": state,
            "locality_violations": locality,
            "multiplicativity_violations": mult,
            "multiplicativity_pairs": a.pairs,
        }),
        success,
    })
}

/// The first object in `v` (depth first) with the fields of a construction report.
fn find_report(v: &Value) -> Option<&Value> {
    match v {
        Value::Object(m) if ["signs", "target", "target_eta"].iter().all(|k| m.contains_key(*k)) => Some(v),
        Value::Object(m) => m.values().find_map(find_report),
        Value::Array(xs) => xs.iter().find_map(find_report),
        _ => None,
    }
}

fn parse_threshold(text: &str, len: usize, min_bits: u32) -> anyhow::Result<BigFixed> {
    let head = text.split('±').next().unwrap_or(text).trim();
    let approx: f64 = head.parse().with_context(|| format!("bad threshold {text:?}"))?;
    let bits = precision_for_log10(len, approx.abs().log10().max(-1e6)).max(min_bits) + 16;
    Ok(BigFixed::parse(text, bits)?)
}

fn run_verify(a: &VerifyArgs, precision: Option<u32>) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(&a.signs).with_context(|| format!("reading {}", a.signs.display()))?;
    let doc: Value = serde_json::from_str(&text).context("the signs file is not JSON")?;
    let report = find_report(&doc).ok_or_else(|| anyhow!("no construction report in {}", a.signs.display()))?;
    let signs: SignSequence = serde_json::from_value(report["signs"].clone()).context("bad signs")?;
    let target: ExactRational = serde_json::from_value(report["target"].clone()).context("bad target")?;
    let min_bits = precision.unwrap_or(64);
    let eta = match &a.eta {
        Some(e) => parse_threshold(e, signs.len(), min_bits)?,
        None => {
            let e = report["target_eta"].as_str().ok_or_else(|| anyhow!("target_eta is not a string"))?;
            parse_threshold(e, signs.len(), min_bits)?
        }
    };
    let v = verify_signs(&signs, &target, &eta);
    eprintln!("{}", v.verdict);
    let success = v.verdict == Comparison::Below;
    Ok(Outcome {
        reports: json!({
            "verification": v,
            "support_size": signs.len(),
            "target": target,
            "target_eta": eta,
        }),
        success,
    })
}

fn run_oracle(a: &OracleArgs) -> anyhow::Result<Outcome> {
    let spec: SetSpec = a.set.parse()?;
    let n = upper_end(&spec, a.n)?;
    let set: SupportSet = spec.materialize(1, n);
    let x0 = rational(&a.x0)?;
    let (minimum, signs) = harmonic_core::constructor::exhaustive_minimum(&set, &x0)?;
    Ok(Outcome {
        reports: json!({
            "oracle": {
                "set_size": set.len(),
                "patterns": 1u64 << set.len(),
                "x0": x0,
                "minimum": minimum,
                "minimum_f64": minimum.to_f64(),
                "signs": signs,
            }
        }),
        success: true,
    })
}

/// Finds `--config` in the raw arguments and splices its keys in as flags
/// right after the subcommand, so explicit flags override them.
fn expand_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut path = None;
    for (i, arg) in argv.iter().enumerate() {
        if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else if arg == "--config" {
            path = argv.get(i + 1).cloned();
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let Value::Object(map) = serde_json::from_str::<Value>(&text).context("config is not JSON")? else {
        bail!("config must be a JSON object");
    };
    let mut flags = Vec::new();
    for (key, value) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => flags.extend([flag, s]),
            Value::Array(xs) => {
                let items: Vec<String> = xs
                    .iter()
                    .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_string))
                    .collect();
                flags.extend([flag, items.join(",")]);
            }
            other => flags.extend([flag, other.to_string()]),
        }
    }
    let names = ["sieve", "density", "construct", "pipeline", "verify", "oracle"];
    let at = argv
        .iter()
        .skip(1)
        .position(|a| names.contains(&a.as_str()))
        .map_or(argv.len(), |p| p + 2);
    let mut out = argv[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

/// Exit status for a failed run: infeasible outcomes are 1, bad input is 2.
fn failure_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Infeasible(_) | Error::Precondition(_) | Error::Range(_) | Error::Resource(_)) => 1,
        _ => 2,
    }
}

fn run(argv: Vec<String>) -> ExitCode {
    let start = Instant::now();
    let expanded = match expand_config(argv.clone()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(&expanded) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.global.seed;
    let out = cli.global.out.as_deref();
    let (config, result) = match &cli.command {
        Command::Sieve(a) => {
            return match run_sieve(a).and_then(|csv| emit(out, &csv)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(failure_code(&e))
                }
            };
        }
        Command::Density(a) => (json!(a), run_density(a, seed)),
        Command::Construct(a) => (json!(a), run_construct(a, seed)),
        Command::Pipeline(a) => (json!(a), run_pipeline(a, seed)),
        Command::Verify(a) => (json!(a), run_verify(a, cli.global.precision_bits)),
        Command::Oracle(a) => (json!(a), run_oracle(a)),
    };
    let mut config = config;
    let mut globals: BTreeMap<&str, Value> = BTreeMap::new();
    globals.insert("seed", json!(seed));
    globals.insert("threads", json!(cli.global.threads));
    globals.insert("precision_bits", json!(cli.global.precision_bits));
    if let Value::Object(m) = &mut config {
        for (k, v) in globals {
            m.insert(k.to_string(), v);
        }
    }
    let (reports, code) = match result {
        Ok(o) => (o.reports, if o.success { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = failure_code(&e);
            if code == 2 {
                return ExitCode::from(2);
            }
            let reports = match e.downcast_ref::<Error>() {
                Some(Error::Infeasible(inf)) => json!({ "infeasible": inf }),
                _ => json!({ "error": format!("{e:#}") }),
            };
            (reports, code)
        }
    };
    let record = ExperimentRecord {
        schema: 1,
        command: &argv,
        config,
        rng_seed: seed,
        reports,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    let text = match serde_json::to_string_pretty(&record) {
        Ok(t) => t + "\n",
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(out, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    run(std::env::args().collect())
}
