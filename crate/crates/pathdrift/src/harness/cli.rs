//! Command-line interface.
//!
//! `pathdrift <command> [--flag value]…` with commands
//! simulate, density, unbiased, bangbang, bounds, convergence,
//! tamed-error, cf-diagnostic, selftest.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric error.
//! `PATHDRIFT_SEED` overrides `--seed`. `--workers` caps the thread pool;
//! results are identical for every worker count. The wall_ms column is
//! the only run-dependent output; every other byte of the CSV is
//! determined by (command, flags, seed).

use std::time::Instant;

use crate::closedforms::{bangbang_peak_density, calibrate_envelope, envelope_bracket};
use crate::error::{PathdriftError, Result};
use crate::girsanov::{
    default_bandwidth, density_em_kernel, density_first_order, density_girsanov_kernel_multi,
    MethodTag,
};
use crate::model::{Drift, PathDependentModel};
use crate::parametrix::{unbiased_density, CountingSpec};
use crate::rng::{uniform_grid, SeedSpec};
use crate::schemes::{euler_maruyama, strong_error_sweep};

use super::config::load_model;
use super::fourier::cf_decay_diagnostic;
use super::report::{config_digest, Cell, ExperimentReport};
use super::selftest::run_selftest;

const USAGE: &str = "usage: pathdrift <command> [--flag value]...

commands:
  simulate       --model FILE --x0 X --t T --steps N --paths P [--seed S] [--out FILE]
  density        --model FILE --method girsanov|first-order|em --x X --y Y --t T
                 --samples N [--bandwidth H] [--quad-nodes Q] [--steps N] [--seed S] [--out FILE]
  unbiased       --model FILE --x X --y Y --t T --counting exp:L|beta:B
                 --samples N [--seed S] [--out FILE]
  bangbang       --x X --y Y --t T --bsup B [--out FILE]
  bounds         --model FILE --x X --grid LO:HI:N --t T --samples N --calibrate
                 [--bandwidth H] [--steps N] [--margin M] [--seed S] [--out FILE]
  convergence    --spec FILE --levels 64,128,256,512 --m M --samples N
                 --x X --y Y --t T [--bandwidth H] [--seed S] [--out FILE]
  tamed-error    --model FILE --t T --eps 2^-3..2^-7 --replications N
                 [--x0 X] [--ell L] [--nfine N] [--seed S] [--out FILE]
  cf-diagnostic  --model FILE --x X --t T --delta D --xi LO:HI:N --samples N
                 [--steps N] [--seed S] [--out FILE]
  selftest

common flags: --seed S (env PATHDRIFT_SEED overrides), --workers W, --out FILE
(CSV; a .json mirror is written next to file output)
";

struct Args {
    pairs: Vec<(String, String)>,
}

impl Args {
    fn parse(tokens: &[String], allowed: &[&str]) -> Result<Args> {
        let mut pairs = Vec::new();
        let mut it = tokens.iter().peekable();
        while let Some(tok) = it.next() {
            let key = tok
                .strip_prefix("--")
                .ok_or_else(|| PathdriftError::config(format!("expected a flag, got `{tok}`")))?;
            if !allowed.contains(&key) {
                return Err(PathdriftError::config(format!("unknown flag `--{key}`")));
            }
            // boolean flags take no value
            if key == "calibrate" {
                pairs.push((key.to_string(), "true".to_string()));
                continue;
            }
            let value = it
                .next()
                .ok_or_else(|| PathdriftError::config(format!("flag `--{key}` needs a value")))?;
            pairs.push((key.to_string(), value.clone()));
        }
        Ok(Args { pairs })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn req(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| PathdriftError::config(format!("missing required flag `--{key}`")))
    }

    fn f64(&self, key: &str) -> Result<f64> {
        parse_f64(self.req(key)?, key)
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            Some(v) => parse_f64(v, key),
            None => Ok(default),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| PathdriftError::config(format!("bad integer for `--{key}`: {v}"))),
            None => Ok(default),
        }
    }

    fn u64_req(&self, key: &str) -> Result<u64> {
        let v = self.req(key)?;
        v.parse()
            .map_err(|_| PathdriftError::config(format!("bad integer for `--{key}`: {v}")))
    }

    fn seed(&self) -> Result<SeedSpec> {
        let flag = match self.get("seed") {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| PathdriftError::config(format!("bad seed `{v}`")))?,
            None => 0,
        };
        let master = match std::env::var("PATHDRIFT_SEED") {
            Ok(v) => v
                .parse::<u64>()
                .map_err(|_| PathdriftError::config(format!("bad PATHDRIFT_SEED `{v}`")))?,
            Err(_) => flag,
        };
        Ok(SeedSpec::new(master, 0))
    }

    fn digest_parts(&self, command: &str) -> String {
        let mut parts: Vec<String> = vec![command.to_string()];
        let mut sorted = self.pairs.clone();
        sorted.sort();
        for (k, v) in sorted {
            if k == "out" || k == "workers" {
                continue;
            }
            parts.push(format!("{k}={v}"));
        }
        let refs: Vec<&str> = parts.iter().map(|s| s.as_str()).collect();
        config_digest(&refs)
    }
}

fn parse_f64(v: &str, key: &str) -> Result<f64> {
    parse_real_token(v)
        .ok_or_else(|| PathdriftError::config(format!("bad number for `--{key}`: {v}")))
}

/// Accepts plain literals and `2^-7`-style powers.
fn parse_real_token(v: &str) -> Option<f64> {
    if let Some(rest) = v.strip_prefix("2^") {
        return rest.parse::<f64>().ok().map(|e| 2.0f64.powf(e));
    }
    v.parse::<f64>().ok()
}

/// Comma-separated reals.
fn parse_f64_list(v: &str, key: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| parse_f64(s.trim(), key))
        .collect::<Result<Vec<f64>>>()
}

/// `2^-3..2^-7` dyadic range (inclusive), or a comma list.
fn parse_eps_list(v: &str) -> Result<Vec<f64>> {
    if let Some((lo, hi)) = v.split_once("..") {
        let (lo, hi) = (
            lo.strip_prefix("2^").and_then(|e| e.parse::<i32>().ok()),
            hi.strip_prefix("2^").and_then(|e| e.parse::<i32>().ok()),
        );
        if let (Some(a), Some(b)) = (lo, hi) {
            let (hi_exp, lo_exp) = (a.max(b), a.min(b));
            let mut out: Vec<f64> = (lo_exp..=hi_exp).rev().map(|e| 2.0f64.powi(e)).collect();
            out.sort_by(|x, y| y.partial_cmp(x).unwrap());
            return Ok(out);
        }
        return Err(PathdriftError::config(format!(
            "bad epsilon range `{v}` (expected 2^A..2^B)"
        )));
    }
    parse_f64_list(v, "eps")
}

/// `lo:hi:count` linear grid.
fn parse_linspace(v: &str, key: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(PathdriftError::config(format!(
            "bad grid for `--{key}`: {v} (expected LO:HI:COUNT)"
        )));
    }
    let lo = parse_f64(parts[0], key)?;
    let hi = parse_f64(parts[1], key)?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| PathdriftError::config(format!("bad count in `--{key}`")))?;
    if count < 2 {
        return Ok(vec![lo]);
    }
    Ok((0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect())
}

fn parse_counting(v: &str, horizon: f64) -> Result<CountingSpec> {
    if let Some(rest) = v.strip_prefix("exp:") {
        let lambda = parse_f64(rest, "counting")?;
        return Ok(CountingSpec::Exponential { lambda });
    }
    if let Some(rest) = v.strip_prefix("beta:") {
        let beta = parse_f64(rest, "counting")?;
        return Ok(CountingSpec::Beta { beta, horizon });
    }
    Err(PathdriftError::config(format!(
        "bad counting spec `{v}` (expected exp:LAMBDA or beta:BETA)"
    )))
}

fn seed_cell(seed: SeedSpec) -> Cell {
    Cell::Text(format!("{}:{}", seed.master_seed, seed.stream_index))
}

fn vec_cell(v: &[f64]) -> Cell {
    if v.len() == 1 {
        Cell::Real(v[0])
    } else {
        Cell::Text(
            v.iter()
                .map(|x| super::report::fmt_real(*x))
                .collect::<Vec<_>>()
                .join(";"),
        )
    }
}

/// Entry point. `argv` includes the program name.
pub fn run_cli(argv: &[String]) -> i32 {
    let (command, rest) = match argv.get(1) {
        Some(c) => (c.as_str(), &argv[2..]),
        None => {
            eprintln!("{USAGE}");
            return 2;
        }
    };
    if command == "selftest" {
        let ok = run_selftest(std::io::stdout().lock());
        return if ok { 0 } else { 3 };
    }
    match dispatch(command, rest) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, PathdriftError::Config(_) | PathdriftError::Domain(_)) {
                eprintln!("{USAGE}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: &str, rest: &[String]) -> Result<()> {
    let body = |args: &Args| -> Result<()> {
        match command {
            "simulate" => cmd_simulate(args),
            "density" => cmd_density(args),
            "unbiased" => cmd_unbiased(args),
            "bangbang" => cmd_bangbang(args),
            "bounds" => cmd_bounds(args),
            "convergence" => cmd_convergence(args),
            "tamed-error" => cmd_tamed_error(args),
            "cf-diagnostic" => cmd_cf_diagnostic(args),
            other => Err(PathdriftError::config(format!("unknown command `{other}`"))),
        }
    };
    let allowed: &[&str] = match command {
        "simulate" => &[
            "model", "x0", "t", "steps", "paths", "seed", "out", "workers",
        ],
        "density" => &[
            "model",
            "method",
            "x",
            "y",
            "t",
            "samples",
            "bandwidth",
            "quad-nodes",
            "steps",
            "seed",
            "out",
            "workers",
        ],
        "unbiased" => &[
            "model", "x", "y", "t", "counting", "samples", "seed", "out", "workers",
        ],
        "bangbang" => &["x", "y", "t", "bsup", "out", "workers"],
        "bounds" => &[
            "model",
            "x",
            "grid",
            "t",
            "samples",
            "bandwidth",
            "steps",
            "margin",
            "calibrate",
            "seed",
            "out",
            "workers",
        ],
        "convergence" => &[
            "spec",
            "levels",
            "m",
            "samples",
            "x",
            "y",
            "t",
            "bandwidth",
            "seed",
            "out",
            "workers",
        ],
        "tamed-error" => &[
            "model",
            "t",
            "eps",
            "replications",
            "x0",
            "ell",
            "nfine",
            "seed",
            "out",
            "workers",
        ],
        "cf-diagnostic" => &[
            "model", "x", "t", "delta", "xi", "samples", "steps", "seed", "out", "workers",
        ],
        other => return Err(PathdriftError::config(format!("unknown command `{other}`"))),
    };
    let args = Args::parse(rest, allowed)?;
    match args.get("workers") {
        Some(w) => {
            let n: usize = w
                .parse()
                .map_err(|_| PathdriftError::config(format!("bad worker count `{w}`")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| PathdriftError::config(format!("thread pool: {e}")))?;
            pool.install(|| body(&args))
        }
        None => body(&args),
    }
}

fn load_scalar_model(args: &Args, key: &str) -> Result<PathDependentModel> {
    load_model(args.req(key)?)
}

fn cmd_simulate(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    let x0 = parse_f64_list(args.req("x0")?, "x0")?;
    let t = args.f64("t")?;
    let steps = args.usize_or("steps", 256)?;
    let paths = args.u64_req("paths")?;
    let seed = args.seed()?;
    let grid = uniform_grid(t, steps)?;
    let mut report = ExperimentReport::new(
        "simulate",
        args.digest_parts("simulate"),
        &["path", "t", "terminal", "seed", "wall_ms"],
        seed,
    );
    let mut rows = Vec::new();
    for i in 0..paths {
        let path = euler_maruyama(&model, &x0, &grid, seed.offset(i))?;
        rows.push(vec![
            Cell::Int(i as i64),
            Cell::Real(t),
            vec_cell(path.terminal()),
            seed_cell(seed.offset(i)),
        ]);
    }
    finish(&mut report, rows, started, args)
}

fn cmd_density(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    let x = parse_f64_list(args.req("x")?, "x")?;
    let y = parse_f64_list(args.req("y")?, "y")?;
    let t = args.f64("t")?;
    let n = args.u64_req("samples")?;
    let steps = args.usize_or("steps", 256)?;
    let seed = args.seed()?;
    let method = args.req("method")?;
    let est = match method {
        "girsanov" => {
            let h = args.f64_or("bandwidth", default_bandwidth(t, n, model.dim))?;
            density_girsanov_kernel_multi(
                &model,
                &x,
                std::slice::from_ref(&y),
                t,
                h,
                steps,
                n,
                seed,
            )?
            .into_iter()
            .next()
            .unwrap()
        }
        "first-order" => {
            let q = args.usize_or("quad-nodes", 24)?;
            density_first_order(&model, &x, &y, t, q, steps, n, seed)?
        }
        "em" => {
            let h = args.f64_or("bandwidth", default_bandwidth(t, n, model.dim))?;
            density_em_kernel(&model, &x, &y, t, h, steps, n, seed)?
        }
        other => {
            return Err(PathdriftError::config(format!(
                "unknown density method `{other}`"
            )))
        }
    };
    let mut report = ExperimentReport::new(
        "density",
        args.digest_parts("density"),
        &[
            "method",
            "t",
            "x",
            "y",
            "estimate",
            "stderr",
            "n_samples",
            "bandwidth",
            "seed",
            "wall_ms",
        ],
        seed,
    );
    let rows = vec![vec![
        Cell::Text(est.method.to_string()),
        Cell::Real(t),
        vec_cell(&x),
        vec_cell(&y),
        Cell::Real(est.value),
        Cell::Real(est.stderr),
        Cell::Int(est.n_samples as i64),
        match est.bandwidth {
            Some(h) => Cell::Real(h),
            None => Cell::Absent,
        },
        seed_cell(seed),
    ]];
    finish(&mut report, rows, started, args)
}

fn cmd_unbiased(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    let x = parse_f64_list(args.req("x")?, "x")?;
    let y = parse_f64_list(args.req("y")?, "y")?;
    let t = args.f64("t")?;
    let n = args.u64_req("samples")?;
    let seed = args.seed()?;
    let spec = parse_counting(args.req("counting")?, t)?;
    let (est, diag) = unbiased_density(&model, &x, &y, t, &spec, n, seed)?;
    let mut report = ExperimentReport::new(
        "unbiased",
        args.digest_parts("unbiased"),
        &[
            "method",
            "t",
            "x",
            "y",
            "estimate",
            "stderr",
            "n_samples",
            "bandwidth",
            "seed",
            "counting",
            "mean_jumps",
            "kurtosis",
            "wall_ms",
        ],
        seed,
    );
    let rows = vec![vec![
        Cell::Text(MethodTag::Unbiased.to_string()),
        Cell::Real(t),
        vec_cell(&x),
        vec_cell(&y),
        Cell::Real(est.value),
        Cell::Real(est.stderr),
        Cell::Int(est.n_samples as i64),
        Cell::Absent,
        seed_cell(seed),
        Cell::Text(spec.label()),
        Cell::Real(diag.mean_jumps),
        Cell::Real(diag.kurtosis),
    ]];
    finish(&mut report, rows, started, args)
}

fn cmd_bangbang(args: &Args) -> Result<()> {
    let started = Instant::now();
    let x = parse_f64_list(args.req("x")?, "x")?;
    let y = parse_f64_list(args.req("y")?, "y")?;
    let t = args.f64("t")?;
    let b_sup = args.f64("bsup")?;
    let d = x.len();
    let lower = bangbang_peak_density(&x, &y, &vec![-b_sup; d], t)?;
    let upper = bangbang_peak_density(&x, &y, &vec![b_sup; d], t)?;
    let mut report = ExperimentReport::new(
        "bangbang",
        args.digest_parts("bangbang"),
        &["x", "y", "t", "bsup", "lower", "upper", "wall_ms"],
        SeedSpec::new(0, 0),
    );
    let rows = vec![vec![
        vec_cell(&x),
        vec_cell(&y),
        Cell::Real(t),
        Cell::Real(b_sup),
        Cell::Real(lower),
        Cell::Real(upper),
    ]];
    finish(&mut report, rows, started, args)
}

fn cmd_bounds(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    if model.dim != 1 {
        return Err(PathdriftError::unsupported("bounds runs d = 1 models"));
    }
    let x = args.f64("x")?;
    let ys = parse_linspace(args.req("grid")?, "grid")?;
    let t = args.f64("t")?;
    let n = args.u64_req("samples")?;
    let steps = args.usize_or("steps", 256)?;
    let margin = args.f64_or("margin", 0.05)?;
    let seed = args.seed()?;
    if args.get("calibrate").is_none() {
        return Err(PathdriftError::config(
            "bounds currently requires --calibrate (fitted envelope)",
        ));
    }
    let h = args.f64_or("bandwidth", default_bandwidth(t, n, 1))?;
    let targets: Vec<Vec<f64>> = ys.iter().map(|&y| vec![y]).collect();
    let ests = density_girsanov_kernel_multi(&model, &[x], &targets, t, h, steps, n, seed)?;
    let samples: Vec<(Vec<f64>, f64)> = targets
        .iter()
        .zip(ests.iter())
        .map(|(y, e)| (y.clone(), e.value))
        .collect();
    let env = calibrate_envelope(&[x], &samples, t, margin)?;
    let mut report = ExperimentReport::new(
        "bounds",
        args.digest_parts("bounds"),
        &[
            "method", "t", "x", "y", "estimate", "stderr", "lower", "upper", "inside", "seed",
            "wall_ms",
        ],
        seed,
    );
    let mut rows = Vec::new();
    for (y, est) in targets.iter().zip(ests.iter()) {
        let (lo, hi) = envelope_bracket(&env, &[x], y, t);
        rows.push(vec![
            Cell::Text(est.method.to_string()),
            Cell::Real(t),
            Cell::Real(x),
            vec_cell(y),
            Cell::Real(est.value),
            Cell::Real(est.stderr),
            Cell::Real(lo),
            Cell::Real(hi),
            Cell::Int((lo <= est.value && est.value <= hi) as i64),
            seed_cell(seed),
        ]);
    }
    finish(&mut report, rows, started, args)
}

fn cmd_convergence(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_model(args.req("spec")?)?;
    let (spec, nu) = match &model.drift {
        Drift::Functional { spec, nu } => (spec.clone(), nu.clone()),
        _ => {
            return Err(PathdriftError::config(
                "convergence needs a model file with a functional drift",
            ))
        }
    };
    if model.dim != 1 || !model.diffusion.is_constant() {
        return Err(PathdriftError::unsupported(
            "convergence runs d = 1 with constant diffusion",
        ));
    }
    let sigma = model.diffusion.scalar_at(0.0);
    let levels: Vec<usize> = args
        .req("levels")?
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| PathdriftError::config(format!("bad level `{s}`")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let m = args.usize_or("m", 4)?;
    let n = args.u64_req("samples")?;
    let x = args.f64("x")?;
    let y = args.f64("y")?;
    let t = args.f64("t")?;
    let h = args.f64_or("bandwidth", 0.15)?;
    let seed = args.seed()?;
    let fit = crate::convergence::density_rate_experiment(
        &spec, &nu, sigma, x, y, t, &levels, m, n, h, seed,
    )?;
    let mut report = ExperimentReport::new(
        "convergence",
        args.digest_parts("convergence"),
        &[
            "n",
            "error",
            "stderr",
            "net_gap",
            "rate",
            "ci_lo",
            "ci_hi",
            "tail_mass",
            "seed",
            "wall_ms",
        ],
        seed,
    );
    let mut rows = Vec::new();
    for level in &fit.levels {
        rows.push(vec![
            Cell::Int(level.n as i64),
            Cell::Real(level.error),
            Cell::Real(level.stderr),
            Cell::Real(level.net_gap),
            Cell::Real(fit.fitted_slope),
            Cell::Real(fit.slope_ci.0),
            Cell::Real(fit.slope_ci.1),
            Cell::Real(fit.tail_mass),
            seed_cell(seed),
        ]);
    }
    finish(&mut report, rows, started, args)
}

fn cmd_tamed_error(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    let t = args.f64("t")?;
    let epsilons = parse_eps_list(args.req("eps")?)?;
    let reps = args.u64_req("replications")?;
    let x0 = args.f64_or("x0", 1.0)?;
    let ell = args.f64_or("ell", 1.0)?;
    let n_fine = args.usize_or("nfine", 4096)?;
    let seed = args.seed()?;
    let sweep = strong_error_sweep(&model, x0, t, &epsilons, reps, n_fine, ell, seed)?;
    let mut report = ExperimentReport::new(
        "tamed-error",
        args.digest_parts("tamed-error"),
        &["epsilon", "mse", "stderr", "n", "slope", "seed", "wall_ms"],
        seed,
    );
    let mut rows = Vec::new();
    for row in &sweep.rows {
        rows.push(vec![
            Cell::Real(row.epsilon),
            Cell::Real(row.mean_square_error),
            Cell::Real(row.stderr),
            Cell::Int(row.n as i64),
            Cell::Real(sweep.fitted_slope),
            seed_cell(seed),
        ]);
    }
    finish(&mut report, rows, started, args)
}

fn cmd_cf_diagnostic(args: &Args) -> Result<()> {
    let started = Instant::now();
    let model = load_scalar_model(args, "model")?;
    let x = args.f64("x")?;
    let t = args.f64("t")?;
    let delta = args.f64("delta")?;
    let xi = parse_linspace(args.req("xi")?, "xi")?;
    let n = args.u64_req("samples")?;
    let steps = args.usize_or("steps", 512)?;
    let seed = args.seed()?;
    let diag = cf_decay_diagnostic(&model, x, t, delta, &xi, n, steps, seed)?;
    let mut report = ExperimentReport::new(
        "cf-diagnostic",
        args.digest_parts("cf-diagnostic"),
        &[
            "xi",
            "modulus",
            "stderr",
            "l2_integral",
            "tail_exponent",
            "seed",
            "wall_ms",
        ],
        seed,
    );
    let mut rows = Vec::new();
    for row in &diag.rows {
        rows.push(vec![
            Cell::Real(row.xi),
            Cell::Real(row.modulus),
            Cell::Real(row.stderr),
            Cell::Real(diag.l2_integral),
            Cell::Real(diag.tail_exponent),
            seed_cell(seed),
        ]);
    }
    finish(&mut report, rows, started, args)
}

/// Appends the shared wall_ms column and writes the report.
fn finish(
    report: &mut ExperimentReport,
    rows: Vec<Vec<Cell>>,
    started: Instant,
    args: &Args,
) -> Result<()> {
    let wall_ms = started.elapsed().as_millis() as u64;
    report.wall_ms = wall_ms;
    for mut row in rows {
        row.push(Cell::Int(wall_ms as i64));
        report.push_row(row);
    }
    report.write(args.get("out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_range_parsing() {
        let eps = parse_eps_list("2^-3..2^-7").unwrap();
        assert_eq!(eps.len(), 5);
        assert_eq!(eps[0], 0.125);
        assert_eq!(eps[4], 2.0f64.powi(-7));
        let eps = parse_eps_list("0.5,0.25").unwrap();
        assert_eq!(eps, vec![0.5, 0.25]);
        assert!(parse_eps_list("2^a..2^b").is_err());
    }

    #[test]
    fn linspace_parsing() {
        let g = parse_linspace("-1:1:5", "grid").unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(parse_linspace("1:2", "grid").is_err());
    }

    #[test]
    fn unknown_flags_rejected() {
        let tokens = vec!["--bogus".to_string(), "1".to_string()];
        assert!(Args::parse(&tokens, &["x", "y"]).is_err());
    }

    #[test]
    fn counting_spec_parsing() {
        assert!(matches!(
            parse_counting("exp:2.0", 1.0).unwrap(),
            CountingSpec::Exponential { lambda } if lambda == 2.0
        ));
        assert!(matches!(
            parse_counting("beta:0.5", 1.0).unwrap(),
            CountingSpec::Beta { beta, horizon } if beta == 0.5 && horizon == 1.0
        ));
        assert!(parse_counting("gamma:1", 1.0).is_err());
    }
}
