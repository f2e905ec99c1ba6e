use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use spinsum::cache::{TensorCache, CACHE_ENV};
use spinsum::gamma::{FittedTensor, TwistKind, CONVENTION_VERSION};
use spinsum::linalg::MatrixJson;
use spinsum::spinsum::{direct, spin_sum_polynomial_with, SpinSumJob};
use spinsum::suite::{run_suite, Format, RunConfig, Suite};
use spinsum::{ab_rep, Error, FourVector, HalfInt, Tolerance};

#[derive(Parser)]
#[command(name = "spinsum", version, about = "Generalized gamma matrices, spin sums and field equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the generalized gamma matrices between (A,B) and (C,D).
    Gamma(GammaArgs),
    /// Evaluate a spin sum, its polynomial form and the ξ table.
    Spinsum(SpinsumArgs),
    /// Run a verification suite over the standard representations.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Labels {
    #[arg(long = "A", allow_hyphen_values = true)]
    a: HalfInt,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: HalfInt,
    #[arg(long = "C", allow_hyphen_values = true)]
    c: HalfInt,
    #[arg(long = "D", allow_hyphen_values = true)]
    d: HalfInt,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    labels: Labels,
    #[arg(long, default_value = "hermitian")]
    twist: TwistKind,
    /// Only the tensor of this rank/2.
    #[arg(long = "K")]
    k: Option<HalfInt>,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct SpinsumArgs {
    #[command(flatten)]
    labels: Labels,
    #[arg(long)]
    j: HalfInt,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Spatial momentum `x,y,z`; the rest frame when omitted.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_momentum)]
    p: Option<[f64; 3]>,
    /// Use the twisted spin sum.
    #[arg(long)]
    twisted: bool,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol_abs: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_rel: f64,
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Record per-check runtimes in the report.
    #[arg(long)]
    timings: bool,
    #[arg(long, hide = true)]
    inject_metric_fault: bool,
    #[command(flatten)]
    out: Output,
}

fn parse_momentum(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok([x, y, z]),
        _ => Err(format!("expected three finite components x,y,z, got {s:?}")),
    }
}

enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Triangle { .. }
            | Error::Multiplicity { .. }
            | Error::KRange { .. }
            | Error::NegativeSpin(_)
            | Error::NonPositiveMass(_)
            | Error::OffShell { .. }
            | Error::Parse(_)
            | Error::Unlabeled(_) => Failure::Usage(e.into()),
            other => Failure::Check(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Check(e)
    }
}

fn emit(out: &Output, text: &str) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cache_for(dir: &Option<PathBuf>) -> TensorCache {
    dir.as_ref().map(TensorCache::new).unwrap_or_else(TensorCache::from_env)
}

#[derive(Serialize)]
struct GammaPayload<'a> {
    left: String,
    right: String,
    twist: TwistKind,
    convention: u32,
    tensors: Vec<&'a FittedTensor>,
}

fn cmd_gamma(args: &GammaArgs) -> Result<(), Failure> {
    let l = &args.labels;
    let left = ab_rep(l.a, l.b)?;
    let right = ab_rep(l.c, l.d)?;
    let all = cache_for(&args.cache_dir).get_or_build(&left, &right, args.twist)?;
    let tensors: Vec<_> = match args.k {
        Some(k) => {
            let hit: Vec<_> = all.iter().filter(|t| t.k == k).collect();
            if hit.is_empty() {
                let range: Vec<_> = all.iter().map(|t| t.k.to_string()).collect();
                return Err(Failure::Usage(anyhow!("K = {k} is outside the allowed range {{{}}}", range.join(", "))));
            }
            hit
        }
        None => all.iter().collect(),
    };
    let payload = GammaPayload {
        left: left.key(),
        right: right.key(),
        twist: args.twist,
        convention: CONVENTION_VERSION,
        tensors,
    };
    emit(&args.out, &to_json(&payload)?)?;
    Ok(())
}

fn cmd_spinsum(args: &SpinsumArgs) -> Result<(), Failure> {
    let l = &args.labels;
    let job = SpinSumJob::labeled((l.a, l.b), (l.c, l.d), args.j, args.m)?;
    let twist = if args.twisted { TwistKind::Inverse } else { TwistKind::Hermitian };
    let p = match &args.p {
        Some(v) => FourVector::on_shell(*v, args.m),
        None => FourVector::rest(args.m),
    };
    let tensors = cache_for(&args.cache_dir).get_or_build(job.left_rep(), job.right_rep(), twist)?;
    let value = direct(&job, twist, &p)?;
    let poly = spin_sum_polynomial_with(&job, twist, &tensors)?;
    let payload = json!({
        "left": job.left_rep().key(),
        "right": job.right_rep().key(),
        "j": job.j,
        "m": job.m,
        "twist": twist,
        "momentum": p.0,
        "value": MatrixJson::from(&value),
        "polynomial": poly.polynomial,
        "xi": poly.xi,
        "certificate": {
            "on_shell_error": poly.on_shell_error,
            "samples": poly.samples,
            "sample_seed": poly.sample_seed,
            "parity_sign": poly.parity_sign,
            "parity_defect": poly.parity_defect,
            "degrees": poly.degrees,
            "degree_bounds": poly.degree_bounds,
        },
    });
    emit(&args.out, &to_json(&payload)?)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let cfg = RunConfig {
        seed: args.seed,
        samples: args.samples,
        tol: Tolerance::new(args.tol_abs, args.tol_rel),
        cache_dir: args.cache_dir.clone(),
        output: args.out.output.clone(),
        format: args.format,
        timings: args.timings,
        metric_fault: args.inject_metric_fault,
    };
    let report = run_suite(args.suite, &cfg)?;
    let text = match cfg.format {
        Format::Json => report.to_json()?,
        Format::Text => report.to_text(),
    };
    emit(&args.out, &text)?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gamma(a) => cmd_gamma(a).map(|_| true),
        Command::Spinsum(a) => cmd_spinsum(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
