//! Verification suites over the standard representation set and the
//! report they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{self, TensorCache};
use crate::error::{Error, Result};
use crate::field::{self, same_equation, FIELD_TOL};
use crate::gamma::{self, FittedTensor, TwistKind};
use crate::halfint::HalfInt;
use crate::intertwiner::build_coefficients;
use crate::linalg::{max_abs, max_diff, r, Tolerance};
use crate::lorentz::{ab_rep, sigma, sigma_bar, slash, FieldRep, METRIC};
use crate::sampling::{on_shell_batch, random_rotation, random_word, Sampler};
use crate::spinsum::{self, spin_sum, spin_sum_polynomial_with, twist_relation, SpinSumJob};
use crate::statistics::{causality_constraint, statistics_for, Statistics};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Metric used in covariance checks when the fault hook is on.
pub const FAULT_METRIC: [f64; 4] = [1.0; 4];

/// Mass used throughout the suites.
pub const SUITE_MASS: f64 = 1.0;

fn h(t: i32) -> HalfInt {
    HalfInt::from_twice(t)
}

/// `(0,0), (1/2,0), (0,1/2), (1/2,1/2), (1,0), (0,1), (1,1/2), (3/2,0)`
pub fn standard_reps() -> Vec<(HalfInt, HalfInt)> {
    [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0)]
        .into_iter()
        .map(|(a, b)| (h(a), h(b)))
        .collect()
}

/// Ordered pairs from the standard set with a spin `j` both contain.
pub fn same_j_jobs() -> Vec<((HalfInt, HalfInt), (HalfInt, HalfInt), HalfInt)> {
    let reps = standard_reps();
    let mut out = Vec::new();
    for &l in &reps {
        for &rr in &reps {
            for j in HalfInt::coupled(l.0, l.1) {
                if HalfInt::triangle(rr.0, rr.1, j) {
                    out.push((l, rr, j));
                }
            }
        }
    }
    out
}

fn label((a, b): (HalfInt, HalfInt)) -> String {
    format!("({a},{b})")
}

fn pair_name(l: (HalfInt, HalfInt), rr: (HalfInt, HalfInt)) -> String {
    format!("{}x{}", label(l), label(rr))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Gamma,
    Spinsum,
    Fieldeq,
    Statistics,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Gamma => "gamma",
            Suite::Spinsum => "spinsum",
            Suite::Fieldeq => "fieldeq",
            Suite::Statistics => "statistics",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "gamma" => Suite::Gamma,
            "spinsum" => Suite::Spinsum,
            "fieldeq" => Suite::Fieldeq,
            "statistics" => Suite::Statistics,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerance,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    /// Record per-check runtimes. Off by default so reports are reproducible.
    pub timings: bool,
    /// Test hook: evaluate covariance checks with a wrong metric.
    #[serde(skip)]
    pub metric_fault: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            samples: 100,
            tol: Tolerance::new(1e-8, 1e-8),
            cache_dir: None,
            output: None,
            format: Format::Json,
            timings: false,
            metric_fault: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 10 {
            return Err(Error::Parse(format!("samples must be at least 10, got {}", self.samples)));
        }
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.tol.abs) || !ok(self.tol.rel) || self.tol.abs + self.tol.rel == 0.0 {
            return Err(Error::Parse("tolerances must be finite, non-negative and not both zero".into()));
        }
        Ok(())
    }

    pub fn cache(&self) -> TensorCache {
        match &self.cache_dir {
            Some(d) => TensorCache::new(d),
            None => TensorCache::from_env(),
        }
    }

    fn metric(&self) -> [f64; 4] {
        if self.metric_fault {
            FAULT_METRIC
        } else {
            METRIC
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    /// Everything needed to replay the check.
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suite: Suite,
    pub seed: u64,
    pub samples: usize,
    pub tol: Tolerance,
    pub metric_fault: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub toolkit_version: String,
    pub config: ConfigEcho,
    pub checks: Vec<CheckRecord>,
    pub failed: usize,
    pub passed: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let residual = c.residual.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!("{status} {} residual={residual}", c.name));
            if let Some(ms) = c.runtime_ms {
                out.push_str(&format!(" {ms:.1}ms"));
            }
            if let (Status::Fail, Some(d)) = (c.status, &c.detail) {
                out.push_str(&format!("\n     {d}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} checks, {} failed: {}\n",
            self.checks.len(),
            self.failed,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }
}

struct Outcome {
    residual: f64,
    detail: Option<String>,
}

impl Outcome {
    fn value(residual: f64) -> Self {
        Outcome { residual, detail: None }
    }

    fn with(residual: f64, detail: impl Into<String>) -> Self {
        Outcome { residual, detail: Some(detail.into()) }
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    cache: TensorCache,
    tensors: BTreeMap<(String, String, TwistKind), Vec<FittedTensor>>,
    checks: Vec<CheckRecord>,
}

impl<'a> Runner<'a> {
    fn check(&mut self, name: String, anchor: &str, inputs: Value, tol: f64, f: impl FnOnce(&mut Self) -> Result<Outcome>) {
        let start = Instant::now();
        let result = f(self);
        let runtime_ms = self.cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        let (status, residual, detail) = match result {
            Ok(o) if o.residual <= tol => (Status::Pass, Some(o.residual), o.detail),
            Ok(o) => (Status::Fail, Some(o.residual), o.detail),
            Err(e) => (Status::Fail, None, Some(e.to_string())),
        };
        self.checks.push(CheckRecord {
            name,
            anchor: anchor.into(),
            status,
            residual: residual.map(|x| if x.is_finite() { x } else { f64::MAX }),
            tolerance: Some(tol),
            detail,
            inputs,
            runtime_ms,
        });
    }

    fn tensors(&mut self, l: &FieldRep, rr: &FieldRep, twist: TwistKind) -> Result<Vec<FittedTensor>> {
        let key = (l.key(), rr.key(), twist);
        if let Some(t) = self.tensors.get(&key) {
            return Ok(t.clone());
        }
        let t = self.cache.get_or_build(l, rr, twist)?;
        self.tensors.insert(key, t.clone());
        Ok(t)
    }

    fn job(&self, l: (HalfInt, HalfInt), rr: (HalfInt, HalfInt), j: HalfInt) -> Result<SpinSumJob> {
        SpinSumJob::labeled(l, rr, j, SUITE_MASS)
    }
}

fn replay(cfg: &RunConfig, extra: Value) -> Value {
    let mut v = json!({ "seed": cfg.seed, "samples": cfg.samples, "m": SUITE_MASS });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

/// Runs the selected suite. Failures are report content, never errors.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut runner = Runner { cfg, cache: cfg.cache(), tensors: BTreeMap::new(), checks: Vec::new() };
    if suite.includes(Suite::Gamma) {
        gamma_suite(&mut runner);
    }
    if suite.includes(Suite::Spinsum) {
        spinsum_suite(&mut runner);
    }
    if suite.includes(Suite::Fieldeq) {
        fieldeq_suite(&mut runner);
    }
    if suite.includes(Suite::Statistics) {
        statistics_suite(&mut runner);
    }
    let mut checks = runner.checks;
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
    Ok(VerificationReport {
        schema: SCHEMA_VERSION,
        toolkit_version: TOOLKIT_VERSION.into(),
        config: ConfigEcho { suite, seed: cfg.seed, samples: cfg.samples, tol: cfg.tol, metric_fault: cfg.metric_fault },
        checks,
        failed,
        passed: failed == 0,
    })
}

fn words(seed: u64, n: usize) -> Vec<crate::lorentz::LorentzWord> {
    let mut s = Sampler::new(seed);
    (0..n).map(|_| random_word(&mut s)).collect()
}

fn word_count(cfg: &RunConfig) -> usize {
    (cfg.samples / 5).max(2)
}

fn gamma_suite(run: &mut Runner) {
    let cfg = run.cfg;
    let weyl = (h(1), h(0));
    let anti = (h(0), h(1));
    for (name, rep, want) in [("sigma", weyl, sigma()), ("sigma_bar", anti, sigma_bar())] {
        run.check(
            format!("gamma.pauli.{name}"),
            "Pauli matrices as the lowest gamma matrices",
            replay(cfg, json!({ "left": label(rep), "right": label(rep), "twist": "hermitian", "K": "1/2" })),
            1e-9,
            |run| {
                let r = ab_rep(rep.0, rep.1)?;
                let t = run.tensors(&r, &r, TwistKind::Hermitian)?;
                if t.len() != 1 {
                    return Ok(Outcome::with(f64::INFINITY, format!("{} tensors", t.len())));
                }
                let comps = gamma::vector_components(&t[0].tensor)
                    .ok_or_else(|| Error::Verification("tensor is not rank 1".into()))?;
                Ok(Outcome::value((0..4).map(|mu| max_diff(&comps[mu], &want[mu])).fold(0.0, f64::max)))
            },
        );
    }

    let metric = cfg.metric();
    run.check(
        "gamma.sigma_covariance".into(),
        "covariance of the Pauli gamma matrices",
        replay(cfg, json!({ "left": "(1/2,0)", "right": "(1/2,0)", "metric": metric, "words": word_count(cfg) })),
        cfg.tol.rel,
        |run| {
            let r = ab_rep(weyl.0, weyl.1)?;
            let t = run.tensors(&r, &r, TwistKind::Hermitian)?;
            let mut worst: f64 = 0.0;
            for w in words(cfg.seed, word_count(cfg)) {
                worst = worst.max(t[0].tensor.covariance_defect(&r, &r, TwistKind::Hermitian, &w, &metric)?);
            }
            Ok(Outcome::value(worst))
        },
    );

    for twist in [TwistKind::Hermitian, TwistKind::Inverse] {
        run.check(
            format!("gamma.k_range.{twist}"),
            "range of K for the invariant seeds",
            replay(cfg, json!({ "twist": twist.as_str(), "reps": standard_reps().into_iter().map(label).collect::<Vec<_>>() })),
            0.0,
            |_| {
                let mut bad = Vec::new();
                for l in standard_reps() {
                    for rr in standard_reps() {
                        let (lr, rrep) = (ab_rep(l.0, l.1)?, ab_rep(rr.0, rr.1)?);
                        let found: Vec<_> = gamma::invariant_seeds(&lr, &rrep, twist)
                            .map(|s| s.into_iter().map(|s| s.k).collect())
                            .unwrap_or_default();
                        if found != gamma::predicted_k_range(l, rr, twist) {
                            bad.push(pair_name(l, rr));
                        }
                    }
                }
                Ok(if bad.is_empty() {
                    Outcome::value(0.0)
                } else {
                    Outcome::with(bad.len() as f64, format!("mismatched pairs: {}", bad.join(" ")))
                })
            },
        );
    }

    let mut pairs: Vec<_> = same_j_jobs().into_iter().map(|(l, rr, _)| (l, rr)).collect();
    pairs.dedup();
    let ws = words(cfg.seed ^ 0x7e45, 5);
    for &(l, rr) in &pairs {
        for twist in [TwistKind::Hermitian, TwistKind::Inverse] {
            run.check(
                format!("gamma.tensors.{}.{twist}", pair_name(l, rr)),
                "generalized gamma matrices: fit, covariance and tracelessness",
                replay(cfg, json!({ "left": label(l), "right": label(rr), "twist": twist.as_str(), "metric": metric })),
                cfg.tol.rel,
                |run| {
                    let (lr, rrep) = (ab_rep(l.0, l.1)?, ab_rep(rr.0, rr.1)?);
                    let ts = run.tensors(&lr, &rrep, twist)?;
                    let mut worst: f64 = 0.0;
                    let mut ks = Vec::new();
                    for t in &ts {
                        ks.push(t.k.to_string());
                        worst = worst.max(t.residual).max(t.tensor.trace_defect());
                        for w in &ws {
                            worst = worst.max(t.tensor.covariance_defect(&lr, &rrep, twist, w, &metric)?);
                        }
                    }
                    Ok(Outcome::with(worst, format!("K = {}", ks.join(", "))))
                },
            );
        }
    }

    let candidates: Vec<_> = pairs
        .iter()
        .flat_map(|&(l, rr)| {
            [TwistKind::Hermitian, TwistKind::Inverse].map(|tw| (ab_rep(l.0, l.1).unwrap(), ab_rep(rr.0, rr.1).unwrap(), tw))
        })
        .collect();
    let cache_dir = run.cache.dir().display().to_string();
    run.check(
        "gamma.cache_spot_check".into(),
        "cached tensors agree with a fresh fit",
        replay(cfg, json!({ "cache_dir": cache_dir })),
        1e-10,
        |run| {
            Ok(match cache::spot_check(&run.cache, &candidates, cfg.seed)? {
                Some(s) => Outcome::with(s.deviation, s.key),
                None => Outcome::with(0.0, "no cached entries"),
            })
        },
    );
}

fn spinsum_suite(run: &mut Runner) {
    let cfg = run.cfg;
    for (l, rr, j) in same_j_jobs() {
        let base = format!("spinsum.{}.j={j}", pair_name(l, rr));
        let inputs = replay(cfg, json!({ "left": label(l), "right": label(rr), "j": j.to_string() }));
        for twist in [TwistKind::Hermitian, TwistKind::Inverse] {
            run.check(
                format!("{base}.{twist}.polynomial"),
                "spin sum as a polynomial with definite parity",
                inputs.clone(),
                cfg.tol.rel,
                |run| {
                    let job = run.job(l, rr, j)?;
                    let ts = run.tensors(job.left_rep(), job.right_rep(), twist)?;
                    let p = spin_sum_polynomial_with(&job, twist, &ts)?;
                    let degrees: Vec<_> = p.degrees.iter().map(|d| d.to_string()).collect();
                    Ok(Outcome::with(
                        p.on_shell_error.max(p.parity_defect.unwrap_or(0.0)),
                        format!("parity {:?}, degrees {}", p.parity_sign, degrees.join(",")),
                    ))
                },
            );
            run.check(
                format!("{base}.{twist}.covariance"),
                "Lorentz covariance of the spin sum",
                inputs.clone(),
                cfg.tol.rel,
                |run| {
                    let job = run.job(l, rr, j)?;
                    let mut s = Sampler::new(cfg.seed);
                    let mut worst: f64 = 0.0;
                    for _ in 0..word_count(cfg) {
                        let w = random_word(&mut s);
                        let p = crate::sampling::random_on_shell(&mut s, SUITE_MASS);
                        worst = worst.max(spinsum::covariance_defect(&job, twist, &w, &p)?);
                    }
                    Ok(Outcome::value(worst))
                },
            );
        }
    }

    run.check(
        "spinsum.dirac_table".into(),
        "Dirac field spin sum blocks",
        replay(cfg, json!({ "reps": ["(1/2,0)", "(0,1/2)"] })),
        cfg.tol.rel,
        |run| {
            let (w, a) = ((h(1), h(0)), (h(0), h(1)));
            let mut worst: f64 = 0.0;
            for p in on_shell_batch(cfg.seed, SUITE_MASS, cfg.samples) {
                let m = SUITE_MASS;
                let id = crate::linalg::identity(2);
                let blocks = [
                    (w, w, slash(&p, &sigma()) * r(-2.0)),
                    (w, a, &id * r(2.0 * m)),
                    (a, w, &id * r(2.0 * m)),
                    (a, a, slash(&p, &sigma_bar()) * r(-2.0)),
                ];
                for (l, rr, want) in blocks {
                    let got = spin_sum(&run.job(l, rr, h(1))?, &p)?;
                    worst = worst.max(max_diff(&got, &want) / max_abs(&want));
                }
            }
            Ok(Outcome::value(worst))
        },
    );

    for jj in [0, 2] {
        let vec = (h(1), h(1));
        run.check(
            format!("spinsum.omega_relation.j={}", h(jj)),
            "twisted spin sum from the ordinary one and the swap map",
            replay(cfg, json!({ "left": "(1/2,1/2)", "right": "(1/2,1/2)", "j": h(jj).to_string() })),
            cfg.tol.rel,
            |run| {
                let job = run.job(vec, vec, h(jj))?;
                let momenta = on_shell_batch(cfg.seed, SUITE_MASS, cfg.samples.min(50));
                let rel = twist_relation(&job, &job, &momenta, &words(cfg.seed, 5))?;
                Ok(Outcome::with(
                    rel.corrected_residual.max(rel.phase_residual).max(rel.intertwining_residual),
                    format!(
                        "swap phase {:+.0}, residual without the phase {:.3e}",
                        rel.phase.re, rel.literal_residual
                    ),
                ))
            },
        );
    }

    for rep in standard_reps() {
        for j in HalfInt::coupled(rep.0, rep.1) {
            run.check(
                format!("spinsum.intertwiner.{}.j={j}", label(rep)),
                "rest-frame intertwiners u(0) and v(0)",
                replay(cfg, json!({ "rep": label(rep), "j": j.to_string() })),
                1e-10,
                |_| {
                    let set = build_coefficients(&ab_rep(rep.0, rep.1)?, j, SUITE_MASS)?;
                    let mut s = Sampler::new(cfg.seed);
                    let rots: Vec<_> = (0..20).map(|_| random_rotation(&mut s)).collect();
                    Ok(Outcome::value(set.isometry_defect().max(set.intertwining_defect(&rots)?)))
                },
            );
        }
    }
}

fn fieldeq_suite(run: &mut Runner) {
    let cfg = run.cfg;
    for (l, rr, j) in same_j_jobs() {
        run.check(
            format!("fieldeq.{}.j={j}", pair_name(l, rr)),
            "field equation from the twisted spin sum",
            replay(cfg, json!({ "left": label(l), "right": label(rr), "j": j.to_string() })),
            cfg.tol.rel.max(FIELD_TOL.min(cfg.tol.rel)),
            |run| {
                let job = run.job(l, rr, j)?;
                let ts = run.tensors(job.left_rep(), job.right_rep(), TwistKind::Inverse)?;
                let rep = field::verify_field_equation_with(&job, &ts, cfg.samples, cfg.seed)?;
                let mut residual = rep.u_residual.max(rep.v_residual).max(rep.position_residual);
                if !rep.phases_cancel {
                    residual = f64::INFINITY;
                }
                Ok(Outcome::with(
                    residual,
                    format!("v phase {:+}, reflection phase {:+}; {}", rep.v_phase, rep.reflection_phase, rep.rendering.join("; ")),
                ))
            },
        );
    }

    for (l, rr, want) in [
        ((h(1), h(0)), (h(0), h(1)), "m φ = i σ^μ ∂_μ χ"),
        ((h(0), h(1)), (h(1), h(0)), "m χ = i σ̄^μ ∂_μ φ"),
    ] {
        run.check(
            format!("fieldeq.weyl_rendering.{}", pair_name(l, rr)),
            "Weyl equations in position space",
            replay(cfg, json!({ "left": label(l), "right": label(rr), "expected": want })),
            0.0,
            |run| {
                let job = run.job(l, rr, h(1))?;
                let ts = run.tensors(job.left_rep(), job.right_rep(), TwistKind::Inverse)?;
                let rep = field::verify_field_equation_with(&job, &ts, cfg.samples, cfg.seed)?;
                let got = rep.rendering.first().cloned().unwrap_or_default();
                Ok(if same_equation(&got, want) { Outcome::with(0.0, got) } else { Outcome::with(1.0, got) })
            },
        );
    }

    run.check(
        "fieldeq.proca".into(),
        "Proca equation and transversality of the vector field",
        replay(cfg, json!({ "rep": "vector" })),
        cfg.tol.rel,
        |_| {
            let rep = field::proca_report(SUITE_MASS, cfg.samples, cfg.seed)?;
            let shape = (rep.alpha - 1.0).abs().max((rep.beta + 0.25).abs()).max((rep.gamma - 0.75).abs());
            let residual = rep
                .rest_residual
                .max(rep.transversality)
                .max(rep.proca_residual)
                .max(rep.decomposition_residual)
                .max(shape)
                .max(rep.field.u_residual.max(rep.field.v_residual).max(rep.field.position_residual));
            Ok(Outcome::with(residual, rep.rendering.join("; ")))
        },
    );
}

fn statistics_suite(run: &mut Runner) {
    let cfg = run.cfg;
    for (name, a, b, j, want) in [
        ("scalar", h(0), h(0), h(0), Statistics::Bose),
        ("weyl", h(1), h(0), h(1), Statistics::Fermi),
        ("vector", h(1), h(1), h(2), Statistics::Bose),
    ] {
        run.check(
            format!("statistics.example.{name}"),
            "spin-statistics examples",
            replay(cfg, json!({ "A": a.to_string(), "B": b.to_string(), "j": j.to_string() })),
            0.0,
            |_| {
                let rep = statistics_for(a, b, j)?;
                let ok = rep.statistics == want && rep.required_sign == j.parity_sign();
                Ok(Outcome::with(
                    if ok { 0.0 } else { 1.0 },
                    format!("{} statistics, sign {:+}; {}", rep.statistics, rep.required_sign, rep.kappa_lambda_constraint),
                ))
            },
        );
    }

    run.check(
        "statistics.causality".into(),
        "equal-time vanishing requires the spin-statistics sign",
        replay(cfg, json!({ "reps": standard_reps().into_iter().map(label).collect::<Vec<_>>() })),
        0.0,
        |_| {
            let mut bad = Vec::new();
            let mut count = 0;
            for l in standard_reps() {
                for rr in standard_reps() {
                    if !(l.0 + l.1 - rr.0 - rr.1).is_integer() {
                        continue;
                    }
                    count += 1;
                    let s = (l.0 + l.1).parity_sign();
                    let good = causality_constraint(l.0, l.1, rr.0, rr.1, s)?;
                    let wrong = causality_constraint(l.0, l.1, rr.0, rr.1, -s)?;
                    if !good.holds() || wrong.p_coefficient == 0 {
                        bad.push(pair_name(l, rr));
                    }
                }
            }
            Ok(if bad.is_empty() {
                Outcome::with(0.0, format!("{count} pairs"))
            } else {
                Outcome::with(bad.len() as f64, format!("violations: {}", bad.join(" ")))
            })
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dir: &std::path::Path) -> RunConfig {
        RunConfig { cache_dir: Some(dir.to_path_buf()), samples: 20, ..RunConfig::default() }
    }

    #[test]
    fn job_list() {
        let jobs = same_j_jobs();
        assert_eq!(jobs.len(), 26);
        assert!(jobs.contains(&((h(1), h(1)), (h(1), h(1)), h(0))));
    }

    #[test]
    fn statistics_rows() {
        let dir = tempfile::tempdir().unwrap();
        let rep = run_suite(Suite::Statistics, &cfg(dir.path())).unwrap();
        assert!(rep.passed, "{}", rep.to_text());
        for n in ["scalar", "weyl", "vector"] {
            assert!(rep.check(&format!("statistics.example.{n}")).is_some());
        }
    }

    #[test]
    fn metric_fault_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(dir.path());
        c.metric_fault = true;
        let rep = run_suite(Suite::Gamma, &c).unwrap();
        assert!(!rep.passed);
        let chk = rep.check("gamma.sigma_covariance").unwrap();
        assert_eq!(chk.status, Status::Fail);
        assert_eq!(chk.inputs["metric"], json!([1.0, 1.0, 1.0, 1.0]));
    }

    #[test]
    fn rejects_small_sample_counts() {
        let c = RunConfig { samples: 5, ..RunConfig::default() };
        assert!(run_suite(Suite::Statistics, &c).is_err());
    }
}
