//! Field equations `ψ^{AB} = Π^{AB,CD}(-i∂) ψ^{CD}` checked on coefficient
//! functions, with readable renderings for the Weyl and Proca cases.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{FittedTensor, TwistKind};
use crate::halfint::HalfInt;
use crate::linalg::{self, max_abs, max_diff, r, CMatrix};
use crate::lorentz::{sigma, sigma_bar, vector_field_rep, FieldRep, FourVector, METRIC};
use crate::poly::MatrixPolynomial;
use crate::sampling::{on_shell_batch, Sampler};
use crate::spinsum::{spin_sum_polynomial, spin_sum_polynomial_with, twisted_spin_sum, SpinSumJob};

/// Residual bound for the momentum-space field equations.
pub const FIELD_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldEquationReport {
    pub left: String,
    pub right: String,
    pub j: HalfInt,
    pub m: f64,
    pub operator: MatrixPolynomial,
    pub degrees: BTreeSet<u32>,
    /// `max ‖u^{AB}(p) - Π(p) u^{CD}(p)‖`, relative to the larger side.
    pub u_residual: f64,
    /// `max ‖(-1)^{2B} v^{AB}(p) - (-1)^{2B+2D} Π(p) (-1)^{2D} v^{CD}(p)‖`
    pub v_residual: f64,
    /// The negative-frequency equation with `Π(-p)` and both phases.
    pub position_residual: f64,
    /// `(-1)^{2B+2D}`
    pub v_phase: i32,
    /// `(-1)^{2A+2C}`, from `Π(-p) = (-1)^{2A+2C} Π(p)`.
    pub reflection_phase: i32,
    pub phases_cancel: bool,
    pub samples: usize,
    pub seed: u64,
    pub rendering: Vec<String>,
}

impl FieldEquationReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.u_residual <= tol && self.v_residual <= tol && self.position_residual <= tol && self.phases_cancel
    }
}

/// Symbol used for a field in rendered equations.
pub fn field_symbol(rep: &FieldRep) -> String {
    if rep.name == "vector" {
        return "B".into();
    }
    match rep.label {
        Some((a, b)) if a == HalfInt::HALF && b == HalfInt::ZERO => "φ".into(),
        Some((a, b)) if a == HalfInt::ZERO && b == HalfInt::HALF => "χ".into(),
        Some((a, b)) => format!("ψ^{{{a},{b}}}"),
        None => format!("ψ[{}]", rep.name),
    }
}

fn phase_of(rep: &FieldRep, pick: fn((HalfInt, HalfInt)) -> HalfInt) -> Result<i32> {
    Ok(pick(rep.label()?).parity_sign())
}

/// Writes `Π` as `k p_μ M^μ` with `M = σ` or `σ̄` when possible.
pub fn match_slash(poly: &MatrixPolynomial, tol: f64) -> Option<(f64, &'static str)> {
    if poly.dim_l != 2 || poly.dim_r != 2 || poly.degrees() != BTreeSet::from([1]) {
        return None;
    }
    let coef = |mu: usize| {
        let mut e = [0u32; 4];
        e[mu] = 1;
        poly.terms.get(&e).cloned().unwrap_or_else(|| linalg::zeros(2, 2))
    };
    let k = -coef(0)[(0, 0)].re;
    for (name, basis) in [("σ", sigma()), ("σ̄", sigma_bar())] {
        let fits = (0..4).all(|mu| max_diff(&coef(mu), &(&basis[mu] * r(k * METRIC[mu]))) <= tol * k.abs().max(1.0));
        if fits {
            return Some((k, name));
        }
    }
    None
}

fn fmt_num(x: f64) -> String {
    let rounded = (x * 1e6).round() / 1e6;
    if rounded == rounded.trunc() {
        format!("{}", rounded as i64)
    } else {
        format!("{rounded}")
    }
}

fn render(job: &SpinSumJob, poly: &MatrixPolynomial) -> Vec<String> {
    let lhs = field_symbol(job.left_rep());
    let rhs = field_symbol(job.right_rep());
    let mut out = Vec::new();
    let size = poly.terms.values().map(max_abs).fold(0.0, f64::max).max(1.0);
    if poly.degrees() == BTreeSet::from([0]) {
        let c = &poly.terms[&[0; 4]];
        if c.is_square() && max_diff(c, &linalg::identity(c.nrows())) <= 1e-9 * size {
            out.push(format!("{lhs} = {rhs}"));
            return out;
        }
    }
    if let Some((k, m_sym)) = match_slash(poly, 1e-9) {
        // ψ = k (-i∂_μ) M^μ ψ'  ⇔  m ψ = (-k m) i M^μ ∂_μ ψ'
        let factor = -k * job.m;
        let coef = if (factor - 1.0).abs() < 1e-9 {
            String::new()
        } else if (factor + 1.0).abs() < 1e-9 {
            "-".into()
        } else {
            format!("{} ", fmt_num(factor))
        };
        out.push(format!("m {lhs} = {coef}i {m_sym}^μ ∂_μ {rhs}"));
        return out;
    }
    let degrees: Vec<String> = poly.degrees().iter().map(|d| d.to_string()).collect();
    out.push(format!("{lhs} = Π(-i∂) {rhs}   (monomial degrees {})", degrees.join(", ")));
    out
}

/// Checks the field equations of the pair at seeded on-shell momenta.
pub fn verify_field_equation(job: &SpinSumJob, samples: usize, seed: u64) -> Result<FieldEquationReport> {
    let poly = spin_sum_polynomial(job, TwistKind::Inverse)?;
    field_report(job, poly.polynomial, samples, seed)
}

/// As [`verify_field_equation`] with tensors supplied by the caller.
pub fn verify_field_equation_with(
    job: &SpinSumJob,
    tensors: &[FittedTensor],
    samples: usize,
    seed: u64,
) -> Result<FieldEquationReport> {
    let poly = spin_sum_polynomial_with(job, TwistKind::Inverse, tensors)?;
    field_report(job, poly.polynomial, samples, seed)
}

fn field_report(job: &SpinSumJob, op: MatrixPolynomial, samples: usize, seed: u64) -> Result<FieldEquationReport> {
    let b = phase_of(job.left_rep(), |l| l.1)?;
    let d = phase_of(job.right_rep(), |l| l.1)?;
    let [a_lab, b_lab, c_lab, d_lab] = job.labels()?;
    let v_phase = (b_lab + d_lab).parity_sign();
    let reflection_phase = (a_lab + c_lab).parity_sign();
    let phases_cancel = v_phase * reflection_phase == 1;

    let (mut ures, mut vres, mut xres) = (0.0f64, 0.0f64, 0.0f64);
    let reflected = op.reflected();
    for p in on_shell_batch(seed, job.m, samples) {
        let pi = twisted_spin_sum(job, &p)?;
        let ul = job.left.u_at(&p)?;
        let ur = job.right.u_at(&p)?;
        let scale = max_abs(&ul).max(max_abs(&pi) * max_abs(&ur)).max(f64::MIN_POSITIVE);
        ures = ures.max(max_diff(&ul, &(&pi * &ur)) / scale);

        let vl = job.left.v_at(&p)? * r(f64::from(b));
        let vr = job.right.v_at(&p)? * r(f64::from(d));
        vres = vres.max(max_diff(&vl, &(&pi * &vr * r(f64::from(v_phase)))) / scale);

        let pim = reflected.eval(&p);
        let pos = &pim * &vr * r(f64::from(v_phase * reflection_phase));
        let scale = max_abs(&vl).max(max_abs(&pim) * max_abs(&vr)).max(f64::MIN_POSITIVE);
        xres = xres.max(max_diff(&vl, &pos) / scale);
    }
    let rendering = render(job, &op);
    Ok(FieldEquationReport {
        left: job.left_rep().key(),
        right: job.right_rep().key(),
        j: job.j,
        m: job.m,
        degrees: op.degrees(),
        operator: op,
        u_residual: ures,
        v_residual: vres,
        position_residual: xres,
        v_phase,
        reflection_phase,
        phases_cancel,
        samples,
        seed,
        rendering,
    })
}

/// The vector field: rest-frame spin sum, transversality and the Proca form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcaReport {
    pub m: f64,
    pub field: FieldEquationReport,
    #[serde(with = "linalg::matrix_serde")]
    pub rest_spin_sum: CMatrix,
    /// `‖π(0) - 2m diag(0,1,1,1)‖`
    pub rest_residual: f64,
    /// `Π(p)^ν_σ = α p^ν p_σ + β p² δ^ν_σ + γ δ^ν_σ` off shell.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub decomposition_residual: f64,
    /// `max |p_μ u^μ(p, σ)|`
    pub transversality: f64,
    /// `max ‖-p² u + p (p·u) - m² u‖`
    pub proca_residual: f64,
    pub rendering: Vec<String>,
}

fn eta_dot(p: &[f64; 4], u: &CMatrix, col: usize) -> num_complex::Complex64 {
    (0..4).map(|k| u[(k, col)] * (METRIC[k] * p[k])).sum()
}

pub fn proca_report(m: f64, samples: usize, seed: u64) -> Result<ProcaReport> {
    let v = vector_field_rep();
    let job = SpinSumJob::new(&v, &v, HalfInt::ONE, m)?;
    let field = verify_field_equation(&job, samples, seed)?;

    let rest = job.rest_value(TwistKind::Hermitian);
    let want = linalg::diag(&[r(0.0), r(2.0 * m), r(2.0 * m), r(2.0 * m)]);
    let rest_residual = max_diff(&rest, &want);

    // fit α, β, γ on off-shell points
    let mut sampler = Sampler::new(seed ^ 0xa11ce);
    let points: Vec<[f64; 4]> = (0..8).map(|_| std::array::from_fn(|_| sampler.uniform(-2.0, 2.0))).collect();
    let mut a = linalg::zeros(16 * points.len(), 3);
    let mut rhs = linalg::zeros(16 * points.len(), 1);
    for (s, p) in points.iter().enumerate() {
        let val = field.operator.eval(&FourVector(*p));
        let p2: f64 = (0..4).map(|k| METRIC[k] * p[k] * p[k]).sum();
        for nu in 0..4 {
            for sg in 0..4 {
                let row = 16 * s + 4 * nu + sg;
                let delta = if nu == sg { 1.0 } else { 0.0 };
                a[(row, 0)] = r(p[nu] * METRIC[sg] * p[sg]);
                a[(row, 1)] = r(p2 * delta);
                a[(row, 2)] = r(delta);
                rhs[(row, 0)] = val[(nu, sg)];
            }
        }
    }
    let (x, res) = linalg::lstsq(&a, &rhs)?;
    let (alpha, beta, gamma) = (x[(0, 0)].re, x[(1, 0)].re, x[(2, 0)].re);
    let decomposition_residual = res / linalg::frobenius(&rhs).max(1.0);
    if decomposition_residual > FIELD_TOL {
        return Err(Error::Verification(format!(
            "vector twisted spin sum is not of the form α pp + β p² + γ (residual {decomposition_residual:.3e})"
        )));
    }

    let (mut trans, mut proca) = (0.0f64, 0.0f64);
    for p in on_shell_batch(seed, m, samples) {
        let u = job.left.u_at(&p)?;
        let p2 = p.dot(&p);
        for col in 0..u.ncols() {
            let pu = eta_dot(&p.0, &u, col);
            trans = trans.max(pu.norm());
            for k in 0..4 {
                let e = -u[(k, col)] * p2 + pu * p.0[k] - u[(k, col)] * (m * m);
                proca = proca.max(e.norm());
            }
        }
    }

    let am = alpha * m * m;
    let bm = beta * m * m;
    let shell = gamma - bm;
    let mut rendering = vec![
        format!(
            "Π(p)^ν_σ = {} δ^ν_σ + {} p^ν p_σ / m² + {} p² δ^ν_σ / m²",
            fmt_num(gamma),
            fmt_num(am),
            fmt_num(bm)
        ),
        format!("on shell: Π(p)^ν_σ = {} δ^ν_σ + {} p^ν p_σ / m²", fmt_num(shell), fmt_num(am)),
    ];
    if (shell - 1.0).abs() < 1e-9 && am.abs() > 1e-9 {
        rendering.push("∂^ν ∂^μ B_μ = 0".into());
        rendering.push("∂^μ B_μ = 0".into());
        rendering.push("∂_μ(∂^μ B^ν - ∂^ν B^μ) - m² B^ν = 0".into());
        rendering.push("(∂_μ ∂^μ - m²) B^ν = 0 (mass shell)".into());
    }
    Ok(ProcaReport {
        m,
        field,
        rest_spin_sum: rest,
        rest_residual,
        alpha,
        beta,
        gamma,
        decomposition_residual,
        transversality: trans,
        proca_residual: proca,
        rendering,
    })
}

/// Whitespace-insensitive comparison of rendered equations.
pub fn same_equation(a: &str, b: &str) -> bool {
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    squash(a) == squash(b)
}
