//! Spin sums `π(p) = 2p⁰ u^L(p) u^R(p)†` and twisted spin sums
//! `Π(p) = D^L(L(p)) u^L(0) u^R(0)† D^R(L(p))⁻¹`, their polynomial forms, and
//! the swap map relating the two.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{self, FittedTensor, TwistKind, CONVENTION_VERSION};
use crate::halfint::HalfInt;
use crate::intertwiner::{build_coefficients, CoefficientSet};
use crate::linalg::{self, c, max_abs, max_diff, r, CMatrix};
use crate::lorentz::{ab_rep, rep_matrix, standard_boost, FieldRep, FourVector, LorentzWord};
use crate::poly::MatrixPolynomial;
use crate::sampling::on_shell_batch;

/// Residual allowed when expanding the rest value in the seed basis.
pub const XI_TOL: f64 = 1e-10;

/// Relative on-shell agreement required of the polynomial form.
pub const POLY_TOL: f64 = 1e-8;

/// Number and seed of the on-shell points used to certify a polynomial.
pub const POLY_SAMPLES: usize = 100;
pub const POLY_SEED: u64 = 0x9017;

/// A pair of field representations sharing a massive spin-`j` particle.
#[derive(Clone, Debug)]
pub struct SpinSumJob {
    pub left: CoefficientSet,
    pub right: CoefficientSet,
    pub j: HalfInt,
    pub m: f64,
}

impl SpinSumJob {
    pub fn new(left: &FieldRep, right: &FieldRep, j: HalfInt, m: f64) -> Result<Self> {
        Ok(SpinSumJob {
            left: build_coefficients(left, j, m)?,
            right: build_coefficients(right, j, m)?,
            j,
            m,
        })
    }

    /// A job between two `(A, B)` representations.
    pub fn labeled(l: (HalfInt, HalfInt), rr: (HalfInt, HalfInt), j: HalfInt, m: f64) -> Result<Self> {
        SpinSumJob::new(&ab_rep(l.0, l.1)?, &ab_rep(rr.0, rr.1)?, j, m)
    }

    pub fn left_rep(&self) -> &FieldRep {
        &self.left.rep
    }

    pub fn right_rep(&self) -> &FieldRep {
        &self.right.rep
    }

    /// `(A, B, C, D)` when both sides are labeled.
    pub fn labels(&self) -> Result<[HalfInt; 4]> {
        let (a, b) = self.left.rep.label()?;
        let (c, d) = self.right.rep.label()?;
        Ok([a, b, c, d])
    }

    /// `2m u^L(0) u^R(0)†` or `u^L(0) u^R(0)†`.
    pub fn rest_value(&self, twist: TwistKind) -> CMatrix {
        let base = &self.left.u0 * self.right.u0.adjoint();
        match twist {
            TwistKind::Hermitian => base * r(2.0 * self.m),
            TwistKind::Inverse => base,
        }
    }

    /// Expected parity `(-1)^{2A+2D}` (Hermitian) or `(-1)^{2A+2C}` (Inverse).
    pub fn parity_sign(&self, twist: TwistKind) -> Result<i32> {
        let [a, _, c, d] = self.labels()?;
        Ok(match twist {
            TwistKind::Hermitian => (a + d).parity_sign(),
            TwistKind::Inverse => (a + c).parity_sign(),
        })
    }

    /// Allowed total degrees `d` of the twisted polynomial:
    /// `max{|A-C|,|B-D|} ≤ d/2 ≤ min{A+C,B+D}`.
    pub fn twisted_degree_bounds(&self) -> Result<(u32, u32)> {
        let [a, b, c, d] = self.labels()?;
        let lo = (a - c).abs().max((b - d).abs());
        let hi = (a + c).min(b + d);
        Ok((lo.twice() as u32, hi.twice() as u32))
    }
}

/// `ẑ ↦ n̂` as a single rotation.
fn align_z(n: [f64; 3]) -> LorentzWord {
    let s = n[0].hypot(n[1]);
    if s == 0.0 {
        return if n[2] > 0.0 { LorentzWord::identity() } else { LorentzWord::rotation([1.0, 0.0, 0.0], std::f64::consts::PI) };
    }
    LorentzWord::rotation([-n[1] / s, n[0] / s, 0.0], s.atan2(n[2]))
}

fn diagonal(m: &CMatrix) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).any(|(i, j)| i != j && m[(i, j)] != linalg::ZERO);
    (!off).then(|| (0..n).map(|i| m[(i, i)]).collect())
}

/// `D^L(L(p)) l0 r0† twist(D^R(L(p)))` for rest matrices intertwining the
/// same rotations. When `J_z` and `K_z` are diagonal on both sides the boost
/// is applied as `D(R) (e_i X_ij f_j) D(R)†` with `R ẑ = p̂`, which keeps the
/// error relative to the result even for large rapidities.
fn boosted_rest(job: &SpinSumJob, twist: TwistKind, p: &FourVector, l0: &CMatrix, r0: &CMatrix) -> Result<CMatrix> {
    let (lr, rr) = (job.left_rep(), job.right_rep());
    let boost = standard_boost(p, job.m)?;
    let x = l0 * r0.adjoint();
    let diag = |rep: &FieldRep| diagonal(&rep.j[2]).zip(diagonal(&rep.k[2]));
    let (Some((jl, kl)), Some((jr, kr))) = (diag(lr), diag(rr)) else {
        return Ok(rep_matrix(lr, &boost)? * x * twist.image(rr, &boost)?);
    };
    let Some(prim) = boost.0.first() else {
        return Ok(x);
    };
    let phi = prim.parameter;
    let el: Vec<Complex64> = kl.iter().map(|k| (k * c(0.0, -phi)).exp()).collect();
    let fr: Vec<Complex64> = kr
        .iter()
        .map(|k| {
            let e = (k * c(0.0, -phi)).exp();
            match twist {
                TwistKind::Hermitian => e.conj(),
                TwistKind::Inverse => e.inv(),
            }
        })
        .collect();
    let mut mid = linalg::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            // rotation invariance forces equal J_z weights
            if (jl[i] - jr[j]).norm() < 0.25 {
                mid[(i, j)] = el[i] * x[(i, j)] * fr[j];
            }
        }
    }
    let rot = align_z(prim.axis);
    Ok(rep_matrix(lr, &rot)? * mid * rep_matrix(rr, &rot)?.adjoint())
}

pub fn spin_sum(job: &SpinSumJob, p: &FourVector) -> Result<CMatrix> {
    Ok(boosted_rest(job, TwistKind::Hermitian, p, &job.left.u0, &job.right.u0)? * r(2.0 * job.m))
}

/// The same sum built from `v(p)`.
pub fn spin_sum_v(job: &SpinSumJob, p: &FourVector) -> Result<CMatrix> {
    Ok(boosted_rest(job, TwistKind::Hermitian, p, &job.left.v0, &job.right.v0)? * r(2.0 * job.m))
}

pub fn twisted_spin_sum(job: &SpinSumJob, p: &FourVector) -> Result<CMatrix> {
    boosted_rest(job, TwistKind::Inverse, p, &job.left.u0, &job.right.u0)
}

pub fn twisted_spin_sum_v(job: &SpinSumJob, p: &FourVector) -> Result<CMatrix> {
    boosted_rest(job, TwistKind::Inverse, p, &job.left.v0, &job.right.v0)
}

/// Direct evaluation for either twist.
pub fn direct(job: &SpinSumJob, twist: TwistKind, p: &FourVector) -> Result<CMatrix> {
    match twist {
        TwistKind::Hermitian => spin_sum(job, p),
        TwistKind::Inverse => twisted_spin_sum(job, p),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiEntry {
    pub k: HalfInt,
    pub xi: Complex64,
}

/// Coefficients `ξ_K` with `π(p) = Σ_K ξ_K m^{-2K} T^{μ1…μ2K} p_{μ1}…p_{μ2K}`
/// on shell, relative to seeds normalized by [`gamma::normalize_dominant`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiTable {
    pub m: f64,
    pub twist: TwistKind,
    pub convention: u32,
    pub entries: Vec<XiEntry>,
    pub residual: f64,
}

impl XiTable {
    pub fn get(&self, k: HalfInt) -> Option<Complex64> {
        self.entries.iter().find(|e| e.k == k).map(|e| e.xi)
    }
}

/// Solves `rest value = Σ_K c_K seed_K` and sets `ξ_K = (-1)^{2K} c_K`.
pub fn xi_extract(job: &SpinSumJob, twist: TwistKind, seeds: &[(HalfInt, CMatrix)]) -> Result<XiTable> {
    let rest = job.rest_value(twist);
    let n = rest.nrows() * rest.ncols();
    let mut basis = linalg::zeros(n, seeds.len());
    for (col, (_, s)) in seeds.iter().enumerate() {
        if s.shape() != rest.shape() {
            return Err(Error::Dimension("seed shape differs from the spin sum".into()));
        }
        basis.set_column(col, &linalg::vectorize(s).column(0));
    }
    let target = linalg::vectorize(&rest);
    let scale = linalg::frobenius(&rest).max(1.0);
    let (x, residual) = if seeds.is_empty() {
        (linalg::zeros(0, 1), linalg::frobenius(&rest))
    } else {
        linalg::lstsq(&basis, &target)?
    };
    let residual = residual / scale;
    if residual > XI_TOL {
        return Err(Error::Verification(format!(
            "rest value is not spanned by the invariant seeds (residual {residual:.3e})"
        )));
    }
    let entries = seeds
        .iter()
        .enumerate()
        .map(|(i, (k, _))| XiEntry { k: *k, xi: x[(i, 0)] * f64::from(k.parity_sign()) })
        .collect();
    Ok(XiTable { m: job.m, twist, convention: CONVENTION_VERSION, entries, residual })
}

/// The polynomial form of a (twisted) spin sum and its certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinSumPolynomial {
    pub twist: TwistKind,
    pub polynomial: MatrixPolynomial,
    pub xi: XiTable,
    /// Largest relative on-shell deviation from the direct evaluation.
    pub on_shell_error: f64,
    pub samples: usize,
    pub sample_seed: u64,
    pub parity_sign: Option<i32>,
    pub parity_defect: Option<f64>,
    pub degrees: BTreeSet<u32>,
    pub degree_bounds: Option<(u32, u32)>,
}

/// Assembles `Σ_K ξ_K m^{-2K} T_K(p)` from fitted tensors and certifies it
/// against the direct evaluation.
pub fn spin_sum_polynomial_with(job: &SpinSumJob, twist: TwistKind, tensors: &[FittedTensor]) -> Result<SpinSumPolynomial> {
    let seeds: Vec<_> = tensors.iter().map(|t| (t.k, t.seed.clone())).collect();
    let xi = xi_extract(job, twist, &seeds)?;
    let mut poly = MatrixPolynomial::zero(job.left_rep().dim, job.right_rep().dim);
    let size = max_abs(&job.rest_value(twist)).max(f64::MIN_POSITIVE);
    for (t, entry) in tensors.iter().zip(&xi.entries) {
        if t.twist != twist {
            return Err(Error::Fit(format!("tensor built for the {} twist", t.twist)));
        }
        // a vanishing ξ_K contributes no monomials
        if entry.xi.norm() <= XI_TOL * size {
            continue;
        }
        poly.add_contraction(&t.tensor, entry.xi * job.m.powi(-(t.k.twice())))?;
    }
    poly.prune(1e-12 * size);

    let mut worst: f64 = 0.0;
    for p in on_shell_batch(POLY_SEED, job.m, POLY_SAMPLES) {
        let want = direct(job, twist, &p)?;
        let got = poly.eval(&p);
        worst = worst.max(max_diff(&got, &want) / max_abs(&want).max(f64::MIN_POSITIVE));
    }
    if worst > POLY_TOL {
        return Err(Error::Verification(format!("polynomial differs from the direct sum by {worst:.3e} on shell")));
    }

    let labeled = job.labels().is_ok();
    let parity_sign = if labeled { Some(job.parity_sign(twist)?) } else { None };
    let parity_defect = parity_sign.map(|s| poly.parity_defect(s));
    if let Some(d) = parity_defect {
        if d > 0.0 {
            return Err(Error::Parity(format!("parity defect {d:.3e} for sign {}", parity_sign.unwrap())));
        }
    }
    let degrees = poly.degrees();
    let degree_bounds = match (twist, labeled) {
        (TwistKind::Inverse, true) => Some(job.twisted_degree_bounds()?),
        _ => None,
    };
    if let Some((lo, hi)) = degree_bounds {
        if degrees.iter().any(|d| *d < lo || *d > hi) {
            return Err(Error::Verification(format!("degrees {degrees:?} outside [{lo}, {hi}]")));
        }
    }
    Ok(SpinSumPolynomial {
        twist,
        polynomial: poly,
        xi,
        on_shell_error: worst,
        samples: POLY_SAMPLES,
        sample_seed: POLY_SEED,
        parity_sign,
        parity_defect,
        degrees,
        degree_bounds,
    })
}

pub fn spin_sum_polynomial(job: &SpinSumJob, twist: TwistKind) -> Result<SpinSumPolynomial> {
    let tensors = gamma::build_all(job.left_rep(), job.right_rep(), twist)?;
    spin_sum_polynomial_with(job, twist, &tensors)
}

/// Largest relative deviation of `π(Λp)` from `D^L(Λ) π(p) twist(D^R(Λ))`.
pub fn covariance_defect(job: &SpinSumJob, twist: TwistKind, w: &LorentzWord, p: &FourVector) -> Result<f64> {
    let q = crate::lorentz::apply(w, p)?;
    let q = FourVector::on_shell(q.spatial(), job.m);
    let lhs = direct(job, twist, &q)?;
    let base = direct(job, twist, p)?;
    let rhs = rep_matrix(job.left_rep(), w)? * &base * twist.image(job.right_rep(), w)?;
    Ok(max_diff(&lhs, &rhs) / max_abs(&base).max(f64::MIN_POSITIVE))
}

/// The permutation `V^C ⊗ V^D → V^D ⊗ V^C`.
pub fn omega(c: HalfInt, d: HalfInt) -> CMatrix {
    let (nc, nd) = (c.multiplicity(), d.multiplicity());
    let mut out = linalg::zeros(nc * nd, nc * nd);
    for ic in 0..nc {
        for id in 0..nd {
            out[(id * nc + ic, ic * nd + id)] = linalg::ONE;
        }
    }
    out
}

/// Comparison of `2m Π^{AB,DC}(p)` with `π^{AB,CD}(p) Ω_{CD}†`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistRelation {
    /// `max ‖2m Π^{AB,DC} - π^{AB,CD} Ω†‖ / ‖π‖` over the momenta.
    pub literal_residual: f64,
    /// `Ω u^{CD}(0) = φ u^{DC}(0)`.
    pub phase: Complex64,
    pub phase_residual: f64,
    /// The same comparison with `φ π Ω†` on the right.
    pub corrected_residual: f64,
    /// `max ‖D^{DC}(Λ)^{-†} Ω - Ω D^{CD}(Λ)‖` over the words.
    pub intertwining_residual: f64,
}

/// `dc` pairs `(A,B)` with `(D,C)`, `cd` pairs `(A,B)` with `(C,D)`.
pub fn twist_relation(dc: &SpinSumJob, cd: &SpinSumJob, momenta: &[FourVector], words: &[LorentzWord]) -> Result<TwistRelation> {
    let [a, b, c, d] = cd.labels()?;
    let [a2, b2, d2, c2] = dc.labels()?;
    if (a, b, c, d) != (a2, b2, c2, d2) || cd.j != dc.j || cd.m != dc.m {
        return Err(Error::Verification("jobs do not form an (AB,CD)/(AB,DC) pair".into()));
    }
    let om = omega(c, d);
    let m = cd.m;

    let moved = &om * &cd.right.u0;
    let target = &dc.right.u0;
    let overlap = (target.adjoint() * &moved).trace() / Complex64::from(target.ncols() as f64);
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { linalg::ONE };
    let phase_residual = max_diff(&moved, &(target * phase));

    let mut literal: f64 = 0.0;
    let mut corrected: f64 = 0.0;
    for p in momenta {
        let lhs = twisted_spin_sum(dc, p)? * r(2.0 * m);
        let rhs = spin_sum(cd, p)? * om.adjoint();
        let scale = max_abs(&rhs).max(f64::MIN_POSITIVE);
        literal = literal.max(max_diff(&lhs, &rhs) / scale);
        corrected = corrected.max(max_diff(&lhs, &(&rhs * phase)) / scale);
    }

    let mut inter: f64 = 0.0;
    for w in words {
        let ddc = rep_matrix(dc.right_rep(), w)?;
        let dcd = rep_matrix(cd.right_rep(), w)?;
        let lhs = linalg::inverse(&ddc.adjoint())? * &om;
        let rhs = &om * dcd;
        inter = inter.max(max_diff(&lhs, &rhs) / max_abs(&rhs).max(1.0));
    }
    Ok(TwistRelation {
        literal_residual: literal,
        phase,
        phase_residual,
        corrected_residual: corrected,
        intertwining_residual: inter,
    })
}
