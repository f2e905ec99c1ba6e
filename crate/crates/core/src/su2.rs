//! Spin-j representations of the rotation algebra.
//!
//! Every spin space is indexed by descending magnetic quantum number
//! `σ = j, j-1, ..., -j`; index `k` holds `σ = j - k`. Tensor products are
//! ordered left-factor-major. Phases follow Condon–Shortley.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{self, c, commutator, max_abs, r, CMatrix, Tolerance, I, ONE, ZERO};

/// Hermitian generators `Jx, Jy, Jz` of the spin-`j` representation.
#[derive(Clone, Debug)]
pub struct SpinTriple {
    pub j: HalfInt,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinTriple {
    pub fn as_array(&self) -> [CMatrix; 3] {
        [self.jx.clone(), self.jy.clone(), self.jz.clone()]
    }

    /// `J+ = Jx + i Jy`.
    pub fn raising(&self) -> CMatrix {
        &self.jx + &self.jy * I
    }

    /// `J- = Jx - i Jy`.
    pub fn lowering(&self) -> CMatrix {
        &self.jx - &self.jy * I
    }
}

/// `√(j(j+1) - σ(σ+1))`, the matrix element of `J+` from `σ` to `σ+1`.
fn ladder(j: HalfInt, sigma: HalfInt) -> f64 {
    let (j, s) = (j.value(), sigma.value());
    (j * (j + 1.0) - s * (s + 1.0)).max(0.0).sqrt()
}

pub fn spin_generators(j: HalfInt) -> Result<SpinTriple> {
    if j.is_negative() {
        return Err(Error::NegativeSpin(j));
    }
    let n = j.multiplicity();
    let mut jz = linalg::zeros(n, n);
    let mut up = linalg::zeros(n, n);
    for (k, sigma) in j.projections().enumerate() {
        jz[(k, k)] = r(sigma.value());
        if k > 0 {
            // row k-1 holds σ+1
            up[(k - 1, k)] = r(ladder(j, sigma));
        }
    }
    let down = up.adjoint();
    let jx = (&up + &down) * r(0.5);
    let jy = (&up - &down) * c(0.0, -0.5);
    Ok(SpinTriple { j, jx, jy, jz })
}

pub(crate) fn check_axis(axis: [f64; 3]) -> Result<()> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis { norm });
    }
    Ok(())
}

/// `n̂·J` for a triple of generators.
pub fn along(axis: [f64; 3], gens: &[CMatrix; 3]) -> CMatrix {
    &gens[0] * r(axis[0]) + &gens[1] * r(axis[1]) + &gens[2] * r(axis[2])
}

/// `exp(-i·angle·(n̂·J))` in the spin-`j` representation.
pub fn rotation_matrix(j: HalfInt, axis: [f64; 3], angle: f64) -> Result<CMatrix> {
    check_axis(axis)?;
    let gens = spin_generators(j)?.as_array();
    linalg::mat_exp(&(along(axis, &gens) * c(0.0, -angle)))
}

/// `K_j` with `(K_j)_{σ',σ} = (-1)^{j-σ} δ_{σ',-σ}`, so that
/// `D^{(j)}(R)^* = K_j† D^{(j)}(R) K_j`.
pub fn conjugation_matrix(j: HalfInt) -> CMatrix {
    let n = j.multiplicity();
    let mut k = linalg::zeros(n, n);
    for (col, sigma) in j.projections().enumerate() {
        let row = n - 1 - col; // index of -σ
        let sign = (j - sigma).phase().expect("j - σ is an integer");
        k[(row, col)] = r(f64::from(sign));
    }
    k
}

/// Clebsch–Gordan matrix `⟨A a; B b | j σ⟩` with rows `(a, b)` (a-major,
/// both descending) and columns `σ = j, ..., -j`.
///
/// The highest-weight state is found by solving `J+ψ = 0` and the rest of the
/// multiplet by repeated lowering. All of this runs in exact rational
/// arithmetic on unnormalised states `|a⟩' = J-^{A-a}|A, A⟩`, where the
/// ladder operators have rational matrix elements; the result is normalised
/// and converted to floating point only at the end.
pub fn clebsch_gordan(a: HalfInt, b: HalfInt, j: HalfInt) -> Result<CMatrix> {
    if a.is_negative() || b.is_negative() || !HalfInt::triangle(a, b, j) {
        return Err(Error::Triangle { a, b, j });
    }
    let (na, nb, nj) = (a.multiplicity(), b.multiplicity(), j.multiplicity());
    let idx = |x: HalfInt, top: HalfInt| ((top - x).twice() / 2) as usize;

    // Highest weight σ = j: ψ = Σ_a c_a |a⟩'|j-a⟩'.
    // J+|a⟩' = (A+a+1)(A-a)|a+1⟩', so J+ψ = 0 gives
    // c_{a+1} (B+b)(B-b+1) = -c_a (A+a+1)(A-a) with b = j - a.
    let rat = |h: HalfInt| BigRational::new(BigInt::from(h.twice()), BigInt::from(2));
    let a_lo = (-a).max(j - b);
    let a_hi = a.min(j + b);
    let mut top: Vec<(HalfInt, BigRational)> = vec![(a_lo, BigRational::one())];
    let mut aa = a_lo;
    while aa < a_hi {
        let bb = j - aa;
        let prev = &top.last().unwrap().1;
        let num = (rat(a) + rat(aa) + BigRational::one()) * (rat(a) - rat(aa));
        let den = (rat(b) + rat(bb)) * (rat(b) - rat(bb) + BigRational::one());
        let next = -prev.clone() * num / den;
        aa += HalfInt::ONE;
        top.push((aa, next));
    }
    // Condon–Shortley: the a = A component of the highest-weight state is positive.
    if top.last().unwrap().1.is_negative() {
        for (_, v) in top.iter_mut() {
            *v = -v.clone();
        }
    }

    // Unnormalised coefficients on the primed product basis, one map per σ.
    let mut state: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); nb]; na];
    for (aa, v) in &top {
        state[idx(*aa, a)][idx(j - *aa, b)] = v.clone();
    }
    // |a⟩' = sqrt(w_A(a)) |a⟩ with w_A(a) = (2A)!(A-a)!/(A+a)!
    let weights = |top_spin: HalfInt| -> Vec<BigRational> {
        top_spin
            .projections()
            .map(|m| {
                let f = |n: i32| -> BigInt { (1..=n).map(BigInt::from).product() };
                BigRational::new(
                    f(top_spin.twice()) * f((top_spin - m).twice() / 2),
                    f((top_spin + m).twice() / 2),
                )
            })
            .collect()
    };
    let (wa, wb) = (weights(a), weights(b));

    let mut out = linalg::zeros(na * nb, nj);
    for (col, _sigma) in j.projections().enumerate() {
        if col > 0 {
            // J- on the primed basis is a pure shift |a⟩' -> |a-1⟩'.
            let mut lowered = vec![vec![BigRational::zero(); nb]; na];
            for ia in 0..na {
                for ib in 0..nb {
                    let v = &state[ia][ib];
                    if v.is_zero() {
                        continue;
                    }
                    if ia + 1 < na {
                        lowered[ia + 1][ib] += v.clone();
                    }
                    if ib + 1 < nb {
                        lowered[ia][ib + 1] += v.clone();
                    }
                }
            }
            state = lowered;
        }
        let mut norm2 = BigRational::zero();
        for ia in 0..na {
            for ib in 0..nb {
                let v = &state[ia][ib];
                norm2 += v * v * &wa[ia] * &wb[ib];
            }
        }
        for ia in 0..na {
            for ib in 0..nb {
                let v = &state[ia][ib];
                if v.is_zero() {
                    continue;
                }
                let sq = v * v * &wa[ia] * &wb[ib] / &norm2;
                let mag = sq.to_f64().expect("finite rational").sqrt();
                let sign = if v.is_negative() { -1.0 } else { 1.0 };
                out[(ia * nb + ib, col)] = r(sign * mag);
            }
        }
    }
    Ok(out)
}

/// Largest deviation from `[J_a, J_b] = i ε_abc J_c`.
pub fn algebra_defect(gens: &[CMatrix; 3]) -> f64 {
    (0..3)
        .map(|k| {
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            max_abs(&(commutator(&gens[a], &gens[b]) - &gens[k] * I))
        })
        .fold(0.0, f64::max)
}

/// Orthonormal spin-`j` multiplet inside a representation of the rotation
/// algebra, as a `dim × (2j+1)` matrix with columns `σ = j, ..., -j`.
///
/// The highest-weight column is fixed by making its largest-modulus entry
/// real positive (first such entry on ties); the other columns follow from
/// the Condon–Shortley lowering relations.
pub fn extract_multiplet(gens: &[CMatrix; 3], j: HalfInt) -> Result<CMatrix> {
    if j.is_negative() {
        return Err(Error::NegativeSpin(j));
    }
    let dim = gens[0].nrows();
    let defect = algebra_defect(gens);
    if defect > 1e-9 {
        return Err(Error::InvalidRep {
            name: format!("{dim}-dimensional generators"),
            reason: format!("rotation algebra violated by {defect:.3e}"),
        });
    }
    let raise = &gens[0] + &gens[1] * I;
    let lower = &gens[0] - &gens[1] * I;
    let shifted = &gens[2] - linalg::identity(dim) * r(j.value());
    let mut stacked = linalg::zeros(2 * dim, dim);
    stacked.view_mut((0, 0), (dim, dim)).copy_from(&raise);
    stacked.view_mut((dim, 0), (dim, dim)).copy_from(&shifted);
    let highest = linalg::nullspace(&stacked, Tolerance::new(1e-9, 1e-9))?;
    if highest.ncols() != 1 {
        return Err(Error::Multiplicity {
            rep: format!("{dim}-dimensional representation"),
            j,
            found: highest.ncols(),
        });
    }
    let mut col = highest.column(0).into_owned();
    let entries: Vec<_> = col.iter().copied().collect();
    let k = linalg::dominant_index(&entries).expect("nullspace vector is nonzero");
    let phase = entries[k].conj() / entries[k].norm();
    col *= phase;
    col /= r(col.norm());

    let mut out = linalg::zeros(dim, j.multiplicity());
    out.set_column(0, &col);
    let sigmas: Vec<_> = j.projections().collect();
    for k in 1..sigmas.len() {
        let factor = ladder(j, sigmas[k]);
        let next = &lower * out.column(k - 1) / r(factor);
        if (next.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRep {
                name: format!("{dim}-dimensional generators"),
                reason: "lowering does not preserve the norm".into(),
            });
        }
        out.set_column(k, &next);
    }
    Ok(out)
}

/// Standard Pauli matrices `X, Y, Z`.
pub fn pauli() -> [CMatrix; 3] {
    [
        linalg::from_rows(2, 2, &[ZERO, ONE, ONE, ZERO]),
        linalg::from_rows(2, 2, &[ZERO, -I, I, ZERO]),
        linalg::from_rows(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}
