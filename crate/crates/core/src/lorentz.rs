//! Four-vectors, Lorentz transformations as words of primitives, and
//! finite-dimensional representations of the Lorentz algebra.
//!
//! The metric is `η = diag(-1, +1, +1, +1)` everywhere. Component 0 is time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{self, c, commutator, kron, max_abs, r, CMatrix, I};
use crate::su2::{self, along, check_axis, spin_generators};

/// The Minkowski metric diagonal.
pub const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Contravariant components `p^μ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub fn new(p0: f64, p1: f64, p2: f64, p3: f64) -> Self {
        FourVector([p0, p1, p2, p3])
    }

    pub fn rest(m: f64) -> Self {
        FourVector([m, 0.0, 0.0, 0.0])
    }

    /// The on-shell momentum with spatial part `p` and mass `m`.
    pub fn on_shell(p: [f64; 3], m: f64) -> Self {
        let e = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m).sqrt();
        FourVector([e, p[0], p[1], p[2]])
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn spatial_norm(&self) -> f64 {
        self.spatial().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `η_{μν} p^μ q^ν`.
    pub fn dot(&self, other: &FourVector) -> f64 {
        (0..4).map(|k| METRIC[k] * self.0[k] * other.0[k]).sum()
    }

    /// `p_μ = η_{μν} p^ν`.
    pub fn lowered(&self) -> [f64; 4] {
        std::array::from_fn(|k| METRIC[k] * self.0[k])
    }

    pub fn neg(&self) -> FourVector {
        FourVector(self.0.map(|x| -x))
    }

    /// Checks `p·p = -m²` (relative to `max(m², (p⁰)²)`) and `p⁰ > 0`.
    pub fn check_on_shell(&self, m: f64, tol: f64) -> Result<()> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::NonPositiveMass(m));
        }
        let defect = (self.dot(self) + m * m).abs() / (m * m).max(self.0[0] * self.0[0]);
        if !defect.is_finite() || defect > tol || self.0[0] <= 0.0 {
            return Err(Error::OffShell { p: self.0, m, defect });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveKind {
    Rotation,
    Boost,
}

/// A rotation by an angle or a boost by a rapidity about a unit axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub kind: PrimitiveKind,
    pub axis: [f64; 3],
    pub parameter: f64,
}

/// A product of primitives, leftmost factor outermost.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorentzWord(pub Vec<Primitive>);

impl LorentzWord {
    pub fn identity() -> Self {
        LorentzWord(Vec::new())
    }

    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        LorentzWord(vec![Primitive { kind: PrimitiveKind::Rotation, axis, parameter: angle }])
    }

    pub fn boost(axis: [f64; 3], rapidity: f64) -> Self {
        LorentzWord(vec![Primitive { kind: PrimitiveKind::Boost, axis, parameter: rapidity }])
    }

    /// The product `self · other` (apply `other` first).
    pub fn then(&self, other: &LorentzWord) -> LorentzWord {
        LorentzWord(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn inverse(&self) -> LorentzWord {
        LorentzWord(
            self.0
                .iter()
                .rev()
                .map(|p| Primitive { parameter: -p.parameter, ..*p })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_rotation_only(&self) -> bool {
        self.0.iter().all(|p| p.kind == PrimitiveKind::Rotation)
    }
}

/// A representation of the Lorentz algebra by rotation generators `J` and
/// boost generators `K`, with group elements `exp(-iθ n̂·J)` and
/// `exp(-iφ n̂·K)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldRep {
    pub name: String,
    pub dim: usize,
    #[serde(with = "linalg::triple_serde")]
    pub j: [CMatrix; 3],
    #[serde(with = "linalg::triple_serde")]
    pub k: [CMatrix; 3],
    pub label: Option<(HalfInt, HalfInt)>,
}

/// Largest violation of the Lorentz algebra relations, and of the
/// Hermiticity of `J`.
pub fn lorentz_algebra_defect(j: &[CMatrix; 3], k: &[CMatrix; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for cc in 0..3 {
        let (a, b) = ((cc + 1) % 3, (cc + 2) % 3);
        worst = worst
            .max(max_abs(&(commutator(&j[a], &j[b]) - &j[cc] * I)))
            .max(max_abs(&(commutator(&j[a], &k[b]) - &k[cc] * I)))
            .max(max_abs(&(commutator(&k[a], &k[b]) + &j[cc] * I)));
    }
    for a in 0..3 {
        worst = worst
            .max(max_abs(&commutator(&j[a], &k[a])))
            .max(linalg::hermitian_defect(&j[a]));
    }
    worst
}

impl FieldRep {
    /// Validates the algebra relations to 1e-9.
    pub fn new(
        name: impl Into<String>,
        j: [CMatrix; 3],
        k: [CMatrix; 3],
        label: Option<(HalfInt, HalfInt)>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = j[0].nrows();
        for m in j.iter().chain(k.iter()) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::InvalidRep {
                    name,
                    reason: format!("generators must all be {dim}x{dim}"),
                });
            }
            if !linalg::is_finite(m) {
                return Err(Error::NonFinite);
            }
        }
        let defect = lorentz_algebra_defect(&j, &k);
        if defect > 1e-9 {
            return Err(Error::InvalidRep {
                name,
                reason: format!("Lorentz algebra violated by {defect:.3e}"),
            });
        }
        Ok(FieldRep { name, dim, j, k, label })
    }

    pub fn label(&self) -> Result<(HalfInt, HalfInt)> {
        self.label.ok_or_else(|| Error::Unlabeled(self.name.clone()))
    }

    /// Stable identifier used for cache keys and reports.
    pub fn key(&self) -> String {
        match self.label {
            Some((a, b)) if self.name == ab_name(a, b) => ab_name(a, b),
            _ => self.name.clone(),
        }
    }
}

fn ab_name(a: HalfInt, b: HalfInt) -> String {
    format!("({a},{b})")
}

/// The irreducible `(A, B)` representation on `V^A ⊗ V^B`.
pub fn ab_rep(a: HalfInt, b: HalfInt) -> Result<FieldRep> {
    let sa = spin_generators(a)?.as_array();
    let sb = spin_generators(b)?.as_array();
    let (ia, ib) = (linalg::identity(a.multiplicity()), linalg::identity(b.multiplicity()));
    let left: [CMatrix; 3] = std::array::from_fn(|n| kron(&sa[n], &ib));
    let right: [CMatrix; 3] = std::array::from_fn(|n| kron(&ia, &sb[n]));
    let j = std::array::from_fn(|n| &left[n] + &right[n]);
    let k = std::array::from_fn(|n| (&left[n] - &right[n]) * c(0.0, -1.0));
    FieldRep::new(ab_name(a, b), j, k, Some((a, b)))
}

/// The defining representation on four-vectors `(t, x, y, z)`, label `(1/2, 1/2)`.
pub fn vector_field_rep() -> FieldRep {
    let mut j: [CMatrix; 3] = std::array::from_fn(|_| linalg::zeros(4, 4));
    let mut k: [CMatrix; 3] = std::array::from_fn(|_| linalg::zeros(4, 4));
    for a in 0..3 {
        let (b, cc) = ((a + 1) % 3, (a + 2) % 3);
        // (J_a)_{bc} = -i ε_{abc}
        j[a][(b + 1, cc + 1)] = c(0.0, -1.0);
        j[a][(cc + 1, b + 1)] = c(0.0, 1.0);
        k[a][(0, a + 1)] = I;
        k[a][(a + 1, 0)] = I;
    }
    FieldRep::new("vector", j, k, Some((HalfInt::HALF, HalfInt::HALF)))
        .expect("vector generators satisfy the Lorentz algebra")
}

fn primitive_matrix(rep: &FieldRep, p: &Primitive) -> Result<CMatrix> {
    check_axis(p.axis)?;
    if !p.parameter.is_finite() {
        return Err(Error::NonFinite);
    }
    let gens = match p.kind {
        PrimitiveKind::Rotation => &rep.j,
        PrimitiveKind::Boost => &rep.k,
    };
    linalg::mat_exp(&(along(p.axis, gens) * c(0.0, -p.parameter)))
}

/// `D(w)`, the product of the primitive exponentials.
pub fn rep_matrix(rep: &FieldRep, w: &LorentzWord) -> Result<CMatrix> {
    let mut out = linalg::identity(rep.dim);
    for p in &w.0 {
        out *= primitive_matrix(rep, p)?;
    }
    Ok(out)
}

/// `λ(w)`, the word in the vector representation as a real 4×4 matrix.
pub fn vector_matrix(w: &LorentzWord) -> Result<[[f64; 4]; 4]> {
    let m = rep_matrix(&vector_field_rep(), w)?;
    Ok(std::array::from_fn(|a| std::array::from_fn(|b| m[(a, b)].re)))
}

/// `λ(w) p`.
pub fn apply(w: &LorentzWord, p: &FourVector) -> Result<FourVector> {
    let l = vector_matrix(w)?;
    Ok(FourVector(std::array::from_fn(|a| (0..4).map(|b| l[a][b] * p.0[b]).sum())))
}

/// `Λ_ν^μ = η_{να} λ^α_β η^{βμ}` for a diagonal metric, indexed `[ν][μ]`.
pub fn lowered_with(l: &[[f64; 4]; 4], metric: &[f64; 4]) -> [[f64; 4]; 4] {
    std::array::from_fn(|nu| std::array::from_fn(|mu| metric[nu] * l[nu][mu] * metric[mu]))
}

pub fn lowered(l: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    lowered_with(l, &METRIC)
}

/// Relative on-shell tolerance accepted by [`standard_boost`].
pub const SHELL_TOL: f64 = 1e-9;

/// `L(p)`: the pure boost along `p̂` taking `(m, 0, 0, 0)` to `p`.
pub fn standard_boost(p: &FourVector, m: f64) -> Result<LorentzWord> {
    p.check_on_shell(m, SHELL_TOL)?;
    let n = p.spatial_norm();
    if n == 0.0 {
        return Ok(LorentzWord::identity());
    }
    let axis = p.spatial().map(|x| x / n);
    Ok(LorentzWord::boost(axis, (n / m).asinh()))
}

/// `D(W(Λ, p))` with `W(Λ, p) = L(Λp)⁻¹ Λ L(p)`.
pub fn wigner_rotation(rep: &FieldRep, w: &LorentzWord, p: &FourVector, m: f64) -> Result<CMatrix> {
    let lp = standard_boost(p, m)?;
    let q = apply(w, p)?;
    let lq = standard_boost(&FourVector::on_shell(q.spatial(), m), m)?;
    rep_matrix(rep, &lq.inverse().then(w).then(&lp))
}

/// Spin-`j` rotation matrix of a rotation-only word.
pub fn spin_matrix(j: HalfInt, w: &LorentzWord) -> Result<CMatrix> {
    let mut out = linalg::identity(j.multiplicity());
    for p in &w.0 {
        if p.kind != PrimitiveKind::Rotation {
            return Err(Error::InvalidRep {
                name: format!("spin {j}"),
                reason: "boosts have no unitary spin-j image".into(),
            });
        }
        out *= su2::rotation_matrix(j, p.axis, p.parameter)?;
    }
    Ok(out)
}

/// Pauli four-vector `σ^μ = (I, X, Y, Z)`.
pub fn sigma() -> [CMatrix; 4] {
    let [x, y, z] = su2::pauli();
    [linalg::identity(2), x, y, z]
}

/// `σ̄^μ = (I, -X, -Y, -Z)`.
pub fn sigma_bar() -> [CMatrix; 4] {
    let [x, y, z] = su2::pauli();
    [linalg::identity(2), -x, -y, -z]
}

/// `p_μ M^μ` for four matrices.
pub fn slash(p: &FourVector, m: &[CMatrix; 4]) -> CMatrix {
    let low = p.lowered();
    let mut out = linalg::zeros(m[0].nrows(), m[0].ncols());
    for mu in 0..4 {
        out += &m[mu] * r(low[mu]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_diff, unitarity_defect};
    use crate::sampling::{random_on_shell, random_word, Sampler};
    use proptest::prelude::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn labels() -> Vec<(HalfInt, HalfInt)> {
        vec![(h(0), h(0)), (h(1), h(0)), (h(0), h(1)), (h(1), h(1)), (h(2), h(0)), (h(2), h(1)), (h(3), h(0))]
    }

    #[test]
    fn ab_rep_half_zero() {
        let rep = ab_rep(HalfInt::HALF, HalfInt::ZERO).unwrap();
        let s = su2::pauli();
        for a in 0..3 {
            assert!(max_diff(&rep.j[a], &(&s[a] * r(0.5))) < 1e-15);
            assert!(max_diff(&rep.k[a], &(&s[a] * c(0.0, -0.5))) < 1e-15);
        }
        let rep = ab_rep(HalfInt::ZERO, HalfInt::HALF).unwrap();
        for a in 0..3 {
            assert!(max_diff(&rep.k[a], &(&s[a] * c(0.0, 0.5))) < 1e-15);
        }
        let scalar = ab_rep(HalfInt::ZERO, HalfInt::ZERO).unwrap();
        assert_eq!(scalar.dim, 1);
        assert_eq!(scalar.k[2], linalg::zeros(1, 1));
    }

    #[test]
    fn all_standard_reps_validate() {
        for (a, b) in labels() {
            let rep = ab_rep(a, b).unwrap();
            assert_eq!(rep.dim, a.multiplicity() * b.multiplicity());
            assert!(lorentz_algebra_defect(&rep.j, &rep.k) < 1e-12);
        }
        assert!(ab_rep(h(-1), h(0)).is_err());
    }

    #[test]
    fn bad_generators_rejected() {
        let rep = ab_rep(HalfInt::HALF, HalfInt::ZERO).unwrap();
        let mut k = rep.k.clone();
        k[0] = -&k[0];
        assert!(matches!(FieldRep::new("broken", rep.j.clone(), k, None), Err(Error::InvalidRep { .. })));
    }

    #[test]
    fn vector_rep_boost_block() {
        let phi = 0.8;
        let l = vector_matrix(&LorentzWord::boost([0.0, 0.0, 1.0], phi)).unwrap();
        assert!((l[0][0] - phi.cosh()).abs() < 1e-14);
        assert!((l[0][3] - phi.sinh()).abs() < 1e-14);
        assert!((l[3][0] - phi.sinh()).abs() < 1e-14);
        assert!((l[3][3] - phi.cosh()).abs() < 1e-14);
        assert!((l[1][1] - 1.0).abs() < 1e-14);
        let id = rep_matrix(&vector_field_rep(), &LorentzWord::identity()).unwrap();
        assert_eq!(id, identity(4));
    }

    #[test]
    fn vector_rotation_is_counterclockwise() {
        let l = vector_matrix(&LorentzWord::rotation([0.0, 0.0, 1.0], 0.3)).unwrap();
        assert!((l[1][1] - 0.3f64.cos()).abs() < 1e-14);
        assert!((l[2][1] - 0.3f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn weyl_rotation_closed_form() {
        let theta = 0.9;
        let rep = ab_rep(HalfInt::HALF, HalfInt::ZERO).unwrap();
        let d = rep_matrix(&rep, &LorentzWord::rotation([0.0, 0.0, 1.0], theta)).unwrap();
        let want = linalg::diag(&[c(0.0, -theta / 2.0).exp(), c(0.0, theta / 2.0).exp()]);
        assert!(max_diff(&d, &want) < 1e-14);
    }

    #[test]
    fn sigma_covariance() {
        let rep = ab_rep(HalfInt::HALF, HalfInt::ZERO).unwrap();
        let s = sigma();
        let mut sampler = Sampler::new(7);
        for _ in 0..50 {
            let w = random_word(&mut sampler);
            let d = rep_matrix(&rep, &w).unwrap();
            let low = lowered(&vector_matrix(&w).unwrap());
            for mu in 0..4 {
                let lhs = &d * &s[mu] * d.adjoint();
                let mut rhs = linalg::zeros(2, 2);
                for nu in 0..4 {
                    rhs += &s[nu] * r(low[nu][mu]);
                }
                assert!(max_diff(&lhs, &rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn wrong_metric_breaks_sigma_covariance() {
        let rep = ab_rep(HalfInt::HALF, HalfInt::ZERO).unwrap();
        let s = sigma();
        let w = LorentzWord::boost([0.0, 0.0, 1.0], 0.5);
        let d = rep_matrix(&rep, &w).unwrap();
        let low = lowered_with(&vector_matrix(&w).unwrap(), &[1.0; 4]);
        let lhs = &d * &s[0] * d.adjoint();
        let mut rhs = linalg::zeros(2, 2);
        for nu in 0..4 {
            rhs += &s[nu] * r(low[nu][0]);
        }
        assert!(max_diff(&lhs, &rhs) > 0.1);
    }

    #[test]
    fn standard_boost_cases() {
        let m = 1.3;
        assert!(standard_boost(&FourVector::rest(m), m).unwrap().is_empty());
        let p = FourVector::new(m * 1f64.cosh(), 0.0, 0.0, m * 1f64.sinh());
        let w = standard_boost(&p, m).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.0[0].kind, PrimitiveKind::Boost);
        assert!((w.0[0].parameter - 1.0).abs() < 1e-14);
        assert!(max_diff(
            &linalg::from_real_rows(1, 3, &w.0[0].axis),
            &linalg::from_real_rows(1, 3, &[0.0, 0.0, 1.0])
        ) < 1e-15);

        assert!(matches!(standard_boost(&FourVector::new(1.0, 1.0, 0.0, 0.0), 1.0), Err(Error::OffShell { .. })));
        assert!(matches!(standard_boost(&FourVector::rest(1.0), 0.0), Err(Error::NonPositiveMass(_))));
        assert!(standard_boost(&FourVector::rest(-1.0), 1.0).is_err());
    }

    #[test]
    fn standard_boost_maps_rest_to_p() {
        let mut sampler = Sampler::new(3);
        for _ in 0..30 {
            let p = random_on_shell(&mut sampler, 0.7);
            let q = apply(&standard_boost(&p, 0.7).unwrap(), &FourVector::rest(0.7)).unwrap();
            for k in 0..4 {
                assert!((q.0[k] - p.0[k]).abs() < 1e-9 * p.0[0]);
            }
        }
    }

    #[test]
    fn wigner_rotation_cases() {
        let rep = ab_rep(HalfInt::ONE, HalfInt::HALF).unwrap();
        let m = 1.0;
        let rot = LorentzWord::rotation([0.6, 0.0, 0.8], 1.1);
        let w = wigner_rotation(&rep, &rot, &FourVector::rest(m), m).unwrap();
        assert!(max_diff(&w, &rep_matrix(&rep, &rot).unwrap()) < 1e-12);

        let p = FourVector::on_shell([0.3, -0.4, 1.2], m);
        let lp = standard_boost(&p, m).unwrap();
        let w = wigner_rotation(&rep, &lp, &FourVector::rest(m), m).unwrap();
        assert!(max_diff(&w, &identity(rep.dim)) < 1e-9);

        let mut sampler = Sampler::new(11);
        for _ in 0..20 {
            let p = random_on_shell(&mut sampler, m);
            let w = random_word(&mut sampler);
            let d = wigner_rotation(&rep, &w, &p, m).unwrap();
            assert!(unitarity_defect(&d) < 1e-9);
        }
    }

    #[test]
    fn conjugate_inverse_identity() {
        let mut sampler = Sampler::new(5);
        for t in 0..=3 {
            let left = ab_rep(h(t), h(0)).unwrap();
            let right = ab_rep(h(0), h(t)).unwrap();
            for _ in 0..10 {
                let w = random_word(&mut sampler);
                let dl = rep_matrix(&left, &w).unwrap();
                let dr = rep_matrix(&right, &w).unwrap();
                let want = linalg::inverse(&dl.adjoint()).unwrap();
                assert!(max_diff(&dr, &want) < 1e-9);
            }
        }
    }

    #[test]
    fn rotations_are_unitary() {
        let mut sampler = Sampler::new(9);
        for (a, b) in labels() {
            let rep = ab_rep(a, b).unwrap();
            for _ in 0..5 {
                let w = crate::sampling::random_rotation(&mut sampler);
                assert!(unitarity_defect(&rep_matrix(&rep, &w).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn word_serialization() {
        let w = LorentzWord::boost([0.0, 1.0, 0.0], 0.5).then(&LorentzWord::rotation([1.0, 0.0, 0.0], 2.0));
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(
            s,
            r#"[{"kind":"boost","axis":[0.0,1.0,0.0],"parameter":0.5},{"kind":"rotation","axis":[1.0,0.0,0.0],"parameter":2.0}]"#
        );
        let back: LorentzWord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn metric_regression() {
        assert_eq!(METRIC, [-1.0, 1.0, 1.0, 1.0]);
        let p = FourVector::on_shell([0.1, 0.2, 0.3], 2.0);
        assert!((p.dot(&p) + 4.0).abs() < 1e-12);
        // at rest -p_μσ^μ = +mσ⁰
        let rest = slash(&FourVector::rest(2.0), &sigma()) * r(-1.0);
        assert!(max_diff(&rest, &(identity(2) * r(2.0))) < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn word_times_inverse_is_identity(seed in any::<u64>(), pick in 0usize..7) {
            let mut sampler = Sampler::new(seed);
            let mut w = LorentzWord::identity();
            for _ in 0..2 {
                w = w.then(&random_word(&mut sampler));
            }
            let (a, b) = labels()[pick];
            let rep = ab_rep(a, b).unwrap();
            let d = rep_matrix(&rep, &w.then(&w.inverse())).unwrap();
            prop_assert!(max_diff(&d, &identity(rep.dim)) < 1e-9);
        }

        #[test]
        fn homomorphism_and_metric(seed in any::<u64>(), pick in 0usize..7) {
            let mut sampler = Sampler::new(seed);
            let w1 = random_word(&mut sampler);
            let w2 = random_word(&mut sampler);
            let (a, b) = labels()[pick];
            let rep = ab_rep(a, b).unwrap();
            let lhs = rep_matrix(&rep, &w1.then(&w2)).unwrap();
            let rhs = rep_matrix(&rep, &w1).unwrap() * rep_matrix(&rep, &w2).unwrap();
            let scale = linalg::max_abs(&rhs).max(1.0);
            prop_assert!(max_diff(&lhs, &rhs) < 1e-9 * scale);

            let l = vector_matrix(&w1.then(&w2)).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    let g: f64 = (0..4).map(|k| l[k][a] * METRIC[k] * l[k][b]).sum();
                    let want = if a == b { METRIC[a] } else { 0.0 };
                    prop_assert!((g - want).abs() < 1e-9 * scale * scale);
                }
            }
        }
    }
}
