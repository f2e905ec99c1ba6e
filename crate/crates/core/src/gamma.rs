//! Generalized gamma matrices: matrix-valued symmetric traceless Lorentz
//! tensors `T^{μ1…μ2K}` intertwining two field representations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{self, kron, max_abs, r, CMatrix, Tolerance};
use crate::lorentz::{self, lorentz_algebra_defect, rep_matrix, FieldRep, FourVector, LorentzWord, METRIC};
use crate::sampling::Sampler;

/// Version of the seed normalization and fit conventions. Part of every
/// cache key and report.
pub const CONVENTION_VERSION: u32 = 1;

/// Casimir eigenvalues must lie this close to some `K(K+1)`.
pub const CASIMIR_TOL: f64 = 1e-6;

/// Relative residual accepted from the tensor fit.
pub const FIT_TOL: f64 = 1e-8;

/// Seed of the supplementary random boost directions in [`build_t`].
pub const FIT_SEED: u64 = 0x5eed_7e45;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistKind {
    /// `M ↦ D^L(Λ) M D^R(Λ)†`
    Hermitian,
    /// `M ↦ D^L(Λ) M D^R(Λ)⁻¹`
    Inverse,
}

impl TwistKind {
    /// `D†` or `D⁻¹`.
    pub fn apply(self, d: &CMatrix) -> Result<CMatrix> {
        match self {
            TwistKind::Hermitian => Ok(d.adjoint()),
            TwistKind::Inverse => linalg::inverse(d),
        }
    }

    /// `twist(D(Λ))` with the inverse taken on the word rather than the matrix.
    pub fn image(self, rep: &FieldRep, w: &LorentzWord) -> Result<CMatrix> {
        match self {
            TwistKind::Hermitian => Ok(rep_matrix(rep, w)?.adjoint()),
            TwistKind::Inverse => rep_matrix(rep, &w.inverse()),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TwistKind::Hermitian => "hermitian",
            TwistKind::Inverse => "inverse",
        }
    }
}

impl fmt::Display for TwistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TwistKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermitian" | "h" => Ok(TwistKind::Hermitian),
            "inverse" | "inv" | "twisted" => Ok(TwistKind::Inverse),
            _ => Err(Error::Parse(format!("unknown twist {s:?} (expected hermitian or inverse)"))),
        }
    }
}

/// Generators of the induced action on `dimL × dimR` matrices, flattened
/// row-major.
#[derive(Clone, Debug)]
pub struct VAction {
    pub j: [CMatrix; 3],
    pub k: [CMatrix; 3],
}

impl VAction {
    /// `𝒜² = Σ_a ((𝒥_a + i𝒦_a)/2)²`.
    pub fn casimir(&self) -> CMatrix {
        let n = self.j[0].nrows();
        let mut out = linalg::zeros(n, n);
        for a in 0..3 {
            let x = (&self.j[a] + &self.k[a] * linalg::I) * r(0.5);
            out += &x * &x;
        }
        out
    }
}

pub fn v_action(left: &FieldRep, right: &FieldRep, twist: TwistKind) -> Result<VAction> {
    let (il, ir) = (linalg::identity(left.dim), linalg::identity(right.dim));
    // vec(A M B) = (A ⊗ Bᵀ) vec(M) for row-major vec
    let right_part = |g: &CMatrix| match twist {
        TwistKind::Hermitian => g.map(|z| z.conj()),
        TwistKind::Inverse => g.transpose(),
    };
    let build = |gl: &CMatrix, gr: &CMatrix| kron(gl, &ir) - kron(&il, &right_part(gr));
    let j = std::array::from_fn(|a| build(&left.j[a], &right.j[a]));
    let k = std::array::from_fn(|a| build(&left.k[a], &right.k[a]));
    let defect = lorentz_algebra_defect(&j, &k);
    if defect > 1e-9 {
        return Err(Error::InvalidRep {
            name: format!("{} x {}", left.name, right.name),
            reason: format!("induced action violates the Lorentz algebra by {defect:.3e}"),
        });
    }
    Ok(VAction { j, k })
}

/// K values allowed by the triangle conditions for labeled representations,
/// ascending.
pub fn predicted_k_range(left: (HalfInt, HalfInt), right: (HalfInt, HalfInt), twist: TwistKind) -> Vec<HalfInt> {
    let (a, b) = left;
    let (c, d) = match twist {
        TwistKind::Hermitian => right,
        TwistKind::Inverse => (right.1, right.0),
    };
    if !(a + d - b - c).is_integer() {
        return Vec::new();
    }
    let lo = (a - d).abs().max((b - c).abs());
    let hi = (a + d).min(b + c);
    HalfInt::range_inclusive(lo, hi).collect()
}

/// Scale `m` so that its dominant entry is real and equal to 1.
pub fn normalize_dominant(m: &CMatrix) -> CMatrix {
    let cols = m.ncols();
    let row_major: Vec<_> = (0..m.nrows() * cols).map(|k| m[(k / cols, k % cols)]).collect();
    match linalg::dominant_index(&row_major) {
        Some(k) => m / row_major[k],
        None => m.clone(),
    }
}

/// A rotation-invariant matrix lying in the `(K, K)` block of the induced
/// representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Seed {
    pub k: HalfInt,
    #[serde(with = "linalg::matrix_serde")]
    pub matrix: CMatrix,
    pub casimir: f64,
}

pub fn invariant_seeds(left: &FieldRep, right: &FieldRep, twist: TwistKind) -> Result<Vec<Seed>> {
    let action = v_action(left, right, twist)?;
    let n = left.dim * right.dim;
    let mut stacked = linalg::zeros(3 * n, n);
    for a in 0..3 {
        stacked.view_mut((a * n, 0), (n, n)).copy_from(&action.j[a]);
    }
    let kernel = linalg::nullspace(&stacked, Tolerance::new(1e-9, 1e-9))?;
    if kernel.ncols() == 0 {
        return Ok(Vec::new());
    }
    let compressed = kernel.adjoint() * action.casimir() * &kernel;
    let (values, vectors) = linalg::eig_hermitian(&compressed)?;
    let mut seeds = Vec::with_capacity(values.len());
    for (idx, &lambda) in values.iter().enumerate() {
        let kk = (-1.0 + (1.0 + 4.0 * lambda).max(0.0).sqrt()) / 2.0;
        let k = HalfInt::from_twice((2.0 * kk).round() as i32);
        if k.is_negative() || (lambda - k.casimir()).abs() > CASIMIR_TOL {
            return Err(Error::CasimirCluster { value: lambda });
        }
        let flat = &kernel * vectors.column(idx);
        let flat: Vec<_> = flat.iter().copied().collect();
        let matrix = normalize_dominant(&linalg::unvectorize(&flat, left.dim, right.dim));
        seeds.push(Seed { k, matrix, casimir: lambda });
    }
    seeds.sort_by_key(|s| s.k);
    for w in seeds.windows(2) {
        if w[0].k == w[1].k {
            let count = seeds.iter().filter(|s| s.k == w[0].k).count();
            return Err(Error::DegenerateCasimir { k: w[0].k, count });
        }
    }
    if let (Some(l), Some(rl)) = (left.label, right.label) {
        let expected = predicted_k_range(l, rl, twist);
        let found: Vec<_> = seeds.iter().map(|s| s.k).collect();
        if found != expected {
            return Err(Error::KRange { expected, found });
        }
    }
    Ok(seeds)
}

/// All sorted multi-indices of the given length over `0..4`.
pub fn sorted_indices(rank: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for idx in &out {
            let start = idx.last().copied().unwrap_or(0);
            for mu in start..4 {
                let mut v = idx.clone();
                v.push(mu);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Number of distinct orderings of a multi-index.
pub fn index_multiplicity(idx: &[u8]) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let mut counts = [0usize; 4];
    for &mu in idx {
        counts[mu as usize] += 1;
    }
    fact(idx.len()) / counts.iter().map(|&c| fact(c)).product::<u64>()
}

fn sorted(mut idx: Vec<u8>) -> Vec<u8> {
    idx.sort_unstable();
    idx
}

/// A rank-`2K` symmetric tensor of `dimL × dimR` matrices. Only sorted
/// multi-indices are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensorMatrix {
    pub rank: usize,
    pub dim_l: usize,
    pub dim_r: usize,
    pub components: BTreeMap<Vec<u8>, CMatrix>,
}

impl SymTensorMatrix {
    /// The component for any (not necessarily sorted) multi-index.
    pub fn get(&self, idx: &[u8]) -> &CMatrix {
        &self.components[&sorted(idx.to_vec())]
    }

    /// `M^{μ…}` with `M^{μ1…} = Λ_{ν1}^{μ1} … T^{ν1…}` summed over all `ν`.
    fn transformed(&self, low: &[[f64; 4]; 4], idx: &[u8]) -> CMatrix {
        let mut out = linalg::zeros(self.dim_l, self.dim_r);
        let n = self.rank;
        for code in 0..4usize.pow(n as u32) {
            let mut nu = Vec::with_capacity(n);
            let mut coef = 1.0;
            let mut rest = code;
            for &mu in idx {
                let v = (rest % 4) as u8;
                rest /= 4;
                coef *= low[v as usize][mu as usize];
                nu.push(v);
            }
            if coef != 0.0 {
                out += self.get(&nu) * r(coef);
            }
        }
        out
    }

    /// Largest `‖D^L(Λ) T^I twist(D^R(Λ)) - Λ_{ν1}^{I1}… T^ν‖` over sorted `I`,
    /// relative to the largest component norm.
    pub fn covariance_defect(
        &self,
        left: &FieldRep,
        right: &FieldRep,
        twist: TwistKind,
        w: &LorentzWord,
        metric: &[f64; 4],
    ) -> Result<f64> {
        let dl = rep_matrix(left, w)?;
        let dr = twist.image(right, w)?;
        let low = lorentz::lowered_with(&lorentz::vector_matrix(w)?, metric);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (idx, t) in &self.components {
            let lhs = &dl * t * &dr;
            let rhs = self.transformed(&low, idx);
            scale = scale.max(max_abs(&rhs));
            worst = worst.max(linalg::max_diff(&lhs, &rhs));
        }
        Ok(worst / scale.max(1.0))
    }

    /// Largest `η_{μμ}` contraction of one index pair.
    pub fn trace_defect(&self) -> f64 {
        if self.rank < 2 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for rest in sorted_indices(self.rank - 2) {
            let mut sum = linalg::zeros(self.dim_l, self.dim_r);
            for mu in 0..4u8 {
                let mut idx = rest.clone();
                idx.extend([mu, mu]);
                sum += self.get(&idx) * r(METRIC[mu as usize]);
            }
            worst = worst.max(max_abs(&sum));
        }
        worst
    }

    /// `T^{μ1…μn} q_{μ1}…q_{μn}` for covariant components `q`.
    pub fn contract(&self, q_lower: &[f64; 4]) -> CMatrix {
        let mut out = linalg::zeros(self.dim_l, self.dim_r);
        for (idx, t) in &self.components {
            let coef = index_multiplicity(idx) as f64 * idx.iter().map(|&mu| q_lower[mu as usize]).product::<f64>();
            out += t * r(coef);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    index: Vec<u8>,
    #[serde(with = "linalg::matrix_serde")]
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    rank: usize,
    dims: [usize; 2],
    components: Vec<ComponentJson>,
}

impl Serialize for SymTensorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            rank: self.rank,
            dims: [self.dim_l, self.dim_r],
            components: self
                .components
                .iter()
                .map(|(index, matrix)| ComponentJson { index: index.clone(), matrix: matrix.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymTensorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let t = TensorJson::deserialize(d)?;
        let mut components = BTreeMap::new();
        for c in t.components {
            if c.index.len() != t.rank || c.index.iter().any(|&mu| mu > 3) || sorted(c.index.clone()) != c.index {
                return Err(D::Error::custom(format!("bad multi-index {:?}", c.index)));
            }
            if c.matrix.shape() != (t.dims[0], t.dims[1]) {
                return Err(D::Error::custom("component has the wrong shape"));
            }
            components.insert(c.index, c.matrix);
        }
        if components.len() != sorted_indices(t.rank).len() {
            return Err(D::Error::custom("missing tensor components"));
        }
        Ok(SymTensorMatrix { rank: t.rank, dim_l: t.dims[0], dim_r: t.dims[1], components })
    }
}

/// A fitted tensor with its diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FittedTensor {
    pub k: HalfInt,
    pub twist: TwistKind,
    #[serde(with = "linalg::matrix_serde")]
    pub seed: CMatrix,
    pub tensor: SymTensorMatrix,
    /// Frobenius residual of the fit divided by the norm of the data.
    pub residual: f64,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
    pub samples: usize,
    pub sample_seed: u64,
    pub convention: u32,
}

const FIT_DIRECTIONS: [[f64; 3]; 14] = {
    const S: f64 = 0.577_350_269_189_625_8;
    [
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [S, S, S],
        [S, S, -S],
        [S, -S, S],
        [S, -S, -S],
        [-S, S, S],
        [-S, S, -S],
        [-S, -S, S],
        [-S, -S, -S],
    ]
};
const FIT_RAPIDITIES: [f64; 3] = [0.3, 0.7, 1.1];

/// Boosts used by the fit: the identity, the fixed directions and
/// rapidities, then seeded random directions until there are at least
/// `min_count` samples.
pub fn fit_boosts(min_count: usize) -> Vec<LorentzWord> {
    let mut out = vec![LorentzWord::identity()];
    for axis in FIT_DIRECTIONS {
        let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        let axis = axis.map(|x| x / n);
        for phi in FIT_RAPIDITIES {
            out.push(LorentzWord::boost(axis, phi));
        }
    }
    let mut s = Sampler::new(FIT_SEED);
    while out.len() < min_count {
        let axis = s.axis();
        out.push(LorentzWord::boost(axis, s.uniform(FIT_RAPIDITIES[0], FIT_RAPIDITIES[2])));
    }
    out
}

/// Fit the unique rank-`2K` tensor with `T^{0…0} = seed` from boosted
/// copies of the seed.
pub fn build_t(left: &FieldRep, right: &FieldRep, twist: TwistKind, k: HalfInt, seed: &CMatrix) -> Result<FittedTensor> {
    if k.is_negative() {
        return Err(Error::NegativeSpin(k));
    }
    if seed.shape() != (left.dim, right.dim) {
        return Err(Error::Dimension(format!(
            "seed is {}x{}, expected {}x{}",
            seed.nrows(),
            seed.ncols(),
            left.dim,
            right.dim
        )));
    }
    let rank = k.twice() as usize;
    let indices = sorted_indices(rank);
    let pos: BTreeMap<Vec<u8>, usize> = indices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let boosts = fit_boosts(3 * indices.len());
    let traces = if rank >= 2 { sorted_indices(rank - 2) } else { Vec::new() };
    let rows = boosts.len() + traces.len();
    let width = left.dim * right.dim;

    let mut a = linalg::zeros(rows, indices.len());
    let mut b = linalg::zeros(rows, width);
    for (s, w) in boosts.iter().enumerate() {
        let low = lorentz::lowered(&lorentz::vector_matrix(w)?);
        for (col, idx) in indices.iter().enumerate() {
            let coef: f64 = idx.iter().map(|&nu| low[nu as usize][0]).product();
            a[(s, col)] = r(index_multiplicity(idx) as f64 * coef);
        }
        let g = rep_matrix(left, w)? * seed * twist.image(right, w)?;
        for x in 0..left.dim {
            for y in 0..right.dim {
                b[(s, x * right.dim + y)] = g[(x, y)];
            }
        }
    }
    for (t, rest) in traces.iter().enumerate() {
        for mu in 0..4u8 {
            let mut idx = rest.clone();
            idx.extend([mu, mu]);
            a[(boosts.len() + t, pos[&sorted(idx)])] += r(METRIC[mu as usize]);
        }
    }

    let (x, residual) = linalg::lstsq(&a, &b)?;
    let sv = a.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let relative = residual / linalg::frobenius(&b).max(f64::MIN_POSITIVE);
    if !(relative <= FIT_TOL) {
        return Err(Error::Fit(format!("relative residual {relative:.3e} exceeds {FIT_TOL:e} for K = {k}")));
    }
    let mut components: BTreeMap<Vec<u8>, CMatrix> = indices
        .iter()
        .enumerate()
        .map(|(i, idx)| {
            let flat: Vec<_> = x.row(i).iter().copied().collect();
            (idx.clone(), linalg::unvectorize(&flat, left.dim, right.dim))
        })
        .collect();
    components.insert(vec![0; rank], seed.clone());
    Ok(FittedTensor {
        k,
        twist,
        seed: seed.clone(),
        tensor: SymTensorMatrix { rank, dim_l: left.dim, dim_r: right.dim, components },
        residual: relative,
        condition,
        samples: boosts.len(),
        sample_seed: FIT_SEED,
        convention: CONVENTION_VERSION,
    })
}

/// Seeds and fitted tensors for every K of a pair.
pub fn build_all(left: &FieldRep, right: &FieldRep, twist: TwistKind) -> Result<Vec<FittedTensor>> {
    invariant_seeds(left, right, twist)?
        .iter()
        .map(|s| build_t(left, right, twist, s.k, &s.matrix))
        .collect()
}

/// `(T^μ)` for rank-1 tensors, as four matrices.
pub fn vector_components(t: &SymTensorMatrix) -> Option<[CMatrix; 4]> {
    (t.rank == 1).then(|| std::array::from_fn(|mu| t.get(&[mu as u8]).clone()))
}

/// Lowered-momentum contraction helper: `T^{μ…} p_μ…`.
pub fn contract_momentum(t: &SymTensorMatrix, p: &FourVector) -> CMatrix {
    t.contract(&p.lowered())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_diff};
    use crate::lorentz::{ab_rep, sigma, sigma_bar, vector_field_rep};
    use crate::sampling::{random_word, Sampler};

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn rep(a: i32, b: i32) -> FieldRep {
        ab_rep(h(a), h(b)).unwrap()
    }

    #[test]
    fn index_tools() {
        assert_eq!(sorted_indices(0), vec![Vec::<u8>::new()]);
        assert_eq!(sorted_indices(1).len(), 4);
        assert_eq!(sorted_indices(2).len(), 10);
        assert_eq!(sorted_indices(3).len(), 20);
        assert_eq!(index_multiplicity(&[0, 1, 1]), 3);
        assert_eq!(index_multiplicity(&[0, 1, 2]), 6);
        assert_eq!(index_multiplicity(&[]), 1);
        let total: u64 = sorted_indices(3).iter().map(|i| index_multiplicity(i)).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn twist_parse() {
        assert_eq!("Hermitian".parse::<TwistKind>().unwrap(), TwistKind::Hermitian);
        assert_eq!("inverse".parse::<TwistKind>().unwrap(), TwistKind::Inverse);
        assert!("sideways".parse::<TwistKind>().is_err());
    }

    #[test]
    fn scalar_action_is_zero() {
        let act = v_action(&rep(0, 0), &rep(0, 0), TwistKind::Hermitian).unwrap();
        for a in 0..3 {
            assert_eq!(act.j[a], linalg::zeros(1, 1));
            assert_eq!(act.k[a], linalg::zeros(1, 1));
        }
    }

    #[test]
    fn weyl_action_annihilates_identity() {
        let act = v_action(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian).unwrap();
        let id = linalg::vectorize(&identity(2));
        for a in 0..3 {
            assert!(max_abs(&(&act.j[a] * &id)) < 1e-15);
        }
        let mixed = v_action(&rep(1, 0), &rep(0, 1), TwistKind::Hermitian).unwrap();
        assert!(lorentz_algebra_defect(&mixed.j, &mixed.k) < 1e-10);
    }

    #[test]
    fn k_ranges() {
        let r = |a, b, c, d, t| predicted_k_range((h(a), h(b)), (h(c), h(d)), t);
        assert_eq!(r(1, 0, 1, 0, TwistKind::Hermitian), vec![h(1)]);
        assert_eq!(r(1, 0, 0, 1, TwistKind::Hermitian), vec![h(0)]);
        assert_eq!(r(1, 0, 1, 0, TwistKind::Inverse), vec![h(0)]);
        assert_eq!(r(1, 0, 0, 1, TwistKind::Inverse), vec![h(1)]);
        assert_eq!(r(1, 1, 1, 1, TwistKind::Hermitian), vec![h(0), h(2)]);
        assert_eq!(r(2, 0, 1, 1, TwistKind::Hermitian), vec![h(1)]);
        assert!(r(1, 0, 0, 0, TwistKind::Hermitian).is_empty());
    }

    #[test]
    fn seeds_for_weyl_pairs() {
        let seeds = invariant_seeds(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian).unwrap();
        assert_eq!(seeds.len(), 1);
        assert_eq!(seeds[0].k, h(1));
        assert!(max_diff(&seeds[0].matrix, &identity(2)) < 1e-12);

        let seeds = invariant_seeds(&rep(1, 0), &rep(0, 1), TwistKind::Hermitian).unwrap();
        assert_eq!(seeds.len(), 1);
        assert_eq!(seeds[0].k, h(0));
        assert!(max_diff(&seeds[0].matrix, &identity(2)) < 1e-12);
    }

    #[test]
    fn seeds_for_vector_pair() {
        let v = vector_field_rep();
        let seeds = invariant_seeds(&v, &v, TwistKind::Hermitian).unwrap();
        let ks: Vec<_> = seeds.iter().map(|s| s.k).collect();
        assert_eq!(ks, vec![h(0), h(2)]);
        let d = |x: [f64; 4]| linalg::diag(&x.map(r));
        assert!(max_diff(&seeds[0].matrix, &d([1.0, -1.0, -1.0, -1.0])) < 1e-12);
        let third = 1.0 / 3.0;
        assert!(max_diff(&seeds[1].matrix, &d([1.0, third, third, third])) < 1e-12);

        let seeds = invariant_seeds(&v, &v, TwistKind::Inverse).unwrap();
        assert!(max_diff(&seeds[0].matrix, &identity(4)) < 1e-12);
        assert!(max_diff(&seeds[1].matrix, &d([1.0, -third, -third, -third])) < 1e-12);
    }

    #[test]
    fn seeds_fill_predicted_range() {
        let labels = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2), (2, 1), (3, 0)];
        for &(a, b) in &labels {
            for &(c, d) in &labels {
                for twist in [TwistKind::Hermitian, TwistKind::Inverse] {
                    let got = invariant_seeds(&rep(a, b), &rep(c, d), twist).unwrap();
                    let want = predicted_k_range((h(a), h(b)), (h(c), h(d)), twist);
                    assert_eq!(got.iter().map(|s| s.k).collect::<Vec<_>>(), want);
                }
            }
        }
    }

    #[test]
    fn pauli_tensors() {
        let t = build_all(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian).unwrap();
        let comps = vector_components(&t[0].tensor).unwrap();
        for (got, want) in comps.iter().zip(sigma().iter()) {
            assert!(max_diff(got, want) < 1e-9);
        }
        let t = build_all(&rep(0, 1), &rep(0, 1), TwistKind::Hermitian).unwrap();
        let comps = vector_components(&t[0].tensor).unwrap();
        for (got, want) in comps.iter().zip(sigma_bar().iter()) {
            assert!(max_diff(got, want) < 1e-9);
        }
    }

    #[test]
    fn vector_rank_two_tensor() {
        // (4/3)[(η^{μν}η^{ρσ} + η^{μσ}η^{ρν})/2 - η^{μρ}η^{νσ}/4] as a matrix in (ν, σ)
        let v = vector_field_rep();
        let seeds = invariant_seeds(&v, &v, TwistKind::Hermitian).unwrap();
        let t = build_t(&v, &v, TwistKind::Hermitian, seeds[1].k, &seeds[1].matrix).unwrap();
        let eta = |a: usize, b: usize| if a == b { METRIC[a] } else { 0.0 };
        for idx in sorted_indices(2) {
            let (mu, rho) = (idx[0] as usize, idx[1] as usize);
            let mut want = linalg::zeros(4, 4);
            for nu in 0..4 {
                for sg in 0..4 {
                    let val = (eta(mu, nu) * eta(rho, sg) + eta(mu, sg) * eta(rho, nu)) / 2.0
                        - eta(mu, rho) * eta(nu, sg) / 4.0;
                    want[(nu, sg)] = r(4.0 / 3.0 * val);
                }
            }
            assert!(max_diff(t.tensor.get(&idx), &want) < 1e-9, "{idx:?}");
        }
        assert!(t.tensor.trace_defect() < 1e-9);
    }

    #[test]
    fn fits_are_covariant_traceless_and_seeded() {
        let mut s = Sampler::new(17);
        let words: Vec<_> = (0..5).map(|_| random_word(&mut s)).collect();
        let pairs = [((2, 1), (2, 1)), ((3, 0), (2, 1)), ((1, 1), (1, 1)), ((2, 0), (0, 2)), ((0, 2), (2, 0))];
        for ((a, b), (c, d)) in pairs {
            let (l, rr) = (rep(a, b), rep(c, d));
            for twist in [TwistKind::Hermitian, TwistKind::Inverse] {
                for ft in build_all(&l, &rr, twist).unwrap() {
                    assert!(ft.residual < FIT_TOL);
                    assert!(max_diff(ft.tensor.get(&vec![0; ft.tensor.rank]), &ft.seed) < 1e-9);
                    assert!(ft.tensor.trace_defect() < 1e-8);
                    for w in &words {
                        let defect = ft.tensor.covariance_defect(&l, &rr, twist, w, &METRIC).unwrap();
                        assert!(defect < 1e-8, "{defect}");
                    }
                }
            }
        }
    }

    #[test]
    fn fit_rejects_non_seed() {
        let v = vector_field_rep();
        // diag(1,0,0,0) mixes K = 0 and K = 1, so no rank-2 tensor reproduces it
        let bad = linalg::diag(&[r(1.0), r(0.0), r(0.0), r(0.0)]);
        assert!(matches!(build_t(&v, &v, TwistKind::Hermitian, h(2), &bad), Err(Error::Fit(_))));
        assert!(build_t(&v, &v, TwistKind::Hermitian, h(2), &identity(3)).is_err());
    }

    #[test]
    fn sample_plan() {
        let b = fit_boosts(60);
        assert_eq!(b.len(), 60);
        assert!(b[0].is_empty());
        assert_eq!(fit_boosts(10).len(), 43);
        assert_eq!(fit_boosts(60), b);
    }

    #[test]
    fn tensor_json_roundtrip() {
        let t = build_all(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian).unwrap();
        let s = serde_json::to_string(&t[0]).unwrap();
        let back: FittedTensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t[0]);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["tensor"]["rank"], 1);
        assert_eq!(v["tensor"]["components"][3]["index"], serde_json::json!([3]));
    }

    #[test]
    fn wrong_metric_breaks_covariance() {
        let t = build_all(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian).unwrap();
        let w = LorentzWord::boost([0.0, 0.0, 1.0], 0.5);
        let ok = t[0].tensor.covariance_defect(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian, &w, &METRIC).unwrap();
        let bad = t[0].tensor.covariance_defect(&rep(1, 0), &rep(1, 0), TwistKind::Hermitian, &w, &[1.0; 4]).unwrap();
        assert!(ok < 1e-12);
        assert!(bad > 0.1);
    }
}
