//! Rest-frame coefficient matrices `u(0)`, `v(0)` and their boosted values.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::linalg::{self, max_diff, r, CMatrix};
use crate::lorentz::{rep_matrix, spin_matrix, standard_boost, FieldRep, FourVector, LorentzWord};
use crate::su2::{conjugation_matrix, extract_multiplet};

/// Coefficient functions of a massive spin-`j` particle in a field
/// representation. Columns are ordered `σ = j, ..., -j`.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    pub rep: FieldRep,
    pub j: HalfInt,
    pub m: f64,
    pub u0: CMatrix,
    pub v0: CMatrix,
}

pub fn build_coefficients(rep: &FieldRep, j: HalfInt, m: f64) -> Result<CoefficientSet> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::NonPositiveMass(m));
    }
    if let Some((a, b)) = rep.label {
        if !HalfInt::triangle(a, b, j) {
            return Err(Error::Multiplicity { rep: rep.name.clone(), j, found: 0 });
        }
    }
    let u0 = extract_multiplet(&rep.j, j).map_err(|e| match e {
        Error::Multiplicity { j, found, .. } => Error::Multiplicity { rep: rep.name.clone(), j, found },
        other => other,
    })?;
    let v0 = &u0 * conjugation_matrix(j);
    Ok(CoefficientSet { rep: rep.clone(), j, m, u0, v0 })
}

impl CoefficientSet {
    fn boosted(&self, p: &FourVector, rest: &CMatrix) -> Result<CMatrix> {
        let l = standard_boost(p, self.m)?;
        let scale = (self.m / p.0[0]).sqrt();
        Ok(rep_matrix(&self.rep, &l)? * rest * r(scale))
    }

    /// `u(p) = (m/p⁰)^{1/2} D(L(p)) u(0)`.
    pub fn u_at(&self, p: &FourVector) -> Result<CMatrix> {
        self.boosted(p, &self.u0)
    }

    /// `v(p) = (m/p⁰)^{1/2} D(L(p)) v(0)`.
    pub fn v_at(&self, p: &FourVector) -> Result<CMatrix> {
        self.boosted(p, &self.v0)
    }

    /// Largest of `‖u0 D^j(R) - D(R) u0‖` and `‖v0 D^j(R)* - D(R) v0‖` over
    /// the given rotation words.
    pub fn intertwining_defect(&self, rotations: &[LorentzWord]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for w in rotations {
            let dj = spin_matrix(self.j, w)?;
            let d = rep_matrix(&self.rep, w)?;
            worst = worst
                .max(max_diff(&(&self.u0 * &dj), &(&d * &self.u0)))
                .max(max_diff(&(&self.v0 * dj.map(|z| z.conj())), &(&d * &self.v0)));
        }
        Ok(worst)
    }

    /// `‖u0† u0 - I‖` in max norm.
    pub fn isometry_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.u0)
    }
}

impl Serialize for CoefficientSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            rep: &'a str,
            label: Option<(HalfInt, HalfInt)>,
            j: HalfInt,
            m: f64,
            #[serde(with = "linalg::matrix_serde")]
            u0: &'a CMatrix,
            #[serde(with = "linalg::matrix_serde")]
            v0: &'a CMatrix,
        }
        View { rep: &self.rep.name, label: self.rep.label, j: self.j, m: self.m, u0: &self.u0, v0: &self.v0 }
            .serialize(s)
    }
}
