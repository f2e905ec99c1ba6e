//! Polynomials in the four momentum components `p^0, …, p^3` with dense
//! complex matrix coefficients.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{index_multiplicity, SymTensorMatrix};
use crate::linalg::{self, max_abs, r, CMatrix};
use crate::lorentz::{FourVector, METRIC};

/// Exponents `(e0, e1, e2, e3)` of a monomial in `p^μ`.
pub type Exponent = [u32; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    pub dim_l: usize,
    pub dim_r: usize,
    pub terms: BTreeMap<Exponent, CMatrix>,
}

pub fn degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

impl MatrixPolynomial {
    pub fn zero(dim_l: usize, dim_r: usize) -> Self {
        MatrixPolynomial { dim_l, dim_r, terms: BTreeMap::new() }
    }

    pub fn constant(c: CMatrix) -> Self {
        let mut p = MatrixPolynomial::zero(c.nrows(), c.ncols());
        p.terms.insert([0; 4], c);
        p
    }

    fn check_shape(&self, c: &CMatrix) -> Result<()> {
        if c.shape() != (self.dim_l, self.dim_r) {
            return Err(Error::Dimension(format!(
                "coefficient is {}x{}, polynomial is {}x{}",
                c.nrows(),
                c.ncols(),
                self.dim_l,
                self.dim_r
            )));
        }
        Ok(())
    }

    /// Adds `c · p^e`, merging with an existing monomial.
    pub fn add_term(&mut self, e: Exponent, c: CMatrix) -> Result<()> {
        self.check_shape(&c)?;
        match self.terms.get_mut(&e) {
            Some(existing) => *existing += c,
            None => {
                self.terms.insert(e, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixPolynomial) -> Result<MatrixPolynomial> {
        if (self.dim_l, self.dim_r) != (other.dim_l, other.dim_r) {
            return Err(Error::Dimension("polynomials of different shapes".into()));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> MatrixPolynomial {
        MatrixPolynomial {
            dim_l: self.dim_l,
            dim_r: self.dim_r,
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Adds `s · T^{μ1…μn} p_{μ1}…p_{μn}` with the lowering expanded.
    pub fn add_contraction(&mut self, t: &SymTensorMatrix, s: Complex64) -> Result<()> {
        for (idx, comp) in &t.components {
            let mut e = [0u32; 4];
            let mut sign = 1.0;
            for &mu in idx {
                e[mu as usize] += 1;
                sign *= METRIC[mu as usize];
            }
            self.add_term(e, comp * (s * index_multiplicity(idx) as f64 * sign))?;
        }
        Ok(())
    }

    /// Drops terms whose coefficient is at most `tol` in max norm.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| max_abs(c) > tol);
    }

    pub fn eval(&self, p: &FourVector) -> CMatrix {
        let mut out = linalg::zeros(self.dim_l, self.dim_r);
        for (e, c) in &self.terms {
            let w: f64 = (0..4).map(|k| p.0[k].powi(e[k] as i32)).product();
            out += c * r(w);
        }
        out
    }

    /// Largest `‖c_e‖·|1 - sign·(-1)^{|e|}|` over terms; zero iff every
    /// monomial has the parity `sign`.
    pub fn parity_defect(&self, sign: i32) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let parity = if degree(e) % 2 == 0 { 1.0 } else { -1.0 };
                max_abs(c) * (1.0 - f64::from(sign) * parity).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Total degrees of the stored monomials.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(degree).collect()
    }

    pub fn max_p0_power(&self) -> u32 {
        self.terms.keys().map(|e| e[0]).max().unwrap_or(0)
    }

    /// Rewrites `(p⁰)² = |p|² + m²` until every term is at most linear in `p⁰`.
    pub fn reduce_p0(&self, m: f64) -> MatrixPolynomial {
        let mut out = MatrixPolynomial::zero(self.dim_l, self.dim_r);
        let mut work: Vec<(Exponent, CMatrix)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        while let Some((e, c)) = work.pop() {
            if e[0] <= 1 {
                out.add_term(e, c).expect("shapes match");
                continue;
            }
            let base = [e[0] - 2, e[1], e[2], e[3]];
            for k in 1..4 {
                let mut f = base;
                f[k] += 2;
                work.push((f, c.clone()));
            }
            work.push((base, c * r(m * m)));
        }
        out
    }

    /// Splits a polynomial with `e0 ≤ 1` as `P + 2p⁰ Q` with `P`, `Q`
    /// independent of `p⁰`.
    pub fn pq_split(&self) -> Result<(MatrixPolynomial, MatrixPolynomial)> {
        let mut p = MatrixPolynomial::zero(self.dim_l, self.dim_r);
        let mut q = MatrixPolynomial::zero(self.dim_l, self.dim_r);
        for (e, c) in &self.terms {
            match e[0] {
                0 => p.add_term(*e, c.clone())?,
                1 => q.add_term([0, e[1], e[2], e[3]], c * r(0.5))?,
                n => return Err(Error::Parity(format!("term with (p⁰)^{n} in a P/Q split"))),
            }
        }
        Ok((p, q))
    }

    /// `P(-p)` term by term.
    pub fn reflected(&self) -> MatrixPolynomial {
        MatrixPolynomial {
            dim_l: self.dim_l,
            dim_r: self.dim_r,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if degree(e) % 2 == 0 { c.clone() } else { -c }))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Exponent,
    #[serde(with = "linalg::matrix_serde")]
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    dims: [usize; 2],
    terms: Vec<TermJson>,
}

impl Serialize for MatrixPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            dims: [self.dim_l, self.dim_r],
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: *e, matrix: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let mut p = MatrixPolynomial::zero(j.dims[0], j.dims[1]);
        for t in j.terms {
            p.add_term(t.exp, t.matrix).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_diff};
    use crate::lorentz::{sigma, slash};
    use crate::sampling::{on_shell_batch, Sampler};
    use proptest::prelude::*;

    /// `-2 p_μ σ^μ` written out in raw components.
    fn dirac() -> MatrixPolynomial {
        let s = sigma();
        let mut p = MatrixPolynomial::zero(2, 2);
        for mu in 0..4 {
            let mut e = [0; 4];
            e[mu] = 1;
            p.add_term(e, &s[mu] * r(-2.0 * METRIC[mu])).unwrap();
        }
        p
    }

    fn random_matrix(s: &mut Sampler, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| linalg::c(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)))
    }

    #[test]
    fn constant_and_dirac_eval() {
        let c = identity(3) * r(2.5);
        let p = MatrixPolynomial::constant(c.clone());
        assert_eq!(p.eval(&FourVector::new(1.0, 2.0, 3.0, 4.0)), c);
        let rest = dirac().eval(&FourVector::rest(1.7));
        assert!(max_diff(&rest, &(identity(2) * r(2.0 * 1.7))) < 1e-15);
        let q = FourVector::on_shell([0.2, -0.5, 0.9], 1.0);
        assert!(max_diff(&dirac().eval(&q), &(slash(&q, &sigma()) * r(-2.0))) < 1e-14);
    }

    #[test]
    fn parity_cases() {
        let mut p = MatrixPolynomial::zero(1, 1);
        p.add_term([1, 0, 0, 0], identity(1)).unwrap();
        assert_eq!(p.parity_defect(-1), 0.0);
        assert!(p.parity_defect(1) > 0.0);
        assert_eq!(dirac().parity_defect(-1), 0.0);
        assert_eq!(dirac().reflected(), dirac().scale(r(-1.0)));
    }

    #[test]
    fn reduce_square() {
        let m = 1.3;
        let mut p = MatrixPolynomial::zero(1, 1);
        p.add_term([2, 0, 0, 0], identity(1)).unwrap();
        let red = p.reduce_p0(m);
        assert_eq!(red.terms.len(), 4);
        assert_eq!(red.terms[&[0, 2, 0, 0]], identity(1));
        assert!((red.terms[&[0, 0, 0, 0]][(0, 0)].re - m * m).abs() < 1e-15);
        assert_eq!(dirac().reduce_p0(m), dirac());
    }

    #[test]
    fn reduce_preserves_on_shell_values() {
        let mut s = Sampler::new(4);
        let m = 0.8;
        let mut p = MatrixPolynomial::zero(2, 2);
        for e in [[4, 0, 0, 0], [3, 1, 0, 0], [2, 0, 1, 1], [1, 0, 0, 2], [0, 1, 1, 0], [5, 0, 0, 0]] {
            p.add_term(e, random_matrix(&mut s, 2)).unwrap();
        }
        let red = p.reduce_p0(m);
        assert!(red.max_p0_power() <= 1);
        for q in on_shell_batch(5, m, 100) {
            let a = p.eval(&q);
            assert!(max_diff(&a, &red.eval(&q)) < 1e-9 * max_abs(&a).max(1.0));
        }
    }

    #[test]
    fn dirac_pq_split() {
        let (pp, qq) = dirac().pq_split().unwrap();
        let s = sigma();
        let mut want_p = MatrixPolynomial::zero(2, 2);
        for k in 1..4 {
            let mut e = [0; 4];
            e[k] = 1;
            want_p.add_term(e, &s[k] * r(-2.0)).unwrap();
        }
        assert_eq!(pp, want_p);
        assert_eq!(qq, MatrixPolynomial::constant(identity(2)));

        let mut bad = MatrixPolynomial::zero(1, 1);
        bad.add_term([2, 0, 0, 0], identity(1)).unwrap();
        assert!(matches!(bad.pq_split(), Err(Error::Parity(_))));
    }

    #[test]
    fn shape_errors() {
        let mut p = MatrixPolynomial::zero(2, 2);
        assert!(p.add_term([0; 4], identity(3)).is_err());
        assert!(p.add(&MatrixPolynomial::zero(1, 1)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let p = dirac();
        let s = serde_json::to_string(&p).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["dims"], serde_json::json!([2, 2]));
        assert_eq!(v["terms"][0]["exp"], serde_json::json!([0, 0, 0, 1]));
        let back: MatrixPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn eval_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let mut s = Sampler::new(seed);
            let mut p = MatrixPolynomial::zero(2, 2);
            let mut q = MatrixPolynomial::zero(2, 2);
            for e in [[0, 0, 0, 0], [1, 0, 2, 0], [0, 1, 1, 1]] {
                p.add_term(e, random_matrix(&mut s, 2)).unwrap();
                q.add_term(e, random_matrix(&mut s, 2)).unwrap();
            }
            let x = FourVector::new(s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0), s.uniform(-2.0, 2.0));
            let lhs = p.scale(r(a)).add(&q.scale(r(b))).unwrap().eval(&x);
            let rhs = p.eval(&x) * r(a) + q.eval(&x) * r(b);
            prop_assert!(max_diff(&lhs, &rhs) < 1e-10 * max_abs(&rhs).max(1.0));
        }

        #[test]
        fn pq_reconstruction(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let m = 1.0;
            let mut p = MatrixPolynomial::zero(2, 2);
            for e in [[3, 0, 0, 0], [2, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]] {
                p.add_term(e, random_matrix(&mut s, 2)).unwrap();
            }
            let (pp, qq) = p.reduce_p0(m).pq_split().unwrap();
            for x in on_shell_batch(seed, m, 10) {
                let rebuilt = pp.eval(&x) + qq.eval(&x) * r(2.0 * x.0[0]);
                let direct = p.eval(&x);
                prop_assert!(max_diff(&rebuilt, &direct) < 1e-9 * max_abs(&direct).max(1.0));
            }
        }
    }
}
