//! Spin statistics at the level of exact phases.
//!
//! Fields are normalized with `|κ| = |λ| = 1`, `λ^{AB} = (-1)^{2B} κ^{AB} c`
//! and `c = 1`. The equal-time (anti)commutator of two fields splits into a
//! part even under `p → -p` and a part odd under it; with the polynomial
//! parities fixed, its vanishing reduces to the integer coefficients below.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Statistics {
    Bose,
    Fermi,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Bose => "Bose",
            Statistics::Fermi => "Fermi",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatisticsReport {
    pub a: HalfInt,
    pub b: HalfInt,
    pub j: HalfInt,
    /// `+1` for commutators, `-1` for anticommutators.
    pub required_sign: i32,
    pub statistics: Statistics,
    /// `λ/κ = (-1)^{2B}` with `c = 1`.
    pub lambda_over_kappa: i32,
    pub kappa_lambda_constraint: String,
}

pub fn statistics_for(a: HalfInt, b: HalfInt, j: HalfInt) -> Result<StatisticsReport> {
    if a.is_negative() || b.is_negative() || !HalfInt::triangle(a, b, j) {
        return Err(Error::Triangle { a, b, j });
    }
    // s·(-1)^{2A+2B} = +1
    let required_sign = (a + b).parity_sign();
    let statistics = if j.is_integer() { Statistics::Bose } else { Statistics::Fermi };
    let lambda_over_kappa = b.parity_sign();
    let sign = if lambda_over_kappa == 1 { "" } else { "-" };
    let kappa_lambda_constraint = format!("λ^{{{a},{b}}} = (-1)^{{2B}} κ^{{{a},{b}}} c = {sign}κ^{{{a},{b}}} (c = 1)");
    Ok(StatisticsReport { a, b, j, required_sign, statistics, lambda_over_kappa, kappa_lambda_constraint })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalityConstraint {
    pub labels: [HalfInt; 4],
    pub sign: i32,
    /// `κ^{AB} κ^{CD*} - s (-1)^{2A+2D} λ^{AB} λ^{CD*}`
    pub p_coefficient: i32,
    /// `κ^{AB} κ^{CD*} + s (-1)^{2A+2D} λ^{AB} λ^{CD*}`
    pub q_coefficient: i32,
    /// `(-1)^{2A-2C}`
    pub ratio_phase: i32,
    /// `κ^{AB}/κ^{CD} = (-1)^{2A-2C} λ^{AB}/λ^{CD}` under the convention.
    pub ratio_holds: bool,
    pub rendered: String,
}

impl CausalityConstraint {
    pub fn holds(&self) -> bool {
        self.p_coefficient == 0 && self.ratio_holds
    }
}

/// Evaluates the equal-time vanishing condition for fields `(A,B)` and
/// `(C,D)` with (anti)commutator sign `sign`.
pub fn causality_constraint(a: HalfInt, b: HalfInt, c: HalfInt, d: HalfInt, sign: i32) -> Result<CausalityConstraint> {
    if sign != 1 && sign != -1 {
        return Err(Error::Parity(format!("sign must be ±1, got {sign}")));
    }
    if !(a + b - c - d).is_integer() {
        return Err(Error::Parity(format!(
            "2A+2B and 2C+2D differ in parity for ({a},{b}) and ({c},{d})"
        )));
    }
    // κ = 1, λ = (-1)^{2B} for both fields
    let kk = 1;
    let ll = b.parity_sign() * d.parity_sign();
    let ad = (a + d).parity_sign();
    let p_coefficient = kk - sign * ad * ll;
    let q_coefficient = kk + sign * ad * ll;
    let ratio_phase = (a - c).parity_sign();
    let lambda_ratio = b.parity_sign() * d.parity_sign();
    let ratio_holds = 1 == ratio_phase * lambda_ratio;
    let s = if sign == 1 { "+" } else { "-" };
    let rendered = format!(
        "κκ* {} (-1)^{{2A+2D}} λλ* = {p_coefficient} for s = {s}1, (A,B,C,D) = ({a},{b},{c},{d})",
        if sign == 1 { "-" } else { "+" }
    );
    Ok(CausalityConstraint { labels: [a, b, c, d], sign, p_coefficient, q_coefficient, ratio_phase, ratio_holds, rendered })
}
