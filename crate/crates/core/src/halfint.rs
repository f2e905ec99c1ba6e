//! Exact half-integers.
//!
//! Spin labels (A, B, j, σ, K, ...) are always integers or half-integers, so
//! they are stored as the integer `2x`. All arithmetic and all sign factors
//! such as `(-1)^{2B}` are computed on that integer; floating point only
//! appears when a value is explicitly converted with [`HalfInt::value`].

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A number of the form `n/2` with `n` an integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };
    pub const THREE_HALVES: HalfInt = HalfInt { twice: 3 };

    /// The half-integer whose double is `twice`.
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    /// An integer value.
    pub const fn int(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    /// `(-1)^{2x}`: +1 for integers, -1 for proper half-integers.
    pub const fn parity_sign(self) -> i32 {
        if self.twice % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// `(-1)^x` for integer `x`; `None` when `x` is a proper half-integer.
    pub const fn phase(self) -> Option<i32> {
        if self.twice % 2 != 0 {
            None
        } else if (self.twice / 2) % 2 == 0 {
            Some(1)
        } else {
            Some(-1)
        }
    }

    /// `2x + 1`, the dimension of the spin-`x` representation.
    ///
    /// Panics if `x` is negative.
    pub fn multiplicity(self) -> usize {
        assert!(self.twice >= 0, "negative spin {self}");
        (self.twice + 1) as usize
    }

    /// `x(x+1)`.
    pub fn casimir(self) -> f64 {
        let x = self.value();
        x * (x + 1.0)
    }

    /// The values `x, x-1, ..., -x` (descending magnetic quantum numbers).
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let top = self.twice;
        (0..=top.max(-1)).map(move |k| HalfInt { twice: top - 2 * k })
    }

    /// Values from `lo` to `hi` inclusive in unit steps.
    pub fn range_inclusive(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        let (lo, hi) = (lo.twice, hi.twice);
        (0..)
            .map(move |k| lo + 2 * k)
            .take_while(move |t| *t <= hi)
            .map(HalfInt::from_twice)
    }

    /// Spins `|a-b|, ..., a+b` appearing in `a ⊗ b`.
    pub fn coupled(a: HalfInt, b: HalfInt) -> impl Iterator<Item = HalfInt> {
        HalfInt::range_inclusive((a - b).abs(), a + b)
    }

    /// True when `|a-b| <= j <= a+b` and `j - a - b` is an integer.
    pub fn triangle(a: HalfInt, b: HalfInt, j: HalfInt) -> bool {
        (a - b).abs() <= j && j <= a + b && (j - a - b).is_integer()
    }

    pub fn max(self, other: HalfInt) -> HalfInt {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: HalfInt) -> HalfInt {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.twice += rhs.twice;
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.twice -= rhs.twice;
    }
}

impl Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Accepts `"3/2"`, `"1.5"`, `"2"`, `"-1/2"` and `"twice:3"`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("twice:") {
            return rest.trim().parse::<i32>().map(HalfInt::from_twice).map_err(|_| bad());
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt::int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let whole: i32 = if int == "-" || int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let frac = frac.trim_end_matches('0');
            let half = match frac {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let twice = 2 * whole.abs() + half;
            return Ok(HalfInt::from_twice(if negative { -twice } else { twice }));
        }
        s.parse::<i32>().map(HalfInt::int).map_err(|_| bad())
    }
}
