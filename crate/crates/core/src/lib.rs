//! Finite-dimensional Lorentz representations, generalized gamma matrices
//! and spin sums for massive particles.
//!
//! The guide under `book/` walks through the main types; its code samples
//! run as doc tests of this crate.
//!
//! ```
//! use spinsum::{FourVector, HalfInt};
//! use spinsum::gamma::TwistKind;
//! use spinsum::spinsum::{direct, SpinSumJob};
//!
//! let h = HalfInt::HALF;
//! let job = SpinSumJob::labeled((h, h), (h, h), HalfInt::ONE, 1.0)?;
//! let pi = direct(&job, TwistKind::Hermitian, &FourVector::on_shell([0.0, 0.0, 0.5], 1.0))?;
//! assert_eq!(pi.shape(), (4, 4));
//! # Ok::<(), spinsum::Error>(())
//! ```

pub mod cache;
pub mod error;
pub mod field;
pub mod gamma;
pub mod halfint;
pub mod linalg;
pub mod intertwiner;
pub mod lorentz;
pub mod sampling;
pub mod poly;
pub mod spinsum;
pub mod statistics;
pub mod su2;
pub mod suite;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use linalg::{CMatrix, Tolerance};
pub use lorentz::{ab_rep, rep_matrix, standard_boost, vector_field_rep, FieldRep, FourVector, LorentzWord};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/gamma.md")]
    mod gamma {}
    #[doc = include_str!("../../../book/src/spin-sums.md")]
    mod spin_sums {}
    #[doc = include_str!("../../../book/src/field-equations.md")]
    mod field_equations {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
}
