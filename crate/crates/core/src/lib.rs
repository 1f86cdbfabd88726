//! Finite-dimensional algebraic quantum groups.

pub mod algebra;
pub mod amen;
pub mod duality;
pub mod error;
pub mod gns;
pub mod groups;
pub mod hopf;
pub mod io;
pub mod kesten;
pub mod matrix;
pub mod modular;
pub mod multiplier;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};

/// The guide's snippets, run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/structure-files.md")]
    mod structure_files {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/duality.md")]
    mod duality {}
    #[doc = include_str!("../../../book/src/multiplicative-unitary.md")]
    mod multiplicative_unitary {}
    #[doc = include_str!("../../../book/src/amenability.md")]
    mod amenability {}
    #[doc = include_str!("../../../book/src/kesten.md")]
    mod kesten {}
    #[doc = include_str!("../../../book/src/modular.md")]
    mod modular {}
    #[doc = include_str!("../../../book/src/reports.md")]
    mod reports {}
}
