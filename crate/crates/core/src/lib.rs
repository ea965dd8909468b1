//! Finite witnesses and colorings for chromatic numbers of slabs
//! `R^n x [0, eps]^k`.
//!
//! The crate builds unit-distance graphs that force a number of colors
//! (strips, the three-dimensional slab, rational slabs, curve
//! neighborhoods), certifies their chromatic numbers with an exact
//! DSATUR-ordered backtracking search, and checks the matching upper-bound
//! colorings by exact arithmetic and seeded sampling.
//!
//! ```
//! use udcert::chromatic::{is_k_colorable, SolveBudget};
//! use udcert::constructions::rational::rational_odd_cycle;
//! use udcert::scalar::Scalar;
//! use udcert::udgraph::validate_geometry;
//!
//! let g = rational_odd_cycle(1, &Scalar::ratio(2, 5)).unwrap();
//! assert_eq!(g.edge_count(), 27);
//! assert!(validate_geometry(&g).exact_zero_residual);
//! assert!(is_k_colorable(&g, 2, &SolveBudget::default()).is_unsat());
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chromatic;
pub mod colorings;
pub mod constructions;
pub mod error;
pub mod extended;
pub mod geometry;
pub mod scalar;
pub mod udgraph;

pub use error::{Error, Result};

/// Book chapters compiled as doctests so their snippets stay current.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    pub mod geometry {}
    #[doc = include_str!("../../../book/src/forbidden_radii.md")]
    pub mod forbidden_radii {}
    #[doc = include_str!("../../../book/src/strips.md")]
    pub mod strips {}
    #[doc = include_str!("../../../book/src/slab.md")]
    pub mod slab {}
    #[doc = include_str!("../../../book/src/pentagon.md")]
    pub mod pentagon {}
    #[doc = include_str!("../../../book/src/rational.md")]
    pub mod rational {}
    #[doc = include_str!("../../../book/src/colorings.md")]
    pub mod colorings {}
    #[doc = include_str!("../../../book/src/solver.md")]
    pub mod solver {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
