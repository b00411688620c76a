//! Exact computational machinery for flows carrying cocycles on finite cell
//! complexes: integer/rational homology through Smith normal form, twisted
//! chain complexes over multivariate Laurent rings with their generic-rank
//! Novikov numbers, fundamental-domain gluing and deformation complexes with
//! full identity verification, combinatorial flow classification, and the
//! Morse-type inequality checks tying them together.
//!
//! Everything is arbitrary-precision and deterministic; the only entropy is
//! an explicit seed. With the default `parallel` feature the batch loops
//! (evaluation trials, per-degree ranks, brute-force sweeps) fan out over
//! rayon; `--no-default-features` gives a sequential build with identical
//! outputs.

pub mod cocycle;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod gluing;
pub mod homology;
pub mod laurent;
pub mod matrix;
pub mod monodromy;
pub mod morse;
mod par;
pub mod twisted;

pub use complex::{validate_cells, Cell, CellComplex, ValidationReport};
pub use error::{Error, Result};
pub use homology::{homology, relative_homology, Coefficients, HomologyResult};
pub use matrix::{smith_normal_form, IntMatrix, RatMatrix, SmithNormalForm};
