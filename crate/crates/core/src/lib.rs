//! Exact chain-level models of bar constructions over ℚ.
//!
//! Starting from an augmented graded-commutative dg-algebra, this crate builds
//! the reduced bar complex with its Hopf dg-algebra structure, computes its
//! cohomology exactly, and extracts the degree-zero Hopf algebra (the coarse
//! moduli group scheme). Weight-graded inputs are handled bidegree by
//! bidegree with no truncation error.

pub mod bar;
pub mod complexes;
pub mod dga;
pub mod exactlin;
pub mod fixtures;
pub mod hopf;
pub mod weighted;

pub use complexes::{Complex, Label};
pub use dga::{AugmentedDGA, Generator, StructBuilder};
pub use exactlin::{Rat, SparseMatrix, SparseVec};
pub use hopf::HopfAlgebra;
