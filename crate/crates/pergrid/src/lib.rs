//! Exact-arithmetic toolkit for persistence modules over commutative grids.
//!
//! The crate works with finite-dimensional representations of products of
//! oriented line quivers, bound by the commutativity of every unit square.
//! It provides staircase/interval combinatorics, thin decomposition,
//! almost-split-sequence based multiplicity counting, decomposability
//! oracles, and a brute-force decomposition cross-check over prime fields,
//! all over exact coefficient fields (arbitrary-precision rationals or F_p).

pub mod ar;
pub mod bruteforce;
pub mod classify;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod grid;
pub mod intervals;
pub mod io;
pub mod matrix;
pub mod morphism;
pub mod oracle;
pub mod random;
pub mod rep;

pub use ar::{
    injective, multiplicity, projective, socle, source_map_target, tau, tau_inverse, SourceCache,
    SourceMapData,
};
pub use bruteforce::{decompose, is_isomorphic, multiplicity_bruteforce, Decomposition};
pub use classify::{classify, ClassificationReport};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use grid::{Arrow, ArrowId, Dir, Factor, GridQuiver, UnitSquare, VertexId};
pub use intervals::Staircase;
pub use io::{parse_module, parse_module_str, write_module, write_module_str};
pub use matrix::Matrix;
pub use morphism::Morphism;
pub use oracle::{
    all_interval_reps, interval_decomposable, interval_decomposable_cached, s_decomposable,
    OracleVerdict,
};
pub use random::{random_cokernel, random_interval_sum, random_invertible, random_thin_disjoint};
pub use rep::{hom_basis, hom_dim, Rep};
