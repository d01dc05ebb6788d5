//! Exact subspace-lattice computations over small finite fields.
//!
//! The crate enumerates Grassmannians of `F_q^n`, builds the Hilton-Milner type
//! families of `k`-subspaces, computes covering numbers and cover structure, and
//! certifies the numeric inequalities behind product bounds for cross
//! `t`-intersecting families, all in exact arithmetic.

pub mod error;
pub mod families;
pub mod gf;
pub mod grassmann;
pub mod linalg;
pub mod qbinom;
pub mod search;

pub use error::{Error, Result};
pub use gf::FieldSpec;
pub use grassmann::{enumerate_grassmannian, enumerate_subspaces_of, enumerate_superspaces, Subspace};
pub use linalg::MatrixGF;
pub use qbinom::{gauss_binom, ExactScalar};
pub use families::{covering_number, trivial_family, construct_h1, construct_h2, Family};
pub use search::{closure, compare_to_theorem, exhaustive_closed_pairs, stochastic_improve, SearchConfig, SearchMode, SearchRecord};
