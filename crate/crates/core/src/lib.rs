//! Verification toolkit for two- and three-qubit communication resources.
//!
//! The crate decides whether a pure state can serve as the shared resource
//! for perfect teleportation (three-qubit, n-qubit and the two-qubit Bennett
//! scheme) and for superdense coding of two or three classical bits. Every
//! closed-form checker in [`suitability`] has a brute-force counterpart in
//! [`oracle`] that builds the measurement bases or coded states explicitly.
//!
//! Basis convention: the amplitude `c[i]` multiplies the ket whose binary
//! expansion is `i`, with qubit 1 as the most significant bit. So `c[5]`
//! belongs to `|101⟩`.

pub mod canonical;
pub mod catalog;
pub mod error;
pub mod lu;
pub mod oracle;
pub mod state;
pub mod suitability;
pub mod tolerance;

pub use canonical::{classify_slocc, schmidt_decompose, sd_class_of, SchmidtDecomposition, SloccClass};
pub use error::{Error, Result};
pub use state::{
    apply_local_unitary, concurrence2, fidelity, gram_offdiag_max, reduced_density, three_tangle,
    von_neumann_entropy, DensityMatrix, LocalUnitary, PureState, UnknownQubit,
};
pub use suitability::{Protocol, SuitabilityReport};

pub use num_complex::Complex64;
