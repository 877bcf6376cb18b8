//! Exact symbolic computation for full toroidal Lie algebras.
//!
//! The crate constructs the rank-(n+1) toroidal algebra over exact
//! rationals — loop part, differential classes modulo exact forms, and the
//! derivation algebra glued by a two-parameter cocycle — together with its
//! distinguished subalgebras, the tensor-field weight modules, the de Rham
//! complex on the torus, covering-module diagnostics, and windowed
//! generalized Verma quotients over the degree-zero triangular
//! decomposition. Everything is computed with arbitrary-precision rational
//! arithmetic; there is no approximate mode.
//!
//! All values are immutable; any operation may run concurrently from
//! multiple threads and results are deterministic.

pub mod algebra;
pub mod analysis;
pub mod catalogue;
pub mod derham;
pub mod error;
pub mod hvir;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod reps;
pub mod scalar;
pub mod simple;
pub mod subalg;
pub mod suites;
pub mod tensor;
pub mod verma;
pub mod weights;

pub use algebra::{AlgebraConfig, AlgebraElement, BasisSymbol, CocycleConfig};
pub use error::Error;
pub use lattice::MultiIndex;
pub use scalar::Scalar;
pub use simple::GFamily;
