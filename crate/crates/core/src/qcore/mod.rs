//! Dense complex linear algebra and quantum primitives.

mod density;
mod entropy;
mod label;
mod ledger;
mod linalg;
mod state;
mod swap;
mod unitary;

pub use density::DensityOperator;
pub use entropy::{
    purity_from_spectrum, renyi_entropy, renyi_from_spectrum, von_neumann_from_spectrum,
    EIGEN_FLOOR,
};
pub use label::{names, Layout, SubsystemLabel};
pub use ledger::{EntropyEntry, EntropyLedger, Provenance};
pub use linalg::{
    fidelity, hermitian_eigenvalues, hermitian_function, hermitian_trace_norm, kron, trace_norm,
};
pub use state::MultipartiteState;
pub use swap::{partial_swap_operator, swap_operator, swap_trace_purity};
pub use unitary::{haar_sample, Unitary};
