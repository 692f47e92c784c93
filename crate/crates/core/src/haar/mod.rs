//! Closed-form Haar averages.
//!
//! Second-moment averages over the unitary group reduce, by Schur's lemma,
//! to combinations of the identity and the swap on two copies of the
//! system. That gives the average purities of every subsystem of the
//! evaporation models as rational functions of the dimensions
//! `K` (ref), `N` (ext), `R` (radiation) and `B` (remaining interior).
//! Dimensions like 2^100 are handled by evaluating those
//! functions in the log domain.

mod chi;
mod logdomain;
mod purity;
mod schur;

pub use chi::{chi, ChiProfile};
pub use logdomain::SignedLog2;
pub use purity::{
    average_purity, average_purity_exact, entropy_estimate, DimensionProfile, EntropyEstimate,
    ExactDims, Purity, PurityTag,
};
pub use schur::{schur_average_swap, schur_average_swap_exact, SchurCoefficients};
