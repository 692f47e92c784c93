//! Simulation and analysis toolkit for information flow during unitary
//! black-hole evaporation.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: dense states, density operators, Haar unitaries, norms and
//!   entropies.
//! * [`models`]: the pure-state, entangled-state and uniform-entanglement
//!   evaporation models and the (cascaded) evaporation map.
//! * [`haar`]: closed-form Haar averages (Schur-lemma swap average, average
//!   purities, `chi`) evaluated in the log domain so that interiors of a
//!   hundred qubits stay representable.
//! * [`infoflow`]: correlation curves, the decoupling estimator and its
//!   three-level bound, fidelity floors and qubit-count thresholds.
//! * [`mc`]: reproducible seeded Monte Carlo with per-sample substreams.
//!
//! All entropies are in bits.

pub mod error;
pub mod haar;
pub mod infoflow;
pub mod mc;
pub mod models;
pub mod qcore;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
