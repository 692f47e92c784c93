//! Information-flow analytics built on the models and the Haar averages.

mod correlation;
mod curves;
mod decoupling;
mod thresholds;

pub use correlation::{correlation, discernable_information};
pub use curves::{
    correlation_curves, radiation_discernable_information, CorrelationCurves, CurvePath,
    CurvePoint, CurveRequest, NegativeCorrelation, DEFAULT_DIM_CAP,
};
pub use decoupling::{
    decoupling_lhs, decoupling_rhs, ext_decoupling_bound, fidelity_floor, fidelity_floor_squared,
    verify_decoupling, BoundLevel, BoundReport, DecouplingParams, FidelityFloor, LevelOutcome,
    Roles, SpectralInputs, PRODUCT_TOL,
};
pub use thresholds::{thresholds, Threshold, ThresholdParams, ThresholdRecord};
