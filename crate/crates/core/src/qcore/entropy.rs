use super::DensityOperator;
use crate::{Error, Result};

/// Eigenvalues at or below this are dropped from `q ≤ 1` entropy sums.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// `tr ρ²` from a spectrum.
pub fn purity_from_spectrum(spectrum: &[f64]) -> f64 {
    spectrum.iter().map(|l| l * l).sum()
}

/// `−Σ λ log₂ λ` over eigenvalues above the floor.
pub fn von_neumann_from_spectrum(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .filter(|&&l| l > EIGEN_FLOOR)
        .map(|&l| -l * l.log2())
        .sum();
    s.max(0.0)
}

/// Rényi entropy `log₂(Σ λ^q)/(1−q)` in bits; `q = 1` is the von Neumann limit.
pub fn renyi_from_spectrum(spectrum: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidOrder(q));
    }
    if (q - 1.0).abs() < 1e-12 {
        return Ok(von_neumann_from_spectrum(spectrum));
    }
    let sum: f64 = if q < 1.0 {
        spectrum
            .iter()
            .filter(|&&l| l > EIGEN_FLOOR)
            .map(|&l| l.powf(q))
            .sum()
    } else {
        spectrum.iter().map(|&l| l.max(0.0).powf(q)).sum()
    };
    Ok((sum.log2() / (1.0 - q)).max(0.0))
}

pub fn renyi_entropy(rho: &DensityOperator, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidOrder(q));
    }
    renyi_from_spectrum(&rho.eigenvalues(), q)
}
