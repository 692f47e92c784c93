use serde::{Deserialize, Serialize};

use crate::models::ExtSpectrum;
use crate::{Error, Result};

/// `χ^(q) = S_BH − k − H^(q)(ρ_ext)`: roughly the number of excess
/// unentangled qubits in the initial interior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiProfile {
    pub q: f64,
    pub value: f64,
}

const RANGE_TOL: f64 = 1e-9;

pub fn chi(q: f64, n: u32, k: u32, ext: &ExtSpectrum) -> Result<ChiProfile> {
    let h = ext.renyi(q)?;
    let max = n as f64 - k as f64;
    let value = max - h;
    if value < -RANGE_TOL || value > max + RANGE_TOL || max < 0.0 {
        return Err(Error::InconsistentChi { q, value, max });
    }
    Ok(ChiProfile {
        q,
        value: value.clamp(0.0, max.max(0.0)),
    })
}
