use serde::{Deserialize, Serialize};

use crate::haar::chi;
use crate::models::ModelSpec;
use crate::{Error, Result};

/// Inputs of the qubit-count thresholds; the fidelity target is `1 − 2^-c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub n: f64,
    pub k: f64,
    pub chi_half: f64,
    pub chi_two: f64,
    pub c: f64,
}

impl ThresholdParams {
    /// Derives `χ^(1/2)` and `χ^(2)` from a model's exterior spectrum.
    pub fn from_model(model: &ModelSpec, c: f64) -> Result<Self> {
        let ext = model.ext()?;
        let (n, k) = (model.n(), model.k());
        Ok(Self {
            n: n as f64,
            k: k as f64,
            chi_half: chi(0.5, n, k, &ext)?.value,
            chi_two: chi(2.0, n, k, &ext)?.value,
            c,
        })
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n", self.n),
            ("k", self.k),
            ("chi_half", self.chi_half),
            ("chi_two", self.chi_two),
            ("c", self.c),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("{v} must be finite and >= 0")));
            }
        }
        if self.chi_half + 1e-12 < self.chi_two {
            return Err(Error::param(
                "chi_half",
                format!(
                    "chi^(1/2) = {} below chi^(2) = {}",
                    self.chi_half, self.chi_two
                ),
            ));
        }
        Ok(())
    }
}

/// A qubit count clamped into `[0, n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub raw: f64,
    pub value: f64,
    pub clamped: bool,
}

impl Threshold {
    fn clamp(raw: f64, n: f64) -> Self {
        let value = raw.clamp(0.0, n);
        Self {
            raw,
            value,
            clamped: value != raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRecord {
    /// Pure model: information stays in the interior before `½(S_BH − k) − c` radiated.
    pub pure_retention: Threshold,
    /// Pure model: information is in the radiation after a further `k + 2c`.
    pub pure_release_further: Threshold,
    /// Entangled model: the initial and the final `k + ½χ^(2) + c` radiated qubits.
    pub window: Threshold,
    /// Entangled model: information solely in the interior before `½χ^(1/2) − c`.
    pub early_retention: Threshold,
    /// Exterior entanglement transferred to the radiation once `S_BH − ½χ^(1/2) + c` radiated.
    pub ext_transfer: Threshold,
    /// Exterior entanglement still with the interior before `½(S_BH − H^(1/2)(ρ_ext)) − c`.
    pub ext_persistence: Threshold,
    /// Qubits radiated while the one-time pad is encoded (or decoded): `k + ½(χ^(1/2) − χ^(2)) + 2c`.
    pub window_width: Threshold,
}

impl ThresholdRecord {
    pub fn any_clamped(&self) -> bool {
        self.iter().any(|(_, t)| t.clamped)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Threshold)> {
        [
            ("pure_retention", &self.pure_retention),
            ("pure_release_further", &self.pure_release_further),
            ("window", &self.window),
            ("early_retention", &self.early_retention),
            ("ext_transfer", &self.ext_transfer),
            ("ext_persistence", &self.ext_persistence),
            ("window_width", &self.window_width),
        ]
        .into_iter()
    }
}

pub fn thresholds(p: &ThresholdParams) -> Result<ThresholdRecord> {
    p.validate()?;
    let t = |raw: f64| Threshold::clamp(raw, p.n);
    // H^(1/2)(ρ_ext) = S_BH − k − χ^(1/2).
    let h_ext_half = p.n - p.k - p.chi_half;
    Ok(ThresholdRecord {
        pure_retention: t(0.5 * (p.n - p.k) - p.c),
        pure_release_further: t(p.k + 2.0 * p.c),
        window: t(p.k + 0.5 * p.chi_two + p.c),
        early_retention: t(0.5 * p.chi_half - p.c),
        ext_transfer: t(p.n - 0.5 * p.chi_half + p.c),
        ext_persistence: t(0.5 * (p.n - h_ext_half) - p.c),
        window_width: t(p.k + 0.5 * (p.chi_half - p.chi_two) + 2.0 * p.c),
    })
}
