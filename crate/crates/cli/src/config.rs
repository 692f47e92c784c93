use std::path::{Path, PathBuf};

use horizon_core::infoflow::{CurvePath, Roles, DEFAULT_DIM_CAP};
use horizon_core::models::{ExtSpectrum, Injection, ModelKind, ModelSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Exterior spectrum as written in a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtConfig {
    /// Uniform over `2^{n−k}` modes, the spectrum with `χ^(q) = 0`.
    Chi0,
    Uniform(u64),
    UniformLog2(f64),
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    #[serde(default)]
    pub k: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<ExtConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log2e: Option<u32>,
    #[serde(default = "default_path")]
    pub path: CurvePath,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_q")]
    pub q: Vec<f64>,
    /// Output directory; kept out of reports so reruns elsewhere compare equal.
    #[serde(default, skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub workers: Option<usize>,
    #[serde(default = "default_cap")]
    pub dim_cap: u64,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub sample: SampleConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Radiated qubit counts to check; every `r` by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<u32>>,
    #[serde(default = "quarter")]
    pub nu: f64,
    #[serde(default = "quarter")]
    pub mu: f64,
    /// Custom role assignments; the model's standard pair when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roles: Vec<NamedRoles>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            r: None,
            nu: 0.25,
            mu: 0.25,
            roles: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedRoles {
    pub name: String,
    #[serde(flatten)]
    pub roles: Roles,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    /// Qubits radiated one at a time; all of the interior by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub injection: Option<Injection>,
}

fn default_path() -> CurvePath {
    CurvePath::Analytic
}

fn default_samples() -> usize {
    1000
}

fn default_c() -> f64 {
    1.0
}

fn default_q() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_cap() -> u64 {
    DEFAULT_DIM_CAP as u64
}

fn quarter() -> f64 {
    0.25
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse { reason, .. } => CliError::Parse {
                path: path.to_path_buf(),
                reason,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Parse {
            path: PathBuf::from("<inline>"),
            reason: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(CliError::field(
                "c",
                format!("must be a finite number > 0, got {}", self.c),
            ));
        }
        if self.samples == 0 {
            return Err(CliError::field("samples", "must be at least 1"));
        }
        if let Some(q) = self.q.iter().find(|q| !(**q > 0.0) || !q.is_finite()) {
            return Err(CliError::field(
                "q",
                format!("orders must be finite and > 0, got {q}"),
            ));
        }
        if self.workers == Some(0) {
            return Err(CliError::field("workers", "must be at least 1"));
        }
        for (name, v) in [("verify.nu", self.verify.nu), ("verify.mu", self.verify.mu)] {
            if !(0.0..=0.5).contains(&v) {
                return Err(CliError::field(name, format!("need 0 <= 2x <= 1, got {v}")));
            }
        }
        if let Some(rs) = &self.verify.r {
            if let Some(r) = rs.iter().find(|r| **r > self.n) {
                return Err(CliError::field(
                    "verify.r",
                    format!("{r} exceeds n = {}", self.n),
                ));
            }
        }
        self.model_spec().map(|_| ())
    }

    pub fn model_spec(&self) -> Result<ModelSpec, CliError> {
        let spec = match self.model {
            ModelKind::Pure => {
                if self.ext.is_some() {
                    return Err(CliError::field("ext", "the pure model has no exterior"));
                }
                ModelSpec::Pure {
                    k: self.k,
                    n: self.n,
                }
            }
            ModelKind::Entangled => {
                let ext = match &self.ext {
                    None => return Err(CliError::field("ext", "required for the entangled model")),
                    Some(ExtConfig::Chi0) => {
                        ExtSpectrum::uniform_log2(self.n.saturating_sub(self.k) as f64)
                    }
                    Some(ExtConfig::Uniform(count)) => ExtSpectrum::uniform(*count as usize),
                    Some(ExtConfig::UniformLog2(bits)) => ExtSpectrum::uniform_log2(*bits),
                    Some(ExtConfig::Explicit(p)) => ExtSpectrum::explicit(p.clone()),
                }
                .map_err(|e| CliError::field("ext", e.to_string()))?;
                ModelSpec::Entangled {
                    k: self.k,
                    n: self.n,
                    ext,
                }
            }
            ModelKind::Uniform => {
                if self.k != 0 {
                    return Err(CliError::field(
                        "k",
                        "the uniform model has no matter qubits",
                    ));
                }
                let Some(log2e) = self.log2e else {
                    return Err(CliError::field("log2e", "required for the uniform model"));
                };
                ModelSpec::Uniform { log2e, n: self.n }
            }
        };
        spec.validate().map_err(|e| {
            let field = match e {
                horizon_core::Error::PaddingDeficit { .. } => "ext",
                horizon_core::Error::InvalidParameter { name, .. } => name,
                _ => "model",
            };
            CliError::field(field, e.to_string())
        })?;
        Ok(spec)
    }

    /// `log₂` of the full pure-state dimension `2^n·K·N`.
    pub fn state_qubits(&self) -> Result<f64, CliError> {
        let spec = self.model_spec()?;
        Ok(match &spec {
            ModelSpec::Pure { k, n } => (k + n) as f64,
            ModelSpec::Entangled { k, n, ext } => (k + n) as f64 + ext.count_log2(),
            ModelSpec::Uniform { log2e, n } => (log2e + n) as f64,
        })
    }

    /// Rejects Monte Carlo work on states above the cap.
    pub fn check_cap(&self) -> Result<(), CliError> {
        let bits = self.state_qubits()?;
        if bits > (self.dim_cap as f64).log2() + 1e-12 {
            let dim = if bits < 127.0 {
                bits.exp2().ceil() as u128
            } else {
                u128::MAX
            };
            return Err(horizon_core::Error::DimCapExceeded {
                dim,
                cap: self.dim_cap as u128,
            }
            .into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_scenario_parses() {
        let c = ScenarioConfig::parse(
            "model = \"entangled\"\nk = 10\nn = 100\next = \"chi0\"\nc = 10\n",
        )
        .unwrap();
        let ModelSpec::Entangled { ext, .. } = c.model_spec().unwrap() else {
            panic!("wrong model");
        };
        assert_eq!(ext.count_log2(), 90.0);
        assert_eq!(c.path, CurvePath::Analytic);
        assert!(matches!(c.check_cap(), Err(CliError::Core(_))));
    }

    #[test]
    fn ext_forms() {
        for (ext, bits) in [
            ("ext = { uniform = 4 }", 2.0),
            ("ext = { uniform_log2 = 1.5 }", 1.5),
            ("ext = { explicit = [0.5, 0.25, 0.25] }", 3f64.log2()),
        ] {
            let c = ScenarioConfig::parse(&format!("model = \"entangled\"\nk = 1\nn = 3\n{ext}\n"))
                .unwrap();
            assert_eq!(c.model_spec().unwrap().ext().unwrap().count_log2(), bits);
        }
    }

    #[test]
    fn named_field_errors() {
        let bad = [
            ("model = \"pure\"\nn = 3\nc = 0\n", "c"),
            ("model = \"pure\"\nn = 3\nsamples = 0\n", "samples"),
            ("model = \"pure\"\nn = 3\nk = 4\n", "k"),
            ("model = \"entangled\"\nn = 3\nk = 1\n", "ext"),
            (
                "model = \"entangled\"\nn = 3\nk = 1\next = { uniform = 8 }\n",
                "ext",
            ),
            ("model = \"uniform\"\nn = 3\n", "log2e"),
            ("model = \"uniform\"\nn = 3\nlog2e = 4\n", "log2e"),
            ("model = \"pure\"\nn = 3\nq = [0.5, -1]\n", "q"),
        ];
        for (text, field) in bad {
            match ScenarioConfig::parse(text) {
                Err(CliError::Field { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(
            ScenarioConfig::parse("model = \"pure\"\nn = 3\nbogus = 1\n"),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn custom_roles_parse() {
        let text = "model = \"pure\"\nk = 1\nn = 3\n[[verify.roles]]\nname = \"a\"\nx = [\"ref\"]\ny1 = [\"R\"]\ny2 = [\"B\"]\n";
        let c = ScenarioConfig::parse(text).unwrap();
        assert_eq!(c.verify.roles[0].roles.y1, vec!["R".to_string()]);
        assert!(c.verify.roles[0].roles.z.is_empty());
    }
}
