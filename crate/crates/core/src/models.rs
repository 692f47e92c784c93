//! Initial states of the evaporation models and the evaporation map.
//!
//! The interior register `int` holds `n` qubits. Evaporation applies a
//! unitary to `int` and splits it by bit position into the remaining
//! interior `B` (leading `n − r` qubits) and the radiation `R` (trailing `r`
//! qubits), so layouts read `ref, B, R, ext`.

use std::borrow::Cow;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::qcore::{
    haar_sample, names, renyi_from_spectrum, EntropyLedger, Layout, MultipartiteState,
    SubsystemLabel, Unitary,
};
use crate::{Error, Result, C64};

/// Largest state (in amplitudes) the builders will allocate.
pub const MAX_STATE_DIM: u128 = 1 << 26;

/// Largest symbolic spectrum that will be materialised as a list.
const MAX_MATERIALISED: f64 = 24.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SpectrumRepr {
    Explicit(Vec<f64>),
    /// `2^log2_count` equal weights, kept symbolic for sizes like 2^90.
    Uniform {
        log2_count: f64,
    },
}

/// Spectrum `{p_j}` of the exterior neighbourhood modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtSpectrum {
    repr: SpectrumRepr,
}

impl ExtSpectrum {
    pub fn explicit(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidSpectrum("empty spectrum".into()));
        }
        if let Some(p) = probabilities
            .iter()
            .find(|p| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::InvalidSpectrum(format!(
                "negative or non-finite weight {p}"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpectrum(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self {
            repr: SpectrumRepr::Explicit(probabilities),
        })
    }

    /// Uniform weights over `count` modes.
    pub fn uniform(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidSpectrum(
                "uniform spectrum over zero modes".into(),
            ));
        }
        Ok(Self {
            repr: SpectrumRepr::Explicit(vec![1.0 / count as f64; count]),
        })
    }

    /// Uniform weights over `2^log2_count` modes, without materialising them.
    pub fn uniform_log2(log2_count: f64) -> Result<Self> {
        if !(log2_count >= 0.0) || !log2_count.is_finite() {
            return Err(Error::InvalidSpectrum(format!(
                "log2 count {log2_count} must be >= 0"
            )));
        }
        Ok(Self {
            repr: SpectrumRepr::Uniform { log2_count },
        })
    }

    /// The one-dimensional (unentangled) exterior.
    pub fn trivial() -> Self {
        Self {
            repr: SpectrumRepr::Explicit(vec![1.0]),
        }
    }

    /// `log₂ N`.
    pub fn count_log2(&self) -> f64 {
        match &self.repr {
            SpectrumRepr::Explicit(p) => (p.len() as f64).log2(),
            SpectrumRepr::Uniform { log2_count } => *log2_count,
        }
    }

    /// `N`, when it is an integer that fits comfortably in memory.
    pub fn count(&self) -> Option<usize> {
        match &self.repr {
            SpectrumRepr::Explicit(p) => Some(p.len()),
            SpectrumRepr::Uniform { log2_count } => (log2_count.fract() == 0.0
                && *log2_count <= MAX_MATERIALISED)
                .then(|| 1usize << *log2_count as u32),
        }
    }

    pub fn probabilities(&self) -> Option<Cow<'_, [f64]>> {
        match &self.repr {
            SpectrumRepr::Explicit(p) => Some(Cow::Borrowed(p)),
            SpectrumRepr::Uniform { .. } => {
                let n = self.count()?;
                Some(Cow::Owned(vec![1.0 / n as f64; n]))
            }
        }
    }

    /// `H^(q)(ρ_ext)` in bits.
    pub fn renyi(&self, q: f64) -> Result<f64> {
        match &self.repr {
            SpectrumRepr::Explicit(p) => renyi_from_spectrum(p, q),
            SpectrumRepr::Uniform { log2_count } => {
                if !(q > 0.0) || !q.is_finite() {
                    return Err(Error::InvalidOrder(q));
                }
                Ok(*log2_count)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Reference-purified pure interior.
    Pure,
    /// Interior entangled with exterior neighbourhood modes.
    Entangled,
    /// Uniform interior/exterior entanglement, no reference.
    Uniform,
}

/// Parameters of one evaporation model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Pure { k: u32, n: u32 },
    Entangled { k: u32, n: u32, ext: ExtSpectrum },
    Uniform { log2e: u32, n: u32 },
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::Pure { .. } => ModelKind::Pure,
            ModelSpec::Entangled { .. } => ModelKind::Entangled,
            ModelSpec::Uniform { .. } => ModelKind::Uniform,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            ModelSpec::Pure { n, .. }
            | ModelSpec::Entangled { n, .. }
            | ModelSpec::Uniform { n, .. } => *n,
        }
    }

    /// Matter qubits `k` (zero for the uniform model, which has no reference).
    pub fn k(&self) -> u32 {
        match self {
            ModelSpec::Pure { k, .. } | ModelSpec::Entangled { k, .. } => *k,
            ModelSpec::Uniform { .. } => 0,
        }
    }

    /// Exterior spectrum implied by the model.
    pub fn ext(&self) -> Result<ExtSpectrum> {
        match self {
            ModelSpec::Pure { .. } => Ok(ExtSpectrum::trivial()),
            ModelSpec::Entangled { ext, .. } => Ok(ext.clone()),
            ModelSpec::Uniform { log2e, .. } => ExtSpectrum::uniform_log2(*log2e as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Pure { k, n } => check_k(*k, *n),
            ModelSpec::Entangled { k, n, ext } => {
                check_k(*k, *n)?;
                let needed = *k as f64 + ext.count_log2();
                if needed > *n as f64 + 1e-12 {
                    let deficit = |x: f64| {
                        if x < 127.0 {
                            2f64.powf(x) as u128
                        } else {
                            u128::MAX
                        }
                    };
                    return Err(Error::PaddingDeficit {
                        needed: deficit(needed),
                        available: deficit(*n as f64),
                        deficit: deficit(needed).saturating_sub(deficit(*n as f64)),
                    });
                }
                Ok(())
            }
            ModelSpec::Uniform { log2e, n } => {
                if log2e > n {
                    return Err(Error::param(
                        "log2e",
                        format!("{log2e} exceeds the interior size n = {n}"),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn build(&self) -> Result<MultipartiteState> {
        match self {
            ModelSpec::Pure { k, n } => build_pure_model_state(*k, *n),
            ModelSpec::Entangled { k, n, ext } => build_entangled_model_state(*k, *n, ext),
            ModelSpec::Uniform { log2e, n } => build_uniform_entangled_state(*log2e, *n),
        }
    }
}

fn check_k(k: u32, n: u32) -> Result<()> {
    if k > n {
        return Err(Error::param(
            "k",
            format!("{k} matter qubits exceed the interior size n = {n}"),
        ));
    }
    Ok(())
}

fn check_alloc(dim: u128) -> Result<()> {
    if dim > MAX_STATE_DIM {
        return Err(Error::DimCapExceeded {
            dim,
            cap: MAX_STATE_DIM,
        });
    }
    Ok(())
}

fn pow2(bits: u32) -> u128 {
    1u128.checked_shl(bits).unwrap_or(u128::MAX)
}

/// `(1/√K) Σᵢ |i⟩_ref |i⟩_int` with `K = 2^k` and a `2^n`-dimensional interior.
pub fn build_pure_model_state(k: u32, n: u32) -> Result<MultipartiteState> {
    check_k(k, n)?;
    check_alloc(pow2(k).saturating_mul(pow2(n)))?;
    let (kd, nd) = (1usize << k, 1usize << n);
    let mut amps = DVector::zeros(kd * nd);
    let a = C64::new(1.0 / (kd as f64).sqrt(), 0.0);
    for i in 0..kd {
        amps[i * nd + i] = a;
    }
    let layout = Layout::new(vec![
        SubsystemLabel::qubits(names::REF, k)?,
        SubsystemLabel::qubits(names::INT, n)?,
    ])?;
    Ok(MultipartiteState::from_parts(layout, amps))
}

/// `(1/√K) Σᵢ |i⟩_ref ⊗ Σⱼ √p_j (|i⟩⊗|j⟩ ⊕ 0)_int ⊗ |j⟩_ext`.
///
/// The product `|i⟩⊗|j⟩` occupies interior index `i·N + j`; indices from
/// `K·N` upwards are the zero padding.
pub fn build_entangled_model_state(k: u32, n: u32, ext: &ExtSpectrum) -> Result<MultipartiteState> {
    check_k(k, n)?;
    let count = ext
        .count()
        .ok_or_else(|| Error::param("ext", "exterior spectrum too large to materialise"))?;
    let needed = pow2(k).saturating_mul(count as u128);
    let available = pow2(n);
    if needed > available {
        return Err(Error::PaddingDeficit {
            needed,
            available,
            deficit: needed - available,
        });
    }
    check_alloc(
        pow2(k)
            .saturating_mul(available)
            .saturating_mul(count as u128),
    )?;
    let probs = ext.probabilities().expect("count() succeeded");
    let (kd, nd) = (1usize << k, 1usize << n);
    let mut amps = DVector::zeros(kd * nd * count);
    for i in 0..kd {
        for (j, &p) in probs.iter().enumerate() {
            let interior = i * count + j;
            amps[(i * nd + interior) * count + j] = C64::new((p / kd as f64).sqrt(), 0.0);
        }
    }
    let layout = Layout::new(vec![
        SubsystemLabel::qubits(names::REF, k)?,
        SubsystemLabel::qubits(names::INT, n)?,
        SubsystemLabel::new(names::EXT, count)?,
    ])?;
    Ok(MultipartiteState::from_parts(layout, amps))
}

/// `(1/√E) Σⱼ |j⟩_int |j⟩_ext` with `E = 2^log2e`.
pub fn build_uniform_entangled_state(log2e: u32, n: u32) -> Result<MultipartiteState> {
    if log2e > n {
        return Err(Error::param(
            "log2e",
            format!("{log2e} exceeds the interior size n = {n}"),
        ));
    }
    check_alloc(pow2(n).saturating_mul(pow2(log2e)))?;
    let (ed, nd) = (1usize << log2e, 1usize << n);
    let mut amps = DVector::zeros(nd * ed);
    let a = C64::new(1.0 / (ed as f64).sqrt(), 0.0);
    for j in 0..ed {
        amps[j * ed + j] = a;
    }
    let layout = Layout::new(vec![
        SubsystemLabel::qubits(names::INT, n)?,
        SubsystemLabel::qubits(names::EXT, log2e)?,
    ])?;
    Ok(MultipartiteState::from_parts(layout, amps))
}

fn qubit_count(dim: usize) -> Result<u32> {
    if !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(format!(
            "{dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros())
}

/// Applies `U` to `int` and relabels it as `B` (leading `n − r` qubits)
/// followed by `R` (trailing `r` qubits).
pub fn evaporate(state: &MultipartiteState, u: &Unitary, r: u32) -> Result<MultipartiteState> {
    let dim = state.layout().dim_of(names::INT)?;
    if u.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.dim(),
        });
    }
    radiate(&state.apply_unitary(&[names::INT], u)?, r)
}

/// Splits an already scrambled interior into `B` and the last `r` qubits `R`.
pub fn radiate(scrambled: &MultipartiteState, r: u32) -> Result<MultipartiteState> {
    let n = qubit_count(scrambled.layout().dim_of(names::INT)?)?;
    if r > n {
        return Err(Error::param(
            "r",
            format!("cannot radiate {r} of {n} interior qubits"),
        ));
    }
    scrambled.split(names::INT, &[(names::B, 1 << (n - r)), (names::R, 1 << r)])
}

/// Extra matter thrown in after formation: `qubits` interior qubits
/// maximally entangled with a fresh reference `late`, appended to the
/// interior once `after_steps` steps have completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Injection {
    pub after_steps: usize,
    pub qubits: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CascadeOptions {
    pub steps: usize,
    /// Keep every intermediate state, not only the per-step entropy summaries.
    pub keep_states: bool,
    pub injection: Option<Injection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeStep {
    pub step: usize,
    pub interior_qubits: u32,
    pub radiated_qubits: u32,
    pub ledger: EntropyLedger,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Entry 0 describes the input state.
    pub steps: Vec<CascadeStep>,
    /// Populated only with [`CascadeOptions::keep_states`].
    pub states: Vec<MultipartiteState>,
}

fn interior_name(state: &MultipartiteState) -> Result<&'static str> {
    if state.layout().contains(names::INT) {
        Ok(names::INT)
    } else if state.layout().contains(names::B) {
        Ok(names::B)
    } else {
        Err(Error::UnknownLabel(names::INT.into()))
    }
}

fn summarise(state: &MultipartiteState, step: usize) -> Result<CascadeStep> {
    let interior = interior_name(state)?;
    let radiated = if state.layout().contains(names::R) {
        qubit_count(state.layout().dim_of(names::R)?)?
    } else {
        0
    };
    Ok(CascadeStep {
        step,
        interior_qubits: qubit_count(state.layout().dim_of(interior)?)?,
        radiated_qubits: radiated,
        ledger: EntropyLedger::from_pure_state(state)?,
    })
}

fn inject(state: &MultipartiteState, qubits: u32) -> Result<MultipartiteState> {
    const FRESH: &str = "late_int";
    let interior = interior_name(state)?;
    let pair = build_pure_model_state(qubits, qubits)?
        .rename(names::REF, names::LATE)?
        .rename(names::INT, FRESH)?;
    let joined = state.tensor(&pair)?;
    let mut order: Vec<&str> = Vec::new();
    let existing = state.layout().names();
    if !existing.contains(&names::REF) {
        order.push(names::LATE);
    }
    for name in existing {
        order.push(name);
        if name == names::REF {
            order.push(names::LATE);
        }
        if name == interior {
            order.push(FRESH);
        }
    }
    joined.permute(&order)?.merge(&[interior, FRESH], interior)
}

/// One fresh Haar unitary on the remaining interior before each radiated
/// qubit; the peeled qubit joins `R` as its leading qubit.
pub fn cascade_evaporate<G: Rng + ?Sized>(
    state: &MultipartiteState,
    options: &CascadeOptions,
    rng: &mut G,
) -> Result<Trajectory> {
    let interior = interior_name(state)?;
    let mut available = qubit_count(state.layout().dim_of(interior)?)? as usize;
    if let Some(inj) = options.injection {
        if inj.after_steps < options.steps {
            available += inj.qubits as usize;
        }
    }
    if options.steps > available {
        return Err(Error::param(
            "steps",
            format!(
                "{} steps exceed the {available} interior qubits",
                options.steps
            ),
        ));
    }
    let mut current = state.clone();
    let mut steps = vec![summarise(&current, 0)?];
    let mut states = Vec::new();
    if options.keep_states {
        states.push(current.clone());
    }
    for step in 1..=options.steps {
        if let Some(inj) = options.injection.filter(|i| i.after_steps == step - 1) {
            current = inject(&current, inj.qubits)?;
        }
        let interior = interior_name(&current)?;
        let dim = current.layout().dim_of(interior)?;
        if dim < 2 {
            return Err(Error::param("steps", "interior exhausted"));
        }
        let u = haar_sample(dim, rng)?;
        current = current.apply_unitary(&[interior], &u)?;
        current = if current.layout().contains(names::R) {
            current
                .split(interior, &[(names::B, dim / 2), ("peeled", 2)])?
                .merge(&["peeled", names::R], names::R)?
        } else {
            current.split(interior, &[(names::B, dim / 2), (names::R, 2)])?
        };
        steps.push(summarise(&current, step)?);
        if options.keep_states {
            states.push(current.clone());
        }
    }
    Ok(Trajectory { steps, states })
}
