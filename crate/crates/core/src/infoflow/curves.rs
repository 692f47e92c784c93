use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::correlation;
use crate::haar::{average_purity, DimensionProfile, PurityTag};
use crate::mc::{fold_samples, Moments, SampleStats};
use crate::models::{radiate, ModelSpec};
use crate::qcore::{haar_sample, names, von_neumann_from_spectrum, MultipartiteState};
use crate::{Error, Result};

/// Default cap on the total pure-state dimension for Monte Carlo work.
pub const DEFAULT_DIM_CAP: u128 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvePath {
    /// Haar-average purities, any scale.
    Analytic,
    /// Exact entropies of sampled states, small scale only.
    Montecarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRequest {
    pub model: ModelSpec,
    pub path: CurvePath,
    pub samples: usize,
    pub seed: u64,
    pub dim_cap: u128,
}

impl CurveRequest {
    pub fn analytic(model: ModelSpec) -> Self {
        Self {
            model,
            path: CurvePath::Analytic,
            samples: 0,
            seed: 0,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn montecarlo(model: ModelSpec, samples: usize, seed: u64) -> Self {
        Self {
            model,
            path: CurvePath::Montecarlo,
            samples,
            seed,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// Correlations with the reference after `r` qubits radiated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: u32,
    pub c_ref_b: f64,
    pub c_ref_rext: f64,
    pub c_ref_bext: f64,
    pub c_ref_r: f64,
    /// `C(ext:R)`, the exterior entanglement carried by the radiation.
    pub c_ext_r: f64,
    /// `C(ref:B) + C(ref:R,ext) − k`.
    pub sum_ab_residual: f64,
    /// `C(ref:B,ext) + C(ref:R) − k`.
    pub sum_cd_residual: f64,
    /// Standard errors of the five correlations, Monte Carlo only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<[f64; 5]>,
}

impl CurvePoint {
    pub fn named_values(&self) -> [(&'static str, f64); 5] {
        [
            ("c_ref_B", self.c_ref_b),
            ("c_ref_Rext", self.c_ref_rext),
            ("c_ref_Bext", self.c_ref_bext),
            ("c_ref_R", self.c_ref_r),
            ("c_ext_R", self.c_ext_r),
        ]
    }
}

/// A correlation that came out negative; kept as computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeCorrelation {
    pub r: u32,
    pub curve: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurves {
    pub path: CurvePath,
    pub k: u32,
    pub n: u32,
    pub points: Vec<CurvePoint>,
    pub negative: Vec<NegativeCorrelation>,
}

/// Entropies of the five sets the curves need, per `r`.
#[derive(Debug, Clone, Copy)]
struct Entropies {
    s_ref: f64,
    s_ext: f64,
    s_b: f64,
    s_r: f64,
    s_ref_b: f64,
    s_ref_r: f64,
}

impl Entropies {
    // With a pure global state, S(R,ext) = S(ref,B), S(B,ext) = S(ref,R),
    // S(ref,R,ext) = S(B) and S(ref,B,ext) = S(R).
    fn correlations(&self) -> [f64; 5] {
        [
            correlation(self.s_ref, self.s_b, self.s_ref_b),
            correlation(self.s_ref, self.s_ref_b, self.s_b),
            correlation(self.s_ref, self.s_ref_r, self.s_r),
            correlation(self.s_ref, self.s_r, self.s_ref_r),
            correlation(self.s_ext, self.s_r, self.s_ref_b),
        ]
    }
}

pub fn correlation_curves(req: &CurveRequest) -> Result<CorrelationCurves> {
    req.model.validate()?;
    let (k, n) = (req.model.k(), req.model.n());
    let rows: Vec<([f64; 5], Option<[f64; 5]>)> = match req.path {
        CurvePath::Analytic => analytic_rows(&req.model)?,
        CurvePath::Montecarlo => montecarlo_rows(req)?,
    };
    let mut points = Vec::with_capacity(rows.len());
    let mut negative = Vec::new();
    for (r, (c, stderr)) in rows.into_iter().enumerate() {
        let point = CurvePoint {
            r: r as u32,
            c_ref_b: c[0],
            c_ref_rext: c[1],
            c_ref_bext: c[2],
            c_ref_r: c[3],
            c_ext_r: c[4],
            sum_ab_residual: c[0] + c[1] - k as f64,
            sum_cd_residual: c[2] + c[3] - k as f64,
            stderr,
        };
        for (name, v) in point.named_values() {
            if v < 0.0 {
                negative.push(NegativeCorrelation {
                    r: point.r,
                    curve: name.to_string(),
                    value: v,
                });
            }
        }
        points.push(point);
    }
    Ok(CorrelationCurves {
        path: req.path,
        k,
        n,
        points,
        negative,
    })
}

fn analytic_rows(model: &ModelSpec) -> Result<Vec<([f64; 5], Option<[f64; 5]>)>> {
    let (k, n) = (model.k() as f64, model.n());
    // The average purities only see the exterior through its collision
    // entropy, i.e. an effective uniform dimension 2^{H^(2)}.
    let log2_ext = model.ext()?.renyi(2.0)?;
    let total = k + n as f64 + log2_ext;
    (0..=n)
        .map(|r| {
            let dims = DimensionProfile::evaporation(k, log2_ext, n as f64, r as f64)?;
            let size = |set: &[&str]| -> f64 {
                set.iter()
                    .map(|s| match *s {
                        names::REF => k,
                        names::EXT => log2_ext,
                        names::R => r as f64,
                        _ => (n - r) as f64,
                    })
                    .sum()
            };
            // Sets over half the system read the purity of their complement.
            let entropy = |tag: PurityTag| -> Result<f64> {
                let tag = match tag.complement() {
                    Some(c) if size(tag.subsystems()) > 0.5 * total => c,
                    _ => tag,
                };
                Ok(average_purity(tag, &dims)?.bits())
            };
            let e = Entropies {
                s_ref: entropy(PurityTag::Ref)?,
                s_ext: entropy(PurityTag::Ext)?,
                s_b: entropy(PurityTag::B)?,
                s_r: entropy(PurityTag::R)?,
                s_ref_b: entropy(PurityTag::RefB)?,
                s_ref_r: entropy(PurityTag::RefR)?,
            };
            Ok((e.correlations(), None))
        })
        .collect()
}

/// Accumulates one row of observables per Haar sample; the first error wins.
pub(crate) fn fold_rows<F>(seed: u64, samples: usize, width: usize, row: F) -> Result<Moments>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<f64>> + Sync,
{
    let (moments, err) = fold_samples(
        seed,
        samples,
        || (Moments::new(width), None::<Error>),
        |acc, rng, _| {
            if acc.1.is_some() {
                return;
            }
            match row(rng) {
                Ok(v) => acc.0.push(&v),
                Err(e) => acc.1 = Some(e),
            }
        },
        |total, part| {
            total.0.merge(part.0);
            if total.1.is_none() {
                total.1 = part.1;
            }
        },
    );
    err.map_or(Ok(moments), Err)
}

pub(crate) fn check_cap(state_dim: u128, cap: u128) -> Result<()> {
    if state_dim > cap {
        return Err(Error::DimCapExceeded {
            dim: state_dim,
            cap,
        });
    }
    Ok(())
}

fn model_dim(model: &ModelSpec) -> u128 {
    let bits = match model {
        ModelSpec::Pure { k, n } => (k + n) as f64,
        ModelSpec::Entangled { k, n, ext } => (k + n) as f64 + ext.count_log2(),
        ModelSpec::Uniform { log2e, n } => (log2e + n) as f64,
    };
    if bits >= 127.0 {
        u128::MAX
    } else {
        bits.exp2().ceil() as u128
    }
}

fn entropy_of(state: &MultipartiteState, set: &[&str]) -> Result<f64> {
    let present: Vec<&str> = set
        .iter()
        .copied()
        .filter(|s| state.layout().contains(s))
        .collect();
    Ok(von_neumann_from_spectrum(&state.spectrum(&present)?))
}

fn sampled_entropies(state: &MultipartiteState) -> Result<Entropies> {
    use names::*;
    Ok(Entropies {
        s_ref: entropy_of(state, &[REF])?,
        s_ext: entropy_of(state, &[EXT])?,
        s_b: entropy_of(state, &[B])?,
        s_r: entropy_of(state, &[R])?,
        s_ref_b: entropy_of(state, &[REF, B])?,
        s_ref_r: entropy_of(state, &[REF, R])?,
    })
}

fn montecarlo_rows(req: &CurveRequest) -> Result<Vec<([f64; 5], Option<[f64; 5]>)>> {
    check_cap(model_dim(&req.model), req.dim_cap)?;
    if req.samples == 0 {
        return Err(Error::param(
            "samples",
            "Monte Carlo needs at least one sample",
        ));
    }
    let state = req.model.build()?;
    let n = req.model.n();
    let width = 5 * (n as usize + 1);
    let int_dim = state.layout().dim_of(names::INT)?;
    let moments = fold_rows(req.seed, req.samples, width, |rng| {
        let scrambled = state.apply_unitary(&[names::INT], &haar_sample(int_dim, rng)?)?;
        let mut row = Vec::with_capacity(width);
        for r in 0..=n {
            row.extend(sampled_entropies(&radiate(&scrambled, r)?)?.correlations());
        }
        Ok(row)
    })?;
    let stats = moments.stats();
    Ok(stats
        .chunks(5)
        .map(|s: &[SampleStats]| {
            let mean = std::array::from_fn(|i| s[i].mean);
            let err = std::array::from_fn(|i| s[i].stderr);
            (mean, Some(err))
        })
        .collect())
}

/// Monte Carlo mean of `r − S(R)` for each `r = 0..=n`.
pub fn radiation_discernable_information(
    model: &ModelSpec,
    samples: usize,
    seed: u64,
    dim_cap: u128,
) -> Result<Vec<SampleStats>> {
    model.validate()?;
    check_cap(model_dim(model), dim_cap)?;
    if samples == 0 {
        return Err(Error::param(
            "samples",
            "Monte Carlo needs at least one sample",
        ));
    }
    let state = model.build()?;
    let n = model.n();
    let int_dim = state.layout().dim_of(names::INT)?;
    let moments = fold_rows(seed, samples, n as usize + 1, |rng| {
        let scrambled = state.apply_unitary(&[names::INT], &haar_sample(int_dim, rng)?)?;
        (0..=n)
            .map(|r| Ok(r as f64 - entropy_of(&radiate(&scrambled, r)?, &[names::R])?))
            .collect()
    })?;
    Ok(moments.stats())
}
