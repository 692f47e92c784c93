use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use horizon_core::haar::{average_purity, chi, DimensionProfile, PurityTag};
use horizon_core::infoflow::{
    correlation_curves, thresholds, verify_decoupling, CurvePath, CurveRequest, DecouplingParams,
    LevelOutcome, Roles, ThresholdParams,
};
use horizon_core::mc::{derive_seed, substream};
use horizon_core::models::{cascade_evaporate, CascadeOptions, ModelKind, ModelSpec};
use horizon_core::qcore::{names, MultipartiteState};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::format::g12;
use crate::report::{
    BoundEntry, PurityRow, RunReport, SampleSection, ThresholdSection, Warning, WarningCode,
};

pub const CURVES_HEADER: &str =
    "r,c_ref_B,c_ref_Rext,c_ref_Bext,c_ref_R,sum_ab_residual,sum_cd_residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Curves,
    Verify,
    Thresholds,
    Purity,
    Sample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Curves => "curves",
            Command::Verify => "verify",
            Command::Thresholds => "thresholds",
            Command::Purity => "purity",
            Command::Sample => "sample",
        }
    }
}

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    /// The primary table first, then the JSON report.
    pub artifacts: Vec<Artifact>,
    pub verification_failed: bool,
}

pub fn run(command: Command, config: &ScenarioConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let model = config.model_spec()?;
    let mut report = RunReport::new(command.name(), config);
    advise_matter_scale(&model, &mut report);
    let mut verification_failed = false;
    let table = match command {
        Command::Curves => run_curves(config, &model, &mut report)?,
        Command::Verify => {
            let (table, failed) = run_verify(config, &model, &mut report)?;
            verification_failed = failed;
            table
        }
        Command::Thresholds => run_thresholds(config, &model, &mut report)?,
        Command::Purity => run_purity(&model, &mut report)?,
        Command::Sample => run_sample(config, &model, &mut report)?,
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    let artifacts = vec![
        Artifact {
            name: format!("{}.csv", command.name()),
            contents: table,
        },
        Artifact {
            name: format!("{}.json", command.name()),
            contents: json,
        },
    ];
    Ok(RunOutput {
        report,
        artifacts,
        verification_failed,
    })
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    for a in artifacts {
        let path = dir.join(&a.name);
        std::fs::write(&path, &a.contents).map_err(io(&path))?;
    }
    Ok(())
}

fn advise_matter_scale(model: &ModelSpec, report: &mut RunReport) {
    let (k, n) = (model.k() as f64, model.n() as f64);
    let scale = n.powf(0.75);
    if k > scale {
        report.warnings.push(Warning::new(
            WarningCode::ThooftAdvisory,
            format!("k = {k} exceeds n^(3/4) = {scale:.3}; matter this large strains the model"),
        ));
    }
}

fn run_curves(
    config: &ScenarioConfig,
    model: &ModelSpec,
    report: &mut RunReport,
) -> Result<String, CliError> {
    if config.path == CurvePath::Montecarlo {
        config.check_cap()?;
    }
    let curves = correlation_curves(&CurveRequest {
        model: model.clone(),
        path: config.path,
        samples: config.samples,
        seed: config.seed,
        dim_cap: config.dim_cap as u128,
    })?;
    let mut by_curve: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for neg in &curves.negative {
        let e = by_curve.entry(neg.curve.as_str()).or_insert((0, 0.0));
        e.0 += 1;
        e.1 = e.1.min(neg.value);
    }
    for (curve, (count, min)) in by_curve {
        report.warnings.push(Warning::new(
            WarningCode::NegativeCorrelation,
            format!(
                "{curve} is negative at {count} point(s), minimum {}",
                g12(min)
            ),
        ));
    }
    let mut csv = format!("{CURVES_HEADER}\n");
    for p in &curves.points {
        let row = [
            p.c_ref_b,
            p.c_ref_rext,
            p.c_ref_bext,
            p.c_ref_r,
            p.sum_ab_residual,
            p.sum_cd_residual,
        ];
        let cells: Vec<String> = row.iter().map(|v| g12(*v)).collect();
        let _ = writeln!(csv, "{},{}", p.r, cells.join(","));
    }
    report.curves = Some(curves);
    Ok(csv)
}

fn standard_roles(model: &ModelSpec) -> Vec<(String, Roles)> {
    match model.kind() {
        ModelKind::Uniform => vec![
            ("ext_to_radiation".into(), Roles::exterior_into_radiation()),
            ("ext_stays_inside".into(), Roles::exterior_stays_inside()),
        ],
        ModelKind::Pure | ModelKind::Entangled => {
            let z: &[&str] = if model.kind() == ModelKind::Entangled {
                &[names::EXT]
            } else {
                &[]
            };
            vec![
                (
                    "ref_to_radiation".into(),
                    Roles::new(&[names::REF], &[names::R], &[names::B], z),
                ),
                (
                    "ref_stays_inside".into(),
                    Roles::new(&[names::REF], &[names::B], &[names::R], z),
                ),
            ]
        }
    }
}

fn split_interior(
    state: &MultipartiteState,
    n: u32,
    r: u32,
) -> Result<MultipartiteState, CliError> {
    Ok(state.split(names::INT, &[(names::B, 1 << (n - r)), (names::R, 1 << r)])?)
}

fn cell(v: Option<f64>) -> String {
    v.map(g12).unwrap_or_default()
}

fn run_verify(
    config: &ScenarioConfig,
    model: &ModelSpec,
    report: &mut RunReport,
) -> Result<(String, bool), CliError> {
    config.check_cap()?;
    let n = model.n();
    let schedule: Vec<(String, Roles)> = if config.verify.roles.is_empty() {
        standard_roles(model)
    } else {
        config
            .verify
            .roles
            .iter()
            .map(|r| (r.name.clone(), r.roles.clone()))
            .collect()
    };
    let rs: Vec<u32> = config.verify.r.clone().unwrap_or_else(|| (0..=n).collect());
    let state = model.build()?;
    let mut entries = Vec::new();
    let mut failed = false;
    let mut csv = String::from(
        "schedule,r,lhs_mean,lhs_stderr,step1,step2,step3,special,fidelity_floor,fidelity_floor_squared,pass\n",
    );
    for (si, (name, roles)) in schedule.iter().enumerate() {
        for &r in &rs {
            let split = split_interior(&state, n, r)?;
            let seed = derive_seed(config.seed, (si as u64) << 32 | r as u64);
            let params = DecouplingParams {
                roles: roles.clone(),
                nu: config.verify.nu,
                mu: config.verify.mu,
                samples: config.samples,
                seed,
                dim_cap: config.dim_cap as u128,
            };
            let bound = verify_decoupling(&split, &params)?;
            for (level, outcome) in bound.levels() {
                if let LevelOutcome::HypothesisFailed { reason } = outcome {
                    report.warnings.push(Warning::new(
                        WarningCode::HypothesisFailed,
                        format!(
                            "{name}, r = {r}, step {}: {reason}; no bound quoted",
                            level as u8
                        ),
                    ));
                }
            }
            if !bound.passes() {
                failed = true;
                report.warnings.push(Warning::new(
                    WarningCode::BoundViolated,
                    format!(
                        "{name}, r = {r}: lhs {} ± {} breaks a bound (ordering holds: {})",
                        g12(bound.lhs_mean),
                        g12(bound.lhs_stderr),
                        bound.ordering_holds
                    ),
                ));
            }
            let _ = writeln!(
                csv,
                "{name},{r},{},{},{},{},{},{},{},{},{}",
                g12(bound.lhs_mean),
                g12(bound.lhs_stderr),
                cell(bound.rhs_step1.squared()),
                cell(bound.rhs_step2.squared()),
                cell(bound.rhs_step3.squared()),
                cell(bound.rhs_special),
                g12(bound.fidelity_floor.trace_norm_route),
                cell(bound.fidelity_floor.squared_route),
                bound.passes()
            );
            entries.push(BoundEntry {
                schedule: name.clone(),
                r,
                roles: roles.clone(),
                seed,
                report: bound,
            });
        }
    }
    report.bounds = Some(entries);
    Ok((csv, failed))
}

fn run_thresholds(
    config: &ScenarioConfig,
    model: &ModelSpec,
    report: &mut RunReport,
) -> Result<String, CliError> {
    let params = ThresholdParams::from_model(model, config.c)?;
    let record = thresholds(&params)?;
    let ext = model.ext()?;
    let chis = config
        .q
        .iter()
        .map(|&q| chi(q, model.n(), model.k(), &ext))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("name,raw,value,clamped\n");
    for (name, t) in record.iter() {
        if t.clamped {
            report.warnings.push(Warning::new(
                WarningCode::ThresholdClamped,
                format!("{name}: {} clamped to {}", g12(t.raw), g12(t.value)),
            ));
        }
        let _ = writeln!(csv, "{name},{},{},{}", g12(t.raw), g12(t.value), t.clamped);
    }
    if record.ext_transfer.raw > params.n {
        report.warnings.push(Warning::new(
            WarningCode::PersistsToPlanckScale,
            format!(
                "exterior entanglement transfers only after {} qubits, beyond the {} available: it persists until the hole is gone",
                g12(record.ext_transfer.raw),
                g12(params.n)
            ),
        ));
    }
    report.thresholds = Some(ThresholdSection {
        params,
        chi: chis,
        record,
    });
    Ok(csv)
}

fn run_purity(model: &ModelSpec, report: &mut RunReport) -> Result<String, CliError> {
    let (k, n) = (model.k() as f64, model.n());
    let log2_ext = model.ext()?.renyi(2.0)?;
    let mut csv = String::from("r");
    for tag in PurityTag::ALL {
        let _ = write!(csv, ",p_{}", tag.as_str().replace(',', "_"));
    }
    csv.push('\n');
    let mut rows = Vec::new();
    for r in 0..=n {
        let dims = DimensionProfile::evaporation(k, log2_ext, n as f64, r as f64)?;
        let _ = write!(csv, "{r}");
        for tag in PurityTag::ALL {
            let p = average_purity(tag, &dims)?;
            let _ = write!(csv, ",{}", g12(p.value()));
            rows.push(PurityRow {
                r,
                tag: tag.as_str().to_string(),
                log2_purity: p.log2,
                purity: p.value(),
            });
        }
        csv.push('\n');
    }
    report.purities = Some(rows);
    Ok(csv)
}

fn run_sample(
    config: &ScenarioConfig,
    model: &ModelSpec,
    report: &mut RunReport,
) -> Result<String, CliError> {
    config.check_cap()?;
    let state = model.build()?;
    let injected = config.sample.injection.map_or(0, |i| i.qubits);
    if injected > 0
        && (config.state_qubits()? + 2.0 * injected as f64) > (config.dim_cap as f64).log2() + 1e-12
    {
        return Err(horizon_core::Error::DimCapExceeded {
            dim: 1u128 << (config.state_qubits()? as u32 + 2 * injected),
            cap: config.dim_cap as u128,
        }
        .into());
    }
    let options = CascadeOptions {
        steps: config.sample.steps.unwrap_or(model.n() as usize),
        keep_states: false,
        injection: config.sample.injection,
    };
    let trajectory = cascade_evaporate(&state, &options, &mut substream(config.seed, 0))?;
    let mut csv =
        String::from("step,interior_qubits,radiated_qubits,set,complement,bits,provenance\n");
    for step in &trajectory.steps {
        for e in step.ledger.entries() {
            let provenance = serde_json::to_value(e.provenance).expect("provenance serializes");
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                step.step,
                step.interior_qubits,
                step.radiated_qubits,
                e.set.join("+"),
                e.complement.join("+"),
                g12(e.bits),
                provenance.as_str().unwrap_or_default()
            );
        }
    }
    report.sample = Some(SampleSection {
        seed: config.seed,
        steps: trajectory.steps,
    });
    Ok(csv)
}
