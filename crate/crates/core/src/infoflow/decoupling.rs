use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::curves::{check_cap, fold_rows, DEFAULT_DIM_CAP};
use crate::mc::SampleStats;
use crate::qcore::{haar_sample, hermitian_trace_norm, names, DensityOperator, MultipartiteState};
use crate::{Error, Result, C64};

/// Trace-distance tolerance for accepting `ρ_XZ = ρ_X ⊗ ρ_Z`.
pub const PRODUCT_TOL: f64 = 1e-8;
/// Purity deficit tolerated for accepting `ρ_XYZ` as pure.
const PURE_TOL: f64 = 1e-8;
/// Eigenvalues at or below this count as outside the support.
const SUPPORT_FLOOR: f64 = 1e-12;
/// Largest reduced operator the estimator will form.
const DENSITY_DIM_CAP: usize = 1 << 10;

/// Assignment of state labels to the decoupling roles; labels in no role
/// are traced out.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    #[serde(default)]
    pub x: Vec<String>,
    #[serde(default)]
    pub y1: Vec<String>,
    #[serde(default)]
    pub y2: Vec<String>,
    #[serde(default)]
    pub z: Vec<String>,
}

impl Roles {
    pub fn new(x: &[&str], y1: &[&str], y2: &[&str], z: &[&str]) -> Self {
        let own = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
        Self {
            x: own(x),
            y1: own(y1),
            y2: own(y2),
            z: own(z),
        }
    }

    /// `X = ref`, `Y1 = R`, `Y2 = B`, `Z = ext`: decoupling of the matter
    /// from the remaining hole.
    pub fn reference_into_radiation() -> Self {
        Self::new(&[names::REF], &[names::R], &[names::B], &[names::EXT])
    }

    /// `X = ext`, `Y1 = R`, `Y2 = B`: exterior entanglement moving to the radiation.
    pub fn exterior_into_radiation() -> Self {
        Self::new(&[names::EXT], &[names::R], &[names::B], &[])
    }

    /// `X = ext`, `Y1 = B`, `Y2 = R`: exterior entanglement staying with the hole.
    pub fn exterior_stays_inside() -> Self {
        Self::new(&[names::EXT], &[names::B], &[names::R], &[])
    }

    fn validate(&self, state: &MultipartiteState) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for name in self.x.iter().chain(&self.y1).chain(&self.y2).chain(&self.z) {
            if !state.layout().contains(name) {
                return Err(Error::UnknownLabel(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(())
    }

    // Filters the state's labels, keeping state order.
    fn pick<'a>(state: &'a MultipartiteState, sets: &[&[String]]) -> Vec<&'a str> {
        state
            .labels()
            .iter()
            .map(|l| l.name())
            .filter(|n| sets.iter().any(|s| s.iter().any(|m| m == n)))
            .collect()
    }

    fn dim(state: &MultipartiteState, set: &[String]) -> Result<usize> {
        set.iter().map(|n| state.layout().dim_of(n)).product()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecouplingParams {
    pub roles: Roles,
    pub nu: f64,
    pub mu: f64,
    pub samples: usize,
    pub seed: u64,
    pub dim_cap: u128,
}

impl DecouplingParams {
    /// `2ν = 2μ = ½` with the default cap.
    pub fn new(roles: Roles, samples: usize, seed: u64) -> Self {
        Self {
            roles,
            nu: 0.25,
            mu: 0.25,
            samples,
            seed,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

fn check_exponents(nu: f64, mu: f64) -> Result<()> {
    for (name, v) in [("nu", nu), ("mu", mu)] {
        if !(0.0..=0.5).contains(&v) {
            return Err(Error::param(
                name,
                format!("need 0 <= 2*{name} <= 1, got {name} = {v}"),
            ));
        }
    }
    Ok(())
}

fn trace_norm_gap(state: &MultipartiteState, roles: &Roles) -> Result<f64> {
    let keep = Roles::pick(state, &[&roles.x, &roles.y2, &roles.z]);
    let x: Vec<&str> = roles.x.iter().map(String::as_str).collect();
    let y2z = Roles::pick(state, &[&roles.y2, &roles.z]);
    let joint = state.reduced(&keep)?;
    let product = state
        .reduced(&x)?
        .tensor(&state.reduced(&y2z)?)?
        .permute(&keep)?;
    hermitian_trace_norm(&(joint.matrix() - product.matrix()))
}

/// Haar average of `‖σ_XY2Z − σ_X ⊗ σ_Y2Z‖₁` over unitaries on `Y = Y1 ∪ Y2`.
///
/// When `X`, `Y1` or `Y2` is one-dimensional the norm does not depend on
/// the unitary, and the single value is returned with zero error.
pub fn decoupling_lhs(state: &MultipartiteState, params: &DecouplingParams) -> Result<SampleStats> {
    let roles = &params.roles;
    roles.validate(state)?;
    check_cap(state.dim() as u128, params.dim_cap)?;
    let kept =
        Roles::dim(state, &roles.x)? * Roles::dim(state, &roles.y2)? * Roles::dim(state, &roles.z)?;
    if kept > DENSITY_DIM_CAP {
        return Err(Error::DimCapExceeded {
            dim: kept as u128,
            cap: DENSITY_DIM_CAP as u128,
        });
    }
    if Roles::dim(state, &roles.x)? == 1 {
        return Ok(SampleStats::exact(0.0));
    }
    if Roles::dim(state, &roles.y1)? == 1 || Roles::dim(state, &roles.y2)? == 1 {
        return Ok(SampleStats::exact(trace_norm_gap(state, roles)?));
    }
    if params.samples == 0 {
        return Err(Error::param(
            "samples",
            "Monte Carlo needs at least one sample",
        ));
    }
    let y = Roles::pick(state, &[&roles.y1, &roles.y2]);
    let y_dim = state.layout().dim_of_set(&y)?;
    let moments = fold_rows(params.seed, params.samples, 1, |rng| {
        let u = haar_sample(y_dim, rng)?;
        Ok(vec![trace_norm_gap(&state.apply_unitary(&y, &u)?, roles)?])
    })?;
    Ok(moments.stats()[0])
}

/// Reduced operators feeding the right-hand side, with subsystems ordered
/// `X`, then `Y = Y1 Y2` (in state order), then `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInputs {
    pub rho_x: DensityOperator,
    pub rho_z: DensityOperator,
    pub rho_xz: DensityOperator,
    pub rho_xyz: DensityOperator,
    pub rho_yz: DensityOperator,
    pub dim_y1: usize,
    pub dim_y2: usize,
}

impl SpectralInputs {
    pub fn from_state(state: &MultipartiteState, roles: &Roles) -> Result<Self> {
        roles.validate(state)?;
        let (x, z) = (&roles.x, &roles.z);
        let y: Vec<String> = Roles::pick(state, &[&roles.y1, &roles.y2])
            .into_iter()
            .map(String::from)
            .collect();
        let ordered = |sets: &[&[String]]| -> Result<DensityOperator> {
            let order: Vec<&str> = sets
                .iter()
                .flat_map(|s| s.iter().map(String::as_str))
                .collect();
            state.reduced(&order)?.permute(&order)
        };
        Ok(Self {
            rho_x: ordered(&[x])?,
            rho_z: ordered(&[z])?,
            rho_xz: ordered(&[x, z])?,
            rho_xyz: ordered(&[x, &y, z])?,
            rho_yz: ordered(&[&y, z])?,
            dim_y1: Roles::dim(state, &roles.y1)?,
            dim_y2: Roles::dim(state, &roles.y2)?,
        })
    }

    fn check_dims(&self) -> Result<()> {
        let (dx, dz, dy) = (
            self.rho_x.dim(),
            self.rho_z.dim(),
            self.dim_y1 * self.dim_y2,
        );
        for (op, expected) in [
            (&self.rho_xz, dx * dz),
            (&self.rho_xyz, dx * dy * dz),
            (&self.rho_yz, dy * dz),
        ] {
            if op.dim() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: op.dim(),
                });
            }
        }
        Ok(())
    }

    /// Trace distance between `ρ_XZ` and `ρ_X ⊗ ρ_Z`.
    pub fn product_defect(&self) -> f64 {
        let product = self.rho_x.matrix().kronecker(self.rho_z.matrix());
        0.5 * hermitian_trace_norm(&(self.rho_xz.matrix() - product)).unwrap_or(f64::INFINITY)
    }

    /// `1 − tr ρ_XYZ²`.
    pub fn impurity(&self) -> f64 {
        1.0 - self.rho_xyz.purity()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundLevel {
    Step1 = 1,
    Step2 = 2,
    Step3 = 3,
}

impl BoundLevel {
    pub const ALL: [BoundLevel; 3] = [BoundLevel::Step1, BoundLevel::Step2, BoundLevel::Step3];
}

fn trace_power(rho: &DensityOperator, p: f64) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > SUPPORT_FLOOR)
        .map(|l| l.powf(p))
        .sum()
}

// tr(AB) for square A, B.
fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.component_mul(&b.transpose()).sum().re
}

fn identity(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

fn hypothesis(level: BoundLevel, reason: String) -> Error {
    Error::HypothesisFailed {
        level: level as u8,
        reason,
    }
}

/// Bound on the squared Haar integral `(∫dU ‖σ_XY2Z − σ_X ⊗ σ_Y2Z‖₁)²`.
///
/// Level 2 needs `ρ_XZ = ρ_X ⊗ ρ_Z` (within [`PRODUCT_TOL`]); level 3
/// additionally needs `ρ_XYZ` pure and `2ν = 2μ = ½`. Negative powers are
/// taken on the support.
pub fn decoupling_rhs(inputs: &SpectralInputs, nu: f64, mu: f64, level: BoundLevel) -> Result<f64> {
    check_exponents(nu, mu)?;
    inputs.check_dims()?;
    let ratio = inputs.dim_y2 as f64 / inputs.dim_y1 as f64;
    if level >= BoundLevel::Step2 {
        let defect = inputs.product_defect();
        if defect > PRODUCT_TOL {
            return Err(hypothesis(
                level,
                format!(
                    "rho_XZ is not a product state (trace distance {defect:e} > {PRODUCT_TOL:e})"
                ),
            ));
        }
    }
    let (x, z) = (&inputs.rho_x, &inputs.rho_z);
    if level == BoundLevel::Step3 {
        let impurity = inputs.impurity();
        if impurity > PURE_TOL {
            return Err(hypothesis(
                level,
                format!("rho_XYZ is not pure (1 - purity = {impurity:e})"),
            ));
        }
        if (2.0 * nu - 0.5).abs() > 1e-12 || (2.0 * mu - 0.5).abs() > 1e-12 {
            return Err(hypothesis(
                level,
                format!("needs 2nu = 2mu = 1/2, got nu = {nu}, mu = {mu}"),
            ));
        }
        // 2^{H^(1/2)} = (tr √ρ)².
        let h = trace_power(x, 0.5).powi(2) * trace_power(z, 0.5).powi(2);
        return Ok(2.0 * ratio * h);
    }
    let (a, b) = (trace_power(x, 2.0 * nu), trace_power(z, 2.0 * mu));
    let x_inv = x.power(-2.0 * nu, SUPPORT_FLOOR);
    let z_inv = z.power(-2.0 * mu, SUPPORT_FLOOR);
    let dy = inputs.dim_y1 * inputs.dim_y2;
    let xyz = inputs.rho_xyz.matrix();
    let yz = inputs.rho_yz.matrix();
    let t_xyz = trace_product(
        &(xyz * xyz),
        &x_inv.kronecker(&identity(dy)).kronecker(&z_inv),
    );
    let t_yz =
        trace_power(x, 2.0 - 2.0 * nu) * trace_product(&(yz * yz), &identity(dy).kronecker(&z_inv));
    let second = ratio * (t_xyz + t_yz);
    if level == BoundLevel::Step2 {
        return Ok(a * b * second);
    }
    let xz = inputs.rho_xz.matrix();
    let first = trace_product(&(xz * xz), &x_inv.kronecker(&z_inv))
        - 2.0
            * trace_product(
                xz,
                &x.power(1.0 - 2.0 * nu, SUPPORT_FLOOR)
                    .kronecker(&z.power(1.0 - 2.0 * mu, SUPPORT_FLOOR)),
            )
        + trace_power(x, 2.0 - 2.0 * nu) * trace_power(z, 2.0 - 2.0 * mu);
    Ok(a * b * (first + second))
}

/// `(2·(Y2/Y1)·2^{H_ext})^{1/2}`, bounding the average trace norm when the
/// exterior is `X` and nothing is held back as `Z`.
pub fn ext_decoupling_bound(h_ext: f64, dim_y1: f64, dim_y2: f64) -> f64 {
    (2.0 * (dim_y2 / dim_y1) * h_ext.exp2()).sqrt()
}

/// `max(0, 1 − ½b)` for an average trace-norm bound `b`.
pub fn fidelity_floor(trace_norm_bound: f64) -> f64 {
    (1.0 - 0.5 * trace_norm_bound).max(0.0)
}

/// `max(0, 1 − √s)` for a bound `s` in the squared convention, e.g.
/// `s = 2^{H_ext}·Y2/Y1`.
pub fn fidelity_floor_squared(squared: f64) -> f64 {
    (1.0 - squared.sqrt()).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LevelOutcome {
    Bound { squared: f64, trace_norm: f64 },
    HypothesisFailed { reason: String },
}

impl LevelOutcome {
    pub fn squared(&self) -> Option<f64> {
        match self {
            LevelOutcome::Bound { squared, .. } => Some(*squared),
            LevelOutcome::HypothesisFailed { .. } => None,
        }
    }

    pub fn trace_norm(&self) -> Option<f64> {
        self.squared().map(f64::sqrt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityFloor {
    /// `1 − ½b` with `b` the tightest trace-norm bound.
    pub trace_norm_route: f64,
    /// `1 − √(step3 / 2)`, defined when the level-3 hypotheses hold.
    pub squared_route: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs_mean: f64,
    pub lhs_stderr: f64,
    pub samples: usize,
    pub rhs_step1: LevelOutcome,
    pub rhs_step2: LevelOutcome,
    pub rhs_step3: LevelOutcome,
    /// `√step3`, the direct bound on the average trace norm.
    pub rhs_special: Option<f64>,
    pub fidelity_floor: FidelityFloor,
    /// `step1 ≤ step2 ≤ step3` among the levels that apply.
    pub ordering_holds: bool,
    /// `mean − 3·stderr ≤ √bound` at every level that applies.
    pub lhs_within_bounds: bool,
}

impl BoundReport {
    pub fn levels(&self) -> [(BoundLevel, &LevelOutcome); 3] {
        [
            (BoundLevel::Step1, &self.rhs_step1),
            (BoundLevel::Step2, &self.rhs_step2),
            (BoundLevel::Step3, &self.rhs_step3),
        ]
    }

    pub fn passes(&self) -> bool {
        self.ordering_holds && self.lhs_within_bounds
    }
}

/// Estimates the left-hand side and evaluates every bound level on `state`.
pub fn verify_decoupling(
    state: &MultipartiteState,
    params: &DecouplingParams,
) -> Result<BoundReport> {
    check_exponents(params.nu, params.mu)?;
    let lhs = decoupling_lhs(state, params)?;
    let inputs = SpectralInputs::from_state(state, &params.roles)?;
    let outcome = |level| match decoupling_rhs(&inputs, params.nu, params.mu, level) {
        Ok(squared) => Ok(LevelOutcome::Bound {
            squared,
            trace_norm: squared.sqrt(),
        }),
        Err(Error::HypothesisFailed { reason, .. }) => {
            Ok(LevelOutcome::HypothesisFailed { reason })
        }
        Err(e) => Err(e),
    };
    let [s1, s2, s3] = [
        outcome(BoundLevel::Step1)?,
        outcome(BoundLevel::Step2)?,
        outcome(BoundLevel::Step3)?,
    ];
    let bounds: Vec<f64> = [&s1, &s2, &s3].iter().filter_map(|o| o.squared()).collect();
    let ordering_holds = bounds
        .windows(2)
        .all(|w| w[0] <= w[1] * (1.0 + 1e-9) + 1e-12);
    let lhs_within_bounds = bounds
        .iter()
        .all(|b| lhs.mean - 3.0 * lhs.stderr <= b.sqrt() + 1e-12);
    let tightest = bounds
        .iter()
        .map(|b| b.sqrt())
        .fold(f64::INFINITY, f64::min);
    Ok(BoundReport {
        lhs_mean: lhs.mean,
        lhs_stderr: lhs.stderr,
        samples: lhs.samples,
        rhs_special: s3.trace_norm(),
        fidelity_floor: FidelityFloor {
            trace_norm_route: fidelity_floor(tightest),
            squared_route: s3.squared().map(|s| fidelity_floor_squared(0.5 * s)),
        },
        rhs_step1: s1,
        rhs_step2: s2,
        rhs_step3: s3,
        ordering_holds,
        lhs_within_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_pure_model_state, build_uniform_entangled_state};
    use crate::qcore::SubsystemLabel;

    fn mixed(name: &str, spectrum: &[f64]) -> DensityOperator {
        let d = spectrum.len();
        let m = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(spectrum[i], 0.0)
            } else {
                C64::default()
            }
        });
        DensityOperator::new(vec![SubsystemLabel::new(name, d).unwrap()], m).unwrap()
    }

    #[test]
    fn trivial_x_gives_zero() {
        let state = build_pure_model_state(1, 3)
            .unwrap()
            .split("int", &[("B", 2), ("R", 4)])
            .unwrap();
        let params = DecouplingParams::new(Roles::new(&[], &["R"], &["B"], &["ref"]), 10, 1);
        assert_eq!(
            decoupling_lhs(&state, &params).unwrap(),
            SampleStats::exact(0.0)
        );
    }

    #[test]
    fn untouched_product_is_decoupled() {
        // Y1 covers all of Y, so σ_XZ never sees U.
        let a = build_pure_model_state(1, 1)
            .unwrap()
            .rename("ref", "x")
            .unwrap()
            .rename("int", "y")
            .unwrap();
        let b = build_pure_model_state(1, 1)
            .unwrap()
            .rename("ref", "z")
            .unwrap()
            .rename("int", "w")
            .unwrap();
        let state = a.tensor(&b).unwrap();
        let params = DecouplingParams::new(Roles::new(&["x"], &["y", "w"], &[], &["z"]), 10, 1);
        let lhs = decoupling_lhs(&state, &params).unwrap();
        assert!(lhs.mean.abs() < 1e-12);
    }

    #[test]
    fn step3_substitutions() {
        // H_X = H_Z = 0 with Y2/Y1 = 1.
        let state = MultipartiteState::basis(
            vec![
                SubsystemLabel::new("x", 2).unwrap(),
                SubsystemLabel::new("y1", 2).unwrap(),
                SubsystemLabel::new("y2", 2).unwrap(),
            ],
            0,
        )
        .unwrap();
        let inputs =
            SpectralInputs::from_state(&state, &Roles::new(&["x"], &["y1"], &["y2"], &[])).unwrap();
        assert!(
            (decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step3).unwrap() - 2.0).abs() < 1e-12
        );
        // H_X = 1, H_Z = 0 with Y2/Y1 = 1/8: a Bell pair between x and y1.
        let state = build_pure_model_state(1, 5)
            .unwrap()
            .split("int", &[("y2", 2), ("y1", 16)])
            .unwrap();
        let inputs =
            SpectralInputs::from_state(&state, &Roles::new(&["ref"], &["y1"], &["y2"], &[]))
                .unwrap();
        let s3 = decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step3).unwrap();
        assert!((s3 - 0.5).abs() < 1e-12);
        assert!((s3.sqrt() - 0.7071).abs() < 1e-4);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let state = MultipartiteState::basis(
            vec![
                SubsystemLabel::new("x", 2).unwrap(),
                SubsystemLabel::new("y1", 2).unwrap(),
                SubsystemLabel::new("z", 2).unwrap(),
            ],
            5,
        )
        .unwrap();
        let inputs =
            SpectralInputs::from_state(&state, &Roles::new(&["x"], &["y1"], &[], &["z"])).unwrap();
        assert!(decoupling_rhs(&inputs, 0.2, 0.25, BoundLevel::Step2).is_ok());
        let err = decoupling_rhs(&inputs, 0.2, 0.25, BoundLevel::Step3).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailed { level: 3, .. }));
        assert!(decoupling_rhs(&inputs, 0.6, 0.25, BoundLevel::Step1).is_err());
        assert!(decoupling_rhs(&inputs, 0.25, -0.1, BoundLevel::Step1).is_err());
    }

    #[test]
    fn correlated_xz_blocks_step2() {
        // x and z share a Bell pair; y is a fresh qubit.
        let bell = build_pure_model_state(1, 1)
            .unwrap()
            .rename("ref", "x")
            .unwrap()
            .rename("int", "z")
            .unwrap();
        let state = bell
            .tensor(
                &MultipartiteState::basis(
                    vec![
                        SubsystemLabel::new("y", 2).unwrap(),
                        SubsystemLabel::new("w", 2).unwrap(),
                    ],
                    0,
                )
                .unwrap(),
            )
            .unwrap();
        let inputs =
            SpectralInputs::from_state(&state, &Roles::new(&["x"], &["y"], &["w"], &["z"]))
                .unwrap();
        assert!(inputs.product_defect() > 0.4);
        assert!(decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step1).is_ok());
        let err = decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step2).unwrap_err();
        assert!(err.to_string().contains("product"));
    }

    #[test]
    fn mixed_xyz_blocks_step3() {
        let state = build_uniform_entangled_state(2, 3)
            .unwrap()
            .split("int", &[("B", 2), ("R", 4)])
            .unwrap();
        // Tracing out ext leaves ρ_{B R} mixed.
        let inputs =
            SpectralInputs::from_state(&state, &Roles::new(&["B"], &["R"], &[], &[])).unwrap();
        let err = decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step3).unwrap_err();
        assert!(err.to_string().contains("pure"));
    }

    #[test]
    fn special_case_values() {
        assert!((ext_decoupling_bound(0.0, 4.0, 4.0) - 2f64.sqrt()).abs() < 1e-15);
        // Transfer at r ≥ ½(n + H_ext) + c: Y1 = 2^r, Y2 = 2^{n−r}.
        let (n, h, c) = (100.0, 100.0, 5.0);
        let r: f64 = 0.5 * (n + h) + c;
        let b = ext_decoupling_bound(h, r.exp2(), (n - r).exp2());
        assert!((b - 2f64.sqrt() * (-c).exp2()).abs() < 1e-12);
        assert!((fidelity_floor_squared(b * b / 2.0) - (1.0 - (-c).exp2())).abs() < 1e-12);
    }

    #[test]
    fn fidelity_conventions() {
        assert_eq!(fidelity_floor(0.0), 1.0);
        assert_eq!(fidelity_floor(3.0), 0.0);
        for c in [1.0f64, 3.0, 10.0] {
            let f = fidelity_floor((1.0 - c).exp2());
            assert!((f - (1.0 - (-c).exp2())).abs() < 1e-15);
        }
        // A special-case bound b corresponds to s = b²/2 in the squared form.
        for b in [0.0, 0.1, 0.5, 1.0, 1.4] {
            let squared = fidelity_floor_squared(b * b / 2.0);
            assert!((squared - (1.0 - b / 2f64.sqrt()).max(0.0)).abs() < 1e-15);
            assert!(squared <= fidelity_floor(b) + 1e-15);
        }
    }

    #[test]
    fn spectral_inputs_check_dimensions() {
        let x = mixed("x", &[0.5, 0.5]);
        let z = DensityOperator::trivial();
        let inputs = SpectralInputs {
            rho_xz: x.clone(),
            rho_xyz: x.clone(),
            rho_yz: z.clone(),
            rho_x: x,
            rho_z: z,
            dim_y1: 2,
            dim_y2: 1,
        };
        assert!(matches!(
            decoupling_rhs(&inputs, 0.25, 0.25, BoundLevel::Step1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn roles_must_be_disjoint_and_known() {
        let state = build_pure_model_state(1, 2).unwrap();
        let dup = DecouplingParams::new(Roles::new(&["ref"], &["int"], &[], &["ref"]), 1, 0);
        assert!(matches!(
            decoupling_lhs(&state, &dup),
            Err(Error::DuplicateLabel(_))
        ));
        let unknown = DecouplingParams::new(Roles::new(&["ext"], &["int"], &[], &[]), 1, 0);
        assert!(matches!(
            decoupling_lhs(&state, &unknown),
            Err(Error::UnknownLabel(_))
        ));
    }
}
