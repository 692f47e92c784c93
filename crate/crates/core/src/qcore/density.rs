use nalgebra::DMatrix;

use super::label::{permutation_map, Layout, SubsystemLabel};
use super::linalg::{hermitian_eigenvalues, hermitian_function};
use crate::{Error, Result, C64};

const VALIDATION_TOL: f64 = 1e-10;

/// Unit-trace positive semidefinite operator on a labelled subsystem set.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: Layout,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validated constructor: Hermitian, unit trace and PSD within 1e-10.
    pub fn new(labels: Vec<SubsystemLabel>, matrix: DMatrix<C64>) -> Result<Self> {
        let layout = Layout::new(labels)?;
        let dim = layout.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let asym = (&matrix - matrix.adjoint()).norm();
        if asym > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {asym:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        if let Some(&min) = hermitian_eigenvalues(&matrix).first() {
            if min < -VALIDATION_TOL {
                return Err(Error::InvalidDensity(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self { layout, matrix })
    }

    pub(crate) fn from_parts(layout: Layout, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(layout.total_dim(), matrix.nrows());
        Self { layout, matrix }
    }

    pub fn maximally_mixed(labels: Vec<SubsystemLabel>) -> Result<Self> {
        let layout = Layout::new(labels)?;
        let d = layout.total_dim();
        let m = DMatrix::from_diagonal_element(d, d, C64::new(1.0 / d as f64, 0.0));
        Ok(Self::from_parts(layout, m))
    }

    /// One-dimensional operator over no labels (the trivial system).
    pub fn trivial() -> Self {
        Self::from_parts(
            Layout::default(),
            DMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
        )
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn labels(&self) -> &[SubsystemLabel] {
        self.layout.labels()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.layout.dims()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // tr(ρρ) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.norm_squared()
    }

    /// Eigenvalues ascending, with eigensolver noise in [-1e-10, 0) clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|l| {
                if (-VALIDATION_TOL..0.0).contains(&l) {
                    0.0
                } else {
                    l
                }
            })
            .collect()
    }

    /// `ρ^p` on the support of ρ; eigenvalues below `floor` map to zero,
    /// which gives the pseudo-inverse for negative `p`.
    pub fn power(&self, p: f64, floor: f64) -> DMatrix<C64> {
        hermitian_function(&self.matrix, |l| if l > floor { l.powf(p) } else { 0.0 })
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self::from_parts(
            layout,
            self.matrix.kronecker(&other.matrix),
        ))
    }

    /// Reorders the subsystems; `order` must name every label exactly once.
    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        let positions = self.layout.positions(order)?;
        if positions.len() != self.layout.len() {
            return Err(Error::param(
                "order",
                format!(
                    "expected {} labels, got {}",
                    self.layout.len(),
                    positions.len()
                ),
            ));
        }
        let map = permutation_map(&self.layout.dims(), &positions);
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        Ok(Self::from_parts(self.layout.select(&positions), m))
    }

    /// Traces out everything except `keep`; kept labels stay in layout order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let (kept, rest) = self.layout.split_positions(keep)?;
        let keep_dim: usize = kept
            .iter()
            .map(|&p| self.layout.labels()[p].dim())
            .product();
        let rest_dim = self.dim() / keep_dim;
        let mut order = kept.clone();
        order.extend(&rest);
        let map = permutation_map(&self.layout.dims(), &order);
        let mut out = DMatrix::zeros(keep_dim, keep_dim);
        for i in 0..keep_dim {
            for j in 0..keep_dim {
                let mut acc = C64::default();
                for t in 0..rest_dim {
                    acc += self.matrix[(map[i * rest_dim + t], map[j * rest_dim + t])];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(Self::from_parts(self.layout.select(&kept), out))
    }

    /// Trace distance `½‖ρ − σ‖₁` to another operator on the same labels.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(0.5 * super::hermitian_trace_norm(&(&self.matrix - &other.matrix))?)
    }
}
