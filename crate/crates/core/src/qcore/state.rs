use nalgebra::{DMatrix, DVector};

use super::label::{permutation_map, Layout, SubsystemLabel};
use super::linalg::{gram, hermitian_eigenvalues, matmul};
use super::{DensityOperator, Unitary};
use crate::{Error, Result, C64};

const NORM_TOL: f64 = 1e-12;

/// Dense pure state over an ordered list of labelled subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState {
    layout: Layout,
    amplitudes: DVector<C64>,
}

impl MultipartiteState {
    pub fn new(labels: Vec<SubsystemLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        let layout = Layout::new(labels)?;
        Self::from_layout(layout, DVector::from_vec(amplitudes))
    }

    pub fn from_layout(layout: Layout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Computational basis state `|index⟩` over `labels`.
    pub fn basis(labels: Vec<SubsystemLabel>, index: usize) -> Result<Self> {
        let layout = Layout::new(labels)?;
        let dim = layout.total_dim();
        if index >= dim {
            return Err(Error::param("index", format!("{index} >= dimension {dim}")));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self {
            layout,
            amplitudes: amps,
        })
    }

    // Callers guarantee normalization up to accumulated rounding.
    pub(crate) fn from_parts(layout: Layout, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(layout.total_dim(), amplitudes.len());
        Self { layout, amplitudes }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn labels(&self) -> &[SubsystemLabel] {
        self.layout.labels()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn tensor(&self, other: &MultipartiteState) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let amps = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self::from_parts(layout, amps))
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
        Ok(self.permute_positions(&positions))
    }

    fn permute_positions(&self, positions: &[usize]) -> Self {
        let map = permutation_map(&self.layout.dims(), positions);
        let amps = DVector::from_iterator(map.len(), map.iter().map(|&o| self.amplitudes[o]));
        Self::from_parts(self.layout.select(positions), amps)
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let at = self.layout.position(from)?;
        let dim = self.layout.labels()[at].dim();
        let layout = self
            .layout
            .replace(at, 1, vec![SubsystemLabel::new(to, dim)?])?;
        Ok(Self::from_parts(layout, self.amplitudes.clone()))
    }

    /// Splits one label into consecutive factors (first part most significant).
    pub fn split(&self, name: &str, parts: &[(&str, usize)]) -> Result<Self> {
        let at = self.layout.position(name)?;
        let dim = self.layout.labels()[at].dim();
        let product: usize = parts.iter().map(|p| p.1).product();
        if product != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: product,
            });
        }
        let labels = parts
            .iter()
            .map(|&(n, d)| SubsystemLabel::new(n, d))
            .collect::<Result<Vec<_>>>()?;
        let layout = self.layout.replace(at, 1, labels)?;
        Ok(Self::from_parts(layout, self.amplitudes.clone()))
    }

    /// Fuses adjacent labels (given in layout order) into one.
    pub fn merge(&self, names: &[&str], into: &str) -> Result<Self> {
        let positions = self.layout.positions(names)?;
        let Some(&first) = positions.first() else {
            return Err(Error::param("names", "nothing to merge"));
        };
        if positions.iter().enumerate().any(|(i, &p)| p != first + i) {
            return Err(Error::param(
                "names",
                "labels must be adjacent and in layout order",
            ));
        }
        let dim = self.layout.dim_of_set(names)?;
        let layout = self.layout.replace(
            first,
            positions.len(),
            vec![SubsystemLabel::new(into, dim)?],
        )?;
        Ok(Self::from_parts(layout, self.amplitudes.clone()))
    }

    /// Applies `u` to the joint register formed by `targets` in the given order.
    pub fn apply_unitary(&self, targets: &[&str], u: &Unitary) -> Result<Self> {
        let target_pos = self.layout.positions(targets)?;
        let target_dim = self.layout.dim_of_set(targets)?;
        if u.dim() != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: u.dim(),
            });
        }
        let mut order: Vec<usize> = (0..self.layout.len())
            .filter(|p| !target_pos.contains(p))
            .collect();
        order.extend(&target_pos);
        let permuted = self.permute_positions(&order);
        let rest_dim = self.dim() / target_dim;
        // Row-major (rest × target) view; each row transforms as ψ ↦ Uψ.
        let psi = DMatrix::from_row_slice(rest_dim, target_dim, permuted.amplitudes.as_slice());
        let out = matmul(&psi, &u.matrix().transpose());
        let mut amps = DVector::zeros(self.dim());
        for i in 0..rest_dim {
            for j in 0..target_dim {
                amps[i * target_dim + j] = out[(i, j)];
            }
        }
        let map = permutation_map(&self.layout.dims(), &order);
        let mut restored = DVector::zeros(self.dim());
        for (new, &old) in map.iter().enumerate() {
            restored[old] = amps[new];
        }
        Ok(Self::from_parts(self.layout.clone(), restored))
    }

    /// Row-major coefficient matrix with `keep` (layout order) as rows and
    /// the remaining labels as columns.
    pub fn bipartite_matrix(&self, keep: &[&str]) -> Result<DMatrix<C64>> {
        let (kept, rest) = self.layout.split_positions(keep)?;
        let keep_dim: usize = kept
            .iter()
            .map(|&p| self.layout.labels()[p].dim())
            .product();
        let mut order = kept;
        order.extend(rest);
        let permuted = self.permute_positions(&order);
        Ok(DMatrix::from_row_slice(
            keep_dim,
            self.dim() / keep_dim,
            permuted.amplitudes.as_slice(),
        ))
    }

    /// Reduced density operator on `keep`; labels stay in layout order.
    pub fn reduced(&self, keep: &[&str]) -> Result<DensityOperator> {
        let (kept, _) = self.layout.split_positions(keep)?;
        let m = self.bipartite_matrix(keep)?;
        let rho = gram(&m);
        Ok(DensityOperator::from_parts(self.layout.select(&kept), rho))
    }

    /// Nonnegative eigenvalues of the reduced operator on `keep`, computed
    /// from whichever side of the bipartition is smaller. Zero eigenvalues
    /// beyond the Schmidt rank are omitted.
    pub fn spectrum(&self, keep: &[&str]) -> Result<Vec<f64>> {
        let m = self.bipartite_matrix(keep)?;
        let gram = if m.nrows() <= m.ncols() {
            gram(&m)
        } else {
            gram(&m.adjoint())
        };
        Ok(hermitian_eigenvalues(&gram)
            .into_iter()
            .map(|l| l.max(0.0))
            .collect())
    }

    pub fn to_density(&self) -> DensityOperator {
        let rho = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::from_parts(self.layout.clone(), rho)
    }
}
