use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, C64};

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<C64>,
}

impl Unitary {
    /// Accepts `matrix` if `‖U†U − I‖_F ≤ 1e-10`.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension("unitary of dimension 0".into()));
        }
        let dev =
            (matrix.adjoint() * &matrix - DMatrix::identity(matrix.nrows(), matrix.nrows())).norm();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("unitary of dimension 0".into()));
        }
        Ok(Self {
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Unitary) -> Result<Unitary> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Unitary {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &Unitary) -> Unitary {
        Unitary {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }
}

/// Draws a Haar-distributed unitary of size `dim`.
///
/// A complex Ginibre matrix is QR-factorised and the columns of `Q` are
/// rephased by `r_ii / |r_ii|`, which removes the phase bias of the
/// Householder factorisation and makes the result exactly Haar.
pub fn haar_sample<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Unitary> {
    if dim == 0 {
        return Err(Error::InvalidDimension("Haar sample of dimension 0".into()));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut gauss = || rng.sample::<f64, _>(StandardNormal) * scale;
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(gauss(), gauss()));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 {
            d / norm
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(Unitary { matrix: q })
}
