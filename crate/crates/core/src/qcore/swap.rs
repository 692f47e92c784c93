use nalgebra::DMatrix;

use super::DensityOperator;
use crate::{Error, Result, C64};

/// Swap `S_{A;A'}` on `A ⊗ A'`: `|a⟩|a'⟩ ↦ |a'⟩|a⟩`.
pub fn swap_operator(dim: usize) -> Result<DMatrix<C64>> {
    partial_swap_operator(1, dim)
}

/// Swap of the second factor between two copies of `A = A1 ⊗ A2`, acting on
/// `A1 A2 A1' A2'` as `|a1 a2 b1 b2⟩ ↦ |a1 b2 b1 a2⟩`.
pub fn partial_swap_operator(dim_a1: usize, dim_a2: usize) -> Result<DMatrix<C64>> {
    if dim_a1 == 0 || dim_a2 == 0 {
        return Err(Error::InvalidDimension("swap factor of dimension 0".into()));
    }
    let a = dim_a1 * dim_a2;
    let mut s = DMatrix::zeros(a * a, a * a);
    let index = |x1: usize, x2: usize, y1: usize, y2: usize| {
        ((x1 * dim_a2 + x2) * dim_a1 + y1) * dim_a2 + y2
    };
    for x1 in 0..dim_a1 {
        for x2 in 0..dim_a2 {
            for y1 in 0..dim_a1 {
                for y2 in 0..dim_a2 {
                    s[(index(x1, y2, y1, x2), index(x1, x2, y1, y2))] = C64::new(1.0, 0.0);
                }
            }
        }
    }
    Ok(s)
}

/// `tr((σ ⊗ σ) S)`, which equals `tr σ²`.
pub fn swap_trace_purity(sigma: &DensityOperator) -> f64 {
    let d = sigma.dim();
    let doubled = sigma.matrix().kronecker(sigma.matrix());
    let s = swap_operator(d).expect("density operators have dimension >= 1");
    (doubled * s).trace().re
}
