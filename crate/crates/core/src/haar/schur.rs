use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `⟨(U⊗U)† S_{A2;A2'} (U⊗U)⟩ = α·I + β·S_{A;A'}` for `A = A1 ⊗ A2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurCoefficients {
    pub alpha: f64,
    pub beta: f64,
}

/// `α = A2(A1²−1)/(A²−1)`, `β = A1(A2²−1)/(A²−1)`. For `A = 1` the swap is
/// the identity on a one-dimensional space and `(α, β) = (0, 1)`.
pub fn schur_average_swap(dim_a1: usize, dim_a2: usize) -> Result<SchurCoefficients> {
    if dim_a1 == 0 || dim_a2 == 0 {
        return Err(Error::InvalidDimension(
            "Schur average needs dimensions >= 1".into(),
        ));
    }
    let (a1, a2) = (dim_a1 as f64, dim_a2 as f64);
    let a = a1 * a2;
    if a == 1.0 {
        return Ok(SchurCoefficients {
            alpha: 0.0,
            beta: 1.0,
        });
    }
    let denom = a * a - 1.0;
    Ok(SchurCoefficients {
        alpha: a2 * (a1 * a1 - 1.0) / denom,
        beta: a1 * (a2 * a2 - 1.0) / denom,
    })
}

/// Exact rational form of [`schur_average_swap`].
pub fn schur_average_swap_exact(dim_a1: u64, dim_a2: u64) -> Result<(BigRational, BigRational)> {
    if dim_a1 == 0 || dim_a2 == 0 {
        return Err(Error::InvalidDimension(
            "Schur average needs dimensions >= 1".into(),
        ));
    }
    let (a1, a2) = (BigInt::from(dim_a1), BigInt::from(dim_a2));
    let a = &a1 * &a2;
    let one = BigInt::from(1);
    if a == one {
        return Ok((
            BigRational::from_integer(0.into()),
            BigRational::from_integer(one),
        ));
    }
    let denom = &a * &a - &one;
    Ok((
        BigRational::new(&a2 * (&a1 * &a1 - &one), denom.clone()),
        BigRational::new(&a1 * (&a2 * &a2 - &one), denom),
    ))
}
