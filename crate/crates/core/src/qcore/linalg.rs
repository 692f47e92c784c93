use nalgebra::DMatrix;

use super::DensityOperator;
use crate::{Error, Result, C64};

/// Kronecker product `a ⊗ b` with `a` as the most significant factor.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Complex product `a·b` computed from real products, which use the
/// blocked real kernel.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    if a.nrows().min(a.ncols()).min(b.ncols()) < 16 {
        return a * b;
    }
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, C64::new)
}

/// `m·m†`.
pub fn gram(m: &DMatrix<C64>) -> DMatrix<C64> {
    matmul(m, &m.adjoint())
}

fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut ev: Vec<f64> = hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_function(m: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let n = m.nrows();
    if n == 1 {
        return DMatrix::from_element(1, 1, C64::new(f(m[(0, 0)].re), 0.0));
    }
    let eig = hermitize(m).symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let v = f(lambda);
        scaled.column_mut(j).scale_mut(v);
    }
    scaled * eig.eigenvectors.adjoint()
}

fn ensure_square(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Sum of singular values.
pub fn trace_norm(m: &DMatrix<C64>) -> Result<f64> {
    ensure_square(m)?;
    if m.is_empty() {
        return Ok(0.0);
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::param("matrix", "entries must be finite"));
    }
    Ok(m.singular_values().iter().sum())
}

/// Trace norm of a Hermitian matrix as the sum of absolute eigenvalues.
pub fn hermitian_trace_norm(m: &DMatrix<C64>) -> Result<f64> {
    ensure_square(m)?;
    Ok(hermitian_eigenvalues(m).iter().map(|l| l.abs()).sum())
}

/// Fidelity `‖√ρ √σ‖₁`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let sqrt = |m: &DMatrix<C64>| hermitian_function(m, |l| l.max(0.0).sqrt());
    let product = sqrt(rho.matrix()) * sqrt(sigma.matrix());
    Ok(trace_norm(&product)?.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn real_split_product_matches_complex_product() {
        let a = DMatrix::from_fn(20, 30, |i, j| {
            C64::new((i + 2 * j) as f64 % 1.3, (3 * i + j) as f64 % 0.7)
        });
        let b = DMatrix::from_fn(30, 17, |i, j| {
            C64::new((i * j) as f64 % 0.9, (i + j) as f64 % 1.1 - 0.5)
        });
        assert!((matmul(&a, &b) - &a * &b).norm() < 1e-12);
        assert!((gram(&a) - &a * a.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn trace_norm_of_simple_matrices() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]));
        assert!((trace_norm(&d).unwrap() - 2.0).abs() < 1e-12);
        assert!((hermitian_trace_norm(&d).unwrap() - 2.0).abs() < 1e-12);
        let z = DMatrix::<C64>::zeros(3, 3);
        assert_eq!(trace_norm(&z).unwrap(), 0.0);
        let rect = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(trace_norm(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn hermitian_function_square_root() {
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(1.0), c(2.0)]);
        let s = hermitian_function(&m, f64::sqrt);
        let back = &s * &s;
        assert!((back - m).norm() < 1e-12);
    }
}
