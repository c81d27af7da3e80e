//! Dense complex matrix aliases and the small entrywise/spectral helpers
//! used across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Largest entry magnitude, `0.0` for an empty matrix.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Entrywise (Hadamard) product. Shapes must agree.
pub fn hadamard(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "hadamard product of {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(a.zip_map(b, |x, y| x * y))
}

/// Apply a scalar function to every entry: `f[A]`.
pub fn entrywise_apply(a: &CMatrix, f: impl Fn(Complex64) -> Complex64) -> CMatrix {
    a.map(f)
}

/// Entrywise power `A^{∘α}` with the convention `0^0 = 1`.
///
/// Integer exponents are defined for arbitrary complex entries. Fractional
/// exponents require every entry to be real and non-negative; anything else
/// is a domain error rather than a silently complex branch cut.
pub fn entrywise_power(a: &CMatrix, alpha: f64) -> Result<CMatrix> {
    let integral = alpha.fract() == 0.0 && alpha.abs() < 2_f64.powi(53);
    if integral {
        let k = alpha as i64;
        return Ok(a.map(|z| {
            if k == 0 {
                Complex64::new(1.0, 0.0) // 0^0 = 1 included
            } else if z == Complex64::new(0.0, 0.0) {
                Complex64::new(0.0, 0.0)
            } else {
                z.powi(k as i32)
            }
        }));
    }
    let mut out = CMatrix::zeros(a.nrows(), a.ncols());
    for (dst, z) in out.iter_mut().zip(a.iter()) {
        if z.im != 0.0 || z.re < 0.0 {
            return Err(Error::Domain(format!(
                "entrywise power {alpha} of non-positive entry {z}"
            )));
        }
        *dst = Complex64::new(z.re.powf(alpha), 0.0);
    }
    Ok(out)
}

/// Hermitian test: `‖A - A*‖_max ≤ eps`.
pub fn is_hermitian(a: &CMatrix, eps: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let n = a.nrows();
    for i in 0..n {
        for j in i..n {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > eps {
                return false;
            }
        }
    }
    true
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    if a.nrows() == 0 {
        return Vec::new();
    }
    if a.nrows() == 1 {
        return vec![a[(0, 0)]];
    }
    let schur = a.clone().schur();
    schur
        .eigenvalues()
        .expect("complex Schur form is triangular")
        .iter()
        .copied()
        .collect()
}

/// Spectral radius `max |λ|`.
pub fn spectral_radius(a: &CMatrix) -> f64 {
    eigenvalues(a).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues of a Hermitian matrix, ascending. The caller asserts
/// Hermitian-ness; only the lower triangle influences the result.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let se = nalgebra::SymmetricEigen::new(a.clone());
    let mut vals: Vec<f64> = se.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

/// Two-norm condition number via singular values; `f64::INFINITY` when the
/// smallest singular value underflows.
pub fn condition_number(a: &CMatrix) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let (mut hi, mut lo) = (0.0_f64, f64::INFINITY);
    for s in sv.iter() {
        hi = hi.max(*s);
        lo = lo.min(*s);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Full eigendecomposition `A = V diag(λ) V⁻¹` of a general complex matrix,
/// computed from the Schur form by back-substitution for the eigenvectors
/// of the triangular factor.
///
/// The columns of `V` are unit vectors. For a defective matrix the computed
/// `V` is (nearly) singular; callers gate on its condition number.
pub fn eigendecomposition(a: &CMatrix) -> (Vec<Complex64>, CMatrix) {
    assert!(a.is_square(), "eigendecomposition of a non-square matrix");
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    if n == 1 {
        return (vec![a[(0, 0)]], CMatrix::identity(1, 1));
    }
    let (q, t) = a.clone().schur().unpack();
    let scale = max_abs(&t).max(1.0);
    let mut v = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut y = CVector::zeros(n);
        y[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for l in (j + 1)..=k {
                s += t[(j, l)] * y[l];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < f64::EPSILON * scale {
                // repeated eigenvalue: perturb as in the usual triangular
                // eigenvector solves so the direction is still well defined
                denom = Complex64::new(f64::EPSILON * scale, 0.0);
            }
            y[j] = -s / denom;
        }
        let x = &q * y;
        let norm = x.norm();
        v.set_column(k, &(x / Complex64::new(norm, 0.0)));
    }
    let values = (0..n).map(|k| t[(k, k)]).collect();
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hadamard_rejects_shape_mismatch() {
        let a = CMatrix::zeros(2, 2);
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(hadamard(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn entrywise_power_conventions() {
        let a = CMatrix::from_row_slice(1, 3, &[c(0.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]);
        let p0 = entrywise_power(&a, 0.0).unwrap();
        assert!(p0.iter().all(|z| *z == c(1.0, 0.0))); // 0^0 = 1
        let p2 = entrywise_power(&a, 2.0).unwrap();
        assert_eq!(p2[(0, 2)], c(1.0, 0.0));
        // fractional power of a negative entry is a domain error
        assert!(matches!(entrywise_power(&a, 0.5), Err(Error::Domain(_))));
        let b = CMatrix::from_row_slice(1, 2, &[c(4.0, 0.0), c(0.0, 0.0)]);
        let ph = entrywise_power(&b, 0.5).unwrap();
        assert_eq!(ph[(0, 0)], c(2.0, 0.0));
        assert_eq!(ph[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn eigendecomposition_reconstructs() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.2),
                c(2.0, 0.0),
                c(0.0, -1.0),
                c(0.5, 0.0),
                c(3.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 1.0),
                c(-2.0, 0.0),
            ],
        );
        let (vals, v) = eigendecomposition(&a);
        let lambda = CMatrix::from_diagonal(&CVector::from_vec(vals));
        let vinv = v.clone().try_inverse().unwrap();
        let recon = &v * lambda * vinv;
        assert!((recon - &a).norm() < 1e-10);
    }

    #[test]
    fn spectral_radius_of_scaled_identity() {
        let a = CMatrix::identity(4, 4) * c(-3.0, 0.0);
        assert!((spectral_radius(&a) - 3.0).abs() < 1e-12);
    }
}
