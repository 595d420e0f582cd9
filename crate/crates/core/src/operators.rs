//! Dense complex matrices on a truncated number basis.
//!
//! [`OperatorMatrix`] carries the dimension and the Hermiticity/unitarity
//! predicates the verification suites assert on. The matrix exponential
//! uses scaling-and-squaring with a Padé(13) approximant; the result is
//! never re-unitarized, so truncation error stays observable.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix on a truncated basis of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    mat: DMatrix<Complex64>,
}

impl OperatorMatrix {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operator matrices are square");
        assert!(mat.nrows() >= 2, "operator matrices have dim >= 2");
        Self {
            dim: mat.nrows(),
            mat,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self::from_matrix(self.mat.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.mat - self.mat.adjoint()).iter().all(|e| e.norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Largest entry of U·U† − 1 in absolute value.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = &self.mat * self.mat.adjoint();
        let eye = DMatrix::<Complex64>::identity(self.dim, self.dim);
        (product - eye).iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self::from_matrix(
            &self.mat * &other.mat - &other.mat * &self.mat,
        ))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Copy of the leading k×k block.
    pub fn interior_block(&self, k: usize) -> DMatrix<Complex64> {
        self.mat.view((0, 0), (k, k)).into_owned()
    }

    /// Sorted real eigenvalues; the matrix must be Hermitian.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let eigen = SymmetricEigen::new(self.mat.clone());
        let mut vals: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }
}

/// Padé(13) numerator coefficients (Higham's scaling-and-squaring).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|e| e.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with Padé(13).
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    assert_eq!(a.nrows(), a.ncols());
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / Complex64::new((2.0f64).powi(squarings as i32), 0.0);

    let eye = DMatrix::<Complex64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let c = |k: usize| Complex64::new(PADE13[k], 0.0);

    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u = &scaled
        * (&a6 * u_inner + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1));
    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = &a6 * v_inner + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    let denom = &v - &u;
    let numer = &v + &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Padé denominator is nonsingular for scaled inputs");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = DMatrix::<Complex64>::zeros(4, 4);
        let e = expm(&z);
        let eye = DMatrix::<Complex64>::identity(4, 4);
        assert!((e - eye).iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn expm_diagonal() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.5);
        m[(1, 1)] = c(-2.0, 1.0);
        let e = expm(&m);
        assert!((e[(0, 0)] - c(1.0, 0.5).exp()).norm() < 1e-13);
        assert!((e[(1, 1)] - c(-2.0, 1.0).exp()).norm() < 1e-13);
        assert!(e[(0, 1)].norm() < 1e-15 && e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn expm_rotation_generator() {
        // exp of [[0, −θ], [θ, 0]] is a rotation by θ
        let theta = 1.234;
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = c(-theta, 0.0);
        m[(1, 0)] = c(theta, 0.0);
        let e = expm(&m);
        assert!((e[(0, 0)].re - theta.cos()).abs() < 1e-13);
        assert!((e[(0, 1)].re + theta.sin()).abs() < 1e-13);
    }

    #[test]
    fn expm_large_norm_uses_scaling() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = c(50.0, 0.0);
        m[(1, 1)] = c(-50.0, 0.0);
        let e = expm(&m);
        assert!((e[(0, 0)].re - 50.0f64.exp()).abs() / 50.0f64.exp() < 1e-12);
        assert!((e[(1, 1)].re - (-50.0f64).exp()).abs() < 1e-24);
    }

    #[test]
    fn expm_antihermitian_is_unitary() {
        let mut gen = DMatrix::<Complex64>::zeros(5, 5);
        for i in 0..4 {
            gen[(i, i + 1)] = c(0.3, 0.7 - 0.2 * i as f64);
        }
        let gen = &gen - gen.adjoint();
        let u = OperatorMatrix::from_matrix(expm(&gen));
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn predicates() {
        let mut h = DMatrix::<Complex64>::zeros(3, 3);
        h[(0, 1)] = c(0.0, 1.0);
        h[(1, 0)] = c(0.0, -1.0);
        h[(2, 2)] = c(2.0, 0.0);
        let m = OperatorMatrix::from_matrix(h);
        assert!(m.is_hermitian(1e-15));
        assert!(!m.is_unitary(1e-12));
        assert!(OperatorMatrix::identity(3).is_unitary(0.0));
        let eigs = m.hermitian_eigenvalues();
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn commutator_dimension_check() {
        let a = OperatorMatrix::identity(3);
        let b = OperatorMatrix::identity(4);
        assert!(matches!(
            a.commutator(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        let z = a.commutator(&OperatorMatrix::identity(3)).unwrap();
        assert_eq!(z.max_abs_entry(), 0.0);
    }
}
