//! Complex linear algebra shared by the rest of the crate.
//!
//! Matrices are plain `nalgebra` dynamic matrices over [`C64`]. Amplitude
//! vectors are *row* vectors throughout: a network with transfer matrix `L`
//! maps input amplitudes `α` to `αL`.

mod gaussian;
pub mod io;
mod permanent;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gaussian::{sample_complex_gaussian, ComplexGaussian, RealGaussian};
pub use permanent::{permanent, permanent_repeated_columns};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Slack allowed on singular values of a transfer matrix.
pub const CONTRACTION_TOL: f64 = 1e-9;
/// Eigenvalues above `-PSD_TOL` count as nonnegative; those within
/// `[-PSD_TOL, PSD_TOL]` are treated as exactly zero.
pub const PSD_TOL: f64 = 1e-10;

/// Transfer matrix of a passive, possibly lossy, linear-optical network.
///
/// Every singular value is at most `1 + CONTRACTION_TOL`, which is what makes
/// the network embeddable in a larger lossless one (see [`dilate_to_unitary`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "io::MatrixJson", into = "io::MatrixJson")]
pub struct TransferMatrix(ComplexMatrix);

impl TransferMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDimension(format!(
                "transfer matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension("transfer matrix is empty".into()));
        }
        check_finite(&matrix)?;
        let largest = largest_singular_value(&matrix);
        if largest > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotAContraction { largest_singular_value: largest });
        }
        Ok(Self(matrix))
    }

    pub fn identity(m: usize) -> Self {
        Self(ComplexMatrix::identity(m, m))
    }

    /// `√η · U` for a unitary `U`: every path sees the same transmission `η`.
    pub fn uniform_loss(unitary: &ComplexMatrix, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::config("eta", format!("transmission {eta} outside [0, 1]")));
        }
        Self::new(unitary * C64::from(eta.sqrt()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &TransferMatrix) -> TransferMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut out = ComplexMatrix::zeros(a + b, a + b);
        out.view_mut((0, 0), (a, a)).copy_from(&self.0);
        out.view_mut((a, a), (b, b)).copy_from(&other.0);
        TransferMatrix(out)
    }

    /// Composition: first `self`, then `next` (row-vector convention, `αL₁L₂`).
    pub fn then(&self, next: &TransferMatrix) -> Result<TransferMatrix> {
        if self.dim() != next.dim() {
            return Err(Error::InvalidDimension(format!(
                "cannot compose {}-mode and {}-mode networks",
                self.dim(),
                next.dim()
            )));
        }
        TransferMatrix::new(&self.0 * &next.0)
    }

    /// `L†L`, the per-input transmission Gram matrix.
    pub fn gram(&self) -> ComplexMatrix {
        self.0.adjoint() * &self.0
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = self.gram();
        max_abs_diff(&gram, &ComplexMatrix::identity(self.dim(), self.dim())) <= tol
    }
}

impl TryFrom<ComplexMatrix> for TransferMatrix {
    type Error = Error;

    fn try_from(value: ComplexMatrix) -> Result<Self> {
        Self::new(value)
    }
}

/// Haar-random `m × m` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("unitary dimension must be >= 1".into()));
    }
    let ginibre = ComplexMatrix::from_fn(m, m, |_, _| standard_complex_normal(rng));
    let qr = ginibre.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Embed a contraction `L` as the top-left block of a `2M × 2M` unitary
///
/// ```text
/// Ũ = [ L          V C V† ]      L = V S W†,  C = √(I − S²)
///     [ W C W†    −W S V† ]
/// ```
///
/// The extra `M` modes are the environment that carries away lost light.
pub fn dilate_to_unitary(l: &TransferMatrix) -> Result<ComplexMatrix> {
    let m = l.dim();
    let svd = l.matrix().clone().svd(true, true);
    let v = svd.u.expect("svd computed with u");
    let w_adj = svd.v_t.expect("svd computed with v_t");
    let w = w_adj.adjoint();
    let mut s = ComplexMatrix::zeros(m, m);
    let mut c = ComplexMatrix::zeros(m, m);
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotAContraction { largest_singular_value: sv });
        }
        let sv = sv.min(1.0);
        s[(k, k)] = C64::from(sv);
        c[(k, k)] = C64::from((1.0 - sv * sv).max(0.0).sqrt());
    }
    let mut u = ComplexMatrix::zeros(2 * m, 2 * m);
    u.view_mut((0, 0), (m, m)).copy_from(l.matrix());
    u.view_mut((0, m), (m, m)).copy_from(&(&v * &c * v.adjoint()));
    u.view_mut((m, 0), (m, m)).copy_from(&(&w * &c * &w_adj));
    u.view_mut((m, m), (m, m)).copy_from(&(-(&w * &s * v.adjoint())));
    Ok(u)
}

pub fn largest_singular_value(m: &ComplexMatrix) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn real_symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub(crate) fn hermitian_asymmetry(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub(crate) fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Circularly-symmetric complex normal with `E|z|² = 1`.
#[inline]
pub(crate) fn standard_complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Real-quadrature representation of a complex linear map.
///
/// For `β = αL` with `α_j = (x_j + i p_j)/2`, returns the `2M × 2M` real matrix
/// `S` acting on interleaved `(x_1, p_1, x_2, p_2, …)` column vectors.
pub fn quadrature_map(l: &ComplexMatrix) -> DMatrix<f64> {
    let (rows, cols) = (l.nrows(), l.ncols());
    let mut s = DMatrix::zeros(2 * cols, 2 * rows);
    for j in 0..rows {
        for k in 0..cols {
            let z = l[(j, k)];
            s[(2 * k, 2 * j)] = z.re;
            s[(2 * k, 2 * j + 1)] = -z.im;
            s[(2 * k + 1, 2 * j)] = z.im;
            s[(2 * k + 1, 2 * j + 1)] = z.re;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    fn unitarity_defect(u: &ComplexMatrix) -> f64 {
        max_abs_diff(&(u.adjoint() * u), &ComplexMatrix::identity(u.ncols(), u.ncols()))
    }

    #[test]
    fn haar_one_mode_is_a_phase() {
        let u = haar_unitary(1, &mut RngStream::from_seed(3).rng()).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn haar_is_unitary() {
        for seed in 0..20 {
            let u = haar_unitary(4, &mut RngStream::from_seed(seed).rng()).unwrap();
            assert!(unitarity_defect(&u) <= 1e-12);
        }
    }

    #[test]
    fn haar_zero_dimension_rejected() {
        let err = haar_unitary(0, &mut RngStream::from_seed(0).rng()).unwrap_err();
        assert!(matches!(err, Error::InvalidDimension(_)));
    }

    #[test]
    fn haar_first_moment() {
        // E|U_11|² = 1/m; Var|U_11|² = (m-1)/(m²(m+1)).
        let m = 8;
        let n = 10_000;
        let mut rng = RngStream::from_seed(11).rng();
        let mean = (0..n).map(|_| haar_unitary(m, &mut rng).unwrap()[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        let var = (m as f64 - 1.0) / ((m * m) as f64 * (m as f64 + 1.0));
        let se = (var / n as f64).sqrt();
        assert!((mean - 1.0 / m as f64).abs() < 5.0 * se, "mean {mean}");
    }

    #[test]
    fn dilation_of_identity() {
        let u = dilate_to_unitary(&TransferMatrix::identity(2)).unwrap();
        assert!(unitarity_defect(&u) <= 1e-12);
        assert_eq!(u.view((0, 0), (2, 2)), ComplexMatrix::identity(2, 2));
    }

    #[test]
    fn dilation_of_scalar_contraction() {
        let l = TransferMatrix::new(ComplexMatrix::from_element(1, 1, C64::from(0.5f64.sqrt()))).unwrap();
        let u = dilate_to_unitary(&l).unwrap();
        assert_abs_diff_eq!(u[(0, 0)].norm_sqr(), 0.5, epsilon = 1e-12);
        assert!(unitarity_defect(&u) <= 1e-12);
    }

    #[test]
    fn dilation_of_lossy_haar() {
        let h = haar_unitary(3, &mut RngStream::from_seed(5).rng()).unwrap();
        let l = TransferMatrix::uniform_loss(&h, 0.94).unwrap();
        let u = dilate_to_unitary(&l).unwrap();
        assert!(unitarity_defect(&u) <= 1e-10);
        assert!(max_abs_diff(&u.view((0, 0), (3, 3)).into_owned(), l.matrix()) <= 1e-10);
    }

    #[test]
    fn non_contraction_rejected() {
        let m = ComplexMatrix::from_element(1, 1, C64::from(1.01));
        assert!(matches!(TransferMatrix::new(m), Err(Error::NotAContraction { .. })));
        let m = ComplexMatrix::from_element(1, 1, C64::from(1.0 + 1e-10));
        assert!(TransferMatrix::new(m).is_ok());
    }

    #[test]
    fn non_square_rejected() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(TransferMatrix::new(m), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn quadrature_map_matches_complex_action() {
        let l = haar_unitary(3, &mut RngStream::from_seed(2).rng()).unwrap();
        let alpha = [C64::new(0.3, -0.2), C64::new(-1.0, 0.5), C64::new(0.1, 0.7)];
        let beta: Vec<C64> = (0..3).map(|k| (0..3).map(|j| alpha[j] * l[(j, k)]).sum()).collect();
        let x = nalgebra::DVector::from_fn(6, |i, _| {
            let a = alpha[i / 2];
            2.0 * if i % 2 == 0 { a.re } else { a.im }
        });
        let y = quadrature_map(&l) * x;
        for k in 0..3 {
            assert_abs_diff_eq!(y[2 * k] / 2.0, beta[k].re, epsilon = 1e-12);
            assert_abs_diff_eq!(y[2 * k + 1] / 2.0, beta[k].im, epsilon = 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn dilation_round_trips(seed in 0u64..10_000, m in 1usize..5, eta in 0.0f64..=1.0) {
            let h = haar_unitary(m, &mut RngStream::from_seed(seed).rng()).unwrap();
            let l = TransferMatrix::uniform_loss(&h, eta).unwrap();
            let u = dilate_to_unitary(&l).unwrap();
            proptest::prop_assert!(unitarity_defect(&u) <= 1e-10);
            let top = TransferMatrix::new(u.view((0, 0), (m, m)).into_owned()).unwrap();
            proptest::prop_assert!(max_abs_diff(top.matrix(), l.matrix()) <= 1e-10);
        }
    }
}
