//! The lossy linear-optical network as a quantum process on phase space.
//!
//! For orderings `t` at the input and `s` at the output the transition
//! function of a network with transfer matrix `L` is a Gaussian centred on
//! `αL` whose shape is set by
//!
//! ```text
//! Σ = I − L†L − diag(s) + L†·diag(t)·L
//! ```
//!
//! It is a proper (possibly degenerate) density exactly when `Σ ⪰ 0`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, quadrature_map, ComplexGaussian, ComplexMatrix, TransferMatrix, C64, PSD_TOL,
};
use crate::states::{GaussianPQDState, OrderingVector};

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaMatrix(ComplexMatrix);

impl SigmaMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }
}

pub fn sigma_matrix(l: &TransferMatrix, s: &OrderingVector, t: &OrderingVector) -> Result<SigmaMatrix> {
    let m = l.dim();
    if s.len() != m || t.len() != m {
        return Err(Error::InvalidDimension(format!(
            "{m}-mode network with {} output and {} input orderings",
            s.len(),
            t.len()
        )));
    }
    let lm = l.matrix();
    let mut tl = lm.clone();
    for j in 0..m {
        for k in 0..m {
            tl[(j, k)] *= t[j];
        }
    }
    let mut sigma = ComplexMatrix::identity(m, m) - lm.adjoint() * lm + lm.adjoint() * tl;
    for k in 0..m {
        sigma[(k, k)] -= s[k];
    }
    // exact Hermitian symmetrization; the two products above agree only up to roundoff
    let sigma = (&sigma + sigma.adjoint()) * C64::from(0.5);
    Ok(SigmaMatrix(sigma))
}

/// Precomputed transition function: `β = αL + δ` with `E[δ†δ] = Σ/2`.
#[derive(Clone, Debug)]
pub struct TransitionKernel {
    m: usize,
    /// column-major copy of `L`: `columns[k*m + j] = L_jk`
    columns: Vec<C64>,
    noise: ComplexGaussian,
}

impl TransitionKernel {
    pub fn new(l: &TransferMatrix, s: &OrderingVector, t: &OrderingVector) -> Result<Self> {
        let sigma = sigma_matrix(l, s, t)?;
        let min = sigma.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::SimulabilityViolated(format!("transition matrix Σ has eigenvalue {min:e} < 0")));
        }
        let m = l.dim();
        let noise = ComplexGaussian::new(vec![C64::new(0.0, 0.0); m], &(sigma.0 * C64::from(0.5)))?;
        let columns = l.matrix().as_slice().to_vec();
        Ok(Self { m, columns, noise })
    }

    pub fn modes(&self) -> usize {
        self.m
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, alpha: &[C64], rng: &mut R, scratch: &mut Vec<C64>, out: &mut [C64]) {
        self.noise.sample_into(rng, scratch, out);
        for (k, o) in out.iter_mut().enumerate() {
            let col = &self.columns[k * self.m..(k + 1) * self.m];
            let mut acc = C64::new(0.0, 0.0);
            for (a, l) in alpha.iter().zip(col) {
                acc += a * l;
            }
            *o += acc;
        }
    }
}

/// One draw from the transition function `T(β|α)`.
pub fn transition_sample<R: Rng + ?Sized>(
    l: &TransferMatrix,
    s: &OrderingVector,
    t: &OrderingVector,
    alpha: &[C64],
    rng: &mut R,
) -> Result<Vec<C64>> {
    let kernel = TransitionKernel::new(l, s, t)?;
    if alpha.len() != kernel.modes() {
        return Err(Error::InvalidDimension(format!(
            "{} amplitudes for a {}-mode network",
            alpha.len(),
            kernel.modes()
        )));
    }
    let mut out = vec![C64::new(0.0, 0.0); kernel.modes()];
    kernel.sample_into(alpha, rng, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Network of `ℓ`-port elements, each with transmissivity `η₀`, deep enough
/// to mix `M` modes: every path crosses `log_ℓ M` elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    pub eta0: f64,
    pub ell: f64,
    pub modes: f64,
}

impl LossModel {
    pub fn new(eta0: f64, ell: f64, modes: f64) -> Result<Self> {
        if !(eta0 > 0.0 && eta0 <= 1.0) {
            return Err(Error::config("eta0", format!("{eta0} is outside (0, 1]")));
        }
        if ell.is_nan() || ell < 2.0 {
            return Err(Error::config("ell", format!("{ell} must be >= 2")));
        }
        if modes.is_nan() || modes < 1.0 {
            return Err(Error::config("M", format!("{modes} must be >= 1")));
        }
        Ok(Self { eta0, ell, modes })
    }
}

/// `η_L = η₀^(log_ℓ M)`.
pub fn uniform_loss_eta(model: &LossModel) -> f64 {
    model.eta0.powf(model.modes.ln() / model.ell.ln())
}

/// Gaussian state after the network, as a Wigner function.
///
/// In quadratures `β = αL` is a real linear map `S`; the environment modes of
/// the dilation enter in vacuum and contribute `I − SSᵀ` once traced out.
pub fn propagate_gaussian(state: &GaussianPQDState, l: &TransferMatrix) -> Result<GaussianPQDState> {
    let m = l.dim();
    if state.modes() != m {
        return Err(Error::InvalidDimension(format!("{}-mode state into a {m}-mode network", state.modes())));
    }
    let wigner = state.at_ordering(&OrderingVector::symmetric(m))?;
    let s = quadrature_map(l.matrix());
    let sst = &s * s.transpose();
    let cov = &s * &wigner.cov * s.transpose() + DMatrix::identity(2 * m, 2 * m) - sst;
    let cov = (&cov + cov.transpose()) * 0.5;
    let mean: DVector<f64> = &s * &wigner.mean;
    Ok(GaussianPQDState { ordering: OrderingVector::symmetric(m), mean, cov })
}
