use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{hermitian_asymmetry, standard_complex_normal, ComplexMatrix, C64, PSD_TOL};
use crate::error::{Error, Result};

/// Circularly-symmetric complex Gaussian over row vectors `z` with
/// `E[z] = mean` and `E[(z−mean)†(z−mean)] = cov`, i.e.
/// `E[conj(z_i − m_i)(z_j − m_j)] = cov_ij`.
///
/// Directions with eigenvalue in `[-PSD_TOL, PSD_TOL]` get no noise, so a
/// zero covariance is a point mass at the mean.
#[derive(Clone, Debug)]
pub struct ComplexGaussian {
    mean: Vec<C64>,
    // dim × rank, row-major
    factor: Vec<C64>,
    rank: usize,
}

impl ComplexGaussian {
    pub fn new(mean: Vec<C64>, cov: &ComplexMatrix) -> Result<Self> {
        let dim = mean.len();
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "covariance is {}x{} but mean has length {dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let scale = cov.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let asymmetry = hermitian_asymmetry(cov);
        if asymmetry > PSD_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        let herm = (cov + cov.adjoint()) * C64::from(0.5);
        let eig = herm.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        // cov = V Λ V†; with A = V√Λ, w = A g has E[w w†] = cov, and z = conj(w)
        // has the row-vector convention E[conj(z_i) z_j] = cov_ij.
        let kept: Vec<usize> = (0..dim).filter(|&k| eig.eigenvalues[k] > PSD_TOL).collect();
        let rank = kept.len();
        let mut factor = vec![C64::new(0.0, 0.0); dim * rank];
        for (c, &k) in kept.iter().enumerate() {
            let sd = eig.eigenvalues[k].sqrt();
            for i in 0..dim {
                factor[i * rank + c] = eig.eigenvectors[(i, k)].conj() * sd;
            }
        }
        Ok(Self { mean, factor, rank })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Writes one draw into `out`. `scratch` is reused noise storage.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut Vec<C64>, out: &mut [C64]) {
        out.copy_from_slice(&self.mean);
        if self.rank == 0 {
            return;
        }
        scratch.clear();
        scratch.extend((0..self.rank).map(|_| standard_complex_normal(rng)));
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.factor[i * self.rank..(i + 1) * self.rank];
            let mut acc = C64::new(0.0, 0.0);
            for (f, g) in row.iter().zip(scratch.iter()) {
                acc += f * g;
            }
            *o += acc;
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.sample_into(rng, &mut Vec::with_capacity(self.rank), &mut out);
        out
    }
}

/// One draw from the complex Gaussian with the given mean and covariance.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(mean: &[C64], cov: &ComplexMatrix, rng: &mut R) -> Result<Vec<C64>> {
    Ok(ComplexGaussian::new(mean.to_vec(), cov)?.sample(rng))
}

/// Real multivariate normal with a possibly singular covariance.
#[derive(Clone, Debug)]
pub struct RealGaussian {
    mean: Vec<f64>,
    factor: Vec<f64>,
    rank: usize,
}

impl RealGaussian {
    pub fn new(mean: Vec<f64>, cov: &DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "covariance is {}x{} but mean has length {dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let scale = cov.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let asymmetry = (cov - cov.transpose()).amax();
        if asymmetry > PSD_TOL * scale {
            return Err(Error::NotHermitian { asymmetry });
        }
        let sym = (cov + cov.transpose()) * 0.5;
        let eig = sym.symmetric_eigen();
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let kept: Vec<usize> = (0..dim).filter(|&k| eig.eigenvalues[k] > PSD_TOL).collect();
        let rank = kept.len();
        let mut factor = vec![0.0; dim * rank];
        for (c, &k) in kept.iter().enumerate() {
            let sd = eig.eigenvalues[k].sqrt();
            for i in 0..dim {
                factor[i * rank + c] = eig.eigenvectors[(i, k)] * sd;
            }
        }
        Ok(Self { mean, factor, rank })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut Vec<f64>, out: &mut [f64]) {
        out.copy_from_slice(&self.mean);
        if self.rank == 0 {
            return;
        }
        scratch.clear();
        scratch.extend((0..self.rank).map(|_| rng.sample::<f64, _>(StandardNormal)));
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.factor[i * self.rank..(i + 1) * self.rank];
            *o += row.iter().zip(scratch.iter()).map(|(f, g)| f * g).sum::<f64>();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    const N: usize = 100_000;

    #[test]
    fn zero_covariance_is_point_mass() {
        let mean = vec![C64::new(1.5, -0.5), C64::new(0.0, 2.0)];
        let z =
            sample_complex_gaussian(&mean, &ComplexMatrix::zeros(2, 2), &mut RngStream::from_seed(1).rng()).unwrap();
        assert_eq!(z, mean);
    }

    #[test]
    fn identity_covariance_second_moment() {
        let g = ComplexGaussian::new(vec![C64::new(0.0, 0.0); 2], &ComplexMatrix::identity(2, 2)).unwrap();
        let mut rng = RngStream::from_seed(2).rng();
        let samples: Vec<f64> = (0..N).map(|_| g.sample(&mut rng)[0].norm_sqr()).collect();
        let mean = samples.iter().sum::<f64>() / N as f64;
        // |z|² ~ Exp(1): variance 1
        let se = (1.0 / N as f64).sqrt();
        assert!((mean - 1.0).abs() < 5.0 * se, "{mean}");
    }

    #[test]
    fn singular_direction_is_deterministic() {
        let mut cov = ComplexMatrix::zeros(2, 2);
        cov[(0, 0)] = C64::from(1.0);
        let mean = vec![C64::new(0.0, 0.0), C64::new(0.25, -1.0)];
        let g = ComplexGaussian::new(mean.clone(), &cov).unwrap();
        let mut rng = RngStream::from_seed(3).rng();
        let mut sum_sq = 0.0;
        for _ in 0..N {
            let z = g.sample(&mut rng);
            assert_eq!(z[1], mean[1]);
            sum_sq += z[0].re * z[0].re;
        }
        let var = sum_sq / N as f64;
        // Re z ~ N(0, 1/2): Var of x² is 2σ⁴ = 0.5
        let se = (0.5 / N as f64).sqrt();
        assert!((var - 0.5).abs() < 5.0 * se, "{var}");
    }

    #[test]
    fn complex_off_diagonal_covariance() {
        // E[conj(z_0) z_1] must equal cov[(0,1)], not its conjugate.
        let mut cov = ComplexMatrix::identity(2, 2);
        cov[(0, 1)] = C64::new(0.3, 0.5);
        cov[(1, 0)] = C64::new(0.3, -0.5);
        let g = ComplexGaussian::new(vec![C64::new(0.0, 0.0); 2], &cov).unwrap();
        let mut rng = RngStream::from_seed(4).rng();
        let mut acc = C64::new(0.0, 0.0);
        for _ in 0..N {
            let z = g.sample(&mut rng);
            acc += z[0].conj() * z[1];
        }
        acc /= N as f64;
        // each component of conj(z0) z1 has variance ≤ |E|z0|²E|z1|²| /2 ≈ 0.5
        let se = (0.5 / N as f64).sqrt();
        assert!((acc.re - 0.3).abs() < 5.0 * se, "{acc}");
        assert!((acc.im - 0.5).abs() < 5.0 * se, "{acc}");
    }

    #[test]
    fn empirical_covariance_matches() {
        let mut cov = ComplexMatrix::zeros(3, 3);
        let a = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.2));
        cov += &a * a.adjoint();
        let g = ComplexGaussian::new(vec![C64::new(0.0, 0.0); 3], &cov).unwrap();
        let mut rng = RngStream::from_seed(5).rng();
        let mut emp = ComplexMatrix::zeros(3, 3);
        for _ in 0..N {
            let z = g.sample(&mut rng);
            for i in 0..3 {
                for j in 0..3 {
                    emp[(i, j)] += z[i].conj() * z[j];
                }
            }
        }
        emp /= C64::from(N as f64);
        for i in 0..3 {
            for j in 0..3 {
                let se = (cov[(i, i)].re * cov[(j, j)].re / N as f64).sqrt();
                assert!((emp[(i, j)] - cov[(i, j)]).norm() < 5.0 * se, "({i},{j})");
            }
        }
    }

    #[test]
    fn not_psd_rejected() {
        let mut cov = ComplexMatrix::identity(2, 2);
        cov[(1, 1)] = C64::from(-1e-6);
        assert!(matches!(ComplexGaussian::new(vec![C64::new(0.0, 0.0); 2], &cov), Err(Error::NotPsd { .. })));
        // roundoff-level negativity is clamped
        cov[(1, 1)] = C64::from(-1e-12);
        assert_eq!(ComplexGaussian::new(vec![C64::new(0.0, 0.0); 2], &cov).unwrap().rank(), 1);
    }

    #[test]
    fn real_gaussian_moments() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.6, 0.6, 1.0]);
        let g = RealGaussian::new(vec![1.0, -1.0], &cov).unwrap();
        let mut rng = RngStream::from_seed(6).rng();
        let (mut s0, mut s01) = (0.0, 0.0);
        let mut out = [0.0; 2];
        let mut scratch = Vec::new();
        for _ in 0..N {
            g.sample_into(&mut rng, &mut scratch, &mut out);
            s0 += out[0];
            s01 += (out[0] - 1.0) * (out[1] + 1.0);
        }
        assert!((s0 / N as f64 - 1.0).abs() < 5.0 * (2.0 / N as f64).sqrt());
        let se = ((2.0 * 1.0 + 0.36) / N as f64).sqrt();
        assert!((s01 / N as f64 - 0.6).abs() < 5.0 * se);
    }
}
