//! Input states, their `t`-ordered quasiprobability distributions (PQDs) and
//! samplers for the phase-space amplitudes they describe.
//!
//! # Conventions
//!
//! Quadratures are interleaved per mode as `(x₁, p₁, x₂, p₂, …)` with the
//! vacuum Wigner covariance equal to the identity and `α = (x + ip)/2`. The
//! vacuum Wigner function is then `(2/π)·exp(−2|α|²)`, and a Gaussian state
//! with Wigner covariance `σ` has `t`-ordered covariance `σ − t·I`. The
//! largest `t` at which a Gaussian PQD is still a probability density is
//! therefore `λ_min(σ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{real_symmetric_eigenvalues, standard_complex_normal, RealGaussian, C64};

/// Slack when comparing an ordering parameter against its bound.
pub const ORDERING_TOL: f64 = 1e-12;

/// Per-port input source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceModel {
    Vacuum,
    /// `(1−μη_B)|0⟩⟨0| + μη_B|1⟩⟨1|`: an impure photon with purity `mu`,
    /// mode-matched into the network with transmissivity `eta_b`.
    MixedSinglePhoton {
        mu: f64,
        eta_b: f64,
    },
    Coherent {
        amplitude: C64,
    },
    Thermal {
        mean_photons: f64,
    },
    /// Two-mode squeezed vacuum with squeezing `r` whose signal arm has passed
    /// a beamsplitter of transmission `eta`. Occupies a herald and a signal port.
    SpdcPair {
        r: f64,
        eta: f64,
    },
}

impl SourceModel {
    pub fn kind(&self) -> &'static str {
        match self {
            SourceModel::Vacuum => "vacuum",
            SourceModel::MixedSinglePhoton { .. } => "single_photon",
            SourceModel::Coherent { .. } => "coherent",
            SourceModel::Thermal { .. } => "thermal",
            SourceModel::SpdcPair { .. } => "spdc",
        }
    }

    pub fn port_count(&self) -> usize {
        match self {
            SourceModel::SpdcPair { .. } => 2,
            _ => 1,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        !matches!(self, SourceModel::MixedSinglePhoton { .. })
    }

    /// Photon probability `η̄ = μη_B` of a mixed single-photon source; 0 otherwise.
    pub fn eta_bar(&self) -> f64 {
        match *self {
            SourceModel::MixedSinglePhoton { mu, eta_b } => mu * eta_b,
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |field: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(field, format!("{v} is outside [0, 1]")))
            }
        };
        match *self {
            SourceModel::Vacuum => Ok(()),
            SourceModel::MixedSinglePhoton { mu, eta_b } => {
                unit("mu", mu)?;
                unit("eta_b", eta_b)
            }
            SourceModel::Coherent { amplitude } => {
                if amplitude.re.is_finite() && amplitude.im.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("amplitude", "must be finite"))
                }
            }
            SourceModel::Thermal { mean_photons } => {
                if mean_photons >= 0.0 && mean_photons.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config("mean_photons", format!("{mean_photons} must be >= 0")))
                }
            }
            SourceModel::SpdcPair { r, eta } => {
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(Error::config("r", format!("{r} must be >= 0")));
                }
                unit("eta", eta)
            }
        }
    }
}

/// Largest input ordering at which the source's PQD is nonnegative and no
/// more singular than a δ function. Pairs share one value over both ports.
pub fn t_bar(source: &SourceModel) -> f64 {
    match *source {
        SourceModel::Vacuum | SourceModel::Coherent { .. } | SourceModel::Thermal { .. } => 1.0,
        SourceModel::MixedSinglePhoton { mu, eta_b } => 1.0 - 2.0 * mu * eta_b,
        SourceModel::SpdcPair { r, eta } => spdc_t_bar(r, eta),
    }
}

/// Closed-form smallest eigenvalue of the lossy two-mode squeezed vacuum's
/// Wigner covariance.
pub fn spdc_t_bar(r: f64, eta: f64) -> f64 {
    let sh = r.sinh();
    let sh2 = sh * sh;
    1.0 + (1.0 + eta) * sh2 - sh * ((1.0 + eta).powi(2) * sh2 + 4.0 * eta).sqrt()
}

/// `t`-ordered PQD of `(1−η̄)|0⟩⟨0| + η̄|1⟩⟨1|` at phase-space point `alpha`.
pub fn pqd_single_photon_mixture(alpha: C64, t: f64, eta_bar: f64) -> Result<f64> {
    if t >= 1.0 {
        return Err(Error::SingularOrdering { ordering: t });
    }
    let a = 1.0 - t;
    let r2 = alpha.norm_sqr();
    Ok(2.0 / PI * (a * (a - 2.0 * eta_bar) + 4.0 * eta_bar * r2) * (-2.0 * r2 / a).exp() / (a * a * a))
}

/// Per-mode ordering parameters (the diagonal of `s` or `t`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrderingVector(Vec<f64>);

impl OrderingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() || v > 1.0 + ORDERING_TOL {
                return Err(Error::config(format!("ordering[{k}]"), format!("{v} must be finite and <= 1")));
            }
        }
        Ok(Self(values))
    }

    pub fn uniform(modes: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; modes])
    }

    /// `s = t = 1`: P function in, Q function out.
    pub fn normal(modes: usize) -> Self {
        Self(vec![1.0; modes])
    }

    /// `s = t = 0`: Wigner functions throughout.
    pub fn symmetric(modes: usize) -> Self {
        Self(vec![0.0; modes])
    }

    /// `s = t = −1`, the preset for classical (heterodyne-type) measurements.
    pub fn antinormal(modes: usize) -> Self {
        Self(vec![-1.0; modes])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for OrderingVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Gaussian PQD at a stated ordering: real mean of length `2K` and
/// covariance `2K × 2K`, interleaved `(x, p)` per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianPQDState {
    pub ordering: OrderingVector,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianPQDState {
    pub fn modes(&self) -> usize {
        self.ordering.len()
    }

    /// Same state described at another ordering: `cov − diag(t − t₀)`.
    pub fn at_ordering(&self, t: &OrderingVector) -> Result<GaussianPQDState> {
        if t.len() != self.modes() {
            return Err(Error::InvalidDimension(format!("ordering has {} modes, state has {}", t.len(), self.modes())));
        }
        let mut cov = self.cov.clone();
        for k in 0..self.modes() {
            let shift = t[k] - self.ordering[k];
            cov[(2 * k, 2 * k)] -= shift;
            cov[(2 * k + 1, 2 * k + 1)] -= shift;
        }
        Ok(GaussianPQDState { ordering: t.clone(), mean: self.mean.clone(), cov })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        real_symmetric_eigenvalues(&self.cov).first().copied().unwrap_or(f64::INFINITY)
    }

    /// Complex amplitude `(x + ip)/2` of the mean in mode `k`.
    pub fn mean_amplitude(&self, k: usize) -> C64 {
        C64::new(self.mean[2 * k], self.mean[2 * k + 1]) / 2.0
    }
}

/// Wigner covariance of a two-mode squeezed vacuum `(herald, signal)` whose
/// signal passed a beamsplitter of transmission `eta`.
pub fn spdc_covariance(r: f64, eta: f64) -> GaussianPQDState {
    let c = (2.0 * r).cosh();
    let s = eta.sqrt() * (2.0 * r).sinh();
    let d = 1.0 + eta * (c - 1.0);
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c,   0.0, s,   0.0,
        0.0, c,   0.0, -s,
        s,   0.0, d,   0.0,
        0.0, -s,  0.0, d,
    ]);
    GaussianPQDState { ordering: OrderingVector::symmetric(2), mean: DVector::zeros(4), cov }
}

/// A source bound to concrete ports. Pairs list `[herald, signal]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedSource {
    pub source: SourceModel,
    pub ports: Vec<usize>,
}

impl PlacedSource {
    pub fn single(port: usize, source: SourceModel) -> Self {
        Self { source, ports: vec![port] }
    }

    pub fn pair(herald: usize, signal: usize, r: f64, eta: f64) -> Self {
        Self { source: SourceModel::SpdcPair { r, eta }, ports: vec![herald, signal] }
    }
}

/// Product input state over `modes` ports. Every port is covered exactly once;
/// ports not named at construction hold vacuum.
#[derive(Clone, Debug, PartialEq)]
pub struct InputState {
    modes: usize,
    sources: Vec<PlacedSource>,
}

impl InputState {
    pub fn new(modes: usize, placed: Vec<PlacedSource>) -> Result<Self> {
        let mut covered = vec![false; modes];
        for p in &placed {
            p.source.validate()?;
            if p.ports.len() != p.source.port_count() {
                return Err(Error::config(
                    "sources",
                    format!("{} source needs {} port(s)", p.source.kind(), p.source.port_count()),
                ));
            }
            for &port in &p.ports {
                if port >= modes {
                    return Err(Error::config("sources", format!("port {port} out of range for {modes} modes")));
                }
                if covered[port] {
                    return Err(Error::config("sources", format!("port {port} is assigned twice")));
                }
                covered[port] = true;
            }
        }
        let mut sources = placed;
        for (port, _) in covered.iter().enumerate().filter(|(_, c)| !**c) {
            sources.push(PlacedSource::single(port, SourceModel::Vacuum));
        }
        sources.sort_by_key(|p| p.ports[0]);
        Ok(Self { modes, sources })
    }

    /// One single-port source per mode, in port order.
    pub fn per_port(sources: impl IntoIterator<Item = SourceModel>) -> Result<Self> {
        let placed: Vec<PlacedSource> =
            sources.into_iter().enumerate().map(|(k, s)| PlacedSource::single(k, s)).collect();
        Self::new(placed.len(), placed)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sources(&self) -> &[PlacedSource] {
        &self.sources
    }

    pub fn is_gaussian(&self) -> bool {
        self.sources.iter().all(|p| p.source.is_gaussian())
    }

    pub fn t_bar(&self) -> OrderingVector {
        let mut t = vec![1.0; self.modes];
        for p in &self.sources {
            let value = t_bar(&p.source);
            for &port in &p.ports {
                t[port] = value;
            }
        }
        OrderingVector(t)
    }

    /// Wigner-function (`t = 0`) description of a Gaussian input.
    pub fn wigner(&self) -> Result<GaussianPQDState> {
        let n = self.modes;
        let mut mean = DVector::zeros(2 * n);
        let mut cov = DMatrix::identity(2 * n, 2 * n);
        for p in &self.sources {
            match p.source {
                SourceModel::Vacuum => {}
                SourceModel::Coherent { amplitude } => {
                    let k = p.ports[0];
                    mean[2 * k] = 2.0 * amplitude.re;
                    mean[2 * k + 1] = 2.0 * amplitude.im;
                }
                SourceModel::Thermal { mean_photons } => {
                    let k = p.ports[0];
                    cov[(2 * k, 2 * k)] = 2.0 * mean_photons + 1.0;
                    cov[(2 * k + 1, 2 * k + 1)] = 2.0 * mean_photons + 1.0;
                }
                SourceModel::SpdcPair { r, eta } => {
                    let block = spdc_covariance(r, eta).cov;
                    let idx = [2 * p.ports[0], 2 * p.ports[0] + 1, 2 * p.ports[1], 2 * p.ports[1] + 1];
                    for (a, &i) in idx.iter().enumerate() {
                        for (b, &j) in idx.iter().enumerate() {
                            cov[(i, j)] = block[(a, b)];
                        }
                    }
                }
                SourceModel::MixedSinglePhoton { .. } => {
                    return Err(Error::UnsupportedSource { port: p.ports[0], kind: p.source.kind() })
                }
            }
        }
        Ok(GaussianPQDState { ordering: OrderingVector::symmetric(n), mean, cov })
    }
}

#[derive(Clone, Debug)]
enum SourceSampler {
    Fixed {
        port: usize,
        value: C64,
    },
    Gaussian {
        port: usize,
        mean: C64,
        /// standard deviation scaling a unit complex normal: E|α−mean|² = sd²
        sd: f64,
    },
    Photon {
        port: usize,
        /// probability of the `|α|²·exp(−2|α|²/a)` component
        w1: f64,
        a: f64,
    },
    Pair {
        herald: usize,
        signal: usize,
        quadratures: RealGaussian,
    },
}

/// Draws input amplitudes `α` from a product of per-source `t`-PQDs.
#[derive(Clone, Debug)]
pub struct InputSampler {
    modes: usize,
    samplers: Vec<SourceSampler>,
}

impl InputSampler {
    pub fn new(input: &InputState, t: &OrderingVector) -> Result<Self> {
        if t.len() != input.modes() {
            return Err(Error::InvalidDimension(format!(
                "ordering has {} modes, input has {}",
                t.len(),
                input.modes()
            )));
        }
        let mut samplers = Vec::with_capacity(input.sources().len());
        for p in input.sources() {
            let bound = t_bar(&p.source);
            for &port in &p.ports {
                if t[port] > bound + ORDERING_TOL {
                    return Err(Error::Negativity { mode: port, what: "input", ordering: t[port], bound });
                }
            }
            let port = p.ports[0];
            let a = 1.0 - t[port];
            let sampler = match p.source {
                SourceModel::Vacuum => gaussian_or_fixed(port, C64::new(0.0, 0.0), a / 2.0),
                SourceModel::Coherent { amplitude } => gaussian_or_fixed(port, amplitude, a / 2.0),
                SourceModel::Thermal { mean_photons } => {
                    gaussian_or_fixed(port, C64::new(0.0, 0.0), mean_photons + a / 2.0)
                }
                SourceModel::MixedSinglePhoton { .. } => {
                    let eta_bar = p.source.eta_bar();
                    if a <= 0.0 {
                        // only reachable with η̄ = 0: the P function of vacuum
                        SourceSampler::Fixed { port, value: C64::new(0.0, 0.0) }
                    } else {
                        SourceSampler::Photon { port, w1: (2.0 * eta_bar / a).min(1.0), a }
                    }
                }
                SourceModel::SpdcPair { r, eta } => {
                    let state =
                        spdc_covariance(r, eta).at_ordering(&OrderingVector(vec![t[p.ports[0]], t[p.ports[1]]]))?;
                    SourceSampler::Pair {
                        herald: p.ports[0],
                        signal: p.ports[1],
                        quadratures: RealGaussian::new(vec![0.0; 4], &state.cov)?,
                    }
                }
            };
            samplers.push(sampler);
        }
        Ok(Self { modes: input.modes(), samplers })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut Vec<f64>, out: &mut [C64]) {
        for s in &self.samplers {
            match s {
                SourceSampler::Fixed { port, value } => out[*port] = *value,
                SourceSampler::Gaussian { port, mean, sd } => {
                    out[*port] = mean + standard_complex_normal(rng) * *sd;
                }
                SourceSampler::Photon { port, w1, a } => {
                    out[*port] = if rng.random::<f64>() < *w1 {
                        // |α|² ~ Gamma(2, a/2), uniform phase
                        let u1: f64 = 1.0 - rng.random::<f64>();
                        let u2: f64 = 1.0 - rng.random::<f64>();
                        let r2 = -(a / 2.0) * (u1.ln() + u2.ln());
                        let phase = 2.0 * PI * rng.random::<f64>();
                        C64::from_polar(r2.sqrt(), phase)
                    } else {
                        standard_complex_normal(rng) * (a / 2.0).sqrt()
                    };
                }
                SourceSampler::Pair { herald, signal, quadratures } => {
                    let mut q = [0.0; 4];
                    quadratures.sample_into(rng, scratch, &mut q);
                    out[*herald] = C64::new(q[0], q[1]) / 2.0;
                    out[*signal] = C64::new(q[2], q[3]) / 2.0;
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.modes];
        self.sample_into(rng, &mut Vec::new(), &mut out);
        out
    }
}

fn gaussian_or_fixed(port: usize, mean: C64, var: f64) -> SourceSampler {
    if var > 0.0 {
        SourceSampler::Gaussian { port, mean, sd: var.sqrt() }
    } else {
        SourceSampler::Fixed { port, value: mean }
    }
}

/// One draw of input amplitudes from the product `t`-PQD.
pub fn sample_input_pqd<R: Rng + ?Sized>(input: &InputState, t: &OrderingVector, rng: &mut R) -> Result<Vec<C64>> {
    Ok(InputSampler::new(input, t)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    /// ∫ f(|α|²) d²α over |α| ≤ R by composite Simpson in ρ = |α|.
    fn radial_quadrature(f: impl Fn(f64) -> f64, radius: f64) -> f64 {
        let n = 20_000;
        let h = radius / n as f64;
        let g = |rho: f64| 2.0 * PI * rho * f(rho * rho);
        let mut acc = g(0.0) + g(radius);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * g(i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn single_photon_pqd_spot_values() {
        let z = C64::new(0.0, 0.0);
        assert_abs_diff_eq!(pqd_single_photon_mixture(z, 0.0, 0.0).unwrap(), 2.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(pqd_single_photon_mixture(z, 0.0, 1.0).unwrap(), -2.0 / PI, epsilon = 1e-15);
        // η̄ = 0.5 at its bound t̄ = 0: zero only at the origin
        assert_abs_diff_eq!(pqd_single_photon_mixture(z, 0.0, 0.5).unwrap(), 0.0, epsilon = 1e-15);
        assert!(pqd_single_photon_mixture(C64::new(0.5, 0.0), 0.0, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn single_photon_pqd_rejects_singular_ordering() {
        assert!(matches!(pqd_single_photon_mixture(C64::new(0.0, 0.0), 1.0, 0.1), Err(Error::SingularOrdering { .. })));
    }

    #[test]
    fn single_photon_pqd_is_normalized() {
        for &eta_bar in &[0.0, 0.05, 0.5] {
            for &t in &[-1.0, 0.0, 0.5] {
                let a: f64 = 1.0 - t;
                let total = radial_quadrature(
                    |r2| pqd_single_photon_mixture(C64::new(r2.sqrt(), 0.0), t, eta_bar).unwrap(),
                    8.0 * a.sqrt(),
                );
                assert!((total - 1.0).abs() < 1e-6, "η̄={eta_bar} t={t}: {total}");
            }
        }
    }

    #[test]
    fn single_photon_nonnegativity_boundary() {
        let grid_min = |t: f64, eta_bar: f64| {
            (0..1000)
                .map(|i| {
                    let r2 = 10.0 * i as f64 / 999.0;
                    pqd_single_photon_mixture(C64::new(r2.sqrt(), 0.0), t, eta_bar).unwrap()
                })
                .fold(f64::INFINITY, f64::min)
        };
        for &eta_bar in &[0.05, 0.2, 0.5, 0.9] {
            let bound = 1.0 - 2.0 * eta_bar;
            assert!(grid_min(bound - 0.01, eta_bar) >= 0.0);
            assert!(grid_min(bound + 0.01, eta_bar) < 0.0);
        }
    }

    #[test]
    fn t_bar_values() {
        let sp = SourceModel::MixedSinglePhoton { mu: 0.5, eta_b: 0.1 };
        assert_abs_diff_eq!(t_bar(&sp), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(t_bar(&SourceModel::SpdcPair { r: 1.3, eta: 0.0 }), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t_bar(&SourceModel::SpdcPair { r: 0.0, eta: 0.5 }), 1.0, epsilon = 1e-15);
        assert_eq!(t_bar(&SourceModel::Thermal { mean_photons: 2.0 }), 1.0);
    }

    #[test]
    fn t_bar_monotonicity() {
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let eta_bar = i as f64 / 20.0;
            let t = t_bar(&SourceModel::MixedSinglePhoton { mu: 1.0, eta_b: eta_bar });
            assert!(t < prev);
            prev = t;
        }
        for &eta in &[0.05, 0.3, 1.0] {
            let mut prev = f64::INFINITY;
            for i in 0..=20 {
                let t = spdc_t_bar(0.1 * i as f64, eta);
                assert!(t < prev || i == 0);
                prev = t;
            }
        }
    }

    #[test]
    fn spdc_covariance_special_cases() {
        assert_eq!(spdc_covariance(0.0, 0.7).cov, DMatrix::identity(4, 4));
        let s = spdc_covariance(1.0, 1.0).cov;
        assert_abs_diff_eq!(s[(0, 0)], 3.762_195_691_083_631, epsilon = 1e-12);
        assert_abs_diff_eq!(s[(2, 2)], s[(0, 0)], epsilon = 1e-12);
        assert_abs_diff_eq!(s[(0, 2)], 2.0f64.sinh(), epsilon = 1e-12);
        assert_abs_diff_eq!(s[(1, 3)], -(2.0f64.sinh()), epsilon = 1e-12);
    }

    #[test]
    fn spdc_t_bar_is_min_eigenvalue() {
        for i in 0..20 {
            for j in 0..20 {
                let r = 2.0 * i as f64 / 19.0;
                let eta = j as f64 / 19.0;
                let lam = spdc_covariance(r, eta).min_eigenvalue();
                assert!((lam - spdc_t_bar(r, eta)).abs() <= 1e-12, "r={r} η={eta}");
            }
        }
    }

    #[test]
    fn input_state_fills_vacuum_and_rejects_overlap() {
        let s = InputState::new(3, vec![PlacedSource::single(1, SourceModel::Thermal { mean_photons: 1.0 })]).unwrap();
        assert_eq!(s.sources().len(), 3);
        assert_eq!(s.sources()[0].source, SourceModel::Vacuum);
        let err =
            InputState::new(2, vec![PlacedSource::single(1, SourceModel::Vacuum), PlacedSource::pair(0, 1, 0.3, 1.0)]);
        assert!(err.is_err());
    }

    #[test]
    fn vacuum_wigner_sampling() {
        let input = InputState::per_port([SourceModel::Vacuum; 2]).unwrap();
        let sampler = InputSampler::new(&input, &OrderingVector::symmetric(2)).unwrap();
        let mut rng = RngStream::from_seed(1).rng();
        let n = 100_000;
        let mean = (0..n).map(|_| sampler.sample(&mut rng)[1].norm_sqr()).sum::<f64>() / n as f64;
        // |α|² ~ Exp(mean 1/2)
        assert!((mean - 0.5).abs() < 5.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn coherent_p_function_is_a_delta() {
        let input = InputState::per_port([SourceModel::Coherent { amplitude: C64::new(2.0, 0.0) }]).unwrap();
        let alpha = sample_input_pqd(&input, &OrderingVector::normal(1), &mut RngStream::from_seed(1).rng()).unwrap();
        assert_eq!(alpha[0], C64::new(2.0, 0.0));
    }

    #[test]
    fn ordering_above_bound_names_the_mode() {
        let input = InputState::per_port([SourceModel::Vacuum, SourceModel::MixedSinglePhoton { mu: 1.0, eta_b: 0.5 }])
            .unwrap();
        let err =
            sample_input_pqd(&input, &OrderingVector::uniform(2, 0.5).unwrap(), &mut RngStream::from_seed(1).rng())
                .unwrap_err();
        assert!(matches!(err, Error::Negativity { mode: 1, .. }), "{err}");
    }

    #[test]
    fn single_photon_first_moment_by_quadrature() {
        // oracle: ∫|α|² W d²α by quadrature, compared with the closed form (1−t)/2 + η̄
        let (t, eta_bar): (f64, f64) = (0.9, 0.05);
        let m = radial_quadrature(
            |r2| r2 * pqd_single_photon_mixture(C64::new(r2.sqrt(), 0.0), t, eta_bar).unwrap(),
            8.0 * (1.0f64 - t).sqrt(),
        );
        assert_abs_diff_eq!(m, 0.1, epsilon = 1e-9);
    }
}
