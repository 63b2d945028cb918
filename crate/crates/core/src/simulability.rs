//! When can an experiment be sampled with nonnegative quasiprobabilities?
//!
//! The second sufficient condition needs a nonnegative input `t`-PQD, a
//! nonnegative output `(−s)`-PQD for every detector outcome, and a proper
//! Gaussian transition function. Taking the extreme orderings `t = t̄` and
//! `s = s̄` is both necessary and sufficient, so the whole question reduces to
//! the sign of
//!
//! ```text
//! Σ̄ = I − L†L − diag(s̄) + L†·diag(t̄)·L
//! ```
//!
//! For all-Gaussian inputs the first condition (sample the output PQD
//! directly) is also evaluated; it is never looser than the second.

use serde::{Deserialize, Serialize};

use crate::config::{Experiment, Scheme};
use crate::detectors::{s_bar, DetectorModel};
use crate::error::{Error, Result};
use crate::linalg::{real_symmetric_eigenvalues, TransferMatrix, C64, PSD_TOL};
use crate::processes::{propagate_gaussian, sigma_matrix};
use crate::states::{InputState, OrderingVector, PlacedSource, SourceModel};

/// Relative slack when deciding that a network's loss is referable to its inputs.
const REFERRAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderingPair {
    pub s: OrderingVector,
    pub t: OrderingVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstCondition {
    /// `λ_min(σ_out − diag(s̄))` over the output quadrature covariance.
    pub min_eigenvalue: f64,
    pub feasible: bool,
    pub threshold_p_d: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulabilityReport {
    pub scheme: Scheme,
    pub modes: usize,
    pub t_bar: OrderingVector,
    pub s_bar: OrderingVector,
    /// Ascending eigenvalues of `Σ̄`.
    pub sigma_bar_eigenvalues: Vec<f64>,
    /// `λ_min(Σ̄) ≥ −1e-10`: the second condition holds.
    pub simulatable: bool,
    /// Working orderings `(s̄, t̄)` when simulatable.
    pub ordering: Option<OrderingPair>,
    /// Smallest common `p_D` at which `Σ̄ ⪰ 0`, for identical detectors.
    pub threshold_p_d: Option<f64>,
    /// Common effective `p_D` of identical detectors.
    pub p_d: Option<f64>,
    /// `p_d − threshold_p_d`.
    pub margin: Option<f64>,
    /// Closed-form scalar threshold for the scheme, where one applies.
    pub closed_form_threshold_p_d: Option<f64>,
    /// Network loss was moved onto the sources before forming `Σ̄`.
    pub loss_referred_to_input: bool,
    pub first_condition: Option<FirstCondition>,
    pub mismatch_p_d: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

impl SimulabilityReport {
    pub fn min_sigma_eigenvalue(&self) -> f64 {
        self.sigma_bar_eigenvalues[0]
    }

    /// Whether some sampling route (second condition, or first for Gaussian
    /// inputs) is available.
    pub fn any_condition_holds(&self) -> bool {
        self.simulatable || self.first_condition.as_ref().is_some_and(|f| f.feasible)
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} modes ({:?} layout): {}\n  min eigenvalue of Σ̄: {:.6e}\n",
            self.modes,
            self.scheme,
            if self.simulatable { "SIMULATABLE (second condition)" } else { "NOT simulatable by the second condition" },
            self.min_sigma_eigenvalue(),
        );
        if let (Some(p), Some(th)) = (self.p_d, self.threshold_p_d) {
            out += &format!("  p_D = {p:.6}, threshold p_D = {th:.6}, margin = {:+.6}\n", p - th);
        }
        if let Some(f) = &self.first_condition {
            out += &format!(
                "  first condition: {} (min eigenvalue {:.6e}",
                if f.feasible { "holds" } else { "fails" },
                f.min_eigenvalue
            );
            if let Some(th) = f.threshold_p_d {
                out += &format!(", threshold p_D = {th:.6}");
            }
            out += ")\n";
        }
        for n in &self.notes {
            out += &format!("  note: {n}\n");
        }
        out
    }
}

/// Input, network and orderings entering the second-condition sampler.
#[derive(Clone, Debug)]
pub struct SecondConditionSetup {
    pub input: InputState,
    pub network: TransferMatrix,
    pub s: OrderingVector,
    pub t: OrderingVector,
    pub loss_referred: bool,
}

/// If `LL†` is diagonal, `L = diag(√c)·U` with `U` unitary and the loss can
/// be placed on the sources instead. Returns `None` when that is impossible
/// or changes nothing.
pub fn refer_loss_to_input(input: &InputState, network: &TransferMatrix) -> Option<(InputState, TransferMatrix)> {
    let l = network.matrix();
    let m = l.nrows();
    let g = l * l.adjoint();
    let c: Vec<f64> = (0..m).map(|i| g[(i, i)].re).collect();
    for i in 0..m {
        for j in 0..m {
            if i != j && g[(i, j)].norm() > REFERRAL_TOL {
                return None;
            }
        }
    }
    if c.iter().all(|&x| (x - 1.0).abs() <= REFERRAL_TOL) || c.iter().any(|&x| x < 1e-12) {
        return None;
    }
    let mut placed = Vec::with_capacity(input.sources().len());
    for p in input.sources() {
        let ci = c[p.ports[0]];
        let source = match p.source {
            SourceModel::Vacuum => SourceModel::Vacuum,
            SourceModel::MixedSinglePhoton { mu, eta_b } => SourceModel::MixedSinglePhoton { mu, eta_b: eta_b * ci },
            SourceModel::Coherent { amplitude } => SourceModel::Coherent { amplitude: amplitude * ci.sqrt() },
            SourceModel::Thermal { mean_photons } => SourceModel::Thermal { mean_photons: mean_photons * ci },
            SourceModel::SpdcPair { r, eta } => {
                // only the signal arm of a pair may carry loss
                if (ci - 1.0).abs() > REFERRAL_TOL {
                    return None;
                }
                SourceModel::SpdcPair { r, eta: (eta * c[p.ports[1]]).min(1.0) }
            }
        };
        placed.push(PlacedSource { source, ports: p.ports.clone() });
    }
    let referred = InputState::new(m, placed).ok()?;
    let mut u = l.clone();
    for i in 0..m {
        let scale = C64::from(1.0 / c[i].sqrt());
        for k in 0..m {
            u[(i, k)] *= scale;
        }
    }
    Some((referred, TransferMatrix::new(u).ok()?))
}

fn s_bar_vector(dets: &[DetectorModel]) -> Result<OrderingVector> {
    OrderingVector::new(dets.iter().map(s_bar).collect::<Result<Vec<_>>>()?)
}

/// Shared `(η_D, p_D)` if every detector is identical.
fn common_detector(dets: &[DetectorModel]) -> Option<DetectorModel> {
    let first = *dets.first()?;
    dets.iter().all(|d| *d == first).then_some(first)
}

pub fn second_condition_setup(exp: &Experiment) -> Result<SecondConditionSetup> {
    let s = s_bar_vector(&exp.detectors)?;
    let (input, network, loss_referred) = match refer_loss_to_input(&exp.input, &exp.network) {
        Some((input, network)) => (input, network, true),
        None => (exp.input.clone(), exp.network.clone(), false),
    };
    let t = input.t_bar();
    Ok(SecondConditionSetup { input, network, s, t, loss_referred })
}

/// Output Wigner covariance for an all-Gaussian input.
pub(crate) fn gaussian_output(exp: &Experiment) -> Result<crate::states::GaussianPQDState> {
    propagate_gaussian(&exp.input.wigner()?, &exp.network)
}

fn first_condition(exp: &Experiment, s: &OrderingVector) -> Result<Option<FirstCondition>> {
    if !exp.input.is_gaussian() {
        return Ok(None);
    }
    let out = gaussian_output(exp)?;
    let shifted = out.at_ordering(s)?;
    let min = shifted.min_eigenvalue();
    let threshold = common_detector(&exp.detectors).map(|d| {
        let lam = real_symmetric_eigenvalues(&out.cov)[0];
        (d.eta_d * (1.0 - lam) / 2.0).max(0.0)
    });
    Ok(Some(FirstCondition { min_eigenvalue: min, feasible: min >= -PSD_TOL, threshold_p_d: threshold }))
}

/// Closed-form threshold of the scheme when all photon sources are identical.
fn closed_form_threshold(exp: &Experiment, det: &DetectorModel) -> Option<f64> {
    let eta_l = exp.uniform_loss_eta?;
    let mut models = exp.input.sources().iter().map(|p| p.source).filter(|s| *s != SourceModel::Vacuum);
    let first = models.next()?;
    if models.any(|s| s != first) {
        return None;
    }
    match (exp.scheme, first) {
        (Scheme::SinglePhoton, SourceModel::MixedSinglePhoton { mu, eta_b }) => {
            Some(threshold_single_photon(mu, eta_b, eta_l, det.eta_d))
        }
        (Scheme::Spdc, SourceModel::SpdcPair { r, eta }) => Some(threshold_spdc(r, eta, eta_l, det.eta_d)),
        _ => None,
    }
}

/// Evaluates the second sufficient condition at `(s̄, t̄)`.
pub fn check_second_condition(exp: &Experiment) -> Result<SimulabilityReport> {
    let setup = second_condition_setup(exp)?;
    let sigma = sigma_matrix(&setup.network, &setup.s, &setup.t)?;
    let eigenvalues = sigma.eigenvalues();
    let simulatable = eigenvalues[0] >= -PSD_TOL;

    let common = common_detector(&exp.detectors);
    let threshold_p_d = match common {
        Some(d) => {
            // Σ̄ = A − s̄·I, so Σ̄ ⪰ 0 iff s̄ ≤ λ_min(A) iff p_D ≥ η_D(1 − λ_min(A))/2
            let a = sigma_matrix(&setup.network, &OrderingVector::symmetric(exp.modes()), &setup.t)?;
            Some((d.eta_d * (1.0 - a.min_eigenvalue()) / 2.0).max(0.0))
        }
        None => None,
    };
    let p_d = common.map(|d| d.p_d);
    let margin = match (p_d, threshold_p_d) {
        (Some(p), Some(th)) => Some(p - th),
        _ => None,
    };

    let mut notes = Vec::new();
    if setup.loss_referred {
        notes.push("network loss referred to the sources; Σ̄ uses the remaining unitary".to_string());
    } else if !exp.network.is_unitary(REFERRAL_TOL) {
        notes.push("network loss is not uniform across inputs; Σ̄ uses the lossy transfer matrix directly".to_string());
    }
    let closed_form = common.and_then(|d| closed_form_threshold(exp, &d));
    if closed_form.is_some() && exp.config.mismatch.is_some() {
        notes.push("p_D includes mode-mismatch random counts".to_string());
    }
    if common.is_none() {
        notes.push("detectors differ; no scalar p_D threshold".to_string());
    }

    Ok(SimulabilityReport {
        scheme: exp.scheme,
        modes: exp.modes(),
        t_bar: setup.t.clone(),
        s_bar: setup.s.clone(),
        sigma_bar_eigenvalues: eigenvalues,
        simulatable,
        ordering: simulatable.then(|| OrderingPair { s: setup.s.clone(), t: setup.t.clone() }),
        threshold_p_d,
        p_d,
        margin,
        closed_form_threshold_p_d: closed_form,
        loss_referred_to_input: setup.loss_referred,
        first_condition: first_condition(exp, &setup.s)?,
        mismatch_p_d: exp.mismatch_p_d.clone(),
        notes,
    })
}

/// `μ·η_B·η_L·η_D`: the random-count probability above which single-photon
/// boson sampling with uniform loss is classically simulable.
pub fn threshold_single_photon(mu: f64, eta_b: f64, eta_l: f64, eta_d: f64) -> f64 {
    mu * eta_b * eta_l * eta_d
}

/// Random-count probability contributed by mode-mismatched photons.
#[allow(clippy::too_many_arguments)]
pub fn mode_mismatch_pd(mu: f64, eta_b: f64, eta_l: f64, eta_d: f64, f_b: f64, f_l: f64, n: f64, m: f64) -> f64 {
    eta_d * mu * n / m * (f_l * (1.0 - eta_l) * eta_b + f_b * (1.0 - eta_b))
}

/// SPDC threshold `½η_D·[sinh r·√((1+η)²sinh²r + 4η) − (1+η)sinh²r]`, `η = η_Bη_L`.
pub fn threshold_spdc(r: f64, eta_b: f64, eta_l: f64, eta_d: f64) -> f64 {
    let eta = eta_b * eta_l;
    let sh = r.sinh();
    let root = ((1.0 + eta).powi(2) * sh * sh + 4.0 * eta).sqrt();
    -0.5 * eta_d * (1.0 + eta) * sh * sh + 0.5 * eta_d * sh * root
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Mean number of photons injected.
    pub n: f64,
    /// Squeezing of each pair, for the SPDC scheme.
    pub sinh2_r: Option<f64>,
}

/// Photon number at which the expected detected photons reach about `√M`:
/// `N = min(M, √M/η)` for single photons, `sinh²r = min(1, 1/(√M·η′))` and
/// `N = M·sinh²r` for SPDC.
pub fn plan_photon_number(scheme: Scheme, m: f64, eta: f64) -> Result<OperatingPoint> {
    if m.is_nan() || m < 1.0 {
        return Err(Error::UndefinedOperatingPoint(format!("mode count {m} must be >= 1")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::UndefinedOperatingPoint(format!("transmission {eta} must be in (0, 1]")));
    }
    Ok(match scheme {
        Scheme::SinglePhoton => OperatingPoint { n: m.min(m.sqrt() / eta), sinh2_r: None },
        Scheme::Spdc => {
            let sinh2_r = (1.0 / (m.sqrt() * eta)).min(1.0);
            OperatingPoint { n: m * sinh2_r, sinh2_r: Some(sinh2_r) }
        }
    })
}
