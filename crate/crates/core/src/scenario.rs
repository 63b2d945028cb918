//! Threshold tables for uniformly lossy interferometers.
//!
//! For each mode count the scenario fixes the network transmission
//! `η_L = η₀^(log_ℓ M)`, chooses the photon number so that about `√M`
//! photons are detected, and reports the random-count threshold alongside
//! the random counts expected from mode-mismatched photons.

use serde::{Deserialize, Serialize};

use crate::config::Scheme;
use crate::error::Result;
use crate::processes::{uniform_loss_eta, LossModel};
use crate::simulability::{mode_mismatch_pd, plan_photon_number, threshold_single_photon, threshold_spdc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioParams {
    /// Single-photon source purity weight. The SPDC rows always use 1.
    pub mu: f64,
    pub eta_b: f64,
    pub eta0: f64,
    pub ell: f64,
    pub eta_d: f64,
    pub f_b: f64,
    pub f_l: f64,
    pub modes: Vec<u64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self { mu: 0.5, eta_b: 0.1, eta0: 0.98, ell: 2.0, eta_d: 0.95, f_b: 0.1, f_l: 0.9, modes: vec![10, 100, 1600] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub scheme: Scheme,
    pub modes: u64,
    pub eta_l: f64,
    /// Overall transmission `η` (single photons, includes `μ`) or `η′` (SPDC).
    pub eta: f64,
    /// `√M/η`, the photon number that would give `√M` detections.
    pub sqrt_m_over_eta: f64,
    /// Photons injected.
    pub n: f64,
    /// Expected detected photons `N·η`.
    pub n_eta: f64,
    pub sinh2_r: Option<f64>,
    pub threshold_p_d: f64,
    pub mismatch_p_d: f64,
}

fn row(params: &ScenarioParams, scheme: Scheme, m: u64) -> Result<ThresholdRow> {
    let mf = m as f64;
    let eta_l = uniform_loss_eta(&LossModel::new(params.eta0, params.ell, mf)?);
    let (mu, eta) = match scheme {
        Scheme::SinglePhoton => {
            let mu = params.mu;
            (mu, threshold_single_photon(mu, params.eta_b, eta_l, params.eta_d))
        }
        Scheme::Spdc => (1.0, params.eta_b * eta_l * params.eta_d),
    };
    let plan = plan_photon_number(scheme, mf, eta)?;
    let threshold_p_d = match plan.sinh2_r {
        None => eta,
        Some(s2) => threshold_spdc(s2.sqrt().asinh(), params.eta_b, eta_l, params.eta_d),
    };
    Ok(ThresholdRow {
        scheme,
        modes: m,
        eta_l,
        eta,
        sqrt_m_over_eta: mf.sqrt() / eta,
        n: plan.n,
        n_eta: plan.n * eta,
        sinh2_r: plan.sinh2_r,
        threshold_p_d,
        mismatch_p_d: mode_mismatch_pd(mu, params.eta_b, eta_l, params.eta_d, params.f_b, params.f_l, plan.n, mf),
    })
}

/// One row per mode count for each scheme, single photons first.
pub fn threshold_table(params: &ScenarioParams) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::with_capacity(2 * params.modes.len());
    for scheme in [Scheme::SinglePhoton, Scheme::Spdc] {
        for &m in &params.modes {
            rows.push(row(params, scheme, m)?);
        }
    }
    Ok(rows)
}

/// Plain-text rendering of [`threshold_table`].
pub fn format_table(rows: &[ThresholdRow]) -> String {
    let mut out = String::new();
    for scheme in [Scheme::SinglePhoton, Scheme::Spdc] {
        let (name, eta) = match scheme {
            Scheme::SinglePhoton => ("single photons", "η"),
            Scheme::Spdc => ("SPDC", "η′"),
        };
        out += &format!(
            "{name}\n{:>6} {:>7} {:>8} {:>10} {:>10} {:>9} {:>8} {:>10} {:>10}\n",
            "M",
            "η_L",
            eta,
            format!("√M/{eta}"),
            "N",
            format!("N{eta}"),
            "sinh²r",
            "threshold",
            "mismatch"
        );
        for r in rows.iter().filter(|r| r.scheme == scheme) {
            let sinh2 = r.sinh2_r.map_or("-".to_string(), |s| format!("{s:.3}"));
            out += &format!(
                "{:>6} {:>7.4} {:>8.5} {:>10.2} {:>10.2} {:>9.3} {:>8} {:>10.4} {:>10.4}\n",
                r.modes, r.eta_l, r.eta, r.sqrt_m_over_eta, r.n, r.n_eta, sinh2, r.threshold_p_d, r.mismatch_p_d
            );
        }
    }
    out
}
