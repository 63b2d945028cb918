//! Exact click distributions by brute-force Fock-space propagation.
//!
//! Each source is written as an ensemble of pure states truncated at
//! `n_max` photons. A lossy network is first dilated to a unitary `Ũ` on
//! `2M` modes. A mode-`i` creation operator maps to `Σ_j Ũ_ij a_j†`, so
//!
//! ```text
//! ⟨m|Ũ|n⟩ = perm(Ũ[n, m]) / √(Π n_i! · Π m_j!)
//! ```
//!
//! with rows of input mode `i` repeated `n_i` times and columns of output
//! mode `j` repeated `m_j` times. The on-off POVM is diagonal in the Fock
//! basis, so only output photon-number probabilities are needed and distinct
//! photon-number sectors never interfere. Environment modes are summed over.
//!
//! Cost is exponential in modes and photons; this exists to check the
//! samplers on small experiments.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::detectors::{DetectorModel, Outcome};
use crate::error::{Error, Result};
use crate::linalg::{dilate_to_unitary, permanent, permanent_repeated_columns, ComplexMatrix, TransferMatrix, C64};
use crate::sampler::SampleBatch;
use crate::states::SourceModel;

/// Largest number of modes after dilation.
pub const MAX_DILATED_MODES: usize = 12;
/// Largest output Fock sector the oracle will enumerate.
pub const MAX_SECTOR_STATES: usize = 200_000;
/// Truncated input probability mass above which results are refused.
pub const TRUNCATION_TOL: f64 = 1e-6;
/// Default per-source photon cutoff.
pub const DEFAULT_N_MAX: usize = 4;

/// Occupation-number basis of `modes` modes with at most `n_max` photons in
/// total, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockBasis {
    pub modes: usize,
    pub n_max: usize,
    pub states: Vec<Vec<usize>>,
}

impl FockBasis {
    pub fn new(modes: usize, n_max: usize) -> Self {
        let mut states: Vec<Vec<usize>> = (0..=n_max).flat_map(|n| fock_sector(modes, n)).collect();
        states.sort();
        Self { modes, n_max, states }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }
}

/// All occupation vectors of `modes` modes with exactly `total` photons, lexicographic.
pub fn fock_sector(modes: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(modes: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for n in 0..=left {
            prefix.push(n);
            rec(modes, left - n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(modes, total, &mut Vec::with_capacity(modes), &mut out);
    out
}

fn sector_size(modes: usize, total: usize) -> f64 {
    // C(total + modes − 1, modes − 1)
    (1..modes).fold(1.0, |acc, i| acc * (total + i) as f64 / i as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `⟨output|Ũ|input⟩` for occupation vectors of equal total photon number.
pub fn fock_amplitude(u: &ComplexMatrix, input: &[usize], output: &[usize]) -> Result<C64> {
    let n: usize = input.iter().sum();
    if output.iter().sum::<usize>() != n {
        return Ok(C64::new(0.0, 0.0));
    }
    let out_modes: Vec<usize> = (0..output.len()).filter(|&j| output[j] > 0).collect();
    let mult: Vec<usize> = out_modes.iter().map(|&j| output[j]).collect();
    let mut a = ComplexMatrix::zeros(n, out_modes.len());
    let mut r = 0;
    for (i, &ni) in input.iter().enumerate() {
        for _ in 0..ni {
            for (c, &j) in out_modes.iter().enumerate() {
                a[(r, c)] = u[(i, j)];
            }
            r += 1;
        }
    }
    let norm = input.iter().chain(output).map(|&k| factorial(k)).product::<f64>().sqrt();
    Ok(permanent_repeated_columns(&a, &mult)? / norm)
}

/// Exact click probabilities for all `2^M` outcomes, indexed lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub modes: usize,
    pub outcomes: Vec<Outcome>,
    pub probs: Vec<f64>,
    /// Input probability mass dropped by the Fock cutoff (before renormalizing).
    pub truncation_error: f64,
}

impl ProbabilityTable {
    pub fn from_probs(modes: usize, probs: Vec<f64>, truncation_error: f64) -> Result<Self> {
        if probs.len() != 1 << modes {
            return Err(Error::InvalidDimension(format!("{} probabilities for {modes} modes", probs.len())));
        }
        Ok(Self {
            modes,
            outcomes: (0..probs.len()).map(|i| Outcome::from_index(i, modes)).collect(),
            probs,
            truncation_error,
        })
    }

    /// Empirical frequencies of a sample batch.
    pub fn from_batch(batch: &SampleBatch) -> Result<Self> {
        if batch.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if batch.modes > MAX_DILATED_MODES * 2 {
            return Err(Error::MismatchedOutcomes(format!("{} modes is too many for a dense table", batch.modes)));
        }
        let mut probs = vec![0.0; 1 << batch.modes];
        let w = 1.0 / batch.len() as f64;
        for row in batch.rows() {
            let idx = row.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
            probs[idx] += w;
        }
        Self::from_probs(batch.modes, probs, 0.0)
    }

    pub fn probability(&self, outcome: &Outcome) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal over the first `keep` modes.
    pub fn marginal_prefix(&self, keep: usize) -> Result<ProbabilityTable> {
        if keep > self.modes {
            return Err(Error::InvalidDimension(format!("cannot keep {keep} of {} modes", self.modes)));
        }
        let drop = self.modes - keep;
        let mut probs = vec![0.0; 1 << keep];
        for (i, p) in self.probs.iter().enumerate() {
            probs[i >> drop] += p;
        }
        Self::from_probs(keep, probs, self.truncation_error)
    }
}

/// Anything with a distribution over the `2^M` on-off outcomes.
pub trait OutcomeDistribution {
    fn outcome_modes(&self) -> usize;
    fn outcome_probabilities(&self) -> Result<Vec<f64>>;
}

impl OutcomeDistribution for ProbabilityTable {
    fn outcome_modes(&self) -> usize {
        self.modes
    }

    fn outcome_probabilities(&self) -> Result<Vec<f64>> {
        Ok(self.probs.clone())
    }
}

impl OutcomeDistribution for SampleBatch {
    fn outcome_modes(&self) -> usize {
        self.modes
    }

    fn outcome_probabilities(&self) -> Result<Vec<f64>> {
        Ok(ProbabilityTable::from_batch(self)?.probs)
    }
}

/// `½ Σ |p − q|`.
pub fn tv_distance(p: &ProbabilityTable, q: &impl OutcomeDistribution) -> Result<f64> {
    if p.modes != q.outcome_modes() {
        return Err(Error::MismatchedOutcomes(format!("{} modes vs {} modes", p.modes, q.outcome_modes())));
    }
    let q = q.outcome_probabilities()?;
    Ok(0.5 * p.probs.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `|perm(U[S, T])|²`: the probability of the collision-free event in which
/// photons entering ports `S` leave through ports `T` of a lossless network.
pub fn ideal_probability_permanent(u: &ComplexMatrix, inputs: &[usize], outputs: &[usize]) -> Result<f64> {
    if inputs.len() != outputs.len() {
        return Err(Error::InvalidDimension(format!(
            "{} input ports but {} output ports",
            inputs.len(),
            outputs.len()
        )));
    }
    if inputs.iter().chain(outputs).any(|&i| i >= u.nrows().min(u.ncols())) {
        return Err(Error::InvalidDimension("port index out of range".into()));
    }
    let sub = ComplexMatrix::from_fn(inputs.len(), outputs.len(), |r, c| u[(inputs[r], outputs[c])]);
    Ok(permanent(&sub)?.norm_sqr())
}

/// One source as a probability-weighted list of pure states over its own
/// ports: `(weight, [(occupations, amplitude)])`.
type SourceEnsemble = Vec<(f64, Vec<(Vec<usize>, C64)>)>;

fn source_ensemble(source: &SourceModel, n_max: usize) -> (SourceEnsemble, f64, usize) {
    match *source {
        SourceModel::Vacuum => (vec![(1.0, vec![(vec![0], C64::new(1.0, 0.0))])], 1.0, 0),
        SourceModel::MixedSinglePhoton { .. } => {
            let eta_bar = source.eta_bar();
            let mut ens = vec![(1.0 - eta_bar, vec![(vec![0], C64::new(1.0, 0.0))])];
            if n_max >= 1 && eta_bar > 0.0 {
                ens.push((eta_bar, vec![(vec![1], C64::new(1.0, 0.0))]));
            }
            let kept = if n_max >= 1 { 1.0 } else { 1.0 - eta_bar };
            (ens, kept, n_max.min(1))
        }
        SourceModel::Coherent { amplitude } => {
            let mean = amplitude.norm_sqr();
            let mut terms = Vec::with_capacity(n_max + 1);
            let mut c = C64::new((-mean / 2.0).exp(), 0.0);
            let mut kept = 0.0;
            for n in 0..=n_max {
                if n > 0 {
                    c *= amplitude / (n as f64).sqrt();
                }
                kept += c.norm_sqr();
                terms.push((vec![n], c));
            }
            (vec![(1.0, terms)], kept, n_max)
        }
        SourceModel::Thermal { mean_photons } => {
            let q = mean_photons / (1.0 + mean_photons);
            let ens: SourceEnsemble =
                (0..=n_max).map(|n| ((1.0 - q) * q.powi(n as i32), vec![(vec![n], C64::new(1.0, 0.0))])).collect();
            (ens, 1.0 - q.powi(n_max as i32 + 1), n_max)
        }
        SourceModel::SpdcPair { r, .. } => {
            // Σ tanhⁿr / cosh r |n, n⟩; the signal loss is moved into the network
            let t = r.tanh();
            let terms: Vec<(Vec<usize>, C64)> =
                (0..=n_max).map(|n| (vec![n, n], C64::new(t.powi(n as i32) / r.cosh(), 0.0))).collect();
            (vec![(1.0, terms)], 1.0 - (t * t).powi(n_max as i32 + 1), 2 * n_max)
        }
    }
}

/// Input probability mass lost to the per-source cutoff `n_max`.
pub fn truncation_error(exp: &Experiment, n_max: usize) -> f64 {
    let kept: f64 = exp.input.sources().iter().map(|p| source_ensemble(&p.source, n_max).1).product();
    (1.0 - kept).max(0.0)
}

/// Smallest cutoff whose truncation error is within `tolerance`.
pub fn suggest_n_max(exp: &Experiment, tolerance: f64) -> Result<usize> {
    (0..=64)
        .find(|&n| truncation_error(exp, n) <= tolerance)
        .ok_or_else(|| Error::OracleTooLarge("no photon cutoff up to 64 reaches the truncation tolerance".into()))
}

/// Exact click distribution with a per-source photon cutoff `n_max`.
pub fn exact_distribution(exp: &Experiment, n_max: usize) -> Result<ProbabilityTable> {
    let m = exp.modes();
    let err = truncation_error(exp, n_max);
    if err > TRUNCATION_TOL {
        return Err(Error::Truncation {
            error: err,
            tolerance: TRUNCATION_TOL,
            suggested_n_max: suggest_n_max(exp, TRUNCATION_TOL)?,
        });
    }

    // pair losses become part of the network: L' = diag(√η on signals)·L
    let mut l = exp.network.matrix().clone();
    for p in exp.input.sources() {
        if let SourceModel::SpdcPair { eta, .. } = p.source {
            let s = p.ports[1];
            for k in 0..m {
                l[(s, k)] *= eta.sqrt();
            }
        }
    }
    let l = TransferMatrix::new(l)?;
    let u = if l.is_unitary(1e-12) { l.into_inner() } else { dilate_to_unitary(&l)? };
    let d = u.nrows();
    if d > MAX_DILATED_MODES {
        return Err(Error::OracleTooLarge(format!(
            "{d} modes after dilation exceeds the limit of {MAX_DILATED_MODES}"
        )));
    }

    let ensembles: Vec<(SourceEnsemble, &[usize])> =
        exp.input.sources().iter().map(|p| (source_ensemble(&p.source, n_max).0, p.ports.as_slice())).collect();
    let max_photons: usize = exp.input.sources().iter().map(|p| source_ensemble(&p.source, n_max).2).sum();
    let largest = sector_size(d, max_photons);
    if largest > MAX_SECTOR_STATES as f64 {
        return Err(Error::OracleTooLarge(format!(
            "{largest:.0} Fock states with {max_photons} photons in {d} modes exceeds {MAX_SECTOR_STATES}"
        )));
    }
    let components: usize = ensembles.iter().map(|(e, _)| e.len()).product();
    if components > 100_000 {
        return Err(Error::OracleTooLarge(format!("{components} mixture components")));
    }

    // probability of each system photon-number pattern, environment summed out
    let mut patterns: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut sectors: HashMap<usize, Vec<Vec<usize>>> = HashMap::new();
    let mut choice = vec![0usize; ensembles.len()];
    loop {
        let mut weight = 1.0;
        let mut state: Vec<(Vec<usize>, C64)> = vec![(vec![0; d], C64::new(1.0, 0.0))];
        for (s, (ens, ports)) in ensembles.iter().enumerate() {
            let (w, terms) = &ens[choice[s]];
            weight *= w;
            let mut next = Vec::with_capacity(state.len() * terms.len());
            for (occ, amp) in &state {
                for (local, a) in terms {
                    let mut o = occ.clone();
                    for (&port, &n) in ports.iter().zip(local) {
                        o[port] = n;
                    }
                    next.push((o, amp * a));
                }
            }
            state = next;
        }
        if weight > 0.0 {
            let mut by_sector: HashMap<usize, Vec<(Vec<usize>, C64)>> = HashMap::new();
            for (occ, amp) in state {
                by_sector.entry(occ.iter().sum()).or_default().push((occ, amp));
            }
            for (n, terms) in by_sector {
                let outputs = sectors.entry(n).or_insert_with(|| fock_sector(d, n));
                for out in outputs.iter() {
                    let mut amp = C64::new(0.0, 0.0);
                    for (occ, c) in &terms {
                        amp += c * fock_amplitude(&u, occ, out)?;
                    }
                    let p = weight * amp.norm_sqr();
                    if p > 0.0 {
                        *patterns.entry(out[..m].to_vec()).or_default() += p;
                    }
                }
            }
        }
        // next mixture component
        let mut s = 0;
        while s < choice.len() && choice[s] + 1 == ensembles[s].0.len() {
            choice[s] = 0;
            s += 1;
        }
        if s == choice.len() {
            break;
        }
        choice[s] += 1;
    }

    let mut probs = vec![0.0; 1 << m];
    for (pattern, p) in &patterns {
        apply_povm(pattern, *p, &exp.detectors, &mut probs);
    }
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    ProbabilityTable::from_probs(m, probs, err)
}

/// Spreads `weight` for photon numbers `pattern` over on-off outcomes.
fn apply_povm(pattern: &[usize], weight: f64, dets: &[DetectorModel], probs: &mut [f64]) {
    let m = pattern.len();
    let off: Vec<f64> =
        pattern.iter().zip(dets).map(|(&n, d)| (1.0 - d.p_d) * (1.0 - d.eta_d).powi(n as i32)).collect();
    for (idx, p) in probs.iter_mut().enumerate() {
        let mut prob = weight;
        for (k, &q) in off.iter().enumerate() {
            let click = (idx >> (m - 1 - k)) & 1 == 1;
            prob *= if click { 1.0 - q } else { q };
        }
        *p += prob;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, SourceSpec};
    use crate::linalg::haar_unitary;
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    fn beamsplitter() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_row_slice(2, 2, &[C64::from(h), C64::from(h), C64::from(h), C64::from(-h)])
    }

    fn exp(sources: Vec<SourceSpec>, l: &ComplexMatrix, det: DetectorModel) -> Experiment {
        Experiment::from_config(&ExperimentConfig::with_matrix(sources, l, det)).unwrap()
    }

    fn photon() -> SourceSpec {
        SourceSpec::SinglePhoton { mu: 1.0, eta_b: 1.0 }
    }

    #[test]
    fn fock_basis_is_lexicographic() {
        let b = FockBasis::new(2, 2);
        assert_eq!(b.states, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
        assert_eq!(FockBasis::new(4, 3).dim(), 35);
    }

    #[test]
    fn single_photon_splits() {
        let t =
            exact_distribution(&exp(vec![photon(), SourceSpec::Vacuum], &beamsplitter(), DetectorModel::ideal()), 4)
                .unwrap();
        assert_abs_diff_eq!(t.probs[0b10], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.probs[0b01], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.probs[0b00] + t.probs[0b11], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hong_ou_mandel() {
        let t = exact_distribution(&exp(vec![photon(), photon()], &beamsplitter(), DetectorModel::ideal()), 4).unwrap();
        assert_abs_diff_eq!(t.probs[0b11], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t.probs[0b10], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.probs[0b01], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn full_loss_gives_no_clicks() {
        let t =
            exact_distribution(&exp(vec![photon(), photon()], &ComplexMatrix::zeros(2, 2), DetectorModel::ideal()), 4)
                .unwrap();
        assert_abs_diff_eq!(t.probs[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ideal_permanent_spot_values() {
        let id = ComplexMatrix::identity(2, 2);
        assert_abs_diff_eq!(ideal_probability_permanent(&id, &[0], &[0]).unwrap(), 1.0);
        assert_abs_diff_eq!(ideal_probability_permanent(&id, &[0], &[1]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            ideal_probability_permanent(&beamsplitter(), &[0, 1], &[0, 1]).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(ideal_probability_permanent(&id, &[0, 1], &[0]).is_err());
    }

    #[test]
    fn tv_spot_values() {
        let p = ProbabilityTable::from_probs(1, vec![1.0, 0.0], 0.0).unwrap();
        let q = ProbabilityTable::from_probs(1, vec![0.0, 1.0], 0.0).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(tv_distance(&p, &q).unwrap(), 1.0);
        let u = ProbabilityTable::from_probs(2, vec![0.25; 4], 0.0).unwrap();
        let d = ProbabilityTable::from_probs(2, vec![1.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        assert_abs_diff_eq!(tv_distance(&u, &d).unwrap(), 0.75);
        assert!(matches!(tv_distance(&p, &u), Err(Error::MismatchedOutcomes(_))));
    }

    #[test]
    fn collision_free_sector_matches_permanents() {
        // three photons in four modes, ideal detectors: each click pattern with three
        // clicks is a collision-free event with probability |perm(U[S,T])|²
        let u = haar_unitary(4, &mut RngStream::from_seed(21).rng()).unwrap();
        let sources = vec![photon(), photon(), photon(), SourceSpec::Vacuum];
        let t = exact_distribution(&exp(sources, &u, DetectorModel::ideal()), 4).unwrap();
        for idx in 0..16usize {
            let o = Outcome::from_index(idx, 4);
            if o.clicks() == 3 {
                let outs: Vec<usize> = (0..4).filter(|&k| o.bits()[k] == 1).collect();
                let p = ideal_probability_permanent(&u, &[0, 1, 2], &outs).unwrap();
                assert_abs_diff_eq!(t.probs[idx], p, epsilon = 1e-9);
            }
        }
        assert_abs_diff_eq!(t.total(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn loss_equivalence_with_explicit_dilation() {
        let u = haar_unitary(2, &mut RngStream::from_seed(5).rng()).unwrap();
        let l = &u * C64::from(0.8f64.sqrt());
        let lossy = exact_distribution(&exp(vec![photon(), photon()], &l, DetectorModel::ideal()), 4).unwrap();
        let big = dilate_to_unitary(&TransferMatrix::new(l).unwrap()).unwrap();
        let dilated =
            exp(vec![photon(), photon(), SourceSpec::Vacuum, SourceSpec::Vacuum], &big, DetectorModel::ideal());
        let traced = exact_distribution(&dilated, 4).unwrap().marginal_prefix(2).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(lossy.probs[i], traced.probs[i], epsilon = 1e-9);
        }
    }

    #[test]
    fn coherent_click_probability() {
        let det = DetectorModel::new(0.7, 0.05).unwrap();
        let beta = C64::new(0.6, -0.3);
        let e = exp(vec![SourceSpec::Coherent { re: beta.re, im: beta.im }], &ComplexMatrix::identity(1, 1), det);
        let n_max = suggest_n_max(&e, 1e-13).unwrap();
        let t = exact_distribution(&e, n_max).unwrap();
        assert_abs_diff_eq!(t.probs[1], det.click_probability_coherent(beta), epsilon = 1e-9);
    }

    #[test]
    fn truncation_is_reported() {
        let e = exp(
            vec![SourceSpec::Coherent { re: 2.0, im: 0.0 }],
            &ComplexMatrix::identity(1, 1),
            DetectorModel::ideal(),
        );
        match exact_distribution(&e, 4) {
            Err(Error::Truncation { suggested_n_max, .. }) => {
                assert!(suggested_n_max > 4);
                assert!(exact_distribution(&e, suggested_n_max).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spdc_pair_statistics() {
        // heralded pair, no loss: both detectors click together, P(00) = 1/cosh²r
        let r: f64 = 0.3;
        let cfg = serde_json::json!({
            "M": 2, "sources": [{"type": "spdc", "r": r, "eta": 1.0}], "detectors": {"eta_d": 1.0, "p_d": 0.0}
        });
        let e = Experiment::from_config(&ExperimentConfig::from_json(&cfg.to_string()).unwrap()).unwrap();
        let n_max = suggest_n_max(&e, 1e-10).unwrap();
        let t = exact_distribution(&e, n_max).unwrap();
        let p00 = 1.0 / r.cosh().powi(2);
        assert_abs_diff_eq!(t.probs[0b00], p00, epsilon = 1e-9);
        assert_abs_diff_eq!(t.probs[0b11], 1.0 - p00, epsilon = 1e-9);
        assert_abs_diff_eq!(t.probs[0b01] + t.probs[0b10], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn oversized_network_refused() {
        let e = exp(vec![photon()], &(ComplexMatrix::identity(7, 7) * C64::from(0.5)), DetectorModel::ideal());
        assert!(matches!(exact_distribution(&e, 2), Err(Error::OracleTooLarge(_))));
    }
}
