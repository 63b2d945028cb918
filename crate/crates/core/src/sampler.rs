//! Monte Carlo sampling of on-off outcomes.
//!
//! * Second condition: draw `α` from the input `t̄`-PQD, `β` from the
//!   transition function, then the outcome from the detectors' `(−s̄)`-PQDs.
//! * First condition (Gaussian inputs only): draw `β` directly from the
//!   output `s̄`-PQD, then the outcome.
//!
//! Samples are produced in fixed-size batches; batch `b` always uses
//! sub-stream `b` of the run's [`RngStream`], so output is identical for any
//! number of worker threads.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, Scheme};
use crate::detectors::{Outcome, OutcomeSampler};
use crate::error::{Error, Result};
use crate::linalg::{RealGaussian, C64, PSD_TOL};
use crate::processes::TransitionKernel;
use crate::rng::RngStream;
use crate::simulability::{check_second_condition, gaussian_output, second_condition_setup};
use crate::states::InputSampler;

/// Samples per batch; each batch owns one sub-stream.
pub const BATCH_SIZE: usize = 4096;
/// Largest mode count for which a histogram is kept in memory.
pub const MAX_HISTOGRAM_MODES: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Condition {
    First,
    Second,
}

impl From<Condition> for u8 {
    fn from(c: Condition) -> u8 {
        match c {
            Condition::First => 1,
            Condition::Second => 2,
        }
    }
}

impl TryFrom<u8> for Condition {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Condition::First),
            2 => Ok(Condition::Second),
            _ => Err(Error::config("condition", format!("{v} is not 1 or 2"))),
        }
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Second { input: InputSampler, kernel: TransitionKernel, detect: OutcomeSampler },
    First { quadratures: RealGaussian, detect: OutcomeSampler },
}

#[derive(Default)]
struct Scratch {
    alpha: Vec<C64>,
    beta: Vec<C64>,
    complex: Vec<C64>,
    real: Vec<f64>,
    quad: Vec<f64>,
}

/// A prepared sampling engine for one experiment.
#[derive(Clone, Debug)]
pub struct Sampler {
    engine: Engine,
    modes: usize,
    condition: Condition,
    config_hash: String,
}

impl Sampler {
    /// Engine for `condition`, refusing if that condition does not hold.
    pub fn new(exp: &Experiment, condition: Condition) -> Result<Self> {
        let engine = match condition {
            Condition::Second => {
                let report = check_second_condition(exp)?;
                if !report.simulatable {
                    return Err(Error::NotSimulatable(Box::new(report)));
                }
                let setup = second_condition_setup(exp)?;
                Engine::Second {
                    input: InputSampler::new(&setup.input, &setup.t)?,
                    kernel: TransitionKernel::new(&setup.network, &setup.s, &setup.t)?,
                    detect: OutcomeSampler::new(&setup.s, &exp.detectors)?,
                }
            }
            Condition::First => {
                if let Some(p) = exp.input.sources().iter().find(|p| !p.source.is_gaussian()) {
                    return Err(Error::UnsupportedSource { port: p.ports[0], kind: p.source.kind() });
                }
                let s = second_condition_setup(exp)?.s;
                let out = gaussian_output(exp)?.at_ordering(&s)?;
                let min = out.min_eigenvalue();
                if min < -PSD_TOL {
                    return Err(Error::SimulabilityViolated(format!(
                        "output PQD covariance at the detector orderings has eigenvalue {min:e} < 0"
                    )));
                }
                Engine::First {
                    quadratures: RealGaussian::new(out.mean.iter().copied().collect(), &out.cov)?,
                    detect: OutcomeSampler::new(&s, &exp.detectors)?,
                }
            }
        };
        Ok(Self { engine, modes: exp.modes(), condition, config_hash: exp.config_hash() })
    }

    /// Condition 1 for the SPDC layout, condition 2 otherwise.
    pub fn for_experiment(exp: &Experiment) -> Result<Self> {
        Self::new(exp, default_condition(exp))
    }

    pub fn condition(&self) -> Condition {
        self.condition
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn sample_into(&self, rng: &mut rand_chacha::ChaCha8Rng, scratch: &mut Scratch, out: &mut [u8]) {
        match &self.engine {
            Engine::Second { input, kernel, detect } => {
                input.sample_into(rng, &mut scratch.real, &mut scratch.alpha);
                kernel.sample_into(&scratch.alpha, rng, &mut scratch.complex, &mut scratch.beta);
                detect.sample_into(&scratch.beta, rng, out);
            }
            Engine::First { quadratures, detect } => {
                quadratures.sample_into(rng, &mut scratch.real, &mut scratch.quad);
                for (k, b) in scratch.beta.iter_mut().enumerate() {
                    *b = C64::new(scratch.quad[2 * k], scratch.quad[2 * k + 1]) / 2.0;
                }
                detect.sample_into(&scratch.beta, rng, out);
            }
        }
    }

    fn run_batch(&self, stream: RngStream, batch: usize, count: usize) -> Vec<u8> {
        let mut rng = stream.substream(batch as u64).rng();
        let mut scratch = Scratch {
            alpha: vec![C64::new(0.0, 0.0); self.modes],
            beta: vec![C64::new(0.0, 0.0); self.modes],
            quad: vec![0.0; 2 * self.modes],
            ..Scratch::default()
        };
        let mut bits = vec![0u8; count * self.modes];
        for row in bits.chunks_exact_mut(self.modes) {
            self.sample_into(&mut rng, &mut scratch, row);
        }
        bits
    }

    /// Draws `n_samples` outcomes on the global rayon pool.
    pub fn run(&self, n_samples: usize, stream: RngStream) -> SampleBatch {
        let batches = n_samples.div_ceil(BATCH_SIZE);
        let parts: Vec<Vec<u8>> = (0..batches)
            .into_par_iter()
            .map(|b| self.run_batch(stream, b, BATCH_SIZE.min(n_samples - b * BATCH_SIZE)))
            .collect();
        self.assemble(parts, n_samples, stream)
    }

    /// Draws `n_samples` outcomes on a dedicated pool of `workers` threads.
    pub fn run_with_workers(&self, n_samples: usize, stream: RngStream, workers: usize) -> Result<SampleBatch> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?;
        Ok(pool.install(|| self.run(n_samples, stream)))
    }

    fn assemble(&self, parts: Vec<Vec<u8>>, n_samples: usize, stream: RngStream) -> SampleBatch {
        let mut bits = Vec::with_capacity(n_samples * self.modes);
        for p in parts {
            bits.extend_from_slice(&p);
        }
        SampleBatch::new(self.modes, bits, stream, self.config_hash.clone(), self.condition)
    }
}

pub fn default_condition(exp: &Experiment) -> Condition {
    if exp.scheme == Scheme::Spdc && exp.input.is_gaussian() {
        Condition::First
    } else {
        Condition::Second
    }
}

/// Second-condition sampling; refuses with the report attached when `Σ̄` is not PSD.
pub fn run_condition2(exp: &Experiment, n_samples: usize, stream: RngStream) -> Result<SampleBatch> {
    Ok(Sampler::new(exp, Condition::Second)?.run(n_samples, stream))
}

/// First-condition sampling for Gaussian inputs.
pub fn run_condition1(exp: &Experiment, n_samples: usize, stream: RngStream) -> Result<SampleBatch> {
    Ok(Sampler::new(exp, Condition::First)?.run(n_samples, stream))
}

/// Outcomes of one sampling run, stored as a flat `n_samples × modes` bit array.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleBatch {
    pub modes: usize,
    pub stream: RngStream,
    pub config_hash: String,
    pub condition: Condition,
    bits: Vec<u8>,
    counts: Option<BTreeMap<Outcome, u64>>,
}

impl SampleBatch {
    pub fn new(modes: usize, bits: Vec<u8>, stream: RngStream, config_hash: String, condition: Condition) -> Self {
        let counts = (modes <= MAX_HISTOGRAM_MODES).then(|| {
            let mut by_index: BTreeMap<usize, u64> = BTreeMap::new();
            if modes > 0 {
                for row in bits.chunks_exact(modes) {
                    let idx = row.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
                    *by_index.entry(idx).or_default() += 1;
                }
            }
            by_index.into_iter().map(|(i, c)| (Outcome::from_index(i, modes), c)).collect()
        });
        Self { modes, stream, config_hash, condition, bits, counts }
    }

    pub fn len(&self) -> usize {
        self.bits.len().checked_div(self.modes).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.modes..(i + 1) * self.modes]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.bits.chunks_exact(self.modes.max(1))
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> + '_ {
        self.rows().map(|r| Outcome::new(r.to_vec()).expect("bits are 0/1"))
    }

    /// Histogram keyed by outcome; absent when `modes > MAX_HISTOGRAM_MODES`.
    pub fn counts(&self) -> Option<&BTreeMap<Outcome, u64>> {
        self.counts.as_ref()
    }

    /// One bitstring per line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut line = Vec::with_capacity(self.modes + 1);
        for row in self.rows() {
            line.clear();
            line.extend(row.iter().map(|&b| b'0' + b));
            line.push(b'\n');
            w.write_all(&line)?;
        }
        w.flush()
    }

    /// One `{"n":"0101"}` object per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut line = Vec::with_capacity(self.modes + 10);
        for row in self.rows() {
            line.clear();
            line.extend_from_slice(b"{\"n\":\"");
            line.extend(row.iter().map(|&b| b'0' + b));
            line.extend_from_slice(b"\"}\n");
            w.write_all(&line)?;
        }
        w.flush()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalStats {
    pub n_samples: usize,
    pub click_rates: Vec<f64>,
    pub mean_clicks: f64,
    pub histogram: Option<BTreeMap<Outcome, u64>>,
}

pub fn empirical_stats(batch: &SampleBatch) -> Result<EmpiricalStats> {
    let n = batch.len();
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut clicks = vec![0u64; batch.modes];
    for row in batch.rows() {
        for (c, &b) in clicks.iter_mut().zip(row) {
            *c += b as u64;
        }
    }
    let click_rates: Vec<f64> = clicks.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(EmpiricalStats {
        n_samples: n,
        mean_clicks: click_rates.iter().sum(),
        click_rates,
        histogram: batch.counts().cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ExperimentConfig, SourceSpec};
    use crate::detectors::DetectorModel;
    use crate::linalg::haar_unitary;
    use serde_json::json;

    fn experiment(v: serde_json::Value) -> Experiment {
        Experiment::from_config(&ExperimentConfig::from_json(&v.to_string()).unwrap()).unwrap()
    }

    fn within(rate: f64, p: f64, n: usize) -> bool {
        (rate - p).abs() < 5.0 * (p * (1.0 - p) / n as f64).sqrt().max(1e-12)
    }

    #[test]
    fn coherent_click_rates_follow_born_rule() {
        let u = haar_unitary(3, &mut RngStream::from_seed(1).rng()).unwrap();
        let l = &u * C64::from(0.9);
        let a = [C64::new(0.8, 0.0), C64::new(0.0, -0.5), C64::new(0.3, 0.3)];
        let sources = a.iter().map(|z| SourceSpec::Coherent { re: z.re, im: z.im }).collect();
        let exp = Experiment::from_config(&ExperimentConfig::with_matrix(sources, &l, DetectorModel::ideal())).unwrap();
        let n = 100_000;
        let stats = empirical_stats(&run_condition2(&exp, n, RngStream::from_seed(2)).unwrap()).unwrap();
        for k in 0..3 {
            let beta: C64 = (0..3).map(|j| a[j] * l[(j, k)]).sum();
            let p = 1.0 - (-beta.norm_sqr()).exp();
            assert!(within(stats.click_rates[k], p, n), "mode {k}: {} vs {p}", stats.click_rates[k]);
        }
    }

    #[test]
    fn dark_counts_on_vacuum() {
        let exp = experiment(json!({"M": 4, "sources": [], "detectors": {"eta_d": 0.95, "p_d": 0.05}}));
        let n = 100_000;
        let stats = empirical_stats(&run_condition2(&exp, n, RngStream::from_seed(3)).unwrap()).unwrap();
        for r in &stats.click_rates {
            assert!(within(*r, 0.05, n), "{r}");
        }
        let se = (4.0 * 0.05 * 0.95 / n as f64).sqrt();
        assert!((stats.mean_clicks - 0.2).abs() < 5.0 * se);
    }

    #[test]
    fn refuses_below_threshold() {
        let exp = experiment(json!({
            "M": 2, "sources": [{"type": "single_photon", "mu": 1, "eta_b": 0.5}],
            "detectors": {"eta_d": 0.9, "p_d": 0.1}
        }));
        match run_condition2(&exp, 10, RngStream::from_seed(0)) {
            Err(Error::NotSimulatable(report)) => assert!(report.margin.unwrap() < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condition1_rejects_single_photons() {
        let exp = experiment(json!({
            "M": 2, "sources": [{"type": "single_photon", "mu": 1, "eta_b": 0.1}],
            "detectors": {"eta_d": 0.9, "p_d": 0.3}
        }));
        assert!(matches!(
            run_condition1(&exp, 10, RngStream::from_seed(0)),
            Err(Error::UnsupportedSource { port: 0, .. })
        ));
    }

    #[test]
    fn spdc_defaults_to_condition1_and_refuses_below_threshold() {
        let r = 1.0f64.asinh();
        let cfg = |p_d: f64| {
            experiment(json!({
                "M": 2, "sources": [{"type": "spdc", "r": r, "eta": 0.094}],
                "detectors": {"eta_d": 0.95, "p_d": p_d}
            }))
        };
        let s = Sampler::for_experiment(&cfg(0.08)).unwrap();
        assert_eq!(s.condition(), Condition::First);
        assert!(matches!(Sampler::for_experiment(&cfg(0.05)), Err(Error::SimulabilityViolated(_))));
    }

    #[test]
    fn thermal_always_runs() {
        let exp = experiment(json!({
            "M": 2, "sources": [{"type": "thermal", "mean_photons": 2.0}],
            "detectors": {"eta_d": 1.0, "p_d": 0.0}
        }));
        run_condition1(&exp, 100, RngStream::from_seed(0)).unwrap();
        run_condition2(&exp, 100, RngStream::from_seed(0)).unwrap();
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let u = haar_unitary(4, &mut RngStream::from_seed(8).rng()).unwrap();
        let sources = vec![SourceSpec::SinglePhoton { mu: 1.0, eta_b: 0.1 }; 4];
        let exp =
            Experiment::from_config(&ExperimentConfig::with_matrix(sources, &u, DetectorModel::new(0.9, 0.1).unwrap()))
                .unwrap();
        let s = Sampler::for_experiment(&exp).unwrap();
        let n = 3 * BATCH_SIZE + 17;
        let one = s.run_with_workers(n, RngStream::from_seed(4), 1).unwrap();
        let three = s.run_with_workers(n, RngStream::from_seed(4), 3).unwrap();
        assert_eq!(one, three);
        assert_eq!(one.len(), n);
        let other = s.run_with_workers(n, RngStream::from_seed(5), 1).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn stats_spot_values() {
        let b = SampleBatch::new(2, vec![0, 0], RngStream::from_seed(0), String::new(), Condition::Second);
        assert_eq!(empirical_stats(&b).unwrap().click_rates, vec![0.0, 0.0]);
        let b = SampleBatch::new(2, vec![1, 0, 0, 1], RngStream::from_seed(0), String::new(), Condition::Second);
        let st = empirical_stats(&b).unwrap();
        assert_eq!(st.click_rates, vec![0.5, 0.5]);
        assert_eq!(st.mean_clicks, 1.0);
        let empty = SampleBatch::new(2, vec![], RngStream::from_seed(0), String::new(), Condition::Second);
        assert!(matches!(empirical_stats(&empty), Err(Error::EmptyBatch)));
    }

    #[test]
    fn output_formats() {
        let b = SampleBatch::new(
            4,
            vec![0, 1, 0, 1, 1, 1, 0, 0],
            RngStream::from_seed(0),
            String::new(),
            Condition::Second,
        );
        let mut csv = Vec::new();
        b.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "0101\n1100\n");
        let mut jsonl = Vec::new();
        b.write_jsonl(&mut jsonl).unwrap();
        assert_eq!(String::from_utf8(jsonl).unwrap(), "{\"n\":\"0101\"}\n{\"n\":\"1100\"}\n");
        let counts = b.counts().unwrap();
        assert_eq!(counts[&"0101".parse::<Outcome>().unwrap()], 1);
    }

    #[test]
    fn conditions_agree_on_coherent_inputs() {
        let u = haar_unitary(2, &mut RngStream::from_seed(12).rng()).unwrap();
        let sources = vec![SourceSpec::Coherent { re: 0.7, im: 0.0 }, SourceSpec::Thermal { mean_photons: 0.3 }];
        let exp = Experiment::from_config(&ExperimentConfig::with_matrix(
            sources,
            &(&u * C64::from(0.9)),
            DetectorModel::new(0.8, 0.02).unwrap(),
        ))
        .unwrap();
        let n = 200_000;
        let a = run_condition1(&exp, n, RngStream::from_seed(1)).unwrap();
        let b = run_condition2(&exp, n, RngStream::from_seed(2)).unwrap();
        let (ca, cb) = (a.counts().unwrap(), b.counts().unwrap());
        let tv: f64 = (0..4)
            .map(|i| {
                let o = Outcome::from_index(i, 2);
                let pa = *ca.get(&o).unwrap_or(&0) as f64 / n as f64;
                let pb = *cb.get(&o).unwrap_or(&0) as f64 / n as f64;
                (pa - pb).abs()
            })
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.01, "{tv}");
    }
}
