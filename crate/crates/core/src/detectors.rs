//! On-off photodetectors with finite efficiency and random counts.
//!
//! The no-click POVM element is `Π₀ = (1−p_D) Σ_m (1−η_D)^m |m⟩⟨m|`, and its
//! `(−s)`-ordered PQD is a scaled Gaussian in `β`. The click element is the
//! complement `I − Π₀`.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::states::{OrderingVector, ORDERING_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorModel {
    pub eta_d: f64,
    pub p_d: f64,
}

impl DetectorModel {
    pub fn new(eta_d: f64, p_d: f64) -> Result<Self> {
        let det = Self { eta_d, p_d };
        det.validate()?;
        Ok(det)
    }

    pub fn ideal() -> Self {
        Self { eta_d: 1.0, p_d: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta_d) {
            return Err(Error::config("eta_d", format!("{} is outside [0, 1]", self.eta_d)));
        }
        if !(0.0..=1.0).contains(&self.p_d) {
            return Err(Error::config("p_d", format!("{} is outside [0, 1]", self.p_d)));
        }
        Ok(())
    }

    /// Born-rule click probability for a coherent state `|β⟩`.
    pub fn click_probability_coherent(&self, beta: C64) -> f64 {
        1.0 - (1.0 - self.p_d) * (-self.eta_d * beta.norm_sqr()).exp()
    }
}

fn denominator(s: f64, det: &DetectorModel) -> Result<f64> {
    let d = 1.0 - det.eta_d * (1.0 - s) / 2.0;
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::SingularOrdering { ordering: s })
    }
}

/// `(−s)`-ordered PQD of the no-click element at `β`.
pub fn pqd_off(beta: C64, s: f64, det: &DetectorModel) -> Result<f64> {
    if det.p_d == 1.0 {
        // always clicks; at s = s̄ the denominator below also vanishes
        return Ok(0.0);
    }
    let d = denominator(s, det)?;
    Ok((1.0 - det.p_d) / PI * (-det.eta_d * beta.norm_sqr() / d).exp() / d)
}

/// `(−s)`-ordered PQD of the click element, `1/π − pqd_off`.
pub fn pqd_on(beta: C64, s: f64, det: &DetectorModel) -> Result<f64> {
    Ok(1.0 / PI - pqd_off(beta, s, det)?)
}

/// Smallest output ordering at which the click PQD is nonnegative.
pub fn s_bar(det: &DetectorModel) -> Result<f64> {
    if det.eta_d == 0.0 {
        return Err(Error::DegenerateDetector);
    }
    Ok(1.0 - 2.0 * det.p_d / det.eta_d)
}

/// Per-mode on-off outcome, displayed as a bitstring such as `0101`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Outcome(Vec<u8>);

impl Outcome {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::config("outcome", "bits must be 0 or 1"));
        }
        Ok(Self(bits))
    }

    pub fn zeros(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn clicks(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// Position in the lexicographic ordering of all `2^M` bitstrings.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn from_index(index: usize, modes: usize) -> Self {
        Self((0..modes).map(|k| ((index >> (modes - 1 - k)) & 1) as u8).collect())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::config("outcome", format!("invalid bitstring {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Outcome)
    }
}

impl TryFrom<String> for Outcome {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Outcome> for String {
    fn from(o: Outcome) -> String {
        o.to_string()
    }
}

/// Per-mode click probabilities as a function of `β`, precomputed for a
/// fixed ordering and detector set.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    /// `1 − p_D` per mode
    keep: Vec<f64>,
    /// `η_D / D` per mode
    rate: Vec<f64>,
    /// `1 / D` per mode
    inv_d: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(s: &OrderingVector, dets: &[DetectorModel]) -> Result<Self> {
        if s.len() != dets.len() {
            return Err(Error::InvalidDimension(format!("{} ordering entries for {} detectors", s.len(), dets.len())));
        }
        let mut keep = Vec::with_capacity(dets.len());
        let mut rate = Vec::with_capacity(dets.len());
        let mut inv_d = Vec::with_capacity(dets.len());
        for (k, det) in dets.iter().enumerate() {
            let bound = s_bar(det)?;
            if s[k] < bound - ORDERING_TOL {
                return Err(Error::Negativity { mode: k, what: "detector", ordering: s[k], bound });
            }
            if det.p_d == 1.0 {
                keep.push(0.0);
                rate.push(0.0);
                inv_d.push(1.0);
                continue;
            }
            let d = denominator(s[k], det)?;
            keep.push(1.0 - det.p_d);
            rate.push(det.eta_d / d);
            inv_d.push(1.0 / d);
        }
        Ok(Self { keep, rate, inv_d })
    }

    pub fn modes(&self) -> usize {
        self.keep.len()
    }

    /// `π·pqd_on(β_k)`, the probability that mode `k` clicks given `β_k`.
    #[inline]
    pub fn click_probability(&self, k: usize, beta: C64) -> f64 {
        1.0 - self.keep[k] * self.inv_d[k] * (-self.rate[k] * beta.norm_sqr()).exp()
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, beta: &[C64], rng: &mut R, out: &mut [u8]) {
        for (k, (&b, o)) in beta.iter().zip(out.iter_mut()).enumerate() {
            *o = (rng.random::<f64>() < self.click_probability(k, b)) as u8;
        }
    }
}

/// Draws one on-off outcome given output amplitudes `β`.
pub fn sample_outcome<R: Rng + ?Sized>(
    beta: &[C64],
    s: &OrderingVector,
    dets: &[DetectorModel],
    rng: &mut R,
) -> Result<Outcome> {
    let sampler = OutcomeSampler::new(s, dets)?;
    if beta.len() != sampler.modes() {
        return Err(Error::InvalidDimension(format!("{} amplitudes for {} detectors", beta.len(), sampler.modes())));
    }
    let mut bits = vec![0; beta.len()];
    sampler.sample_into(beta, rng, &mut bits);
    Ok(Outcome(bits))
}
