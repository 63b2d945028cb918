//! Experiment configuration: JSON model, validation, and resolution into the
//! concrete input state, network and detectors used by the engines.
//!
//! ```json
//! {
//!   "M": 4,
//!   "sources": ["vacuum", {"type": "single_photon", "mu": 1.0, "eta_b": 1.0}],
//!   "lon": {"kind": "uniform-loss", "eta0": 0.98, "ell": 2, "unitary_seed": 7},
//!   "detectors": {"eta_d": 0.95, "p_d": 0.05}
//! }
//! ```
//!
//! Sources are listed per port; ports past the end of the list hold vacuum.
//! A config containing an `spdc` source uses the SPDC layout: `M = 2K` modes
//! with heralds on ports `0..K` and signals on `K..2K`, and a `K`-mode `lon`
//! acts on the signals only (a `2K`-mode `lon` is taken as the whole network).

use std::path::{Path, PathBuf};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::detectors::DetectorModel;
use crate::error::{Error, Result};
use crate::linalg::io::{read_matrix, MatrixJson};
use crate::linalg::{haar_unitary, ComplexMatrix, TransferMatrix, C64};
use crate::processes::{uniform_loss_eta, LossModel};
use crate::rng::RngStream;
use crate::states::{InputState, PlacedSource, SourceModel};

/// Stream id reserved for drawing the Haar unitary of a uniform-loss network.
const UNITARY_STREAM: u64 = 0x004c_4f4e;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    SinglePhoton,
    Spdc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Vacuum,
    SinglePhoton {
        #[serde(default = "one")]
        mu: f64,
        #[serde(default = "one")]
        eta_b: f64,
    },
    Coherent {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Thermal {
        mean_photons: f64,
    },
    Spdc {
        r: f64,
        #[serde(default = "one")]
        eta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        herald_port: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal_port: Option<usize>,
    },
}

fn one() -> f64 {
    1.0
}

impl SourceSpec {
    pub fn model(&self) -> SourceModel {
        match *self {
            SourceSpec::Vacuum => SourceModel::Vacuum,
            SourceSpec::SinglePhoton { mu, eta_b } => SourceModel::MixedSinglePhoton { mu, eta_b },
            SourceSpec::Coherent { re, im } => SourceModel::Coherent { amplitude: C64::new(re, im) },
            SourceSpec::Thermal { mean_photons } => SourceModel::Thermal { mean_photons },
            SourceSpec::Spdc { r, eta, .. } => SourceModel::SpdcPair { r, eta },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LonSpec {
    #[default]
    Identity,
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixJson>,
    },
    /// `√η_L · U` with `U` Haar-random from `unitary_seed`.
    UniformLoss {
        eta0: f64,
        ell: f64,
        /// Mode count entering `η_L = η₀^(log_ℓ M)`; defaults to the network size.
        #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
        depth_modes: Option<f64>,
        unitary_seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DetectorSpec {
    Uniform(DetectorModel),
    PerMode(Vec<DetectorModel>),
}

/// Fractions of photons lost before (`f_b`) or inside (`f_l`) the network
/// that still reach the detectors as mode-mismatched light.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mismatch {
    #[serde(default)]
    pub f_b: f64,
    #[serde(default)]
    pub f_l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "M")]
    pub modes: usize,
    #[serde(deserialize_with = "deserialize_sources")]
    pub sources: Vec<SourceSpec>,
    #[serde(default, deserialize_with = "deserialize_lon")]
    pub lon: LonSpec,
    pub detectors: DetectorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
}

/// Accepts a bare string such as `"vacuum"` wherever a tagged object is expected.
fn normalize_tag(v: serde_json::Value, tag: &str) -> serde_json::Value {
    match v {
        serde_json::Value::String(s) => serde_json::json!({ tag: s }),
        other => other,
    }
}

fn deserialize_sources<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<SourceSpec>, D::Error> {
    let raw = Vec::<serde_json::Value>::deserialize(d)?;
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| {
            SourceSpec::deserialize(normalize_tag(v, "type"))
                .map_err(|e| D::Error::custom(format!("sources[{i}]: {e}")))
        })
        .collect()
}

fn deserialize_lon<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<LonSpec, D::Error> {
    let raw = serde_json::Value::deserialize(d)?;
    LonSpec::deserialize(normalize_tag(raw, "kind")).map_err(|e| D::Error::custom(format!("lon: {e}")))
}

impl ExperimentConfig {
    /// Per-port sources through an explicit transfer matrix with identical detectors.
    pub fn with_matrix(sources: Vec<SourceSpec>, network: &ComplexMatrix, detector: DetectorModel) -> Self {
        Self {
            modes: network.nrows(),
            sources,
            lon: LonSpec::Matrix { file: None, matrix: Some(MatrixJson::from(network)) },
            detectors: DetectorSpec::Uniform(detector),
            mismatch: None,
            scheme: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme.unwrap_or_else(|| {
            if self.sources.iter().any(|s| matches!(s, SourceSpec::Spdc { .. })) {
                Scheme::Spdc
            } else {
                Scheme::SinglePhoton
            }
        })
    }

    /// Validates and builds the experiment; matrix files are resolved relative to `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Experiment> {
        let scheme = self.scheme();
        let m = self.modes;
        if m == 0 {
            return Err(Error::config("M", "must be >= 1"));
        }
        if self.sources.len() > m {
            return Err(Error::config("sources", format!("{} sources listed for {m} modes", self.sources.len())));
        }
        if scheme == Scheme::Spdc && m % 2 != 0 {
            return Err(Error::config(
                "M",
                format!("port pairing: the spdc layout needs an even mode count (heralds then signals), got {m}"),
            ));
        }
        let input = self.place_sources(scheme)?;
        let (network, lon_matrix) = self.build_network(scheme, base_dir)?;
        let raw_detectors = self.raw_detectors()?;

        let mut canonical = self.clone();
        if let LonSpec::Matrix { .. } = canonical.lon {
            canonical.lon = LonSpec::Matrix { file: None, matrix: Some(MatrixJson::from(&lon_matrix)) };
        }
        let mut exp = Experiment {
            config: canonical,
            scheme,
            input,
            network,
            detectors: raw_detectors,
            mismatch_p_d: None,
            uniform_loss_eta: match self.lon {
                LonSpec::UniformLoss { eta0, ell, depth_modes, .. } => Some(uniform_loss_eta(&LossModel::new(
                    eta0,
                    ell,
                    depth_modes.unwrap_or(lon_matrix.nrows() as f64),
                )?)),
                _ => None,
            },
        };
        if let Some(mm) = self.mismatch {
            for (name, v) in [("mismatch.f_b", mm.f_b), ("mismatch.f_l", mm.f_l)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::config(name, format!("{v} is outside [0, 1]")));
                }
            }
            exp.apply_mismatch(mm);
        }
        Ok(exp)
    }

    fn place_sources(&self, scheme: Scheme) -> Result<InputState> {
        let m = self.modes;
        let k = m / 2;
        let mut claimed = vec![false; m];
        let mut placed = Vec::with_capacity(self.sources.len());
        let mut pending_pairs = Vec::new();

        for (i, spec) in self.sources.iter().enumerate() {
            let field = || format!("sources[{i}]");
            if scheme == Scheme::SinglePhoton && matches!(spec, SourceSpec::Spdc { .. }) {
                return Err(Error::config(field(), "spdc sources need the spdc scheme"));
            }
            spec.model().validate().map_err(|e| match e {
                Error::Config { field: f, message } => Error::config(format!("sources[{i}].{f}"), message),
                other => other,
            })?;
            if let SourceSpec::Spdc { r, eta, herald_port, signal_port } = *spec {
                match (herald_port, signal_port) {
                    (Some(h), Some(s)) => {
                        for p in [h, s] {
                            if p >= m {
                                return Err(Error::config(field(), format!("port {p} out of range for {m} modes")));
                            }
                            if claimed[p] {
                                return Err(Error::config(field(), format!("port {p} is assigned twice")));
                            }
                            claimed[p] = true;
                        }
                        if h == s {
                            return Err(Error::config(field(), "herald and signal ports must differ"));
                        }
                        placed.push(PlacedSource::pair(h, s, r, eta));
                    }
                    (None, None) => pending_pairs.push((i, r, eta)),
                    _ => {
                        return Err(Error::config(
                            field(),
                            "port pairing: give both herald_port and signal_port or neither",
                        ))
                    }
                }
            }
        }
        for (i, r, eta) in pending_pairs {
            let h = (0..k).find(|&h| !claimed[h] && !claimed[k + h]).ok_or_else(|| {
                Error::config(format!("sources[{i}]"), "port pairing: no free herald/signal pair left")
            })?;
            claimed[h] = true;
            claimed[k + h] = true;
            placed.push(PlacedSource::pair(h, k + h, r, eta));
        }
        if scheme == Scheme::SinglePhoton {
            // per-port list: entry i sits on port i
            for (i, spec) in self.sources.iter().enumerate() {
                placed.push(PlacedSource::single(i, spec.model()));
            }
        } else {
            let mut free = (0..m).filter(|&p| !claimed[p]).collect::<Vec<_>>().into_iter();
            for (i, spec) in self.sources.iter().enumerate() {
                if matches!(spec, SourceSpec::Spdc { .. }) {
                    continue;
                }
                let port = free.next().ok_or_else(|| Error::config(format!("sources[{i}]"), "no free port left"))?;
                placed.push(PlacedSource::single(port, spec.model()));
            }
        }
        InputState::new(m, placed)
    }

    /// Returns the full network and the matrix named by `lon`.
    fn build_network(&self, scheme: Scheme, base_dir: &Path) -> Result<(TransferMatrix, ComplexMatrix)> {
        let m = self.modes;
        let natural = if scheme == Scheme::Spdc { m / 2 } else { m };
        let lon = match &self.lon {
            LonSpec::Identity => ComplexMatrix::identity(natural, natural),
            LonSpec::Matrix { file, matrix } => match (file, matrix) {
                (Some(path), None) => {
                    let path = if path.is_absolute() { path.clone() } else { base_dir.join(path) };
                    read_matrix(&path)?
                }
                (None, Some(inline)) => ComplexMatrix::try_from(inline.clone())?,
                _ => return Err(Error::config("lon", "matrix needs exactly one of `file` or `matrix`")),
            },
            LonSpec::UniformLoss { eta0, ell, depth_modes, unitary_seed } => {
                let model =
                    LossModel::new(*eta0, *ell, depth_modes.unwrap_or(natural as f64)).map_err(|e| match e {
                        Error::Config { field, message } => Error::config(format!("lon.{field}"), message),
                        other => other,
                    })?;
                let u = haar_unitary(natural, &mut RngStream::new(*unitary_seed, UNITARY_STREAM).rng())?;
                u * C64::from(uniform_loss_eta(&model).sqrt())
            }
        };
        let check = |l: ComplexMatrix| TransferMatrix::new(l).map_err(|e| Error::config("lon", e.to_string()));
        let n = lon.nrows();
        if lon.ncols() != n {
            return Err(Error::config("lon", format!("matrix must be square, got {}x{}", n, lon.ncols())));
        }
        if n == m {
            return Ok((check(lon.clone())?, lon));
        }
        if scheme == Scheme::Spdc && n == natural {
            let signals = check(lon.clone())?;
            return Ok((TransferMatrix::identity(natural).direct_sum(&signals), lon));
        }
        Err(Error::config("lon", format!("{n}x{n} matrix does not fit {m} modes ({scheme:?} layout)")))
    }

    fn raw_detectors(&self) -> Result<Vec<DetectorModel>> {
        let check = |field: String, d: &DetectorModel| -> Result<()> {
            d.validate().map_err(|e| match e {
                Error::Config { field: f, message } => Error::config(format!("{field}.{f}"), message),
                other => other,
            })?;
            if d.eta_d == 0.0 {
                return Err(Error::config(
                    format!("{field}.eta_d"),
                    "must be > 0 (the click PQD bound is undefined at zero efficiency)",
                ));
            }
            Ok(())
        };
        match &self.detectors {
            DetectorSpec::Uniform(d) => {
                check("detectors".into(), d)?;
                Ok(vec![*d; self.modes])
            }
            DetectorSpec::PerMode(list) => {
                if list.len() != self.modes {
                    return Err(Error::config(
                        "detectors",
                        format!("{} detectors listed for {} modes", list.len(), self.modes),
                    ));
                }
                for (k, d) in list.iter().enumerate() {
                    check(format!("detectors[{k}]"), d)?;
                }
                Ok(list.clone())
            }
        }
    }

    /// SHA-256 of the canonical JSON (sorted keys, compact) of this config.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let text = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    cfg.resolve(path.parent().unwrap_or(Path::new(".")))?;
    Ok(cfg)
}

/// Reads a config file and resolves it into an [`Experiment`].
pub fn load_experiment(path: &Path) -> Result<Experiment> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::from_json(&text)?.resolve(path.parent().unwrap_or(Path::new(".")))
}

/// A validated experiment, ready for the simulability check, the samplers and
/// the oracle.
#[derive(Clone, Debug)]
pub struct Experiment {
    /// Canonical config: matrix files are inlined so the hash covers their contents.
    pub config: ExperimentConfig,
    pub scheme: Scheme,
    pub input: InputState,
    /// Transfer matrix over all `M` modes.
    pub network: TransferMatrix,
    /// Effective detectors, with mode-mismatch counts folded into `p_d`.
    pub detectors: Vec<DetectorModel>,
    /// Random-count probability from mode mismatch per detector, if configured.
    pub mismatch_p_d: Option<Vec<f64>>,
    /// `η_L` of a uniform-loss network.
    pub uniform_loss_eta: Option<f64>,
}

impl Experiment {
    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        config.resolve(Path::new("."))
    }

    pub fn modes(&self) -> usize {
        self.network.dim()
    }

    pub fn config_hash(&self) -> String {
        self.config.hash()
    }

    /// Photons spread over this many modes (the signals in the SPDC layout).
    fn spread_modes(&self) -> usize {
        match self.scheme {
            Scheme::Spdc => self.modes() / 2,
            Scheme::SinglePhoton => self.modes(),
        }
    }

    /// Expected mismatched photons reaching the detectors, per unit detector efficiency.
    fn mismatched_photons(&self, mm: Mismatch) -> f64 {
        let l = self.network.matrix();
        // input port i is transmitted with probability Σ_k |L_ik|²
        let transmitted = |i: usize| (0..l.ncols()).map(|k| l[(i, k)].norm_sqr()).sum::<f64>();
        self.input
            .sources()
            .iter()
            .map(|p| match p.source {
                SourceModel::MixedSinglePhoton { mu, eta_b } => {
                    mu * (mm.f_l * (1.0 - transmitted(p.ports[0])) * eta_b + mm.f_b * (1.0 - eta_b))
                }
                SourceModel::SpdcPair { r, eta } => {
                    r.sinh().powi(2) * (mm.f_l * (1.0 - transmitted(p.ports[1])) * eta + mm.f_b * (1.0 - eta))
                }
                _ => 0.0,
            })
            .sum()
    }

    fn apply_mismatch(&mut self, mm: Mismatch) {
        let per_detector = self.mismatched_photons(mm) / self.spread_modes() as f64;
        let mut extra = Vec::with_capacity(self.detectors.len());
        for d in &mut self.detectors {
            let p_mm = (d.eta_d * per_detector).min(1.0);
            d.p_d = 1.0 - (1.0 - d.p_d) * (1.0 - p_mm);
            extra.push(p_mm);
        }
        self.mismatch_p_d = Some(extra);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn parse(v: serde_json::Value) -> Result<Experiment> {
        ExperimentConfig::from_json(&v.to_string())?.resolve(Path::new("."))
    }

    #[test]
    fn minimal_vacuum_config() {
        let exp = parse(json!({
            "M": 2, "sources": ["vacuum", "vacuum"], "lon": "identity",
            "detectors": {"eta_d": 1, "p_d": 0}
        }))
        .unwrap();
        assert_eq!(exp.modes(), 2);
        assert_eq!(exp.scheme, Scheme::SinglePhoton);
        assert!(exp.network.is_unitary(0.0));
    }

    #[test]
    fn p_d_out_of_range_names_field() {
        let err = parse(json!({
            "M": 2, "sources": ["vacuum"], "detectors": {"eta_d": 1, "p_d": 1.2}
        }))
        .unwrap_err();
        assert!(err.to_string().contains("detectors.p_d"), "{err}");
    }

    #[test]
    fn odd_spdc_layout_rejected() {
        let err = parse(json!({
            "M": 3, "sources": [{"type": "spdc", "r": 0.5}], "detectors": {"eta_d": 1, "p_d": 0.1}
        }))
        .unwrap_err();
        assert!(err.to_string().contains("port pairing"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let err = ExperimentConfig::from_json(
            &json!({"M": 1, "sources": [], "detectors": {"eta_d": 1, "p_d": 0}, "lasers": 3}).to_string(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("lasers"), "{err}");
        let err = ExperimentConfig::from_json(
            &json!({"M": 1, "sources": [{"type": "single_photon", "mu": 1, "etab": 1}], "detectors": {"eta_d": 1, "p_d": 0}})
                .to_string(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("sources[0]"), "{err}");
    }

    #[test]
    fn spdc_layout_and_network() {
        let exp = parse(json!({
            "M": 4,
            "sources": [{"type": "spdc", "r": 0.5, "eta": 0.5}, {"type": "spdc", "r": 0.3}],
            "lon": {"kind": "uniform-loss", "eta0": 0.9, "ell": 2, "unitary_seed": 1},
            "detectors": {"eta_d": 0.9, "p_d": 0.1}
        }))
        .unwrap();
        assert_eq!(exp.scheme, Scheme::Spdc);
        assert_eq!(exp.input.sources()[0].ports, vec![0, 2]);
        assert_eq!(exp.input.sources()[1].ports, vec![1, 3]);
        let l = exp.network.matrix();
        assert_eq!(l[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(l[(0, 2)], C64::new(0.0, 0.0));
        // two-mode network: η_L = 0.9^(log₂ 2)
        let gram = exp.network.gram();
        assert!((gram[(2, 2)].re - 0.9).abs() < 1e-12);
        assert!((exp.uniform_loss_eta.unwrap() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn zero_efficiency_rejected() {
        let err = parse(json!({"M": 1, "sources": [], "detectors": [{"eta_d": 0, "p_d": 0}]})).unwrap_err();
        assert!(err.to_string().contains("detectors[0].eta_d"), "{err}");
    }

    #[test]
    fn non_contraction_lon_rejected() {
        let err = parse(json!({
            "M": 1, "sources": [],
            "lon": {"kind": "matrix", "matrix": {"rows": 1, "cols": 1, "re": [1.5], "im": [0]}},
            "detectors": {"eta_d": 1, "p_d": 0}
        }))
        .unwrap_err();
        assert!(err.to_string().contains("contraction"), "{err}");
    }

    #[test]
    fn round_trip_and_hash_stability() {
        let cfg = ExperimentConfig::from_json(
            &json!({
                "M": 3,
                "sources": ["vacuum", {"type": "single_photon", "mu": 0.5, "eta_b": 0.1}, {"type": "coherent", "re": 0.5}],
                "lon": {"kind": "uniform-loss", "eta0": 0.98, "ell": 2, "M": 10, "unitary_seed": 3},
                "detectors": {"eta_d": 0.95, "p_d": 0.05},
                "mismatch": {"f_b": 0.1, "f_l": 0.9}
            })
            .to_string(),
        )
        .unwrap();
        let again = ExperimentConfig::from_json(&cfg.to_json_pretty()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.hash(), cfg.hash());
        let mut other = cfg.clone();
        other.modes = 4;
        assert_ne!(other.hash(), cfg.hash());
    }

    #[test]
    fn matrix_file_is_inlined_in_canonical_config() {
        let dir = tempfile::tempdir().unwrap();
        let l = ComplexMatrix::identity(2, 2) * C64::from(0.5);
        std::fs::write(dir.path().join("l.csv"), crate::linalg::io::matrix_to_csv(&l)).unwrap();
        let cfg_path = dir.path().join("exp.json");
        std::fs::write(
            &cfg_path,
            json!({"M": 2, "sources": ["vacuum"], "lon": {"kind": "matrix", "file": "l.csv"},
                   "detectors": {"eta_d": 1, "p_d": 0}})
            .to_string(),
        )
        .unwrap();
        let exp = load_experiment(&cfg_path).unwrap();
        assert_eq!(exp.network.matrix(), &l);
        let inline = ExperimentConfig::with_matrix(vec![SourceSpec::Vacuum], &l, DetectorModel::ideal());
        assert_eq!(exp.config_hash(), inline.hash());
    }

    #[test]
    fn mismatch_matches_closed_form() {
        // ten single photons through a lossless network: only f_b(1−η_B) contributes
        let sources = vec![SourceSpec::SinglePhoton { mu: 0.5, eta_b: 0.1 }; 10];
        let mut cfg = ExperimentConfig::with_matrix(
            sources,
            &ComplexMatrix::identity(10, 10),
            DetectorModel::new(0.95, 0.0).unwrap(),
        );
        cfg.mismatch = Some(Mismatch { f_b: 0.1, f_l: 0.9 });
        let exp = Experiment::from_config(&cfg).unwrap();
        let expected = crate::simulability::mode_mismatch_pd(0.5, 0.1, 1.0, 0.95, 0.1, 0.9, 10.0, 10.0);
        assert!((exp.detectors[0].p_d - expected).abs() < 1e-15);
    }
}
