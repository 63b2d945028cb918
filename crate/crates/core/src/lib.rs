//! Classical sampling of imperfect linear-optics experiments through
//! nonnegative phase-space quasiprobability distributions (PQDs).
//!
//! An experiment is a set of sources feeding a lossy linear network whose
//! outputs are read by on-off detectors. When the input PQD at ordering `t`,
//! the detector PQDs at ordering `−s` and the network transition function
//! are all nonnegative, click patterns can be drawn exactly by Monte Carlo:
//!
//! 1. draw input amplitudes `α` from the input PQD,
//! 2. draw output amplitudes `β` from the Gaussian transition function,
//! 3. draw each detector outcome with probability `π·PQD(β_k)`.
//!
//! [`simulability`] decides whether such orderings exist, [`sampler`] runs the
//! Monte Carlo, and [`oracle`] computes exact distributions for small cases.
//!
//! ```
//! use pqdsim::{check_second_condition, ExperimentConfig, Experiment, Sampler, RngStream};
//!
//! let cfg = ExperimentConfig::from_json(r#"{
//!     "M": 2,
//!     "sources": [{"type": "single_photon", "mu": 1.0, "eta_b": 0.2}, "vacuum"],
//!     "detectors": {"eta_d": 0.9, "p_d": 0.2}
//! }"#)?;
//! let exp = Experiment::from_config(&cfg)?;
//! assert!(check_second_condition(&exp)?.simulatable);
//! let batch = Sampler::for_experiment(&exp)?.run(1000, RngStream::from_seed(7));
//! assert_eq!(batch.len(), 1000);
//! # Ok::<(), pqdsim::Error>(())
//! ```

pub mod config;
pub mod detectors;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod processes;
pub mod rng;
pub mod sampler;
pub mod scenario;
pub mod simulability;
pub mod states;

pub use config::{load_experiment, parse_config, Experiment, ExperimentConfig, Scheme};
pub use detectors::{DetectorModel, Outcome};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, TransferMatrix, C64};
pub use oracle::{exact_distribution, tv_distance, ProbabilityTable};
pub use rng::RngStream;
pub use sampler::{Condition, SampleBatch, Sampler};
pub use simulability::{check_second_condition, SimulabilityReport};
pub use states::{OrderingVector, SourceModel};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/phase-space.md")]
    struct PhaseSpace;
    #[doc = include_str!("../../../book/src/experiments.md")]
    struct Experiments;
    #[doc = include_str!("../../../book/src/simulability.md")]
    struct Simulability;
    #[doc = include_str!("../../../book/src/sampling.md")]
    struct Sampling;
    #[doc = include_str!("../../../book/src/oracle.md")]
    struct Oracle;
    #[doc = include_str!("../../../book/src/thresholds.md")]
    struct Thresholds;
}
