//! Exact ground states of the Lipkin-Meshkov-Glick model in the Dicke basis,
//! and the two-spin coherence, steered coherence and correlation measures
//! built from them, with their finite-size scaling.
//!
//! The usual entry point is [`evaluate`], which solves one parameter point
//! and returns every measure. [`scaling`] fits exponents over N, and
//! [`validation`] checks each fast path against a brute-force oracle.

pub mod baselines;
pub mod coherence;
pub mod correlations;
pub mod entropy;
pub mod error;
pub mod hamiltonian;
pub mod measures;
pub mod params;
pub mod pipeline;
pub mod qubit;
pub mod reduced;
pub mod report;
pub mod scaling;
pub mod solver;
pub mod steered;
pub mod validation;

pub use coherence::CoherencePair;
pub use correlations::CorrelationPair;
pub use error::{LmgError, Result};
pub use measures::{Measure, MeasureSet};
pub use params::{DickeSector, ModelParams, Parity, Phase};
pub use pipeline::{evaluate, PointMeasures};
pub use reduced::{CollectiveMoments, SingleSpinState, TwoSpinXState};
pub use scaling::{fit_slope, MeasureSeries, ScalingFit, ScalingRun, Transform};
pub use solver::{global_ground_state, GroundStateSolution};
pub use steered::{GridResolution, MeasurementDirection, SteeredPair};
pub use validation::{run_validation, ValidationOptions, ValidationReport};
