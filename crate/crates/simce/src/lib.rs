//! Channel estimation for stacked-metasurface (SIM) multi-user MISO base stations.
//!
//! A SIM base station stacks `L` programmable metasurface layers in front of a
//! small antenna array. Each meta-atom applies a unit-modulus phase shift to the
//! waves passing through it, so the stack acts as an analog linear stage whose
//! response can be re-programmed per training sub-phase. This crate models the
//! physical stack (Rayleigh-Sommerfeld inter-layer coupling, sinc spatial
//! correlation, log-distance path loss), designs the hybrid estimator — a phase
//! program for the stack plus a per-user digital combiner — by gradient descent
//! on the closed-form NMSE, and validates the closed forms against Monte-Carlo
//! simulation of the pilot protocol.
//!
//! The main entry points:
//!
//! * [`SimConfig`] / [`SimModel`] — declarative configuration and the derived
//!   physical model (geometry, coupling matrices, channel statistics).
//! * [`design_estimator`] — gradient-descent design of the hybrid estimator.
//! * [`codebook_baseline`], [`conventional_mmse`] — the two reference schemes.
//! * [`empirical_nmse`] — Monte-Carlo validation with error bars.
//! * [`ExperimentGrid`] / [`run_grid`] — sweep harness producing CSV tables and
//!   per-figure series files.
//!
//! Runnable end-to-end demonstrations live in `examples/`.

pub mod artifact;
pub mod channel;
pub mod config;
pub mod design;
pub mod estimator;
pub mod experiment;
pub mod geometry;
pub mod gradient;
pub mod linalg;
pub mod lowrank;
pub mod montecarlo;
pub mod phases;
pub mod rng;
pub mod wave;

pub use channel::{
    build_correlation, effective_training_snr, noise_var_for_effective_snr, path_loss,
    ChannelStats, PilotParams, UserStats,
};
pub use config::{SimConfig, SimModel};
pub use design::{
    codebook_baseline, design_estimator, ConvergenceTest, DecayPolicy, DesignHyper,
    EstimatorDesign,
};
pub use estimator::{
    conventional_mmse, min_nmse, nmse_closed_form, optimal_digital_estimator, wave_response,
    ConventionalEstimate, EstimationTarget, ObservationMap,
};
pub use experiment::{
    emit_figure_data, run_grid, CellResult, ExperimentGrid, FigureId, ResultsTable, Scheme,
};
pub use geometry::SimGeometry;
pub use gradient::{nmse_gradient, normalize_gradient, PhaseTensor};
pub use lowrank::{low_rank_reduce, min_subphases, LowRankReduction};
pub use montecarlo::{empirical_nmse, sample_channel, EmpiricalNmse, PilotMatrix, TrialBatch};
pub use phases::PhaseBook;
pub use wave::{build_wave_model, rs_coefficient, WaveModel};

use thiserror::Error;

/// Errors produced by model construction, estimator design, and the
/// experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value; carries the offending field name.
    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },
    /// Physically degenerate layout (coincident elements, empty layers, ...).
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Matrix or tensor shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A linear solve or factorization failed; carries context such as a
    /// condition estimate or the iteration index.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A user channel carries no power (zero covariance trace).
    #[error("degenerate user {0}: channel power is zero")]
    DegenerateUser(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed artifact or results file.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
