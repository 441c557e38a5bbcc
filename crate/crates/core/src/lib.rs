//! Secret key rate models for quantum key distribution receivers that pair a
//! fast, noisy detector (which produces the raw key) with a slow, quiet one
//! (which bounds the eavesdropper's information).
//!
//! Covered protocols: BB84 with an ideal single-photon source, asymptotic
//! decoy-state BB84, and Gaussian-modulated coherent-state QKD under direct and
//! reverse reconciliation. Each has a single-detector and a dual-detector rate.
//! On top of those sit distance sweeps, crossover search, nine built-in
//! parameter presets, and the routing-probability analysis for the slow
//! detector.
//!
//! ```
//! use dualqkd::{figure_preset, crossover_distance};
//!
//! let fig = figure_preset(1).unwrap();
//! let x = crossover_distance(&fig.dual, &fig.best_single(), 250.0).unwrap().unwrap();
//! assert!((x.length_km - 124.0).abs() < 10.0);
//! ```

pub mod bb84;
pub mod decoy;
pub mod error;
pub mod gmcs;
pub mod math;
pub mod params;
pub mod practical;
pub mod presets;
pub mod scenario;
pub mod sweep;
pub mod table;

pub use bb84::{bb84_gain, bb84_qber, bb84_rate_dual, bb84_rate_single, Bb84Config};
pub use decoy::{
    decoy_rate_dual, decoy_rate_single, decoy_signal_gain, decoy_signal_qber,
    decoy_single_photon_gain, decoy_single_photon_qber, optimal_mu, DecoyConfig,
};
pub use error::{Error, Result};
pub use gmcs::{
    gmcs_dr_rate_dual, gmcs_dr_rate_single, gmcs_rr_rate_dual, gmcs_rr_rate_single, info_ae,
    info_be, mutual_info_ab, noise_budget, GmcsNoiseBudget,
};
pub use math::{binary_entropy, channel_transmittance, db_to_transmittance, BACKGROUND_ERROR_RATE};
pub use params::{GmcsSource, HomodyneSpec, LinkSpec, SpdSpec};
pub use practical::{
    accumulation_time, choice_probabilities, max_slow_probability, messed_detection_qber,
    multi_pulse_qber, ChoiceProbabilities, Regime, SchedulingParams,
};
pub use presets::{figure_preset, FigurePreset};
pub use scenario::{DetectorSpec, Mode, Protocol, ProtocolConfig, Scenario};
pub use sweep::{
    crossover_distance, max_secure_distance, sweep, Crossover, Envelope, Grid, KeyRate, RateCurve,
    RatePoint,
};
pub use table::{Column, RateTable};
