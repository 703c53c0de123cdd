//! Low-complexity prediction of complex I/Q sequences.
//!
//! Two predictor families turn a sequence into a residual sequence of the
//! same length that decodes back to the original:
//!
//! * [`timecorr`]: one-tap prediction from the unit-delay time correlation,
//!   either fixed over the whole sequence or tracked adaptively.
//! * [`rap`]: residual-as-prediction, where the damped previous residual is
//!   the next prediction, optionally repeated over several passes.
//!
//! Around them sit a band-limited test signal [`generator`], [`spectrum`]
//! analysis, method [`select`]ion, raw I/Q [`iq_file`] I/O with a
//! [`meta`] sidecar, and the [`experiments`] that sweep residual magnitude
//! against occupied bandwidth.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod generator;
pub mod iq_file;
pub mod meta;
pub mod rap;
pub mod select;
pub mod sequence;
pub mod spectrum;
pub mod timecorr;

pub use error::{Error, Result};
pub use generator::{generate, GeneratorSpec};
pub use rap::{rap_decode, rap_encode, RapConfig, RapStream};
pub use select::{estimate_bandwidth, pick_best, select_by_bandwidth, MethodKind};
pub use sequence::{ComplexSequence, NormalizationMode, ResidualPrecision, Sample};
pub use spectrum::{magnitude_spectrum, Spectrum};
pub use timecorr::{full_time_correlation, tc_decode, tc_encode, TimeCorrMode, TimeCorrStream};
