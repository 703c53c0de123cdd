//! Residual metrics and method selection.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rap::{rap_decode, rap_encode_with, RapConfig, RapStream};
use crate::sequence::{ComplexSequence, ResidualPrecision};
use crate::spectrum::fft;
use crate::timecorr::{tc_decode, tc_encode_with, TimeCorrMode, TimeCorrStream};

/// Fraction of the peak bin magnitude above which a bin counts as occupied.
pub const OCCUPANCY_THRESHOLD: f64 = 0.1;

/// Smoothing factor of the time-correlation candidate used for selection.
pub const SELECTION_TIMECORR_EPSILON: f64 = 0.01;

/// Candidate prediction methods.
///
/// `TimeCorr` is the adaptive time correlation with
/// [`SELECTION_TIMECORR_EPSILON`]; it is causal and carries no side
/// information, like the other candidates. `Rap(n)` is the published
/// `n`-pass residual-as-prediction parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Bypass,
    TimeCorr,
    Rap(u8),
}

impl MethodKind {
    pub const ALL: [MethodKind; 5] = [
        MethodKind::Bypass,
        MethodKind::TimeCorr,
        MethodKind::Rap(1),
        MethodKind::Rap(2),
        MethodKind::Rap(3),
    ];

    /// Encodes `seq` with this method.
    pub fn encode(self, seq: &ComplexSequence, precision: ResidualPrecision) -> Result<Encoded> {
        match self {
            MethodKind::Bypass => Ok(Encoded::Bypass(ComplexSequence::new(
                seq.iter().map(|&z| precision.round(z)).collect(),
            )?)),
            MethodKind::TimeCorr => {
                let mode = TimeCorrMode::Adaptive {
                    epsilon: SELECTION_TIMECORR_EPSILON,
                };
                tc_encode_with(seq, mode, precision).map(Encoded::TimeCorr)
            }
            MethodKind::Rap(passes) => {
                let config = RapConfig::published(passes as usize)
                    .ok_or_else(|| Error::InvalidConfig(format!("no published {passes}-pass set")))?;
                rap_encode_with(seq, &config, precision).map(Encoded::Rap)
            }
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodKind::Bypass => f.write_str("bypass"),
            MethodKind::TimeCorr => f.write_str("timecorr"),
            MethodKind::Rap(n) => write!(f, "rap{n}"),
        }
    }
}

impl FromStr for MethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bypass" => Ok(MethodKind::Bypass),
            "timecorr" => Ok(MethodKind::TimeCorr),
            "rap1" => Ok(MethodKind::Rap(1)),
            "rap2" => Ok(MethodKind::Rap(2)),
            "rap3" => Ok(MethodKind::Rap(3)),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// Output of any of the supported encoders.
#[derive(Clone, Debug, PartialEq)]
pub enum Encoded {
    Bypass(ComplexSequence),
    TimeCorr(TimeCorrStream),
    Rap(RapStream),
}

impl Encoded {
    pub fn residuals(&self) -> &ComplexSequence {
        match self {
            Encoded::Bypass(seq) => seq,
            Encoded::TimeCorr(s) => &s.residuals,
            Encoded::Rap(s) => &s.residuals,
        }
    }

    pub fn decode(&self) -> Result<ComplexSequence> {
        match self {
            Encoded::Bypass(seq) => Ok(seq.clone()),
            Encoded::TimeCorr(s) => tc_decode(s),
            Encoded::Rap(s) => rap_decode(s),
        }
    }
}

/// How a method is chosen for a sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SelectionPolicy {
    /// Encode with every candidate and keep the smallest residual.
    PickBest,
    /// Map an occupied-bandwidth fraction onto a method.
    ByBandwidth(f64),
}

/// Estimated compressed/original size ratio when residual amplitudes shrink
/// by `amplitude_ratio` for components stored with `bits_per_component` bits.
///
/// Models the saving as `-log2(amplitude_ratio)` bits per component. The
/// result is clamped to `[1/bits, 1]`.
pub fn estimate_compression_factor(amplitude_ratio: f64, bits_per_component: u32) -> Result<f64> {
    if !(amplitude_ratio > 0.0) || !amplitude_ratio.is_finite() {
        return Err(Error::Domain(format!("amplitude ratio {amplitude_ratio} must be positive")));
    }
    if bits_per_component < 2 {
        return Err(Error::Domain(format!(
            "{bits_per_component} bits per component; at least 2 required"
        )));
    }
    let bits = f64::from(bits_per_component);
    Ok(((bits + amplitude_ratio.log2()) / bits).clamp(1.0 / bits, 1.0))
}

/// Fraction of DFT bins whose magnitude exceeds 10% of the largest bin.
pub fn estimate_bandwidth(seq: &ComplexSequence) -> Result<f64> {
    let mags: Vec<f64> = fft(seq)?.iter().map(|z| z.norm()).collect();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::DegenerateInput("all-zero sequence has no bandwidth"));
    }
    let cutoff = OCCUPANCY_THRESHOLD * peak;
    let occupied = mags.iter().filter(|&&m| m > cutoff).count();
    Ok(occupied as f64 / mags.len() as f64)
}

/// Band policy: time correlation below 8%, three passes up to 74%, one pass
/// up to 85%, no prediction beyond.
pub fn select_by_bandwidth(bw_fraction: f64) -> MethodKind {
    if bw_fraction < 0.08 {
        MethodKind::TimeCorr
    } else if bw_fraction <= 0.74 {
        MethodKind::Rap(3)
    } else if bw_fraction <= 0.85 {
        MethodKind::Rap(1)
    } else {
        MethodKind::Bypass
    }
}

/// Result of [`pick_best`].
#[derive(Clone, Debug)]
pub struct Selection {
    pub method: MethodKind,
    pub encoded: Encoded,
    pub mean_abs: f64,
    /// Mean residual magnitude of every candidate, in candidate order.
    pub scores: Vec<(MethodKind, f64)>,
}

/// Encodes with every candidate and keeps the one with the smallest mean
/// residual magnitude. Earlier candidates win ties.
pub fn pick_best(seq: &ComplexSequence, candidates: &[MethodKind]) -> Result<Selection> {
    pick_best_with(seq, candidates, ResidualPrecision::F64)
}

pub fn pick_best_with(
    seq: &ComplexSequence,
    candidates: &[MethodKind],
    precision: ResidualPrecision,
) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::InvalidConfig("no candidate methods".into()));
    }
    let encoded: Vec<(MethodKind, Encoded, f64)> = candidates
        .par_iter()
        .map(|&m| {
            let enc = m.encode(seq, precision)?;
            let score = enc.residuals().mean_abs();
            Ok((m, enc, score))
        })
        .collect::<Result<_>>()?;
    let scores = encoded.iter().map(|(m, _, s)| (*m, *s)).collect();
    let (method, encoded, mean_abs) = encoded
        .into_iter()
        .reduce(|best, next| if next.2 < best.2 { next } else { best })
        .expect("candidates is non-empty");
    Ok(Selection {
        method,
        encoded,
        mean_abs,
        scores,
    })
}

/// Applies `policy` to `seq` and encodes with the chosen method.
pub fn select(seq: &ComplexSequence, policy: SelectionPolicy, precision: ResidualPrecision) -> Result<Selection> {
    match policy {
        SelectionPolicy::PickBest => pick_best_with(seq, &MethodKind::ALL, precision),
        SelectionPolicy::ByBandwidth(bw) => {
            if !(0.0..=1.0).contains(&bw) {
                return Err(Error::Domain(format!("bandwidth fraction {bw} outside [0, 1]")));
            }
            let method = select_by_bandwidth(bw);
            let encoded = method.encode(seq, precision)?;
            let mean_abs = encoded.residuals().mean_abs();
            Ok(Selection {
                method,
                encoded,
                mean_abs,
                scores: vec![(method, mean_abs)],
            })
        }
    }
}
