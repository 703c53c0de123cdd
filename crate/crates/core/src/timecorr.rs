//! One-tap time-correlation prediction.
//!
//! The predictor coefficient is the normalized unit-delay autocorrelation
//!
//! ```text
//! timecorr = Σ s[t]·conj(s[t-1]) / Σ |s[t-1]|²      (t = 1..len-1)
//! ```
//!
//! and each sample is predicted as `timecorr · s[t-1]`. Two modes exist:
//! [`TimeCorrMode::FullSequence`] computes the coefficient once over the whole
//! sequence and ships it with the stream; [`TimeCorrMode::Adaptive`] tracks it
//! with a one-pole IIR filter that the decoder can rebuild on its own.
//!
//! The encoder updates its predictor from the samples the decoder will
//! reconstruct (closed loop), so encoder and decoder states never drift apart.

use crate::error::{Error, Result};
use crate::sequence::{ComplexSequence, ResidualPrecision, Sample};

/// Added to the adaptive update's denominator to keep it away from zero.
pub const ADAPTIVE_DENOM_GUARD: f64 = 1e-40;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeCorrMode {
    /// Fixed coefficient computed over the whole sequence.
    FullSequence,
    /// Coefficient tracked per sample with smoothing factor `epsilon` in (0, 1).
    Adaptive { epsilon: f64 },
}

impl TimeCorrMode {
    fn validate(&self) -> Result<()> {
        match *self {
            TimeCorrMode::FullSequence => Ok(()),
            TimeCorrMode::Adaptive { epsilon } if epsilon > 0.0 && epsilon < 1.0 => Ok(()),
            TimeCorrMode::Adaptive { epsilon } => Err(Error::InvalidConfig(format!(
                "adaptive epsilon {epsilon} outside (0, 1)"
            ))),
        }
    }
}

/// Residual sequence plus everything needed to rebuild the original.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeCorrStream {
    /// Same length as the input; `residuals[0]` is the first input sample.
    pub residuals: ComplexSequence,
    pub mode: TimeCorrMode,
    /// Coefficient used by [`TimeCorrMode::FullSequence`]; `None` otherwise.
    pub timecorr: Option<Sample>,
}

/// Normalized unit-delay autocorrelation of `seq`.
pub fn full_time_correlation(seq: &[Sample]) -> Result<Sample> {
    if seq.len() < 2 {
        return Err(Error::DegenerateInput("time correlation needs at least two samples"));
    }
    let (num, den) = seq
        .windows(2)
        .fold((Sample::new(0.0, 0.0), 0.0), |(num, den), w| {
            (num + w[1] * w[0].conj(), den + w[0].norm_sqr())
        });
    if den == 0.0 {
        return Err(Error::DegenerateInput("all samples preceding the last are zero"));
    }
    Ok(num / den)
}

/// Predictor state shared by encoder and decoder.
struct Predictor {
    mode: TimeCorrMode,
    coeff: Sample,
}

impl Predictor {
    fn new(mode: TimeCorrMode, timecorr: Option<Sample>) -> Self {
        let coeff = match mode {
            TimeCorrMode::FullSequence => timecorr.unwrap_or_default(),
            TimeCorrMode::Adaptive { .. } => Sample::new(0.0, 0.0),
        };
        Self { mode, coeff }
    }

    fn predict(&self, prev: Sample) -> Sample {
        self.coeff * prev
    }

    fn update(&mut self, cur: Sample, prev: Sample) {
        if let TimeCorrMode::Adaptive { epsilon } = self.mode {
            let inst = (cur * prev.conj()) / (prev.norm_sqr() + ADAPTIVE_DENOM_GUARD);
            self.coeff = self.coeff * (1.0 - epsilon) + inst * epsilon;
        }
    }
}

/// Encodes `seq` with 64-bit residuals.
pub fn tc_encode(seq: &ComplexSequence, mode: TimeCorrMode) -> Result<TimeCorrStream> {
    tc_encode_with(seq, mode, ResidualPrecision::F64)
}

/// Encodes `seq`, rounding each residual to `precision` before it feeds back
/// into the predictor.
///
/// In full-sequence mode a sequence whose correlation is undefined (a single
/// sample, or zeros everywhere but the end) is coded with coefficient zero.
pub fn tc_encode_with(
    seq: &ComplexSequence,
    mode: TimeCorrMode,
    precision: ResidualPrecision,
) -> Result<TimeCorrStream> {
    mode.validate()?;
    let timecorr = match mode {
        TimeCorrMode::FullSequence => Some(full_time_correlation(seq).unwrap_or_default()),
        TimeCorrMode::Adaptive { .. } => None,
    };
    let mut predictor = Predictor::new(mode, timecorr);
    let first = precision.round(seq[0]);
    let mut residuals = Vec::with_capacity(seq.len());
    residuals.push(first);
    let mut prev = first;
    for &cur in &seq[1..] {
        let pred = predictor.predict(prev);
        let r = precision.round(cur - pred);
        let rebuilt = r + pred;
        predictor.update(rebuilt, prev);
        residuals.push(r);
        prev = rebuilt;
    }
    Ok(TimeCorrStream {
        residuals: ComplexSequence::new(residuals)?,
        mode,
        timecorr,
    })
}

/// Rebuilds the original sequence from a stream.
pub fn tc_decode(stream: &TimeCorrStream) -> Result<ComplexSequence> {
    stream
        .mode
        .validate()
        .map_err(|e| Error::MalformedStream(e.to_string()))?;
    if stream.mode == TimeCorrMode::FullSequence && stream.timecorr.is_none() {
        return Err(Error::MalformedStream(
            "full-sequence stream carries no time correlation".into(),
        ));
    }
    let res = &stream.residuals;
    let mut predictor = Predictor::new(stream.mode, stream.timecorr);
    let mut out = Vec::with_capacity(res.len());
    out.push(res[0]);
    let mut prev = res[0];
    for &r in &res[1..] {
        let cur = r + predictor.predict(prev);
        predictor.update(cur, prev);
        out.push(cur);
        prev = cur;
    }
    ComplexSequence::new(out)
}
