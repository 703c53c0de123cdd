//! Residual-as-prediction coding.
//!
//! Each pass predicts the next value of its input as the previous residual,
//! damped by `(1 - ε)` and limited to a magnitude threshold:
//!
//! ```text
//! r[t]      = x[t] - pred[t]
//! pred[t+1] = clamp((1 - ε) · r[t], threshold)  · rotation   (optional)
//! ```
//!
//! With `N` passes, the residual of pass `p` is the input of pass `p + 1` and
//! only the last pass's residual is kept. For a signal centred on DC a single
//! pass halves the near-DC content (`1 / (2 - ε)`) while amplifying the
//! Nyquist region by up to `1 / ε`.
//!
//! Prediction post-processing order is fixed: damp, clamp, rotate, quantize.
//! Thresholds are absolute amplitudes; the published parameter sets assume the
//! input has been normalized to a mean magnitude of 1.

use crate::error::{Error, Result};
use crate::sequence::{ComplexSequence, ResidualPrecision, Sample};

/// Published per-pass damping factors and saturation thresholds.
pub const ONE_PASS: (&[f64], &[f64]) = (&[0.007], &[2.75]);
pub const TWO_PASS: (&[f64], &[f64]) = (&[0.012, 0.01], &[2.5, 2.2]);
pub const THREE_PASS: (&[f64], &[f64]) = (&[0.015, 0.03, 0.01], &[2.4, 1.4, 0.8]);

#[derive(Clone, Debug, PartialEq)]
pub struct RapConfig {
    /// One damping factor per pass, each in `[0, 1)`.
    pub epsilons: Vec<f64>,
    /// One prediction magnitude limit per pass, each `> 0` (may be infinite).
    pub thresholds: Vec<f64>,
    /// Unit phasor applied to every prediction.
    pub rotation: Option<Sample>,
    /// Grid step predictions are rounded to.
    pub quant_step: Option<f64>,
    /// Starting prediction of the first pass in place of the first sample.
    pub init_prediction_override: Option<Sample>,
}

impl RapConfig {
    pub fn new(epsilons: Vec<f64>, thresholds: Vec<f64>) -> Result<Self> {
        let config = Self {
            epsilons,
            thresholds,
            rotation: None,
            quant_step: None,
            init_prediction_override: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// One of the published parameter sets, for 1, 2 or 3 passes.
    pub fn published(passes: usize) -> Option<Self> {
        let (eps, sat) = match passes {
            1 => ONE_PASS,
            2 => TWO_PASS,
            3 => THREE_PASS,
            _ => return None,
        };
        Some(Self::new(eps.to_vec(), sat.to_vec()).expect("published sets are valid"))
    }

    /// Same damping for every pass with no saturation.
    pub fn unclamped(epsilons: Vec<f64>) -> Result<Self> {
        let thresholds = vec![f64::INFINITY; epsilons.len()];
        Self::new(epsilons, thresholds)
    }

    pub fn with_rotation(mut self, rotation: Sample) -> Result<Self> {
        self.rotation = Some(rotation);
        self.validate()?;
        Ok(self)
    }

    pub fn with_quant_step(mut self, step: f64) -> Result<Self> {
        self.quant_step = Some(step);
        self.validate()?;
        Ok(self)
    }

    pub fn with_initial_prediction(mut self, prediction: Sample) -> Result<Self> {
        self.init_prediction_override = Some(prediction);
        self.validate()?;
        Ok(self)
    }

    pub fn passes(&self) -> usize {
        self.epsilons.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.epsilons.is_empty() {
            return bad("at least one pass is required".into());
        }
        if self.epsilons.len() != self.thresholds.len() {
            return bad(format!(
                "{} epsilons but {} thresholds",
                self.epsilons.len(),
                self.thresholds.len()
            ));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..1.0).contains(*e)) {
            return bad(format!("epsilon {e} outside [0, 1)"));
        }
        if let Some(t) = self.thresholds.iter().find(|t| !(**t > 0.0)) {
            return bad(format!("threshold {t} is not positive"));
        }
        if let Some(rot) = self.rotation {
            if !rot.is_finite() || (rot.norm() - 1.0).abs() > 1e-12 {
                return bad(format!("rotation {rot} is not a unit phasor"));
            }
        }
        if let Some(step) = self.quant_step {
            if !(step > 0.0 && step.is_finite()) {
                return bad(format!("quantization step {step} is not a positive number"));
            }
        }
        if let Some(init) = self.init_prediction_override {
            if !init.is_finite() {
                return bad("initial prediction is not finite".into());
            }
        }
        Ok(())
    }

    fn next_prediction(&self, pass: usize, residual: Sample) -> Sample {
        let mut pred = clamp_magnitude(residual * (1.0 - self.epsilons[pass]), self.thresholds[pass]);
        if let Some(rot) = self.rotation {
            pred *= rot;
        }
        if let Some(step) = self.quant_step {
            pred = quantize(pred, step);
        }
        pred
    }
}

/// Scales `z` down to magnitude `threshold` when it exceeds it, keeping phase.
pub fn clamp_magnitude(z: Sample, threshold: f64) -> Sample {
    let mag = z.norm();
    if mag > threshold {
        z * (threshold / mag)
    } else {
        z
    }
}

/// Rounds both components to the nearest multiple of `step`, ties away from
/// zero.
pub fn quantize(z: Sample, step: f64) -> Sample {
    Sample::new((z.re / step).round() * step, (z.im / step).round() * step)
}

/// Last-pass residuals and the configuration that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct RapStream {
    /// Same length as the input; `residuals[0]` is the first input sample.
    pub residuals: ComplexSequence,
    pub config: RapConfig,
}

/// Per-pass prediction state, advanced exactly as the decoder advances it.
struct Predictions<'a> {
    config: &'a RapConfig,
    values: Vec<Sample>,
}

impl<'a> Predictions<'a> {
    fn new(config: &'a RapConfig, first: Sample) -> Self {
        let mut values = vec![Sample::new(0.0, 0.0); config.passes()];
        values[0] = config.init_prediction_override.unwrap_or(first);
        Self { config, values }
    }

    /// Subtracts every pass's prediction from `sample` in pass order.
    fn residual(&self, sample: Sample) -> Sample {
        self.values.iter().fold(sample, |v, pred| v - pred)
    }

    /// Rebuilds the input sample from a last-pass residual, walking the
    /// passes from last to first, and advances every pass's prediction.
    fn reconstruct(&mut self, residual: Sample) -> Sample {
        let mut v = residual;
        for pass in (0..self.values.len()).rev() {
            let pass_residual = v;
            v = pass_residual + self.values[pass];
            self.values[pass] = self.config.next_prediction(pass, pass_residual);
        }
        v
    }
}

/// Encodes `seq` with 64-bit residuals.
pub fn rap_encode(seq: &ComplexSequence, config: &RapConfig) -> Result<RapStream> {
    rap_encode_with(seq, config, ResidualPrecision::F64)
}

/// Encodes `seq`, rounding each last-pass residual to `precision`.
///
/// Prediction state is advanced from the decoder's view of each sample, so a
/// stream decodes with the same predictions the encoder used.
pub fn rap_encode_with(
    seq: &ComplexSequence,
    config: &RapConfig,
    precision: ResidualPrecision,
) -> Result<RapStream> {
    config.validate()?;
    let first = precision.round(seq[0]);
    let mut state = Predictions::new(config, first);
    let mut residuals = Vec::with_capacity(seq.len());
    residuals.push(first);
    for &sample in &seq[1..] {
        let r = precision.round(state.residual(sample));
        state.reconstruct(r);
        residuals.push(r);
    }
    Ok(RapStream {
        residuals: ComplexSequence::new(residuals)?,
        config: config.clone(),
    })
}

/// Rebuilds the original sequence. The configuration must match the one
/// used to encode; a different configuration decodes to a different signal.
pub fn rap_decode(stream: &RapStream) -> Result<ComplexSequence> {
    stream
        .config
        .validate()
        .map_err(|e| Error::MalformedStream(e.to_string()))?;
    let res = &stream.residuals;
    let mut state = Predictions::new(&stream.config, res[0]);
    let mut out = Vec::with_capacity(res.len());
    out.push(res[0]);
    out.extend(res[1..].iter().map(|&r| state.reconstruct(r)));
    ComplexSequence::new(out)
}
