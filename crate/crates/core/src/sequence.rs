//! Complex sample sequences and the magnitude statistics shared by every
//! predictor.
//!
//! A [`ComplexSequence`] is never empty and never holds NaN or infinite
//! samples. Every predictor in this crate is a recursive filter, so a single
//! non-finite sample would poison the remainder of a stream; the check happens
//! once at construction instead.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single I/Q sample.
pub type Sample = Complex64;

/// Non-empty, finite sequence of complex samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSequence(Vec<Sample>);

impl ComplexSequence {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(index) = samples.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(samples))
    }

    /// Builds a sequence from real values (imaginary parts zero).
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&re| Sample::new(re, 0.0)).collect())
    }

    /// Wraps samples produced internally from already-validated data.
    ///
    /// Callers guarantee non-emptiness; finiteness is checked in debug builds.
    pub(crate) fn from_trusted(samples: Vec<Sample>) -> Self {
        debug_assert!(!samples.is_empty());
        Self(samples)
    }

    pub fn as_slice(&self) -> &[Sample] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Sample> {
        self.0
    }

    /// Arithmetic mean of sample magnitudes.
    pub fn mean_abs(&self) -> f64 {
        mean_abs(&self.0)
    }

    /// Root-mean-square magnitude.
    pub fn rms(&self) -> f64 {
        let power: f64 = self.0.iter().map(|z| z.norm_sqr()).sum();
        (power / self.0.len() as f64).sqrt()
    }

    /// Multiplies every sample by a real factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|z| z * factor).collect())
    }

    /// Divides the sequence by a positive scalar chosen by `mode`, returning
    /// the scaled sequence and the divisor that was used.
    pub fn normalize(&self, mode: NormalizationMode) -> Result<(Self, f64)> {
        let divisor = match mode {
            NormalizationMode::MeanMagnitude => self.mean_abs(),
            NormalizationMode::RmsPower => self.rms(),
        };
        if !(divisor > 0.0) || !divisor.is_finite() {
            return Err(Error::DegenerateInput("cannot normalize an all-zero sequence"));
        }
        let samples = self.0.iter().map(|z| z / divisor).collect();
        Ok((Self::from_trusted(samples), divisor))
    }

    /// Largest componentwise absolute difference against another sequence of
    /// the same length.
    pub fn max_component_error(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "sequence lengths differ");
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a.re - b.re).abs().max((a.im - b.im).abs()))
            .fold(0.0, f64::max)
    }
}

impl Deref for ComplexSequence {
    type Target = [Sample];

    fn deref(&self) -> &[Sample] {
        &self.0
    }
}

impl TryFrom<Vec<Sample>> for ComplexSequence {
    type Error = Error;

    fn try_from(samples: Vec<Sample>) -> Result<Self> {
        Self::new(samples)
    }
}

/// How [`ComplexSequence::normalize`] picks its divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationMode {
    /// Divide by the mean magnitude, so the result has `mean_abs() == 1`.
    MeanMagnitude,
    /// Divide by the RMS magnitude, so the result has unit average power.
    RmsPower,
}

/// Precision at which residuals are stored.
///
/// Encoders round every residual to this precision before replaying the
/// decoder's state update, so a stream stored at `F32` still decodes with
/// predictor state identical to the encoder's.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResidualPrecision {
    #[default]
    F64,
    F32,
}

impl ResidualPrecision {
    pub fn round(self, z: Sample) -> Sample {
        match self {
            ResidualPrecision::F64 => z,
            ResidualPrecision::F32 => Sample::new(z.re as f32 as f64, z.im as f32 as f64),
        }
    }
}

/// Mean magnitude of a slice; zero for an empty slice.
pub fn mean_abs(samples: &[Sample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|z| z.norm()).sum::<f64>() / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[(f64, f64)]) -> ComplexSequence {
        ComplexSequence::new(v.iter().map(|&(re, im)| Sample::new(re, im)).collect()).unwrap()
    }

    #[test]
    fn mean_abs_examples() {
        assert_eq!(seq(&[(1.0, 0.0), (0.0, 1.0)]).mean_abs(), 1.0);
        assert_eq!(seq(&[(0.0, 0.0); 3]).mean_abs(), 0.0);
        assert_eq!(seq(&[(3.0, 4.0)]).mean_abs(), 5.0);
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(ComplexSequence::new(vec![]), Err(Error::EmptySequence)));
        let bad = vec![Sample::new(1.0, 0.0), Sample::new(f64::NAN, 0.0)];
        assert!(matches!(ComplexSequence::new(bad), Err(Error::NonFinite { index: 1 })));
        let inf = vec![Sample::new(0.0, f64::INFINITY)];
        assert!(matches!(ComplexSequence::new(inf), Err(Error::NonFinite { index: 0 })));
    }

    #[test]
    fn normalize_constant() {
        let (n, d) = seq(&[(2.0, 0.0); 3])
            .normalize(NormalizationMode::MeanMagnitude)
            .unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(n.as_slice(), &[Sample::new(1.0, 0.0); 3]);
    }

    #[test]
    fn normalize_mixed() {
        let (n, d) = seq(&[(3.0, 4.0), (0.0, 0.0)])
            .normalize(NormalizationMode::MeanMagnitude)
            .unwrap();
        assert_eq!(d, 2.5);
        assert!((n[0] - Sample::new(1.2, 1.6)).norm() < 1e-15);
        assert_eq!(n[1], Sample::new(0.0, 0.0));
    }

    #[test]
    fn normalize_rms() {
        let (n, d) = seq(&[(3.0, 4.0), (0.0, 0.0)])
            .normalize(NormalizationMode::RmsPower)
            .unwrap();
        assert!((d - (12.5f64).sqrt()).abs() < 1e-15);
        assert!((n.rms() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_all_zero_is_degenerate() {
        for mode in [NormalizationMode::MeanMagnitude, NormalizationMode::RmsPower] {
            let r = seq(&[(0.0, 0.0); 2]).normalize(mode);
            assert!(matches!(r, Err(Error::DegenerateInput(_))));
        }
    }
}
