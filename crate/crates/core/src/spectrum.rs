//! DFT-based magnitude spectra.
//!
//! Transform convention: the forward transform uses `e^(-i2πkn/N)` with no
//! scaling and the inverse applies `1/N`. The generator, the Parseval checks
//! and the spectrum scaling all rely on this pairing.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::sequence::{ComplexSequence, Sample};

fn check_pow2(len: usize) -> Result<()> {
    if len.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::UnsupportedLength(len))
    }
}

/// Forward DFT of a power-of-two-length slice.
pub fn fft(samples: &[Sample]) -> Result<Vec<Sample>> {
    check_pow2(samples.len())?;
    let mut buf = samples.to_vec();
    FftPlanner::<f64>::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    Ok(buf)
}

/// Inverse DFT (scaled by `1/N`) of a power-of-two-length slice.
pub fn ifft(bins: &[Sample]) -> Result<Vec<Sample>> {
    check_pow2(bins.len())?;
    let mut buf = bins.to_vec();
    FftPlanner::<f64>::new()
        .plan_fft_inverse(buf.len())
        .process(&mut buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}

/// Forward DFT of a sequence.
pub fn dft(seq: &ComplexSequence) -> Result<ComplexSequence> {
    fft(seq).map(ComplexSequence::from_trusted)
}

/// Inverse DFT of a sequence of bins.
pub fn inverse_dft(bins: &ComplexSequence) -> Result<ComplexSequence> {
    ifft(bins).map(ComplexSequence::from_trusted)
}

/// Rotates a slice so that index 0 (DC) lands at `len / 2`.
pub fn fftshift<T: Clone>(values: &[T]) -> Vec<T> {
    let half = values.len() / 2;
    let mut out = Vec::with_capacity(values.len());
    out.extend_from_slice(&values[values.len() - half..]);
    out.extend_from_slice(&values[..values.len() - half]);
    out
}

/// DC-centred magnitude spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Relative frequency of each bin, `k/len - 0.5`.
    pub freqs: Vec<f64>,
    pub mags: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.mags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mags.is_empty()
    }

    /// Mean magnitude over bins whose frequency satisfies `pred`.
    pub fn mean_where(&self, pred: impl Fn(f64) -> bool) -> Option<f64> {
        let (sum, n) = self
            .freqs
            .iter()
            .zip(&self.mags)
            .filter(|(f, _)| pred(**f))
            .fold((0.0, 0usize), |(s, n), (_, m)| (s + m, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    /// Returns a copy whose magnitudes are smoothed with [`moving_mean`].
    pub fn smoothed(&self, window: usize) -> Spectrum {
        Spectrum {
            freqs: self.freqs.clone(),
            mags: moving_mean(&self.mags, window),
        }
    }
}

/// Relative frequency axis for a DC-centred spectrum of `len` bins.
pub fn frequency_axis(len: usize) -> Vec<f64> {
    (0..len).map(|k| k as f64 / len as f64 - 0.5).collect()
}

/// `|DFT(seq)|`, shifted so DC sits in the middle, times `normalization`.
///
/// Passing the divisor returned by the generator makes each unit-magnitude
/// generated component read as 1.0.
pub fn magnitude_spectrum(seq: &[Sample], normalization: f64) -> Result<Spectrum> {
    let bins = fft(seq)?;
    let mags = fftshift(&bins)
        .into_iter()
        .map(|z| z.norm() * normalization)
        .collect();
    Ok(Spectrum {
        freqs: frequency_axis(seq.len()),
        mags,
    })
}

/// Centred moving average with windows that shrink at the ends.
///
/// Index `k` averages `values[k - w/2 ..= k + (w-1)/2]`, clipped to the slice.
/// For even windows this puts one more element before `k` than after it.
pub fn moving_mean(values: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    let before = window / 2;
    let after = (window - 1) / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        prefix.push(acc);
    }
    (0..values.len())
        .map(|k| {
            let lo = k.saturating_sub(before);
            let hi = (k + after).min(values.len() - 1);
            (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64
        })
        .collect()
}

/// Magnitude response `1 / |1 + (1-ε)e^(-i2πf)|` of a single undamped-clamp
/// residual-as-prediction pass at relative frequency `f`.
pub fn rap_transfer_magnitude(f: f64, epsilon: f64) -> f64 {
    let feedback = Complex64::from_polar(1.0 - epsilon, -2.0 * PI * f);
    1.0 / (Complex64::new(1.0, 0.0) + feedback).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Sample {
        Sample::new(re, 0.0)
    }

    fn naive_dft(x: &[Sample]) -> Vec<Sample> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (k * t % n) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn impulse_and_dc() {
        let imp = fft(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!(imp.iter().all(|z| (z - c(1.0)).norm() < 1e-15));
        let dc = fft(&[c(1.0); 4]).unwrap();
        assert!((dc[0] - c(4.0)).norm() < 1e-15);
        assert!(dc[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(fft(&[c(1.0); 3]), Err(Error::UnsupportedLength(3))));
        assert!(matches!(ifft(&[c(1.0); 6]), Err(Error::UnsupportedLength(6))));
        assert!(matches!(magnitude_spectrum(&[c(1.0); 12], 1.0), Err(Error::UnsupportedLength(12))));
    }

    #[test]
    fn forward_sign_convention() {
        // e^(+i2πt/8) concentrates in bin 1 under the e^(-i...) convention.
        let x: Vec<Sample> = (0..8).map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / 8.0)).collect();
        let bins = fft(&x).unwrap();
        assert!((bins[1] - c(8.0)).norm() < 1e-12);
        let naive = naive_dft(&x);
        for (a, b) in bins.iter().zip(&naive) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn fftshift_even_length() {
        assert_eq!(fftshift(&[0, 1, 2, 3]), vec![2, 3, 0, 1]);
        assert_eq!(frequency_axis(4), vec![-0.5, -0.25, 0.0, 0.25]);
    }

    #[test]
    fn moving_mean_examples() {
        let v = [1.0, 5.0, 2.0, 8.0];
        assert_eq!(moving_mean(&v, 1), v.to_vec());
        assert_eq!(moving_mean(&[1.0; 4], 10), vec![1.0; 4]);
        let m = moving_mean(&[0.0, 0.0, 4.0, 0.0, 0.0], 3);
        let want = [0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0, 0.0];
        for (a, b) in m.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn moving_mean_even_window_leans_back() {
        // window 2: average of previous and current element
        let m = moving_mean(&[2.0, 4.0, 6.0], 2);
        assert_eq!(m, vec![2.0, 3.0, 5.0]);
    }

    #[test]
    fn transfer_magnitude_examples() {
        assert!((rap_transfer_magnitude(0.0, 1e-12) - 0.5).abs() < 1e-12);
        assert!((rap_transfer_magnitude(0.5, 0.01) - 100.0).abs() < 1e-9);
        for f in [-0.5, -0.2, 0.0, 0.13, 0.5] {
            assert!((rap_transfer_magnitude(f, 1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn transfer_magnitude_even_and_increasing() {
        for eps in [0.007, 0.03, 0.5] {
            let mut prev = 0.0;
            for k in 0..=100 {
                let f = 0.5 * k as f64 / 100.0;
                let m = rap_transfer_magnitude(f, eps);
                assert!((m - rap_transfer_magnitude(-f, eps)).abs() < 1e-12 * m);
                assert!(m > prev);
                prev = m;
            }
        }
    }

    #[test]
    fn zero_input_spectrum() {
        let s = magnitude_spectrum(&[c(0.0); 8], 3.0).unwrap();
        assert!(s.mags.iter().all(|&m| m == 0.0));
        assert_eq!(s.len(), 8);
    }
}
