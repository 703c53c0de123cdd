//! Band-limited test sequences with flat, random-phase spectra.
//!
//! A sequence of `len` samples is built in the frequency domain: bins
//! `1..=P` and the top `P` bins get unit-magnitude phasors with uniformly
//! random phase, everything else (including DC) is zero. The inverse DFT of
//! that array is normalized and returned together with the divisor.
//!
//! Random phases come from ChaCha8 seeded with the 64-bit `seed`, so the same
//! spec always yields bit-identical samples on the same platform.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sequence::{ComplexSequence, NormalizationMode, Sample};
use crate::spectrum::ifft;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    /// Occupied fraction on the positive side of DC, in `[0, 0.5]`. Zero
    /// means a single tone in bin 1.
    pub frac_pos_buckets: f64,
    pub seq_len: usize,
    pub norm_mode: NormalizationMode,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Spec for a sequence occupying `ratio` of the sampling bandwidth in
    /// total, split evenly around DC.
    pub fn with_ratio(ratio: f64, seq_len: usize, norm_mode: NormalizationMode, seed: u64) -> Self {
        Self {
            frac_pos_buckets: ratio / 2.0,
            seq_len,
            norm_mode,
            seed,
        }
    }

    /// Number of occupied bins above and below DC.
    pub fn bucket_counts(&self) -> (usize, usize) {
        if self.frac_pos_buckets == 0.0 {
            (1, 0)
        } else {
            let pos = (self.frac_pos_buckets * self.seq_len as f64).floor() as usize;
            (pos, pos)
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.seq_len.is_power_of_two() {
            return Err(Error::UnsupportedLength(self.seq_len));
        }
        if !(0.0..=0.5).contains(&self.frac_pos_buckets) {
            return Err(Error::InvalidConfig(format!(
                "frac_pos_buckets {} outside [0, 0.5]",
                self.frac_pos_buckets
            )));
        }
        let (pos, _) = self.bucket_counts();
        if pos > self.seq_len / 2 {
            return Err(Error::TooManySlots {
                slots: pos,
                max: self.seq_len / 2,
            });
        }
        Ok(())
    }

    /// The pre-normalization frequency-domain array.
    pub fn frequency_bins(&self) -> Result<Vec<Sample>> {
        self.validate()?;
        let (pos, neg) = self.bucket_counts();
        let len = self.seq_len;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut bins = vec![Sample::new(0.0, 0.0); len];
        for bin in &mut bins[1..=pos] {
            *bin = Sample::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
        }
        for bin in &mut bins[len - neg..] {
            *bin = Sample::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
        }
        Ok(bins)
    }
}

/// Generates the sequence described by `spec`, returning it normalized along
/// with the normalization divisor.
pub fn generate(spec: &GeneratorSpec) -> Result<(ComplexSequence, f64)> {
    let bins = spec.frequency_bins()?;
    let time = ComplexSequence::new(ifft(&bins)?)?;
    time.normalize(spec.norm_mode)
}

/// SplitMix64 output function. Used to derive independent per-trial seeds.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of ratio index `ratio_index` under base `seed`:
/// `mix(mix(seed ^ mix(ratio_index)) ^ trial)`.
pub fn trial_seed(seed: u64, ratio_index: usize, trial: usize) -> u64 {
    mix_seed(mix_seed(seed ^ mix_seed(ratio_index as u64)) ^ trial as u64)
}
