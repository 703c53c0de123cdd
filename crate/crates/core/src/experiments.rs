//! Residual magnitude sweeps and residual spectra over generated sequences.
//!
//! Every generated sequence gets its own seed from
//! [`trial_seed`](crate::generator::trial_seed), so results do not depend on
//! how trials are scheduled across threads.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generator::{generate, trial_seed, GeneratorSpec};
use crate::rap::{rap_encode, RapConfig};
use crate::sequence::NormalizationMode;
use crate::spectrum::{frequency_axis, magnitude_spectrum, moving_mean};
use crate::timecorr::{tc_encode, TimeCorrMode};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Occupied-bandwidth fractions, each in `[0, 0.9]`.
    pub ratios: Vec<f64>,
    pub trials: usize,
    pub seq_len: usize,
    pub seed: u64,
    /// Smoothing factor of the adaptive time correlation.
    pub adaptive_eps: f64,
    /// Ratios below this use the adaptive time correlation, the rest the
    /// full-sequence one.
    pub adaptive_cutoff: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ratios: (0..=18).map(|i| i as f64 * 0.05).collect(),
            trials: 10,
            seq_len: 65536,
            seed: 0,
            adaptive_eps: 0.01,
            adaptive_cutoff: 0.2,
        }
    }
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if let Some(r) = self.ratios.iter().find(|r| !(0.0..=0.9).contains(*r)) {
            return Err(Error::InvalidConfig(format!("ratio {r} outside [0, 0.9]")));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("at least one trial is required".into()));
        }
        if !self.seq_len.is_power_of_two() || self.seq_len < 2 {
            return Err(Error::UnsupportedLength(self.seq_len));
        }
        if !(self.adaptive_eps > 0.0 && self.adaptive_eps < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "adaptive epsilon {} outside (0, 1)",
                self.adaptive_eps
            )));
        }
        Ok(())
    }

    fn timecorr_mode(&self, ratio: f64) -> TimeCorrMode {
        if ratio < self.adaptive_cutoff {
            TimeCorrMode::Adaptive {
                epsilon: self.adaptive_eps,
            }
        } else {
            TimeCorrMode::FullSequence
        }
    }
}

/// Trial-averaged mean residual magnitude per method at one ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub ratio: f64,
    pub timecorr: f64,
    pub rap1: f64,
    pub rap2: f64,
    pub rap3: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub const CSV_HEADER: &'static str = "ratio,timecorr,rap1,rap2,rap3";

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(out, "{:?},{:?},{:?},{:?},{:?}", r.ratio, r.timecorr, r.rap1, r.rap2, r.rap3)?;
        }
        Ok(())
    }

    pub fn row(&self, ratio: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| (r.ratio - ratio).abs() < 1e-9)
    }
}

fn trial_means(cfg: &SweepConfig, configs: &[RapConfig; 3], ratio_index: usize) -> Result<[f64; 4]> {
    let ratio = cfg.ratios[ratio_index];
    let per_trial: Vec<[f64; 4]> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let spec = GeneratorSpec::with_ratio(
                ratio,
                cfg.seq_len,
                NormalizationMode::MeanMagnitude,
                trial_seed(cfg.seed, ratio_index, trial),
            );
            let (seq, _) = generate(&spec)?;
            let tc = tc_encode(&seq, cfg.timecorr_mode(ratio))?.residuals.mean_abs();
            let mut out = [tc, 0.0, 0.0, 0.0];
            for (slot, config) in out[1..].iter_mut().zip(configs) {
                *slot = rap_encode(&seq, config)?.residuals.mean_abs();
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut totals = [0.0; 4];
    for means in &per_trial {
        for (t, m) in totals.iter_mut().zip(means) {
            *t += m;
        }
    }
    Ok(totals.map(|t| t / cfg.trials as f64))
}

/// Mean residual magnitude versus occupied bandwidth for time correlation
/// and 1-, 2- and 3-pass residual-as-prediction.
pub fn run_magnitude_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let configs = [1, 2, 3].map(|n| RapConfig::published(n).expect("published set"));
    let rows = (0..cfg.ratios.len())
        .into_par_iter()
        .map(|i| {
            let [timecorr, rap1, rap2, rap3] = trial_means(cfg, &configs, i)?;
            Ok(SweepRow {
                ratio: cfg.ratios[i],
                timecorr,
                rap1,
                rap2,
                rap3,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult { rows })
}

/// Named magnitude columns over a shared DC-centred frequency axis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable {
    pub freqs: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl SpectrumTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    /// Mean of column `name` over bins whose frequency satisfies `pred`.
    pub fn mean_where(&self, name: &str, pred: impl Fn(f64) -> bool) -> Option<f64> {
        let col = self.column(name)?;
        let (sum, n) = self
            .freqs
            .iter()
            .zip(col)
            .filter(|(f, _)| pred(**f))
            .fold((0.0, 0usize), |(s, n), (_, m)| (s + m, n + 1));
        (n > 0).then(|| sum / n as f64)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "freq")?;
        for (name, _) in &self.columns {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for (k, f) in self.freqs.iter().enumerate() {
            write!(out, "{f:?}")?;
            for (_, col) in &self.columns {
                write!(out, ",{:?}", col[k])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Tables behind the residual spectrum plots.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTables {
    /// Original 0.8-bandwidth spectrum plus full-sequence time-correlation
    /// residual spectra at bandwidths 0.2, 0.5 and 0.8.
    pub timecorr: SpectrumTable,
    /// Original 0.5-bandwidth spectrum plus 1-, 2- and 3-pass
    /// residual-as-prediction spectra; the 2- and 3-pass columns are smoothed
    /// with a 10-bin moving mean.
    pub rap: SpectrumTable,
}

pub const DEFAULT_SPECTRUM_LEN: usize = 262_144;
pub const SPECTRUM_SMOOTHING_WINDOW: usize = 10;

/// Builds both spectrum tables. Sequences are power-normalized and every
/// spectrum is scaled back by its sequence's normalization, so occupied
/// bins of an original read 1.0.
pub fn run_spectrum_experiment(seed: u64, seq_len: usize) -> Result<SpectrumTables> {
    let bandwidths = [0.2, 0.5, 0.8];
    let generated = bandwidths
        .par_iter()
        .enumerate()
        .map(|(i, &bw)| {
            let spec = GeneratorSpec::with_ratio(bw, seq_len, NormalizationMode::RmsPower, trial_seed(seed, i, 0));
            generate(&spec)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tc_columns = Vec::new();
    let (seq8, norm8) = &generated[2];
    tc_columns.push(("original_0.8".to_string(), magnitude_spectrum(seq8, *norm8)?.mags));
    for (bw, (seq, norm)) in bandwidths.iter().zip(&generated) {
        let residual = tc_encode(seq, TimeCorrMode::FullSequence)?.residuals;
        tc_columns.push((format!("timecorr_{bw}"), magnitude_spectrum(&residual, *norm)?.mags));
    }

    let (seq5, norm5) = &generated[1];
    let mut rap_columns = vec![("original_0.5".to_string(), magnitude_spectrum(seq5, *norm5)?.mags)];
    let rap_spectra = [1usize, 2, 3]
        .par_iter()
        .map(|&passes| {
            let config = RapConfig::published(passes).expect("published set");
            let residual = rap_encode(seq5, &config)?.residuals;
            let mags = magnitude_spectrum(&residual, *norm5)?.mags;
            Ok(if passes == 1 {
                ("rap1".to_string(), mags)
            } else {
                (
                    format!("rap{passes}_mm{SPECTRUM_SMOOTHING_WINDOW}"),
                    moving_mean(&mags, SPECTRUM_SMOOTHING_WINDOW),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rap_columns.extend(rap_spectra);

    let freqs = frequency_axis(seq_len);
    Ok(SpectrumTables {
        timecorr: SpectrumTable {
            freqs: freqs.clone(),
            columns: tc_columns,
        },
        rap: SpectrumTable {
            freqs,
            columns: rap_columns,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let cfg = SweepConfig::default();
        assert_eq!(cfg.ratios.len(), 19);
        assert_eq!(cfg.ratios[0], 0.0);
        assert!((cfg.ratios[18] - 0.9).abs() < 1e-12);
        assert_eq!((cfg.trials, cfg.seq_len), (10, 65536));
    }

    #[test]
    fn validation() {
        let bad_ratio = SweepConfig {
            ratios: vec![0.95],
            ..SweepConfig::default()
        };
        assert!(run_magnitude_sweep(&bad_ratio).is_err());
        let bad_len = SweepConfig {
            seq_len: 1000,
            ..SweepConfig::default()
        };
        assert!(run_magnitude_sweep(&bad_len).is_err());
        let no_trials = SweepConfig {
            trials: 0,
            ..SweepConfig::default()
        };
        assert!(run_magnitude_sweep(&no_trials).is_err());
    }

    #[test]
    fn small_sweep_is_deterministic_and_csv_shaped() {
        let cfg = SweepConfig {
            ratios: vec![0.0, 0.5],
            trials: 2,
            seq_len: 1024,
            seed: 9,
            ..SweepConfig::default()
        };
        let a = run_magnitude_sweep(&cfg).unwrap();
        assert_eq!(a, run_magnitude_sweep(&cfg).unwrap());
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], SweepResult::CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0.0,"));
    }

    #[test]
    fn spectrum_table_csv() {
        let t = SpectrumTable {
            freqs: vec![-0.5, 0.0],
            columns: vec![("a".into(), vec![1.0, 2.0]), ("b".into(), vec![0.5, 0.25])],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "freq,a,b\n-0.5,1.0,0.5\n0.0,2.0,0.25\n");
        assert_eq!(t.mean_where("b", |f| f < 0.0), Some(0.5));
        assert_eq!(t.mean_where("c", |_| true), None);
    }
}
