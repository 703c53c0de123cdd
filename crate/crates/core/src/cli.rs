//! Command-line front end. `main.rs` only forwards to [`run`].

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{run_magnitude_sweep, run_spectrum_experiment, SweepConfig, DEFAULT_SPECTRUM_LEN};
use crate::generator::{generate, GeneratorSpec};
use crate::iq_file::{read_iq, write_iq, IqFormat};
use crate::meta::Meta;
use crate::rap::{rap_encode_with, RapConfig};
use crate::select::{estimate_bandwidth, pick_best_with, select, select_by_bandwidth, Encoded, MethodKind, SelectionPolicy};
use crate::sequence::NormalizationMode;
use crate::spectrum::magnitude_spectrum;
use crate::timecorr::{tc_encode_with, TimeCorrMode};

#[derive(Debug, Parser)]
#[command(name = "iqpredict", version, about = "Residual coding of complex I/Q sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Norm {
    Mag,
    Power,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FileFormat {
    Cf32,
    Csv,
}

impl From<FileFormat> for IqFormat {
    fn from(f: FileFormat) -> Self {
        match f {
            FileFormat::Cf32 => IqFormat::Cf32,
            FileFormat::Csv => IqFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Timecorr,
    Rap1,
    Rap2,
    Rap3,
    AutoBest,
    AutoBw,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a band-limited random-phase test sequence.
    Generate {
        /// Occupied fraction of the sampling bandwidth, centred on DC.
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = 65536)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mag")]
        norm: Norm,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to csv for *.csv paths, cf32 otherwise.
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
    },
    /// Turn samples into residuals plus a sidecar describing the coder.
    Encode {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        /// Per-pass damping factors, comma separated.
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Per-pass saturation thresholds, comma separated.
        #[arg(long, value_delimiter = ',')]
        sat: Option<Vec<f64>>,
        /// Rotate every prediction by this phase (radians).
        #[arg(long)]
        rotate: Option<f64>,
        /// Round predictions to multiples of this step.
        #[arg(long)]
        quant: Option<f64>,
        /// Use the adaptive time correlation with this smoothing factor.
        #[arg(long)]
        tc_eps: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
    },
    /// Rebuild samples from residuals and their sidecar.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
    },
    /// Write the DC-centred magnitude spectrum of a file as CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Factor the magnitudes are multiplied by.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
    },
    /// Mean residual magnitude versus occupied bandwidth, as CSV.
    Sweep {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 65536)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Residual spectra of time correlation and residual-as-prediction.
    Spectra {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SPECTRUM_LEN)]
        len: usize,
    },
    /// Report which method each selection policy picks for a file.
    Select {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
    },
}

fn resolve(path: &Path, format: Option<FileFormat>) -> IqFormat {
    format.map(IqFormat::from).unwrap_or_else(|| IqFormat::from_path(path))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return Err(Error::InvalidConfig(first.to_string()));
        }
    };
    match cli.command {
        Command::Generate {
            ratio,
            len,
            seed,
            norm,
            out: path,
            format,
        } => {
            if !(0.0..=1.0).contains(&ratio) {
                return Err(Error::InvalidConfig(format!("ratio {ratio} outside [0, 1]")));
            }
            let mode = match norm {
                Norm::Mag => NormalizationMode::MeanMagnitude,
                Norm::Power => NormalizationMode::RmsPower,
            };
            let (seq, normalization) = generate(&GeneratorSpec::with_ratio(ratio, len, mode, seed))?;
            write_iq(&path, resolve(&path, format), &seq)?;
            writeln!(out, "wrote {} samples (normalization {normalization:?})", seq.len())?;
        }
        Command::Encode {
            method,
            input,
            out: path,
            meta,
            eps,
            sat,
            rotate,
            quant,
            tc_eps,
            format,
        } => {
            let seq = read_iq(&input, resolve(&input, format))?;
            let out_format = resolve(&path, format);
            let precision = out_format.precision();
            let is_rap = matches!(method, Method::Rap1 | Method::Rap2 | Method::Rap3);
            if !is_rap && (eps.is_some() || sat.is_some() || rotate.is_some() || quant.is_some()) {
                return Err(Error::InvalidConfig(
                    "--eps, --sat, --rotate and --quant apply only to rap methods".into(),
                ));
            }
            if method != Method::Timecorr && tc_eps.is_some() {
                return Err(Error::InvalidConfig("--tc-eps applies only to --method timecorr".into()));
            }
            // rap sidecars are written as given so the phase survives exactly
            let mut given = None;
            let encoded = match method {
                Method::Timecorr => {
                    let mode = match tc_eps {
                        Some(epsilon) => TimeCorrMode::Adaptive { epsilon },
                        None => TimeCorrMode::FullSequence,
                    };
                    Encoded::TimeCorr(tc_encode_with(&seq, mode, precision)?)
                }
                Method::Rap1 | Method::Rap2 | Method::Rap3 => {
                    let passes = match method {
                        Method::Rap1 => 1,
                        Method::Rap2 => 2,
                        _ => 3,
                    };
                    let published = RapConfig::published(passes).expect("published set");
                    let sidecar = Meta::Rap {
                        epsilons: eps.unwrap_or(published.epsilons),
                        thresholds: sat.unwrap_or(published.thresholds),
                        rotate,
                        quant,
                    };
                    let config = sidecar.rap_config()?;
                    given = Some(sidecar);
                    Encoded::Rap(rap_encode_with(&seq, &config, precision)?)
                }
                Method::AutoBest => pick_best_with(&seq, &MethodKind::ALL, precision)?.encoded,
                Method::AutoBw => {
                    let bw = estimate_bandwidth(&seq)?;
                    select(&seq, SelectionPolicy::ByBandwidth(bw), precision)?.encoded
                }
            };
            let sidecar = match given {
                Some(m) => m,
                None => Meta::describe(&encoded)?,
            };
            write_iq(&path, out_format, encoded.residuals())?;
            sidecar.write(&meta)?;
            writeln!(
                out,
                "encoded {} samples; mean |residual| {:.6} (input {:.6})",
                seq.len(),
                encoded.residuals().mean_abs(),
                seq.mean_abs()
            )?;
        }
        Command::Decode {
            input,
            meta,
            out: path,
            format,
        } => {
            let residuals = read_iq(&input, resolve(&input, format))?;
            let sidecar = Meta::read(&meta)?;
            let seq = sidecar.attach(residuals)?.decode()?;
            write_iq(&path, resolve(&path, format), &seq)?;
            writeln!(out, "decoded {} samples", seq.len())?;
        }
        Command::Analyze {
            input,
            out: path,
            scale,
            format,
        } => {
            let seq = read_iq(&input, resolve(&input, format))?;
            let spectrum = magnitude_spectrum(&seq, scale)?;
            let mut w = create(&path)?;
            writeln!(w, "freq,magnitude")?;
            for (f, m) in spectrum.freqs.iter().zip(&spectrum.mags) {
                writeln!(w, "{f:?},{m:?}")?;
            }
            w.flush()?;
            writeln!(out, "wrote {} bins", spectrum.len())?;
        }
        Command::Sweep {
            out: path,
            trials,
            len,
            seed,
        } => {
            let cfg = SweepConfig {
                trials,
                seq_len: len,
                seed,
                ..SweepConfig::default()
            };
            let result = run_magnitude_sweep(&cfg)?;
            let mut w = create(&path)?;
            result.write_csv(&mut w)?;
            w.flush()?;
            writeln!(out, "wrote {} rows", result.rows.len())?;
        }
        Command::Spectra { out_dir, seed, len } => {
            let tables = run_spectrum_experiment(seed, len)?;
            fs::create_dir_all(&out_dir)?;
            for (name, table) in [("timecorr_spectra.csv", &tables.timecorr), ("rap_spectra.csv", &tables.rap)] {
                let mut w = create(&out_dir.join(name))?;
                table.write_csv(&mut w)?;
                w.flush()?;
            }
            writeln!(out, "wrote timecorr_spectra.csv and rap_spectra.csv to {}", out_dir.display())?;
        }
        Command::Select { input, format } => {
            let seq = read_iq(&input, resolve(&input, format))?;
            let bw = estimate_bandwidth(&seq)?;
            let best = pick_best_with(&seq, &MethodKind::ALL, resolve(&input, format).precision())?;
            writeln!(out, "input mean_abs: {:.6}", seq.mean_abs())?;
            writeln!(out, "estimated bandwidth: {bw:.4}")?;
            writeln!(out, "by-bandwidth: {}", select_by_bandwidth(bw))?;
            writeln!(out, "pick-best: {} (mean_abs {:.6})", best.method, best.mean_abs)?;
            for (method, score) in &best.scores {
                writeln!(out, "  {method:<8} {score:.6}")?;
            }
        }
    }
    Ok(())
}
