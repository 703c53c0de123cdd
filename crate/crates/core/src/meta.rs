//! Plain-text sidecar describing how a residual file was produced.
//!
//! One `key=value` pair per line, UTF-8. Blank lines and lines starting with
//! `#` are ignored. Recognized keys:
//!
//! | key                         | used by            |
//! |-----------------------------|--------------------|
//! | `method`                    | all: `bypass`, `timecorr` or `rap` |
//! | `tc_mode`                   | timecorr: `full` or `adaptive` |
//! | `tc_eps`                    | timecorr, adaptive |
//! | `timecorr_re`, `timecorr_im`| timecorr, full     |
//! | `passes`                    | rap                |
//! | `eps.N`, `sat.N`            | rap, `N` = 1..=passes |
//! | `rotate`                    | rap, phase in radians (optional) |
//! | `quant`                     | rap, prediction grid step (optional) |
//!
//! Unknown keys, duplicate keys and keys that do not belong to the method are
//! rejected. Numbers are written in shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rap::{RapConfig, RapStream};
use crate::select::Encoded;
use crate::sequence::{ComplexSequence, Sample};
use crate::timecorr::{TimeCorrMode, TimeCorrStream};

#[derive(Clone, Debug, PartialEq)]
pub enum Meta {
    Bypass,
    TimeCorr {
        mode: TimeCorrMode,
        timecorr: Option<Sample>,
    },
    Rap {
        epsilons: Vec<f64>,
        thresholds: Vec<f64>,
        /// Rotation phase in radians; the phasor is `e^(i·rotate)`.
        rotate: Option<f64>,
        quant: Option<f64>,
    },
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedStream(msg.into())
}

impl Meta {
    /// Residual-as-prediction configuration described by this sidecar.
    pub fn rap_config(&self) -> Result<RapConfig> {
        let Meta::Rap {
            epsilons,
            thresholds,
            rotate,
            quant,
        } = self
        else {
            return Err(malformed("sidecar does not describe a residual-as-prediction stream"));
        };
        let mut config = RapConfig::new(epsilons.clone(), thresholds.clone())?;
        if let Some(phase) = rotate {
            config = config.with_rotation(Sample::from_polar(1.0, *phase))?;
        }
        if let Some(step) = quant {
            config = config.with_quant_step(*step)?;
        }
        Ok(config)
    }

    /// Sidecar for an encoded stream. Rotation is recorded as the phasor's
    /// argument, so decoding rebuilds the phasor from that phase.
    pub fn describe(encoded: &Encoded) -> Result<Meta> {
        Ok(match encoded {
            Encoded::Bypass(_) => Meta::Bypass,
            Encoded::TimeCorr(s) => Meta::TimeCorr {
                mode: s.mode,
                timecorr: s.timecorr,
            },
            Encoded::Rap(s) => {
                if s.config.init_prediction_override.is_some() {
                    return Err(Error::InvalidConfig(
                        "an initial prediction override cannot be stored in a sidecar".into(),
                    ));
                }
                Meta::Rap {
                    epsilons: s.config.epsilons.clone(),
                    thresholds: s.config.thresholds.clone(),
                    rotate: s.config.rotation.map(|r| r.arg()),
                    quant: s.config.quant_step,
                }
            }
        })
    }

    /// Pairs residuals read from disk with this sidecar.
    pub fn attach(&self, residuals: ComplexSequence) -> Result<Encoded> {
        Ok(match self {
            Meta::Bypass => Encoded::Bypass(residuals),
            Meta::TimeCorr { mode, timecorr } => Encoded::TimeCorr(TimeCorrStream {
                residuals,
                mode: *mode,
                timecorr: *timecorr,
            }),
            Meta::Rap { .. } => Encoded::Rap(RapStream {
                residuals,
                config: self
                    .rap_config()
                    .map_err(|e| malformed(e.to_string()))?,
            }),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Meta::Bypass => out.push_str("method=bypass\n"),
            Meta::TimeCorr { mode, timecorr } => {
                out.push_str("method=timecorr\n");
                match mode {
                    TimeCorrMode::FullSequence => out.push_str("tc_mode=full\n"),
                    TimeCorrMode::Adaptive { epsilon } => {
                        let _ = write!(out, "tc_mode=adaptive\ntc_eps={epsilon:?}\n");
                    }
                }
                if let Some(tc) = timecorr {
                    let _ = write!(out, "timecorr_re={:?}\ntimecorr_im={:?}\n", tc.re, tc.im);
                }
            }
            Meta::Rap {
                epsilons,
                thresholds,
                rotate,
                quant,
            } => {
                let _ = writeln!(out, "method=rap\npasses={}", epsilons.len());
                for (i, (e, s)) in epsilons.iter().zip(thresholds).enumerate() {
                    let _ = write!(out, "eps.{n}={e:?}\nsat.{n}={s:?}\n", n = i + 1);
                }
                if let Some(phase) = rotate {
                    let _ = writeln!(out, "rotate={phase:?}");
                }
                if let Some(step) = quant {
                    let _ = writeln!(out, "quant={step:?}");
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Meta> {
        let mut fields = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| malformed(format!("line {}: expected key=value", n + 1)))?;
            let key = key.trim();
            if fields.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(malformed(format!("duplicate key '{key}'")));
            }
        }
        let mut fields = Fields(fields);
        let method = fields.take("method")?;
        let meta = match method.as_str() {
            "bypass" => Meta::Bypass,
            "timecorr" => {
                let mode = match fields.take("tc_mode")?.as_str() {
                    "full" => TimeCorrMode::FullSequence,
                    "adaptive" => TimeCorrMode::Adaptive {
                        epsilon: fields.take_f64("tc_eps")?,
                    },
                    other => return Err(malformed(format!("unknown tc_mode '{other}'"))),
                };
                let timecorr = match mode {
                    TimeCorrMode::FullSequence => Some(Sample::new(
                        fields.take_f64("timecorr_re")?,
                        fields.take_f64("timecorr_im")?,
                    )),
                    TimeCorrMode::Adaptive { .. } => None,
                };
                Meta::TimeCorr { mode, timecorr }
            }
            "rap" => {
                let passes: usize = fields
                    .take("passes")?
                    .parse()
                    .map_err(|_| malformed("passes is not a positive integer"))?;
                if passes == 0 {
                    return Err(malformed("passes must be at least 1"));
                }
                let mut epsilons = Vec::with_capacity(passes);
                let mut thresholds = Vec::with_capacity(passes);
                for n in 1..=passes {
                    epsilons.push(fields.take_f64(&format!("eps.{n}"))?);
                    thresholds.push(fields.take_f64(&format!("sat.{n}"))?);
                }
                Meta::Rap {
                    epsilons,
                    thresholds,
                    rotate: fields.take_opt_f64("rotate")?,
                    quant: fields.take_opt_f64("quant")?,
                }
            }
            other => return Err(malformed(format!("unknown method '{other}'"))),
        };
        if let Some(key) = fields.0.keys().next() {
            return Err(malformed(format!("unexpected key '{key}' for method {method}")));
        }
        if let Meta::Rap { .. } = meta {
            meta.rap_config().map_err(|e| malformed(e.to_string()))?;
        }
        Ok(meta)
    }

    pub fn read(path: &Path) -> Result<Meta> {
        let text = std::fs::read_to_string(path)?;
        Meta::parse(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            msg: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn take(&mut self, key: &str) -> Result<String> {
        self.0
            .remove(key)
            .ok_or_else(|| malformed(format!("missing key '{key}'")))
    }

    fn take_f64(&mut self, key: &str) -> Result<f64> {
        let raw = self.take(key)?;
        raw.parse()
            .map_err(|_| malformed(format!("{key}: '{raw}' is not a number")))
    }

    fn take_opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        if self.0.contains_key(key) {
            self.take_f64(key).map(Some)
        } else {
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rap_text_layout() {
        let meta = Meta::Rap {
            epsilons: vec![0.012, 0.01],
            thresholds: vec![2.5, 2.2],
            rotate: Some(0.25),
            quant: None,
        };
        let text = meta.to_text();
        assert_eq!(
            text,
            "method=rap\npasses=2\neps.1=0.012\nsat.1=2.5\neps.2=0.01\nsat.2=2.2\nrotate=0.25\n"
        );
        assert_eq!(Meta::parse(&text).unwrap(), meta);
    }

    #[test]
    fn timecorr_round_trip() {
        for meta in [
            Meta::TimeCorr {
                mode: TimeCorrMode::FullSequence,
                timecorr: Some(Sample::new(0.1 + 0.2, -1.0 / 3.0)),
            },
            Meta::TimeCorr {
                mode: TimeCorrMode::Adaptive { epsilon: 0.01 },
                timecorr: None,
            },
            Meta::Bypass,
        ] {
            assert_eq!(Meta::parse(&meta.to_text()).unwrap(), meta);
        }
    }

    #[test]
    fn infinite_threshold_survives() {
        let meta = Meta::Rap {
            epsilons: vec![0.0],
            thresholds: vec![f64::INFINITY],
            rotate: None,
            quant: Some(0.5),
        };
        assert_eq!(Meta::parse(&meta.to_text()).unwrap(), meta);
    }

    #[test]
    fn rejects_bad_sidecars() {
        let bad = [
            "",
            "method=lzma\n",
            "method=bypass\nfoo=1\n",
            "method=bypass\nmethod=bypass\n",
            "method=bypass\neps.1=0.1\n",
            "method=timecorr\ntc_mode=full\n",
            "method=timecorr\ntc_mode=adaptive\n",
            "method=timecorr\ntc_mode=adaptive\ntc_eps=0.1\ntimecorr_re=1\ntimecorr_im=0\n",
            "method=rap\npasses=2\neps.1=0.1\nsat.1=1\n",
            "method=rap\npasses=1\neps.1=0.1\nsat.1=1\neps.2=0.1\n",
            "method=rap\npasses=1\neps.1=abc\nsat.1=1\n",
            "method=rap\npasses=1\neps.1=0.1\nsat.1=-1\n",
            "method=rap\npasses=0\n",
            "method rap\n",
        ];
        for text in bad {
            assert!(Meta::parse(text).is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn comments_and_whitespace() {
        let meta = Meta::parse("# produced by hand\n\n method = bypass \n").unwrap();
        assert_eq!(meta, Meta::Bypass);
    }
}
