//! Raw I/Q sample files.
//!
//! * `cf32`: interleaved little-endian IEEE-754 `f32` pairs, I then Q, no
//!   header. Samples are narrowed to 32 bits on write.
//! * `csv`: a `re,im` header line followed by one sample per line, written
//!   with enough digits to round-trip `f64` exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sequence::{ComplexSequence, ResidualPrecision, Sample};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IqFormat {
    Cf32,
    Csv,
}

impl IqFormat {
    /// `.csv` files are CSV, everything else is cf32.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => IqFormat::Csv,
            _ => IqFormat::Cf32,
        }
    }

    /// Precision a residual survives storage at.
    pub fn precision(self) -> ResidualPrecision {
        match self {
            IqFormat::Cf32 => ResidualPrecision::F32,
            IqFormat::Csv => ResidualPrecision::F64,
        }
    }
}

impl FromStr for IqFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cf32" => Ok(IqFormat::Cf32),
            "csv" => Ok(IqFormat::Csv),
            other => Err(Error::InvalidConfig(format!("unknown sample format '{other}'"))),
        }
    }
}

fn format_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        msg: msg.into(),
    }
}

pub fn read_iq(path: &Path, format: IqFormat) -> Result<ComplexSequence> {
    let samples = match format {
        IqFormat::Cf32 => read_cf32(path)?,
        IqFormat::Csv => read_csv(path)?,
    };
    ComplexSequence::new(samples).map_err(|e| format_err(path, e.to_string()))
}

pub fn write_iq(path: &Path, format: IqFormat, samples: &[Sample]) -> Result<()> {
    match format {
        IqFormat::Cf32 => write_cf32(path, samples),
        IqFormat::Csv => write_csv(path, samples),
    }
}

fn read_cf32(path: &Path) -> Result<Vec<Sample>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() % 8 != 0 {
        return Err(format_err(
            path,
            format!("{} bytes is not a whole number of cf32 samples", bytes.len()),
        ));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Sample::new(f64::from(re), f64::from(im))
        })
        .collect())
}

fn write_cf32(path: &Path, samples: &[Sample]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for z in samples {
        out.write_all(&(z.re as f32).to_le_bytes())?;
        out.write_all(&(z.im as f32).to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format_err(path, e.to_string()))?;
    let header = reader.headers().map_err(|e| format_err(path, e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != ["re", "im"] {
        return Err(format_err(path, "expected header 're,im'"));
    }
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_err(path, e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| format_err(path, format!("line {}: expected two numbers", line + 2)))
        };
        samples.push(Sample::new(field(0)?, field(1)?));
    }
    Ok(samples)
}

fn write_csv(path: &Path, samples: &[Sample]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "re,im")?;
    for z in samples {
        writeln!(out, "{:?},{:?}", z.re, z.im)?;
    }
    out.flush()?;
    Ok(())
}
