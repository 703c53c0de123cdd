// Residual spectra for time correlation at three bandwidths and for
// residual-as-prediction at half band. Prints band averages; pass a
// directory to also write the two CSV tables.
//
// ```text
// cargo run --release --example residual_spectra -- /tmp/spectra
// ```

use std::fs::File;
use std::io::BufWriter;

use iqpredict::experiments::run_spectrum_experiment;
use iqpredict::Result;

fn report(tables: &iqpredict::experiments::SpectrumTables) {
    let near_dc = |f: f64| f.abs() < 0.01 && f != 0.0;
    for name in ["timecorr_0.2", "timecorr_0.5", "timecorr_0.8"] {
        let dc = tables.timecorr.mean_where(name, near_dc).unwrap_or(f64::NAN);
        let edge = tables.timecorr.mean_where(name, |f| (0.3..0.39).contains(&f.abs())).unwrap_or(f64::NAN);
        println!("{name:<14} near DC {dc:.3}   |f| in 0.30..0.39 {edge:.3}");
    }
    for name in ["rap1", "rap2_mm10", "rap3_mm10"] {
        let dc = tables.rap.mean_where(name, near_dc).unwrap_or(f64::NAN);
        let edge = tables.rap.mean_where(name, |f| (0.2..0.24).contains(&f.abs())).unwrap_or(f64::NAN);
        println!("{name:<14} near DC {dc:.3}   |f| in 0.20..0.24 {edge:.3}");
    }
}

pub fn run_example() -> Result<()> {
    let tables = run_spectrum_experiment(0, 65536)?;
    report(&tables);
    if let Some(dir) = std::env::args().nth(1).filter(|_| cfg!(not(test))) {
        std::fs::create_dir_all(&dir)?;
        tables.timecorr.write_csv(BufWriter::new(File::create(format!("{dir}/timecorr_spectra.csv"))?))?;
        tables.rap.write_csv(BufWriter::new(File::create(format!("{dir}/rap_spectra.csv"))?))?;
        println!("wrote {dir}/timecorr_spectra.csv and {dir}/rap_spectra.csv");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
