// Mean residual magnitude against occupied bandwidth for every method.
// `--full` runs the 10 trial, 65536 sample configuration.

use iqpredict::experiments::{run_magnitude_sweep, SweepConfig};
use iqpredict::Result;

pub fn run_example() -> Result<()> {
    let full = std::env::args().any(|a| a == "--full") && cfg!(not(test));
    let cfg = if full {
        SweepConfig::default()
    } else {
        SweepConfig {
            trials: 3,
            seq_len: 8192,
            ..SweepConfig::default()
        }
    };
    let result = run_magnitude_sweep(&cfg)?;
    println!("ratio  timecorr  rap1    rap2    rap3");
    for r in &result.rows {
        let mark = if r.rap1 < r.timecorr { "  rap1 ahead" } else { "" };
        println!("{:.2}   {:.4}    {:.4}  {:.4}  {:.4}{mark}", r.ratio, r.timecorr, r.rap1, r.rap2, r.rap3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
