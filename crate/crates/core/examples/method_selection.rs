// Picking a predictor: by measured bandwidth, or by trying all of them.

use iqpredict::generator::trial_seed;
use iqpredict::select::{estimate_compression_factor, MethodKind};
use iqpredict::{estimate_bandwidth, generate, pick_best, select_by_bandwidth, GeneratorSpec, NormalizationMode, Result};

pub fn run_example() -> Result<()> {
    for (i, ratio) in [0.02, 0.05, 0.3, 0.5, 0.8, 0.9].into_iter().enumerate() {
        let spec = GeneratorSpec::with_ratio(ratio, 16384, NormalizationMode::MeanMagnitude, trial_seed(1, i, 0));
        let (seq, _) = generate(&spec)?;
        let bw = estimate_bandwidth(&seq)?;
        let best = pick_best(&seq, &MethodKind::ALL)?;
        let factor = estimate_compression_factor(best.mean_abs / seq.mean_abs(), 10)?;
        println!(
            "ratio {ratio:.2}: measured {bw:.3}, by band {:<8} best {:<8} mean |r| {:.3}, ~{:.3} of 10-bit size",
            select_by_bandwidth(bw).to_string(),
            best.method.to_string(),
            best.mean_abs,
            factor
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
