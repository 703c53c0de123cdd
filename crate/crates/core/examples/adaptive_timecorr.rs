// Full-sequence time correlation against the adaptive estimate on a
// narrow-band signal, and how both collapse as bandwidth grows.

use iqpredict::{full_time_correlation, generate, tc_decode, tc_encode, GeneratorSpec, NormalizationMode, Result, TimeCorrMode};

pub fn run_example() -> Result<()> {
    for ratio in [0.0, 0.05, 0.2, 0.5, 0.9] {
        let (seq, _) = generate(&GeneratorSpec::with_ratio(ratio, 16384, NormalizationMode::MeanMagnitude, 5))?;
        let tc = full_time_correlation(&seq)?;
        let full = tc_encode(&seq, TimeCorrMode::FullSequence)?;
        let adaptive = tc_encode(&seq, TimeCorrMode::Adaptive { epsilon: 0.01 })?;
        assert!(tc_decode(&adaptive)?.max_component_error(&seq) < 1e-9);
        println!(
            "ratio {ratio:.2}: |tc| {:.4}  full mean |r| {:.4}  adaptive mean |r| {:.4}",
            tc.norm(),
            full.residuals.mean_abs(),
            adaptive.residuals.mean_abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
