// Encode a half-band signal with 1, 2 and 3 passes (optionally on a
// quantization grid) and decode it back.

use iqpredict::{generate, rap_decode, rap_encode, GeneratorSpec, NormalizationMode, RapConfig, Result};

pub fn run_example() -> Result<()> {
    let (seq, _) = generate(&GeneratorSpec::with_ratio(0.5, 16384, NormalizationMode::MeanMagnitude, 42))?;
    println!("input mean |x| = {:.4}", seq.mean_abs());
    for passes in 1..=3 {
        let base = RapConfig::published(passes).expect("published set");
        // rounding noise is white, and each later pass lifts it near Nyquist by up to 1/eps
        for quant in [None, Some(4096u32), Some(64)] {
            let config = match quant {
                Some(n) => base.clone().with_quant_step(1.0 / n as f64)?,
                None => base.clone(),
            };
            let stream = rap_encode(&seq, &config)?;
            let back = rap_decode(&stream)?;
            println!(
                "{passes} pass(es), step {:<7} mean |r| = {:.4}, max error after decode {:.1e}",
                quant.map_or("none".to_string(), |n| format!("1/{n}")),
                stream.residuals.mean_abs(),
                back.max_component_error(&seq)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
