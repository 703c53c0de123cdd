// Residuals on disk: write a cf32 capture, encode it to a residual file plus
// a sidecar, then decode from the files alone.

use iqpredict::iq_file::{read_iq, write_iq, IqFormat};
use iqpredict::meta::Meta;
use iqpredict::select::MethodKind;
use iqpredict::{generate, GeneratorSpec, NormalizationMode, Result};

pub fn run_example() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("iqpredict-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (capture, residual_path, meta_path) = (dir.join("capture.cf32"), dir.join("residual.cf32"), dir.join("residual.meta"));

    let (seq, _) = generate(&GeneratorSpec::with_ratio(0.6, 4096, NormalizationMode::MeanMagnitude, 9))?;
    write_iq(&capture, IqFormat::Cf32, &seq)?;

    let input = read_iq(&capture, IqFormat::Cf32)?;
    // residuals stored as f32 feed the encoder's own state, so decoding stays exact
    let encoded = MethodKind::Rap(3).encode(&input, IqFormat::Cf32.precision())?;
    write_iq(&residual_path, IqFormat::Cf32, encoded.residuals())?;
    Meta::describe(&encoded)?.write(&meta_path)?;
    print!("{}", std::fs::read_to_string(&meta_path)?);

    let residuals = read_iq(&residual_path, IqFormat::Cf32)?;
    let back = Meta::read(&meta_path)?.attach(residuals)?.decode()?;
    println!("max error after decode: {:.2e}", back.max_component_error(&input));
    println!("mean |x| {:.4} -> mean |r| {:.4}", input.mean_abs(), encoded.residuals().mean_abs());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
