// A single complex tone: time correlation predicts it perfectly, while
// residual-as-prediction (with the tone's rotation applied) leaves a residual
// of half the tone's magnitude.

use std::f64::consts::PI;

use iqpredict::{full_time_correlation, rap_encode, tc_encode, ComplexSequence, RapConfig, Result, Sample, TimeCorrMode};

pub fn run_example() -> Result<()> {
    let omega = 2.0 * PI * 0.1;
    let tone = ComplexSequence::new((0..8192).map(|t| Sample::from_polar(1.0, omega * t as f64)).collect())?;

    let tc = full_time_correlation(&tone)?;
    println!("time correlation: |tc| = {:.6}, phase = {:.6} (tone step {:.6})", tc.norm(), tc.arg(), omega);
    let tc_res = tc_encode(&tone, TimeCorrMode::FullSequence)?.residuals;
    println!("time correlation residual mean |r| past t=0: {:.2e}", iqpredict::sequence::mean_abs(&tc_res[1..]));

    let plain = RapConfig::published(1).expect("1-pass set");
    let rotated = plain.clone().with_rotation(Sample::from_polar(1.0, omega))?;
    for (name, config) in [("no rotation", plain), ("rotated", rotated)] {
        let res = rap_encode(&tone, &config)?.residuals;
        println!("rap1 {name:<12} steady |r| = {:.5}", iqpredict::sequence::mean_abs(&res[6000..]));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
