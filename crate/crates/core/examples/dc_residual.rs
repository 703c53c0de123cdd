// A constant input fed through one pass of residual-as-prediction.
//
// With no damping the residual flips between two values forever; a small
// epsilon lets it settle at half the input.
//
// ```text
// cargo run --example dc_residual
// ```

use iqpredict::{rap_encode, ComplexSequence, RapConfig, Result, Sample};

pub fn run_example() -> Result<()> {
    let seq = ComplexSequence::from_real(&[10.0; 16])?;
    let undamped = RapConfig::new(vec![0.0], vec![1e30])?.with_initial_prediction(Sample::new(20.0, 0.0))?;
    let res = rap_encode(&seq, &undamped)?.residuals;
    let re: Vec<f64> = res.iter().map(|z| z.re).collect();
    println!("eps = 0, first prediction 20: {re:?}");

    let long = ComplexSequence::from_real(&[10.0; 4096])?;
    let damped = RapConfig::new(vec![0.01], vec![1e30])?;
    let res = rap_encode(&long, &damped)?.residuals;
    for t in [1, 2, 3, 10, 100, 1000, 4000] {
        println!("eps = 0.01, residual[{t:>4}] = {:.4}", res[t].re);
    }
    // settles at x / (2 - eps)
    println!("limit 10 / 1.99 = {:.4}", 10.0 / 1.99);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
