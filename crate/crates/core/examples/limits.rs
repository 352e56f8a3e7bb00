//! β → 0 and β → ∞ classification for a few coupling vectors.

use potts_invest::{
    classify_limits, per_capita_investment, CouplingProfile, ModelParams, StencilConfig,
};

fn main() -> potts_invest::Result<()> {
    let cases = [
        vec![0.5, -2.0, 1.0, 0.0],
        vec![-1.0, -1.0, 2.0],
        vec![3.0, 1.0, 2.0],
        vec![1.0, 1.0],
        vec![0.0, 0.0, 1.0],
    ];
    for j in cases {
        let params = ModelParams::new(CouplingProfile::new(j.clone())?, 100.0)?;
        let lim = classify_limits(&params);
        let l100 = per_capita_investment(&params, &StencilConfig::default())?;
        println!(
            "J = {j:?}: beta_zero {}  beta_infinity {:?}  unique_min {}  l(100) = {l100:.6}",
            lim.beta_zero, lim.beta_infinity, lim.unique_min
        );
    }
    Ok(())
}
