//! Aggressive and conservative investors for q = 10, 15, 20.

use potts_invest::{make_profile, sweep_curve, ModelParams, ProfileSpec, StencilConfig};

fn main() -> potts_invest::Result<()> {
    let betas: Vec<f64> = (0..=10).map(f64::from).collect();
    for q in [10, 15, 20] {
        for spec in [ProfileSpec::aggressive(q), ProfileSpec::conservative(q)] {
            let params = ModelParams::new(make_profile(&spec)?, 0.0)?;
            let curve = sweep_curve(&params, &betas, &StencilConfig::default())?;
            let row: Vec<String> = curve.values().map(|l| format!("{l:6.3}")).collect();
            println!("q {q:>2} {:<12?} {}", spec.kind, row.join(" "));
        }
    }
    Ok(())
}
