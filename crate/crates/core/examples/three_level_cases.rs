//! q = 3 with a single non-zero coupling: the three solvable cases.

use potts_invest::derivatives::{closed_form_curve, sweep_curve};
use potts_invest::{CouplingProfile, IntegrableCase, ModelParams, StencilConfig};

fn main() -> potts_invest::Result<()> {
    let betas: Vec<f64> = (0..=16).map(|k| k as f64 * 5.0).collect();
    let cfg = StencilConfig::default();
    for j in [-1.0, 1.0] {
        for couplings in [vec![0.0, 0.0, j], vec![0.0, j, 0.0], vec![j, 0.0, 0.0]] {
            let params = ModelParams::new(CouplingProfile::new(couplings)?, 0.0)?;
            let case = IntegrableCase::detect(&params).expect("solvable");
            let numeric = sweep_curve(&params, &betas, &cfg)?;
            let exact = closed_form_curve(&params, &betas)?;
            let max_err = numeric
                .values()
                .zip(exact.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            println!(
                "{:<28} l(80) = {:.6}  limit {:?}  max |numeric - closed| = {max_err:.1e}",
                case.describe(),
                numeric.last().unwrap().l,
                case.limit(),
            );
        }
    }
    Ok(())
}
