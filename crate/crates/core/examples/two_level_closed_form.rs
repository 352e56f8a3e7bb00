//! q = 2: numeric l(β) against the closed form, and the β → ∞ table.

use potts_invest::analytic::{investment_q2, limit_q2};
use potts_invest::{per_capita_investment, CouplingProfile, ModelParams, StencilConfig};

fn main() -> potts_invest::Result<()> {
    let cfg = StencilConfig::default();
    for (j0, j1) in [(1.0, -1.0), (-0.5, 0.8), (2.0, 2.0), (0.3, 1.7)] {
        let base = ModelParams::new(CouplingProfile::new(vec![j0, j1])?, 0.0)?;
        println!("J = ({j0}, {j1}), beta -> infinity: {:?}", limit_q2(j0, j1));
        for beta in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let numeric = per_capita_investment(&base.clone().with_beta(beta)?, &cfg)?;
            let exact = investment_q2(beta, j0, j1);
            println!(
                "  beta {beta:>4}: numeric {numeric:.12}  closed {exact:.12}  |diff| {:.1e}",
                (numeric - exact).abs()
            );
        }
    }
    Ok(())
}
