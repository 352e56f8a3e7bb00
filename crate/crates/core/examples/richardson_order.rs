//! Error of the two- and four-point field stencils.

use potts_invest::derivatives::{central_difference, richardson_difference};
use potts_invest::{
    per_capita_investment, CouplingProfile, IntegrableCase, ModelParams, StencilConfig,
    StencilOrder,
};

fn main() -> potts_invest::Result<()> {
    let f = |x: f64| x.sin() + (2.0 * x).exp();
    let exact = 1.0_f64.cos() + 2.0 * 2.0_f64.exp();
    println!("f = sin x + e^(2x) at x = 1");
    let mut prev: Option<f64> = None;
    for h in [0.2, 0.1, 0.05, 0.025] {
        let e1 = (central_difference(f, 1.0, h) - exact).abs();
        let e2 = (richardson_difference(f, 1.0, h) - exact).abs();
        let ratio = prev.map_or(String::new(), |p| format!("  ratio {:.2}", p / e2));
        println!("  h {h:<6} two-point {e1:.3e}  four-point {e2:.3e}{ratio}");
        prev = Some(e2);
    }

    let params = ModelParams::new(CouplingProfile::new(vec![0.0, 0.0, -1.0])?, 2.0)?;
    let exact = IntegrableCase::detect(&params).unwrap().investment(2.0);
    println!("l(2) for J = (0, 0, -1), exact {exact:.15}");
    for xi in [1e-1, 1e-2, 1e-3] {
        let cfg = StencilConfig::default().with_xi(xi);
        let two = per_capita_investment(&params, &cfg.with_order(StencilOrder::TwoPoint))?;
        let four = per_capita_investment(&params, &cfg)?;
        println!(
            "  xi {xi:<6} two-point err {:.3e}  four-point err {:.3e}",
            (two - exact).abs(),
            (four - exact).abs()
        );
    }
    Ok(())
}
