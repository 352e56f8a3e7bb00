//! Twelve random investors at q = 15, averaged over seeds.
//!
//! Each seed draws a coupling profile with integer entries in `[0, q)`. The
//! mean curve starts at (q−1)/2 and each member settles on the level(s)
//! with the weakest coupling.

use potts_invest::{ensemble_sweep, make_profile, ProfileSpec, StencilConfig};

fn main() -> potts_invest::Result<()> {
    let q = 15;
    let seeds: Vec<u64> = (1..=12).collect();
    let betas: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
    let ens = ensemble_sweep(q, &seeds, &betas, &StencilConfig::default())?;

    println!("seed  min J  argmin       l(0)    l(20)");
    for ((seed, curve), lim) in seeds.iter().zip(&ens.curves).zip(&ens.limits) {
        let profile = make_profile(&ProfileSpec::random(q, *seed))?;
        let (jmin, at) = profile.minima();
        println!(
            "{seed:>4}  {jmin:>5}  {:<10} {:>7.4}  {:>7.4}  limit {}",
            format!("{at:?}"),
            curve.points[0].l,
            curve.last().unwrap().l,
            lim.beta_infinity.map_or("n/a".into(), |v| v.to_string()),
        );
    }
    let mean = &ens.mean_curve;
    println!(
        "mean  l(0) = {}  l(20) = {:.4}",
        mean.points[0].l,
        mean.last().unwrap().l
    );
    Ok(())
}
