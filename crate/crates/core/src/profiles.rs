//! Investor coupling profiles and multi-seed ensembles.
//!
//! * aggressive: `J(k) = −(k + 1)`
//! * conservative: `J(k) = −(q − k)`
//! * random: `J(k) = ⌊u·q⌋` with `u` uniform on `[0, 1)`
//!
//! Random profiles draw from ChaCha8 (`rand_chacha` 0.3) seeded through
//! `SeedableRng::seed_from_u64(seed)`. Each coupling consumes one `next_u64`
//! output `x`, mapped to `u = (x >> 11) · 2⁻⁵³`. Both steps are fixed by the
//! crate's value-stability guarantee, so a seed yields the same profile on
//! every platform.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{classify_limits, LimitClassification};
use crate::derivatives::{check_grid, sweep_curve, CurvePoint, InvestmentCurve, StencilConfig};
use crate::error::{Error, Result};
use crate::model::{CouplingProfile, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Aggressive,
    Conservative,
    Random,
}

impl std::str::FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aggressive" => Ok(Self::Aggressive),
            "conservative" => Ok(Self::Conservative),
            "random" => Ok(Self::Random),
            other => Err(Error::invalid(format!(
                "unknown profile '{other}' (expected aggressive, conservative or random)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    pub q: usize,
    pub seed: Option<u64>,
}

impl ProfileSpec {
    pub fn aggressive(q: usize) -> Self {
        Self {
            kind: ProfileKind::Aggressive,
            q,
            seed: None,
        }
    }

    pub fn conservative(q: usize) -> Self {
        Self {
            kind: ProfileKind::Conservative,
            q,
            seed: None,
        }
    }

    pub fn random(q: usize, seed: u64) -> Self {
        Self {
            kind: ProfileKind::Random,
            q,
            seed: Some(seed),
        }
    }
}

/// Uniform `[0, 1)` double from one 64-bit output.
fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn make_profile(spec: &ProfileSpec) -> Result<CouplingProfile> {
    let q = spec.q;
    if q < 2 {
        return Err(Error::invalid(format!("profiles need q >= 2, got {q}")));
    }
    let values = match spec.kind {
        ProfileKind::Aggressive => (0..q).map(|k| -((k + 1) as f64)).collect(),
        ProfileKind::Conservative => (0..q).map(|k| -((q - k) as f64)).collect(),
        ProfileKind::Random => {
            let seed = spec
                .seed
                .ok_or_else(|| Error::invalid("random profile requires a seed"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..q)
                .map(|_| ((unit_interval(&mut rng) * q as f64).floor() as usize).min(q - 1) as f64)
                .collect()
        }
    };
    CouplingProfile::new(values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedEnsemble {
    pub seeds: Vec<u64>,
    pub curves: Vec<InvestmentCurve>,
    /// Pointwise mean of `curves` on the shared grid.
    pub mean_curve: InvestmentCurve,
    /// `β` limits of each member, in seed order.
    pub limits: Vec<LimitClassification>,
}

/// One curve per random-profile seed, plus their mean.
pub fn ensemble_sweep(
    q: usize,
    seeds: &[u64],
    betas: &[f64],
    cfg: &StencilConfig,
) -> Result<SeedEnsemble> {
    let members = seeds
        .iter()
        .map(|&seed| Ok((seed, make_profile(&ProfileSpec::random(q, seed))?)))
        .collect::<Result<Vec<_>>>()?;
    ensemble_over(&members, betas, cfg)
}

/// Ensemble over explicitly supplied `(tag, profile)` members.
pub fn ensemble_over(
    members: &[(u64, CouplingProfile)],
    betas: &[f64],
    cfg: &StencilConfig,
) -> Result<SeedEnsemble> {
    if members.is_empty() {
        return Err(Error::invalid("an ensemble needs at least one seed"));
    }
    check_grid(betas)?;
    let results: Vec<Result<(InvestmentCurve, LimitClassification)>> = members
        .par_iter()
        .map(|(seed, profile)| {
            let params = ModelParams::new(profile.clone(), 0.0)?;
            let curve = sweep_curve(&params, betas, cfg)?.with_seed(*seed);
            Ok((curve, classify_limits(&params)))
        })
        .collect();

    let mut curves = Vec::with_capacity(members.len());
    let mut limits = Vec::with_capacity(members.len());
    for ((seed, _), r) in members.iter().zip(results) {
        let (c, l) = r.map_err(|e| Error::AtSeed {
            seed: *seed,
            source: Box::new(e),
        })?;
        curves.push(c);
        limits.push(l);
    }
    let mean_curve = mean_of(&curves);
    Ok(SeedEnsemble {
        seeds: members.iter().map(|(s, _)| *s).collect(),
        curves,
        mean_curve,
        limits,
    })
}

/// Pointwise mean. Values at each grid point are summed in sorted order so
/// the result does not depend on member order.
fn mean_of(curves: &[InvestmentCurve]) -> InvestmentCurve {
    let first = &curves[0];
    let n = curves.len() as f64;
    let points = first
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let mut ls: Vec<f64> = curves.iter().map(|c| c.points[k].l).collect();
            ls.sort_by(f64::total_cmp);
            CurvePoint {
                beta: p.beta,
                l: ls.iter().sum::<f64>() / n,
            }
        })
        .collect();
    InvestmentCurve {
        points,
        method: first.method,
        params: first.params.clone(),
        seed: None,
    }
}
