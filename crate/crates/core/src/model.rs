//! Domain types for the q-level agent ring, its Potts energy, and exhaustive
//! enumeration of small rings.
//!
//! The ring is periodic: site `N` neighbors site `1`. A configuration's
//! energy is
//!
//! ```text
//! H(σ) = Σᵢ J(σᵢ)·δ(σᵢ, σᵢ₊₁) + D·Σᵢ d(σᵢ)
//! ```
//!
//! where `d(k)` is the investment level of state `k` (`k` itself by default)
//! and configurations are weighted by `exp(-β·H)`.

use crate::error::{Error, Result};

/// Brute-force oracles refuse rings with more than this many configurations.
pub const ENUMERATION_CAP: u128 = 1 << 24;

/// Interaction strength per investment level, `values[k] = J(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingProfile {
    values: Vec<f64>,
}

impl CouplingProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid(format!(
                "a coupling profile needs at least 2 levels, got {}",
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("coupling J({k}) is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    /// Smallest coupling and every level index attaining it.
    pub fn minima(&self) -> (f64, Vec<usize>) {
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let at = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == min)
            .map(|(k, _)| k)
            .collect();
        (min, at)
    }
}

impl std::ops::Index<usize> for CouplingProfile {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

/// Full parameter set of the model: couplings, control parameter `beta`,
/// external field `D` and the investment value of each level.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    couplings: CouplingProfile,
    beta: f64,
    field: f64,
    levels: Vec<f64>,
}

impl ModelParams {
    /// Zero field and the default levels `0, 1, …, q-1`.
    pub fn new(couplings: CouplingProfile, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let levels = (0..couplings.q()).map(|k| k as f64).collect();
        Ok(Self {
            couplings,
            beta,
            field: 0.0,
            levels,
        })
    }

    pub fn with_field(mut self, field: f64) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::invalid("external field is not finite"));
        }
        self.field = field;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        self.beta = beta;
        Ok(self)
    }

    /// Replace the default integer levels by arbitrary strictly increasing reals.
    pub fn with_levels(mut self, levels: Vec<f64>) -> Result<Self> {
        if levels.len() != self.q() {
            return Err(Error::invalid(format!(
                "expected {} levels, got {}",
                self.q(),
                levels.len()
            )));
        }
        if levels.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("levels must be finite"));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("levels must be strictly increasing"));
        }
        self.levels = levels;
        Ok(self)
    }

    pub fn q(&self) -> usize {
        self.couplings.q()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn couplings(&self) -> &CouplingProfile {
        &self.couplings
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Arithmetic mean of the levels; the per-capita investment at `beta = 0`.
    pub fn mean_level(&self) -> f64 {
        self.levels.iter().sum::<f64>() / self.q() as f64
    }

    pub fn has_default_levels(&self) -> bool {
        self.levels.iter().enumerate().all(|(k, &v)| v == k as f64)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "beta must be finite and >= 0, got {beta}"
        )))
    }
}

/// One investment choice per agent on a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    sites: Vec<usize>,
}

impl SpinConfig {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::invalid("a ring needs at least one site"));
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    fn check(&self, q: usize) -> Result<()> {
        match self.sites.iter().position(|&s| s >= q) {
            Some(i) => Err(Error::invalid(format!(
                "site {i} holds level {} but q = {q}",
                self.sites[i]
            ))),
            None => Ok(()),
        }
    }
}

/// Total amount invested, `Σᵢ d(σᵢ)`.
pub fn total_investment(config: &SpinConfig, params: &ModelParams) -> Result<f64> {
    config.check(params.q())?;
    Ok(level_sum(&config.sites, &params.levels))
}

/// Potts energy of a ring configuration.
pub fn hamiltonian(config: &SpinConfig, params: &ModelParams) -> Result<f64> {
    config.check(params.q())?;
    Ok(energy(&config.sites, params))
}

fn level_sum(sites: &[usize], levels: &[f64]) -> f64 {
    sites.iter().map(|&s| levels[s]).sum()
}

fn energy(sites: &[usize], params: &ModelParams) -> f64 {
    let n = sites.len();
    let bonds: f64 = (0..n)
        .filter(|&i| sites[i] == sites[(i + 1) % n])
        .map(|i| params.couplings[sites[i]])
        .sum();
    bonds + params.field * level_sum(sites, &params.levels)
}

fn state_count(q: usize, n_sites: usize) -> Result<u128> {
    if n_sites == 0 {
        return Err(Error::invalid("n_sites must be at least 1"));
    }
    let mut states: u128 = 1;
    for _ in 0..n_sites {
        states = states.saturating_mul(q as u128);
        if states > ENUMERATION_CAP {
            return Err(Error::TooManyStates {
                states: (q as u128).saturating_pow(n_sites as u32),
                cap: ENUMERATION_CAP,
            });
        }
    }
    Ok(states)
}

/// Calls `visit` on every ring configuration in lexicographic order, the
/// last site varying fastest.
pub fn for_each_configuration(
    q: usize,
    n_sites: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<()> {
    let states = state_count(q, n_sites)?;
    let mut sites = vec![0usize; n_sites];
    for _ in 0..states {
        visit(&sites);
        // odometer increment
        for s in sites.iter_mut().rev() {
            *s += 1;
            if *s < q {
                break;
            }
            *s = 0;
        }
    }
    Ok(())
}

/// Streaming log-sum-exp accumulator carrying an optional weighted sum.
#[derive(Default)]
struct LogSumExp {
    max: f64,
    sum: f64,
    weighted: f64,
    seen: bool,
}

impl LogSumExp {
    fn push(&mut self, log_w: f64, value: f64) {
        if !self.seen {
            self.seen = true;
            self.max = log_w;
            self.sum = 1.0;
            self.weighted = value;
        } else if log_w <= self.max {
            let w = (log_w - self.max).exp();
            self.sum += w;
            self.weighted += w * value;
        } else {
            let r = (self.max - log_w).exp();
            self.sum = self.sum * r + 1.0;
            self.weighted = self.weighted * r + value;
            self.max = log_w;
        }
    }

    fn log_total(&self) -> f64 {
        self.max + self.sum.ln()
    }

    fn mean(&self) -> f64 {
        self.weighted / self.sum
    }
}

fn enumerate(params: &ModelParams, n_sites: usize) -> Result<LogSumExp> {
    let mut acc = LogSumExp::default();
    for_each_configuration(params.q(), n_sites, |sites| {
        acc.push(
            -params.beta * energy(sites, params),
            level_sum(sites, &params.levels),
        );
    })?;
    Ok(acc)
}

/// `log Z_N` by summing `exp(-β·H)` over all `q^N` ring configurations.
pub fn log_partition_function_bruteforce(params: &ModelParams, n_sites: usize) -> Result<f64> {
    Ok(enumerate(params, n_sites)?.log_total())
}

/// `Z_N` over all `q^N` ring configurations. May overflow to infinity for
/// large `β·|H|`; use [`log_partition_function_bruteforce`] there.
pub fn partition_function_bruteforce(params: &ModelParams, n_sites: usize) -> Result<f64> {
    let acc = enumerate(params, n_sites)?;
    Ok(acc.sum * acc.max.exp())
}

/// Exact finite-ring `⟨L⟩ / N` under the Gibbs distribution.
pub fn expected_investment_bruteforce(params: &ModelParams, n_sites: usize) -> Result<f64> {
    Ok(enumerate(params, n_sites)?.mean() / n_sites as f64)
}
