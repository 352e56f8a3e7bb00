//! Field derivatives of the dominant eigenvalue and the per-capita
//! investment `l(β) = −(1/β)·(∂λ₁/∂D)/λ₁` of the infinite ring.

use rayon::prelude::*;

use crate::analytic::IntegrableCase;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::transfer::{
    build_matrix, build_matrix_offset, dominant_eigenvalue, TransferMatrix, DEFAULT_EIGEN_MAX_ITER,
    DEFAULT_EIGEN_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    /// `(λ(ξ) − λ(−ξ)) / 2ξ`, error `O(ξ²)`.
    TwoPoint,
    /// Richardson combination `−⅓·Δ(2ξ) + ⁴⁄₃·Δ(ξ)`, error `O(ξ⁴)`.
    FourPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    pub xi: f64,
    pub order: StencilOrder,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self {
            xi: 1e-4,
            order: StencilOrder::FourPoint,
            eigen_tol: DEFAULT_EIGEN_TOL,
            eigen_max_iter: DEFAULT_EIGEN_MAX_ITER,
        }
    }
}

impl StencilConfig {
    pub fn with_xi(self, xi: f64) -> Self {
        Self { xi, ..self }
    }

    pub fn with_order(self, order: StencilOrder) -> Self {
        Self { order, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::invalid(format!(
                "field step must be positive, got {}",
                self.xi
            )));
        }
        if !(self.eigen_tol > 0.0) {
            return Err(Error::invalid("eigen tolerance must be positive"));
        }
        if self.eigen_max_iter == 0 {
            return Err(Error::invalid("eigen iteration cap must be at least 1"));
        }
        Ok(())
    }
}

/// Central difference of `f` at `x0`.
pub fn central_difference(f: impl Fn(f64) -> f64, x0: f64, h: f64) -> f64 {
    (f(x0 + h) - f(x0 - h)) / (2.0 * h)
}

/// Four-point Richardson-extrapolated derivative of `f` at `x0`.
pub fn richardson_difference(f: impl Fn(f64) -> f64, x0: f64, h: f64) -> f64 {
    richardson(
        central_difference(&f, x0, 2.0 * h),
        central_difference(&f, x0, h),
    )
}

#[inline]
fn richardson(wide: f64, narrow: f64) -> f64 {
    -wide / 3.0 + 4.0 * narrow / 3.0
}

/// Dominant eigenvalue of `M(D + ξ)` for displaced fields, all expressed on
/// one log-scale so their differences are meaningful.
#[derive(Debug, Clone)]
pub struct FieldStencil<'a> {
    params: &'a ModelParams,
    cfg: StencilConfig,
    base: TransferMatrix,
    /// Scale the stored entries are built on; differs from
    /// `base.log_scale()` only after [`FieldStencil::with_shifted_scale`].
    entry_scale: f64,
}

impl<'a> FieldStencil<'a> {
    /// Uses the scale of the undisplaced matrix.
    pub fn new(params: &'a ModelParams, cfg: StencilConfig) -> Result<Self> {
        cfg.validate()?;
        let base = build_matrix(params)?;
        let entry_scale = base.log_scale();
        Ok(Self {
            params,
            cfg,
            base,
            entry_scale,
        })
    }

    /// Re-expresses every matrix on a different log-scale.
    pub fn with_log_scale(self, log_scale: f64) -> Result<Self> {
        let base = build_matrix_offset(self.params, 0.0, log_scale)?;
        Ok(Self {
            base,
            entry_scale: log_scale,
            ..self
        })
    }

    /// Keeps the scaled entries but shifts the bookkeeping scale, i.e.
    /// multiplies every represented matrix by `exp(delta)`.
    pub fn with_shifted_scale(self, delta: f64) -> Self {
        let base = self.base.shifted_scale(delta);
        Self { base, ..self }
    }

    pub fn log_scale(&self) -> f64 {
        self.base.log_scale()
    }

    fn scaled_eigenvalue(&self, m: &TransferMatrix) -> Result<f64> {
        Ok(dominant_eigenvalue(m, self.cfg.eigen_tol, self.cfg.eigen_max_iter)?.value_scaled)
    }

    fn at_offset(&self, offset: f64) -> Result<f64> {
        let m = build_matrix_offset(self.params, offset, self.entry_scale)?;
        self.scaled_eigenvalue(&m)
    }

    /// Scaled `λ₁` of the undisplaced matrix.
    pub fn center(&self) -> Result<f64> {
        self.scaled_eigenvalue(&self.base)
    }

    fn two_point_with(&self, h: f64) -> Result<f64> {
        Ok((self.at_offset(h)? - self.at_offset(-h)?) / (2.0 * h))
    }

    fn two_point_log_with(&self, h: f64) -> Result<f64> {
        Ok((self.at_offset(h)?.ln() - self.at_offset(-h)?.ln()) / (2.0 * h))
    }

    /// `∂λ₁/∂D` divided by `exp(log_scale)`.
    pub fn slope_scaled(&self, order: StencilOrder) -> Result<f64> {
        let xi = self.cfg.xi;
        match order {
            StencilOrder::TwoPoint => self.two_point_with(xi),
            StencilOrder::FourPoint => Ok(richardson(
                self.two_point_with(2.0 * xi)?,
                self.two_point_with(xi)?,
            )),
        }
    }

    /// `−(1/β)·(∂λ₁/∂D)/λ₁`, taken as the stencil of `ln λ₁`.
    ///
    /// Differencing the logarithm keeps the common scale out exactly, and
    /// it does not lose accuracy when `λ₁` is close to an exponential in
    /// `D`, which is the case whenever one level dominates at large `β`.
    pub fn investment(&self) -> Result<f64> {
        let beta = self.params.beta();
        if beta == 0.0 {
            return Ok(self.params.mean_level());
        }
        let xi = self.cfg.xi;
        let slope = match self.cfg.order {
            StencilOrder::TwoPoint => self.two_point_log_with(xi)?,
            StencilOrder::FourPoint => richardson(
                self.two_point_log_with(2.0 * xi)?,
                self.two_point_log_with(xi)?,
            ),
        };
        Ok(-slope / beta)
    }
}

fn eigen_derivative(params: &ModelParams, cfg: StencilConfig, order: StencilOrder) -> Result<f64> {
    let stencil = FieldStencil::new(params, cfg)?;
    Ok(stencil.slope_scaled(order)? * stencil.log_scale().exp())
}

/// `∂λ₁/∂D` by the central difference in the field.
pub fn eigen_derivative_two_point(params: &ModelParams, cfg: &StencilConfig) -> Result<f64> {
    eigen_derivative(params, *cfg, StencilOrder::TwoPoint)
}

/// `∂λ₁/∂D` by the Richardson-extrapolated four-point stencil.
pub fn eigen_derivative_four_point(params: &ModelParams, cfg: &StencilConfig) -> Result<f64> {
    eigen_derivative(params, *cfg, StencilOrder::FourPoint)
}

/// Per-capita investment of the infinite ring. `β = 0` returns the mean
/// level exactly instead of evaluating the singular `1/β` prefactor.
pub fn per_capita_investment(params: &ModelParams, cfg: &StencilConfig) -> Result<f64> {
    cfg.validate()?;
    if params.beta() == 0.0 {
        return Ok(params.mean_level());
    }
    FieldStencil::new(params, *cfg)?.investment()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub beta: f64,
    pub l: f64,
}

/// `l(β)` sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InvestmentCurve {
    pub points: Vec<CurvePoint>,
    pub method: CurveMethod,
    /// Couplings, field and levels of the sweep; `beta` is reset to 0.
    pub params: ModelParams,
    pub seed: Option<u64>,
}

impl InvestmentCurve {
    pub fn betas(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.beta)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.l)
    }

    pub fn last(&self) -> Option<CurvePoint> {
        self.points.last().copied()
    }

    /// Whether every `l` lies in `[d₀ − slack, d_{q−1} + slack]`.
    pub fn within_levels(&self, slack: f64) -> bool {
        let d = self.params.levels();
        let (lo, hi) = (d[0] - slack, d[d.len() - 1] + slack);
        self.points.iter().all(|p| p.l >= lo && p.l <= hi)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub(crate) fn check_grid(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::invalid("beta grid is empty"));
    }
    if let Some(b) = betas.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
        return Err(Error::invalid(format!(
            "beta grid value {b} is not a finite non-negative number"
        )));
    }
    if let Some(w) = betas.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "beta grid is not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Numeric `l(β)` on a grid. Points are independent and evaluated in
/// parallel; the first failing grid point (in grid order) is reported.
pub fn sweep_curve(
    base: &ModelParams,
    betas: &[f64],
    cfg: &StencilConfig,
) -> Result<InvestmentCurve> {
    check_grid(betas)?;
    cfg.validate()?;
    let results: Vec<Result<f64>> = betas
        .par_iter()
        .map(|&beta| per_capita_investment(&base.clone().with_beta(beta)?, cfg))
        .collect();
    let mut points = Vec::with_capacity(betas.len());
    for (&beta, r) in betas.iter().zip(results) {
        let l = r.map_err(|e| Error::AtBeta {
            beta,
            source: Box::new(e),
        })?;
        points.push(CurvePoint { beta, l });
    }
    Ok(InvestmentCurve {
        points,
        method: CurveMethod::Numeric,
        params: base.clone().with_beta(0.0)?,
        seed: None,
    })
}

/// Closed-form `l(β)` on a grid for an integrable coupling pattern.
pub fn closed_form_curve(base: &ModelParams, betas: &[f64]) -> Result<InvestmentCurve> {
    check_grid(betas)?;
    let case = IntegrableCase::detect(base)
        .ok_or_else(|| Error::invalid("couplings do not match a closed-form case"))?;
    Ok(InvestmentCurve {
        points: betas
            .iter()
            .map(|&beta| CurvePoint {
                beta,
                l: case.investment(beta),
            })
            .collect(),
        method: CurveMethod::ClosedForm,
        params: base.clone().with_beta(0.0)?,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{investment_q2, investment_q3_case1, investment_q3_case3};
    use crate::model::CouplingProfile;

    fn params(j: &[f64], beta: f64) -> ModelParams {
        ModelParams::new(CouplingProfile::new(j.to_vec()).unwrap(), beta).unwrap()
    }

    #[test]
    fn synthetic_stencils() {
        // even function: exact zero slope
        assert_eq!(central_difference(|x| x * x, 0.0, 0.1), 0.0);
        // cubic: Richardson cancels the h² term exactly
        let d = richardson_difference(|x| x * x * x, 0.0, 0.1);
        assert!(d.abs() < 1e-15);
        // e^x: leading error −h⁴/30
        let err = richardson_difference(f64::exp, 0.0, 0.1) - 1.0;
        assert!((err - -3.337_303_902_968_393e-6).abs() < 1e-12, "{err}");
    }

    #[test]
    fn richardson_error_ratio_is_sixteen() {
        let f = |x: f64| x.sin() + (2.0 * x).exp();
        let err = |h: f64| (richardson_difference(f, 0.0, h) - 3.0).abs();
        for h in [0.1, 0.05, 0.025] {
            let ratio = err(h) / err(h / 2.0);
            assert!((14.0..=18.0).contains(&ratio), "h={h}: {ratio}");
        }
    }

    #[test]
    fn beta_zero_derivative_vanishes() {
        let p = params(&[1.0, -2.0, 0.5], 0.0);
        let cfg = StencilConfig::default();
        assert_eq!(eigen_derivative_two_point(&p, &cfg).unwrap(), 0.0);
        assert_eq!(eigen_derivative_four_point(&p, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn two_point_matches_analytic_q2_slope() {
        // ∂λ₁/∂D at D = 0 for J = (1, −1), β = 1 is exactly −e
        let p = params(&[1.0, -1.0], 1.0);
        let cfg = StencilConfig::default();
        let d = eigen_derivative_two_point(&p, &cfg).unwrap();
        assert!((d + std::f64::consts::E).abs() < 1e-7, "{d}");
        let d4 = eigen_derivative_four_point(&p, &cfg).unwrap();
        assert!((d4 + std::f64::consts::E).abs() < 1e-9, "{d4}");
    }

    #[test]
    fn beta_zero_is_mean_level() {
        let j: Vec<f64> = (0..7).map(|k| k as f64).collect();
        let cfg = StencilConfig::default();
        assert_eq!(per_capita_investment(&params(&j, 0.0), &cfg).unwrap(), 3.0);
        let p = params(&[0.0, 1.0, 2.0], 0.0)
            .with_levels(vec![1.0, 2.0, 6.0])
            .unwrap();
        assert_eq!(per_capita_investment(&p, &cfg).unwrap(), 3.0);
    }

    #[test]
    fn matches_closed_forms_pointwise() {
        let cfg = StencilConfig::default();
        for k in 1..=20 {
            let b = 0.5 * k as f64;
            let l = per_capita_investment(&params(&[1.0, 2.0], b), &cfg).unwrap();
            assert!((l - investment_q2(b, 1.0, 2.0)).abs() < 1e-6, "b={b}");
            let l = per_capita_investment(&params(&[0.0, 0.0, 0.8], b), &cfg).unwrap();
            assert!((l - investment_q3_case1(b, 0.8)).abs() < 1e-6, "b={b}");
            let l = per_capita_investment(&params(&[-0.6, 0.0, 0.0], b), &cfg).unwrap();
            assert!((l - investment_q3_case3(b, -0.6)).abs() < 1e-6, "b={b}");
        }
    }

    #[test]
    fn strongly_ordered_limit() {
        let l = per_capita_investment(&params(&[0.0, 0.0, -1.0], 20.0), &StencilConfig::default())
            .unwrap();
        assert!((l - 2.0).abs() < 1e-3);
    }

    #[test]
    fn hellmann_feynman_identity() {
        // l = Σ d_a v_a² with v the unit Perron vector at D = 0
        let p = params(&[-0.4, 1.1, 0.3, -1.2, 0.0], 1.7);
        let m = build_matrix(&p).unwrap();
        let v = dominant_eigenvalue(&m, 1e-14, 100_000).unwrap().vector;
        let want: f64 = v.iter().enumerate().map(|(a, x)| a as f64 * x * x).sum();
        let got = per_capita_investment(&p, &StencilConfig::default()).unwrap();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }

    #[test]
    fn scale_shift_cancels() {
        let p = params(&[-1.0, 0.5, -0.3], 2.0);
        let cfg = StencilConfig::default();
        let base = FieldStencil::new(&p, cfg).unwrap();
        let s = base.log_scale();
        let l0 = base.investment().unwrap();

        let shifted = FieldStencil::new(&p, cfg)
            .unwrap()
            .with_shifted_scale(1000.0);
        assert_eq!(shifted.log_scale(), s + 1000.0);
        assert!((shifted.investment().unwrap() - l0).abs() <= 1e-12 * l0.abs());

        // re-expressed entries carry ~ulp(delta) argument rounding, which the
        // stencil amplifies by 1/ξ
        for delta in [-300.0, 300.0] {
            let rescaled = FieldStencil::new(&p, cfg)
                .unwrap()
                .with_log_scale(s + delta)
                .unwrap();
            let l = rescaled.investment().unwrap();
            assert!(
                (l - l0).abs() <= 1e-9 * l0.abs(),
                "delta={delta}: {l} vs {l0}"
            );
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let p = params(&[0.0, 1.0], 0.0);
        let cfg = StencilConfig::default();
        assert!(sweep_curve(&p, &[], &cfg).is_err());
        assert!(sweep_curve(&p, &[1.0, 1.0], &cfg).is_err());
        assert!(sweep_curve(&p, &[-1.0, 1.0], &cfg).is_err());
        assert!(sweep_curve(&p, &[0.0, f64::NAN], &cfg).is_err());
        assert!(sweep_curve(&p, &[0.0, 1.0], &cfg.with_xi(0.0)).is_err());
    }

    #[test]
    fn sweep_single_zero_point() {
        let j: Vec<f64> = (0..4).map(|k| -(k as f64)).collect();
        let c = sweep_curve(&params(&j, 0.0), &[0.0], &StencilConfig::default()).unwrap();
        assert_eq!(c.points, vec![CurvePoint { beta: 0.0, l: 1.5 }]);
        assert_eq!(c.method, CurveMethod::Numeric);
    }

    #[test]
    fn sweep_failure_names_beta() {
        let p = params(&[0.3, 0.1, -0.2], 0.0);
        let cfg = StencilConfig {
            eigen_max_iter: 1,
            ..StencilConfig::default()
        };
        let err = sweep_curve(&p, &[0.0, 0.5, 1.0], &cfg).unwrap_err();
        match err {
            Error::AtBeta { beta, ref source } => {
                assert_eq!(beta, 0.5);
                assert!(matches!(**source, Error::NoConvergence { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.is_numerical());
    }

    #[test]
    fn closed_form_curve_requires_integrable() {
        let grid = [0.0, 1.0, 2.0];
        let c = closed_form_curve(&params(&[0.0, 3.0, 0.0], 0.0), &grid).unwrap();
        assert!(c.values().all(|l| l == 1.0));
        assert_eq!(c.method, CurveMethod::ClosedForm);
        assert!(closed_form_curve(&params(&[1.0, 3.0, 0.0], 0.0), &grid).is_err());
    }
}
