//! Closed-form per-capita investment for the integrable chains (q = 2 and
//! three q = 3 coupling patterns) and the exact `β = 0` / `β → ∞` limits.
//!
//! Each closed form is the large-ring limit `-(1/β)·∂_D log λ₁ |_{D=0}`
//! evaluated symbolically. They are rearranged so that no intermediate
//! exponential exceeds the larger of `1` and the final ratio's natural
//! scale, which keeps them finite well past `β·|J| = 700`.

use crate::model::ModelParams;

const SQRT12: f64 = 3.464_101_615_137_754_6;

/// `l(β)` of the two-level chain with couplings `(j0, j1)`.
///
/// Direct form, with `E = e^{β(J₁−J₀)}`, `F = e^{2βJ₁}`:
///
/// ```text
/// Δ = 4F − 2E + E² + 1
/// l = (−E + 2F + 1 + √Δ) / (4F − 2E + E² + E√Δ + √Δ + 1)
/// ```
///
/// Evaluated as `Δ = 4F + (E−1)²` and denominator `√Δ(√Δ + E + 1)`, all
/// terms divided by `e^{2m}` with `m = max(βJ₁, β(J₁−J₀), 0)`.
pub fn investment_q2(beta: f64, j0: f64, j1: f64) -> f64 {
    let u = beta * (j1 - j0);
    let w = 2.0 * beta * j1;
    let m = (0.5 * w).max(u).max(0.0);
    let f = (w - 2.0 * m).exp();
    let e = (u - m).exp();
    let one = (-m).exp();
    let r = (4.0 * f + (e - one) * (e - one)).sqrt();
    let num = 2.0 * f + one * (one - e + r);
    let den = r * (r + e + one);
    num / den
}

/// `l(β)` for `J = (0, 0, J)`, `x = e^{−βJ}`:
///
/// ```text
/// l = [1 + 2x + (12 − 5x + 2x²)/√(12 − 4x + x²)] / (2 + x + √(12 − 4x + x²))
/// ```
pub fn investment_q3_case1(beta: f64, j: f64) -> f64 {
    let x = (-beta * j).exp();
    if x <= 1.0 {
        let s = (12.0 - 4.0 * x + x * x).sqrt();
        (1.0 + 2.0 * x + (12.0 - 5.0 * x + 2.0 * x * x) / s) / (2.0 + x + s)
    } else {
        // numerator and denominator divided by x, t = 1/x
        let t = (beta * j).exp();
        let st = ((1.0 - 2.0 * t).powi(2) + 8.0 * t * t).sqrt();
        (t + 2.0 + (12.0 * t * t - 5.0 * t + 2.0) / st) / (2.0 * t + 1.0 + st)
    }
}

/// `l(β)` for `J = (0, J, 0)`: identically 1.
pub fn investment_q3_case2(_beta: f64, _j: f64) -> f64 {
    1.0
}

/// `l(β)` for `J = (J, 0, 0)`, `x = e^{−βJ}`:
///
/// ```text
/// l = [3 + (12 − 3x)/√(12 − 4x + x²)] / (x + 2 + √(12 − 4x + x²))
/// ```
pub fn investment_q3_case3(beta: f64, j: f64) -> f64 {
    let x = (-beta * j).exp();
    if x <= 1.0 {
        let s = (12.0 - 4.0 * x + x * x).sqrt();
        (3.0 + (12.0 - 3.0 * x) / s) / (x + 2.0 + s)
    } else {
        let t = (beta * j).exp();
        let st = ((1.0 - 2.0 * t).powi(2) + 8.0 * t * t).sqrt();
        (3.0 * t + t * (12.0 * t - 3.0) / st) / (1.0 + 2.0 * t + st)
    }
}

/// `l(β → ∞)` of the two-level chain, where the closed form classifies it.
/// Boundary cases with a zero coupling (and unequal couplings) are left
/// unclassified.
pub fn limit_q2(j0: f64, j1: f64) -> Option<f64> {
    if j0 == j1 {
        return Some(0.5);
    }
    if j0 > 0.0 && j1 > 0.0 {
        Some(0.5)
    } else if (j1 < j0 && j0 < 0.0) || (j1 < 0.0 && j0 > 0.0) {
        Some(1.0)
    } else if (j0 < j1 && j1 < 0.0) || (j1 > 0.0 && j0 < 0.0) {
        Some(0.0)
    } else {
        None
    }
}

pub fn limit_q3_case1(j: f64) -> f64 {
    if j < 0.0 {
        2.0
    } else if j > 0.0 {
        (1.0 + SQRT12) / (2.0 + SQRT12)
    } else {
        1.0
    }
}

pub fn limit_q3_case3(j: f64) -> f64 {
    if j < 0.0 {
        0.0
    } else if j > 0.0 {
        (3.0 + SQRT12) / (2.0 + SQRT12)
    } else {
        1.0
    }
}

/// Coupling patterns with a closed-form `l(β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrableCase {
    TwoLevel {
        j0: f64,
        j1: f64,
    },
    /// `J = (0, 0, J)`
    ThreeLevelTop {
        j: f64,
    },
    /// `J = (0, J, 0)`
    ThreeLevelMiddle {
        j: f64,
    },
    /// `J = (J, 0, 0)`
    ThreeLevelBottom {
        j: f64,
    },
}

impl IntegrableCase {
    /// Recognizes an integrable configuration. Requires zero field and the
    /// default integer levels.
    pub fn detect(params: &ModelParams) -> Option<Self> {
        if params.field() != 0.0 || !params.has_default_levels() {
            return None;
        }
        match *params.couplings().values() {
            [j0, j1] => Some(Self::TwoLevel { j0, j1 }),
            [a, b, j] if a == 0.0 && b == 0.0 => Some(Self::ThreeLevelTop { j }),
            [a, j, c] if a == 0.0 && c == 0.0 => Some(Self::ThreeLevelMiddle { j }),
            [j, b, c] if b == 0.0 && c == 0.0 => Some(Self::ThreeLevelBottom { j }),
            _ => None,
        }
    }

    pub fn investment(&self, beta: f64) -> f64 {
        match *self {
            Self::TwoLevel { j0, j1 } => investment_q2(beta, j0, j1),
            Self::ThreeLevelTop { j } => investment_q3_case1(beta, j),
            Self::ThreeLevelMiddle { j } => investment_q3_case2(beta, j),
            Self::ThreeLevelBottom { j } => investment_q3_case3(beta, j),
        }
    }

    pub fn limit(&self) -> Option<f64> {
        match *self {
            Self::TwoLevel { j0, j1 } => limit_q2(j0, j1),
            Self::ThreeLevelTop { j } => Some(limit_q3_case1(j)),
            Self::ThreeLevelMiddle { .. } => Some(1.0),
            Self::ThreeLevelBottom { j } => Some(limit_q3_case3(j)),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Self::TwoLevel { j0, j1 } => format!("q=2, J=({j0},{j1})"),
            Self::ThreeLevelTop { j } => format!("q=3, J=(0,0,{j})"),
            Self::ThreeLevelMiddle { j } => format!("q=3, J=(0,{j},0)"),
            Self::ThreeLevelBottom { j } => format!("q=3, J=({j},0,0)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitClassification {
    /// `l(0)`, the mean level; `(q−1)/2` for the default levels.
    pub beta_zero: f64,
    /// `l(∞)` when known.
    pub beta_infinity: Option<f64>,
    /// The minimum coupling is attained at exactly one level.
    pub unique_min: bool,
    /// Unique minimum that is also negative, so the uniform configuration
    /// at the minimizing level is the unique ground state of every ring.
    pub uniform_ground_state: bool,
}

/// `β = 0` and `β → ∞` behavior of `l`.
///
/// `beta_infinity` comes from the closed forms when the couplings are
/// integrable, otherwise it is the level of the unique minimum coupling.
/// Ties in the minimum leave it undefined.
pub fn classify_limits(params: &ModelParams) -> LimitClassification {
    let (min, at) = params.couplings().minima();
    let unique_min = at.len() == 1;
    let beta_infinity = match IntegrableCase::detect(params) {
        Some(case) => case.limit(),
        None if unique_min => Some(params.levels()[at[0]]),
        None => None,
    };
    LimitClassification {
        beta_zero: params.mean_level(),
        beta_infinity,
        unique_min,
        uniform_ground_state: unique_min && min < 0.0,
    }
}
