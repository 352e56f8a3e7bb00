//! Expected per-capita investment of a ring of interacting q-level agents.
//!
//! Agents on a periodic chain each invest one of `q` amounts; neighbors that
//! choose the same amount `k` interact with strength `J(k)`. The ring is a
//! one-dimensional Potts chain, and the per-capita investment `l(β)` of a
//! large ring follows from the dominant eigenvalue of its `q×q` transfer
//! matrix.
//!
//! * [`model`]: domain types, energy, brute-force enumeration of small rings
//! * [`transfer`]: transfer matrix, dominant eigenvalue, `log Z_N`
//! * [`analytic`]: closed forms for `q = 2, 3` and the `β` limit laws
//! * [`derivatives`]: numeric field derivatives, `l(β)` and β sweeps
//! * [`profiles`]: aggressive / conservative / random investors, ensembles
//! * [`cli`]: configuration, CSV output and the comparison report

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod derivatives;
pub mod error;
pub mod model;
pub mod profiles;
pub mod spectral;
pub mod transfer;

pub use analytic::{classify_limits, IntegrableCase, LimitClassification};
pub use derivatives::{
    per_capita_investment, sweep_curve, CurveMethod, CurvePoint, InvestmentCurve, StencilConfig,
    StencilOrder,
};
pub use error::{Error, Result};
pub use model::{CouplingProfile, ModelParams, SpinConfig};
pub use profiles::{ensemble_sweep, make_profile, ProfileKind, ProfileSpec, SeedEnsemble};
pub use transfer::{build_matrix, dominant_eigenvalue, log_partition_function, TransferMatrix};
