//! Ruin probabilities for the Cramér–Lundberg risk model, with or without a
//! Brownian perturbation.
//!
//! * [`claims`] and [`riskmodel`] define the model and its transforms.
//! * [`approx`] holds the closed-form approximations (Renyi, De Vylder,
//!   Padé–Ramsay, two-point Padé, creeping/jump for the perturbed model,
//!   and Johnson–Taaffe Erlang-mixture fits).
//! * [`oracle`] provides references: exact inversion for rational claims,
//!   fixed-Talbot inversion, and Monte Carlo.
//! * [`ratlap`], [`jtfit`] and [`admiss`] are the supporting machinery.
//!
//! ```
//! use ruinkit::{approx, ClaimDistribution, RiskModel};
//!
//! let claims = ClaimDistribution::gamma(2.5, 1.0)?;
//! let model = RiskModel::with_loading(1.0, 0.25, 0.0, claims)?;
//! let psi = approx::ramsay_pade12(&model)?;
//! assert!((psi.psi(0.0) - model.rho()).abs() < 1e-12);
//! # Ok::<(), ruinkit::RuinError>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admiss;
pub mod approx;
pub mod claims;
pub mod cli;
pub mod error;
pub mod jtfit;
pub mod oracle;
pub mod poly;
pub mod ratlap;
pub mod riskmodel;

pub use approx::{Method, RuinApprox};
pub use claims::ClaimDistribution;
pub use error::{Result, RuinError};
pub use ratlap::{ExpPolyMixture, MixtureKind, RationalLT};
pub use riskmodel::RiskModel;
