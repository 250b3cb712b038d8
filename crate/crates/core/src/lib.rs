//! L-functions attached to half-integral weight cusp forms on Γ₀(4).
//!
//! The built-in form is g = θ⁻³·η(2z)¹² of weight 9/2. Other forms can be
//! supplied as coefficient tables together with their weight index k and
//! Fricke sign.
//!
//! * [`coefficients`]: exact q-expansions and the coefficient factory.
//! * [`dirichlet`]: Dirichlet-series algebra (reciprocal, log-derivative,
//!   dominance abscissa, Montgomery–Vaughan mean value).
//! * [`evaluator`]: L(s), the completed function ξ(s) and the approximate
//!   functional equation.
//! * [`zeros`]: zero location, box counting and the zero database.
//! * [`statistics`]: Weyl sums, discrepancy, explicit formula, moments.

pub mod coefficients;
pub mod dirichlet;
pub mod error;
pub mod evaluator;
pub mod files;
pub mod numeric;
pub mod statistics;
pub mod zeros;

pub use error::{Error, Result};
pub use evaluator::{EvalConfig, FormDescriptor};
pub use zeros::{ZeroKind, ZeroMethod, ZeroRecord, ZeroSet};
