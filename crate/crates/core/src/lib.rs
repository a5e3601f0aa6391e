//! Univalence criteria for analytic functions on the unit disk.
//!
//! The crate provides truncated complex power series, the Ruscheweyh and
//! Salagean derivatives, the integral operator
//! `F_beta(z) = [beta * int_0^z g^(beta-1)(u) f'(u) du]^(1/beta)`
//! (by series and by quadrature), numerical sup-norm evaluation of the
//! univalence criteria built from them, a Loewner-chain validator and an
//! empirical injectivity oracle.

pub mod analytic;
pub mod criteria;
pub mod error;
pub mod integral_op;
pub mod jet;
pub mod loewner;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod series;

pub use analytic::{AnalyticFunction, Builtin};
pub use error::{Error, Result};
pub use jet::Jet;
pub use num_complex::Complex64;
pub use series::PowerSeries;
