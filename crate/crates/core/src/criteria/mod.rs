//! Numerical evaluation of the univalence criteria.
//!
//! Every criterion is a set of inequalities `sup_z E(z) <= bound` over the
//! unit disk, approximated on a polar grid (see [`grid`]). A report is a
//! numerical verdict with margins, never a proof.

pub mod corollaries;
pub mod grid;
pub mod params;
pub mod report;
pub mod theorems;

use num_complex::Complex64;

pub use corollaries::{c5_equivalence_probe, eval_corollary, CorollaryFunctions, CorollaryId, EquivalenceProbe};
pub use grid::{sup_disk, sup_modulus, GridConfig, SupEstimate};
pub use params::{check_param_constraints, ConstraintCheck, ConstraintFamily, ConstraintReport, CriterionParams, Relation};
pub use report::{CriterionReport, GridRow, InequalityReport};
pub use theorems::{eval_theorem2, eval_theorem3, eval_theorem4, operator_image};

use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};

/// Denominator guard.
pub const DELTA_SING: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `num / den`, or `SingularPoint(z)` when `|den| < DELTA_SING`.
pub(crate) fn guarded_div(num: Complex64, den: Complex64, z: Complex64) -> Result<Complex64> {
    if den.norm() < DELTA_SING {
        return Err(Error::SingularPoint(z));
    }
    Ok(num / den)
}

/// `z g'(z) / g(z)` for normalized `g`, computed as `g' / (g/z)` so the
/// origin is regular.
pub(crate) fn z_log_derivative(g: &AnalyticFunction, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ONE);
    }
    let jet = g.jet(z, 1)?;
    guarded_div(jet.derivative(1), jet.value() / z, z)
}

/// `f(z)/z` with its limit `f'(0) = 1` at the origin.
pub(crate) fn over_z(f: &AnalyticFunction, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return f.derivative(z);
    }
    Ok(f.value(z)? / z)
}

/// Weight `|z|^(m+1)` of the blended inequalities.
pub(crate) fn blend_weight(z: Complex64, m: f64) -> f64 {
    z.norm().powf(m + 1.0)
}
