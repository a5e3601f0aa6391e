//! Ruscheweyh and Salagean derivatives.
//!
//! On series both act coefficientwise:
//! `R^lambda f = z/(1-z)^(lambda+1) * f` (Hadamard product), giving
//! `a_k -> C(k + lambda - 1, k - 1) a_k`, and `S^n f` gives `a_k -> k^n a_k`.
//! Integer orders use exact integer binomials; fractional orders go through
//! log-gamma.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};
use crate::series::{PowerSeries, DEFAULT_ORDER};

/// Order of the Ruscheweyh derivative, `lambda > -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuscheweyhOrder(f64);

impl RuscheweyhOrder {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda <= -1.0 {
            return Err(Error::InvalidOrder(lambda));
        }
        Ok(Self(lambda))
    }

    pub fn lambda(self) -> f64 {
        self.0
    }

    /// `Some(n)` when the order is a non-negative integer.
    pub fn as_integer(self) -> Option<u32> {
        (self.0 >= 0.0 && self.0.fract() == 0.0 && self.0 <= f64::from(u32::MAX)).then_some(self.0 as u32)
    }
}

/// Order of the Salagean derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SalageanOrder(pub u32);

/// Which derivative family a criterion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    #[default]
    Ruscheweyh,
    Salagean,
}

/// `C(k + lambda - 1, k - 1)`, the k-th coefficient of `z/(1-z)^(lambda+1)`.
pub fn ruscheweyh_weight(k: usize, order: RuscheweyhOrder) -> f64 {
    if k == 0 {
        return 0.0;
    }
    match order.as_integer() {
        Some(n) => integer_binomial(k - 1 + n as usize, n as usize),
        None => {
            let lambda = order.lambda();
            let kf = k as f64;
            (ln_gamma(kf + lambda) - ln_gamma(kf) - ln_gamma(lambda + 1.0)).exp()
        }
    }
}

fn integer_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => {
                let mut approx = acc as f64;
                for j in i..k {
                    approx *= (n - j) as f64 / (j + 1) as f64;
                }
                return approx;
            }
        }
    }
    acc as f64
}

/// `R^lambda f` for a normalized series.
pub fn ruscheweyh(f: &PowerSeries, order: RuscheweyhOrder) -> Result<PowerSeries> {
    f.check_normalized()?;
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| match k {
            0 => Complex64::new(0.0, 0.0),
            1 => a,
            _ => a * ruscheweyh_weight(k, order),
        })
        .collect();
    Ok(PowerSeries::new(coeffs))
}

/// The kernel `z / (1 - z)^(lambda + 1)` as a truncated series.
pub fn ruscheweyh_kernel(order: RuscheweyhOrder, truncation: usize) -> PowerSeries {
    PowerSeries::from_fn(truncation, |k| {
        Complex64::new(ruscheweyh_weight(k, order), 0.0)
    })
}

/// `S^n f` for a normalized series.
pub fn salagean(f: &PowerSeries, order: SalageanOrder) -> Result<PowerSeries> {
    f.check_normalized()?;
    Ok((0..order.0).fold(f.clone(), |s, _| s.z_differentiate()))
}

/// Applies an integer-order operator to any analytic function: series inputs
/// are transformed coefficientwise, other inputs get a pointwise wrapper.
pub fn apply(f: &AnalyticFunction, kind: OperatorKind, n: u32) -> Result<AnalyticFunction> {
    f.check_normalized()?;
    if n == 0 {
        return Ok(f.clone());
    }
    Ok(match (f, kind) {
        (AnalyticFunction::Series(s), OperatorKind::Ruscheweyh) => {
            AnalyticFunction::Series(ruscheweyh(s, RuscheweyhOrder::new(f64::from(n))?)?)
        }
        (AnalyticFunction::Series(s), OperatorKind::Salagean) => {
            AnalyticFunction::Series(salagean(s, SalageanOrder(n))?)
        }
        (_, OperatorKind::Ruscheweyh) => AnalyticFunction::Ruscheweyh {
            inner: Box::new(f.clone()),
            n,
        },
        (_, OperatorKind::Salagean) => AnalyticFunction::Salagean {
            inner: Box::new(f.clone()),
            n,
        },
    })
}

/// Ruscheweyh derivative of arbitrary real order. Fractional orders need a
/// series, so closed-form inputs are expanded to the default truncation.
pub fn apply_ruscheweyh(f: &AnalyticFunction, order: RuscheweyhOrder) -> Result<AnalyticFunction> {
    match order.as_integer() {
        Some(n) => apply(f, OperatorKind::Ruscheweyh, n),
        None => {
            let s = match f {
                AnalyticFunction::Series(s) => s.clone(),
                other => other.to_series(DEFAULT_ORDER)?,
            };
            Ok(AnalyticFunction::Series(ruscheweyh(&s, order)?))
        }
    }
}
