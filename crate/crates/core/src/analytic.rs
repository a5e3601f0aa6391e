//! Analytic functions on the unit disk, as truncated series or closed forms.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::series::PowerSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Classical normalized functions with closed-form jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `z`
    Identity,
    /// `z / (1 - z)^2`
    Koebe,
    /// `z / (1 - z)`
    Geometric,
    /// `e^z - 1`
    ExpNormalized,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Identity,
        Builtin::Koebe,
        Builtin::Geometric,
        Builtin::ExpNormalized,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::Koebe => "koebe",
            Builtin::Geometric => "geometric",
            Builtin::ExpNormalized => "exp_normalized",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Taylor coefficient of `z^k` at the origin.
    pub fn coefficient(self, k: usize) -> Complex64 {
        let re = match (self, k) {
            (_, 0) => 0.0,
            (Builtin::Identity, 1) => 1.0,
            (Builtin::Identity, _) => 0.0,
            (Builtin::Koebe, k) => k as f64,
            (Builtin::Geometric, _) => 1.0,
            (Builtin::ExpNormalized, k) => 1.0 / (1..=k).map(|i| i as f64).product::<f64>(),
        };
        Complex64::new(re, 0.0)
    }

    pub fn series(self, order: usize) -> PowerSeries {
        PowerSeries::from_fn(order, |k| self.coefficient(k))
    }

    fn jet(self, z0: Complex64, order: usize) -> Jet {
        let coeffs = match self {
            Builtin::Identity => {
                let mut c = vec![ZERO; order + 1];
                c[0] = z0;
                if order >= 1 {
                    c[1] = ONE;
                }
                c
            }
            Builtin::Koebe => {
                // 1/(1-z)^2 - 1/(1-z), expanded around z0
                let w = ONE / (ONE - z0);
                let mut wp = w; // w^(j+1)
                (0..=order)
                    .map(|j| {
                        let term = wp * w * (j as f64 + 1.0) - wp;
                        wp *= w;
                        term
                    })
                    .collect()
            }
            Builtin::Geometric => {
                let w = ONE / (ONE - z0);
                let mut wp = w;
                (0..=order)
                    .map(|j| {
                        let term = if j == 0 { wp - ONE } else { wp };
                        wp *= w;
                        term
                    })
                    .collect()
            }
            Builtin::ExpNormalized => {
                let e = z0.exp();
                let mut inv_fact = 1.0;
                (0..=order)
                    .map(|j| {
                        if j > 0 {
                            inv_fact /= j as f64;
                        }
                        if j == 0 {
                            e - ONE
                        } else {
                            e * inv_fact
                        }
                    })
                    .collect()
            }
        };
        Jet::new(z0, coeffs)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An analytic function on the unit disk, evaluated pointwise through jets.
///
/// Operator variants apply an integer-order Ruscheweyh or Salagean derivative
/// pointwise, so closed-form inputs stay exact up to the disk boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    Series(PowerSeries),
    Builtin(Builtin),
    Ruscheweyh { inner: Box<AnalyticFunction>, n: u32 },
    Salagean { inner: Box<AnalyticFunction>, n: u32 },
}

impl AnalyticFunction {
    pub fn identity() -> Self {
        AnalyticFunction::Builtin(Builtin::Identity)
    }

    /// `z + a z^2` as an exact polynomial of the given truncation order.
    pub fn quadratic(a: Complex64, order: usize) -> Self {
        AnalyticFunction::Series(PowerSeries::padded(&[ZERO, ONE, a], order.max(2)))
    }

    pub fn as_series(&self) -> Option<&PowerSeries> {
        match self {
            AnalyticFunction::Series(s) => Some(s),
            _ => None,
        }
    }

    /// Jet of the given order at `z`, for `|z| < 1`.
    pub fn jet(&self, z: Complex64, order: usize) -> Result<Jet> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk(z));
        }
        Ok(self.jet_unchecked(z, order))
    }

    fn jet_unchecked(&self, z: Complex64, order: usize) -> Jet {
        match self {
            AnalyticFunction::Series(s) => series_jet(s, z, order),
            AnalyticFunction::Builtin(b) => b.jet(z, order),
            AnalyticFunction::Ruscheweyh { inner, n } => {
                let n = *n;
                let base = inner.jet_unchecked(z, order + n as usize);
                if n == 0 {
                    return base;
                }
                // (z / n!) d^n/dz^n { z^(n-1) f }
                let mut j = base.mul_z_pow(n - 1);
                for _ in 0..n {
                    j = j.differentiate();
                }
                let factorial: f64 = (1..=n).map(f64::from).product();
                j.mul_z().scale(Complex64::new(1.0 / factorial, 0.0))
            }
            AnalyticFunction::Salagean { inner, n } => {
                let base = inner.jet_unchecked(z, order + *n as usize);
                (0..*n).fold(base, |acc, _| acc.z_differentiate())
            }
        }
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet(z, 0)?.value())
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet(z, 1)?.derivative(1))
    }

    /// Truncated power series of this function. Series inputs are returned
    /// as stored (never padded past their own order).
    pub fn to_series(&self, order: usize) -> Result<PowerSeries> {
        match self {
            AnalyticFunction::Series(s) => Ok(s.truncate(order)),
            AnalyticFunction::Builtin(b) => Ok(b.series(order)),
            AnalyticFunction::Ruscheweyh { inner, n } => crate::operators::ruscheweyh(
                &inner.to_series(order)?,
                crate::operators::RuscheweyhOrder::new(f64::from(*n))?,
            ),
            AnalyticFunction::Salagean { inner, n } => crate::operators::salagean(
                &inner.to_series(order)?,
                crate::operators::SalageanOrder(*n),
            ),
        }
    }

    /// `f(0) = 0` and `f'(0) = 1`; exact on series, by construction otherwise.
    pub fn check_normalized(&self) -> Result<()> {
        match self {
            AnalyticFunction::Series(s) => s.check_normalized(),
            AnalyticFunction::Builtin(_) => Ok(()),
            AnalyticFunction::Ruscheweyh { inner, .. }
            | AnalyticFunction::Salagean { inner, .. } => inner.check_normalized(),
        }
    }
}

impl From<PowerSeries> for AnalyticFunction {
    fn from(s: PowerSeries) -> Self {
        AnalyticFunction::Series(s)
    }
}

impl From<Builtin> for AnalyticFunction {
    fn from(b: Builtin) -> Self {
        AnalyticFunction::Builtin(b)
    }
}

/// Taylor shift of a polynomial by repeated synthetic division.
fn series_jet(s: &PowerSeries, z0: Complex64, order: usize) -> Jet {
    let mut work = s.coeffs().to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if work.is_empty() {
            out.push(ZERO);
            continue;
        }
        // divide by (z - z0): remainder is the value, quotient carries on
        let n = work.len();
        for i in (0..n - 1).rev() {
            let carry = work[i + 1];
            work[i] += carry * z0;
        }
        out.push(work[0]);
        work.remove(0);
    }
    Jet::new(z0, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn series_jet_matches_derivatives() {
        // f = z + z^2 + z^3 at 0.3 + 0.2i
        let f = PowerSeries::from_real(&[0.0, 1.0, 1.0, 1.0]);
        let z = Complex64::new(0.3, 0.2);
        let j = series_jet(&f, z, 4);
        assert!(close(j.value(), z + z * z + z * z * z, 1e-15));
        assert!(close(j.derivative(1), 1.0 + 2.0 * z + 3.0 * z * z, 1e-15));
        assert!(close(j.derivative(2), 2.0 + 6.0 * z, 1e-15));
        assert!(close(j.derivative(3), Complex64::new(6.0, 0.0), 1e-15));
        assert!(j.derivative(4).norm() < 1e-15);
    }

    #[test]
    fn builtin_jets_match_closed_forms() {
        let z = Complex64::new(0.4, -0.3);
        let k = Builtin::Koebe.jet(z, 2);
        assert!(close(k.value(), z / ((1.0 - z) * (1.0 - z)), 1e-14));
        assert!(close(k.derivative(1), (1.0 + z) / (1.0 - z).powi(3), 1e-14));
        assert!(close(k.derivative(2), (4.0 + 2.0 * z) / (1.0 - z).powi(4), 1e-14));
        let g = Builtin::Geometric.jet(z, 1);
        assert!(close(g.value(), z / (1.0 - z), 1e-14));
        assert!(close(g.derivative(1), 1.0 / ((1.0 - z) * (1.0 - z)), 1e-14));
        let e = Builtin::ExpNormalized.jet(z, 3);
        assert!(close(e.value(), z.exp() - 1.0, 1e-14));
        assert!(close(e.derivative(3), z.exp(), 1e-14));
    }

    #[test]
    fn builtin_series_agrees_with_jet_inside_disk() {
        for b in Builtin::ALL {
            let s = b.series(400);
            let z = Complex64::new(0.2, 0.35);
            assert!(close(s.horner(z), b.jet(z, 0).value(), 1e-12), "{b}");
        }
    }

    #[test]
    fn outside_disk_rejected() {
        let f = AnalyticFunction::from(Builtin::Koebe);
        assert!(matches!(f.value(Complex64::new(1.0, 0.0)), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn builtin_names_roundtrip() {
        for b in Builtin::ALL {
            assert_eq!(Builtin::from_name(b.name()), Some(b));
        }
        assert_eq!(Builtin::from_name("bogus"), None);
    }
}
