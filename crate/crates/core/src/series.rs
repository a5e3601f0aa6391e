//! Truncated power series with complex coefficients.
//!
//! A [`PowerSeries`] of truncation order `N` stores the `N + 1` coefficients of
//! `z^0 ..= z^N`. Binary operations truncate to the smaller order of the two
//! operands; no coefficient beyond an operand's order is ever fabricated.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order used when none is given.
pub const DEFAULT_ORDER: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients; the truncation order is
    /// `coeffs.len() - 1`. An empty list is treated as the zero constant.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![ZERO; order + 1])
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = ONE;
        s
    }

    /// `z / (1 - z)`, the unit of the Hadamard product on normalized series.
    pub fn hadamard_unit(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 0 { ZERO } else { ONE })
    }

    /// Copies `coeffs` into a series of the given order, padding with zeros
    /// (or truncating when `coeffs` is longer).
    pub fn padded(coeffs: &[Complex64], order: usize) -> Self {
        Self::from_fn(order, |k| coeffs.get(k).copied().unwrap_or(ZERO))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Member of the normalized class: `a_0 = 0` and `a_1 = 1` exactly.
    pub fn is_normalized(&self) -> bool {
        self.order() >= 1 && self.coeffs[0] == ZERO && self.coeffs[1] == ONE
    }

    pub fn check_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized {
                value: self.coeff(0),
                derivative: self.coeff(1),
            })
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Cauchy product truncated to the smaller order.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
    }

    /// Coefficientwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| self.coeffs[k] * other.coeffs[k])
    }

    /// `f'`; the truncation order drops by one.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |k| self.coeffs[k + 1] * (k + 1) as f64)
    }

    /// `z f'`; the truncation order is preserved.
    pub fn z_differentiate(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at the origin; the truncation order grows by one.
    pub fn integrate_from_zero(&self) -> Self {
        Self::from_fn(self.order() + 1, |k| {
            if k == 0 {
                ZERO
            } else {
                self.coeffs[k - 1] / k as f64
            }
        })
    }

    /// `z f`; the truncation order grows by one.
    pub fn mul_z(&self) -> Self {
        Self::from_fn(self.order() + 1, |k| if k == 0 { ZERO } else { self.coeffs[k - 1] })
    }

    /// `f / z` for a series with vanishing constant term.
    pub fn div_z(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::InvalidConfig(format!(
                "cannot divide by z: constant term is {}",
                self.coeffs[0]
            )));
        }
        Ok(Self::new(if self.order() == 0 {
            vec![ZERO]
        } else {
            self.coeffs[1..].to_vec()
        }))
    }

    /// Logarithm of a series with constant term exactly 1, from `u L' = u'`.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_constant()?;
        let u = &self.coeffs;
        let n = self.order();
        let mut l = vec![ZERO; n + 1];
        for k in 1..=n {
            let mut acc = u[k] * k as f64;
            for j in 1..k {
                acc -= l[j] * u[k - j] * j as f64;
            }
            l[k] = acc / k as f64;
        }
        Ok(Self::new(l))
    }

    /// Exponential of a series with zero constant term, from `E' = L' E`.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::InvalidConfig(format!(
                "series exponential needs a zero constant term, got {}",
                self.coeffs[0]
            )));
        }
        let l = &self.coeffs;
        let n = self.order();
        let mut e = vec![ZERO; n + 1];
        e[0] = ONE;
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += l[j] * e[k - j] * j as f64;
            }
            e[k] = acc / k as f64;
        }
        Ok(Self::new(e))
    }

    /// `u^gamma = exp(gamma log u)` on the branch with value 1 at the origin.
    pub fn complex_power(&self, gamma: Complex64) -> Result<Self> {
        self.require_unit_constant()?;
        if gamma == ZERO {
            return Ok(Self::constant(ONE, self.order()));
        }
        if gamma == ONE {
            return Ok(self.clone());
        }
        self.log()?.scale(gamma).exp()
    }

    /// Horner evaluation inside the open unit disk.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk(z));
        }
        Ok(self.horner(z))
    }

    /// Horner evaluation without the disk check.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Largest coefficientwise modulus of `self - other` over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn require_unit_constant(&self) -> Result<()> {
        if self.coeffs[0] != ONE {
            return Err(Error::NonUnitConstantTerm(self.coeffs[0]));
        }
        Ok(())
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: Self) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k] + rhs.coeffs[k])
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: Self) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k] - rhs.coeffs[k])
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: Self) -> PowerSeries {
        self.multiply(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self.scale(-ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn difference_of_squares() {
        let a = PowerSeries::from_real(&[1.0, 1.0, 0.0]);
        let b = PowerSeries::from_real(&[1.0, -1.0, 0.0]);
        assert_eq!(a.multiply(&b), PowerSeries::from_real(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn z_times_z() {
        let z = PowerSeries::identity(4);
        assert_eq!(z.multiply(&z), PowerSeries::from_real(&[0.0, 0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = PowerSeries::from_real(&[1.0, 2.0, 3.0, 4.0]);
        let b = PowerSeries::from_real(&[1.0, 1.0]);
        assert_eq!(a.multiply(&b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(a.hadamard(&b).order(), 1);
    }

    #[test]
    fn exp_squared_matches_brute_force_convolution() {
        // brute-force convolution of factorial reciprocals vs 2^k / k!
        let n = 20;
        let mut fact = vec![1.0f64; n + 1];
        for k in 1..=n {
            fact[k] = fact[k - 1] * k as f64;
        }
        let recip: Vec<f64> = fact.iter().map(|f| 1.0 / f).collect();
        let mut brute = vec![0.0; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                brute[i + j] += recip[i] * recip[j];
            }
        }
        let e = PowerSeries::from_real(&recip);
        let sq = e.multiply(&e);
        for k in 0..=n {
            let closed = 2f64.powi(k as i32) / fact[k];
            assert!((brute[k] - closed).abs() < 1e-14);
            assert!((sq.coeff(k) - c(brute[k])).norm() < 1e-14);
        }
    }

    #[test]
    fn hadamard_of_small_polynomials() {
        let a = PowerSeries::from_real(&[0.0, 1.0, 2.0]);
        let b = PowerSeries::from_real(&[0.0, 1.0, 3.0]);
        assert_eq!(a.hadamard(&b), PowerSeries::from_real(&[0.0, 1.0, 6.0]));
    }

    #[test]
    fn hadamard_unit_is_identity_on_normalized() {
        let f = PowerSeries::from_real(&[0.0, 1.0, -0.5, 0.25, 3.0]);
        assert_eq!(f.hadamard(&PowerSeries::hadamard_unit(4)), f);
    }

    #[test]
    fn derivatives_and_antiderivative() {
        let f = PowerSeries::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(f.differentiate(), PowerSeries::from_real(&[1.0, 2.0]));
        assert_eq!(f.z_differentiate(), PowerSeries::from_real(&[0.0, 1.0, 2.0]));
        assert_eq!(f.differentiate().integrate_from_zero(), f);
    }

    #[test]
    fn integer_power_of_one_plus_z() {
        let u = PowerSeries::from_real(&[1.0, 1.0, 0.0, 0.0]);
        let sq = u.complex_power(c(2.0)).unwrap();
        let expected = PowerSeries::from_real(&[1.0, 2.0, 1.0, 0.0]);
        assert!(sq.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn binomial_series_oracle() {
        // (1 - z)^-2 = sum (k + 1) z^k
        let n = 30;
        let u = PowerSeries::padded(&[c(1.0), c(-1.0)], n);
        let p = u.complex_power(c(-2.0)).unwrap();
        for k in 0..=n {
            assert!((p.coeff(k) - c(k as f64 + 1.0)).norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn power_rejects_non_unit_constant() {
        let u = PowerSeries::from_real(&[2.0, 1.0]);
        assert_eq!(u.complex_power(c(0.5)), Err(Error::NonUnitConstantTerm(c(2.0))));
        let v = PowerSeries::from_real(&[1.0 + 1e-15, 1.0]);
        assert!(matches!(v.complex_power(c(0.5)), Err(Error::NonUnitConstantTerm(_))));
    }

    #[test]
    fn power_zero_and_one() {
        let u = PowerSeries::from_real(&[1.0, 0.3, -0.2, 0.1]);
        assert_eq!(u.complex_power(c(0.0)).unwrap(), PowerSeries::constant(c(1.0), 3));
        assert!(u.complex_power(c(1.0)).unwrap().max_abs_diff(&u) < 1e-15);
    }

    #[test]
    fn evaluate_points() {
        let f = PowerSeries::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(f.evaluate(c(0.0)).unwrap(), c(0.0));
        assert_eq!(f.evaluate(c(0.5)).unwrap(), c(0.75));
        let geo = PowerSeries::from_fn(64, |_| c(1.0));
        assert!((geo.evaluate(c(0.3)).unwrap() - c(1.0 / 0.7)).norm() < 1e-12);
        assert_eq!(f.evaluate(c(1.0)), Err(Error::OutsideDisk(c(1.0))));
        assert!(f.evaluate(Complex64::new(0.8, 0.6)).is_err());
    }

    #[test]
    fn normalization_is_exact() {
        assert!(PowerSeries::identity(5).is_normalized());
        assert!(!PowerSeries::from_real(&[0.0, 1.0 + 1e-16 * 4.0]).is_normalized());
        assert!(!PowerSeries::from_real(&[1e-300, 1.0]).is_normalized());
    }
}
