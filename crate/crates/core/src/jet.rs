//! Local Taylor expansions at a point.
//!
//! A [`Jet`] at `z0` stores `f^(j)(z0) / j!` for `j = 0..=order`. Pointwise
//! operators (Ruscheweyh, Salagean) act on jets so that closed-form functions
//! never need to be truncated to a global power series.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    center: Complex64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn new(center: Complex64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least its value");
        Self { center, coeffs }
    }

    pub fn constant(center: Complex64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The jet of the coordinate function `z` itself.
    pub fn variable(center: Complex64, order: usize) -> Self {
        let mut jet = Self::constant(center, center, order);
        if order >= 1 {
            jet.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        jet
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn taylor_coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `k`-th derivative at the center. Panics if `k` exceeds the order.
    pub fn derivative(&self, k: usize) -> Complex64 {
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        self.coeffs[k] * factorial
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.center, self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.center, self.coeffs.iter().map(|&c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            self.center,
            (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
        )
    }

    pub fn add_constant(&self, value: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new(
            self.center,
            (0..=n)
                .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
                .collect(),
        )
    }

    /// Multiplies by the coordinate `z = center + delta`; the order is kept.
    pub fn mul_z(&self) -> Self {
        let z0 = self.center;
        Self::new(
            self.center,
            (0..=self.order())
                .map(|j| {
                    let prev = if j == 0 { ZERO } else { self.coeffs[j - 1] };
                    self.coeffs[j] * z0 + prev
                })
                .collect(),
        )
    }

    /// Multiplies by `z^p`.
    pub fn mul_z_pow(&self, p: u32) -> Self {
        (0..p).fold(self.clone(), |acc, _| acc.mul_z())
    }

    /// Derivative jet; the order drops by one.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::constant(self.center, ZERO, 0);
        }
        Self::new(
            self.center,
            (0..self.order())
                .map(|j| self.coeffs[j + 1] * (j + 1) as f64)
                .collect(),
        )
    }

    /// `z f'`; the order drops by one.
    pub fn z_differentiate(&self) -> Self {
        self.differentiate().mul_z()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_jet_roundtrip() {
        // f = z^2 at z0 = 0.5: value 0.25, f' = 1, f'' = 2
        let z0 = Complex64::new(0.5, 0.0);
        let z = Jet::variable(z0, 3);
        let f = z.mul(&z);
        assert!((f.value() - 0.25).norm() < 1e-15);
        assert!((f.derivative(1) - 1.0).norm() < 1e-15);
        assert!((f.derivative(2) - 2.0).norm() < 1e-15);
        assert!(f.derivative(3).norm() < 1e-15);
        assert_eq!(f.mul_z(), z.mul(&z).mul(&z));
    }

    #[test]
    fn z_differentiate_of_cube() {
        // z (z^3)' = 3 z^3
        let z0 = Complex64::new(0.1, -0.4);
        let cube = Jet::variable(z0, 4).mul_z_pow(2);
        let lhs = cube.z_differentiate();
        let rhs = cube.scale(Complex64::new(3.0, 0.0)).truncate(3);
        for (a, b) in lhs.taylor_coeffs().iter().zip(rhs.taylor_coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
