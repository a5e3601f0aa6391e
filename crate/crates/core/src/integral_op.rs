//! The integral operator
//! `F_beta(z) = [beta * int_0^z g^(beta-1)(u) f'(u) du]^(1/beta)`.
//!
//! Writing `g(u) = u psi(u)` with `psi(0) = 1`, the inner integral is
//! `z^beta phi(z)` with `phi(0) = 1`, so `F_beta = z phi^(1/beta)`. Two
//! independent routes compute it:
//!
//! * [`f_beta_series`]: series power, integration and root (canonical).
//! * [`f_beta_point`]: adaptive quadrature along the ray `u = t z`, with the
//!   branches of `psi^(beta-1)` and `phi^(1/beta)` tracked continuously from
//!   the origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::series::{PowerSeries, DEFAULT_ORDER};

/// Guard radius around 0 inside which a tracked branch is refused.
pub const BRANCH_GUARD: f64 = 1e-8;

/// Absolute tolerance of the ray quadrature.
pub const QUADRATURE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralOperatorInput {
    pub f: AnalyticFunction,
    pub g: AnalyticFunction,
    pub beta: Complex64,
}

impl IntegralOperatorInput {
    pub fn new(f: impl Into<AnalyticFunction>, g: impl Into<AnalyticFunction>, beta: Complex64) -> Self {
        Self {
            f: f.into(),
            g: g.into(),
            beta,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.beta == ZERO {
            return Err(Error::ZeroBeta);
        }
        self.f.check_normalized()?;
        self.g.check_normalized()
    }
}

/// Intermediate series of the series route.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSeries {
    /// `psi^(beta-1)` where `psi = g / z`.
    pub psi_pow: PowerSeries,
    /// `phi` with `beta int_0^z g^(beta-1) f' = z^beta phi(z)`.
    pub phi: PowerSeries,
    /// `F_beta = z phi^(1/beta)`.
    pub f_beta: PowerSeries,
}

impl IntegralSeries {
    pub fn new(input: &IntegralOperatorInput) -> Result<Self> {
        input.validate()?;
        let beta = input.beta;
        let f = series_of(&input.f)?;
        let g = series_of(&input.g)?;
        let psi = g.div_z()?;
        let psi_pow = psi.complex_power(beta - ONE)?;
        let q = psi_pow.multiply(&f.differentiate());
        let mut phi = Vec::with_capacity(q.order() + 1);
        for (k, &qk) in q.coeffs().iter().enumerate() {
            let denom = beta + k as f64;
            if denom.norm() < 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "beta = {beta} makes the term z^{k} non-integrable at the origin"
                )));
            }
            phi.push(if k == 0 { ONE } else { beta * qk / denom });
        }
        let phi = PowerSeries::new(phi);
        let root = phi.complex_power(ONE / beta)?;
        let f_beta = root.mul_z();
        Ok(Self {
            psi_pow,
            phi,
            f_beta,
        })
    }
}

fn series_of(f: &AnalyticFunction) -> Result<PowerSeries> {
    match f {
        AnalyticFunction::Series(s) => Ok(s.clone()),
        other => other.to_series(DEFAULT_ORDER),
    }
}

/// `F_beta` as a normalized truncated series.
pub fn f_beta_series(input: &IntegralOperatorInput) -> Result<PowerSeries> {
    Ok(IntegralSeries::new(input)?.f_beta)
}

/// Pointwise ingredients of the operator at one point `u` of the disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    /// `psi(u) = g(u)/u`
    pub psi: Complex64,
    /// `psi(u)^(beta-1)` on the branch continuous from the origin.
    pub psi_pow: Complex64,
    pub f_prime: Complex64,
    /// `u g'(u) / g(u)`
    pub zg_over_g: Complex64,
    /// `phi(u)`
    pub phi: Complex64,
}

impl KernelPoint {
    /// `q = psi^(beta-1) f'`, the regular part of the integrand.
    pub fn q(&self) -> Complex64 {
        self.psi_pow * self.f_prime
    }
}

/// Evaluates `psi`, `u g'/g` at `u`; `psi(0) = 1` and `u g'/g -> 1` at 0.
fn psi_parts(g: &AnalyticFunction, u: Complex64) -> Result<(Complex64, Complex64)> {
    if u == ZERO {
        return Ok((ONE, ONE));
    }
    let jet = g.jet(u, 1)?;
    let psi = jet.value() / u;
    if psi.norm() < BRANCH_GUARD {
        return Err(Error::SingularPoint(u));
    }
    Ok((psi, jet.derivative(1) / psi))
}

/// Either route to the pointwise kernel. The loewner module evaluates the
/// chain through this so closed-form inputs never need truncation.
#[derive(Debug, Clone)]
pub enum BetaKernel {
    Series {
        input: IntegralOperatorInput,
        series: IntegralSeries,
    },
    Quadrature { input: IntegralOperatorInput },
}

impl BetaKernel {
    /// Series route when both `f` and `g` are stored series, quadrature otherwise.
    pub fn new(input: IntegralOperatorInput) -> Result<Self> {
        input.validate()?;
        match (&input.f, &input.g) {
            (AnalyticFunction::Series(_), AnalyticFunction::Series(_)) => {
                let series = IntegralSeries::new(&input)?;
                Ok(BetaKernel::Series { input, series })
            }
            _ => Self::quadrature(input),
        }
    }

    pub fn quadrature(input: IntegralOperatorInput) -> Result<Self> {
        input.validate()?;
        if input.beta.re <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "ray quadrature needs Re(beta) > 0, got beta = {}",
                input.beta
            )));
        }
        Ok(BetaKernel::Quadrature { input })
    }

    pub fn input(&self) -> &IntegralOperatorInput {
        match self {
            BetaKernel::Series { input, .. } | BetaKernel::Quadrature { input } => input,
        }
    }

    pub fn point(&self, u: Complex64) -> Result<KernelPoint> {
        if u.norm() >= 1.0 {
            return Err(Error::OutsideDisk(u));
        }
        let input = self.input();
        let (psi, zg_over_g) = psi_parts(&input.g, u)?;
        let f_prime = input.f.derivative(u)?;
        match self {
            BetaKernel::Series { series, .. } => Ok(KernelPoint {
                psi,
                psi_pow: series.psi_pow.horner(u),
                f_prime,
                zg_over_g,
                phi: series.phi.horner(u),
            }),
            BetaKernel::Quadrature { .. } if u == ZERO => Ok(KernelPoint {
                psi,
                psi_pow: ONE,
                f_prime,
                zg_over_g,
                phi: ONE,
            }),
            BetaKernel::Quadrature { input } => {
                let ray = Ray::new(input, u)?;
                let (phi, _) = ray.phi_tracked()?;
                Ok(KernelPoint {
                    psi,
                    psi_pow: ray.psi_pow(1.0)?,
                    f_prime,
                    zg_over_g,
                    phi,
                })
            }
        }
    }
}

impl BetaKernel {
    /// Kernel points at `pieces` increasing positions `t_j z` on the ray,
    /// ending at `z` itself. The quadrature route integrates the ray once.
    pub fn ray_profile(&self, z: Complex64, pieces: usize) -> Result<Vec<(f64, KernelPoint)>> {
        if z.norm() >= 1.0 {
            return Err(Error::OutsideDisk(z));
        }
        let pieces = pieces.max(1);
        match self {
            BetaKernel::Series { .. } => (1..=pieces)
                .map(|j| {
                    let t = j as f64 / pieces as f64;
                    Ok((t, self.point(z * t)?))
                })
                .collect(),
            BetaKernel::Quadrature { input } => {
                if z == ZERO {
                    return Ok(vec![(1.0, self.point(z)?)]);
                }
                let ray = Ray::new(input, z)?;
                ray.phi_cumulative(pieces)?
                    .into_iter()
                    .map(|(t, phi)| {
                        let u = z * t;
                        let (psi, zg_over_g) = psi_parts(&input.g, u)?;
                        Ok((
                            t,
                            KernelPoint {
                                psi,
                                psi_pow: ray.psi_pow(t)?,
                                f_prime: input.f.derivative(u)?,
                                zg_over_g,
                                phi,
                            },
                        ))
                    })
                    .collect()
            }
        }
    }
}

/// `F_beta(z)` by ray quadrature.
pub fn f_beta_point(input: &IntegralOperatorInput, z: Complex64) -> Result<Complex64> {
    input.validate()?;
    if z.norm() >= 1.0 {
        return Err(Error::OutsideDisk(z));
    }
    if z == ZERO {
        return Ok(ZERO);
    }
    if input.beta.re <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "ray quadrature needs Re(beta) > 0, got beta = {}",
            input.beta
        )));
    }
    let ray = Ray::new(input, z)?;
    let (_, log_phi) = ray.phi_tracked()?;
    Ok(z * (log_phi / input.beta).exp())
}

/// Branch bookkeeping for one ray `t z`, `t` in `[0, 1]`.
struct Ray<'a> {
    input: &'a IntegralOperatorInput,
    z: Complex64,
    /// unwrapped `arg psi(t_k z)` on a uniform grid in `t`
    psi_args: Vec<f64>,
}

impl<'a> Ray<'a> {
    fn new(input: &'a IntegralOperatorInput, z: Complex64) -> Result<Self> {
        let mut samples = 64;
        loop {
            let mut args = Vec::with_capacity(samples + 1);
            let mut prev: f64 = 0.0;
            let mut max_step: f64 = 0.0;
            args.push(0.0);
            for k in 1..=samples {
                let u = z * (k as f64 / samples as f64);
                let psi = match psi_parts(&input.g, u) {
                    Ok((psi, _)) => psi,
                    Err(Error::SingularPoint(p)) => return Err(Error::BranchAmbiguity(p)),
                    Err(e) => return Err(e),
                };
                let step = wrap(psi.arg() - prev.rem_euclid(2.0 * PI));
                let next = prev + step;
                max_step = max_step.max(step.abs());
                args.push(next);
                prev = next;
            }
            if max_step <= PI / 4.0 || samples >= 4096 {
                return Ok(Self {
                    input,
                    z,
                    psi_args: args,
                });
            }
            samples *= 2;
        }
    }

    fn tracked_log_psi(&self, t: f64) -> Result<Complex64> {
        let u = self.z * t;
        let (psi, _) = match psi_parts(&self.input.g, u) {
            Err(Error::SingularPoint(p)) => return Err(Error::BranchAmbiguity(p)),
            other => other?,
        };
        let n = self.psi_args.len() - 1;
        let x = (t * n as f64).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let frac = x - i as f64;
        let reference = self.psi_args[i] * (1.0 - frac) + self.psi_args[i + 1] * frac;
        let principal = psi.ln();
        let turns = ((reference - principal.im) / (2.0 * PI)).round();
        Ok(Complex64::new(principal.re, principal.im + 2.0 * PI * turns))
    }

    fn psi_pow(&self, t: f64) -> Result<Complex64> {
        Ok(((self.input.beta - ONE) * self.tracked_log_psi(t)?).exp())
    }

    fn q(&self, t: f64) -> Result<Complex64> {
        let f_prime = self.input.f.derivative(self.z * t)?;
        Ok(self.psi_pow(t)? * f_prime)
    }

    /// Exponent `p` of the substitution `tau = s^p`; `p Re(beta) >= 3`
    /// removes the endpoint singularity of `tau^(beta-1)`.
    fn substitution_power(&self) -> f64 {
        (3.0 / self.input.beta.re).ceil().max(1.0)
    }

    /// `phi(t_j z)` at `t_j = (j/pieces)^p`, `j = 1..=pieces`, from one
    /// cumulative integration of `int_0^t tau^(beta-1) q(tau z) dtau`.
    fn phi_cumulative(&self, pieces: usize) -> Result<Vec<(f64, Complex64)>> {
        let beta = self.input.beta;
        let p = self.substitution_power();
        let exponent = beta * p - ONE;
        let integrand = |s: f64| -> Result<Complex64> {
            if s <= 0.0 {
                return Ok(ZERO);
            }
            let t = s.powf(p);
            Ok((exponent * s.ln()).exp() * p * self.q(t)?)
        };
        let opts = QuadratureOptions {
            abs_tol: QUADRATURE_TOL / pieces as f64,
            ..Default::default()
        };
        let mut acc = ZERO;
        let mut out = Vec::with_capacity(pieces);
        for j in 1..=pieces {
            let (s0, s1) = ((j - 1) as f64 / pieces as f64, j as f64 / pieces as f64);
            acc += integrate(integrand, s0, s1, opts)?.value;
            let t = s1.powf(p);
            // phi(t z) = beta t^(-beta) I(t); t^(-beta) uses the real log of t
            out.push((t, beta * (-beta * t.ln()).exp() * acc));
        }
        Ok(out)
    }

    /// `phi(z)` and its logarithm on the branch continuous along the ray.
    fn phi_tracked(&self) -> Result<(Complex64, Complex64)> {
        let mut pieces = 8usize;
        'refine: loop {
            let mut log_phi = ZERO;
            for (t, phi) in self.phi_cumulative(pieces)? {
                if phi.norm() < BRANCH_GUARD {
                    return Err(Error::BranchAmbiguity(self.z * t));
                }
                let step = wrap(phi.arg() - log_phi.im.rem_euclid(2.0 * PI));
                if step.abs() > PI / 2.0 {
                    if pieces < 512 {
                        pieces *= 2;
                        continue 'refine;
                    }
                    return Err(Error::BranchAmbiguity(self.z * t));
                }
                log_phi = Complex64::new(phi.norm().ln(), log_phi.im + step);
            }
            return Ok((log_phi.exp(), log_phi));
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub(crate) fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Builtin;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> AnalyticFunction {
        AnalyticFunction::Series(PowerSeries::padded(
            &coeffs.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>(),
            DEFAULT_ORDER,
        ))
    }

    #[test]
    fn beta_one_returns_f() {
        let f = poly(&[0.0, 1.0, 0.2, -0.1]);
        let input = IntegralOperatorInput::new(f.clone(), poly(&[0.0, 1.0, 0.3]), c(1.0, 0.0));
        let s = f_beta_series(&input).unwrap();
        assert!(s.max_abs_diff(f.as_series().unwrap()) < 1e-14);
        let z = c(0.3, 0.4);
        assert!((f_beta_point(&input, z).unwrap() - f.value(z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn identity_inputs_beta_two() {
        let input = IntegralOperatorInput::new(Builtin::Identity, Builtin::Identity, c(2.0, 0.0));
        let s = f_beta_series(&input).unwrap();
        assert!(s.max_abs_diff(&PowerSeries::identity(s.order())) < 1e-15);
        assert!((f_beta_point(&input, c(0.5, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn square_and_compare() {
        // f = z + z^2/4, g = z, beta = 2: F^2 = 2 int_0^z u f'(u) du
        let f = poly(&[0.0, 1.0, 0.25]);
        let input = IntegralOperatorInput::new(f.clone(), poly(&[0.0, 1.0]), c(2.0, 0.0));
        let fb = f_beta_series(&input).unwrap();
        let squared = fb.multiply(&fb);
        let fs = f.as_series().unwrap();
        let rhs = fs.differentiate().mul_z().integrate_from_zero().scale(c(2.0, 0.0));
        for k in 0..=squared.order() {
            assert!((squared.coeff(k) - rhs.coeff(k)).norm() < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn zero_beta_and_bad_inputs() {
        let input = IntegralOperatorInput::new(Builtin::Identity, Builtin::Identity, c(0.0, 0.0));
        assert_eq!(f_beta_series(&input), Err(Error::ZeroBeta));
        assert_eq!(f_beta_point(&input, c(0.1, 0.0)), Err(Error::ZeroBeta));
        let bad = IntegralOperatorInput::new(Builtin::Identity, poly(&[0.0, 2.0]), c(1.5, 0.0));
        assert!(matches!(f_beta_series(&bad), Err(Error::NotNormalized { .. })));
        let ok = IntegralOperatorInput::new(Builtin::Identity, Builtin::Identity, c(1.5, 0.0));
        assert!(matches!(f_beta_point(&ok, c(1.0, 0.0)), Err(Error::OutsideDisk(_))));
    }

    #[test]
    fn quadrature_matches_series_for_complex_beta() {
        let f = poly(&[0.0, 1.0, 0.1, -0.05, 0.02]);
        let g = poly(&[0.0, 1.0, -0.15, 0.04]);
        let input = IntegralOperatorInput::new(f, g, c(1.5, 0.3));
        let s = f_beta_series(&input).unwrap();
        for z in [c(0.6, 0.2), c(-0.5, 0.45), c(0.05, -0.69)] {
            let a = s.evaluate(z).unwrap();
            let b = f_beta_point(&input, z).unwrap();
            assert!((a - b).norm() < 1e-9, "z = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn kernel_routes_agree() {
        let f = poly(&[0.0, 1.0, 0.2, 0.05]);
        let g = poly(&[0.0, 1.0, 0.1]);
        let input = IntegralOperatorInput::new(f, g, c(0.8, -0.2));
        let series = BetaKernel::new(input.clone()).unwrap();
        let quad = BetaKernel::quadrature(input).unwrap();
        assert!(matches!(series, BetaKernel::Series { .. }));
        let u = c(-0.4, 0.5);
        let (a, b) = (series.point(u).unwrap(), quad.point(u).unwrap());
        assert!((a.phi - b.phi).norm() < 1e-9);
        assert!((a.psi_pow - b.psi_pow).norm() < 1e-12);
        assert!((a.q() - b.q()).norm() < 1e-12);
    }

    #[test]
    fn wrap_range() {
        assert!((wrap(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap(0.25), 0.25);
    }
}
