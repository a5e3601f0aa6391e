//! The Loewner chain behind the blended criteria, and a numerical check of
//! the conditions that make it a univalent subordination chain.
//!
//! With `zeta = e^(-at) z`, `E = e^((a+b)t)`, `g = z psi` and `phi` as in
//! [`crate::integral_op`], the chain is
//!
//! ```text
//! L(z, t) = zeta [phi(zeta) + kappa(t) psi(zeta)^(beta-1) D(zeta)]^(1/beta)
//! kappa(t) = beta (E - 1) / (1 + c)
//! ```
//!
//! where `D = P' - alpha` (`P = D^n h`) for the derivative family and
//! `D = (P - alpha)/(Q - alpha)` (`P = D^n f`, `Q = D^v h`) for the quotient
//! family. The bracket equals `1 + beta D(0) (E - 1)/(1 + c)` at the origin,
//! a ray from 1, so the principal branch there is continuous in `t`; away
//! from the origin the branch is tracked along the ray to `zeta`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticFunction;
use crate::criteria::{operator_image, CriterionParams, GridConfig, DELTA_SING};
use crate::error::{Error, Result};
use crate::integral_op::{f_beta_point, wrap, BetaKernel, IntegralOperatorInput, KernelPoint, BRANCH_GUARD};
use crate::operators::apply;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance of the `t = 0` anchor and of the two `w` computations.
pub const CHAIN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainFamily {
    /// `D = [D^n h]' - alpha`.
    #[default]
    Derivative,
    /// `D = (D^n f - alpha) / (D^v h - alpha)`.
    Quotient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoewnerConfig {
    pub a: f64,
    pub b: f64,
    pub t_samples: Vec<f64>,
    pub dt: f64,
    /// Sample grid in `z`; `max_radius` is the chain radius.
    pub grid: GridConfig,
    pub family: ChainFamily,
}

impl Default for LoewnerConfig {
    fn default() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            t_samples: vec![0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0],
            dt: 1e-3,
            grid: GridConfig {
                n_radii: 6,
                n_angles: 16,
                max_radius: 0.9,
                tolerance: 1e-9,
            },
            family: ChainFamily::Derivative,
        }
    }
}

impl LoewnerConfig {
    /// Default configuration with `a = 1`, `b = m`.
    pub fn for_params(params: &CriterionParams) -> Self {
        Self {
            b: params.m,
            ..Default::default()
        }
    }

    pub fn with_family(mut self, family: ChainFamily) -> Self {
        self.family = family;
        self
    }

    pub fn m(&self) -> f64 {
        self.b / self.a
    }

    pub fn validate(&self, params: &CriterionParams) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.a > 0.0 && self.b > 0.0) {
            return bad(format!("a and b must be positive, got a = {}, b = {}", self.a, self.b));
        }
        if !(self.dt > 0.0 && self.dt <= 1e-3) {
            return bad(format!("dt must lie in (0, 1e-3], got {}", self.dt));
        }
        if self.t_samples.first() != Some(&0.0) {
            return bad("t_samples must start at 0".into());
        }
        if self.t_samples.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("t_samples must be strictly increasing".into());
        }
        if (self.m() - params.m).abs() > 1e-9 * params.m.max(1.0) {
            return bad(format!("b/a = {} does not match m = {}", self.m(), params.m));
        }
        self.grid.validate()
    }
}

/// Chain quantities at one `(z, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ChainPoint {
    zeta: Complex64,
    kernel: KernelPoint,
    d: Complex64,
    zeta_d_prime: Complex64,
    kappa: Complex64,
    /// `log Psi4` on the tracked branch.
    log_psi4: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PSample {
    pub z: Complex64,
    pub t: f64,
    /// `z dL/dz / dL/dt` with `dL/dt` by finite differences.
    pub p: Complex64,
    pub w: Complex64,
    /// The same quantities through `G`: `p = (G + 1)/(b - a G)`.
    pub p_from_g: Complex64,
    pub w_from_g: Complex64,
}

#[derive(Debug, Clone)]
enum Ingredient {
    Derivative(AnalyticFunction),
    Quotient(AnalyticFunction, AnalyticFunction),
}

/// A chain bound to its inputs; evaluations are pure and thread-safe.
#[derive(Debug, Clone)]
pub struct LoewnerChain {
    kernel: BetaKernel,
    ingredient: Ingredient,
    params: CriterionParams,
    a: f64,
    b: f64,
}

impl LoewnerChain {
    pub fn new(
        f: &AnalyticFunction,
        g: &AnalyticFunction,
        h: &AnalyticFunction,
        params: &CriterionParams,
        cfg: &LoewnerConfig,
    ) -> Result<Self> {
        cfg.validate(params)?;
        if params.c == -ONE {
            return Err(Error::InvalidConfig("c = -1 makes the chain undefined".into()));
        }
        let kernel = BetaKernel::new(IntegralOperatorInput::new(f.clone(), g.clone(), params.beta))?;
        let ingredient = match cfg.family {
            ChainFamily::Derivative => Ingredient::Derivative(operator_image(h, params)?),
            ChainFamily::Quotient => Ingredient::Quotient(
                apply(f, params.operator_kind, params.n)?,
                apply(h, params.operator_kind, params.v)?,
            ),
        };
        Ok(Self {
            kernel,
            ingredient,
            params: *params,
            a: cfg.a,
            b: cfg.b,
        })
    }

    fn m(&self) -> f64 {
        self.b / self.a
    }

    /// `D(0)`.
    fn d0(&self) -> Complex64 {
        match self.ingredient {
            Ingredient::Derivative(_) => ONE - self.params.alpha,
            Ingredient::Quotient(..) => ONE,
        }
    }

    fn kappa(&self, t: f64) -> Complex64 {
        let e = ((self.a + self.b) * t).exp();
        self.params.beta * (e - 1.0) / (ONE + self.params.c)
    }

    /// `D(u)` and `u D'(u)`.
    fn d_parts(&self, u: Complex64) -> Result<(Complex64, Complex64)> {
        let alpha = self.params.alpha;
        let guard = |x: Complex64| {
            if x.norm() < DELTA_SING {
                Err(Error::SingularPoint(u))
            } else {
                Ok(x)
            }
        };
        match &self.ingredient {
            Ingredient::Derivative(p) => {
                let j = p.jet(u, 2)?;
                Ok((guard(j.derivative(1) - alpha)?, u * j.derivative(2)))
            }
            Ingredient::Quotient(p, q) => {
                let (pj, qj) = (p.jet(u, 1)?, q.jet(u, 1)?);
                if alpha == ZERO && u == ZERO {
                    return Ok((ONE, ZERO));
                }
                // with alpha = 0 the quotients are taken against P/u and Q/u
                let (pd, qd, up, uq) = if alpha == ZERO {
                    (pj.value() / u, qj.value() / u, pj.derivative(1), qj.derivative(1))
                } else {
                    (pj.value() - alpha, qj.value() - alpha, u * pj.derivative(1), u * qj.derivative(1))
                };
                let (pd, qd) = (guard(pd)?, guard(qd)?);
                let d = pd / qd;
                Ok((d, d * (up / pd - uq / qd)))
            }
        }
    }

    fn psi4(&self, kernel: &KernelPoint, d: Complex64, kappa: Complex64) -> Complex64 {
        kernel.phi + kappa * kernel.psi_pow * d
    }

    fn point(&self, z: Complex64, t: f64) -> Result<ChainPoint> {
        let zeta = (-self.a * t).exp() * z;
        let kappa = self.kappa(t);
        let origin = ONE + kappa * self.d0();
        if origin.norm() < BRANCH_GUARD {
            return Err(Error::BranchAmbiguity(ZERO));
        }
        let start = origin.ln();
        if zeta == ZERO {
            let kernel = self.kernel.point(ZERO)?;
            let (d, zeta_d_prime) = self.d_parts(ZERO)?;
            return Ok(ChainPoint { zeta, kernel, d, zeta_d_prime, kappa, log_psi4: start });
        }
        let mut pieces = 16usize;
        'refine: loop {
            let profile = self.kernel.ray_profile(zeta, pieces)?;
            let mut arg = start.im;
            let mut last = None;
            for (s, kernel) in profile {
                let u = zeta * s;
                let (d, ud) = self.d_parts(u)?;
                let value = self.psi4(&kernel, d, kappa);
                if value.norm() < BRANCH_GUARD {
                    return Err(Error::BranchAmbiguity(u));
                }
                let step = wrap(value.arg() - arg.rem_euclid(2.0 * PI));
                if step.abs() > PI / 2.0 {
                    if pieces < 1024 {
                        pieces *= 2;
                        continue 'refine;
                    }
                    return Err(Error::BranchAmbiguity(u));
                }
                arg += step;
                last = Some((kernel, d, ud, Complex64::new(value.norm().ln(), arg)));
            }
            let (kernel, d, zeta_d_prime, log_psi4) = last.expect("non-empty ray profile");
            return Ok(ChainPoint { zeta, kernel, d, zeta_d_prime, kappa, log_psi4 });
        }
    }

    fn value_of(&self, p: &ChainPoint) -> Complex64 {
        p.zeta * (p.log_psi4 / self.params.beta).exp()
    }

    /// `L(z, t)`.
    pub fn value(&self, z: Complex64, t: f64) -> Result<Complex64> {
        if z == ZERO {
            return Ok(ZERO);
        }
        Ok(self.value_of(&self.point(z, t)?))
    }

    /// `L(z, s)` on the branch nearest to a tracked reference logarithm.
    fn value_near(&self, z: Complex64, s: f64, reference: Complex64) -> Result<Complex64> {
        let zeta = (-self.a * s).exp() * z;
        let kernel = self.kernel.point(zeta)?;
        let (d, _) = self.d_parts(zeta)?;
        let value = self.psi4(&kernel, d, self.kappa(s));
        if value.norm() < BRANCH_GUARD {
            return Err(Error::BranchAmbiguity(zeta));
        }
        let principal = value.ln();
        let turns = ((reference.im - principal.im) / (2.0 * PI)).round();
        let log = Complex64::new(principal.re, principal.im + 2.0 * PI * turns);
        Ok(zeta * (log / self.params.beta).exp())
    }

    /// `z dL/dz = L [1 + zeta Psi4'/(beta Psi4)]`.
    fn z_dl_dz(&self, p: &ChainPoint) -> Complex64 {
        let beta = self.params.beta;
        let k = &p.kernel;
        let zeta_psi4_prime = beta * (k.q() - k.phi)
            + p.kappa * k.psi_pow * ((beta - ONE) * (k.zg_over_g - ONE) * p.d + p.zeta_d_prime);
        let psi4 = p.log_psi4.exp();
        self.value_of(p) * (ONE + zeta_psi4_prime / (beta * psi4))
    }

    /// `dL/dt` by central differences, extrapolated once.
    fn dl_dt(&self, z: Complex64, t: f64, dt: f64, reference: Complex64) -> Result<Complex64> {
        let central = |h: f64| -> Result<Complex64> {
            Ok((self.value_near(z, t + h, reference)? - self.value_near(z, t - h, reference)?) / (2.0 * h))
        };
        let coarse = central(dt)?;
        let fine = central(dt / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// The linear coefficient of `L(., t)`, as printed:
    /// `e^(((a + b - a beta)/beta) t) [((1+c-D(0) beta)/(1+c)) e^(-(a+b)t) + D(0) beta/(1+c)]^(1/beta)`.
    pub fn a1(&self, t: f64) -> Complex64 {
        let (beta, c, d0) = (self.params.beta, self.params.c, self.d0());
        let s = self.a + self.b;
        let bracket = (ONE + c - d0 * beta) / (ONE + c) * (-s * t).exp() + d0 * beta / (ONE + c);
        ((Complex64::new(s, 0.0) - self.a * beta) / beta * t).exp() * bracket.powc(ONE / beta)
    }

    /// `G(z, t) = e^(-(a+b)t) [A(zeta) + (E - 1) B(zeta)]`.
    pub fn g_function(&self, z: Complex64, t: f64) -> Result<Complex64> {
        let zeta = (-self.a * t).exp() * z;
        let (d, zd) = self.d_parts(zeta)?;
        let f_prime = self.kernel.input().f.derivative(zeta)?;
        let zg_over_g = crate::criteria::z_log_derivative(&self.kernel.input().g, zeta)?;
        let a_part = (ONE + self.params.c) * f_prime / d - ONE;
        let b_part = (self.params.beta - ONE) * zg_over_g + zd / d;
        let decay = (-(self.a + self.b) * t).exp();
        Ok(decay * a_part + (1.0 - decay) * b_part)
    }

    /// `H = G - (m-1)/2`.
    pub fn h_function(&self, z: Complex64, t: f64) -> Result<Complex64> {
        Ok(self.g_function(z, t)? - (self.m() - 1.0) / 2.0)
    }

    /// `p = z dL/dz / dL/dt` and its Mobius image `w = (p-1)/(p+1)`, both
    /// directly and through `G`.
    pub fn p_function(&self, z: Complex64, t: f64, dt: f64) -> Result<PSample> {
        let point = self.point(z, t)?;
        let dt_value = self.dl_dt(z, t, dt, point.log_psi4)?;
        if dt_value.norm() < DELTA_SING {
            return Err(Error::DegenerateDenominator { z, t });
        }
        let p = self.z_dl_dz(&point) / dt_value;
        let g = self.g_function(z, t)?;
        let p_from_g = (g + 1.0) / (self.b - self.a * g);
        Ok(PSample {
            z,
            t,
            p,
            w: (p - 1.0) / (p + 1.0),
            p_from_g,
            w_from_g: ((1.0 + self.a) * g + 1.0 - self.b) / ((1.0 - self.a) * g + 1.0 + self.b),
        })
    }
}

pub fn chain_value(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    cfg: &LoewnerConfig,
    z: Complex64,
    t: f64,
) -> Result<Complex64> {
    LoewnerChain::new(f, g, h, params, cfg)?.value(z, t)
}

/// `a1(t)` for the derivative family (`D(0) = 1 - alpha`) or the quotient
/// family (`D(0) = 1`).
pub fn a1(params: &CriterionParams, cfg: &LoewnerConfig, t: f64) -> Complex64 {
    let d0 = match cfg.family {
        ChainFamily::Derivative => ONE - params.alpha,
        ChainFamily::Quotient => ONE,
    };
    let (beta, c) = (params.beta, params.c);
    let s = cfg.a + cfg.b;
    let bracket = (ONE + c - d0 * beta) / (ONE + c) * (-s * t).exp() + d0 * beta / (ONE + c);
    ((Complex64::new(s, 0.0) - cfg.a * beta) / beta * t).exp() * bracket.powc(ONE / beta)
}

pub fn g_function(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    cfg: &LoewnerConfig,
    z: Complex64,
    t: f64,
) -> Result<Complex64> {
    LoewnerChain::new(f, g, h, params, cfg)?.g_function(z, t)
}

pub fn h_function(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    cfg: &LoewnerConfig,
    z: Complex64,
    t: f64,
) -> Result<Complex64> {
    LoewnerChain::new(f, g, h, params, cfg)?.h_function(z, t)
}

pub fn p_function(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    cfg: &LoewnerConfig,
    z: Complex64,
    t: f64,
) -> Result<PSample> {
    LoewnerChain::new(f, g, h, params, cfg)?.p_function(z, t, cfg.dt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_z: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleError {
    pub z: Complex64,
    pub t: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub satisfied: bool,
    pub checks: Vec<ChainCheck>,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<SampleError>,
}

impl ChainReport {
    pub fn check(&self, name: &str) -> Option<&ChainCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Worst {
    value: f64,
    z: Option<Complex64>,
    t: Option<f64>,
}

impl Worst {
    fn new(value: f64) -> Self {
        Self { value, z: None, t: None }
    }

    fn max(&mut self, value: f64, z: Complex64, t: f64) {
        if value > self.value || value.is_nan() {
            *self = Self { value, z: Some(z), t: Some(t) };
        }
    }

    fn min(&mut self, value: f64, z: Complex64, t: f64) {
        if value < self.value || value.is_nan() {
            *self = Self { value, z: Some(z), t: Some(t) };
        }
    }

    fn check(self, name: &str, bound: f64, passed: bool) -> ChainCheck {
        ChainCheck {
            name: name.to_string(),
            passed,
            worst: self.value,
            bound,
            worst_z: self.z,
            worst_t: self.t,
        }
    }
}

/// Checks, on the sample grid and `t_samples`:
/// `Re p > 0`, `|H| < (m+1)/2`, `L(., 0) = F_beta`, `|a1|` increasing, and
/// agreement of the direct and `G`-based `w`.
pub fn validate_chain(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    cfg: &LoewnerConfig,
) -> Result<ChainReport> {
    let chain = LoewnerChain::new(f, g, h, params, cfg)?;
    let points = cfg.grid.points();
    let samples: Vec<(Complex64, f64)> = cfg
        .t_samples
        .iter()
        .flat_map(|&t| points.iter().map(move |&z| (z, t)))
        .collect();

    let evaluated: Vec<(Complex64, f64, Result<Complex64>, Option<Result<PSample>>)> = samples
        .par_iter()
        .map(|&(z, t)| {
            let hv = chain.h_function(z, t);
            let pv = (z != ZERO).then(|| chain.p_function(z, t, cfg.dt));
            (z, t, hv, pv)
        })
        .collect();

    let half_sum = (chain.m() + 1.0) / 2.0;
    let mut errors = Vec::new();
    let mut re_p = Worst::new(f64::INFINITY);
    let mut h_abs = Worst::new(0.0);
    let mut w_gap = Worst::new(0.0);
    let mut failed_p = false;
    for (z, t, hv, pv) in evaluated {
        match hv {
            Ok(v) => h_abs.max(v.norm(), z, t),
            Err(e) => {
                h_abs.max(f64::INFINITY, z, t);
                errors.push(SampleError { z, t, message: e.to_string() });
            }
        }
        match pv {
            Some(Ok(s)) => {
                re_p.min(s.p.re, z, t);
                w_gap.max((s.w - s.w_from_g).norm(), z, t);
            }
            Some(Err(e)) => {
                failed_p = true;
                errors.push(SampleError { z, t, message: e.to_string() });
            }
            None => {}
        }
    }

    let anchor: Vec<(Complex64, Result<f64>)> = points
        .par_iter()
        .map(|&z| {
            let err = (|| {
                let input = chain.kernel.input();
                Ok((chain.value(z, 0.0)? - f_beta_point(input, z)?).norm())
            })();
            (z, err)
        })
        .collect();
    let mut anchor_err = Worst::new(0.0);
    for (z, r) in anchor {
        match r {
            Ok(v) => anchor_err.max(v, z, 0.0),
            Err(e) => {
                anchor_err.max(f64::INFINITY, z, 0.0);
                errors.push(SampleError { z, t: 0.0, message: e.to_string() });
            }
        }
    }

    let mut a1_step = Worst::new(f64::INFINITY);
    for w in cfg.t_samples.windows(2) {
        let step = chain.a1(w[1]).norm() - chain.a1(w[0]).norm();
        a1_step.min(step, ZERO, w[1]);
    }

    let checks = vec![
        {
            let passed = !failed_p && re_p.value > 0.0;
            re_p.check("positive_real_part", 0.0, passed)
        },
        {
            let passed = h_abs.value < half_sum;
            h_abs.check("h_bound", half_sum, passed)
        },
        {
            let passed = anchor_err.value <= CHAIN_TOLERANCE;
            anchor_err.check("t0_anchor", CHAIN_TOLERANCE, passed)
        },
        {
            let passed = a1_step.value > 0.0;
            a1_step.check("a1_increasing", 0.0, passed)
        },
        {
            let passed = !failed_p && w_gap.value <= CHAIN_TOLERANCE;
            w_gap.check("w_consistency", CHAIN_TOLERANCE, passed)
        },
    ];
    Ok(ChainReport {
        satisfied: checks.iter().all(|c| c.passed),
        checks,
        samples: samples.len(),
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Builtin;
    use crate::series::PowerSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(coeffs: &[Complex64]) -> AnalyticFunction {
        AnalyticFunction::Series(PowerSeries::padded(coeffs, 48))
    }

    fn id() -> AnalyticFunction {
        AnalyticFunction::identity()
    }

    #[test]
    fn identity_chain_is_exponential() {
        let p = CriterionParams::default();
        let cfg = LoewnerConfig { b: 1.0, ..Default::default() };
        let z = c(0.3, -0.4);
        for t in [0.0, 0.5, 2.0] {
            let l = chain_value(&id(), &id(), &id(), &p, &cfg, z, t).unwrap();
            assert!((l - (t * cfg.b).exp() * z).norm() < 1e-12 * l.norm());
        }
        assert_eq!(chain_value(&id(), &id(), &id(), &p, &cfg, ZERO, 3.0).unwrap(), ZERO);
    }

    #[test]
    fn identity_p_is_one_over_b() {
        let p = CriterionParams { m: 2.0, ..Default::default() };
        let cfg = LoewnerConfig::for_params(&p);
        let s = p_function(&id(), &id(), &id(), &p, &cfg, c(0.5, 0.2), 1.0).unwrap();
        assert!((s.p - 0.5).norm() < 1e-6, "{:?}", s.p);
        assert!((s.p_from_g - 0.5).norm() < 1e-12);
    }

    #[test]
    fn a1_values() {
        let p = CriterionParams::default();
        let cfg = LoewnerConfig::default();
        assert!((a1(&p, &cfg, 0.0) - ONE).norm() < 1e-15);
        let mut last = 0.0;
        for t in [0.0, 5.0, 10.0, 20.0] {
            let v = a1(&p, &cfg, t);
            assert!((v - (cfg.b * t).exp()).norm() < 1e-9 * v.norm());
            assert!(v.norm() > last);
            last = v.norm();
        }
        assert!(last > 1e6);
    }

    #[test]
    fn a1_matches_linear_coefficient() {
        let f = series(&[ZERO, ONE, c(0.1, 0.05), c(-0.02, 0.0)]);
        let g = series(&[ZERO, ONE, c(-0.1, 0.0)]);
        let p = CriterionParams { beta: c(1.3, 0.2), c: c(0.2, 0.1), alpha: c(0.1, -0.05), ..Default::default() };
        let cfg = LoewnerConfig::default();
        let chain = LoewnerChain::new(&f, &g, &f, &p, &cfg).unwrap();
        for t in [0.0, 0.3, 1.0, 4.0] {
            let eps = 1e-6;
            let numeric = chain.value(c(eps, 0.0), t).unwrap() / eps;
            let closed = chain.a1(t);
            assert!((numeric - closed).norm() <= 1e-4 * closed.norm(), "t {t}: {numeric} vs {closed}");
        }
    }

    #[test]
    fn t_zero_is_f_beta() {
        let f = series(&[ZERO, ONE, c(0.15, -0.05), c(0.03, 0.02)]);
        let g = series(&[ZERO, ONE, c(0.1, 0.1)]);
        let p = CriterionParams { beta: c(1.5, 0.3), ..Default::default() };
        let cfg = LoewnerConfig::default();
        let input = IntegralOperatorInput::new(f.clone(), g.clone(), p.beta);
        for z in [c(0.5, 0.3), c(-0.7, 0.1), c(0.0, -0.85)] {
            let l = chain_value(&f, &g, &f, &p, &cfg, z, 0.0).unwrap();
            assert!((l - f_beta_point(&input, z).unwrap()).norm() < 1e-9);
        }
    }

    #[test]
    fn g_at_t_zero_is_ratio_expression() {
        let f = series(&[ZERO, ONE, c(0.2, 0.0)]);
        let h = series(&[ZERO, ONE, c(0.05, 0.1)]);
        let p = CriterionParams { n: 1, alpha: c(0.2, 0.0), c: c(0.1, 0.0), ..Default::default() };
        let cfg = LoewnerConfig::default();
        let z = c(0.4, 0.3);
        let g0 = g_function(&f, &f, &h, &p, &cfg, z, 0.0).unwrap();
        let ph = apply(&h, p.operator_kind, 1).unwrap();
        let expected = (ONE + p.c) * f.derivative(z).unwrap() / (ph.derivative(z).unwrap() - p.alpha) - ONE;
        assert!((g0 - expected).norm() < 1e-12);
    }

    #[test]
    fn h_at_origin_closed_form() {
        let f = series(&[ZERO, ONE, c(0.2, 0.0)]);
        let p = CriterionParams { alpha: c(0.3, 0.1), beta: c(1.2, -0.1), c: c(0.1, 0.2), m: 1.5, ..Default::default() };
        let cfg = LoewnerConfig::for_params(&p);
        let hs = (p.m + 1.0) / 2.0;
        for t in [0.0, 0.5, 3.0] {
            let e = (-(cfg.a + cfg.b) * t).exp();
            let expected = e * ((ONE + p.c) / (ONE - p.alpha) - hs) + (1.0 - e) * (p.beta - hs);
            let hv = h_function(&f, &f, &f, &p, &cfg, ZERO, t).unwrap();
            assert!((hv - expected).norm() < 1e-12);
            assert!(hv.norm() < hs);
        }
    }

    #[test]
    fn w_formulations_agree() {
        let f = series(&[ZERO, ONE, c(0.1, 0.02), c(-0.03, 0.01)]);
        let g = series(&[ZERO, ONE, c(0.05, -0.05)]);
        let p = CriterionParams { beta: c(1.2, 0.1), c: c(0.1, 0.0), m: 1.0, ..Default::default() };
        let cfg = LoewnerConfig::default();
        let chain = LoewnerChain::new(&f, &g, &f, &p, &cfg).unwrap();
        for (z, t) in [(c(0.5, 0.5), 0.0), (c(-0.8, 0.1), 0.25), (c(0.2, -0.85), 2.0)] {
            let s = chain.p_function(z, t, cfg.dt).unwrap();
            assert!((s.w - s.w_from_g).norm() < 1e-6, "{s:?}");
            let half = chain.p_function(z, t, cfg.dt / 2.0).unwrap();
            assert!((s.p - half.p).norm() < 1e-6);
        }
    }

    #[test]
    fn quotient_family_agrees() {
        let f = series(&[ZERO, ONE, c(0.1, 0.0), c(0.02, 0.0)]);
        let h = series(&[ZERO, ONE, c(-0.05, 0.03)]);
        let p = CriterionParams { n: 1, v: 2, beta: c(1.1, 0.0), ..Default::default() };
        let cfg = LoewnerConfig::default().with_family(ChainFamily::Quotient);
        let chain = LoewnerChain::new(&f, &f, &h, &p, &cfg).unwrap();
        let s = chain.p_function(c(0.4, -0.6), 0.5, cfg.dt).unwrap();
        assert!((s.w - s.w_from_g).norm() < 1e-6, "{s:?}");
        let eps = 1e-6;
        assert!((chain.value(c(eps, 0.0), 1.0).unwrap() / eps - chain.a1(1.0)).norm() < 1e-4 * chain.a1(1.0).norm());
    }

    #[test]
    fn validation_passes_for_small_quadratic() {
        let f = series(&[ZERO, ONE, c(0.1, 0.0)]);
        let r = validate_chain(&f, &f, &f, &CriterionParams::default(), &LoewnerConfig::default()).unwrap();
        assert!(r.satisfied, "{r:#?}");
    }

    #[test]
    fn koebe_breaks_h_bound() {
        let k = AnalyticFunction::from(Builtin::Koebe);
        let r = validate_chain(&k, &k, &k, &CriterionParams::default(), &LoewnerConfig::default()).unwrap();
        assert!(!r.check("h_bound").unwrap().passed);
        assert!(!r.satisfied);
    }

    #[test]
    fn config_validation() {
        let p = CriterionParams::default();
        let mut cfg = LoewnerConfig { dt: 1e-2, ..Default::default() };
        assert!(cfg.validate(&p).is_err());
        cfg.dt = 1e-3;
        cfg.t_samples = vec![0.1, 0.2];
        assert!(cfg.validate(&p).is_err());
        cfg.t_samples = vec![0.0, 1.0];
        cfg.b = 2.0;
        assert!(cfg.validate(&p).is_err());
    }
}
