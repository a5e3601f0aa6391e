//! The general criteria. With `P = D^n h` (`D` the Ruscheweyh or Salagean
//! derivative):
//!
//! ```text
//! A = (1+c) f' / (P' - alpha) - 1
//! B = (beta-1) z g'/g + z P'' / (P' - alpha)
//! ratio: |A - (m-1)/2| < (m+1)/2
//! blend: | |z|^(m+1) A + (1 - |z|^(m+1)) B - (m-1)/2 | <= (m+1)/2
//! ```
//!
//! The t-free variant replaces the blend by `|B - (m-1)/2| <= (m+1)/2`.
//! The quotient family uses `P = D^n f`, `Q = D^v h` and
//!
//! ```text
//! A = (1+c) f' (Q - alpha) / (P - alpha) - 1
//! B = (beta-1) z g'/g + z P'/(P - alpha) - z Q'/(Q - alpha)
//! ```

use num_complex::Complex64;

use super::grid::GridConfig;
use super::params::{check_param_constraints, ConstraintFamily, CriterionParams};
use super::report::{assemble, CriterionReport, Inequality};
use super::{blend_weight, guarded_div, z_log_derivative, ONE, ZERO};
use crate::analytic::AnalyticFunction;
use crate::error::Result;
use crate::operators::{apply, apply_ruscheweyh, OperatorKind, RuscheweyhOrder};

/// `D^n h` for the configured operator, honouring a fractional order.
pub fn operator_image(h: &AnalyticFunction, params: &CriterionParams) -> Result<AnalyticFunction> {
    match (params.lambda, params.operator_kind) {
        (Some(lambda), OperatorKind::Ruscheweyh) => apply_ruscheweyh(h, RuscheweyhOrder::new(lambda)?),
        _ => apply(h, params.operator_kind, params.n),
    }
}

fn check_inputs(fs: &[&AnalyticFunction]) -> Result<()> {
    fs.iter().try_for_each(|f| f.check_normalized())
}

pub(crate) struct DerivativeForm<'a> {
    pub f: &'a AnalyticFunction,
    pub g: &'a AnalyticFunction,
    pub p: AnalyticFunction,
    pub params: CriterionParams,
}

impl DerivativeForm<'_> {
    /// `(A, B)` at `z`.
    pub fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let p = self.p.jet(z, 2)?;
        let den = p.derivative(1) - self.params.alpha;
        let a = guarded_div((ONE + self.params.c) * self.f.derivative(z)?, den, z)? - ONE;
        let b = (self.params.beta - ONE) * z_log_derivative(self.g, z)? + guarded_div(z * p.derivative(2), den, z)?;
        Ok((a, b))
    }
}

pub(crate) struct QuotientForm<'a> {
    pub f: &'a AnalyticFunction,
    pub g: &'a AnalyticFunction,
    pub p: AnalyticFunction,
    pub q: AnalyticFunction,
    pub params: CriterionParams,
}

impl QuotientForm<'_> {
    /// `(A, B)` at `z`. With `alpha = 0` both quotients are taken against
    /// `P/z` and `Q/z`, whose values at the origin are 1.
    pub fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let alpha = self.params.alpha;
        let p = self.p.jet(z, 1)?;
        let q = self.q.jet(z, 1)?;
        // with alpha = 0, z P'/(P - alpha) = P' / (P/z)
        let (p_den, q_den, zp, zq) = if alpha != ZERO {
            (p.value() - alpha, q.value() - alpha, z * p.derivative(1), z * q.derivative(1))
        } else if z == ZERO {
            (ONE, ONE, p.derivative(1), q.derivative(1))
        } else {
            (p.value() / z, q.value() / z, p.derivative(1), q.derivative(1))
        };
        let zq_term = guarded_div(zq, q_den, z)?;
        let a = (ONE + self.params.c) * self.f.derivative(z)? * guarded_div(q_den, p_den, z)? - ONE;
        let b = (self.params.beta - ONE) * z_log_derivative(self.g, z)? + guarded_div(zp, p_den, z)? - zq_term;
        Ok((a, b))
    }
}

pub(crate) fn ratio_inequality<'a, F>(params: CriterionParams, parts: F) -> Inequality<'a>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)> + Sync + 'a,
{
    Inequality::new(
        "ratio",
        "|A - (m-1)/2| < (m+1)/2",
        params.half_sum(),
        true,
        move |z| Ok((parts(z)?.0 - params.half_diff()).norm()),
    )
}

pub(crate) fn blend_inequality<'a, F>(params: CriterionParams, parts: F) -> Inequality<'a>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)> + Sync + 'a,
{
    Inequality::new(
        "blend",
        "| |z|^(m+1) A + (1 - |z|^(m+1)) B - (m-1)/2 | <= (m+1)/2",
        params.half_sum(),
        false,
        move |z| {
            let (a, b) = parts(z)?;
            let w = blend_weight(z, params.m);
            Ok((a * w + b * (1.0 - w) - params.half_diff()).norm())
        },
    )
}

fn derivative_name(params: &CriterionParams, base: &str, salagean: &str) -> String {
    match params.operator_kind {
        OperatorKind::Ruscheweyh => base.to_string(),
        OperatorKind::Salagean => salagean.to_string(),
    }
}

/// Blended criterion on `P = D^n h` (Ruscheweyh or Salagean).
pub fn eval_theorem2(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    grid: &GridConfig,
) -> Result<CriterionReport> {
    check_inputs(&[f, g, h])?;
    let form = DerivativeForm { f, g, p: operator_image(h, params)?, params: *params };
    let parts = |z| form.parts(z);
    assemble(
        &derivative_name(params, "T2", "T5"),
        check_param_constraints(params, ConstraintFamily::Theorem2),
        vec![ratio_inequality(*params, parts), blend_inequality(*params, parts)],
        grid,
        Vec::new(),
    )
}

/// The t-free variant: the blend is replaced by a bound on `B` alone.
pub fn eval_theorem3(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    grid: &GridConfig,
) -> Result<CriterionReport> {
    check_inputs(&[f, g, h])?;
    let form = DerivativeForm { f, g, p: operator_image(h, params)?, params: *params };
    let parts = |z| form.parts(z);
    let p = *params;
    assemble(
        "T3",
        check_param_constraints(params, ConstraintFamily::Theorem2),
        vec![
            ratio_inequality(p, parts),
            Inequality::new("growth", "|B - (m-1)/2| <= (m+1)/2", p.half_sum(), false, move |z| {
                Ok((parts(z)?.1 - p.half_diff()).norm())
            }),
        ],
        grid,
        Vec::new(),
    )
}

/// Quotient criterion on `P = D^n f`, `Q = D^v h`.
pub fn eval_theorem4(
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    h: &AnalyticFunction,
    params: &CriterionParams,
    grid: &GridConfig,
) -> Result<CriterionReport> {
    check_inputs(&[f, g, h])?;
    let form = QuotientForm {
        f,
        g,
        p: apply(f, params.operator_kind, params.n)?,
        q: apply(h, params.operator_kind, params.v)?,
        params: *params,
    };
    let parts = |z| form.parts(z);
    assemble(
        &derivative_name(params, "T4", "T6"),
        check_param_constraints(params, ConstraintFamily::Theorem4),
        vec![ratio_inequality(*params, parts), blend_inequality(*params, parts)],
        grid,
        Vec::new(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Builtin;
    use crate::series::PowerSeries;

    fn grid() -> GridConfig {
        GridConfig { n_radii: 24, n_angles: 48, ..Default::default() }
    }

    fn quad(a: f64) -> AnalyticFunction {
        AnalyticFunction::Series(PowerSeries::from_real(&[0.0, 1.0, a]))
    }

    #[test]
    fn identity_inputs_pass_every_criterion() {
        let id = AnalyticFunction::identity();
        let p = CriterionParams::default();
        for r in [
            eval_theorem2(&id, &id, &id, &p, &grid()).unwrap(),
            eval_theorem3(&id, &id, &id, &p, &grid()).unwrap(),
            eval_theorem4(&id, &id, &id, &p, &grid()).unwrap(),
        ] {
            assert!(r.satisfied, "{r:?}");
            assert!(r.singular_points.is_empty());
        }
    }

    #[test]
    fn becker_quadratic_margin_positive() {
        let f = quad(0.1);
        let r = eval_theorem2(&f, &f, &f, &CriterionParams::default(), &grid()).unwrap();
        assert!(r.satisfied);
        // blend reduces to (1-|z|^2)|z f''/f'| = (1-r^2) 0.2 r / (1 - 0.2 r) at worst
        let dense = (1..=100_000)
            .map(|i| {
                let r = 0.999 * i as f64 / 100_000.0;
                (1.0 - r * r) * 0.2 * r / (1.0 - 0.2 * r)
            })
            .fold(0.0, f64::max);
        let blend = r.inequality("blend").unwrap();
        assert!((blend.sup_estimate - dense).abs() < 1e-7, "{} vs {dense}", blend.sup_estimate);
    }

    #[test]
    fn koebe_violates_becker() {
        let k = AnalyticFunction::from(Builtin::Koebe);
        let r = eval_theorem2(&k, &k, &k, &CriterionParams::default(), &GridConfig::default()).unwrap();
        assert!(!r.satisfied);
        let blend = r.inequality("blend").unwrap();
        // (1 - r^2) * 2 (2 + r) / ... at r = 0.999 on the real axis: 2 r (2 + r)
        assert!(blend.sup_estimate >= 5.5, "{}", blend.sup_estimate);
    }

    #[test]
    fn r3_radial_oracle() {
        let f = quad(0.25);
        let p = CriterionParams {
            beta: Complex64::new(2.0, 0.0),
            m: 3.0,
            ..Default::default()
        };
        let r = eval_theorem3(&f, &AnalyticFunction::identity(), &f, &p, &grid()).unwrap();
        assert!(r.satisfied, "{r:?}");
        // B = 1 + z f''/f', so |B - 1| = |2az/(1+2az)|, largest at z = -0.999
        let growth = r.inequality("growth").unwrap();
        assert!((growth.sup_estimate - 0.4995 / 0.5005).abs() < 1e-9);
    }

    #[test]
    fn quotient_limit_at_origin_matches_nearby_values() {
        let f = AnalyticFunction::Series(PowerSeries::from_real(&[0.0, 1.0, 0.2, -0.1]));
        let h = quad(0.3);
        let p = CriterionParams { n: 1, v: 2, ..Default::default() };
        let form = QuotientForm {
            f: &f,
            g: &f,
            p: apply(&f, p.operator_kind, 1).unwrap(),
            q: apply(&h, p.operator_kind, 2).unwrap(),
            params: p,
        };
        let (a0, b0) = form.parts(ZERO).unwrap();
        let (a1, b1) = form.parts(Complex64::new(1e-7, 1e-7)).unwrap();
        assert!((a0 - a1).norm() < 1e-6 && (b0 - b1).norm() < 1e-6);
    }

    #[test]
    fn quotient_with_nonzero_alpha() {
        let id = AnalyticFunction::identity();
        let p = CriterionParams { alpha: Complex64::new(-2.0, 0.0), ..Default::default() };
        let r = eval_theorem4(&id, &id, &id, &p, &grid()).unwrap();
        // Q = P so A = c = 0 and B = 0
        assert!(r.satisfied);
        assert!((r.inequality("ratio").unwrap().sup_estimate - 0.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_hitting_derivative_is_reported() {
        // P' = 1 everywhere, alpha = 1 violates the constraint and every point is singular
        let id = AnalyticFunction::identity();
        let p = CriterionParams { alpha: ONE, ..Default::default() };
        let r = eval_theorem2(&id, &id, &id, &p, &GridConfig { n_radii: 2, n_angles: 4, ..Default::default() }).unwrap();
        assert!(!r.params_ok && !r.satisfied);
        assert!(!r.singular_points.is_empty());
    }

    #[test]
    fn salagean_names_and_c5_preset() {
        let f = quad(0.05);
        let p = CriterionParams { n: 1, operator_kind: OperatorKind::Salagean, ..Default::default() };
        let r = eval_theorem2(&f, &f, &f, &p, &grid()).unwrap();
        assert_eq!(r.criterion, "T5");
        let p = CriterionParams { n: 1, beta: ONE, m: 1.0, ..Default::default() };
        let r = eval_theorem4(&f, &f, &f, &p, &grid()).unwrap();
        assert!(r.satisfied, "{r:?}");
    }
}
