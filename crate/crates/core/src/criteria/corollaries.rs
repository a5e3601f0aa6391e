//! Special cases of the general criteria, each evaluated exactly in its
//! printed form with the preset parameters frozen.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridConfig;
use super::params::{check_param_constraints, ConstraintFamily, CriterionParams};
use super::report::{assemble, CriterionReport, Inequality};
use super::theorems::{eval_theorem2, ratio_inequality, DerivativeForm};
use super::{blend_weight, guarded_div, over_z, z_log_derivative, ONE, ZERO};
use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};
use crate::operators::OperatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorollaryId {
    C1,
    C2,
    C3,
    C4,
    C5,
    #[serde(rename = "C5_realcase")]
    C5RealCase,
    C6,
    C7,
    C8,
    C9,
    C10,
    R3,
}

impl CorollaryId {
    pub const ALL: [CorollaryId; 12] = [
        CorollaryId::C1,
        CorollaryId::C2,
        CorollaryId::C3,
        CorollaryId::C4,
        CorollaryId::C5,
        CorollaryId::C5RealCase,
        CorollaryId::C6,
        CorollaryId::C7,
        CorollaryId::C8,
        CorollaryId::C9,
        CorollaryId::C10,
        CorollaryId::R3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorollaryId::C1 => "C1",
            CorollaryId::C2 => "C2",
            CorollaryId::C3 => "C3",
            CorollaryId::C4 => "C4",
            CorollaryId::C5 => "C5",
            CorollaryId::C5RealCase => "C5_realcase",
            CorollaryId::C6 => "C6",
            CorollaryId::C7 => "C7",
            CorollaryId::C8 => "C8",
            CorollaryId::C9 => "C9",
            CorollaryId::C10 => "C10",
            CorollaryId::R3 => "R3",
        }
    }

    /// Whether the preset reads `g` and `h` respectively.
    pub fn uses(self) -> (bool, bool) {
        use CorollaryId::*;
        match self {
            C1 | C3 | C8 | C9 => (true, false),
            C2 | C6 | C7 | C10 => (true, true),
            C4 => (false, true),
            C5 | C5RealCase | R3 => (false, false),
        }
    }

    /// Parameters with the preset's frozen values applied.
    pub fn frozen_params(self, params: &CriterionParams) -> CriterionParams {
        use CorollaryId::*;
        let mut p = *params;
        p.lambda = None;
        let ruscheweyh = |p: &mut CriterionParams, n, v| {
            p.operator_kind = OperatorKind::Ruscheweyh;
            p.n = n;
            p.v = v;
        };
        match self {
            C1 => {
                ruscheweyh(&mut p, 0, 0);
                p.alpha = ZERO;
                p.m = 1.0;
            }
            C2 | C5 | C5RealCase => ruscheweyh(&mut p, 0, 0),
            C3 => ruscheweyh(&mut p, 1, 0),
            C4 => {
                ruscheweyh(&mut p, 0, 0);
                p.c = ZERO;
                p.alpha = ZERO;
                p.beta = Complex64::new(2.0, 0.0);
                p.m = 1.0;
            }
            C6 => {
                ruscheweyh(&mut p, 1, 2);
                p.alpha = ZERO;
            }
            C7 => {
                ruscheweyh(&mut p, 2, 0);
                p.alpha = ZERO;
            }
            C10 => {
                p.operator_kind = OperatorKind::Salagean;
                p.n = 1;
                p.v = 2;
                p.alpha = ZERO;
            }
            C8 | C9 => {}
            R3 => {
                ruscheweyh(&mut p, 0, 0);
                p.c = ZERO;
                p.alpha = ZERO;
                p.beta = Complex64::new(2.0, 0.0);
                p.m = 3.0;
            }
        }
        p
    }

    pub fn constraint_family(self) -> ConstraintFamily {
        use CorollaryId::*;
        match self {
            C1 => ConstraintFamily::Corollary1,
            C2 | C3 | R3 => ConstraintFamily::Theorem2,
            C4 => ConstraintFamily::Unconstrained,
            C5 | C5RealCase => ConstraintFamily::Corollary5,
            C6 | C7 | C8 | C9 | C10 => ConstraintFamily::Theorem4,
        }
    }
}

impl fmt::Display for CorollaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorollaryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorollaryId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown corollary {s:?}")))
    }
}

/// Inputs of a preset; `g` and `h` are only required where the preset reads them.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryFunctions<'a> {
    pub f: &'a AnalyticFunction,
    pub g: Option<&'a AnalyticFunction>,
    pub h: Option<&'a AnalyticFunction>,
}

impl<'a> CorollaryFunctions<'a> {
    pub fn new(f: &'a AnalyticFunction) -> Self {
        Self { f, g: None, h: None }
    }

    fn g(&self, id: CorollaryId) -> Result<&'a AnalyticFunction> {
        self.g
            .ok_or_else(|| Error::InvalidConfig(format!("{id} requires the function g")))
    }

    fn h(&self, id: CorollaryId) -> Result<&'a AnalyticFunction> {
        self.h
            .ok_or_else(|| Error::InvalidConfig(format!("{id} requires the function h")))
    }
}

fn derivatives(f: &AnalyticFunction, z: Complex64) -> Result<[Complex64; 4]> {
    let j = f.jet(z, 3)?;
    Ok([j.value(), j.derivative(1), j.derivative(2), j.derivative(3)])
}

fn frozen_note(id: CorollaryId, p: &CriterionParams) -> String {
    format!(
        "{id}: alpha = {}, beta = {}, c = {}, m = {}, n = {}, v = {}, operator = {:?}",
        p.alpha, p.beta, p.c, p.m, p.n, p.v, p.operator_kind
    )
}

/// Evaluates a preset with its parameters frozen.
pub fn eval_corollary(
    id: CorollaryId,
    fns: CorollaryFunctions<'_>,
    params: &CriterionParams,
    grid: &GridConfig,
) -> Result<CriterionReport> {
    use CorollaryId::*;
    let p = id.frozen_params(params);
    let f = fns.f;
    f.check_normalized()?;
    for func in [fns.g, fns.h].into_iter().flatten() {
        func.check_normalized()?;
    }
    let constraints = check_param_constraints(&p, id.constraint_family());
    let mut notes = vec![frozen_note(id, &p)];
    let (hs, hd) = (p.half_sum(), p.half_diff());

    let inequalities: Vec<Inequality<'_>> = match id {
        C1 => {
            let g = fns.g(id)?;
            vec![Inequality::new(
                "blend",
                "|c |z|^2 + (1 - |z|^2) [(beta-1) z g'/g + z f''/f']| <= 1",
                1.0,
                false,
                move |z| {
                    let [_, d1, d2, _] = derivatives(f, z)?;
                    let w = z.norm_sqr();
                    let inner = (p.beta - ONE) * z_log_derivative(g, z)? + guarded_div(z * d2, d1, z)?;
                    Ok((p.c * w + inner * (1.0 - w)).norm())
                },
            )]
        }
        C2 => {
            let r = eval_theorem2(f, fns.g(id)?, fns.h(id)?, &p, grid)?;
            return Ok(CriterionReport { criterion: id.name().into(), notes: [notes, r.notes].concat(), ..r });
        }
        C3 => {
            let g = fns.g(id)?;
            notes.push("C3: first inequality evaluated as printed".into());
            let k = Complex64::new(2.0 / (p.m + 1.0), 0.0) * (ONE + p.c) - ONE;
            vec![
                Inequality::new(
                    "ratio",
                    "|(2(1+c)/(m+1) - 1) - (z f'' - alpha)/f'| - |1 - (z f'' - alpha)/f'| < 0",
                    0.0,
                    true,
                    move |z| {
                        let [_, d1, d2, _] = derivatives(f, z)?;
                        let x = guarded_div(z * d2 - p.alpha, d1, z)?;
                        Ok((k - x).norm() - (ONE - x).norm())
                    },
                ),
                Inequality::new(
                    "blend",
                    "| |z|^(m+1) ((1+c) f'/(z f'' + f' - alpha) - 1) + (1 - |z|^(m+1)) [(beta-1) z g'/g + (z^2 f''' + 2 z f'')/(z f'' + f' - alpha)] - (m-1)/2 | <= (m+1)/2",
                    hs,
                    false,
                    move |z| {
                        let [_, d1, d2, d3] = derivatives(f, z)?;
                        let den = z * d2 + d1 - p.alpha;
                        let a = guarded_div((ONE + p.c) * d1, den, z)? - ONE;
                        let b = (p.beta - ONE) * z_log_derivative(g, z)?
                            + guarded_div(z * z * d3 + 2.0 * z * d2, den, z)?;
                        let w = blend_weight(z, p.m);
                        Ok((a * w + b * (1.0 - w) - hd).norm())
                    },
                ),
            ]
        }
        C4 => {
            let h = fns.h(id)?;
            notes.push("C4: the preset beta = 2, m = 1 lies on the boundary of |beta - (m+1)/2| < (m+1)/2; no parameter constraint is applied".into());
            vec![Inequality::new(
                "becker",
                "(1 - |z|^2) |z f'/f + z h''/h'| <= 1",
                1.0,
                false,
                move |z| {
                    let hj = h.jet(z, 2)?;
                    let s = z_log_derivative(f, z)? + guarded_div(z * hj.derivative(2), hj.derivative(1), z)?;
                    Ok((1.0 - z.norm_sqr()) * s.norm())
                },
            )]
        }
        C5 | C5RealCase => {
            let growth = Inequality::new(
                "growth",
                "|(beta-1) z f'/f + z f''/(f' - alpha) - (m-1)/2| <= (m+1)/2",
                hs,
                false,
                move |z| {
                    let [_, d1, d2, _] = derivatives(f, z)?;
                    let e = (p.beta - ONE) * z_log_derivative(f, z)? + guarded_div(z * d2, d1 - p.alpha, z)?;
                    Ok((e - hd).norm())
                },
            );
            let first = if id == C5 {
                let k = (p.m - p.c.re) / (p.alpha.re * (p.m + 1.0));
                Inequality::new(
                    "real_part",
                    "((m-c)/(alpha(m+1))) |f'|^2 - Re f' < 0",
                    0.0,
                    true,
                    move |z| {
                        let d1 = f.derivative(z)?;
                        Ok(k * d1.norm_sqr() - d1.re)
                    },
                )
            } else {
                let form = DerivativeForm { f, g: f, p: f.clone(), params: p };
                ratio_inequality(p, move |z| form.parts(z))
            };
            vec![first, growth]
        }
        C6 => {
            let (g, h) = (fns.g(id)?, fns.h(id)?);
            let cc = ONE + p.c;
            vec![
                Inequality::new(
                    "ratio",
                    "|(1+c)(2h' + z h'') - m - 1| < m + 1",
                    p.m + 1.0,
                    true,
                    move |z| {
                        let hj = h.jet(z, 2)?;
                        Ok((cc * (2.0 * hj.derivative(1) + z * hj.derivative(2)) - (p.m + 1.0)).norm())
                    },
                ),
                Inequality::new(
                    "blend",
                    "| |z|^(m+1) ((1+c)(h' + z h''/2) - 1) + (1 - |z|^(m+1)) [(beta-1) z g'/g + z f''/f' - (3z^2 h'' + z^3 h''')/(2z h' + z^2 h'')] - (m-1)/2 | <= (m+1)/2",
                    hs,
                    false,
                    move |z| {
                        let [_, f1, f2, _] = derivatives(f, z)?;
                        let [_, h1, h2, h3] = derivatives(h, z)?;
                        let a = cc * (h1 + z * h2 / 2.0) - ONE;
                        // divided through by z
                        let b = (p.beta - ONE) * z_log_derivative(g, z)? + guarded_div(z * f2, f1, z)?
                            - guarded_div(3.0 * z * h2 + z * z * h3, 2.0 * h1 + z * h2, z)?;
                        let w = blend_weight(z, p.m);
                        Ok((a * w + b * (1.0 - w) - hd).norm())
                    },
                ),
            ]
        }
        C7 => {
            let (g, h) = (fns.g(id)?, fns.h(id)?);
            let cc = ONE + p.c;
            let a_part = move |z: Complex64| -> Result<(Complex64, [Complex64; 4])> {
                let d = derivatives(f, z)?;
                // h / (2 z f' + z^2 f'') = (h/z) / (2 f' + z f'')
                let a = 2.0 * cc * d[1] * guarded_div(over_z(h, z)?, 2.0 * d[1] + z * d[2], z)? - ONE;
                Ok((a, d))
            };
            vec![
                Inequality::new(
                    "ratio",
                    "|(2(1+c) f' h/(2z f' + z^2 f'') - 1) - (m-1)/2| < (m+1)/2",
                    hs,
                    true,
                    move |z| Ok((a_part(z)?.0 - hd).norm()),
                ),
                Inequality::new(
                    "blend",
                    "| |z|^(m+1) (2(1+c) f' h/(2z f' + z^2 f'') - 1) + (1 - |z|^(m+1)) [1 + (beta-1) z g'/g + (3z^2 f'' + z^3 f''')/(2z f' + z^2 f'') - z h'/h] - (m-1)/2 | <= (m+1)/2",
                    hs,
                    false,
                    move |z| {
                        let (a, [_, f1, f2, f3]) = a_part(z)?;
                        let b = ONE
                            + (p.beta - ONE) * z_log_derivative(g, z)?
                            + guarded_div(3.0 * z * f2 + z * z * f3, 2.0 * f1 + z * f2, z)?
                            - z_log_derivative(h, z)?;
                        let w = blend_weight(z, p.m);
                        Ok((a * w + b * (1.0 - w) - hd).norm())
                    },
                ),
            ]
        }
        C8 | C9 => {
            let g = fns.g(id)?;
            let cc = ONE + p.c;
            let ratio = Inequality::new(
                "ratio",
                "|(1+c) f' - (m+1)/2| < (m+1)/2",
                hs,
                true,
                move |z| Ok((cc * f.derivative(z)? - hs).norm()),
            );
            let second = if id == C8 {
                Inequality::new(
                    "blend",
                    "| |z|^(m+1) ((1+c) f' - 1) + (1 - |z|^(m+1)) (beta-1) z g'/g - (m-1)/2 | <= (m+1)/2",
                    hs,
                    false,
                    move |z| {
                        let w = blend_weight(z, p.m);
                        let a = cc * f.derivative(z)? - ONE;
                        let b = (p.beta - ONE) * z_log_derivative(g, z)?;
                        Ok((a * w + b * (1.0 - w) - hd).norm())
                    },
                )
            } else {
                Inequality::new(
                    "growth",
                    "|(beta-1) z g'/g - (m-1)/2| <= (m+1)/2",
                    hs,
                    false,
                    move |z| Ok(((p.beta - ONE) * z_log_derivative(g, z)? - hd).norm()),
                )
            };
            vec![ratio, second]
        }
        C10 => {
            let (g, h) = (fns.g(id)?, fns.h(id)?);
            let cc = ONE + p.c;
            vec![
                Inequality::new(
                    "ratio",
                    "|(1+c)(h' + z h'') - (m+1)/2| < (m+1)/2",
                    hs,
                    true,
                    move |z| {
                        let hj = h.jet(z, 2)?;
                        Ok((cc * (hj.derivative(1) + z * hj.derivative(2)) - hs).norm())
                    },
                ),
                Inequality::new(
                    "blend",
                    "| |z|^(m+1) ((1+c)(h' + z h'') - 1) + (1 - |z|^(m+1)) [(beta-1) z g'/g + z f''/f' - (2z^2 h'' + z^3 h''')/(z h' + z^2 h'')] - (m-1)/2 | <= (m+1)/2",
                    hs,
                    false,
                    move |z| {
                        let [_, f1, f2, _] = derivatives(f, z)?;
                        let [_, h1, h2, h3] = derivatives(h, z)?;
                        let a = cc * (h1 + z * h2) - ONE;
                        let b = (p.beta - ONE) * z_log_derivative(g, z)? + guarded_div(z * f2, f1, z)?
                            - guarded_div(2.0 * z * h2 + z * z * h3, h1 + z * h2, z)?;
                        let w = blend_weight(z, p.m);
                        Ok((a * w + b * (1.0 - w) - hd).norm())
                    },
                ),
            ]
        }
        R3 => vec![Inequality::new(
            "growth",
            "|z f''/f'| <= 2",
            2.0,
            false,
            move |z| {
                let [_, d1, d2, _] = derivatives(f, z)?;
                Ok(guarded_div(z * d2, d1, z)?.norm())
            },
        )],
    };
    assemble(id.name(), constraints, inequalities, grid, notes)
}

/// Pointwise comparison of the real-part form against the general ratio
/// inequality (with `h = f`, `n = 0`) on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceProbe {
    pub points_checked: usize,
    /// Points closer than the grid tolerance to either boundary.
    pub points_skipped: usize,
    pub disagreements: Vec<Complex64>,
}

pub fn c5_equivalence_probe(
    f: &AnalyticFunction,
    params: &CriterionParams,
    grid: &GridConfig,
) -> Result<EquivalenceProbe> {
    grid.validate()?;
    let p = CorollaryId::C5.frozen_params(params);
    let k = (p.m - p.c.re) / (p.alpha.re * (p.m + 1.0));
    let (hs, hd) = (p.half_sum(), p.half_diff());
    let mut probe = EquivalenceProbe { points_checked: 0, points_skipped: 0, disagreements: Vec::new() };
    for z in grid.points() {
        let d1 = f.derivative(z)?;
        let real_part = d1.re - k * d1.norm_sqr();
        let ratio = match guarded_div((ONE + p.c) * d1, d1 - p.alpha, z) {
            Ok(r) => hs - (r - ONE - hd).norm(),
            Err(Error::SingularPoint(_)) => {
                probe.points_skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if real_part.abs() <= grid.tolerance || ratio.abs() <= grid.tolerance {
            probe.points_skipped += 1;
            continue;
        }
        probe.points_checked += 1;
        if (real_part > 0.0) != (ratio > 0.0) {
            probe.disagreements.push(z);
        }
    }
    Ok(probe)
}
