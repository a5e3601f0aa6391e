use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::operators::OperatorKind;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters shared by every criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriterionParams {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub c: Complex64,
    pub m: f64,
    /// Operator order applied to `h` (T2, T3, T5) or to `f` (T4, T6).
    pub n: u32,
    /// Second operator order, applied to `h` in T4 and T6.
    pub v: u32,
    pub operator_kind: OperatorKind,
    /// Fractional Ruscheweyh order; overrides `n` for the T2 family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl Default for CriterionParams {
    fn default() -> Self {
        Self {
            alpha: Complex64::new(0.0, 0.0),
            beta: ONE,
            c: Complex64::new(0.0, 0.0),
            m: 1.0,
            n: 0,
            v: 0,
            operator_kind: OperatorKind::Ruscheweyh,
            lambda: None,
        }
    }
}

impl CriterionParams {
    pub fn half_sum(&self) -> f64 {
        (self.m + 1.0) / 2.0
    }

    pub fn half_diff(&self) -> f64 {
        (self.m - 1.0) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    /// T2, T3, T5 and the presets derived from them.
    Theorem2,
    /// T4, T6 and the presets derived from them.
    Theorem4,
    /// `|c| < 1`, `|beta - 1| < 1`.
    Corollary1,
    /// Real parameters with `alpha < 0`.
    Corollary5,
    /// Only `m > 0` is checked.
    Unconstrained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Less,
    LessEq,
    Greater,
    Equal,
}

impl Relation {
    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Relation::Less => value < bound,
            Relation::LessEq => value <= bound,
            Relation::Greater => value > bound,
            Relation::Equal => value == bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub family: ConstraintFamily,
    pub checks: Vec<ConstraintCheck>,
    pub satisfied: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConstraintReport {
    /// Failing checks, for diagnostics.
    pub fn violations(&self) -> impl Iterator<Item = &ConstraintCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

struct Builder {
    checks: Vec<ConstraintCheck>,
}

impl Builder {
    fn check(&mut self, label: &str, value: f64, relation: Relation, bound: f64) {
        self.checks.push(ConstraintCheck {
            label: label.to_string(),
            value,
            relation,
            bound,
            holds: relation.holds(value, bound),
        });
    }
}

/// Evaluates each parameter constraint of a family. Strict constraints use
/// strict comparison; nothing is tolerance-padded.
pub fn check_param_constraints(params: &CriterionParams, family: ConstraintFamily) -> ConstraintReport {
    let mut b = Builder { checks: Vec::new() };
    let mut notes = Vec::new();
    let (alpha, beta, c, m) = (params.alpha, params.beta, params.c, params.m);
    let half_sum = params.half_sum();

    b.check("m > 0", m, Relation::Greater, 0.0);
    match family {
        ConstraintFamily::Theorem2 => {
            b.check("alpha != 1", (alpha - ONE).norm(), Relation::Greater, 0.0);
            b.check("c != -1", (c + ONE).norm(), Relation::Greater, 0.0);
            let ratio = (ONE + c) / (ONE - alpha);
            let lhs = if (ONE - alpha).norm() > 0.0 {
                (ratio - half_sum).norm()
            } else {
                f64::INFINITY
            };
            b.check("|(1+c)/(1-alpha) - (m+1)/2| <= (m+1)/2", lhs, Relation::LessEq, half_sum);
            b.check("|beta - (m+1)/2| < (m+1)/2", (beta - half_sum).norm(), Relation::Less, half_sum);
            if c.norm() > 1.0 {
                notes.push(format!(
                    "|c| = {} > 1; only the constraint on (1+c)/(1-alpha) is enforced",
                    c.norm()
                ));
            }
        }
        ConstraintFamily::Theorem4 => {
            b.check("c != -1", (c + ONE).norm(), Relation::Greater, 0.0);
            b.check(
                "|c - (m-1)/2| <= (m+1)/2",
                (c - params.half_diff()).norm(),
                Relation::LessEq,
                half_sum,
            );
            b.check("|beta - (m+1)/2| < (m+1)/2", (beta - half_sum).norm(), Relation::Less, half_sum);
        }
        ConstraintFamily::Corollary1 => {
            b.check("|c| < 1", c.norm(), Relation::Less, 1.0);
            b.check("|beta - 1| < 1", (beta - ONE).norm(), Relation::Less, 1.0);
        }
        ConstraintFamily::Corollary5 => {
            b.check("Im alpha = 0", alpha.im, Relation::Equal, 0.0);
            b.check("Im beta = 0", beta.im, Relation::Equal, 0.0);
            b.check("Im c = 0", c.im, Relation::Equal, 0.0);
            b.check("alpha < 0", alpha.re, Relation::Less, 0.0);
            b.check("c != -1", (c + ONE).norm(), Relation::Greater, 0.0);
            b.check("c <= m", c.re, Relation::LessEq, m);
            b.check("-1 < c", c.re, Relation::Greater, -1.0);
            b.check("c <= m - alpha (m+1)", c.re, Relation::LessEq, m - alpha.re * (m + 1.0));
            b.check("|beta - (m+1)/2| < (m+1)/2", (beta - half_sum).norm(), Relation::Less, half_sum);
        }
        ConstraintFamily::Unconstrained => {}
    }
    let satisfied = b.checks.iter().all(|c| c.holds);
    ConstraintReport {
        family,
        checks: b.checks,
        satisfied,
        notes,
    }
}
