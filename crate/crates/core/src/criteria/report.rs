use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{sup_disk, GridConfig};
use super::params::ConstraintReport;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub label: String,
    /// Printed form of the bounded expression.
    pub expression: String,
    pub bound: f64,
    pub strict: bool,
    pub sup_estimate: f64,
    pub margin: f64,
    pub argmax_z: Complex64,
    pub holds: bool,
}

/// Values of every inequality's expression at one coarse grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub z: Complex64,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub satisfied: bool,
    pub params_ok: bool,
    pub constraints: ConstraintReport,
    pub inequalities: Vec<InequalityReport>,
    pub singular_points: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub grid_rows: Vec<GridRow>,
}

impl CriterionReport {
    /// Smallest margin over all inequalities.
    pub fn worst_margin(&self) -> f64 {
        self.inequalities
            .iter()
            .map(|i| i.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn inequality(&self, label: &str) -> Option<&InequalityReport> {
        self.inequalities.iter().find(|i| i.label == label)
    }
}

pub(crate) type Objective<'a> = Box<dyn Fn(Complex64) -> Result<f64> + Sync + 'a>;

/// One inequality `objective(z) <= bound` (or `<`) to be checked on the disk.
pub(crate) struct Inequality<'a> {
    pub label: &'static str,
    pub expression: &'static str,
    pub bound: f64,
    pub strict: bool,
    pub objective: Objective<'a>,
}

impl<'a> Inequality<'a> {
    pub fn new<F>(label: &'static str, expression: &'static str, bound: f64, strict: bool, objective: F) -> Self
    where
        F: Fn(Complex64) -> Result<f64> + Sync + 'a,
    {
        Self {
            label,
            expression,
            bound,
            strict,
            objective: Box::new(objective),
        }
    }
}

pub(crate) fn assemble(
    criterion: &str,
    constraints: ConstraintReport,
    inequalities: Vec<Inequality<'_>>,
    grid: &GridConfig,
    mut notes: Vec<String>,
) -> Result<CriterionReport> {
    let points = grid.points();
    let mut reports = Vec::with_capacity(inequalities.len());
    let mut columns = Vec::with_capacity(inequalities.len());
    let mut singular_points: Vec<Complex64> = Vec::new();
    for ineq in &inequalities {
        let est = sup_disk(&ineq.objective, grid)?;
        for z in est.singular_points {
            if !singular_points.contains(&z) {
                singular_points.push(z);
            }
        }
        let margin = ineq.bound - est.sup_estimate;
        let holds = if ineq.strict {
            margin > grid.tolerance
        } else {
            margin >= -grid.tolerance
        };
        reports.push(InequalityReport {
            label: ineq.label.to_string(),
            expression: ineq.expression.to_string(),
            bound: ineq.bound,
            strict: ineq.strict,
            sup_estimate: est.sup_estimate,
            margin,
            argmax_z: est.argmax,
            holds,
        });
        columns.push(est.samples);
    }
    let grid_rows = points
        .iter()
        .enumerate()
        .map(|(i, &z)| GridRow {
            z,
            values: columns.iter().map(|c| c[i]).collect(),
        })
        .collect();
    let params_ok = constraints.satisfied;
    notes.extend(constraints.notes.iter().cloned());
    if !singular_points.is_empty() {
        notes.push(format!("{} singular point(s) met on the grid", singular_points.len()));
    }
    let satisfied = params_ok && singular_points.is_empty() && reports.iter().all(|r| r.holds);
    Ok(CriterionReport {
        criterion: criterion.to_string(),
        satisfied,
        params_ok,
        constraints,
        inequalities: reports,
        singular_points,
        notes,
        grid_rows,
    })
}
