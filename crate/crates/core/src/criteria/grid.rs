//! Sup-norm estimation over a disk of radius `max_radius < 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of best grid points refined after the coarse scan.
const REFINE_CANDIDATES: usize = 4;
/// Zoom levels of the 9 x 9 local search; the window halves every level.
const REFINE_LEVELS: usize = 30;
const REFINE_STEPS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    pub n_radii: usize,
    pub n_angles: usize,
    pub max_radius: f64,
    pub tolerance: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n_radii: 64,
            n_angles: 128,
            max_radius: 0.999,
            tolerance: 1e-9,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_radii == 0 || self.n_angles == 0 {
            return Err(Error::InvalidConfig("grid needs at least one radius and one angle".into()));
        }
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "max_radius must lie in (0, 1), got {}",
                self.max_radius
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    /// Same extent with both resolutions doubled.
    pub fn doubled(&self) -> Self {
        Self {
            n_radii: self.n_radii * 2,
            n_angles: self.n_angles * 2,
            ..*self
        }
    }

    /// Radii uniform in `r^2`, ending at `max_radius`.
    pub fn radii(&self) -> Vec<f64> {
        (1..=self.n_radii)
            .map(|i| self.max_radius * (i as f64 / self.n_radii as f64).sqrt())
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.n_angles)
            .map(|j| 2.0 * PI * j as f64 / self.n_angles as f64)
            .collect()
    }

    /// The origin followed by the tensor grid, radius-major.
    pub fn points(&self) -> Vec<Complex64> {
        let angles = self.angles();
        std::iter::once(Complex64::new(0.0, 0.0))
            .chain(
                self.radii()
                    .into_iter()
                    .flat_map(|r| angles.iter().map(move |&t| Complex64::from_polar(r, t))),
            )
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub sup_estimate: f64,
    pub argmax: Complex64,
    /// Points where the expression's denominator guard tripped.
    pub singular_points: Vec<Complex64>,
    /// Value at every coarse grid point, in [`GridConfig::points`] order;
    /// `None` where the point was singular.
    pub samples: Vec<Option<f64>>,
}

fn eval_guarded<F>(expr: &F, z: Complex64) -> Result<Option<f64>>
where
    F: Fn(Complex64) -> Result<f64>,
{
    match expr(z) {
        Ok(v) => Ok(Some(v)),
        Err(Error::SingularPoint(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Maximum of a real-valued expression over the grid, followed by a zoom
/// search around the best few grid points. Singular points are collected,
/// never silently dropped.
pub fn sup_disk<F>(expr: F, grid: &GridConfig) -> Result<SupEstimate>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    grid.validate()?;
    let points = grid.points();
    let samples = points
        .par_iter()
        .map(|&z| eval_guarded(&expr, z))
        .collect::<Result<Vec<_>>>()?;

    let mut singular_points: Vec<Complex64> = points
        .iter()
        .zip(&samples)
        .filter(|(_, v)| v.is_none())
        .map(|(&z, _)| z)
        .collect();

    let mut ranked: Vec<(usize, f64)> = samples
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .filter(|(_, v)| !v.is_nan())
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let Some(&(best_index, best_value)) = ranked.first() else {
        return Ok(SupEstimate {
            sup_estimate: f64::NAN,
            argmax: Complex64::new(0.0, 0.0),
            singular_points,
            samples,
        });
    };
    let mut best = (points[best_index], best_value);

    let radii = grid.radii();
    let refined = ranked
        .iter()
        .take(REFINE_CANDIDATES)
        .map(|&(index, value)| refine(&expr, grid, &radii, index, points[index], value))
        .collect::<Result<Vec<_>>>()?;
    for (z, value, singular) in refined {
        singular_points.extend(singular);
        if value > best.1 {
            best = (z, value);
        }
    }
    singular_points.dedup();

    Ok(SupEstimate {
        sup_estimate: best.1,
        argmax: best.0,
        singular_points,
        samples,
    })
}

/// Shrinking 9 x 9 polar search; returns the best point found and any
/// singular points met on the way.
fn refine<F>(
    expr: &F,
    grid: &GridConfig,
    radii: &[f64],
    index: usize,
    start: Complex64,
    start_value: f64,
) -> Result<(Complex64, f64, Vec<Complex64>)>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let (mut r, mut theta, mut dr, mut dtheta) = if index == 0 {
        (0.0, 0.0, radii[0], PI)
    } else {
        let ri = (index - 1) / grid.n_angles;
        let below = if ri == 0 { radii[0] } else { radii[ri] - radii[ri - 1] };
        let above = radii.get(ri + 1).map_or(below, |next| next - radii[ri]);
        (start.norm(), start.arg(), below.max(above), 2.0 * PI / grid.n_angles as f64)
    };
    let mut best = (start, start_value);
    let mut singular = Vec::new();
    let half = (REFINE_STEPS / 2) as f64;
    for _ in 0..REFINE_LEVELS {
        let candidates: Vec<Complex64> = (0..REFINE_STEPS)
            .flat_map(|i| {
                (0..REFINE_STEPS).map(move |j| {
                    let rr = (r + dr * (i as f64 - half) / half).clamp(0.0, grid.max_radius);
                    let tt = theta + dtheta * (j as f64 - half) / half;
                    Complex64::from_polar(rr, tt)
                })
            })
            .collect();
        let values = candidates
            .par_iter()
            .map(|&z| eval_guarded(expr, z))
            .collect::<Result<Vec<_>>>()?;
        for (&z, v) in candidates.iter().zip(&values) {
            match v {
                None => singular.push(z),
                Some(v) if *v > best.1 => best = (z, *v),
                _ => {}
            }
        }
        r = best.0.norm();
        theta = if r > 0.0 { best.0.arg() } else { theta };
        dr *= 0.5;
        dtheta *= 0.5;
    }
    Ok((best.0, best.1, singular))
}

/// `sup |expr(z) - center|` over the grid.
pub fn sup_modulus<F>(expr: F, center: Option<Complex64>, grid: &GridConfig) -> Result<SupEstimate>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let center = center.unwrap_or_default();
    sup_disk(move |z| Ok((expr(z)? - center).norm()), grid)
}
