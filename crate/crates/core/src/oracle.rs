//! Empirical injectivity tests, independent of the criteria.
//!
//! [`pairwise_injectivity`] samples seeded random pairs in a disk and, from
//! each pair, runs a Newton search for a second preimage of `f(z1)` started
//! at `z2`; random pairs alone almost never land on a collision even for
//! `z^2`. [`winding_count`] counts preimages of a value by the argument
//! principle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Image separation below which two values count as equal.
pub const EPS_IMG: f64 = 1e-9;
/// Domain separation above which two points count as distinct.
pub const EPS_DOM: f64 = 1e-3;

const MAX_STORED_COLLISIONS: usize = 64;
const NEWTON_ITERATIONS: usize = 60;
const NEWTON_STEP: f64 = 1e-6;
const MAX_WINDING_POINTS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub z1: Complex64,
    pub z2: Complex64,
    pub image_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub tested_pairs: usize,
    /// Total number of collisions found.
    pub collision_count: usize,
    /// The first collisions found, in sampling order.
    pub collisions: Vec<Collision>,
    /// `min |f(z1) - f(z2)| / |z1 - z2|` over the sampled pairs.
    pub min_separation_ratio: f64,
    /// Pairs skipped because `f` could not be evaluated.
    pub failed_evaluations: usize,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collision_count == 0
    }
}

fn sample_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

/// Newton iteration for `f(z) = target` from `start`, kept inside the disk.
fn second_preimage<F>(f: &F, target: Complex64, start: Complex64, radius: f64) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut z = start;
    for _ in 0..NEWTON_ITERATIONS {
        let value = f(z).ok()? - target;
        if value.norm() < EPS_IMG * 1e-2 {
            break;
        }
        let h = Complex64::new(NEWTON_STEP, 0.0);
        let slope = (f(z + h).ok()? - f(z - h).ok()?) / (2.0 * h);
        if slope.norm() < 1e-12 {
            return None;
        }
        z -= value / slope;
        if !(z.norm() <= radius) {
            return None;
        }
    }
    Some(z)
}

/// Tests `n_pairs` seeded uniform pairs in `|z| < radius` for collisions:
/// `|f(z1) - f(z2)| < EPS_IMG` while `|z1 - z2| > EPS_DOM`.
pub fn pairwise_injectivity<F>(f: F, radius: f64, n_pairs: usize, seed: u64) -> InjectivityReport
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Complex64, Complex64)> = (0..n_pairs)
        .map(|_| (sample_disk(&mut rng, radius), sample_disk(&mut rng, radius)))
        .collect();

    let outcomes: Vec<Option<(f64, Option<Collision>)>> = pairs
        .par_iter()
        .map(|&(z1, z2)| {
            let (w1, w2) = (f(z1).ok()?, f(z2).ok()?);
            let gap = (z1 - z2).norm();
            let ratio = (w1 - w2).norm() / gap;
            if gap > EPS_DOM && (w1 - w2).norm() < EPS_IMG {
                return Some((ratio, Some(Collision { z1, z2, image_gap: (w1 - w2).norm() })));
            }
            let collision = second_preimage(&f, w1, z2, radius).and_then(|z| {
                let image_gap = (f(z).ok()? - w1).norm();
                ((z - z1).norm() > EPS_DOM && image_gap < EPS_IMG).then_some(Collision { z1, z2: z, image_gap })
            });
            Some((ratio, collision))
        })
        .collect();

    let mut report = InjectivityReport {
        tested_pairs: n_pairs,
        collision_count: 0,
        collisions: Vec::new(),
        min_separation_ratio: f64::INFINITY,
        failed_evaluations: 0,
    };
    for outcome in outcomes {
        let Some((ratio, collision)) = outcome else {
            report.failed_evaluations += 1;
            continue;
        };
        report.min_separation_ratio = report.min_separation_ratio.min(ratio);
        if let Some(c) = collision {
            report.collision_count += 1;
            if report.collisions.len() < MAX_STORED_COLLISIONS {
                report.collisions.push(c);
            }
        }
    }
    report
}

/// Winding number of `f(z) - w` around `|z| = radius`, starting from
/// `n_points` samples and doubling until every step turns by less than
/// `pi/2`.
pub fn winding_count<F>(f: F, w: Complex64, radius: f64, n_points: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut n = n_points.max(8);
    loop {
        if let Some(total) = winding_pass(&f, w, radius, n)? {
            return Ok((total / (2.0 * PI)).round() as i64);
        }
        if n >= MAX_WINDING_POINTS {
            return Err(Error::OnBoundaryValue(w));
        }
        n *= 2;
    }
}

/// Accumulated argument change over `n` steps, or `None` if a step turns by
/// `pi/2` or more.
fn winding_pass<F>(f: &F, w: Complex64, radius: f64, n: usize) -> Result<Option<f64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for k in 0..=n {
        let d = f(Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64))? - w;
        if d.norm() < EPS_IMG {
            return Err(Error::OnBoundaryValue(w));
        }
        let arg = d.arg();
        if let Some(p) = prev {
            let step = (arg - p + PI).rem_euclid(2.0 * PI) - PI;
            if step.abs() >= PI / 2.0 {
                return Ok(None);
            }
            total += step;
        }
        prev = Some(arg);
    }
    Ok(Some(total))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingProbe {
    pub w: Complex64,
    pub count: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub radius: f64,
    pub probes: Vec<WindingProbe>,
    /// Every probe returned exactly one preimage.
    pub all_simple: bool,
}

/// Winding counts for `n_probes` values `w = f((radius/2) e^(i theta))` with
/// seeded random `theta`, so each `w` is known to lie in the image.
pub fn winding_probes<F>(f: F, radius: f64, n_probes: usize, n_points: usize, seed: u64) -> WindingReport
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<f64> = (0..n_probes).map(|_| 2.0 * PI * rng.gen::<f64>()).collect();
    let probes: Vec<WindingProbe> = thetas
        .par_iter()
        .filter_map(|&theta| {
            let w = f(Complex64::from_polar(radius / 2.0, theta)).ok()?;
            Some(WindingProbe { w, count: winding_count(&f, w, radius, n_points).ok() })
        })
        .collect();
    let all_simple = probes.len() == n_probes && probes.iter().all(|p| p.count == Some(1));
    WindingReport { radius, probes, all_simple }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub injectivity: InjectivityReport,
    pub winding: WindingReport,
    pub passed: bool,
}

/// Runs both tests with the settings used for cross-checking verdicts:
/// `10^4` pairs at radius 0.95 and 100 winding probes.
pub fn oracle_check<F>(f: F, seed: u64) -> OracleReport
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let injectivity = pairwise_injectivity(&f, 0.95, 10_000, seed);
    let winding = winding_probes(&f, 0.95, 100, 256, seed.wrapping_add(1));
    let passed = injectivity.injective() && injectivity.failed_evaluations == 0 && winding.all_simple;
    OracleReport { injectivity, winding, passed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{AnalyticFunction, Builtin};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_injective() {
        let r = pairwise_injectivity(Ok, 0.95, 10_000, 7);
        assert!(r.injective());
        assert_eq!(r.failed_evaluations, 0);
        assert!((r.min_separation_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_collides() {
        let r = pairwise_injectivity(|z| Ok(z * z), 0.95, 2_000, 7);
        assert!(r.collision_count > 100, "{}", r.collision_count);
        let first = r.collisions[0];
        assert!((first.z1 + first.z2).norm() < 1e-6);
    }

    #[test]
    fn koebe_is_injective() {
        let k = AnalyticFunction::from(Builtin::Koebe);
        let r = pairwise_injectivity(|z| k.value(z), 0.95, 10_000, 11);
        assert!(r.injective(), "{:?}", r.collisions.first());
    }

    #[test]
    fn seeded_runs_repeat() {
        let f = |z: Complex64| Ok(z + 0.3 * z * z);
        assert_eq!(pairwise_injectivity(f, 0.9, 500, 3), pairwise_injectivity(f, 0.9, 500, 3));
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_count(Ok, c(0.0, 0.0), 0.5, 64).unwrap(), 1);
        assert_eq!(winding_count(|z| Ok(z * z), c(0.01, 0.0), 0.5, 64).unwrap(), 2);
        assert_eq!(winding_count(Ok, c(0.8, 0.0), 0.5, 64).unwrap(), 0);
        assert!(matches!(
            winding_count(Ok, c(0.5, 0.0), 0.5, 64),
            Err(Error::OnBoundaryValue(_))
        ));
    }

    #[test]
    fn winding_stable_under_doubling() {
        let f = |z: Complex64| Ok(z / (Complex64::new(1.0, 0.0) - z).powi(2));
        let w = f(c(0.6, 0.3)).unwrap();
        let coarse = winding_count(f, w, 0.9, 16).unwrap();
        assert_eq!(coarse, winding_count(f, w, 0.9, 4096).unwrap());
        assert_eq!(coarse, 1);
    }

    #[test]
    fn univalent_probes_are_simple() {
        let f = |z: Complex64| Ok(z + 0.2 * z * z);
        let r = winding_probes(f, 0.9, 100, 128, 5);
        assert!(r.all_simple);
        assert_eq!(r.probes.len(), 100);
    }

    #[test]
    fn oracle_flags_critical_point_in_disk() {
        // f'(-1/2) = 0
        let r = oracle_check(|z| Ok(z + z * z), 1);
        assert!(!r.passed);
        let ok = oracle_check(|z| Ok(z + 0.1 * z * z), 1);
        assert!(ok.passed);
    }
}
