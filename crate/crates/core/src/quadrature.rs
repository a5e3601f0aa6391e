//! Globally adaptive 15-point Gauss-Kronrod quadrature for complex integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx)? + f(center + dx)?;
        kronrod += sum * WGK[j];
        if j % 2 == 1 {
            gauss += sum * WG[j / 2];
        }
    }
    Ok(Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    })
}

/// Integrates `f` over `[a, b]` to the requested absolute tolerance,
/// bisecting the segment with the largest error estimate each round.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadratureOptions) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut segments = vec![kronrod(&f, a, b)?];
    let mut evaluations = 15;
    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= opts.abs_tol {
            let value = segments.iter().map(|s| s.value).sum();
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailed(error));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            return Err(Error::QuadratureFailed(error));
        }
        segments.push(kronrod(&f, s.a, mid)?);
        segments.push(kronrod(&f, mid, s.b)?);
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|t| Ok(Complex64::new(t * t, 2.0 * t)), 0.0, 1.0, Default::default()).unwrap();
        assert!((q.value - Complex64::new(1.0 / 3.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_complex_exponential() {
        // int_0^1 e^{i 20 t} dt = (e^{20i} - 1) / (20 i)
        let i = Complex64::i();
        let q = integrate(|t| Ok((i * 20.0 * t).exp()), 0.0, 1.0, Default::default()).unwrap();
        let exact = ((i * 20.0).exp() - 1.0) / (i * 20.0);
        assert!((q.value - exact).norm() < 1e-10);
    }

    #[test]
    fn endpoint_power_singularity() {
        // int_0^1 t^{0.5 + 0.3i} dt = 1 / (1.5 + 0.3i)
        let p = Complex64::new(0.5, 0.3);
        let q = integrate(
            |t| Ok(if t == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(t, 0.0).powc(p) }),
            0.0,
            1.0,
            Default::default(),
        )
        .unwrap();
        assert!((q.value - 1.0 / (p + 1.0)).norm() < 1e-10);
    }

    #[test]
    fn failure_is_reported() {
        let opts = QuadratureOptions { abs_tol: 1e-14, max_intervals: 3 };
        let r = integrate(|t| Ok(Complex64::new((1.0 / (t + 1e-6)).sin(), 0.0)), 0.0, 1.0, opts);
        assert!(matches!(r, Err(Error::QuadratureFailed(_))));
    }
}
