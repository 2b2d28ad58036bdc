//! Adaptive Gauss-Kronrod integration shared by the entropy modules.
//!
//! The rule is a nested G7/K15 pair with deterministic bisection order, so
//! identical inputs always give bit-identical results.

use crate::error::Error;
use crate::Result;

/// 15-point Kronrod abscissae on [-1, 1] (non-negative half; symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_82,
];

/// 7-point Gauss weights for the odd Kronrod abscissae (plus center).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStrategy {
    None,
    /// Tail modeled as `C / x^exponent` past the truncation point.
    PowerLaw { exponent: f64 },
    /// Map `[a, inf)` onto `[0, 1)` via `x = a + t/(1-t)`.
    VariableTransform,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_strategy: TailStrategy,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
            tail_strategy: TailStrategy::None,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParams("quadrature tolerances must be > 0".into()));
        }
        if self.max_subdivisions < 8 {
            return Err(Error::InvalidParams("max_subdivisions must be >= 8".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).abs();
    // QUADPACK-style error rescale.
    let resabs = resabs * half.abs();
    let mut err = raw;
    if resabs != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / resabs).powf(1.5);
        if scale < 1.0 {
            err = resabs * scale;
        }
    }
    (value, err)
}

/// Adaptive integral of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult> {
    spec.validate()?;
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0, subdivisions: 0 });
    }
    let (value0, err0) = gk15(&f, a, b);
    let tol = spec.abs_tol.max(spec.rel_tol * value0.abs());
    let mut subdivisions = 0usize;
    let mut value = 0.0;
    let mut error = 0.0;
    // Depth-first bisection with the tolerance split between halves keeps
    // the subdivision order independent of intermediate results.
    let mut stack: Vec<(f64, f64, f64, f64, f64)> = vec![(a, b, value0, err0, tol)];
    while let Some((lo, hi, v, e, t)) = stack.pop() {
        if e <= t || (hi - lo).abs() < f64::EPSILON * (b - a).abs() {
            value += v;
            error += e;
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Accuracy {
                message: format!("quadrature did not converge after {} subdivisions", subdivisions),
                best: value + v,
                error: error + e,
            });
        }
        subdivisions += 1;
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        stack.push((mid, hi, v2, e2, 0.5 * t));
        stack.push((lo, mid, v1, e1, 0.5 * t));
    }
    Ok(QuadResult { value, error, subdivisions })
}

/// Adaptive integral over a union of contiguous panels given by breakpoints.
/// Each panel gets the full adaptive treatment with a prorated tolerance.
pub fn integrate_panels(
    f: impl Fn(f64) -> f64,
    breakpoints: &[f64],
    spec: &QuadSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::InvalidParams("need at least two breakpoints".into()));
    }
    let n = breakpoints.len() - 1;
    let panel_spec = QuadSpec {
        abs_tol: spec.abs_tol / n as f64,
        rel_tol: spec.rel_tol,
        ..*spec
    };
    let mut value = 0.0;
    let mut error = 0.0;
    let mut subdivisions = 0;
    for w in breakpoints.windows(2) {
        let r = integrate(&f, w[0], w[1], &panel_spec).map_err(|e| match e {
            Error::Accuracy { message, best, error: err } => Error::Accuracy {
                message,
                best: value + best,
                error: error + err,
            },
            other => other,
        })?;
        value += r.value;
        error += r.error;
        subdivisions += r.subdivisions;
    }
    Ok(QuadResult { value, error, subdivisions })
}

/// Integral over `[a, inf)` using the configured tail strategy.
pub fn integrate_half_line(
    f: impl Fn(f64) -> f64,
    a: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    match spec.tail_strategy {
        TailStrategy::VariableTransform => {
            let g = |t: f64| {
                let om = 1.0 - t;
                f(a + t / om) / (om * om)
            };
            integrate(g, 0.0, 1.0 - 1e-12, spec)
        }
        TailStrategy::PowerLaw { exponent } => {
            if exponent <= 1.0 {
                return Err(Error::InvalidParams("power-law tail exponent must be > 1".into()));
            }
            // Integrate a finite core, estimate the tail coefficient as a
            // window average (a point sample is useless for oscillating
            // integrands), and close with the fitted power tail.
            let cut = a.abs().max(1.0) * 64.0;
            let far = 4.0 * cut;
            let core = integrate(&f, a, far, spec)?;
            let c = integrate(|x| f(x) * x.powf(exponent), cut, far, spec)?;
            let c = c.value / (far - cut);
            let tail = c / ((exponent - 1.0) * far.powf(exponent - 1.0));
            Ok(QuadResult {
                value: core.value + tail,
                error: core.error + tail.abs() * 0.05,
                subdivisions: core.subdivisions,
            })
        }
        TailStrategy::None => Err(Error::InvalidParams(
            "half-line integral requires a tail strategy".into(),
        )),
    }
}

/// `t ln t` with the conventions `0 ln 0 = 0` and underflow-floored input.
pub fn xlnx(t: f64) -> f64 {
    if t < 1e-300 {
        0.0
    } else {
        t * t.ln()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianCalibration {
    pub s_x: f64,
    pub s_p: f64,
    pub sum: f64,
}

/// Entropies of a unit-norm Gaussian of position width `sigma`
/// (momentum width `1/(2 sigma)`). The sum saturates `1 + ln(pi)`, which
/// makes this an end-to-end accuracy gate for the entropy pipeline.
pub fn gaussian_calibration(sigma: f64, spec: &QuadSpec) -> Result<GaussianCalibration> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParams("sigma must be > 0".into()));
    }
    let s_x = gaussian_entropy(sigma, spec)?;
    let s_p = gaussian_entropy(0.5 / sigma, spec)?;
    Ok(GaussianCalibration { s_x, s_p, sum: s_x + s_p })
}

/// Ratio-convention entropy of a normal density with standard deviation `sd`,
/// computed numerically. Analytic value: `0.5 ln(2 pi e sd^2)`.
fn gaussian_entropy(sd: f64, spec: &QuadSpec) -> Result<f64> {
    let norm = 1.0 / (sd * (2.0 * std::f64::consts::PI).sqrt());
    let rho = move |x: f64| norm * (-x * x / (2.0 * sd * sd)).exp();
    let cut = 16.0 * sd;
    let mass = integrate(rho, -cut, cut, spec)?;
    let num = integrate(move |x| xlnx(rho(x)), -cut, cut, spec)?;
    Ok(-num.value / mass.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_over_full_period_vanishes() {
        let r = integrate(f64::cos, 0.0, 2.0 * std::f64::consts::PI, &QuadSpec::default()).unwrap();
        assert!(r.value.abs() < 1e-14, "got {}", r.value);
    }

    #[test]
    fn log_two_plus_cos_matches_closed_form() {
        // int_0^{2pi} ln(2 + cos u) du = 2 pi ln((2 + sqrt 3)/2)
        let r = integrate(|u| (2.0 + u.cos()).ln(), 0.0, 2.0 * std::f64::consts::PI, &QuadSpec::default())
            .unwrap();
        let expect = 2.0 * std::f64::consts::PI * ((2.0 + 3.0_f64.sqrt()) / 2.0).ln();
        assert_abs_diff_eq!(r.value, expect, epsilon = 1e-10);
    }

    #[test]
    fn sinc_squared_tail_via_power_law() {
        // int_1^inf sin^2(x)/x^2 dx; average of sin^2 is 1/2, so the tail
        // behaves like (1/2) x^-2. Brute-force reference on a long interval.
        let f = |x: f64| (x.sin() / x).powi(2);
        let spec = QuadSpec {
            tail_strategy: TailStrategy::PowerLaw { exponent: 2.0 },
            ..QuadSpec::default()
        };
        let got = integrate_half_line(f, 1.0, &spec).unwrap();
        let mut brute = 0.0;
        let fine = QuadSpec::default();
        let mut x = 1.0;
        while x < 40_000.0 {
            brute += integrate(f, x, x + 100.0, &fine).unwrap().value;
            x += 100.0;
        }
        brute += 0.5 / 40_000.0; // analytic remainder of the averaged tail
        assert!((got.value - brute).abs() < 1e-4, "got {} want {}", got.value, brute);
        assert!((got.value - brute).abs() < got.error, "outside own error estimate");
    }

    #[test]
    fn non_convergence_reports_accuracy_error() {
        let spec = QuadSpec {
            abs_tol: 1e-30,
            rel_tol: 1e-30,
            max_subdivisions: 16,
            tail_strategy: TailStrategy::None,
        };
        let err = integrate(|x: f64| (50.0 * x).sin().abs().sqrt(), 0.0, 10.0, &spec).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn deterministic_bit_identical() {
        let f = |x: f64| (x * x).sin() / (1.0 + x * x);
        let a = integrate(f, 0.0, 30.0, &QuadSpec::default()).unwrap();
        let b = integrate(f, 0.0, 30.0, &QuadSpec::default()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn gaussian_calibration_saturates_bbm() {
        let spec = QuadSpec::default();
        for sigma in [0.3, 1.0, 10.0] {
            let cal = gaussian_calibration(sigma, &spec).unwrap();
            let bbm = 1.0 + std::f64::consts::PI.ln();
            assert_abs_diff_eq!(cal.sum, bbm, epsilon = 1e-9);
        }
    }

    #[test]
    fn gaussian_sum_scale_invariant() {
        let spec = QuadSpec::default();
        let a = gaussian_calibration(0.7, &spec).unwrap().sum;
        let b = gaussian_calibration(7.0, &spec).unwrap().sum;
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }
}
