//! Momentum-space amplitude of the scattering state and its Shannon entropy.
//!
//! Two amplitude kinds exist. The *formal* full-line transform follows the
//! closed form with poles at `+/- k_l` and `-k_r`; it is for display and
//! convergence studies only, since its density has non-integrable double
//! poles. The *windowed* transform truncates the state to
//! `[-N pi/k_l, N pi/k_l]`; every singularity is removable and the density is
//! integrable, so entropies are evaluated on this kind.
//!
//! The transform kernel for the windowed amplitude and the discrete oracle is
//! `e^{-ipx}/sqrt(2 pi)`. The formal amplitude is kept in its conventional
//! closed form, which corresponds to the opposite kernel sign; the two kinds
//! therefore agree under `p -> -p` (see `formal_equivalent_momentum`).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Error;
use crate::medium::Regime;
use crate::position_entropy::{position_density, WindowSpec};
use crate::quadrature::{integrate_panels, xlnx, QuadSpec};
use crate::scattering::ScatteringSolution;
use crate::Result;

use std::f64::consts::PI;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Period mean `2 <sin^2 u ln(2 sin^2 u)> = 1 - ln 2`, the oscillation
/// correction in the `rho ln rho` tail model.
const TAIL_OSC_CONSTANT: f64 = 1.0 - std::f64::consts::LN_2;

/// One plane-wave piece `coeff * e^{iqx}` supported on `[x0, x1]`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWavePiece {
    pub coeff: [Complex64; 2],
    pub q: f64,
    pub x0: f64,
    pub x1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeKind {
    Formal,
    Windowed,
}

#[derive(Debug, Clone)]
pub enum MomentumAmplitude {
    Formal {
        r1: Complex64,
        t1: Complex64,
        k_l: f64,
        k_r: f64,
        alpha_l: f64,
        alpha_r: f64,
        pole_guard: f64,
    },
    Windowed {
        pieces: Vec<PlaneWavePiece>,
        half_length: f64,
    },
}

/// Finite-interval transform of a unit plane wave:
/// `(1/sqrt(2pi)) int_{x0}^{x1} e^{iqx} e^{-ipx} dx`, written in the
/// everywhere-finite form `(x1-x0) e^{iuc} sinc(uh)` with `u = q - p`,
/// `c` the midpoint and `h` the half width.
fn segment_ft(q: f64, p: f64, x0: f64, x1: f64) -> Complex64 {
    let u = q - p;
    let c = 0.5 * (x0 + x1);
    let h = 0.5 * (x1 - x0);
    let len = x1 - x0;
    len * (I * u * c).exp() * sinc(u * h) / (2.0 * PI).sqrt()
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

impl MomentumAmplitude {
    pub fn kind(&self) -> AmplitudeKind {
        match self {
            MomentumAmplitude::Formal { .. } => AmplitudeKind::Formal,
            MomentumAmplitude::Windowed { .. } => AmplitudeKind::Windowed,
        }
    }

    /// Pole locations; empty for the windowed kind.
    pub fn poles(&self) -> Vec<f64> {
        match self {
            MomentumAmplitude::Formal { k_l, k_r, .. } => vec![*k_l, -*k_l, -*k_r],
            MomentumAmplitude::Windowed { .. } => Vec::new(),
        }
    }

    /// Assemble a windowed amplitude from explicit plane-wave pieces.
    pub fn windowed_from_pieces(pieces: Vec<PlaneWavePiece>, half_length: f64) -> Self {
        MomentumAmplitude::Windowed { pieces, half_length }
    }

    pub fn eval(&self, p: f64) -> Result<[Complex64; 2]> {
        match self {
            MomentumAmplitude::Formal {
                r1,
                t1,
                k_l,
                k_r,
                alpha_l,
                alpha_r,
                pole_guard,
            } => {
                for pole in [*k_l, -*k_l, -*k_r] {
                    if (p - pole).abs() < *pole_guard {
                        return Err(Error::PoleProximity { p, pole });
                    }
                }
                let one = Complex64::ONE;
                let al = *alpha_l;
                let ar = *alpha_r;
                let denom_t = k_r + p;
                let denom_l = k_l * k_l - p * p;
                let pre = I / (2.0 * PI).sqrt();
                let upper = t1 / denom_t + ((one + r1) * p - (one - r1) * k_l) / denom_l;
                let lower =
                    t1 * ar / denom_t + (al * (one - r1) * p - al * (one + r1) * k_l) / denom_l;
                Ok([pre * upper, pre * lower])
            }
            MomentumAmplitude::Windowed { pieces, .. } => {
                let mut out = [Complex64::ZERO; 2];
                for piece in pieces {
                    let base = segment_ft(piece.q, p, piece.x0, piece.x1);
                    out[0] += piece.coeff[0] * base;
                    out[1] += piece.coeff[1] * base;
                }
                Ok(out)
            }
        }
    }
}

/// Momentum at which the formal closed form corresponds to the windowed
/// kernel convention: `formal(-p)` matches `windowed(p)` as the window grows.
pub fn formal_equivalent_momentum(p: f64) -> f64 {
    -p
}

/// Formal full-line transform in its conventional closed form.
pub fn formal_ft(sol: &ScatteringSolution) -> Result<MomentumAmplitude> {
    if sol.regime != Regime::Propagating {
        return Err(Error::Domain(
            "formal amplitude requires the propagating regime".into(),
        ));
    }
    let k_r = sol.k_r_real()?;
    Ok(MomentumAmplitude::Formal {
        r1: sol.r1,
        t1: sol.t1,
        k_l: sol.k_l,
        k_r,
        alpha_l: sol.alpha_l,
        alpha_r: sol.alpha_r_real()?,
        pole_guard: 1e-6 * sol.k_l.max(k_r),
    })
}

/// The scattering state truncated to `[-N pi/k_l, N pi/k_l]`, as three
/// plane-wave pieces (incident, reflected, transmitted).
pub fn scattering_pieces(sol: &ScatteringSolution, window: &WindowSpec) -> Result<Vec<PlaneWavePiece>> {
    if sol.regime != Regime::Propagating {
        return Err(Error::Domain(
            "windowed amplitude requires the propagating regime".into(),
        ));
    }
    let l = window.half_length(sol.k_l);
    let al = Complex64::new(sol.alpha_l, 0.0);
    let ar = sol.alpha_r;
    Ok(vec![
        PlaneWavePiece {
            coeff: [Complex64::ONE, al],
            q: sol.k_l,
            x0: -l,
            x1: 0.0,
        },
        PlaneWavePiece {
            coeff: [sol.r1, -sol.r1 * al],
            q: -sol.k_l,
            x0: -l,
            x1: 0.0,
        },
        PlaneWavePiece {
            coeff: [sol.t1, sol.t1 * ar],
            q: sol.k_r_real()?,
            x0: 0.0,
            x1: l,
        },
    ])
}

/// Closed-form finite-window transform of the scattering state.
pub fn windowed_ft(sol: &ScatteringSolution, window: &WindowSpec) -> Result<MomentumAmplitude> {
    let pieces = scattering_pieces(sol, window)?;
    let half_length = window.half_length(sol.k_l);
    Ok(MomentumAmplitude::Windowed { pieces, half_length })
}

/// The scattering spinor at position `x` (full line, not windowed).
pub fn psi(sol: &ScatteringSolution, x: f64) -> [Complex64; 2] {
    let al = Complex64::new(sol.alpha_l, 0.0);
    if x < 0.0 {
        let fwd = (I * sol.k_l * x).exp();
        let bwd = (-I * sol.k_l * x).exp();
        [fwd + sol.r1 * bwd, al * (fwd - sol.r1 * bwd)]
    } else {
        let tr = sol.t1 * (I * sol.k_r * x).exp();
        [tr, tr * sol.alpha_r]
    }
}

/// Sampled momentum amplitude on the conjugate grid of a uniform window
/// sampling, with the continuum `1/sqrt(2 pi)` normalization.
#[derive(Debug, Clone)]
pub struct FftTable {
    pub momenta: Vec<f64>,
    pub values: Vec<[Complex64; 2]>,
}

/// Independent discrete-transform check of `windowed_ft`.
///
/// Uses midpoint sampling at the nominal resolution plus two binary
/// refinements, with Richardson extrapolation of the `dx^2` error series to
/// reach continuum normalization well below 1e-6 of the peak amplitude.
pub fn fft_oracle(sol: &ScatteringSolution, window: &WindowSpec) -> Result<FftTable> {
    if sol.regime != Regime::Propagating {
        return Err(Error::Domain("fft oracle requires the propagating regime".into()));
    }
    let spp = window.samples_per_period as usize;
    let m0 = 2 * window.n_periods as usize * spp;
    let l = window.half_length(sol.k_l);
    let dx0 = 2.0 * l / m0 as f64;
    let nyquist = PI / dx0;
    let k_r = sol.k_r_real()?;
    if sol.k_l >= nyquist || k_r >= nyquist {
        return Err(Error::Resolution(format!(
            "wavenumbers (k_l={}, k_r={}) must lie below the sampling Nyquist momentum {}",
            sol.k_l, k_r, nyquist
        )));
    }

    // One table per refinement level; all levels share the coarse momentum
    // grid p_j = j pi / L.
    let mut levels: Vec<Vec<[Complex64; 2]>> = Vec::new();
    for refine in [1usize, 2, 4] {
        levels.push(dft_midpoint(sol, l, m0 * refine, m0));
    }

    let half = m0 / 2;
    let dp = PI / l;
    let mut momenta = Vec::with_capacity(m0 + 1);
    let mut values = Vec::with_capacity(m0 + 1);
    for j in -(half as i64)..=(half as i64) {
        momenta.push(j as f64 * dp);
        let idx = (j + half as i64) as usize;
        let mut v = [Complex64::ZERO; 2];
        for comp in 0..2 {
            let a1 = levels[0][idx][comp];
            let a2 = levels[1][idx][comp];
            let a4 = levels[2][idx][comp];
            let b1 = (4.0 * a2 - a1) / 3.0;
            let b2 = (4.0 * a4 - a2) / 3.0;
            v[comp] = (16.0 * b2 - b1) / 15.0;
        }
        values.push(v);
    }
    Ok(FftTable { momenta, values })
}

/// Midpoint-sampled DFT with `m` samples, evaluated on the `m0 + 1` coarse
/// grid momenta `j pi / L`, `j = -m0/2 ..= m0/2`.
fn dft_midpoint(sol: &ScatteringSolution, l: f64, m: usize, m0: usize) -> Vec<[Complex64; 2]> {
    let dx = 2.0 * l / m as f64;
    let mut s0: Vec<Complex64> = Vec::with_capacity(m);
    let mut s1: Vec<Complex64> = Vec::with_capacity(m);
    for n in 0..m {
        let x = -l + (n as f64 + 0.5) * dx;
        let v = psi(sol, x);
        s0.push(v[0]);
        s1.push(v[1]);
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut s0);
    fft.process(&mut s1);

    let dp = PI / l;
    let norm = dx / (2.0 * PI).sqrt();
    let half = m0 / 2;
    let mut out = Vec::with_capacity(m0 + 1);
    for j in -(half as i64)..=(half as i64) {
        let p = j as f64 * dp;
        // sum_n psi(x_n) e^{-i p x_n} = e^{i p (L - dx/2)} FFT[j mod m]
        let bin = j.rem_euclid(m as i64) as usize;
        let phase = (I * p * (l - 0.5 * dx)).exp() * norm;
        out.push([phase * s0[bin], phase * s1[bin]]);
    }
    out
}

#[derive(Debug, Clone)]
pub struct MomentumDensity {
    pub amplitude: MomentumAmplitude,
}

impl MomentumDensity {
    pub fn new(amplitude: MomentumAmplitude) -> Self {
        MomentumDensity { amplitude }
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        let v = self.amplitude.eval(p)?;
        Ok(v[0].norm_sqr() + v[1].norm_sqr())
    }
}

/// `int_a^inf e^{isd} / s^n ds` for `a > 0`, `d != 0`, by the integration-by-
/// parts asymptotic series. Converges fast for `a |d| >> n`, which the
/// core-interval margin guarantees here.
fn oscillatory_tail_integral(n: u32, a: f64, d: f64) -> Complex64 {
    let id = I * d;
    let pre = -(I * a * d).exp() / id;
    let mut term = Complex64::new(a.powi(-(n as i32)), 0.0);
    let mut sum = term;
    for m in 0..60u32 {
        term = term * (n + m) as f64 / (id * a);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    pre * sum
}

/// `int_P^inf e^{-ipd} / ((p - qj)(p - qk)) dp` (positive tail).
fn tail_pair_positive(p_cut: f64, d: f64, qj: f64, qk: f64) -> Complex64 {
    let close = (qj - qk).abs() < 1e-12 * qj.abs().max(qk.abs()).max(1.0);
    if d == 0.0 {
        if close {
            Complex64::new(1.0 / (p_cut - qj), 0.0)
        } else {
            Complex64::new(((p_cut - qk) / (p_cut - qj)).ln() / (qj - qk), 0.0)
        }
    } else if close {
        (-I * qj * d).exp() * oscillatory_tail_integral(2, p_cut - qj, -d)
    } else {
        let fj = (-I * qj * d).exp() * oscillatory_tail_integral(1, p_cut - qj, -d);
        let fk = (-I * qk * d).exp() * oscillatory_tail_integral(1, p_cut - qk, -d);
        (fj - fk) / (qj - qk)
    }
}

/// `int_{-inf}^{-P} e^{-ipd} / ((p - qj)(p - qk)) dp` (negative tail).
fn tail_pair_negative(p_cut: f64, d: f64, qj: f64, qk: f64) -> Complex64 {
    let close = (qj - qk).abs() < 1e-12 * qj.abs().max(qk.abs()).max(1.0);
    if d == 0.0 {
        if close {
            Complex64::new(1.0 / (p_cut + qj), 0.0)
        } else {
            Complex64::new(-((p_cut + qj) / (p_cut + qk)).ln() / (qk - qj), 0.0)
        }
    } else if close {
        (-I * qj * d).exp() * oscillatory_tail_integral(2, p_cut + qj, d)
    } else {
        let fj = (-I * qj * d).exp() * oscillatory_tail_integral(1, p_cut + qj, d);
        let fk = (-I * qk * d).exp() * oscillatory_tail_integral(1, p_cut + qk, d);
        (fj - fk) / (qk - qj)
    }
}

/// Exact mass of the windowed density outside `[-P, P]`, per side, from the
/// plane-wave piece expansion of `rho(p)`.
fn analytic_tail_mass(pieces: &[PlaneWavePiece], p_cut: f64) -> (f64, f64) {
    let mut pos = Complex64::ZERO;
    let mut neg = Complex64::ZERO;
    for pj in pieces {
        for pk in pieces {
            let b = pj.coeff[0] * pk.coeff[0].conj() + pj.coeff[1] * pk.coeff[1].conj();
            if b == Complex64::ZERO {
                continue;
            }
            for (xa, sa) in [(pj.x1, 1.0), (pj.x0, -1.0)] {
                for (xb, sb) in [(pk.x1, 1.0), (pk.x0, -1.0)] {
                    let d = xa - xb;
                    let phase = (I * (pj.q * xa - pk.q * xb)).exp();
                    let w = b * sa * sb * phase / (2.0 * PI);
                    pos += w * tail_pair_positive(p_cut, d, pj.q, pk.q);
                    neg += w * tail_pair_negative(p_cut, d, pj.q, pk.q);
                }
            }
        }
    }
    debug_assert!(pos.im.abs() < 1e-9 * pos.re.abs().max(1.0));
    debug_assert!(neg.im.abs() < 1e-9 * neg.re.abs().max(1.0));
    (pos.re, neg.re)
}

fn core_breakpoints(p_cut: f64, half_length: f64, extra: &[f64]) -> Vec<f64> {
    // Panels at the sinc oscillation scale pi/L, with the plane-wave
    // momenta inserted as extra breakpoints.
    let step = PI / half_length;
    let n = (2.0 * p_cut / step).ceil() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| -p_cut + 2.0 * p_cut * i as f64 / n as f64).collect();
    for &q in extra {
        if q.abs() < p_cut {
            pts.push(q);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * p_cut);
    pts
}

/// Momentum mass `int rho(p) dp` over the whole line: adaptive quadrature on
/// the core interval plus exact analytic tails.
pub fn windowed_momentum_mass(amp: &MomentumAmplitude, spec: &QuadSpec) -> Result<(f64, f64)> {
    let (pieces, half_length) = match amp {
        MomentumAmplitude::Windowed { pieces, half_length } => (pieces, *half_length),
        MomentumAmplitude::Formal { .. } => return Err(Error::RegularizationRequired),
    };
    let k_max = pieces.iter().map(|p| p.q.abs()).fold(0.0, f64::max);
    let p_cut = k_max + 80.0 * PI / half_length;
    let qs: Vec<f64> = pieces.iter().flat_map(|p| [p.q, -p.q]).collect();
    let bps = core_breakpoints(p_cut, half_length, &qs);
    let dens = MomentumDensity::new(amp.clone());
    let core = integrate_panels(move |p| dens.eval(p).unwrap_or(0.0), &bps, spec)?;
    let (tail_pos, tail_neg) = analytic_tail_mass(pieces, p_cut);
    Ok((core.value + tail_pos + tail_neg, core.error))
}

#[derive(Debug, Clone, Copy)]
pub struct MomentumEntropy {
    pub value: f64,
    pub error_estimate: f64,
    /// Total momentum mass `int rho dp` (equals the window mass by Parseval).
    pub mass: f64,
    pub tail_mass: f64,
}

/// Ratio-convention momentum entropy
/// `S_p = -int rho ln rho dp / int rho dp`, quadrature on the core interval
/// with an averaged power-law model for the `rho ln rho` tails.
pub fn entropy_momentum(dens: &MomentumDensity, spec: &QuadSpec) -> Result<MomentumEntropy> {
    let (pieces, half_length) = match &dens.amplitude {
        MomentumAmplitude::Windowed { pieces, half_length } => (pieces, *half_length),
        MomentumAmplitude::Formal { .. } => return Err(Error::RegularizationRequired),
    };
    let k_max = pieces.iter().map(|p| p.q.abs()).fold(0.0, f64::max);
    let p_cut = k_max + 80.0 * PI / half_length;
    let qs: Vec<f64> = pieces.iter().flat_map(|p| [p.q, -p.q]).collect();
    let bps = core_breakpoints(p_cut, half_length, &qs);

    let d = dens.clone();
    let mass_core = integrate_panels(move |p| d.eval(p).unwrap_or(0.0), &bps, spec)?;
    let d = dens.clone();
    let num_core = integrate_panels(move |p| xlnx(d.eval(p).unwrap_or(0.0)), &bps, spec)?;
    let (tail_pos, tail_neg) = analytic_tail_mass(pieces, p_cut);
    let tail_mass = tail_pos + tail_neg;
    let mass = mass_core.value + tail_mass;
    if tail_mass > 0.05 * mass {
        return Err(Error::Accuracy {
            message: "momentum tail mass exceeds 5% of the total; core interval too small".into(),
            best: mass,
            error: tail_mass,
        });
    }

    // Tail of rho ln rho from the sidelobe model rho ~ 2C sin^2 / p^2 with
    // C = P * (exact tail mass of that side). The oscillation contributes the
    // constant 2<sin^2 ln(2 sin^2)> = 1 - ln 2 on top of the smooth C/p^2
    // result.
    let tail_num = |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            t * ((t * p_cut).ln() + TAIL_OSC_CONSTANT - 2.0 * p_cut.ln() - 2.0)
        }
    };
    let num = num_core.value + tail_num(tail_pos) + tail_num(tail_neg);
    let value = -num / mass;
    let model_err = 0.3 * (tail_num(tail_pos).abs() + tail_num(tail_neg).abs()) / mass;
    let quad_err = (num_core.error + value.abs() * mass_core.error) / mass;
    Ok(MomentumEntropy {
        value,
        error_estimate: model_err + quad_err,
        mass,
        tail_mass,
    })
}

/// Entropy of the normalized momentum density `rho / int rho`, computed by a
/// separate quadrature pass. Equals `entropy_momentum + ln(mass)`.
pub fn entropy_momentum_normalized(dens: &MomentumDensity, spec: &QuadSpec) -> Result<MomentumEntropy> {
    let ratio = entropy_momentum(dens, spec)?;
    let mass = ratio.mass;
    let (pieces, half_length) = match &dens.amplitude {
        MomentumAmplitude::Windowed { pieces, half_length } => (pieces, *half_length),
        MomentumAmplitude::Formal { .. } => return Err(Error::RegularizationRequired),
    };
    let k_max = pieces.iter().map(|p| p.q.abs()).fold(0.0, f64::max);
    let p_cut = k_max + 80.0 * PI / half_length;
    let qs: Vec<f64> = pieces.iter().flat_map(|p| [p.q, -p.q]).collect();
    let bps = core_breakpoints(p_cut, half_length, &qs);
    let d = dens.clone();
    let num_core = integrate_panels(move |p| xlnx(d.eval(p).unwrap_or(0.0) / mass), &bps, spec)?;
    let (tail_pos, tail_neg) = analytic_tail_mass(pieces, p_cut);
    let tail_num = |t: f64| {
        let t = t / mass;
        if t <= 0.0 {
            0.0
        } else {
            t * ((t * p_cut).ln() + TAIL_OSC_CONSTANT - 2.0 * p_cut.ln() - 2.0)
        }
    };
    let value = -(num_core.value + tail_num(tail_pos) + tail_num(tail_neg));
    Ok(MomentumEntropy {
        value,
        error_estimate: ratio.error_estimate,
        mass,
        tail_mass: ratio.tail_mass,
    })
}

/// Relative Parseval defect
/// `|int rho(p) dp - int_window |psi|^2 dx| / int_window |psi|^2 dx`.
pub fn parseval_defect(sol: &ScatteringSolution, window: &WindowSpec, spec: &QuadSpec) -> Result<f64> {
    let amp = windowed_ft(sol, window)?;
    let (p_mass, _) = windowed_momentum_mass(&amp, spec)?;
    let dens = position_density(sol)?;
    let x_mass = window.half_length(sol.k_l) * (dens.alpha + dens.plateau);
    Ok((p_mass - x_mass).abs() / x_mass)
}
