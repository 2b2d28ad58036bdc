//! Matching matrix at the origin and the reflection/transmission amplitudes
//! of the monochromatic scattering state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::medium::{
    spinor_ratio, spinor_ratio_complex, wavenumber, wavenumber_complex, MediumParams, Regime,
};
use crate::Result;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The 2x2 matrix relating spinor boundary values, `psi(0+) = M psi(0-)`.
///
/// Off-diagonal entries are purely imaginary with opposite signs, and
/// `det M = 1` (cosh^2 - sinh^2).
#[derive(Debug, Clone, Copy)]
pub struct MatchingMatrix {
    pub entries: [[Complex64; 2]; 2],
    pub params: MediumParams,
}

impl MatchingMatrix {
    pub fn det(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.entries;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }
}

/// Mass-asymmetry prefactor `((1 + m_r^2 v^4)/(1 + m_l^2 v^4))^{1/4}`.
fn asymmetry_factor(params: &MediumParams) -> f64 {
    let v4 = params.v_f.powi(4);
    ((1.0 + params.m_r * params.m_r * v4) / (1.0 + params.m_l * params.m_l * v4)).powf(0.25)
}

pub fn matching_matrix(params: &MediumParams) -> Result<MatchingMatrix> {
    params.validate()?;
    let lambda = asymmetry_factor(params);
    let arg = params.a / params.v_f;
    let c = arg.cosh();
    let s = arg.sinh();
    Ok(MatchingMatrix {
        entries: [
            [Complex64::new(lambda * c, 0.0), I * s],
            [-I * s, Complex64::new(c / lambda, 0.0)],
        ],
        params: *params,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScatteringSolution {
    pub r1: Complex64,
    pub t1: Complex64,
    pub k_l: f64,
    /// Real in the propagating regime; purely imaginary (decaying branch)
    /// in the right-evanescent regime.
    pub k_r: Complex64,
    pub alpha_l: f64,
    pub alpha_r: Complex64,
    /// Norm of the matching-equation defect `|psi(0+) - M psi(0-)|`.
    pub residual: f64,
    pub regime: Regime,
    pub params: MediumParams,
}

impl ScatteringSolution {
    /// Real right-side spinor ratio; only defined in the propagating regime.
    pub fn alpha_r_real(&self) -> Result<f64> {
        if self.regime == Regime::Propagating {
            Ok(self.alpha_r.re)
        } else {
            Err(Error::Domain(
                "right lead is evanescent; alpha_r is not real".into(),
            ))
        }
    }

    /// Real transmitted wavenumber; only defined in the propagating regime.
    pub fn k_r_real(&self) -> Result<f64> {
        if self.regime == Regime::Propagating {
            Ok(self.k_r.re)
        } else {
            Err(Error::Domain("right lead is evanescent; k_r is not real".into()))
        }
    }
}

/// Solves `psi(0+) = M psi(0-)` for the reflection and transmission
/// amplitudes, with `psi(0-) = (1 + r, alpha_l (1 - r))` and
/// `psi(0+) = (t, t alpha_r)`.
pub fn solve_amplitudes(params: &MediumParams) -> Result<ScatteringSolution> {
    let regime = params.regime();
    if regime == Regime::Invalid {
        let gap = params.gap_left();
        return Err(Error::Evanescent {
            decay_rate: if params.energy < gap {
                (gap * gap - params.energy * params.energy).max(0.0).sqrt() / params.v_f
            } else {
                0.0
            },
        });
    }
    let m = matching_matrix(params)?;
    let k_l = wavenumber(params.m_l, params.v_f, params.energy)?;
    let alpha_l = spinor_ratio(params.m_l, params.v_f, params.energy)?;
    let k_r = wavenumber_complex(params.m_r, params.v_f, params.energy);
    let alpha_r = spinor_ratio_complex(params.m_r, params.v_f, params.energy);

    // Unknowns (r, t):
    //   (M11 - M12 a_l) r - t       = -(M11 + M12 a_l)
    //   (M21 - M22 a_l) r - a_r t   = -(M21 + M22 a_l)
    let e = &m.entries;
    let al = Complex64::new(alpha_l, 0.0);
    let a00 = e[0][0] - e[0][1] * al;
    let a01 = -Complex64::ONE;
    let a10 = e[1][0] - e[1][1] * al;
    let a11 = -alpha_r;
    let b0 = -(e[0][0] + e[0][1] * al);
    let b1 = -(e[1][0] + e[1][1] * al);
    let det = a00 * a11 - a01 * a10;
    if det.norm() < 1e-14 * (a00.norm() + a10.norm() + alpha_r.norm()).max(1.0) {
        return Err(Error::SingularSystem(format!(
            "matching system singular for m_l={}, m_r={}, v_F={}, a={}, E={}",
            params.m_l, params.m_r, params.v_f, params.a, params.energy
        )));
    }
    let r1 = (b0 * a11 - a01 * b1) / det;
    let t1 = (a00 * b1 - a10 * b0) / det;

    let left = [Complex64::ONE + r1, al * (Complex64::ONE - r1)];
    let right = [t1, t1 * alpha_r];
    let defect = {
        let mv = m.apply(left);
        ((right[0] - mv[0]).norm_sqr() + (right[1] - mv[1]).norm_sqr()).sqrt()
    };

    Ok(ScatteringSolution {
        r1,
        t1,
        k_l,
        k_r,
        alpha_l,
        alpha_r,
        residual: defect,
        regime,
        params: *params,
    })
}

/// Probability-current conservation defect
/// `|alpha_l (1 - |r|^2) - alpha_r |t|^2|` (transmitted flux dropped in the
/// evanescent regime). Reported as a diagnostic, never asserted.
pub fn flux_residual(sol: &ScatteringSolution) -> f64 {
    let reflected = sol.alpha_l * (1.0 - sol.r1.norm_sqr());
    match sol.regime {
        Regime::Propagating => (reflected - sol.alpha_r.re * sol.t1.norm_sqr()).abs(),
        _ => reflected.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params(m_l: f64, m_r: f64, v: f64, a: f64, e: f64) -> MediumParams {
        MediumParams::new(m_l, m_r, v, a, e).unwrap()
    }

    #[test]
    fn zero_coupling_equal_masses_is_identity() {
        let m = matching_matrix(&params(1.0, 1.0, 1.0, 0.0, 3.0)).unwrap();
        assert_abs_diff_eq!(m.entries[0][0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.entries[1][1].re, 1.0, epsilon = 1e-15);
        assert_eq!(m.entries[0][1], Complex64::ZERO);
        assert_eq!(m.entries[1][0], Complex64::ZERO);
    }

    #[test]
    fn zero_coupling_mass_jump_is_diagonal() {
        let m = matching_matrix(&params(0.0, 1.0, 1.0, 0.0, 3.0)).unwrap();
        assert_abs_diff_eq!(m.entries[0][0].re, 2f64.powf(0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(m.entries[1][1].re, 2f64.powf(-0.25), epsilon = 1e-15);
    }

    #[test]
    fn off_diagonal_antisymmetric_and_imaginary() {
        let m = matching_matrix(&params(0.5, 2.0, 1.3, 0.8, 5.0)).unwrap();
        assert_eq!(m.entries[0][1].re, 0.0);
        assert_eq!(m.entries[1][0].re, 0.0);
        assert_abs_diff_eq!(m.entries[0][1].im, -m.entries[1][0].im, epsilon = 1e-15);
    }

    #[test]
    fn no_jump_gives_full_transmission() {
        let sol = solve_amplitudes(&params(1.0, 1.0, 1.0, 0.0, 2.0)).unwrap();
        assert!(sol.r1.norm() < 1e-14);
        assert!((sol.t1 - Complex64::ONE).norm() < 1e-14);
        assert!(sol.residual < 1e-14);
        assert!(flux_residual(&sol) < 1e-14);
    }

    #[test]
    fn zero_coupling_closed_form() {
        let p = params(0.0, 1.0, 1.0, 0.0, 2.0);
        let sol = solve_amplitudes(&p).unwrap();
        let lambda2 = asymmetry_factor(&p).powi(2);
        let al = sol.alpha_l;
        let ar = sol.alpha_r.re;
        let r = (al - lambda2 * ar) / (al + lambda2 * ar);
        let t = 2.0 * asymmetry_factor(&p) * al / (al + lambda2 * ar);
        assert_abs_diff_eq!(sol.r1.re, r, epsilon = 1e-14);
        assert!(sol.r1.im.abs() < 1e-14);
        assert_abs_diff_eq!(sol.t1.re, t, epsilon = 1e-14);
        assert!(flux_residual(&sol) < 1e-13);
    }

    #[test]
    fn coupling_sign_flip_maps_to_negated_spinor_ratios() {
        // With a -> -a, (r, t) solves the original-matrix system with
        // alpha_l -> -alpha_l and alpha_r -> -alpha_r.
        let p_plus = params(0.6, 1.4, 1.1, 0.9, 4.0);
        let p_minus = params(0.6, 1.4, 1.1, -0.9, 4.0);
        let m = matching_matrix(&p_plus).unwrap();
        let sol = solve_amplitudes(&p_minus).unwrap();
        let e = &m.entries;
        let al = Complex64::new(-sol.alpha_l, 0.0);
        let ar = -sol.alpha_r;
        let left = [Complex64::ONE + sol.r1, al * (Complex64::ONE - sol.r1)];
        let right = [sol.t1, sol.t1 * ar];
        let mv = [
            e[0][0] * left[0] + e[0][1] * left[1],
            e[1][0] * left[0] + e[1][1] * left[1],
        ];
        assert!((right[0] - mv[0]).norm() < 1e-12);
        assert!((right[1] - mv[1]).norm() < 1e-12);
    }

    #[test]
    fn evanescent_solution_accepted_and_flagged() {
        let sol = solve_amplitudes(&params(0.5, 3.0, 1.0, 0.4, 1.5)).unwrap();
        assert_eq!(sol.regime, Regime::RightEvanescent);
        assert!(sol.k_r.im > 0.0);
        assert!(sol.residual < 1e-12);
        assert!(sol.alpha_r_real().is_err());
    }

    #[test]
    fn amplitudes_continuous_in_energy_and_coupling() {
        // Finite-difference slope stays bounded on a smooth grid: no branch jumps.
        let mut prev: Option<Complex64> = None;
        for i in 0..200 {
            let e = 2.0 + 0.01 * i as f64;
            let sol = solve_amplitudes(&params(1.0, 1.5, 1.0, 0.7, e)).unwrap();
            if let Some(p) = prev {
                assert!((sol.r1 - p).norm() / 0.01 < 10.0);
            }
            prev = Some(sol.r1);
        }
        prev = None;
        for i in 0..200 {
            let a = -1.0 + 0.01 * i as f64;
            let sol = solve_amplitudes(&params(1.0, 1.5, 1.0, a, 3.0)).unwrap();
            if let Some(p) = prev {
                assert!((sol.r1 - p).norm() / 0.01 < 10.0);
            }
            prev = Some(sol.r1);
        }
    }

    proptest! {
        #[test]
        fn determinant_is_one(
            m_l in 0.0..4.0f64,
            m_r in 0.0..4.0f64,
            v in 0.3..2.5f64,
            a in -3.0..3.0f64,
        ) {
            let e = (m_l.max(m_r)) * v * v + 1.0;
            let m = matching_matrix(&params(m_l, m_r, v, a, e)).unwrap();
            // cosh^2 - sinh^2 cancels in floating point at the cosh^2 scale
            let cond = (a / v).cosh().powi(2);
            prop_assert!((m.det() - Complex64::ONE).norm() < 1e-14 * cond.max(100.0));
        }

        #[test]
        fn reflection_bounded_and_residual_small(
            m_l in 0.0..3.0f64,
            m_r in 0.0..3.0f64,
            v in 0.3..2.0f64,
            a in -2.0..2.0f64,
            de in 0.05..6.0f64,
        ) {
            let e = m_l.max(m_r) * v * v + de;
            let sol = solve_amplitudes(&params(m_l, m_r, v, a, e)).unwrap();
            prop_assert!(sol.residual < 1e-12);
            prop_assert!(sol.r1.norm() <= 1.0 + 1e-12);
            prop_assert!(flux_residual(&sol) < 1e-12);
        }
    }
}
