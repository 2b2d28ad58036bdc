//! Physical parameters and relativistic dispersion for the two leads.
//!
//! Units are dimensionless with `hbar = 1`. The Fermi velocity is common to
//! both sides; the mass jumps at the origin.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Mass on the left lead (x < 0).
    pub m_l: f64,
    /// Mass on the right lead (x > 0).
    pub m_r: f64,
    /// Fermi velocity, shared by both leads.
    pub v_f: f64,
    /// Strength of the scalar point interaction at the origin.
    pub a: f64,
    /// Total energy of the incident monochromatic wave.
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Oscillatory waves on both leads.
    Propagating,
    /// Incident wave propagates, transmitted wave decays (E below the right gap).
    RightEvanescent,
    /// Incident wave cannot propagate at all.
    Invalid,
}

impl MediumParams {
    pub fn new(m_l: f64, m_r: f64, v_f: f64, a: f64, energy: f64) -> Result<Self> {
        let p = MediumParams { m_l, m_r, v_f, a, energy };
        p.validate()?;
        Ok(p)
    }

    /// Constructor accepting per-side velocities. The matching matrix is only
    /// defined for a single Fermi velocity, so distinct values are rejected.
    pub fn with_side_velocities(
        m_l: f64,
        m_r: f64,
        v_l: f64,
        v_r: f64,
        a: f64,
        energy: f64,
    ) -> Result<Self> {
        if v_l != v_r {
            return Err(Error::InvalidParams(format!(
                "distinct side velocities v_l={v_l}, v_r={v_r} are not supported; \
                 the matching matrix assumes a single Fermi velocity"
            )));
        }
        Self::new(m_l, m_r, v_l, a, energy)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.m_l, self.m_r, self.v_f, self.a, self.energy];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.m_l < 0.0 || self.m_r < 0.0 {
            return Err(Error::InvalidParams("masses must be non-negative".into()));
        }
        if self.v_f <= 0.0 {
            return Err(Error::InvalidParams("Fermi velocity must be positive".into()));
        }
        Ok(())
    }

    /// Left-side mass gap `m_l v_F^2`.
    pub fn gap_left(&self) -> f64 {
        self.m_l * self.v_f * self.v_f
    }

    /// Right-side mass gap `m_r v_F^2`.
    pub fn gap_right(&self) -> f64 {
        self.m_r * self.v_f * self.v_f
    }

    pub fn regime(&self) -> Regime {
        if !(self.energy > self.gap_left()) {
            Regime::Invalid
        } else if self.energy > self.gap_right() {
            Regime::Propagating
        } else {
            Regime::RightEvanescent
        }
    }
}

/// Wavenumber from the Dirac dispersion `E^2 = (k v)^2 + (m v^2)^2`.
///
/// Requires `E > m v^2`; below the gap the error carries the evanescent
/// decay rate `sqrt(m^2 v^4 - E^2) / v`.
pub fn wavenumber(mass: f64, v: f64, energy: f64) -> Result<f64> {
    let gap = mass * v * v;
    if energy > gap {
        Ok((energy * energy - gap * gap).sqrt() / v)
    } else {
        Err(Error::Evanescent {
            decay_rate: (gap * gap - energy * energy).sqrt() / v,
        })
    }
}

/// Spinor component ratio `alpha = sqrt((E - m v^2)/(E + m v^2))`, in (0, 1].
pub fn spinor_ratio(mass: f64, v: f64, energy: f64) -> Result<f64> {
    let gap = mass * v * v;
    if energy > gap {
        Ok(((energy - gap) / (energy + gap)).sqrt())
    } else {
        Err(Error::Evanescent {
            decay_rate: (gap * gap - energy * energy).sqrt() / v,
        })
    }
}

/// Complex wavenumber with the decaying branch below the gap:
/// `k = i sqrt(m^2 v^4 - E^2)/v`, so that `e^{ikx}` decays for x > 0.
pub fn wavenumber_complex(mass: f64, v: f64, energy: f64) -> Complex64 {
    let gap = mass * v * v;
    if energy > gap {
        Complex64::new((energy * energy - gap * gap).sqrt() / v, 0.0)
    } else {
        Complex64::new(0.0, (gap * gap - energy * energy).sqrt() / v)
    }
}

/// Complex spinor ratio matching the decaying branch of `wavenumber_complex`.
pub fn spinor_ratio_complex(mass: f64, v: f64, energy: f64) -> Complex64 {
    let gap = mass * v * v;
    if energy > gap {
        Complex64::new(((energy - gap) / (energy + gap)).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, ((gap - energy) / (energy + gap)).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn wavenumber_345() {
        assert_abs_diff_eq!(wavenumber(3.0, 1.0, 5.0).unwrap(), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn wavenumber_massless() {
        assert_abs_diff_eq!(wavenumber(0.0, 2.0, 6.0).unwrap(), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn wavenumber_threshold_is_domain_error() {
        match wavenumber(1.0, 1.0, 1.0) {
            Err(Error::Evanescent { decay_rate }) => assert_eq!(decay_rate, 0.0),
            other => panic!("expected evanescent error, got {other:?}"),
        }
    }

    #[test]
    fn spinor_ratio_values() {
        assert_abs_diff_eq!(spinor_ratio(3.0, 1.0, 5.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(spinor_ratio(0.0, 1.0, 7.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            spinor_ratio(1.0, 1.0, 1.25).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn regime_classification() {
        let p = MediumParams::new(1.0, 2.0, 1.0, 0.0, 3.0).unwrap();
        assert_eq!(p.regime(), Regime::Propagating);
        let p = MediumParams::new(1.0, 2.0, 1.0, 0.0, 1.5).unwrap();
        assert_eq!(p.regime(), Regime::RightEvanescent);
        let p = MediumParams::new(1.0, 2.0, 1.0, 0.0, 0.5).unwrap();
        assert_eq!(p.regime(), Regime::Invalid);
    }

    #[test]
    fn distinct_side_velocities_rejected() {
        assert!(MediumParams::with_side_velocities(1.0, 1.0, 1.0, 1.5, 0.0, 3.0).is_err());
        assert!(MediumParams::with_side_velocities(1.0, 1.0, 1.5, 1.5, 0.0, 4.0).is_ok());
    }

    #[test]
    fn evanescent_branch_decays() {
        let k = wavenumber_complex(2.0, 1.0, 1.0);
        assert!(k.re == 0.0 && k.im > 0.0);
        let a = spinor_ratio_complex(2.0, 1.0, 1.0);
        assert!(a.re == 0.0 && a.im > 0.0);
    }

    proptest! {
        // 2 alpha / (1 + alpha^2) = k v / E, an algebraic consequence of the
        // dispersion relation.
        #[test]
        fn dispersion_identity(m in 0.0..4.0f64, v in 0.2..3.0f64, de in 0.01..8.0f64) {
            let e = m * v * v + de;
            let k = wavenumber(m, v, e).unwrap();
            let alpha = spinor_ratio(m, v, e).unwrap();
            let lhs = 2.0 * alpha / (1.0 + alpha * alpha);
            let rhs = k * v / e;
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn spinor_ratio_monotone_in_energy(m in 0.1..4.0f64, v in 0.2..3.0f64) {
            let gap = m * v * v;
            let mut prev = 0.0;
            for i in 1..40 {
                let e = gap * (1.0 + 0.2 * i as f64);
                let a = spinor_ratio(m, v, e).unwrap();
                prop_assert!(a > prev);
                prev = a;
            }
        }
    }
}
