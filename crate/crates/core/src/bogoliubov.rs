//! Bogoliubov phonons on the soliton background.
//!
//! The dispersion is `ε = √(k²(k² + 2))` in reduced units. With the
//! healing length `ξ = ħ/√(m1 n0 g11)` the textbook form
//! `√(ε⁰(ε⁰ + 2μ))`, `ε⁰ = ħ²k²/2m1`, reads `½√(k²(k² + 4))`; the two agree
//! under `k → √2 k`, so the phonon slope here is √2 instead of 1.

use crate::numerics::{find_root, ROOT_TOL};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// ε(k) = √(k²(k² + 2)).
pub fn dispersion(k: f64) -> f64 {
    k.abs() * (k * k + 2.0).sqrt()
}

/// `√(ε⁰(ε⁰ + 2))` with `ε⁰ = k²/2`, for comparison with [`dispersion`].
pub fn textbook_dispersion(k: f64) -> f64 {
    let e0 = 0.5 * k * k;
    (e0 * (e0 + 2.0)).sqrt()
}

/// Positive root of ε(k) = ω.
pub fn resonant_wavevector(omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("resonance needs omega > 0, got {omega}")));
    }
    let hi = 2.0 * omega.sqrt().max(1.0);
    find_root(|k| dispersion(k) - omega, 0.0, hi, ROOT_TOL * omega.min(1.0))
}

/// Closed form k² = −1 + √(1 + ω²), written without cancellation.
pub fn resonant_wavevector_closed(omega: f64) -> f64 {
    let w2 = omega * omega;
    (w2 / (1.0 + (1.0 + w2).sqrt())).sqrt()
}

/// A single mode. `u` and `v` include the travelling factor `e^{ikx}`;
/// the bare bracketed expressions are available separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovMode {
    pub k: f64,
    pub energy: f64,
}

impl BogoliubovMode {
    pub fn new(k: f64) -> Result<Self> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::Domain(format!("mode profiles are singular at k = {k}")));
        }
        Ok(Self { k, energy: dispersion(k) })
    }

    fn prefactor(&self) -> f64 {
        1.0 / ((4.0 * PI).sqrt() * self.energy)
    }

    fn bracket(&self, sign: f64, x: f64) -> C64 {
        let k = self.k;
        let lead = k * k + sign * 2.0 * self.energy;
        C64::new(lead * k / 2.0, lead * x.tanh()) + k / x.cosh().powi(2)
    }

    /// `(4π)^{-1/2} ε⁻¹ [(k² + 2ε)(k/2 + i tanh x) + k sech² x]`.
    pub fn u_bracket(&self, x: f64) -> C64 {
        self.bracket(1.0, x) * self.prefactor()
    }

    /// Same as [`Self::u_bracket`] with `k² − 2ε`.
    pub fn v_bracket(&self, x: f64) -> C64 {
        self.bracket(-1.0, x) * self.prefactor()
    }

    pub fn u(&self, x: f64) -> C64 {
        self.u_bracket(x) * C64::from_polar(1.0, self.k * x)
    }

    pub fn v(&self, x: f64) -> C64 {
        self.v_bracket(x) * C64::from_polar(1.0, self.k * x)
    }

    /// `|u|² − |v|²` far from the soliton, `k²(k² + 4)/(2π ε)`.
    pub fn far_field_norm(&self) -> f64 {
        let k2 = self.k * self.k;
        k2 * (k2 + 4.0) / (2.0 * PI * self.energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent transcription of the bracketed profiles in real arithmetic.
    fn uv_oracle(k: f64, x: f64) -> ((f64, f64), (f64, f64)) {
        let eps = (k.powi(4) + 2.0 * k * k).sqrt();
        let pre = (1.0 / (4.0 * PI)).sqrt() / eps;
        let sech2 = 1.0 / (x.cosh() * x.cosh());
        let f = |c: f64| (pre * (c * k / 2.0 + k * sech2), pre * c * x.tanh());
        (f(k * k + 2.0 * eps), f(k * k - 2.0 * eps))
    }

    #[test]
    fn dispersion_values() {
        assert_eq!(dispersion(0.0), 0.0);
        assert!((dispersion(1.0) - 3f64.sqrt()).abs() < 1e-15);
        assert!((dispersion(1e4) / 1e8 - 1.0).abs() < 1e-7);
        assert_eq!(dispersion(-0.7), dispersion(0.7));
        assert!((dispersion(0.01) / (2f64.sqrt() * 0.01) - 1.0).abs() < 0.01);
        for k in [0.1, 0.9, 3.0] {
            assert!((dispersion(k) - textbook_dispersion(2f64.sqrt() * k)).abs() < 1e-14);
        }
    }

    #[test]
    fn resonance_round_trip() {
        for k in [0.1, 0.5, 0.9, 2.0] {
            let r = resonant_wavevector(dispersion(k)).unwrap();
            assert!((r - k).abs() < 1e-10, "{k}");
        }
        assert!((resonant_wavevector(3f64.sqrt()).unwrap() - 1.0).abs() < 1e-12);
        assert!(resonant_wavevector(1e-9).unwrap() < 1e-8);
        for w in [1e-3, 0.1469, 0.4942, 5.0] {
            let a = resonant_wavevector(w).unwrap();
            assert!((a - resonant_wavevector_closed(w)).abs() <= 1e-10 * a);
        }
    }

    #[test]
    fn profiles_match_oracle() {
        let m = BogoliubovMode::new(0.9).unwrap();
        for i in 0..41 {
            let x = -10.0 + 0.5 * i as f64;
            let ((ur, ui), (vr, vi)) = uv_oracle(0.9, x);
            assert!((m.u_bracket(x) - C64::new(ur, ui)).norm() < 1e-14);
            assert!((m.v_bracket(x) - C64::new(vr, vi)).norm() < 1e-14);
            let phase = C64::from_polar(1.0, 0.9 * x);
            assert!((m.u(x) - C64::new(ur, ui) * phase).norm() < 1e-14);
        }
        assert_eq!(m.u_bracket(0.0).im, 0.0);
    }

    #[test]
    fn far_field() {
        let m = BogoliubovMode::new(0.7).unwrap();
        let x = 40.0;
        let d = m.u(x).norm_sqr() - m.v(x).norm_sqr();
        assert!((d - m.far_field_norm()).abs() < 1e-12);
    }

    #[test]
    fn zero_mode_rejected() {
        assert!(BogoliubovMode::new(0.0).is_err());
        assert!(resonant_wavevector(0.0).is_err());
    }
}
