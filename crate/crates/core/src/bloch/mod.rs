//! Driven three-level dynamics of one qutrit and the acoustic response of the
//! soliton gas.
//!
//! Basis order is `(|g⟩, |e1⟩, |e2⟩)`. The probe drives `|g⟩ ↔ |e1⟩` at
//! detuning `Δ_p = ω_p − ω0`, the control drives `|e1⟩ ↔ |e2⟩` at
//! `Δ_c = ω_c − ω1`, and `δ = Δ_p + Δ_c`. The probe coherence is
//! `ρ_{e1,g}`, written `ρ21` below.

mod pulse;
mod response;
mod steady;

pub use pulse::{propagate_envelope, PulseConfig, PulseResult};
pub use response::{
    dispersion_curve, find_peaks, kramers_kronig, kramers_kronig_error, min_group_velocity, susceptibility, transparency_width,
    DispersionPoint, Medium, ResponseSpectrum, SlowSoundSummary, Sweep, QUOTED_K_RES, QUOTED_MIN_VG_OVER_CS, QUOTED_PULSE_VG_UM_PER_S,
};
pub use steady::{evolve, liouvillian, steady_state_analytic, steady_state_lindblad, SteadyState};

use crate::{Error, Result, C64};
use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

/// How the two-photon detuning follows the probe detuning in a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMode {
    /// Control on resonance (`Δ_c = 0`), so `δ = Δ_p`.
    #[default]
    Track,
    /// Two-photon resonance held (`δ = 0`).
    Fixed,
}

impl std::str::FromStr for DeltaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "track" => Ok(Self::Track),
            "fixed" => Ok(Self::Fixed),
            _ => Err(Error::Domain(format!("unknown delta mode '{s}' (track|fixed)"))),
        }
    }
}

impl DeltaMode {
    pub fn two_photon(self, delta_p: f64) -> f64 {
        match self {
            Self::Track => delta_p,
            Self::Fixed => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub omega_p: f64,
    pub omega_c: f64,
    pub delta_p: f64,
    pub delta_c: f64,
}

impl DriveConfig {
    pub fn new(omega_p: f64, omega_c: f64, delta_p: f64, delta_c: f64) -> Self {
        Self { omega_p, omega_c, delta_p, delta_c }
    }

    /// Drive at probe detuning `delta_p` with `Δ_c` set by `mode`.
    pub fn swept(omega_p: f64, omega_c: f64, delta_p: f64, mode: DeltaMode) -> Self {
        let delta = mode.two_photon(delta_p);
        Self { omega_p, omega_c, delta_p, delta_c: delta - delta_p }
    }

    pub fn two_photon(&self) -> f64 {
        self.delta_p + self.delta_c
    }

    pub fn is_weak_probe(&self) -> bool {
        self.omega_p.abs() <= 0.01 * self.omega_c.abs()
    }
}

/// A 3×3 density matrix over `(|g⟩, |e1⟩, |e2⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix3(pub [[C64; 3]; 3]);

impl DensityMatrix3 {
    pub fn ground() -> Self {
        let mut m = [[C64::default(); 3]; 3];
        m[0][0] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Row-major vectorization, entry `(a, b)` at `3a + b`.
    pub fn from_vec(v: &[C64]) -> Result<Self> {
        if v.len() != 9 {
            return Err(Error::Shape(v.len()));
        }
        let mut m = [[C64::default(); 3]; 3];
        for (i, z) in v.iter().enumerate() {
            m[i / 3][i % 3] = *z;
        }
        Ok(Self(m))
    }

    pub fn to_vec(&self) -> Vec<C64> {
        self.0.iter().flatten().copied().collect()
    }

    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.0[a][b]
    }

    /// Probe coherence `ρ_{e1,g}`.
    pub fn rho21(&self) -> C64 {
        self.0[1][0]
    }

    /// Two-photon coherence `ρ_{e2,g}`.
    pub fn rho31(&self) -> C64 {
        self.0[2][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut e: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                e = e.max((self.0[a][b] - self.0[b][a].conj()).norm());
            }
        }
        e
    }

    fn matrix(&self) -> Matrix3<C64> {
        Matrix3::from_fn(|a, b| self.0[a][b])
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let m = self.matrix();
        let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }

    pub fn is_physical(&self) -> bool {
        self.hermiticity_error() <= 1e-10 && (self.trace() - 1.0).norm() <= 1e-10 && self.eigenvalues()[0] >= -1e-8
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let d = Self(std::array::from_fn(|a| std::array::from_fn(|b| self.0[a][b] - other.0[a][b])));
        0.5 * d.eigenvalues().iter().map(|v| v.abs()).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_modes() {
        let d = DriveConfig::swept(0.0, 1.0, 0.3, DeltaMode::Track);
        assert_eq!((d.delta_c, d.two_photon()), (0.0, 0.3));
        let f = DriveConfig::swept(0.0, 1.0, 0.3, DeltaMode::Fixed);
        assert_eq!(f.two_photon(), 0.0);
        assert_eq!("fixed".parse::<DeltaMode>().unwrap(), DeltaMode::Fixed);
        assert!("both".parse::<DeltaMode>().is_err());
    }

    #[test]
    fn ground_state_properties() {
        let g = DensityMatrix3::ground();
        assert!(g.is_physical());
        let ev = g.eigenvalues();
        assert!((ev[2] - 1.0).abs() < 1e-14 && ev[0].abs() < 1e-14);
        assert_eq!(g.trace_distance(&g), 0.0);
        let v = g.to_vec();
        assert_eq!(DensityMatrix3::from_vec(&v).unwrap(), g);
        assert!(DensityMatrix3::from_vec(&v[..8]).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let mut e = DensityMatrix3([[C64::default(); 3]; 3]);
        e.0[2][2] = C64::new(1.0, 0.0);
        assert!((DensityMatrix3::ground().trace_distance(&e) - 1.0).abs() < 1e-14);
    }
}
