//! Physical and reduced parameters.
//!
//! Every downstream computation works in reduced units `ħ = m1 = ξ = μ = 1`.
//! In these units `g11 = 1/(n0ξ)`, `g12 = r_g/(n0ξ)`, the background density
//! is `n0ξ` and the sound speed `c_s = √(μ/m1) = ξμ/ħ` is exactly 1. The
//! time unit is `ħ/μ = ξ/c_s`.
//!
//! Note the Bogoliubov dispersion used here, `ε = √(k²(k²+2))`, has phonon
//! slope √2 rather than 1. That factor belongs to the dispersion convention,
//! not to `c_s`; see [`crate::bogoliubov`].

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Above this value the quasi-1D parameter `2 a_s l_z / l_r²` triggers a warning.
pub const QUASI1D_WARN: f64 = 0.1;

/// Transverse trapping data for the advisory quasi-1D check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confinement {
    /// s-wave scattering length (m).
    pub scattering_length: f64,
    /// Longitudinal oscillator length (m).
    pub l_z: f64,
    /// Radial oscillator length (m).
    pub l_r: f64,
}

impl Confinement {
    pub fn quasi1d_alpha(&self) -> f64 {
        2.0 * self.scattering_length * self.l_z / (self.l_r * self.l_r)
    }
}

/// Parameters in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Condensate particle mass (kg).
    pub m1: f64,
    /// Impurity mass (kg).
    pub m2: f64,
    /// Condensate self-coupling (J·m).
    pub g11: f64,
    /// Condensate-impurity coupling (J·m).
    pub g12: f64,
    /// Linear density (1/m).
    pub n0: f64,
    /// Box length (m).
    pub box_length: f64,
    /// Number of solitons in the box.
    pub soliton_count: f64,
    #[serde(default)]
    pub confinement: Option<Confinement>,
}

impl PhysicalConfig {
    /// Build a configuration from the usual experimental scales: healing
    /// length, sound speed and the depletion number `n0ξ`.
    pub fn from_scales(
        healing_length: f64,
        sound_speed: f64,
        depletion: f64,
        mass_ratio: f64,
        coupling_ratio: f64,
        box_length: f64,
        soliton_count: f64,
    ) -> Self {
        let m1 = HBAR / (healing_length * sound_speed);
        let n0 = depletion / healing_length;
        let g11 = m1 * sound_speed * sound_speed / n0;
        Self { m1, m2: mass_ratio * m1, g11, g12: coupling_ratio * g11, n0, box_length, soliton_count, confinement: None }
    }

    fn check(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let positive = [("m1", self.m1), ("m2", self.m2), ("g11", self.g11), ("n0", self.n0), ("box_length", self.box_length)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(self.g12 >= 0.0 && self.g12.is_finite()) {
            bad.push(format!("g12 must be non-negative, got {}", self.g12));
        }
        if !(self.soliton_count >= 0.0) {
            bad.push(format!("soliton_count must be non-negative, got {}", self.soliton_count));
        }
        bad
    }

    pub fn reduce(&self) -> Result<ReducedParams> {
        let bad = self.check();
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        let mu = self.g11 * self.n0;
        let xi = HBAR / (self.m1 * mu).sqrt();
        let c_s = (mu / self.m1).sqrt();
        let mut p = ReducedParams::new(
            self.m2 / self.m1,
            self.g12 / self.g11,
            self.soliton_count * xi / self.box_length,
            self.n0 * xi,
            self.box_length / xi,
        )?;
        p.scales = Some(UnitScales { healing_length: xi, chemical_potential: mu, sound_speed: c_s });
        if let Some(c) = self.confinement {
            p.set_confinement(c);
        }
        Ok(p)
    }
}

/// SI values of the reduced units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitScales {
    /// ξ (m).
    pub healing_length: f64,
    /// μ (J).
    pub chemical_potential: f64,
    /// c_s (m/s).
    pub sound_speed: f64,
}

impl UnitScales {
    /// ħ/μ in seconds.
    pub fn time_unit(&self) -> f64 {
        HBAR / self.chemical_potential
    }
}

/// Dimensionless system parameters plus the derived ν and exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    /// r_m = m2/m1.
    pub mass_ratio: f64,
    /// r_g = g12/g11.
    pub coupling_ratio: f64,
    /// Nξ, solitons per healing length.
    pub soliton_density: f64,
    /// n0ξ, atoms per healing length (depletion number).
    pub depletion: f64,
    /// Box length in units of ξ.
    pub box_length: f64,
    pub nu: f64,
    /// Exponent of the `sech` ground state, `√(2 r_g r_m)`.
    pub exponent_alpha: f64,
    pub quasi1d_alpha: Option<f64>,
    pub scales: Option<UnitScales>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ReducedParams {
    pub fn new(mass_ratio: f64, coupling_ratio: f64, soliton_density: f64, depletion: f64, box_length: f64) -> Result<Self> {
        let mut bad = Vec::new();
        if !(mass_ratio > 0.0 && mass_ratio.is_finite()) {
            bad.push(format!("mass ratio must be positive, got {mass_ratio}"));
        }
        if !(coupling_ratio >= 0.0 && coupling_ratio.is_finite()) {
            bad.push(format!("coupling ratio must be non-negative, got {coupling_ratio}"));
        }
        if !(0.0..1.0).contains(&soliton_density) {
            bad.push(format!("soliton density N*xi must lie in [0, 1), got {soliton_density}"));
        }
        if !(depletion > 0.0 && depletion.is_finite()) {
            bad.push(format!("depletion number n0*xi must be positive, got {depletion}"));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            bad.push(format!("box length must be positive, got {box_length}"));
        }
        if !bad.is_empty() {
            return Err(Error::Validation(bad));
        }
        Ok(Self {
            mass_ratio,
            coupling_ratio,
            soliton_density,
            depletion,
            box_length,
            nu: nu_of_coupling(coupling_ratio, mass_ratio),
            exponent_alpha: (2.0 * coupling_ratio * mass_ratio).sqrt(),
            quasi1d_alpha: None,
            scales: None,
            warnings: Vec::new(),
        })
    }

    /// r_m = 1.56, r_g = 1.85, Nξ = 0.2, n0ξ = 50, box of 100 µm at ξ = 0.7 µm.
    pub fn reference() -> Self {
        Self::new(1.56, 1.85, 0.2, 50.0, 100.0 / 0.7).expect("reference parameters are valid")
    }

    /// Same system with a different coupling ratio.
    pub fn with_coupling_ratio(&self, coupling_ratio: f64) -> Result<Self> {
        let mut p = Self::new(self.mass_ratio, coupling_ratio, self.soliton_density, self.depletion, self.box_length)?;
        p.scales = self.scales;
        if let Some(a) = self.quasi1d_alpha {
            p.quasi1d_alpha = Some(a);
            p.warnings = self.warnings.clone();
        }
        Ok(p)
    }

    pub fn set_confinement(&mut self, c: Confinement) {
        let a = c.quasi1d_alpha();
        self.quasi1d_alpha = Some(a);
        if a >= QUASI1D_WARN {
            self.warnings.push(format!("quasi-1D parameter 2 a_s l_z / l_r^2 = {a:.3} is not small; the 1D description is questionable"));
        }
    }

    /// Condensate self-coupling in reduced units.
    pub fn g11(&self) -> f64 {
        1.0 / self.depletion
    }

    /// Condensate-impurity coupling in reduced units.
    pub fn g12(&self) -> f64 {
        self.coupling_ratio / self.depletion
    }
}

/// ν = (−1 + √(1 + 4 r_g r_m))/2.
pub fn nu_of_coupling(coupling_ratio: f64, mass_ratio: f64) -> f64 {
    let s = 4.0 * coupling_ratio * mass_ratio;
    // s/(1+√(1+s)) is the cancellation-free form of √(1+s) − 1.
    0.5 * s / (1.0 + (1.0 + s).sqrt())
}

/// Inverse of [`nu_of_coupling`]: r_g = ν(ν+1)/r_m.
pub fn coupling_of_nu(nu: f64, mass_ratio: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(mass_ratio > 0.0) {
        return Err(Error::Domain(format!("need nu >= 0 and r_m > 0, got nu = {nu}, r_m = {mass_ratio}")));
    }
    Ok(nu * (nu + 1.0) / mass_ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_coupling() {
        let p = ReducedParams::new(1.56, 0.0, 0.2, 50.0, 100.0).unwrap();
        assert_eq!(p.nu, 0.0);
        assert_eq!(p.exponent_alpha, 0.0);
    }

    #[test]
    fn reference_nu() {
        // 1 + 4·1.85·1.56 = 12.544
        let expect = (-1.0 + 12.544f64.sqrt()) / 2.0;
        assert!((ReducedParams::reference().nu - expect).abs() < 1e-14);
        assert!((expect - 1.2709).abs() < 1e-4);
    }

    #[test]
    fn window_edges_in_coupling() {
        let lo = coupling_of_nu(0.8, 1.56).unwrap();
        let hi = coupling_of_nu(9.0 / 7.0, 1.56).unwrap();
        assert!((lo - 1.44 / 1.56).abs() < 1e-14);
        assert!((lo - 0.9231).abs() < 1e-4);
        assert!((hi - 1.8838).abs() < 1e-4);
    }

    #[test]
    fn physical_reduction() {
        let xi = 0.7e-6;
        let cfg = PhysicalConfig::from_scales(xi, 1e-3, 50.0, 1.56, 1.85, 100e-6, 20.0);
        let p = cfg.reduce().unwrap();
        let s = p.scales.unwrap();
        assert!((s.healing_length / xi - 1.0).abs() < 1e-12);
        assert!((s.sound_speed - 1e-3).abs() < 1e-15);
        assert!((p.soliton_density - 0.14).abs() < 1e-12);
        assert!((p.depletion - 50.0).abs() < 1e-9);
        // d = 3.5 µm spacing gives Nξ = 0.2.
        assert!((xi / 3.5e-6 - 0.2).abs() < 1e-12);
        assert!((s.time_unit() - xi / 1e-3).abs() < 1e-18);
    }

    #[test]
    fn validation_lists_every_failure() {
        let cfg =
            PhysicalConfig { m1: -1.0, m2: 1.0, g11: 0.0, g12: -2.0, n0: 1.0, box_length: 1.0, soliton_count: 1.0, confinement: None };
        match cfg.reduce() {
            Err(Error::Validation(v)) => assert_eq!(v.len(), 3, "{v:?}"),
            other => panic!("{other:?}"),
        }
        assert!(ReducedParams::new(1.0, 1.0, 1.5, 50.0, 10.0).is_err());
    }

    #[test]
    fn quasi1d_warning() {
        let mut p = ReducedParams::reference();
        p.set_confinement(Confinement { scattering_length: 5e-9, l_z: 1e-6, l_r: 1e-6 });
        assert!(p.warnings.is_empty());
        p.set_confinement(Confinement { scattering_length: 6e-8, l_z: 1e-6, l_r: 1e-6 });
        assert_eq!(p.warnings.len(), 1);
    }

    proptest! {
        #[test]
        fn nu_round_trip(nu in 0.0f64..5.0, rm in 0.1f64..10.0) {
            let rg = coupling_of_nu(nu, rm).unwrap();
            prop_assert!((nu_of_coupling(rg, rm) - nu).abs() < 1e-12);
        }

        #[test]
        fn nu_monotone(rg in 0.0f64..5.0, rm in 0.1f64..5.0, d in 1e-6f64..1.0) {
            prop_assert!(nu_of_coupling(rg + d, rm) > nu_of_coupling(rg, rm));
            prop_assert!(nu_of_coupling(rg.max(1e-3), rm + d) > nu_of_coupling(rg.max(1e-3), rm));
        }
    }
}
