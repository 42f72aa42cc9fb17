//! TOML run configuration, `--set` overrides and parameter resolution.

use serde::{Deserialize, Serialize};
use slowsound::decay::RateRoute;
use slowsound::gpe::Backreaction;
use slowsound::{CouplingMode, DeltaMode, PhysicalConfig, ReducedParams};
use std::path::Path;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub reduced: ReducedSection,
    pub physical: Option<PhysicalConfig>,
    pub model: ModelSection,
    pub spectrum: SpectrumSection,
    pub decay: DecaySection,
    pub couplings: CouplingsSection,
    pub response: ResponseSection,
    pub eigenstates: EigenSection,
    pub pulse: PulseSection,
}

/// Reduced parameters. Any value given here overrides the one derived from
/// `[physical]`; missing values fall back to the reference set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedSection {
    pub mass_ratio: Option<f64>,
    pub coupling_ratio: Option<f64>,
    pub soliton_density: Option<f64>,
    pub depletion: Option<f64>,
    pub box_length: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub coupling_mode: CouplingMode,
    pub delta_mode: DeltaMode,
    pub rate_route: RateRoute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSection {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub points: usize,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self { ratio_min: 0.9, ratio_max: 1.9, points: 201 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecaySection {
    /// Sweep points across the qutrit window.
    pub points: usize,
    /// Also emit the two-phonon cascade line shapes.
    pub cascade: bool,
}

impl Default for DecaySection {
    fn default() -> Self {
        Self { points: 101, cascade: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingsSection {
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
}

impl Default for CouplingsSection {
    fn default() -> Self {
        Self { k_min: 0.01, k_max: 3.0, points: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResponseSection {
    /// Control strengths for the susceptibility scenario, in units of γ0.
    pub omega_c: Vec<f64>,
    /// Coupling ratios compared in the susceptibility scenario.
    pub coupling_ratios: Vec<f64>,
    /// Control strength for groupvel, dispersion, pulse and validate, in γ0.
    pub control: f64,
    /// Sweep half width in units of γ0.
    pub sweep_half_width: f64,
    pub sweep_points: usize,
    /// Sound speed used for physical velocities when `[physical]` is absent.
    pub sound_speed_mm_per_s: f64,
}

impl Default for ResponseSection {
    fn default() -> Self {
        Self {
            omega_c: vec![0.2, 2.0],
            coupling_ratios: vec![1.1, 1.85],
            control: 2.0,
            sweep_half_width: 10.0,
            sweep_points: 2001,
            sound_speed_mm_per_s: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenSection {
    pub states: usize,
    pub length: f64,
    pub points: usize,
    pub dtau: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub backreaction: Backreaction,
    /// Impurity number for the self-consistent state when backreaction is on.
    pub impurity_number: f64,
}

impl Default for EigenSection {
    fn default() -> Self {
        let e = slowsound::gpe::EigenConfig::default();
        Self {
            states: 3,
            length: e.length,
            points: e.points,
            dtau: e.dtau,
            tol: e.tol,
            max_iter: e.max_iter,
            backreaction: Backreaction::Off,
            impurity_number: 1.0,
        }
    }
}

impl EigenSection {
    pub fn solver(&self) -> slowsound::gpe::EigenConfig {
        slowsound::gpe::EigenConfig { length: self.length, points: self.points, dtau: self.dtau, tol: self.tol, max_iter: self.max_iter }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    /// Probe bandwidth as a fraction of the transparency width.
    pub bandwidth_fraction: f64,
    pub points: usize,
    /// Medium length in ξ; by default the delay equals the pulse duration.
    pub length: Option<f64>,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self { bandwidth_fraction: 0.1, points: 1 << 14, length: None }
    }
}

/// Parses `text` with `key.path=value` overrides applied. Values are read as
/// TOML and fall back to bare strings.
pub fn parse(text: &str, overrides: &[String]) -> Result<Config, String> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| format!("config: {}", e.message()))?;
    for o in overrides {
        let (path, raw) = o.split_once('=').ok_or_else(|| format!("--set expects key=value, got '{o}'"))?;
        let value = format!("v = {raw}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        let keys: Vec<&str> = path.trim().split('.').collect();
        let mut node = &mut table;
        for k in &keys[..keys.len() - 1] {
            node = node
                .entry(k.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| format!("--set {path}: '{k}' is not a table"))?;
        }
        node.insert(keys[keys.len() - 1].to_string(), value);
    }
    table.try_into().map_err(|e: toml::de::Error| format!("config: {}", e.message()))
}

pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, String> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?,
        None => String::new(),
    };
    parse(&text, overrides)
}

impl Config {
    /// Reduced parameters: physical values first, then reduced overrides.
    pub fn params(&self) -> slowsound::Result<ReducedParams> {
        let base = match &self.physical {
            Some(p) => p.reduce()?,
            None => ReducedParams::reference(),
        };
        let r = &self.reduced;
        let mut p = ReducedParams::new(
            r.mass_ratio.unwrap_or(base.mass_ratio),
            r.coupling_ratio.unwrap_or(base.coupling_ratio),
            r.soliton_density.unwrap_or(base.soliton_density),
            r.depletion.unwrap_or(base.depletion),
            r.box_length.unwrap_or(base.box_length),
        )?;
        p.scales = base.scales;
        p.quasi1d_alpha = base.quasi1d_alpha;
        p.warnings = base.warnings;
        Ok(p)
    }

    /// Sound speed in mm/s for physical velocities.
    pub fn sound_speed_mm_per_s(&self, p: &ReducedParams) -> f64 {
        p.scales.map_or(self.response.sound_speed_mm_per_s, |s| s.sound_speed * 1e3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference() {
        let c = parse("", &[]).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.params().unwrap(), ReducedParams::reference());
    }

    #[test]
    fn overrides_create_tables_and_parse_values() {
        let c = parse("[reduced]\nmass_ratio = 2.0\n", &["reduced.coupling_ratio=1.1".into(), "model.delta_mode=fixed".into()]).unwrap();
        assert_eq!(c.reduced.mass_ratio, Some(2.0));
        assert_eq!(c.reduced.coupling_ratio, Some(1.1));
        assert_eq!(c.model.delta_mode, DeltaMode::Fixed);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse("[reduced]\nmass = 2.0\n", &[]).is_err());
        assert!(parse("", &["nonsense".into()]).is_err());
        assert!(parse("", &["reduced.mass_ratio.x=1".into()]).is_err());
    }

    #[test]
    fn reduced_values_win_over_physical() {
        let phys = PhysicalConfig::from_scales(0.7e-6, 1e-3, 50.0, 1.56, 1.2, 100e-6, 28.57);
        let mut c = Config { physical: Some(phys), ..Default::default() };
        let from_phys = c.params().unwrap();
        assert!((from_phys.coupling_ratio - 1.2).abs() < 1e-12);
        assert!((c.sound_speed_mm_per_s(&from_phys) - 1.0).abs() < 1e-9);
        c.reduced.coupling_ratio = Some(1.85);
        let p = c.params().unwrap();
        assert_eq!(p.coupling_ratio, 1.85);
        assert!((p.depletion - 50.0).abs() < 1e-9);
    }
}
