//! Qutrit-phonon coupling constants.
//!
//! Two routes: the closed forms `g0_closed`, `g1_closed` and the overlap
//! `g_{ll'}(k) = g12 ∫ φ_l φ_l' ψ_sol (u_k + v_k) dx` with
//! `ψ_sol = √(n0ξ) tanh x`. Only `|g|²` reaches observables. The box length
//! that would normalize the modes cancels against the prefactor of the decay
//! rate, so neither route carries it.

use crate::bogoliubov::{dispersion, BogoliubovMode};
use crate::numerics::{integrate_line, QUAD_TOL};
use crate::{Error, ImpurityStates, ReducedParams, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingMode {
    #[default]
    Closed,
    Quadrature,
}

impl std::str::FromStr for CouplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "quadrature" => Ok(Self::Quadrature),
            _ => Err(Error::Domain(format!("unknown coupling mode '{s}' (closed|quadrature)"))),
        }
    }
}

fn csch(x: f64) -> f64 {
    1.0 / x.sinh()
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("coupling needs k > 0, got {k}")))
    }
}

/// Closed form for the |g⟩ ↔ |e1⟩ coupling.
pub fn g0_closed(k: f64, params: &ReducedParams) -> Result<C64> {
    check_k(k)?;
    let eps = dispersion(k);
    let k2 = k * k;
    let pre = params.g12() * k2 / (80.0 * eps) * (params.depletion * PI / 6.0).sqrt();
    let body = (2.0 + 8.0 * k2 + 15.0 * eps) * (k2 - 4.0) * csch(k * PI / 2.0);
    Ok(C64::new(0.0, pre * body))
}

/// Closed form for the |e1⟩ ↔ |e2⟩ coupling.
pub fn g1_closed(k: f64, params: &ReducedParams) -> Result<C64> {
    check_k(k)?;
    let eps = dispersion(k);
    let (k2, k4, k6) = (k * k, k.powi(4), k.powi(6));
    let pre = params.g12() * k2 / (896.0 * eps) * (params.depletion * PI / 15.0).sqrt();
    let body = 28.0 * (2.0 * k4 - 35.0 * k2 + 68.0) * eps + (29.0 * k6 - 504.0 * k4 + 896.0 * k2 + 64.0);
    Ok(C64::new(0.0, pre * body * csch(k * PI / 2.0)))
}

/// Overlap integral between impurity states `l`, `lp` and mode `k`.
pub fn g_quadrature(l: usize, lp: usize, k: f64, params: &ReducedParams, states: &ImpurityStates) -> Result<C64> {
    check_k(k)?;
    if l > 2 || lp > 2 {
        return Err(Error::Domain(format!("state indices must be 0..=2, got ({l}, {lp})")));
    }
    let mode = BogoliubovMode::new(k)?;
    let amp = params.depletion.sqrt();
    let overlap = integrate_line(
        |x| {
            let w = states.phi(l, x) * states.phi(lp, x) * amp * x.tanh();
            (mode.u(x) + mode.v(x)) * w
        },
        QUAD_TOL,
    )?;
    Ok(overlap * params.g12())
}

/// Interband coupling `i` (0: |g⟩↔|e1⟩, 1: |e1⟩↔|e2⟩) in the requested mode.
pub fn interband(i: usize, k: f64, params: &ReducedParams, states: &ImpurityStates, mode: CouplingMode) -> Result<C64> {
    match (mode, i) {
        (CouplingMode::Closed, 0) => g0_closed(k, params),
        (CouplingMode::Closed, 1) => g1_closed(k, params),
        (CouplingMode::Quadrature, 0) => g_quadrature(0, 1, k, params, states),
        (CouplingMode::Quadrature, 1) => g_quadrature(1, 2, k, params, states),
        _ => Err(Error::Domain(format!("transition index {i} out of range"))),
    }
}

/// All couplings at one wavevector. The intraband entries are always
/// overlap integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    pub k: f64,
    pub g0: C64,
    pub g1: C64,
    pub g00: C64,
    pub g11: C64,
    pub g22: C64,
    /// Provenance of `g0` and `g1`.
    pub mode: CouplingMode,
}

impl CouplingSet {
    pub fn compute(k: f64, params: &ReducedParams, states: &ImpurityStates, mode: CouplingMode) -> Result<Self> {
        Ok(Self {
            k,
            g0: interband(0, k, params, states, mode)?,
            g1: interband(1, k, params, states, mode)?,
            g00: g_quadrature(0, 0, k, params, states)?,
            g11: g_quadrature(1, 1, k, params, states)?,
            g22: g_quadrature(2, 2, k, params, states)?,
            mode,
        })
    }

    pub fn max_intraband(&self) -> f64 {
        self.g00.norm().max(self.g11.norm()).max(self.g22.norm())
    }
}

/// [`CouplingSet`] over a list of wavevectors, evaluated in parallel.
pub fn sweep(ks: &[f64], params: &ReducedParams, states: &ImpurityStates, mode: CouplingMode) -> Result<Vec<CouplingSet>> {
    ks.par_iter().map(|&k| CouplingSet::compute(k, params, states, mode)).collect()
}

/// Location of the largest |value| on a sampled curve, refined by a parabola
/// through the neighbouring samples.
pub fn peak_location(ks: &[f64], values: &[f64]) -> f64 {
    let i = values.iter().enumerate().fold(0, |best, (j, v)| if v.abs() > values[best].abs() { j } else { best });
    if i == 0 || i + 1 == values.len() {
        return ks[i];
    }
    let (a, b, c) = (values[i - 1].abs(), values[i].abs(), values[i + 1].abs());
    let h = ks[i + 1] - ks[i];
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        ks[i]
    } else {
        ks[i] + 0.5 * h * (a - c) / denom
    }
}
