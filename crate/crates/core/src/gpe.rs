//! Split-step solvers for the condensate / impurity system
//!
//! ```text
//! i ∂t ψ1 = [−½ ∂x² + g11 (|ψ1|² − n0) + g12 |ψ2|²] ψ1
//! i ∂t ψ2 = [−∂x²/(2 r_m) + g12 (|ψ1|² − n0)] ψ2
//! ```
//!
//! With the soliton frozen the impurity sees the Pöschl-Teller well
//! `−ν(ν+1) sech²x / (2 r_m)`, whose levels are `−(ν − n)²/(2 r_m)` for
//! `n < ν`. Grids are periodic; a single dark soliton is imprinted together
//! with a partner at the box edge so the phase closes.

use crate::numerics::{FftPlan, Grid1D};
use crate::{Error, ImpurityStates, ReducedParams, Result, C64};
use serde::{Deserialize, Serialize};

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field1D {
    pub grid: Grid1D,
    pub values: Vec<C64>,
}

impl Field1D {
    pub fn new(grid: Grid1D, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(values.len()));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("field contains non-finite samples".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.coords().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `∫ |ψ|² dx`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// `∫ ψ* φ dx`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<C64>() * self.grid.dx()
    }

    pub fn normalize_to(&mut self, target: f64) {
        let n = self.norm();
        if n > 0.0 {
            let s = (target / n).sqrt();
            self.values.iter_mut().for_each(|z| *z *= s);
        }
    }

    fn symmetrize(&mut self, parity: f64) {
        let v = self.values.clone();
        for (i, z) in self.values.iter_mut().enumerate() {
            *z = 0.5 * (v[i] + parity * v[self.grid.mirror(i)]);
        }
    }
}

/// Kinetic operator `c k²` applied spectrally.
struct Kinetic {
    plan: FftPlan,
    k2: Vec<f64>,
}

impl Kinetic {
    fn new(grid: &Grid1D) -> Result<Self> {
        Ok(Self { plan: FftPlan::new(grid.len())?, k2: grid.wavenumbers().iter().map(|k| k * k).collect() })
    }

    fn apply_diag(&self, psi: &mut [C64], f: impl Fn(f64) -> C64) {
        self.plan.forward(psi);
        for (z, k2) in psi.iter_mut().zip(&self.k2) {
            *z *= f(*k2);
        }
        self.plan.inverse(psi);
    }

    /// `∫ c |∂ψ|² dx`.
    fn energy(&self, psi: &[C64], coeff: f64, dx: f64) -> f64 {
        let mut s = psi.to_vec();
        self.plan.forward(&mut s);
        let n = psi.len() as f64;
        s.iter().zip(&self.k2).map(|(z, k2)| z.norm_sqr() * k2).sum::<f64>() * coeff * dx / n
    }
}

/// `−ν(ν+1) sech²x/(2 r_m)`.
pub fn poschl_teller(nu: f64, mass_ratio: f64, x: f64) -> f64 {
    -nu * (nu + 1.0) / (2.0 * mass_ratio) / x.cosh().powi(2)
}

/// Dark soliton `√n0 tanh x`. Periodic grids get the partner kink at the box
/// edge, `−√n0 tanh(x) tanh(x − L/2) tanh(x + L/2)`.
pub fn imprint_soliton(grid: &Grid1D, params: &ReducedParams) -> Result<Field1D> {
    let l = grid.length();
    if l < 40.0 {
        return Err(Error::Domain(format!("soliton needs a box of at least 40 healing lengths, got {l}")));
    }
    let amp = params.depletion.sqrt();
    let half = 0.5 * l;
    let periodic = grid.is_periodic();
    Ok(Field1D::from_fn(*grid, |x| {
        let v = if periodic { -x.tanh() * (x - half).tanh() * (x + half).tanh() } else { x.tanh() };
        C64::new(amp * v, 0.0)
    }))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backreaction {
    /// Condensate evolves on its own; the impurity sees the frozen well.
    #[default]
    Off,
    /// Full two-way coupling.
    On,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledFields {
    pub condensate: Field1D,
    pub impurity: Field1D,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub steps: usize,
    pub norm_drift_condensate: f64,
    pub norm_drift_impurity: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
}

fn impurity_potential(fields: &CoupledFields, params: &ReducedParams, mode: Backreaction) -> Vec<f64> {
    match mode {
        Backreaction::Off => fields.impurity.grid.coords().into_iter().map(|x| poschl_teller(params.nu, params.mass_ratio, x)).collect(),
        Backreaction::On => fields.condensate.values.iter().map(|z| params.g12() * (z.norm_sqr() - params.depletion)).collect(),
    }
}

fn condensate_potential(fields: &CoupledFields, params: &ReducedParams, mode: Backreaction) -> Vec<f64> {
    let (g11, g12, n0) = (params.g11(), params.g12(), params.depletion);
    fields
        .condensate
        .values
        .iter()
        .zip(&fields.impurity.values)
        .map(|(a, b)| {
            let back = if mode == Backreaction::On { g12 * b.norm_sqr() } else { 0.0 };
            g11 * (a.norm_sqr() - n0) + back
        })
        .collect()
}

/// Energy functional. With backreaction off it is the sum of the condensate
/// energy and the impurity energy in the frozen well.
pub fn energy(fields: &CoupledFields, params: &ReducedParams, mode: Backreaction) -> Result<f64> {
    let grid = fields.condensate.grid;
    let kin = Kinetic::new(&grid)?;
    let dx = grid.dx();
    let (g11, n0) = (params.g11(), params.depletion);
    let mut e = kin.energy(&fields.condensate.values, 0.5, dx) + kin.energy(&fields.impurity.values, 0.5 / params.mass_ratio, dx);
    e += fields.condensate.values.iter().map(|z| 0.5 * g11 * (z.norm_sqr() - n0).powi(2)).sum::<f64>() * dx;
    let v2 = impurity_potential(fields, params, mode);
    e += fields.impurity.values.iter().zip(&v2).map(|(z, v)| v * z.norm_sqr()).sum::<f64>() * dx;
    Ok(e)
}

/// Strang split-step in real time. Requires `dt ≤ 0.1 dx²`; aborts with
/// [`Error::Unstable`] once either norm drifts by more than 1e-4.
pub fn evolve_real(
    fields: &mut CoupledFields,
    params: &ReducedParams,
    dt: f64,
    steps: usize,
    mode: Backreaction,
) -> Result<EvolutionReport> {
    let grid = fields.condensate.grid;
    if fields.impurity.grid != grid {
        return Err(Error::Domain("condensate and impurity grids differ".into()));
    }
    let dx = grid.dx();
    if !(dt > 0.0 && dt <= 0.1 * dx * dx * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!("dt = {dt} outside (0, 0.1 dx²] with dx = {dx}")));
    }
    let kin = Kinetic::new(&grid)?;
    let (n1, n2) = (fields.condensate.norm(), fields.impurity.norm());
    let e0 = energy(fields, params, mode)?;
    let r_m = params.mass_ratio;
    let half_kick = |f: &mut CoupledFields| {
        let v1 = condensate_potential(f, params, mode);
        let v2 = impurity_potential(f, params, mode);
        for (z, v) in f.condensate.values.iter_mut().zip(&v1) {
            *z *= C64::from_polar(1.0, -0.5 * dt * v);
        }
        for (z, v) in f.impurity.values.iter_mut().zip(&v2) {
            *z *= C64::from_polar(1.0, -0.5 * dt * v);
        }
    };
    let drift = |f: &CoupledFields| {
        let a = (f.condensate.norm() / n1 - 1.0).abs();
        let b = if n2 > 0.0 { (f.impurity.norm() / n2 - 1.0).abs() } else { 0.0 };
        (a, b)
    };
    for step in 0..steps {
        half_kick(fields);
        kin.apply_diag(&mut fields.condensate.values, |k2| C64::from_polar(1.0, -0.5 * dt * k2));
        kin.apply_diag(&mut fields.impurity.values, |k2| C64::from_polar(1.0, -0.5 * dt * k2 / r_m));
        half_kick(fields);
        if step % 100 == 99 || step + 1 == steps {
            let (a, b) = drift(fields);
            if a.max(b) > 1e-4 || !a.is_finite() || !b.is_finite() {
                return Err(Error::Unstable { drift: a.max(b) });
            }
        }
    }
    let (a, b) = drift(fields);
    Ok(EvolutionReport {
        steps,
        norm_drift_condensate: a,
        norm_drift_impurity: b,
        energy_initial: e0,
        energy_final: energy(fields, params, mode)?,
    })
}

/// Split-step propagation of a single linear Schrödinger field
/// `i ∂t ψ = [−∂x²/(2m) + V] ψ`.
pub fn evolve_linear(field: &mut Field1D, mass: f64, potential: &[f64], dt: f64, steps: usize) -> Result<()> {
    if potential.len() != field.values.len() {
        return Err(Error::Shape(potential.len()));
    }
    let kin = Kinetic::new(&field.grid)?;
    let half: Vec<C64> = potential.iter().map(|v| C64::from_polar(1.0, -0.5 * dt * v)).collect();
    for _ in 0..steps {
        field.values.iter_mut().zip(&half).for_each(|(z, p)| *z *= p);
        kin.apply_diag(&mut field.values, |k2| C64::from_polar(1.0, -0.5 * dt * k2 / mass));
        field.values.iter_mut().zip(&half).for_each(|(z, p)| *z *= p);
    }
    if field.values.iter().any(|z| !z.is_finite()) {
        return Err(Error::Divergence { t: dt * steps as f64 });
    }
    Ok(())
}

/// Settings for the imaginary-time eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenConfig {
    pub length: f64,
    pub points: usize,
    pub dtau: f64,
    /// Residual `‖(H − E)ψ‖` at which a state counts as converged.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self { length: 80.0, points: 2048, dtau: 0.2, tol: 1e-8, max_iter: 40_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub n: usize,
    pub energy: f64,
    /// `−(ν − n)²/(2 r_m)`.
    pub analytic_energy: f64,
    pub field: Field1D,
    /// `|⟨φ_num|φ_n⟩|²` with the exponent-α wavefunctions.
    pub overlap: f64,
    /// `|⟨φ_num|ψ_n⟩|²` with the exact Pöschl-Teller state, when normalizable.
    pub overlap_exact: Option<f64>,
    /// Fraction of the norm within `|x| < 10`.
    pub localized_fraction: f64,
    pub residual: f64,
    pub converged: bool,
}

impl EigenResult {
    pub fn relative_energy_error(&self) -> f64 {
        (self.energy / self.analytic_energy - 1.0).abs()
    }
}

/// Exact Pöschl-Teller state `n` for `n < ν`, unnormalized.
pub fn poschl_teller_state(nu: f64, n: usize, x: f64) -> Option<f64> {
    if (n as f64) >= nu {
        return None;
    }
    let (s, t) = (1.0 / x.cosh(), x.tanh());
    Some(match n {
        0 => s.powf(nu),
        1 => t * s.powf(nu - 1.0),
        2 => s.powf(nu - 2.0) * ((2.0 * nu - 1.0) * t * t - 1.0),
        _ => return None,
    })
}

fn overlap_sq(field: &Field1D, f: impl Fn(f64) -> f64) -> f64 {
    let mut g = Field1D::from_fn(field.grid, |x| C64::new(f(x), 0.0));
    g.normalize_to(1.0);
    field.inner(&g).norm_sqr() / field.norm()
}

fn rayleigh(psi: &Field1D, kin: &Kinetic, v: &[f64], mass: f64) -> (f64, f64) {
    let dx = psi.grid.dx();
    let mut hpsi = psi.values.clone();
    kin.apply_diag(&mut hpsi, |k2| C64::new(k2 / (2.0 * mass), 0.0));
    for (h, (z, vi)) in hpsi.iter_mut().zip(psi.values.iter().zip(v)) {
        *h += vi * z;
    }
    let norm = psi.norm();
    let e = psi.values.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * dx / norm;
    let res = hpsi.iter().zip(&psi.values).map(|(h, z)| (h - e * z).norm_sqr()).sum::<f64>() * dx / norm;
    (e, res.sqrt())
}

/// Lowest `n_states` eigenstates of `−∂x²/(2m) + V` on a periodic grid by
/// semi-implicit imaginary-time flow,
/// `(1 + dτ T) ψ' = ψ − dτ (V − E) ψ`, with Gram-Schmidt against the lower
/// states each step. `E` is the running Rayleigh quotient, so fixed points
/// are exact eigenstates. Trial states are `xⁿ e^{−x²/8}`.
pub fn relax_states(
    grid: &Grid1D,
    mass: f64,
    potential: &[f64],
    n_states: usize,
    cfg: &EigenConfig,
) -> Result<Vec<(Field1D, f64, f64, bool)>> {
    let kin = Kinetic::new(grid)?;
    let mut found: Vec<Field1D> = Vec::new();
    let mut out = Vec::new();
    for n in 0..n_states {
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut psi = Field1D::from_fn(*grid, |x| C64::new(x.powi(n as i32) * (-x * x / 8.0).exp(), 0.0));
        psi.normalize_to(1.0);
        let (mut e, mut res) = rayleigh(&psi, &kin, potential, mass);
        let mut converged = false;
        for it in 0..cfg.max_iter {
            let rhs: Vec<C64> = psi.values.iter().zip(potential).map(|(z, v)| z - cfg.dtau * (v - e) * z).collect();
            psi.values = rhs;
            kin.apply_diag(&mut psi.values, |k2| C64::new(1.0 / (1.0 + cfg.dtau * k2 / (2.0 * mass)), 0.0));
            psi.symmetrize(parity);
            for lower in &found {
                let c = lower.inner(&psi);
                psi.values.iter_mut().zip(&lower.values).for_each(|(z, l)| *z -= c * l);
            }
            psi.normalize_to(1.0);
            if it % 10 == 9 {
                (e, res) = rayleigh(&psi, &kin, potential, mass);
                if res < cfg.tol {
                    converged = true;
                    break;
                }
            } else {
                e = rayleigh(&psi, &kin, potential, mass).0;
            }
        }
        if !converged && n == 0 {
            return Err(Error::NotConverged { state: 0, residual: res });
        }
        found.push(psi.clone());
        out.push((psi, e, res, converged));
    }
    Ok(out)
}

/// Frozen-soliton impurity eigenstates compared with the analytic levels and
/// wavefunctions. States above the bound spectrum are returned with
/// `converged = false` when the flow has not settled.
pub fn imaginary_time_eigenstates(params: &ReducedParams, n_states: usize, cfg: &EigenConfig) -> Result<Vec<EigenResult>> {
    let grid = Grid1D::new(cfg.length, cfg.points, true)?;
    let (nu, r_m) = (params.nu, params.mass_ratio);
    let v: Vec<f64> = grid.coords().iter().map(|&x| poschl_teller(nu, r_m, x)).collect();
    let states = ImpurityStates::with_exponent(params.exponent_alpha)?;
    let states_raw = relax_states(&grid, r_m, &v, n_states, cfg)?;
    Ok(states_raw
        .into_iter()
        .enumerate()
        .map(|(n, (field, energy, residual, converged))| {
            let overlap = if n <= 2 { overlap_sq(&field, |x| states.phi(n, x)) } else { f64::NAN };
            let overlap_exact =
                poschl_teller_state(nu, n, 0.0).map(|_| overlap_sq(&field, |x| poschl_teller_state(nu, n, x).unwrap_or(0.0)));
            let dens = field.density();
            let inside: f64 = grid.coords().iter().zip(&dens).filter(|(x, _)| x.abs() < 10.0).map(|(_, d)| d).sum::<f64>() * grid.dx();
            EigenResult {
                n,
                energy,
                analytic_energy: crate::qutrit::energy(nu, r_m, n as u32),
                field,
                overlap,
                overlap_exact,
                localized_fraction: inside,
                residual,
                converged,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledGroundState {
    pub fields: CoupledFields,
    pub impurity_norm: f64,
    /// Relative L² change of the condensate density dip (|x| < L/4) against
    /// the bare soliton.
    pub deformation: f64,
    /// Deformation above 20%.
    pub condensation_flag: bool,
    pub iterations: usize,
}

/// Self-consistent imaginary-time relaxation of both fields with full
/// coupling. The condensate flows at fixed chemical potential with odd
/// parity (keeping the soliton node); the impurity is held at
/// `impurity_norm` with even parity.
pub fn coupled_ground_state(params: &ReducedParams, impurity_norm: f64, cfg: &EigenConfig) -> Result<CoupledGroundState> {
    let grid = Grid1D::new(cfg.length, cfg.points, true)?;
    let soliton = imprint_soliton(&grid, params)?;
    let kin = Kinetic::new(&grid)?;
    let mut fields =
        CoupledFields { condensate: soliton.clone(), impurity: Field1D::from_fn(grid, |x| C64::new((-x * x / 8.0).exp(), 0.0)) };
    fields.impurity.normalize_to(impurity_norm.max(0.0));
    let (g11, g12, n0, r_m) = (params.g11(), params.g12(), params.depletion, params.mass_ratio);
    let dt = cfg.dtau;
    let mut iterations = 0;
    let mut last = f64::INFINITY;
    for it in 0..cfg.max_iter {
        iterations = it + 1;
        let dens1 = fields.condensate.density();
        let v1: Vec<f64> = dens1.iter().zip(&fields.impurity.values).map(|(d, b)| g11 * (d - n0) + g12 * b.norm_sqr()).collect();
        let v2: Vec<f64> = dens1.iter().map(|d| g12 * (d - n0)).collect();
        let prev = fields.condensate.values.clone();
        let prev_imp = fields.impurity.values.clone();
        fields.condensate.values = fields.condensate.values.iter().zip(&v1).map(|(z, v)| z - dt * v * z).collect();
        kin.apply_diag(&mut fields.condensate.values, |k2| C64::new(1.0 / (1.0 + 0.5 * dt * k2), 0.0));
        fields.condensate.symmetrize(-1.0);
        if impurity_norm > 0.0 {
            let e2 = rayleigh(&fields.impurity, &kin, &v2, r_m).0;
            fields.impurity.values = fields.impurity.values.iter().zip(&v2).map(|(z, v)| z - dt * (v - e2) * z).collect();
            kin.apply_diag(&mut fields.impurity.values, |k2| C64::new(1.0 / (1.0 + dt * k2 / (2.0 * r_m)), 0.0));
            fields.impurity.symmetrize(1.0);
            fields.impurity.normalize_to(impurity_norm);
        }
        let delta = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        let change = delta(&fields.condensate.values, &prev) / (n0 * grid.len() as f64).sqrt()
            + delta(&fields.impurity.values, &prev_imp) / (impurity_norm.max(1e-300) * grid.len() as f64).sqrt();
        if change < 1e-13 && last < 1e-13 {
            break;
        }
        last = change;
    }
    let quarter = 0.25 * grid.length();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, x) in grid.coords().iter().enumerate() {
        if x.abs() < quarter {
            let a = fields.condensate.values[i].norm_sqr();
            let b = soliton.values[i].norm_sqr();
            num += (a - b).powi(2);
            den += (n0 - b).powi(2);
        }
    }
    let deformation = (num / den).sqrt();
    Ok(CoupledGroundState { fields, impurity_norm, deformation, condensation_flag: deformation > 0.2, iterations })
}

/// Bound-state frequency gaps from the autocorrelation spectrum of a
/// displaced Gaussian in the frozen well, returned as the spacing between the
/// two strongest spectral lines.
pub fn revival_frequency(params: &ReducedParams, grid: &Grid1D, dt: f64, samples: usize, stride: usize) -> Result<f64> {
    let v: Vec<f64> = grid.coords().iter().map(|&x| poschl_teller(params.nu, params.mass_ratio, x)).collect();
    let mut psi = Field1D::from_fn(*grid, |x| C64::new((-(x - 0.7).powi(2) / 2.0).exp(), 0.0));
    psi.normalize_to(1.0);
    let init = psi.clone();
    let n = samples.next_power_of_two();
    let mut corr = vec![C64::default(); n];
    for (j, c) in corr.iter_mut().enumerate().take(samples) {
        // Hann window against leakage.
        let w = 0.5 - 0.5 * (std::f64::consts::TAU * j as f64 / samples as f64).cos();
        *c = init.inner(&psi) * w;
        evolve_linear(&mut psi, params.mass_ratio, &v, dt, stride)?;
    }
    let plan = FftPlan::new(n)?;
    // ⟨ψ0|ψ(t)⟩ = Σ |c_j|² e^{−iE_j t}: lines at −E_j in the forward transform.
    plan.inverse(&mut corr);
    let spec: Vec<f64> = corr.iter().map(|z| z.norm()).collect();
    let step = std::f64::consts::TAU / (n as f64 * dt * stride as f64);
    let mut peaks: Vec<(f64, f64)> = (1..n - 1)
        .filter(|&i| spec[i] > spec[i - 1] && spec[i] >= spec[i + 1])
        .map(|i| {
            let (a, b, c) = (spec[i - 1], spec[i], spec[i + 1]);
            let den = a - 2.0 * b + c;
            let shift = if den == 0.0 { 0.0 } else { 0.5 * (a - c) / den };
            (b, (i as f64 + shift) * step)
        })
        .collect();
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    if peaks.len() < 2 {
        return Err(Error::Domain("autocorrelation spectrum has fewer than two lines".into()));
    }
    Ok((peaks[0].1 - peaks[1].1).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_at(nu: f64) -> ReducedParams {
        let r_m = 1.56;
        let r_g = crate::params::coupling_of_nu(nu, r_m).unwrap();
        ReducedParams::new(r_m, r_g, 0.2, 50.0, 100.0 / 0.7).unwrap()
    }

    #[test]
    fn soliton_profile() {
        let p = ReducedParams::reference();
        let g = Grid1D::new(40.0, 512, true).unwrap();
        let s = imprint_soliton(&g, &p).unwrap();
        let c = g.len() / 2;
        assert_eq!(s.values[c].re, 0.0);
        let x = g.x(c + 100);
        assert!((s.values[c + 100].re - 50f64.sqrt() * x.tanh()).abs() < 1e-8);
        assert!(imprint_soliton(&Grid1D::new(30.0, 512, true).unwrap(), &p).is_err());
        let half_depth = 1f64 / 2f64.sqrt();
        assert!((half_depth.atanh() - 0.881373587).abs() < 1e-9);
    }

    #[test]
    fn free_gaussian_spreads() {
        let g = Grid1D::new(200.0, 4096, true).unwrap();
        let s0: f64 = 1.5;
        let mut f = Field1D::from_fn(g, |x| C64::new((-x * x / (4.0 * s0 * s0)).exp(), 0.0));
        f.normalize_to(1.0);
        let (dt, steps, mass) = (0.01, 500, 1.3);
        evolve_linear(&mut f, mass, &vec![0.0; g.len()], dt, steps).unwrap();
        let t = dt * steps as f64;
        let var: f64 = g.coords().iter().zip(f.density()).map(|(x, d)| x * x * d).sum::<f64>() * g.dx();
        let expect = s0 * s0 + (t / (2.0 * mass * s0)).powi(2);
        assert!((var - expect).abs() < 1e-6, "{var} {expect}");
    }

    #[test]
    fn stationary_soliton() {
        let p = ReducedParams::reference();
        let g = Grid1D::new(40.0, 512, true).unwrap();
        let cond = imprint_soliton(&g, &p).unwrap();
        let d0 = cond.density();
        let imp = Field1D::from_fn(g, |_| C64::default());
        let mut f = CoupledFields { condensate: cond, impurity: imp };
        let dt = 0.05 * g.dx().powi(2);
        let steps = (50.0 / dt).round() as usize;
        evolve_real(&mut f, &p, dt, steps, Backreaction::Off).unwrap();
        let drift = f.condensate.density().iter().zip(&d0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(drift / p.depletion < 1e-8, "{drift}");
    }

    #[test]
    fn time_step_guard() {
        let p = ReducedParams::reference();
        let g = Grid1D::new(40.0, 512, true).unwrap();
        let cond = imprint_soliton(&g, &p).unwrap();
        let mut f = CoupledFields { condensate: cond, impurity: Field1D::from_fn(g, |_| C64::default()) };
        assert!(evolve_real(&mut f, &p, g.dx(), 1, Backreaction::Off).is_err());
    }

    #[test]
    fn ground_state_energy() {
        let p = params_at(1.2);
        let cfg = EigenConfig { points: 1024, ..Default::default() };
        let r = imaginary_time_eigenstates(&p, 2, &cfg).unwrap();
        assert!(r[0].converged && r[0].relative_energy_error() < 1e-6, "{:?}", r[0].energy);
        assert!(r[0].overlap_exact.unwrap() > 1.0 - 1e-8);
        assert!((r[0].field.inner(&r[1].field)).norm() < 1e-6);
        assert!(r[1].energy > r[0].energy);
    }

    #[test]
    fn pt_states_are_eigenfunctions() {
        // Finite-difference check of H ψ_n = E_n ψ_n for the closed forms.
        let (nu, m) = (2.7, 1.0);
        for n in 0..3 {
            let e = crate::qutrit::energy(nu, m, n as u32);
            for x in [-1.3, 0.2, 0.9] {
                let h = 1e-3;
                let f = |x: f64| poschl_teller_state(nu, n, x).unwrap();
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let hpsi = -d2 / (2.0 * m) + poschl_teller(nu, m, x) * f(x);
                assert!((hpsi - e * f(x)).abs() < 1e-5, "n={n} x={x}");
            }
        }
        assert!(poschl_teller_state(1.2, 2, 0.0).is_none());
    }

    #[test]
    fn zero_impurity_keeps_soliton() {
        let p = ReducedParams::reference();
        let cfg = EigenConfig { length: 40.0, points: 512, max_iter: 200, ..Default::default() };
        let r = coupled_ground_state(&p, 0.0, &cfg).unwrap();
        assert!(r.deformation < 1e-8, "{}", r.deformation);
    }
}
