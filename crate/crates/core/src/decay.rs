//! Spontaneous phonon emission: decay rates and the two-step cascade
//! |e2⟩ → |e1⟩ → |g⟩.

use crate::bogoliubov::{dispersion, resonant_wavevector};
use crate::coupling::{interband, CouplingMode};
use crate::numerics::rk4_evolve;
use crate::{Error, ImpurityStates, QutritSpectrum, ReducedParams, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which expression produces γ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateRoute {
    /// The closed-form rate expressions.
    #[default]
    Closed,
    /// Density-of-states integral over `|g(k_res)|²`.
    Integral,
}

impl std::str::FromStr for RateRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "integral" => Ok(Self::Integral),
            _ => Err(Error::Domain(format!("unknown rate route '{s}' (closed|integral)"))),
        }
    }
}

/// η = √(1 + ω²) in units of μ.
pub fn eta(omega: f64) -> f64 {
    (1.0 + omega * omega).sqrt()
}

// (η − 1)·csch²(π√(η − 1)/2) with η − 1 = ω²/(1 + η), finite as ω → 0.
fn envelope(omega: f64) -> f64 {
    let e = eta(omega);
    let x = omega * omega / (1.0 + e);
    if x == 0.0 {
        return 4.0 / (PI * PI);
    }
    let s = PI * x.sqrt() / 2.0;
    x / s.sinh().powi(2)
}

/// Closed-form rate for transition `which` (0 or 1) at gap `omega`.
///
/// `N0` is read as the depletion number `n0ξ`. Returns 0 for `omega ≤ 0`.
pub fn gamma_closed(params: &ReducedParams, omega: f64, which: usize) -> Result<f64> {
    if which > 1 {
        return Err(Error::Domain(format!("transition index {which} out of range")));
    }
    if !(omega > 0.0) {
        return Ok(0.0);
    }
    let e = eta(omega);
    let g12 = params.g12();
    let pre = PI * params.depletion * g12 * g12 / (e * (1.0 + e).sqrt());
    let body = if which == 0 {
        let b = (e - 5.0).powi(2) * (8.0 * e + 3.0 * (-2.0 + 5.0 * omega)).powi(2);
        b / 76_800.0
    } else {
        let w = omega;
        let inner = -1956.0 + w * w * (-591.0 + 56.0 * w + 29.0 * e) + 4.0 * (505.0 * e + 7.0 * w * (107.0 - 39.0 * e));
        inner * inner / 2.4e7
    };
    Ok(pre * body * envelope(omega))
}

/// Rate from the density-of-states integral, `(1/√2) √(1+η)/η |g(k_res)|²`.
pub fn gamma_integral(params: &ReducedParams, states: &ImpurityStates, omega: f64, which: usize, mode: CouplingMode) -> Result<f64> {
    let k = resonant_wavevector(omega)?;
    let g = interband(which, k, params, states, mode)?;
    let e = eta(omega);
    Ok((1.0 + e).sqrt() / (2f64.sqrt() * e) * g.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma0: f64,
    pub gamma1: f64,
    pub eta0: f64,
    pub eta1: f64,
    /// Set when a transition frequency is not positive.
    pub degenerate: bool,
}

impl DecayRates {
    /// Rates supplied directly (η left undefined).
    pub fn manual(gamma0: f64, gamma1: f64) -> Self {
        Self { gamma0, gamma1, eta0: f64::NAN, eta1: f64::NAN, degenerate: false }
    }

    pub fn compute(
        params: &ReducedParams,
        spectrum: &QutritSpectrum,
        states: &ImpurityStates,
        route: RateRoute,
        mode: CouplingMode,
    ) -> Result<Self> {
        let (w0, w1) = (spectrum.omega0, spectrum.omega1());
        let rate = |w: f64, i: usize| -> Result<f64> {
            match route {
                RateRoute::Closed => gamma_closed(params, w, i),
                RateRoute::Integral if w > 0.0 => gamma_integral(params, states, w, i, mode),
                RateRoute::Integral => Ok(0.0),
            }
        };
        Ok(Self { gamma0: rate(w0, 0)?, gamma1: rate(w1, 1)?, eta0: eta(w0), eta1: eta(w1), degenerate: !(w0 > 0.0 && w1 > 0.0) })
    }

    /// γ0/ω0 < 0.1 and γ1/ω1 < 0.1.
    pub fn rwa_valid(&self, spectrum: &QutritSpectrum) -> bool {
        self.gamma0 < 0.1 * spectrum.omega0 && self.gamma1 < 0.1 * spectrum.omega1()
    }
}

/// One point of a rate sweep over the coupling ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub coupling_ratio: f64,
    pub nu: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl RatePoint {
    pub fn ratios(&self) -> (f64, f64) {
        (self.gamma0 / self.omega0, self.gamma1 / self.omega1)
    }
}

/// Rates over coupling ratios, skipping points outside the qutrit window.
pub fn rate_sweep(base: &ReducedParams, ratios: &[f64], route: RateRoute, mode: CouplingMode) -> Result<Vec<RatePoint>> {
    let pts: Vec<Result<Option<RatePoint>>> = ratios
        .par_iter()
        .map(|&r| {
            let p = base.with_coupling_ratio(r)?;
            if !crate::qutrit::is_qutrit(p.nu) {
                return Ok(None);
            }
            let s = crate::qutrit::spectrum(&p)?;
            let st = ImpurityStates::new(&p)?;
            let d = DecayRates::compute(&p, &s, &st, route, mode)?;
            Ok(Some(RatePoint { coupling_ratio: r, nu: p.nu, omega0: s.omega0, omega1: s.omega1(), gamma0: d.gamma0, gamma1: d.gamma1 }))
        })
        .collect();
    pts.into_iter().filter_map(|r| r.transpose()).collect()
}

/// Detuning grids for the cascade, in frequency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeGrid {
    /// Half width of both detuning windows in units of γ0 + γ1.
    pub half_width: f64,
    /// Detuning spacing.
    pub spacing: f64,
}

impl CascadeGrid {
    pub fn for_rates(rates: &DecayRates) -> Self {
        Self { half_width: 80.0, spacing: rates.gamma0.min(rates.gamma1) / 5.0 }
    }
}

/// Amplitudes at one instant. The two-phonon amplitudes are summarized by
/// their marginals; single entries come from [`Cascade::b_kp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeAmplitudes {
    pub t: f64,
    pub a: C64,
    pub b_k: Vec<C64>,
    /// Σ_p |b_kp|² for each k.
    pub first_marginal: Vec<f64>,
    /// Σ_k |b_kp|² for each p.
    pub second_marginal: Vec<f64>,
}

impl CascadeAmplitudes {
    pub fn single_norm(&self) -> f64 {
        self.b_k.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn pair_norm(&self) -> f64 {
        self.first_marginal.iter().sum()
    }

    pub fn total_norm(&self) -> f64 {
        self.a.norm_sqr() + self.single_norm() + self.pair_norm()
    }
}

// (e^{zt} − 1)/z without cancellation at small |zt|.
fn phi1(z: C64, t: f64) -> C64 {
    let zt = z * t;
    if zt.norm() < 1e-4 {
        t * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt * zt * zt / 24.0)
    } else {
        ((zt).exp() - 1.0) / z
    }
}

/// Weisskopf-Wigner cascade on discrete detuning grids.
///
/// Each grid mode couples with `|G|² = γ Δω/(2π)`, the flat-continuum
/// weight that reproduces the rate γ. Detunings are `Δ_k = ω_k − ω1` for the
/// first phonon and `Δ_p = ω_p − ω0` for the second.
#[derive(Debug, Clone)]
pub struct Cascade {
    pub gamma0: f64,
    pub gamma1: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    g_upper: f64,
    g_lower: f64,
}

impl Cascade {
    pub fn new(spectrum: &QutritSpectrum, rates: &DecayRates, grid: CascadeGrid) -> Result<Self> {
        let (g0, g1) = (rates.gamma0, rates.gamma1);
        if !(g0 > 0.0 && g1 > 0.0) {
            return Err(Error::Domain("cascade needs positive decay rates".into()));
        }
        let limit = g0.min(g1) / 5.0;
        if !(grid.spacing > 0.0) || grid.spacing > limit * (1.0 + 1e-12) {
            let k1 = resonant_wavevector(spectrum.omega1())?;
            let slope = 2.0 * k1 * (k1 * k1 + 1.0) / dispersion(k1);
            return Err(Error::Resolution { spacing: grid.spacing, suggested_dk: limit / slope });
        }
        let w = grid.half_width * (g0 + g1);
        let n = (w / grid.spacing).floor() as i64;
        let axis: Vec<f64> = (-n..=n).map(|i| i as f64 * grid.spacing).collect();
        Ok(Self {
            gamma0: g0,
            gamma1: g1,
            omega0: spectrum.omega0,
            omega1: spectrum.omega1(),
            first: axis.clone(),
            second: axis,
            g_upper: (g1 * grid.spacing / (2.0 * PI)).sqrt(),
            g_lower: (g0 * grid.spacing / (2.0 * PI)).sqrt(),
        })
    }

    /// Wavevectors of the first-phonon modes.
    pub fn first_wavevectors(&self) -> Result<Vec<f64>> {
        self.first.iter().map(|d| resonant_wavevector(self.omega1 + d)).collect()
    }

    pub fn second_wavevectors(&self) -> Result<Vec<f64>> {
        self.second.iter().map(|d| resonant_wavevector(self.omega0 + d)).collect()
    }

    fn d(&self, dk: f64) -> C64 {
        C64::new(-(self.gamma1 - self.gamma0) / 2.0, dk)
    }

    pub fn a(&self, t: f64) -> C64 {
        C64::new((-self.gamma1 * t / 2.0).exp(), 0.0)
    }

    pub fn b_k(&self, t: f64, i: usize) -> C64 {
        let d = self.d(self.first[i]);
        C64::new(0.0, -self.g_upper) * (-self.gamma0 * t / 2.0).exp() * phi1(d, t)
    }

    pub fn b_kp(&self, t: f64, i: usize, j: usize) -> C64 {
        let (dk, dp) = (self.first[i], self.second[j]);
        let z1 = C64::new(-self.gamma0 / 2.0, dp);
        let z2 = C64::new(-self.gamma1 / 2.0, dk + dp);
        let mut d = z2 - z1;
        if d.norm() < 1e-12 * (self.gamma0 + self.gamma1) {
            d += C64::new(1e-12 * (self.gamma0 + self.gamma1), 0.0);
        }
        -(phi1(z2, t) - phi1(z1, t)) / d * (self.g_upper * self.g_lower)
    }

    /// `b_kp` at `t → ∞`.
    pub fn b_kp_final(&self, i: usize, j: usize) -> C64 {
        let (dk, dp) = (self.first[i], self.second[j]);
        let z1 = C64::new(-self.gamma0 / 2.0, dp);
        let z2 = C64::new(-self.gamma1 / 2.0, dk + dp);
        -(self.g_upper * self.g_lower) / (z1 * z2)
    }

    fn marginals<F: Fn(usize, usize) -> C64 + Sync>(&self, f: F) -> (Vec<f64>, Vec<f64>) {
        let rows: Vec<Vec<f64>> =
            (0..self.first.len()).into_par_iter().map(|i| (0..self.second.len()).map(|j| f(i, j).norm_sqr()).collect()).collect();
        let first = rows.iter().map(|r| r.iter().sum()).collect();
        let mut second = vec![0.0; self.second.len()];
        for r in &rows {
            for (s, v) in second.iter_mut().zip(r) {
                *s += v;
            }
        }
        (first, second)
    }

    pub fn snapshot(&self, t: f64) -> CascadeAmplitudes {
        // Per-axis phase factors, reused across the (k, p) plane.
        let ek: Vec<C64> = self.first.iter().map(|d| C64::from_polar(1.0, d * t)).collect();
        let ep: Vec<C64> = self.second.iter().map(|d| C64::from_polar(1.0, d * t)).collect();
        let (d0, d1) = ((-self.gamma0 * t / 2.0).exp(), (-self.gamma1 * t / 2.0).exp());
        let gg = self.g_upper * self.g_lower;
        let pair = |i: usize, j: usize| {
            let (dk, dp) = (self.first[i], self.second[j]);
            let z1 = C64::new(-self.gamma0 / 2.0, dp);
            let z2 = C64::new(-self.gamma1 / 2.0, dk + dp);
            let d = z2 - z1;
            if (z1 * t).norm() < 1e-3 || (z2 * t).norm() < 1e-3 || d.norm() < 1e-9 * (self.gamma0 + self.gamma1) {
                return self.b_kp(t, i, j);
            }
            let p1 = (ep[j] * d0 - 1.0) / z1;
            let p2 = (ek[i] * ep[j] * d1 - 1.0) / z2;
            -(p2 - p1) / d * gg
        };
        let (first_marginal, second_marginal) = self.marginals(pair);
        CascadeAmplitudes { t, a: self.a(t), b_k: (0..self.first.len()).map(|i| self.b_k(t, i)).collect(), first_marginal, second_marginal }
    }

    /// Marginals of the final two-phonon state.
    pub fn final_marginals(&self) -> (Vec<f64>, Vec<f64>) {
        self.marginals(|i, j| self.b_kp_final(i, j))
    }

    /// Direct RK4 integration of the amplitude equations for the listed
    /// `(k, p)` index pairs: `ȧ = −γ1 a/2`,
    /// `ḃ_k = −i G1 a e^{iΔ_k t} − γ0 b_k/2`, `ḃ_kp = −i G0 b_k e^{iΔ_p t}`.
    /// Returns `(a, b_k, b_kp)` per pair.
    pub fn integrate_modes(&self, t: f64, pairs: &[(usize, usize)], steps: usize) -> Result<Vec<(C64, C64, C64)>> {
        let (g0, g1) = (self.gamma0, self.gamma1);
        let (gu, gl) = (self.g_upper, self.g_lower);
        pairs
            .iter()
            .map(|&(i, j)| {
                let (dk, dp) = (self.first[i], self.second[j]);
                let y = rk4_evolve(
                    vec![C64::new(1.0, 0.0), C64::default(), C64::default()],
                    |s, y, dy| {
                        let mi = C64::new(0.0, -1.0);
                        dy[0] = -g1 / 2.0 * y[0];
                        dy[1] = mi * gu * y[0] * C64::from_polar(1.0, dk * s) - g0 / 2.0 * y[1];
                        dy[2] = mi * gl * y[1] * C64::from_polar(1.0, dp * s);
                    },
                    0.0,
                    t,
                    t / steps as f64,
                )?;
                Ok((y[0], y[1], y[2]))
            })
            .collect()
    }
}

/// Full width at half maximum of a sampled peak, with linear interpolation
/// at the crossings.
pub fn fwhm(x: &[f64], y: &[f64]) -> Option<f64> {
    let (imax, &ymax) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    let half = ymax / 2.0;
    let cross = |range: Box<dyn Iterator<Item = usize>>| {
        let mut prev = imax;
        for i in range {
            if y[i] < half {
                let f = (y[prev] - half) / (y[prev] - y[i]);
                return Some(x[prev] + f * (x[i] - x[prev]));
            }
            prev = i;
        }
        None
    };
    let right = cross(Box::new(imax + 1..y.len()))?;
    let left = cross(Box::new((0..imax).rev()))?;
    Some(right - left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qutrit::spectrum;

    fn reference() -> (ReducedParams, QutritSpectrum, ImpurityStates) {
        let p = ReducedParams::reference();
        let s = spectrum(&p).unwrap();
        let st = ImpurityStates::new(&p).unwrap();
        (p, s, st)
    }

    #[test]
    fn closed_over_integral_is_constant() {
        // With k² = η − 1 and ε = ω both expressions share the same bracket;
        // the ratio is fixed by the numeric prefactors alone.
        let (p, _, st) = reference();
        for w in [0.05, 0.2, 0.5, 1.3] {
            let c0 = gamma_closed(&p, w, 0).unwrap();
            let i0 = gamma_integral(&p, &st, w, 0, CouplingMode::Closed).unwrap();
            assert!((c0 / i0 - 1.0 / 2f64.sqrt()).abs() < 1e-10, "{}", c0 / i0);
            let c1 = gamma_closed(&p, w, 1).unwrap();
            let i1 = gamma_integral(&p, &st, w, 1, CouplingMode::Closed).unwrap();
            let expect = 2.0 * 896.0 * 896.0 * 15.0 / 2.4e7 / 2f64.sqrt();
            assert!((c1 / i1 - expect).abs() < 1e-10, "{}", c1 / i1);
        }
    }

    #[test]
    fn small_gap_limit_is_continuous() {
        let (p, _, _) = reference();
        let tiny = gamma_closed(&p, 1e-9, 0).unwrap();
        let small = gamma_closed(&p, 1e-5, 0).unwrap();
        assert!(tiny > 0.0 && (tiny / small - 1.0).abs() < 1e-3);
        assert_eq!(gamma_closed(&p, 0.0, 0).unwrap(), 0.0);
        assert!((envelope(1e-9) - 4.0 / (PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn quadratic_scaling() {
        let (p, s, _) = reference();
        let q = ReducedParams { coupling_ratio: 2.0 * p.coupling_ratio, ..p.clone() };
        let r = gamma_closed(&q, s.omega0, 0).unwrap() / gamma_closed(&p, s.omega0, 0).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rates_are_small() {
        let (p, s, st) = reference();
        let r = DecayRates::compute(&p, &s, &st, RateRoute::Closed, CouplingMode::Closed).unwrap();
        assert!(r.gamma0 > 0.0 && r.gamma1 > 0.0);
        assert!(r.rwa_valid(&s));
    }

    #[test]
    fn sweep_skips_non_qutrits() {
        let p = ReducedParams::reference();
        let pts = rate_sweep(&p, &[0.5, 1.0, 1.5, 1.88, 2.5], RateRoute::Closed, CouplingMode::Closed).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.windows(2).all(|w| w[1].gamma0 > w[0].gamma0));
    }

    #[test]
    fn cascade_initial_and_exponential() {
        let s = QutritSpectrum::evaluate(1.2, 1.56);
        let r = DecayRates::manual(2e-3, 1e-3);
        let c = Cascade::new(&s, &r, CascadeGrid { half_width: 10.0, spacing: 1e-4 }).unwrap();
        let z = c.snapshot(0.0);
        assert_eq!(z.a, C64::new(1.0, 0.0));
        assert!(z.single_norm() == 0.0 && z.pair_norm() == 0.0);
        assert!((c.a(1.0 / r.gamma1).norm_sqr() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn coarse_grid_rejected() {
        let s = QutritSpectrum::evaluate(1.2, 1.56);
        let r = DecayRates::manual(2e-3, 1e-3);
        let e = Cascade::new(&s, &r, CascadeGrid { half_width: 10.0, spacing: 3e-4 }).unwrap_err();
        assert!(matches!(e, Error::Resolution { .. }));
    }

    #[test]
    fn closed_amplitudes_solve_the_equations() {
        let s = QutritSpectrum::evaluate(1.2, 1.56);
        let r = DecayRates::manual(2e-3, 7e-4);
        let c = Cascade::new(&s, &r, CascadeGrid { half_width: 10.0, spacing: 1e-4 }).unwrap();
        let n = c.first.len();
        let pairs = [(n / 2, n / 2), (n / 3, 2 * n / 3), (0, n - 1), (n / 2 + 3, n / 2 - 7)];
        let t = 1.0 / r.gamma1;
        let ode = c.integrate_modes(t, &pairs, 4000).unwrap();
        let snap_scale = c.g_upper * c.g_lower / (r.gamma0 * r.gamma1);
        for (&(i, j), (a, bk, bkp)) in pairs.iter().zip(ode) {
            assert!((a - c.a(t)).norm() < 1e-10);
            assert!((bk - c.b_k(t, i)).norm() < 1e-8 * c.g_upper / r.gamma0);
            assert!((bkp - c.b_kp(t, i, j)).norm() < 1e-8 * snap_scale);
        }
    }

    #[test]
    fn fwhm_of_lorentzian() {
        let x: Vec<f64> = (0..4001).map(|i| -20.0 + 0.01 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 / (v * v + 0.25)).collect();
        assert!((fwhm(&x, &y).unwrap() - 1.0).abs() < 1e-4);
    }
}
