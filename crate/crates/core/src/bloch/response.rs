use super::DeltaMode;
use crate::bogoliubov::{dispersion, resonant_wavevector};
use crate::coupling::{interband, CouplingMode};
use crate::decay::DecayRates;
use crate::{Error, ImpurityStates, QutritSpectrum, ReducedParams, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The soliton gas as a probe medium.
///
/// `χ(Δ_p) = i S / [(γ0 − 2iΔ_p) + Ω_c²/(γ1 − 2iδ)]` with strength
/// `S = Nξ |g0(k_res)|² / ε(k_res)` and `k_res` resonant with `ω0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub strength: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub omega0: f64,
    pub k_res: f64,
}

impl Medium {
    pub fn new(
        params: &ReducedParams,
        spectrum: &QutritSpectrum,
        rates: &DecayRates,
        states: &ImpurityStates,
        mode: CouplingMode,
    ) -> Result<Self> {
        let k_res = resonant_wavevector(spectrum.omega0)?;
        let g0 = interband(0, k_res, params, states, mode)?;
        Ok(Self {
            strength: params.soliton_density * g0.norm_sqr() / dispersion(k_res),
            gamma0: rates.gamma0,
            gamma1: rates.gamma1,
            omega0: spectrum.omega0,
            k_res,
        })
    }

    fn upper(&self, delta_p: f64, mode: DeltaMode) -> C64 {
        C64::new(self.gamma1, -2.0 * mode.two_photon(delta_p))
    }

    pub fn denominator(&self, delta_p: f64, omega_c: f64, mode: DeltaMode) -> C64 {
        C64::new(self.gamma0, -2.0 * delta_p) + omega_c * omega_c / self.upper(delta_p, mode)
    }

    pub fn chi(&self, delta_p: f64, omega_c: f64, mode: DeltaMode) -> C64 {
        C64::new(0.0, self.strength) / self.denominator(delta_p, omega_c, mode)
    }

    /// `dχ/dΔ_p`.
    pub fn chi_derivative(&self, delta_p: f64, omega_c: f64, mode: DeltaMode) -> C64 {
        let u = self.upper(delta_p, mode);
        let slope = match mode {
            DeltaMode::Track => 1.0,
            DeltaMode::Fixed => 0.0,
        };
        let dd = C64::new(0.0, -2.0) + omega_c * omega_c * C64::new(0.0, 2.0 * slope) / (u * u);
        let d = self.denominator(delta_p, omega_c, mode);
        -C64::new(0.0, self.strength) * dd / (d * d)
    }

    /// Group velocity in units of `c_s` from the analytic derivative, `None`
    /// where it is not positive.
    pub fn group_velocity(&self, delta_p: f64, omega_c: f64, mode: DeltaMode) -> Option<f64> {
        let chi = self.chi(delta_p, omega_c, mode).re;
        let d = self.chi_derivative(delta_p, omega_c, mode).re;
        group_velocity_from(chi, d, self.omega0 + delta_p)
    }
}

fn group_velocity_from(chi_r: f64, dchi_r: f64, omega_p: f64) -> Option<f64> {
    let denom = 1.0 + chi_r / 2.0 + omega_p / 2.0 * dchi_r;
    (denom > 0.0 && denom.is_finite()).then(|| 1.0 / denom)
}

/// Uniform probe-detuning sweep, half width in units of γ0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub half_width: f64,
    pub points: usize,
}

impl Default for Sweep {
    fn default() -> Self {
        Self { half_width: 10.0, points: 2001 }
    }
}

impl Sweep {
    pub fn values(&self, gamma0: f64) -> Vec<f64> {
        let n = self.points.max(2);
        let w = self.half_width * gamma0;
        (0..n).map(|i| -w + 2.0 * w * i as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseSpectrum {
    pub omega_c: f64,
    pub delta_mode: DeltaMode,
    pub delta_p: Vec<f64>,
    pub chi: Vec<C64>,
    /// `n = √(1 + χ)`.
    pub index: Vec<C64>,
    /// Group velocity in units of `c_s` from central differences of `Re χ`;
    /// `None` where the expression is not positive or at the sweep ends.
    pub group_velocity: Vec<Option<f64>>,
    pub omega0: f64,
}

impl ResponseSpectrum {
    pub fn absorption(&self) -> Vec<f64> {
        self.chi.iter().map(|c| c.im).collect()
    }

    pub fn dispersion(&self) -> Vec<f64> {
        self.chi.iter().map(|c| c.re).collect()
    }

    fn centre(&self) -> usize {
        self.delta_p.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, _)| i).unwrap_or(0)
    }

    /// Number of masked group-velocity points.
    pub fn masked(&self) -> usize {
        self.group_velocity.iter().filter(|v| v.is_none()).count()
    }
}

/// χ, n and v_g over a sweep of probe detunings.
pub fn susceptibility(medium: &Medium, delta_p: &[f64], omega_c: f64, mode: DeltaMode) -> ResponseSpectrum {
    let chi: Vec<C64> = delta_p.par_iter().map(|&d| medium.chi(d, omega_c, mode)).collect();
    let index = chi.iter().map(|c| (1.0 + c).sqrt()).collect();
    let n = delta_p.len();
    let group_velocity = (0..n)
        .map(|i| {
            if i == 0 || i + 1 == n {
                return None;
            }
            let d = (chi[i + 1].re - chi[i - 1].re) / (delta_p[i + 1] - delta_p[i - 1]);
            group_velocity_from(chi[i].re, d, medium.omega0 + delta_p[i])
        })
        .collect();
    ResponseSpectrum { omega_c, delta_mode: mode, delta_p: delta_p.to_vec(), chi, index, group_velocity, omega0: medium.omega0 }
}

/// Smallest unmasked group velocity and its detuning.
pub fn min_group_velocity(spectrum: &ResponseSpectrum) -> Option<(f64, f64)> {
    spectrum.delta_p.iter().zip(&spectrum.group_velocity).filter_map(|(d, v)| v.map(|v| (*d, v))).min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Local maxima of `y` above 1% of its largest value, refined by parabolas.
pub fn find_peaks(x: &[f64], y: &[f64]) -> Vec<f64> {
    let top = y.iter().copied().fold(f64::MIN, f64::max);
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.01 * top)
        .map(|i| {
            let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
            let den = a - 2.0 * b + c;
            let h = x[i + 1] - x[i];
            if den == 0.0 {
                x[i]
            } else {
                x[i] + 0.5 * h * (a - c) / den
            }
        })
        .collect()
}

/// Full width at half depth of the absorption dip at `Δ_p = 0`, measured
/// between the centre value and the lower of the two flanking maxima.
pub fn transparency_width(spectrum: &ResponseSpectrum) -> Result<f64> {
    let y = spectrum.absorption();
    let x = &spectrum.delta_p;
    let c = spectrum.centre();
    if c == 0 || c + 1 == y.len() {
        return Err(Error::NoTransparency);
    }
    let mut left = c;
    while left > 0 && y[left - 1] >= y[left] {
        left -= 1;
    }
    let mut right = c;
    while right + 1 < y.len() && y[right + 1] >= y[right] {
        right += 1;
    }
    if left == c || right == c || left == 0 || right + 1 == y.len() {
        return Err(Error::NoTransparency);
    }
    let rim = y[left].min(y[right]);
    let level = y[c] + 0.5 * (rim - y[c]);
    let cross = |from: usize, to: usize| {
        let step: isize = if to > from { 1 } else { -1 };
        let mut i = from as isize;
        while i != to as isize {
            let j = i + step;
            let (yi, yj) = (y[i as usize], y[j as usize]);
            if (yi - level) * (yj - level) <= 0.0 && yi != yj {
                let f = (level - yi) / (yj - yi);
                return x[i as usize] + f * (x[j as usize] - x[i as usize]);
            }
            i = j;
        }
        x[to]
    };
    Ok(cross(c, right) - cross(c, left))
}

/// `Re χ` reconstructed from `Im χ` on a uniform grid by the principal-value
/// Hilbert transform `(1/π) P∫ Im χ(x')/(x' − x) dx'`. Endpoints return NaN.
pub fn kramers_kronig(x: &[f64], im: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (a, b) = (x[0], x[n - 1]);
    (0..n)
        .into_par_iter()
        .map(|i| {
            if i == 0 || i + 1 == n {
                return f64::NAN;
            }
            let fi = im[i];
            let slope = (im[i + 1] - im[i - 1]) / (x[i + 1] - x[i - 1]);
            let g = |j: usize| if j == i { slope } else { (im[j] - fi) / (x[j] - x[i]) };
            let mut s = 0.0;
            for j in 0..n - 1 {
                s += 0.5 * (g(j) + g(j + 1)) * (x[j + 1] - x[j]);
            }
            (s + fi * ((b - x[i]) / (x[i] - a)).ln()) / std::f64::consts::PI
        })
        .collect()
}

/// Relative RMS difference between `Re χ` and its Kramers-Kronig
/// reconstruction over the interior of the sweep.
pub fn kramers_kronig_error(spectrum: &ResponseSpectrum) -> f64 {
    let re = spectrum.dispersion();
    let kk = kramers_kronig(&spectrum.delta_p, &spectrum.absorption());
    let n = re.len();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..n - 1 {
        num += (kk[i] - re[i]).powi(2);
        den += re[i] * re[i];
    }
    (num / den).sqrt()
}

/// Quoted box-potential estimates the computed values are set against.
pub const QUOTED_MIN_VG_OVER_CS: f64 = 0.06;
pub const QUOTED_PULSE_VG_UM_PER_S: f64 = 5.0;
pub const QUOTED_K_RES: f64 = 0.9;

/// Headline slow-sound numbers for one control strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlowSoundSummary {
    pub omega_c: f64,
    pub min_vg_over_cs: Option<f64>,
    pub min_vg_detuning: Option<f64>,
    pub centre_vg_over_cs: Option<f64>,
    pub sound_speed_mm_per_s: f64,
    pub min_vg_um_per_s: Option<f64>,
    pub quoted_min_vg_over_cs: f64,
    pub quoted_pulse_vg_um_per_s: f64,
    pub k_res: f64,
    pub quoted_k_res: f64,
    pub gamma0_over_omega0: f64,
    pub gamma1_over_omega1: f64,
}

impl SlowSoundSummary {
    pub fn new(medium: &Medium, spectrum: &ResponseSpectrum, omega1: f64, sound_speed_mm_per_s: f64) -> Self {
        let min = min_group_velocity(spectrum);
        let v = min.map(|m| m.1);
        Self {
            omega_c: spectrum.omega_c,
            min_vg_over_cs: v,
            min_vg_detuning: min.map(|m| m.0),
            centre_vg_over_cs: medium.group_velocity(0.0, spectrum.omega_c, spectrum.delta_mode),
            sound_speed_mm_per_s,
            min_vg_um_per_s: v.map(|v| v * sound_speed_mm_per_s * 1e3),
            quoted_min_vg_over_cs: QUOTED_MIN_VG_OVER_CS,
            quoted_pulse_vg_um_per_s: QUOTED_PULSE_VG_UM_PER_S,
            k_res: medium.k_res,
            quoted_k_res: QUOTED_K_RES,
            gamma0_over_omega0: medium.gamma0 / medium.omega0,
            gamma1_over_omega1: medium.gamma1 / omega1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub omega: f64,
    /// Bare Bogoliubov wavevector at `omega`.
    pub k_bare: f64,
    /// Dressed wavevector `Re n · k_bare`.
    pub q: f64,
}

/// Dressed probe dispersion near `ω0` over `ω = ω0 + Δ_p`.
pub fn dispersion_curve(medium: &Medium, delta_p: &[f64], omega_c: f64, mode: DeltaMode) -> Result<Vec<DispersionPoint>> {
    delta_p
        .iter()
        .map(|&d| {
            let omega = medium.omega0 + d;
            let k_bare = resonant_wavevector(omega)?;
            let n = (1.0 + medium.chi(d, omega_c, mode)).sqrt();
            Ok(DispersionPoint { omega, k_bare, q: n.re * k_bare })
        })
        .collect()
}
