//! Impurity bound states in the soliton's Pöschl-Teller well.

use crate::numerics::{gamma_fn, hyp2f1, integrate_line_real, QUAD_TOL};
use crate::{Error, ReducedParams, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// ⌊ν + 1 + √(ν(ν+1))⌋, evaluated without rounding at the window edges.
///
/// `m ≤ ν + 1 + √(ν(ν+1))` is equivalent to `m − 1 ≤ ν` or
/// `ν(2m − 1) ≥ (m − 1)²`, which involves no square root.
pub fn bound_state_count(nu: f64) -> u32 {
    if !(nu >= 0.0) {
        return 0;
    }
    let admits = |m: u32| {
        let m1 = (m - 1) as f64;
        m1 <= nu || nu * (2.0 * m as f64 - 1.0) >= m1 * m1
    };
    let mut m = (nu + 1.0 + (nu * (nu + 1.0)).sqrt()).floor().max(1.0) as u32;
    while m > 1 && !admits(m) {
        m -= 1;
    }
    while admits(m + 1) {
        m += 1;
    }
    m
}

/// [`bound_state_count`] for rational ν = p/q, in exact integer arithmetic.
pub fn bound_state_count_ratio(p: u64, q: u64) -> u32 {
    assert!(q > 0, "denominator must be positive");
    let (p, q) = (p as u128, q as u128);
    let admits = |m: u128| (m - 1) * q <= p || p * (2 * m - 1) >= q * (m - 1) * (m - 1);
    let mut m = 1u128;
    while admits(m + 1) {
        m += 1;
    }
    m as u32
}

/// True on the half-open window 4/5 ≤ ν < 9/7.
pub fn is_qutrit(nu: f64) -> bool {
    bound_state_count(nu) == 3
}

/// E'_n = −(ν − n)²/(2 r_m), measured from the offset n0·g21.
pub fn energy(nu: f64, mass_ratio: f64, n: u32) -> f64 {
    let d = nu - n as f64;
    -d * d / (2.0 * mass_ratio)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QutritSpectrum {
    pub nu: f64,
    pub mass_ratio: f64,
    pub n_bound: u32,
    /// E'_0, E'_1, E'_2.
    pub energies: [f64; 3],
    /// |g⟩ ↔ |e1⟩ gap, (2ν − 1)/(2 r_m).
    pub omega0: f64,
    /// |e1⟩ ↔ |e2⟩ gap, |2ν − 3|/(2 r_m); absent outside the window.
    pub omega1: Option<f64>,
}

impl QutritSpectrum {
    /// Evaluate for any ν; outside the window `omega1` is `None`.
    pub fn evaluate(nu: f64, mass_ratio: f64) -> Self {
        let n_bound = bound_state_count(nu);
        Self {
            nu,
            mass_ratio,
            n_bound,
            energies: [0, 1, 2].map(|n| energy(nu, mass_ratio, n)),
            omega0: (2.0 * nu - 1.0) / (2.0 * mass_ratio),
            omega1: (n_bound == 3).then(|| (2.0 * nu - 3.0).abs() / (2.0 * mass_ratio)),
        }
    }

    pub fn is_qutrit(&self) -> bool {
        self.n_bound == 3
    }

    /// ω1, which exists for every spectrum returned by [`spectrum`].
    pub fn omega1(&self) -> f64 {
        self.omega1.unwrap_or(f64::NAN)
    }
}

/// Spectrum for a qutrit-valid parameter set.
pub fn spectrum(params: &ReducedParams) -> Result<QutritSpectrum> {
    let s = QutritSpectrum::evaluate(params.nu, params.mass_ratio);
    if !s.is_qutrit() {
        return Err(Error::NotAQutrit { nu: params.nu, n_bound: s.n_bound });
    }
    Ok(s)
}

/// ∫ sech^a(x) dx = √π Γ(a/2)/Γ((a+1)/2).
pub fn sech_power_integral(a: f64) -> Result<f64> {
    Ok(PI.sqrt() * gamma_fn(a / 2.0)? / gamma_fn((a + 1.0) / 2.0)?)
}

/// The three impurity wavefunctions
/// `φ0 = A0 sech^α`, `φ1 = 2 A1 tanh φ0`, `φ2 = √2 A2 (1 − (1+3α) tanh²) φ0`.
///
/// `φ2` in this form is not orthogonal to `φ0`; when the overlap exceeds
/// 1e-3 it is replaced by its Gram-Schmidt projection and
/// `orthogonalized` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpurityStates {
    pub alpha: f64,
    /// Normalization constants fixed by quadrature (used for evaluation).
    pub norm: [f64; 3],
    /// Closed-form normalization constants (cross-check only).
    pub norm_closed: [f64; 3],
    /// ⟨φ0|φ2⟩ before orthogonalization.
    pub raw_overlap_02: f64,
    pub orthogonalized: bool,
    // φ2 ← (φ2 − c φ0)/s when orthogonalized.
    gs_coeff: f64,
    gs_scale: f64,
}

impl ImpurityStates {
    pub fn new(params: &ReducedParams) -> Result<Self> {
        if !is_qutrit(params.nu) {
            return Err(Error::NotAQutrit { nu: params.nu, n_bound: bound_state_count(params.nu) });
        }
        Self::with_exponent(params.exponent_alpha)
    }

    /// States for an arbitrary exponent, without the qutrit check.
    pub fn with_exponent(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("exponent must be positive, got {alpha}")));
        }
        let w = |x: f64| x.cosh().powf(-2.0 * alpha);
        let i0 = integrate_line_real(w, QUAD_TOL)?;
        let a0 = i0.powf(-0.5);
        let i1 = integrate_line_real(|x| 4.0 * x.tanh().powi(2) * w(x), QUAD_TOL)?;
        let a1 = (a0 * a0 * i1).powf(-0.5);
        let poly = |x: f64| 1.0 - (1.0 + 3.0 * alpha) * x.tanh().powi(2);
        let i2 = integrate_line_real(|x| 2.0 * poly(x).powi(2) * w(x), QUAD_TOL)?;
        let a2 = (a0 * a0 * i2).powf(-0.5);

        let mut s = Self {
            alpha,
            norm: [a0, a1, a2],
            norm_closed: closed_norms(alpha)?,
            raw_overlap_02: 0.0,
            orthogonalized: false,
            gs_coeff: 0.0,
            gs_scale: 1.0,
        };
        let c = integrate_line_real(|x| s.phi(0, x) * s.phi(2, x), QUAD_TOL)?;
        s.raw_overlap_02 = c;
        if c.abs() > 1e-3 {
            s.orthogonalized = true;
            s.gs_coeff = c;
            s.gs_scale = (1.0 - c * c).sqrt();
        }
        Ok(s)
    }

    /// φ_l(x) for l ∈ {0, 1, 2}.
    pub fn phi(&self, l: usize, x: f64) -> f64 {
        let p0 = self.norm[0] * x.cosh().powf(-self.alpha);
        match l {
            0 => p0,
            1 => 2.0 * self.norm[1] * x.tanh() * p0,
            2 => {
                let t2 = x.tanh().powi(2);
                let raw = 2f64.sqrt() * self.norm[2] * (1.0 - (1.0 + 3.0 * self.alpha) * t2) * p0;
                (raw - self.gs_coeff * p0) / self.gs_scale
            }
            _ => panic!("state index {l} out of range"),
        }
    }

    /// Relative deviation |A_closed/A_quad − 1| per state.
    pub fn norm_discrepancy(&self) -> [f64; 3] {
        [0, 1, 2].map(|j| (self.norm_closed[j] / self.norm[j] - 1.0).abs())
    }
}

/// The closed-form normalization constants, transcribed term by term.
pub fn closed_norms(alpha: f64) -> Result<[f64; 3]> {
    let a = alpha;
    let g = gamma_fn;
    let f = hyp2f1;
    let a0 = (PI.sqrt() * g(a)? / g((1.0 + 2.0 * a) / 2.0)?).powf(-0.5);
    let b1 = 2.0 * (1.0 + a);
    let s1 = f(a, b1, 1.0 + a, -1.0)? / a - f(1.0 + a, b1, 2.0 + a, -1.0)? / (1.0 + a) + f(2.0 + a, b1, 3.0 + a, -1.0)? / (2.0 + a);
    let a1 = (2f64.powf(2.0 * (1.0 + a)) * a0 * a0 * s1).powf(-0.5);

    let b2 = 2.0 * (2.0 + a);
    let f1 = f(1.0 + a, b2, 2.0 + a, -1.0)?;
    let f2 = f(2.0 + a, b2, 3.0 + a, -1.0)?;
    let f3 = f(3.0 + a, b2, 4.0 + a, -1.0)?;
    let f4 = f(4.0 + a, b2, 5.0 + a, -1.0)?;
    let s2 = 9.0 * a / (2.0 * (1.0 + a))
        + 9.0 * a * a / (4.0 * (1.0 + a))
        + 9.0 * a * a * PI.sqrt() * (6.0 + 5.0 * a + a * a) * g(a)? / (16.0 * g(2.5 + a)?)
        + 3.0 * 2f64.powf(2.0 * (1.0 + a)) * a * (2.0 + 3.0 * a) * f1 / (1.0 + a)
        + 4f64.powf(2.0 + a) * f2 / (2.0 + a)
        + 3.0 * 2f64.powf(2.0 * (2.0 + a)) * a * f2 / (2.0 + a)
        + 27.0 * 4f64.powf(1.0 + a) * a * a * f2 / (2.0 * (2.0 + a))
        + 3.0 * 2f64.powf(3.0 + 2.0 * a) * a * f3 / (3.0 + a)
        + 9.0 * 2f64.powf(2.0 * (1.0 + a)) * a * a * f3 / (3.0 + a)
        + 9.0 * 2f64.powf(2.0 * a) * a * a * f4 / (4.0 + a);
    let a2 = (2.0 * a0 * a0 * a1 * a1 * s2).powf(-0.5);
    Ok([a0, a1, a2])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_at_edges() {
        assert_eq!(bound_state_count(0.8), 3);
        assert_eq!(bound_state_count(9.0 / 7.0), 4);
        assert_eq!(bound_state_count(0.0), 1);
        assert_eq!(bound_state_count(0.5), 2);
        assert_eq!(bound_state_count_ratio(4, 5), 3);
        assert_eq!(bound_state_count_ratio(9, 7), 4);
        assert_eq!(bound_state_count_ratio(0, 1), 1);
        assert_eq!(bound_state_count_ratio(10, 7), 4);
    }

    #[test]
    fn float_and_rational_counts_agree() {
        for q in 1..60u64 {
            for p in 0..4 * q {
                let nu = p as f64 / q as f64;
                assert_eq!(bound_state_count(nu), bound_state_count_ratio(p, q), "nu = {p}/{q}");
            }
        }
    }

    #[test]
    fn window_membership() {
        assert!(is_qutrit(0.8));
        assert!(is_qutrit(1.0));
        assert!(!is_qutrit(1.285_714_3));
        assert!(!is_qutrit(0.799_999_9));
    }

    #[test]
    fn gaps() {
        let s = QutritSpectrum::evaluate(1.0, 1.56);
        assert!((s.omega0 - 1.0 / 3.12).abs() < 1e-15);
        assert!((s.omega1() - 1.0 / 3.12).abs() < 1e-15);
        let nu = (-1.0 + 12.544f64.sqrt()) / 2.0;
        let s = QutritSpectrum::evaluate(nu, 1.56);
        assert!((s.omega0 - (2.0 * nu - 1.0) / 3.12).abs() < 1e-15);
        assert!((s.omega0 - 0.4942).abs() < 1e-3);
        assert!((s.omega1() - 0.1469).abs() < 1e-3);
        assert!((s.energies[1] - s.energies[0] - s.omega0).abs() < 1e-14);
    }

    #[test]
    fn outside_window() {
        let p = ReducedParams::new(1.56, 0.75 / 1.56, 0.2, 50.0, 100.0).unwrap();
        assert!((p.nu - 0.5).abs() < 1e-12);
        assert_eq!(spectrum(&p).unwrap_err(), Error::NotAQutrit { nu: p.nu, n_bound: 2 });
        assert!(QutritSpectrum::evaluate(0.5, 1.56).omega1.is_none());
    }

    #[test]
    fn unit_exponent_limit() {
        let s = ImpurityStates::with_exponent(1.0).unwrap();
        assert!((s.norm[0] - 0.5f64.sqrt()).abs() < 1e-10);
        assert!((s.norm_closed[0] - 0.5f64.sqrt()).abs() < 1e-12);
        for x in [0.3, 1.7, 4.0] {
            assert!((s.phi(1, -x) + s.phi(1, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn sech_integral_matches_quadrature() {
        for a in [0.7, 2.0, 4.8] {
            let q = integrate_line_real(|x| x.cosh().powf(-a), 1e-12).unwrap();
            assert!((sech_power_integral(a).unwrap() - q).abs() < 1e-10);
        }
    }

    #[test]
    fn raw_second_state_overlap() {
        // ⟨φ0|φ2⟩ = −√2 A0² A2 α I(2α)/(2α+1) for the untouched form.
        let s = ImpurityStates::with_exponent(1.7).unwrap();
        let a = 1.7;
        let i = sech_power_integral(2.0 * a).unwrap();
        let expect = -(2f64).sqrt() * s.norm[0].powi(2) * s.norm[2] * a * i / (2.0 * a + 1.0);
        assert!((s.raw_overlap_02 - expect).abs() < 1e-9);
        assert!(s.orthogonalized);
    }
}
