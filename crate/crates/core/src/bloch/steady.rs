use super::{DensityMatrix3, DriveConfig};
use crate::decay::DecayRates;
use crate::numerics::{rk4_evolve, solve_dense, CMatrix};
use crate::{Error, Result, C64};

/// Weak-probe coherences `(ρ21, ρ31)`.
pub fn steady_state_analytic(drive: &DriveConfig, rates: &DecayRates) -> (C64, C64) {
    let i = C64::new(0.0, 1.0);
    let upper = C64::new(rates.gamma1, -2.0 * drive.two_photon());
    let lower = C64::new(rates.gamma0, -2.0 * drive.delta_p);
    let oc2 = drive.omega_c * drive.omega_c;
    let denom = if oc2 == 0.0 { lower } else { lower + oc2 / upper };
    let rho21 = i * drive.omega_p / denom;
    let rho31 = if oc2 == 0.0 { C64::default() } else { -i * drive.omega_c * rho21 / upper };
    (rho21, rho31)
}

fn hamiltonian(drive: &DriveConfig) -> [[C64; 3]; 3] {
    let mut h = [[C64::default(); 3]; 3];
    h[1][1] = C64::new(-drive.delta_p, 0.0);
    h[2][2] = C64::new(-drive.two_photon(), 0.0);
    h[1][0] = C64::new(-drive.omega_p / 2.0, 0.0);
    h[0][1] = h[1][0];
    h[2][1] = C64::new(drive.omega_c / 2.0, 0.0);
    h[1][2] = h[2][1];
    h
}

// Right-hand side of the master equation for a row-major vectorized ρ.
fn apply(h: &[[C64; 3]; 3], rates: &DecayRates, rho: &[C64], out: &mut [C64]) {
    let r = |a: usize, b: usize| rho[3 * a + b];
    let mi = C64::new(0.0, -1.0);
    #[allow(clippy::needless_range_loop)]
    for a in 0..3 {
        for b in 0..3 {
            let mut comm = C64::default();
            for c in 0..3 {
                comm += h[a][c] * r(c, b) - r(a, c) * h[c][b];
            }
            out[3 * a + b] = mi * comm;
        }
    }
    // Jump |e1⟩ → |g⟩ at γ0 and |e2⟩ → |e1⟩ at γ1.
    for (lo, hi, g) in [(0usize, 1usize, rates.gamma0), (1, 2, rates.gamma1)] {
        out[3 * lo + lo] += g * r(hi, hi);
        for a in 0..3 {
            for b in 0..3 {
                let w = 0.5 * g * ((a == hi) as u8 as f64 + (b == hi) as u8 as f64);
                if w != 0.0 {
                    out[3 * a + b] -= w * r(a, b);
                }
            }
        }
    }
}

/// The 9×9 Liouvillian in row-major vectorization.
pub fn liouvillian(drive: &DriveConfig, rates: &DecayRates) -> CMatrix {
    let h = hamiltonian(drive);
    let mut m = CMatrix::zeros(9);
    let mut basis = vec![C64::default(); 9];
    let mut col = vec![C64::default(); 9];
    for c in 0..9 {
        basis.fill(C64::default());
        basis[c] = C64::new(1.0, 0.0);
        apply(&h, rates, &basis, &mut col);
        for r in 0..9 {
            m[(r, c)] = col[r];
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho: DensityMatrix3,
    /// `‖L ρ‖` of the returned state.
    pub residual: f64,
    /// Set when the null space is not one-dimensional and the ground
    /// projector was returned instead.
    pub degenerate: bool,
}

/// Null vector of the Liouvillian with unit trace.
pub fn steady_state_lindblad(drive: &DriveConfig, rates: &DecayRates) -> Result<SteadyState> {
    let l = liouvillian(drive, rates);
    let mut a = l.clone();
    for c in 0..9 {
        a[(0, c)] = C64::default();
    }
    for d in [0, 4, 8] {
        a[(0, d)] = C64::new(1.0, 0.0);
    }
    let mut b = vec![C64::default(); 9];
    b[0] = C64::new(1.0, 0.0);
    match solve_dense(&a, &b) {
        Ok(x) => {
            let residual = l.mul_vec(&x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Ok(SteadyState { rho: DensityMatrix3::from_vec(&x)?, residual, degenerate: false })
        }
        Err(Error::Singular { .. }) => Ok(SteadyState { rho: DensityMatrix3::ground(), residual: 0.0, degenerate: true }),
        Err(e) => Err(e),
    }
}

/// Integrates the master equation from `rho` for time `t` with RK4.
pub fn evolve(rho: &DensityMatrix3, drive: &DriveConfig, rates: &DecayRates, t: f64) -> Result<DensityMatrix3> {
    let h = hamiltonian(drive);
    let scale = [rates.gamma0, rates.gamma1, drive.omega_p, drive.omega_c, drive.delta_p, drive.two_photon()]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if !(scale > 0.0) || t == 0.0 {
        return Ok(*rho);
    }
    let steps = (t * scale / 0.02).ceil().max(1.0);
    let y = rk4_evolve(rho.to_vec(), |_, y, dy| apply(&h, rates, y, dy), 0.0, t, t / steps)?;
    DensityMatrix3::from_vec(&y)
}
