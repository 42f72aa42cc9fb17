use crate::{Error, Result, C64};

/// Classical fourth-order Runge-Kutta from `t0` to `t1` with fixed step `dt`.
///
/// `rhs(t, y, dy)` writes the time derivative into `dy`. The interval must be
/// an integer number of steps.
pub fn rk4_evolve<F>(mut state: Vec<C64>, mut rhs: F, t0: f64, t1: f64, dt: f64) -> Result<Vec<C64>>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let ratio = (t1 - t0) / dt;
    let steps = ratio.round();
    if steps < 0.0 || (ratio - steps).abs() > 1e-6 * ratio.abs().max(1.0) {
        return Err(Error::Domain(format!("(t1 - t0)/dt = {ratio} is not a non-negative integer")));
    }
    let n = state.len();
    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]);
    let mut tmp = vec![C64::default(); n];
    let mut t = t0;
    for _ in 0..steps as usize {
        rhs(t, &state, &mut k1);
        for i in 0..n {
            tmp[i] = state[i] + k1[i] * (0.5 * dt);
        }
        rhs(t + 0.5 * dt, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state[i] + k2[i] * (0.5 * dt);
        }
        rhs(t + 0.5 * dt, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state[i] + k3[i] * dt;
        }
        rhs(t + dt, &tmp, &mut k4);
        for i in 0..n {
            state[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        t += dt;
        if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Divergence { t });
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_keeps_state() {
        let y0 = vec![C64::new(1.0, -2.0), C64::new(0.5, 0.25)];
        let y = rk4_evolve(y0.clone(), |_, _, dy| dy.fill(C64::default()), 0.0, 1.0, 0.1).unwrap();
        assert_eq!(y, y0);
    }

    #[test]
    fn exponential_decay() {
        let y = rk4_evolve(vec![C64::new(1.0, 0.0)], |_, y, dy| dy[0] = -y[0], 0.0, 1.0, 1e-3).unwrap();
        assert!((y[0].re - (-1f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let run = |dt| rk4_evolve(vec![C64::new(1.0, 0.0)], |_, y, dy| dy[0] = -y[0], 0.0, 2.0, dt).unwrap()[0].re;
        let exact = (-2f64).exp();
        let ratio = (run(0.1) - exact).abs() / (run(0.05) - exact).abs();
        assert!((ratio - 16.0).abs() < 1.5, "{ratio}");
    }

    #[test]
    fn rabi_period() {
        // i dc/dt = (Ω/2) σx c; population returns to the ground state at t = 2π/Ω.
        let omega = 1.7;
        let period = std::f64::consts::TAU / omega;
        let steps = 20_000.0;
        let y = rk4_evolve(
            vec![C64::new(1.0, 0.0), C64::default()],
            |_, y, dy| {
                let mi = C64::new(0.0, -0.5 * omega);
                dy[0] = mi * y[1];
                dy[1] = mi * y[0];
            },
            0.0,
            period,
            period / steps,
        )
        .unwrap();
        assert!((y[0].norm_sqr() - 1.0).abs() < 1e-6);
        assert!(y[1].norm_sqr() < 1e-6);
    }

    #[test]
    fn divergence_and_bad_steps() {
        let r = rk4_evolve(vec![C64::new(1.0, 0.0)], |_, y, dy| dy[0] = y[0] * y[0] * 1e6, 0.0, 10.0, 0.1);
        assert!(matches!(r, Err(Error::Divergence { .. })));
        assert!(rk4_evolve(vec![C64::default()], |_, _, _| {}, 0.0, 1.0, 0.3).is_err());
    }
}
