use slowsound::gpe::{coupled_ground_state, energy, evolve_real, imprint_soliton, Backreaction, CoupledFields, EigenConfig};
use slowsound::{Field1D, Grid1D, ReducedParams, C64};

fn soliton_with_impurity(points: usize) -> (ReducedParams, CoupledFields) {
    let p = ReducedParams::reference();
    let g = Grid1D::new(40.0, points, true).unwrap();
    let condensate = imprint_soliton(&g, &p).unwrap();
    let mut impurity = Field1D::from_fn(g, |x| C64::new((-x * x).exp() * (1.0 + 0.3 * x), 0.0));
    impurity.normalize_to(1.0);
    (p, CoupledFields { condensate, impurity })
}

fn max_energy_error(dt: f64, t: f64) -> f64 {
    let (p, mut f) = soliton_with_impurity(256);
    let chunk = 200;
    let steps = (t / dt).round() as usize;
    let e0 = energy(&f, &p, Backreaction::On).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..steps / chunk {
        evolve_real(&mut f, &p, dt, chunk, Backreaction::On).unwrap();
        worst = worst.max((energy(&f, &p, Backreaction::On).unwrap() / e0 - 1.0).abs());
    }
    worst
}

#[test]
fn coupled_energy_conserved_over_ten_thousand_steps() {
    let (p, mut f) = soliton_with_impurity(256);
    let dt = 0.1 * f.condensate.grid.dx().powi(2);
    let r = evolve_real(&mut f, &p, dt, 10_000, Backreaction::On).unwrap();
    let rel = (r.energy_final / r.energy_initial - 1.0).abs();
    assert!(rel < 1e-6, "{rel}");
    // Norm invariant: 1e-8 per 1000 steps.
    assert!(r.norm_drift_condensate < 1e-7 && r.norm_drift_impurity < 1e-7, "{r:?}");
}

#[test]
fn energy_error_is_second_order() {
    let dx = 40.0 / 256.0;
    let dt = 0.1 * dx * dx;
    let t = 8000.0 * dt;
    let coarse = max_energy_error(dt, t);
    let fine = max_energy_error(dt / 2.0, t);
    let order = (coarse / fine).log2();
    assert!((1.6..2.4).contains(&order), "observed order {order} ({coarse:e} vs {fine:e})");
}

#[test]
fn frozen_mode_keeps_impurity_norm() {
    let (p, mut f) = soliton_with_impurity(256);
    let dt = 0.1 * f.condensate.grid.dx().powi(2);
    let r = evolve_real(&mut f, &p, dt, 2000, Backreaction::Off).unwrap();
    assert!(r.norm_drift_impurity < 2e-8);
    assert!((r.energy_final / r.energy_initial - 1.0).abs() < 1e-6);
}

#[test]
fn deformation_grows_with_impurity_number() {
    let p = ReducedParams::reference();
    let cfg = EigenConfig { length: 40.0, points: 512, max_iter: 4000, ..Default::default() };
    let small = coupled_ground_state(&p, 0.5, &cfg).unwrap();
    let large = coupled_ground_state(&p, 2.0, &cfg).unwrap();
    assert!(small.deformation > 0.0 && small.deformation < large.deformation);
    assert!(!small.condensation_flag);
    assert!((small.fields.impurity.norm() - 0.5).abs() < 1e-9);
}
