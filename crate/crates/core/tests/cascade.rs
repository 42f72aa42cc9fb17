use slowsound::coupling::CouplingMode;
use slowsound::decay::{fwhm, Cascade, CascadeGrid, RateRoute};
use slowsound::qutrit::spectrum;
use slowsound::{DecayRates, Error, ImpurityStates, ReducedParams};

fn rates() -> (slowsound::QutritSpectrum, DecayRates) {
    let p = ReducedParams::reference();
    let s = spectrum(&p).unwrap();
    let st = ImpurityStates::new(&p).unwrap();
    let r = DecayRates::compute(&p, &s, &st, RateRoute::Closed, CouplingMode::Closed).unwrap();
    (s, r)
}

#[test]
fn emission_lines_have_cascade_widths() {
    let (s, r) = rates();
    let c = Cascade::new(&s, &r, CascadeGrid::for_rates(&r)).unwrap();
    let (first, second) = c.final_marginals();
    // First phonon: Lorentzian of width γ0 + γ1; second phonon: width γ0.
    let w1 = fwhm(&c.first, &first).unwrap();
    let w2 = fwhm(&c.second, &second).unwrap();
    assert!((w1 / (r.gamma0 + r.gamma1) - 1.0).abs() < 0.01, "{w1}");
    assert!((w2 / r.gamma0 - 1.0).abs() < 0.01, "{w2}");
}

#[test]
fn populations_follow_exponential_laws() {
    let (s, r) = rates();
    let c = Cascade::new(&s, &r, CascadeGrid::for_rates(&r)).unwrap();
    let t = 0.7 / r.gamma1;
    assert!((c.a(t).norm_sqr() - (-r.gamma1 * t).exp()).abs() < 1e-12);
    let snap = c.snapshot(t);
    // Single-phonon population of the intermediate level.
    let k = r.gamma1 / (r.gamma0 - r.gamma1);
    let expect = k * ((-r.gamma1 * t).exp() - (-r.gamma0 * t).exp());
    assert!((snap.single_norm() / expect - 1.0).abs() < 0.02, "{} {expect}", snap.single_norm());
}

#[test]
fn coarse_grid_is_rejected() {
    let (s, r) = rates();
    let grid = CascadeGrid { spacing: r.gamma1, ..CascadeGrid::for_rates(&r) };
    assert!(matches!(Cascade::new(&s, &r, grid), Err(Error::Resolution { .. })));
}
