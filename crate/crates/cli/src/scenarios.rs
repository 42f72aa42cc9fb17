//! One function per scenario. Each writes its tables, plots and summary
//! through [`Output`] and returns an error classified for the exit code.

use crate::config::Config;
use crate::output::Output;
use crate::svg::Plot;
use serde::Serialize;
use slowsound::bloch::{
    dispersion_curve, find_peaks, propagate_envelope, susceptibility, transparency_width, Medium, PulseConfig, ResponseSpectrum,
    SlowSoundSummary, Sweep, QUOTED_PULSE_VG_UM_PER_S,
};
use slowsound::bogoliubov::dispersion;
use slowsound::coupling::{peak_location, sweep as coupling_sweep};
use slowsound::decay::{fwhm, rate_sweep, Cascade, CascadeGrid};
use slowsound::gpe::{coupled_ground_state, imaginary_time_eigenstates, poschl_teller_state, Backreaction};
use slowsound::params::{coupling_of_nu, nu_of_coupling};
use slowsound::qutrit::{spectrum, QutritSpectrum};
use slowsound::table::Table;
use slowsound::validation::{run_all, ValidationConfig};
use slowsound::{CouplingMode, DecayRates, ImpurityStates, ReducedParams};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    Spectrum,
    Decay,
    Couplings,
    Susceptibility,
    Dispersion,
    Groupvel,
    Eigenstates,
    Pulse,
    Validate,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Decay => "decay",
            Self::Couplings => "couplings",
            Self::Susceptibility => "susceptibility",
            Self::Dispersion => "dispersion",
            Self::Groupvel => "groupvel",
            Self::Eigenstates => "eigenstates",
            Self::Pulse => "pulse",
            Self::Validate => "validate",
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(slowsound::Error),
    Io(std::io::Error),
    /// Asserted validation checks failed; the report has been written.
    Validation(usize),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Numerical(_) => 3,
            Self::Validation(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Numerical(e) => write!(f, "numerical failure: {e}"),
            Self::Io(e) => write!(f, "output error: {e}"),
            Self::Validation(n) => write!(f, "validation failed: {n} asserted checks did not pass"),
        }
    }
}

impl From<slowsound::Error> for Failure {
    fn from(e: slowsound::Error) -> Self {
        match e {
            slowsound::Error::Validation(_) | slowsound::Error::NotAQutrit { .. } => Self::Config(e.to_string()),
            e => Self::Numerical(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

type Res = Result<(), Failure>;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn table<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Table {
    Table::new(columns)
}

/// Everything downstream of the parameters for one coupling ratio.
struct System {
    spectrum: QutritSpectrum,
    rates: DecayRates,
    medium: Medium,
}

fn system(p: &ReducedParams, cfg: &Config) -> Result<System, Failure> {
    let s = spectrum(p)?;
    let st = ImpurityStates::new(p)?;
    let m = cfg.model.coupling_mode;
    let rates = DecayRates::compute(p, &s, &st, cfg.model.rate_route, m)?;
    let medium = Medium::new(p, &s, &rates, &st, m)?;
    Ok(System { spectrum: s, rates, medium })
}

fn sweep_values(cfg: &Config, gamma0: f64) -> Vec<f64> {
    Sweep { half_width: cfg.response.sweep_half_width, points: cfg.response.sweep_points }.values(gamma0)
}

pub fn run(scenario: Scenario, cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    match scenario {
        Scenario::Spectrum => run_spectrum(cfg, p, out),
        Scenario::Decay => run_decay(cfg, p, out),
        Scenario::Couplings => run_couplings(cfg, p, out),
        Scenario::Susceptibility => run_susceptibility(cfg, p, out),
        Scenario::Dispersion => run_dispersion(cfg, p, out),
        Scenario::Groupvel => run_groupvel(cfg, p, out),
        Scenario::Eigenstates => run_eigenstates(cfg, p, out),
        Scenario::Pulse => run_pulse(cfg, p, out),
        Scenario::Validate => run_validate(cfg, p, out),
    }
}

fn run_spectrum(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let c = &cfg.spectrum;
    let r_m = p.mass_ratio;
    let lo = coupling_of_nu(0.8, r_m)?;
    let hi = coupling_of_nu(9.0 / 7.0, r_m)?;
    let mut t = table([
        "g12/g11",
        "nu",
        "E0 [mu]",
        "E1 [mu]",
        "E2 [mu]",
        "omega0 [mu/hbar]",
        "omega1 [mu/hbar]",
        "n_bound",
        "qutrit",
        "g12/g11 at nu=4/5",
        "g12/g11 at nu=9/7",
    ]);
    let ratios = linspace(c.ratio_min, c.ratio_max, c.points);
    let mut qutrit_points = 0;
    for &r in &ratios {
        let s = QutritSpectrum::evaluate(nu_of_coupling(r, r_m), r_m);
        qutrit_points += usize::from(s.is_qutrit());
        // Levels with n ≥ ν are not bound.
        let bound = |n: usize| if (n as f64) < s.nu { s.energies[n] } else { f64::NAN };
        t.push(vec![
            r,
            s.nu,
            bound(0),
            bound(1),
            bound(2),
            s.omega0,
            s.omega1.unwrap_or(f64::NAN),
            s.n_bound as f64,
            f64::from(u8::from(s.is_qutrit())),
            lo,
            hi,
        ])?;
    }
    out.csv("spectrum", &t)?;
    let w0 = t.column("omega0 [mu/hbar]").unwrap_or_default();
    let w1 = t.column("omega1 [mu/hbar]").unwrap_or_default();
    out.svg(
        "spectrum",
        &Plot::new("Qutrit transition frequencies", "g12/g11", "omega [mu/hbar]")
            .series("omega0", &ratios, &w0)
            .series("omega1", &ratios, &w1),
    )?;
    let s = QutritSpectrum::evaluate(p.nu, r_m);
    #[derive(Serialize)]
    struct Summary {
        mass_ratio: f64,
        window_ratio_lo: f64,
        window_ratio_hi: f64,
        qutrit_points: usize,
        reference: QutritSpectrum,
        reference_coupling_ratio: f64,
    }
    out.json(
        "summary",
        &Summary {
            mass_ratio: r_m,
            window_ratio_lo: lo,
            window_ratio_hi: hi,
            qutrit_points,
            reference: s,
            reference_coupling_ratio: p.coupling_ratio,
        },
    )?;
    Ok(())
}

fn run_decay(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let r_m = p.mass_ratio;
    let n = cfg.decay.points.max(2);
    // Uniform in ν over the half-open window.
    let ratios: Vec<f64> =
        (0..n).map(|i| coupling_of_nu(0.8 + (9.0 / 7.0 - 0.8) * i as f64 / n as f64, r_m)).collect::<slowsound::Result<_>>()?;
    let pts = rate_sweep(p, &ratios, cfg.model.rate_route, cfg.model.coupling_mode)?;
    let mut t = table([
        "g12/g11",
        "nu",
        "omega0 [mu/hbar]",
        "omega1 [mu/hbar]",
        "gamma0 [mu/hbar]",
        "gamma1 [mu/hbar]",
        "gamma0/omega0",
        "gamma1/omega1",
    ]);
    for r in &pts {
        let (a, b) = r.ratios();
        t.push(vec![r.coupling_ratio, r.nu, r.omega0, r.omega1, r.gamma0, r.gamma1, a, b])?;
    }
    out.csv("decay", &t)?;
    let x = t.column("g12/g11").unwrap_or_default();
    out.svg(
        "decay",
        &Plot::new("Decay rate over transition frequency", "g12/g11", "gamma/omega")
            .series("gamma0/omega0", &x, &t.column("gamma0/omega0").unwrap_or_default())
            .series("gamma1/omega1", &x, &t.column("gamma1/omega1").unwrap_or_default()),
    )?;
    let sys = system(p, cfg)?;
    let (mut w1, mut w2) = (None, None);
    if cfg.decay.cascade {
        let c = Cascade::new(&sys.spectrum, &sys.rates, CascadeGrid::for_rates(&sys.rates))?;
        let (first, second) = c.final_marginals();
        let mut ct = table(["detuning [mu/hbar]", "first phonon density", "second phonon density"]);
        for i in 0..c.first.len() {
            ct.push(vec![c.first[i], first[i], second[i]])?;
        }
        out.csv("cascade", &ct)?;
        w1 = fwhm(&c.first, &first);
        w2 = fwhm(&c.second, &second);
    }
    #[derive(Serialize)]
    struct Summary {
        route: slowsound::RateRoute,
        coupling_mode: CouplingMode,
        points: usize,
        max_gamma0_over_omega0: f64,
        max_gamma1_over_omega1: f64,
        rwa_valid: bool,
        reference: DecayRates,
        first_phonon_fwhm: Option<f64>,
        second_phonon_fwhm: Option<f64>,
    }
    let m0 = pts.iter().map(|r| r.ratios().0).fold(0.0, f64::max);
    let m1 = pts.iter().map(|r| r.ratios().1).fold(0.0, f64::max);
    out.json(
        "summary",
        &Summary {
            route: cfg.model.rate_route,
            coupling_mode: cfg.model.coupling_mode,
            points: pts.len(),
            max_gamma0_over_omega0: m0,
            max_gamma1_over_omega1: m1,
            rwa_valid: m0 < 0.1 && m1 < 0.1,
            reference: sys.rates,
            first_phonon_fwhm: w1,
            second_phonon_fwhm: w2,
        },
    )?;
    Ok(())
}

fn run_couplings(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let c = &cfg.couplings;
    let ks = linspace(c.k_min, c.k_max, c.points);
    let st = ImpurityStates::new(p)?;
    let mut t = table(["k [1/xi]", "|g0|", "|g1|", "|g00|", "|g11|", "|g22|", "mode (0 closed, 1 quadrature)"]);
    let mut peaks = BTreeMap::new();
    let mut plot = Plot::new("Interband couplings", "k [1/xi]", "|g|");
    for (tag, mode) in [(0.0, CouplingMode::Closed), (1.0, CouplingMode::Quadrature)] {
        let sets = coupling_sweep(&ks, p, &st, mode)?;
        for s in &sets {
            t.push(vec![s.k, s.g0.norm(), s.g1.norm(), s.g00.norm(), s.g11.norm(), s.g22.norm(), tag])?;
        }
        let g0: Vec<f64> = sets.iter().map(|s| s.g0.norm()).collect();
        let g1: Vec<f64> = sets.iter().map(|s| s.g1.norm()).collect();
        let name = if tag == 0.0 { "closed" } else { "quadrature" };
        peaks.insert(format!("{name}_g0_peak_k"), peak_location(&ks, &g0));
        peaks.insert(format!("{name}_g1_peak_k"), peak_location(&ks, &g1));
        plot = plot.series(&format!("|g0| {name}"), &ks, &g0);
    }
    out.csv("couplings", &t)?;
    out.svg("couplings", &plot)?;
    out.json("summary", &peaks)?;
    Ok(())
}

#[derive(Serialize)]
struct SpectrumSummary {
    coupling_ratio: f64,
    omega_c_over_gamma0: f64,
    gamma0: f64,
    im_chi_centre: f64,
    absorption_peaks_over_gamma0: Vec<f64>,
    transparency_width_over_gamma0: Option<f64>,
}

fn spectrum_summary(r: f64, oc: f64, sys: &System, spec: &ResponseSpectrum) -> SpectrumSummary {
    let g0 = sys.rates.gamma0;
    SpectrumSummary {
        coupling_ratio: r,
        omega_c_over_gamma0: oc,
        gamma0: g0,
        im_chi_centre: sys.medium.chi(0.0, oc * g0, spec.delta_mode).im,
        absorption_peaks_over_gamma0: find_peaks(&spec.delta_p, &spec.absorption()).iter().map(|d| d / g0).collect(),
        transparency_width_over_gamma0: transparency_width(spec).ok().map(|w| w / g0),
    }
}

fn run_susceptibility(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let mode = cfg.model.delta_mode;
    let mut t = table(["g12/g11", "omega_c [gamma0]", "delta_p [gamma0]", "delta_p [mu/hbar]", "re chi", "im chi"]);
    let mut summaries = Vec::new();
    let mut plot = Plot::new("Probe absorption", "delta_p [gamma0]", "Im chi");
    for &r in &cfg.response.coupling_ratios {
        let sys = system(&p.with_coupling_ratio(r)?, cfg)?;
        let g0 = sys.rates.gamma0;
        for &oc in &cfg.response.omega_c {
            let spec = susceptibility(&sys.medium, &sweep_values(cfg, g0), oc * g0, mode);
            for (d, chi) in spec.delta_p.iter().zip(&spec.chi) {
                t.push(vec![r, oc, d / g0, *d, chi.re, chi.im])?;
            }
            let x: Vec<f64> = spec.delta_p.iter().map(|d| d / g0).collect();
            plot = plot.series(&format!("g12/g11 = {r}, Omega_c = {oc} gamma0"), &x, &spec.absorption());
            summaries.push(spectrum_summary(r, oc, &sys, &spec));
        }
    }
    out.csv("susceptibility", &t)?;
    out.svg("susceptibility", &plot)?;
    out.json("summary", &summaries)?;
    Ok(())
}

fn run_dispersion(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let sys = system(p, cfg)?;
    let g0 = sys.rates.gamma0;
    let oc = cfg.response.control * g0;
    let x = sweep_values(cfg, g0);
    let curve = dispersion_curve(&sys.medium, &x, oc, cfg.model.delta_mode)?;
    let mut t = table(["delta_p [gamma0]", "omega [mu/hbar]", "k bare [1/xi]", "q dressed [1/xi]"]);
    for (d, c) in x.iter().zip(&curve) {
        t.push(vec![d / g0, c.omega, c.k_bare, c.q])?;
    }
    out.csv("dispersion", &t)?;
    let ks = linspace(0.0, 3.0, 301);
    let mut b = table(["k [1/xi]", "epsilon [mu]"]);
    for &k in &ks {
        b.push(vec![k, dispersion(k)])?;
    }
    out.csv("bogoliubov", &b)?;
    let omega = t.column("omega [mu/hbar]").unwrap_or_default();
    out.svg(
        "dispersion",
        &Plot::new("Probe dispersion near resonance", "wavevector [1/xi]", "omega [mu/hbar]")
            .series("bare", &t.column("k bare [1/xi]").unwrap_or_default(), &omega)
            .series("dressed", &t.column("q dressed [1/xi]").unwrap_or_default(), &omega),
    )?;
    #[derive(Serialize)]
    struct Summary {
        omega_c_over_gamma0: f64,
        omega0: f64,
        k_res: f64,
        quoted_k_res: f64,
    }
    out.json(
        "summary",
        &Summary {
            omega_c_over_gamma0: cfg.response.control,
            omega0: sys.spectrum.omega0,
            k_res: sys.medium.k_res,
            quoted_k_res: slowsound::bloch::QUOTED_K_RES,
        },
    )?;
    Ok(())
}

fn run_groupvel(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let sys = system(p, cfg)?;
    let g0 = sys.rates.gamma0;
    let mode = cfg.model.delta_mode;
    let spec = susceptibility(&sys.medium, &sweep_values(cfg, g0), cfg.response.control * g0, mode);
    let mut t = table(["delta_p [gamma0]", "delta_p [mu/hbar]", "re chi", "im chi", "v_g/c_s"]);
    for ((d, chi), v) in spec.delta_p.iter().zip(&spec.chi).zip(&spec.group_velocity) {
        t.push(vec![d / g0, *d, chi.re, chi.im, v.unwrap_or(f64::NAN)])?;
    }
    out.csv("groupvel", &t)?;
    out.svg(
        "groupvel",
        &Plot::new("Group velocity", "delta_p [gamma0]", "v_g/c_s").series(
            "v_g/c_s",
            &t.column("delta_p [gamma0]").unwrap_or_default(),
            &t.column("v_g/c_s").unwrap_or_default(),
        ),
    )?;
    let cs = cfg.sound_speed_mm_per_s(p);
    let headline = SlowSoundSummary::new(&sys.medium, &spec, sys.spectrum.omega1(), cs);
    #[derive(Serialize)]
    struct Sensitivity {
        omega_c_over_gamma0: f64,
        min_vg_over_cs: Option<f64>,
        centre_vg_over_cs: Option<f64>,
    }
    let sensitivity: Vec<Sensitivity> = [0.5, 1.0, 2.0, 4.0, 10.0]
        .iter()
        .map(|&f| {
            let s = susceptibility(&sys.medium, &spec.delta_p, f * g0, mode);
            let h = SlowSoundSummary::new(&sys.medium, &s, sys.spectrum.omega1(), cs);
            Sensitivity { omega_c_over_gamma0: f, min_vg_over_cs: h.min_vg_over_cs, centre_vg_over_cs: h.centre_vg_over_cs }
        })
        .collect();
    #[derive(Serialize)]
    struct Summary {
        #[serde(flatten)]
        headline: SlowSoundSummary,
        omega_c_over_gamma0: f64,
        min_vg_detuning_over_gamma0: Option<f64>,
        transparency_width_over_gamma0: Option<f64>,
        masked_points: usize,
        control_sensitivity: Vec<Sensitivity>,
    }
    out.json(
        "summary",
        &Summary {
            headline,
            omega_c_over_gamma0: cfg.response.control,
            min_vg_detuning_over_gamma0: headline.min_vg_detuning.map(|d| d / g0),
            transparency_width_over_gamma0: transparency_width(&spec).ok().map(|w| w / g0),
            masked_points: spec.masked(),
            control_sensitivity: sensitivity,
        },
    )?;
    Ok(())
}

fn run_eigenstates(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let e = &cfg.eigenstates;
    let solver = e.solver();
    let states = imaginary_time_eigenstates(p, e.states, &solver)?;
    let analytic = ImpurityStates::with_exponent(p.exponent_alpha)?;
    let mut cols = vec!["x [xi]".to_string()];
    for s in &states {
        let n = s.n;
        cols.extend([
            format!("psi{n} re"),
            format!("psi{n} im"),
            format!("psi{n} density"),
            format!("phi{n} alpha-form"),
            format!("psi{n} exact"),
            format!("psi{n} scale"),
        ]);
    }
    let mut t = Table::new(cols);
    let grid = states[0].field.grid;
    // Analytic curves share the sign of the numerical state at its largest sample.
    let signs: Vec<f64> = states
        .iter()
        .map(|s| {
            let (i, _) = s.field.values.iter().enumerate().fold((0, 0.0), |b, (i, z)| if z.norm() > b.1 { (i, z.norm()) } else { b });
            s.field.values[i].re.signum()
                * poschl_teller_state(p.nu, s.n, grid.x(i))
                    .or(if s.n <= 2 { Some(analytic.phi(s.n, grid.x(i))) } else { None })
                    .unwrap_or(1.0)
                    .signum()
        })
        .collect();
    let norm = |f: &dyn Fn(f64) -> f64| (grid.coords().iter().map(|&x| f(x) * f(x)).sum::<f64>() * grid.dx()).sqrt();
    let exact_norms: Vec<Option<f64>> = states
        .iter()
        .map(|s| poschl_teller_state(p.nu, s.n, 0.0).map(|_| norm(&|x| poschl_teller_state(p.nu, s.n, x).unwrap_or(0.0))))
        .collect();
    // Unit-norm dumps; multiplying by this column rescales a state to unit peak.
    let scales: Vec<f64> = states.iter().map(|s| 1.0 / s.field.values.iter().map(|z| z.norm()).fold(0.0, f64::max)).collect();
    let alpha_norms: Vec<f64> = states.iter().map(|s| if s.n <= 2 { norm(&|x| analytic.phi(s.n, x)) } else { f64::NAN }).collect();
    for (i, &x) in grid.coords().iter().enumerate() {
        let mut row = vec![x];
        for (j, s) in states.iter().enumerate() {
            let z = s.field.values[i];
            let alpha = if s.n <= 2 { signs[j] * analytic.phi(s.n, x) / alpha_norms[j] } else { f64::NAN };
            let exact = exact_norms[j].map_or(f64::NAN, |nrm| signs[j] * poschl_teller_state(p.nu, s.n, x).unwrap_or(0.0) / nrm);
            row.extend([z.re, z.im, z.norm_sqr(), alpha, exact, scales[j]]);
        }
        t.push(row)?;
    }
    out.csv("eigenstates", &t)?;
    let xs = grid.coords();
    let mut plot = Plot::new("Impurity eigenstates", "x [xi]", "psi");
    for s in &states {
        let re: Vec<f64> = s.field.values.iter().map(|z| z.re).collect();
        plot = plot.series(&format!("n = {}", s.n), &xs, &re);
    }
    out.svg("eigenstates", &plot)?;
    #[derive(Serialize)]
    struct State {
        n: usize,
        energy: f64,
        analytic_energy: f64,
        relative_energy_error: f64,
        overlap_alpha_form: f64,
        overlap_exact: Option<f64>,
        localized_fraction: f64,
        residual: f64,
        converged: bool,
    }
    #[derive(Serialize)]
    struct Coupled {
        impurity_number: f64,
        deformation: f64,
        condensation_flag: bool,
        iterations: usize,
    }
    #[derive(Serialize)]
    struct Summary {
        nu: f64,
        exponent_alpha: f64,
        backreaction: Backreaction,
        states: Vec<State>,
        coupled: Option<Coupled>,
    }
    let mut coupled = None;
    if e.backreaction == Backreaction::On {
        let g = coupled_ground_state(p, e.impurity_number, &solver)?;
        let mut ct = table(["x [xi]", "condensate density", "impurity density"]);
        let (dc, di) = (g.fields.condensate.density(), g.fields.impurity.density());
        for (i, x) in g.fields.condensate.grid.coords().iter().enumerate() {
            ct.push(vec![*x, dc[i], di[i]])?;
        }
        out.csv("coupled", &ct)?;
        coupled = Some(Coupled {
            impurity_number: g.impurity_norm,
            deformation: g.deformation,
            condensation_flag: g.condensation_flag,
            iterations: g.iterations,
        });
    }
    out.json(
        "summary",
        &Summary {
            nu: p.nu,
            exponent_alpha: p.exponent_alpha,
            backreaction: e.backreaction,
            states: states
                .iter()
                .map(|s| State {
                    n: s.n,
                    energy: s.energy,
                    analytic_energy: s.analytic_energy,
                    relative_energy_error: s.relative_energy_error(),
                    overlap_alpha_form: s.overlap,
                    overlap_exact: s.overlap_exact,
                    localized_fraction: s.localized_fraction,
                    residual: s.residual,
                    converged: s.converged,
                })
                .collect(),
            coupled,
        },
    )?;
    Ok(())
}

fn run_pulse(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let sys = system(p, cfg)?;
    let g0 = sys.rates.gamma0;
    let oc = cfg.response.control * g0;
    let mode = cfg.model.delta_mode;
    let width = transparency_width(&susceptibility(&sys.medium, &sweep_values(cfg, g0), oc, mode))?;
    let pc = PulseConfig {
        length: cfg.pulse.length,
        points: cfg.pulse.points,
        window: Some(width),
        ..PulseConfig::new(width * cfg.pulse.bandwidth_fraction)
    };
    let r = propagate_envelope(&sys.medium, oc, mode, &pc)?;
    let mut t = table(["t [hbar/mu]", "input |Omega_p|^2", "output |Omega_p|^2"]);
    for i in 0..r.times.len() {
        t.push(vec![r.times[i], r.input[i], r.output[i]])?;
    }
    out.csv("pulse", &t)?;
    out.svg(
        "pulse",
        &Plot::new("Probe envelope", "t [hbar/mu]", "|Omega_p|^2")
            .series("input", &r.times, &r.input)
            .series("output", &r.times, &r.output),
    )?;
    let cs = cfg.sound_speed_mm_per_s(p);
    #[derive(Serialize)]
    struct Summary {
        omega_c_over_gamma0: f64,
        bandwidth: f64,
        transparency_width: f64,
        length_xi: f64,
        length_um: Option<f64>,
        delay: f64,
        group_velocity_measured: f64,
        group_velocity_analytic: f64,
        relative_deviation: f64,
        absorbed_fraction: f64,
        bandwidth_warning: bool,
        sound_speed_mm_per_s: f64,
        group_velocity_um_per_s: f64,
        quoted_pulse_vg_um_per_s: f64,
    }
    out.json(
        "summary",
        &Summary {
            omega_c_over_gamma0: cfg.response.control,
            bandwidth: pc.bandwidth,
            transparency_width: width,
            length_xi: r.length,
            length_um: p.scales.map(|s| r.length * s.healing_length * 1e6),
            delay: r.delay,
            group_velocity_measured: r.group_velocity_measured,
            group_velocity_analytic: r.group_velocity_analytic,
            relative_deviation: r.group_velocity_measured / r.group_velocity_analytic - 1.0,
            absorbed_fraction: r.absorbed_fraction,
            bandwidth_warning: r.bandwidth_warning,
            sound_speed_mm_per_s: cs,
            group_velocity_um_per_s: r.group_velocity_measured * cs * 1e3,
            quoted_pulse_vg_um_per_s: QUOTED_PULSE_VG_UM_PER_S,
        },
    )?;
    Ok(())
}

fn run_validate(cfg: &Config, p: &ReducedParams, out: &mut Output) -> Res {
    let vc = ValidationConfig {
        coupling_mode: cfg.model.coupling_mode,
        delta_mode: cfg.model.delta_mode,
        control: cfg.response.control,
        ..ValidationConfig::default()
    };
    let report = run_all(p, &vc)?;
    let text = report.render();
    print!("{text}");
    out.text("validation.txt", &text)?;
    out.write_json("validation", &report)?;
    match report.failures() {
        0 => Ok(()),
        n => Err(Failure::Validation(n)),
    }
}
