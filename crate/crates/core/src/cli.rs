//! Command-line driver: config ingestion, pipelines and output.

use crate::config::{OutputFormat, RunConfig, UnitAudit};
use crate::coupling::{parseval_sum, parseval_x, parseval_y};
use crate::error::{Error, Result};
use crate::golden_rule::{
    purcell_ratio, rate_cavity_with_dipole, rate_free_space, rate_planewave_with_dipole,
    rate_waveguide_with_dipole,
};
use crate::langevin::{
    fig2_curve, fig2_inset, geometric_factor, q_eff_outcoupling_limit, q_norm_argmax, steady_state, Regime,
};
use crate::mc_validator::{
    check_decay_without_noise, check_noise_correlators, default_sde_config, detuned_ensemble_case,
    em_stationary_moment, log_log_slope, single_bin_case, thermal_case,
};
use crate::modes::{solve_dispersion, Geometry, ModeIndex};
use crate::output::{Cell, Table};
use crate::units::{mev_to_rad_s, rad_s_to_mev, um_to_cm, C_LIGHT, E_CHARGE, NM};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

const UNITS: &str = "lengths um/nm, energies and rates meV (hbar*omega), dipoles e*nm, power W";

#[derive(Debug, Parser)]
#[command(name = "purcell", version, about = "Emission of 2D emitters in subwavelength cavities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; defaults to output.path in the config, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the Monte Carlo seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print every converted input in CGS to stderr.
    #[arg(long, global = true)]
    pub audit_units: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Golden-rule rates and the cavity/free-space ratio.
    Rates,
    /// Langevin steady state for the configured system.
    SteadyState,
    /// Steady state over the `sweep` block.
    Sweep,
    /// Normalized effective Q against Γr/γ21, plus the detuning inset.
    Fig2,
    /// Mid-infrared Q_eff and geometric-factor table.
    Midir,
    /// Stochastic oracle suite with a pass/fail report.
    Validate {
        /// Fewer trajectories, for smoke testing.
        #[arg(long)]
        quick: bool,
    },
    /// Truncated sums of squared transverse factors.
    VerifyParseval {
        #[arg(long, default_value_t = 40)]
        lobes: usize,
    },
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return report(&Error::Config(format!("thread pool: {e}"))),
    };
    match pool.install(|| execute(&cli)) {
        Ok(code) => code,
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> i32 {
    let code = e.class().exit_code();
    eprintln!("error kind={} code={} message={:?}", e.kind(), code, e.to_string());
    code
}

struct Loaded {
    cfg: Option<RunConfig>,
}

impl Loaded {
    fn require(&self, cmd: &str) -> Result<&RunConfig> {
        self.cfg
            .as_ref()
            .ok_or_else(|| Error::Config(format!("--config is required for `{cmd}`")))
    }
}

fn load(path: Option<&Path>) -> Result<Option<RunConfig>> {
    let Some(p) = path else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(p)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
    RunConfig::from_json(&text).map(Some)
}

fn missing(block: &str) -> Error {
    Error::Config(format!("missing required key `{block}`"))
}

fn execute(cli: &Cli) -> Result<i32> {
    let loaded = Loaded {
        cfg: load(cli.config.as_deref())?,
    };
    if cli.audit_units {
        if let Some(cfg) = &loaded.cfg {
            let mut audit = UnitAudit {
                enabled: true,
                lines: Vec::new(),
            };
            cfg.build(&mut audit)?;
            for l in &audit.lines {
                eprintln!("{l}");
            }
        }
    }
    let format = loaded
        .cfg
        .as_ref()
        .and_then(|c| c.output.as_ref())
        .map(|o| o.format)
        .unwrap_or_default();
    let out_path = cli.out.clone().or_else(|| {
        loaded
            .cfg
            .as_ref()
            .and_then(|c| c.output.as_ref())
            .and_then(|o| o.path.clone())
            .map(PathBuf::from)
    });
    let mut code = 0;
    let (name, mut tables): (&str, Vec<(Option<&str>, Table)>) = match &cli.command {
        Command::Rates => ("rates", vec![(None, rates(loaded.require("rates")?)?)]),
        Command::SteadyState => ("steady-state", vec![(None, steady(loaded.require("steady-state")?)?)]),
        Command::Sweep => ("sweep", vec![(None, sweep(loaded.require("sweep")?)?)]),
        Command::Fig2 => {
            let (main, inset) = fig2(loaded.require("fig2")?)?;
            ("fig2", vec![(None, main), (Some("inset"), inset)])
        }
        Command::Midir => ("midir", vec![(None, midir(loaded.require("midir")?)?)]),
        Command::Validate { quick } => {
            let (table, pass) = validate(loaded.cfg.as_ref(), cli.seed, *quick)?;
            if !pass {
                code = 4;
            }
            ("validate", vec![(None, table)])
        }
        Command::VerifyParseval { lobes } => ("verify-parseval", vec![(None, parseval(loaded.cfg.as_ref(), *lobes)?)]),
    };
    let hash = loaded.cfg.as_ref().map(|c| c.hash()).unwrap_or_else(|| "none".into());
    for (_, t) in tables.iter_mut() {
        let mut meta = vec![
            ("tool".to_string(), format!("purcell2d {}", env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), name.to_string()),
            ("config_sha256".to_string(), hash.clone()),
            ("units".to_string(), UNITS.to_string()),
        ];
        meta.append(&mut t.metadata);
        t.metadata = meta;
    }
    write_tables(&tables, out_path.as_deref(), format)?;
    Ok(code)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn write_tables(tables: &[(Option<&str>, Table)], out: Option<&Path>, format: OutputFormat) -> Result<()> {
    for (i, (suffix, t)) in tables.iter().enumerate() {
        let text = t.render(format);
        match (out, suffix) {
            (Some(p), None) => std::fs::write(p, text),
            (Some(p), Some(s)) => std::fs::write(sibling(p, s), text),
            (None, _) => {
                let mut stdout = std::io::stdout().lock();
                let sep = if i > 0 { "\n" } else { "" };
                match write!(stdout, "{sep}{text}").and_then(|_| stdout.flush()) {
                    // a closed reader (e.g. `| head`) is not a failure
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    r => r,
                }
            }
        }
        .map_err(|e| Error::Config(format!("cannot write output: {e}")))?;
    }
    Ok(())
}

fn e_nm(d: f64) -> f64 {
    d / (E_CHARGE * NM)
}

/// Power in W from erg/s.
fn watts(p: f64) -> f64 {
    p * 1e-7
}

fn rates(cfg: &RunConfig) -> Result<Table> {
    let sys = cfg.build(&mut UnitAudit::default())?;
    let sheet = sys.sheet.as_ref().ok_or_else(|| missing("emitter"))?;
    let ens = sheet.ensemble(&sys.geometry)?;
    let w21 = ens.mean_omega21();
    let d = sheet.effective_dipole(&sys.stack, w21)?;
    let mut t = Table::new(&["quantity", "value", "unit", "status"]);
    let row = |t: &mut Table, q: &str, r: Result<f64>, unit: &str| match r {
        Ok(v) => t.push(vec![q.into(), v.into(), unit.into(), "ok".into()]),
        Err(e) => t.push(vec![q.into(), f64::NAN.into(), unit.into(), e.kind().into()]),
    };
    row(&mut t, "omega21", Ok(rad_s_to_mev(w21)), "meV");
    row(&mut t, "effective_dipole", Ok(e_nm(d)), "e*nm");
    row(&mut t, "bare_dipole", sheet.bare_dipole().map(e_nm), "e*nm");
    row(&mut t, "rate_planewave", rate_planewave_with_dipole(d, &sys.stack, w21).map(|r| r.rate), "1/s");
    row(
        &mut t,
        "rate_waveguide",
        rate_waveguide_with_dipole(d, &sys.stack, &sys.geometry, w21).map(|r| r.rate),
        "1/s",
    );
    let linewidth: Result<f64> = match cfg.rates.as_ref().and_then(|r| r.cavity_linewidth_mev) {
        Some(mev) => Ok(mev_to_rad_s(mev)),
        None => steady_result(cfg).map(|(_, _, r)| r.delta_omega_eff),
    };
    let cavity = match (&sys.mode, &linewidth) {
        (Some((mode @ ModeIndex::Cavity { .. }, bracket)), Ok(dw)) => {
            solve_dispersion(&sys.stack, &sys.geometry, *mode, *bracket).and_then(|sol| {
                let d_nu = sheet.effective_dipole(&sys.stack, sol.omega)?;
                rate_cavity_with_dipole(d_nu, sol.g, &sys.geometry, sol.omega, *dw).map(|r| r.rate)
            })
        }
        (Some((ModeIndex::Cavity { .. }, _)), Err(e)) => Err(e.clone()),
        _ => Err(Error::Config("mode block must select a cavity".into())),
    };
    row(&mut t, "cavity_linewidth", linewidth.clone().map(rad_s_to_mev), "meV");
    row(&mut t, "rate_cavity", cavity, "1/s");
    let eps = sys.stack.uniform_constant_eps().ok_or(Error::NonUniformStack);
    row(
        &mut t,
        "rate_free_space",
        eps.clone()
            .and_then(|e| rate_free_space(sheet.bare_dipole()?, w21, e)),
        "1/s",
    );
    let ratio = linewidth.and_then(|dw| purcell_ratio(&sys.geometry, &sys.stack, w21, dw));
    row(&mut t, "purcell_formula", ratio.clone().map(|p| p.formula), "1");
    row(&mut t, "purcell_quotient", ratio.map(|p| p.direct_quotient), "1");
    Ok(t)
}

const STEADY_COLUMNS: [&str; 16] = [
    "omega_nu_meV",
    "rabi_meV",
    "delta_omega_shift_meV",
    "gamma_medium_meV",
    "gamma_total_meV",
    "photon_number",
    "photon_number_emission",
    "power_W",
    "delta_omega_eff_meV",
    "q_eff",
    "q_norm",
    "limit_narrow_W",
    "limit_wide_W",
    "regime",
    "inverted",
    "subwavelength_warning",
];

fn steady_result(cfg: &RunConfig) -> Result<(crate::modes::ModeSolution, f64, crate::langevin::SpectralResult)> {
    let sys = cfg.build(&mut UnitAudit::default())?;
    let (mode, bracket) = sys.mode.ok_or_else(|| missing("mode"))?;
    let sheet = sys.sheet.as_ref().ok_or_else(|| missing("emitter"))?;
    let (params, absorb) = sys.langevin.ok_or_else(|| missing("langevin"))?;
    let sol = solve_dispersion(&sys.stack, &sys.geometry, mode, bracket)?;
    let d = sheet.effective_dipole(&sys.stack, sol.omega)?;
    let rabi2 = sol.rabi_squared(d, &sys.geometry);
    let ens = sheet.ensemble(&sys.geometry)?;
    let r = steady_state(&ens, rabi2, sol.omega, &params, absorb)?;
    Ok((sol, rabi2, r))
}

fn steady_row(cfg: &RunConfig) -> Result<Vec<Cell>> {
    let (sol, rabi2, r) = steady_result(cfg)?;
    let regime = match r.regime {
        Regime::Narrow => "narrow",
        Regime::Intermediate => "intermediate",
        Regime::Wide => "wide",
    };
    Ok(vec![
        rad_s_to_mev(r.omega_nu_used).into(),
        rad_s_to_mev(rabi2.sqrt()).into(),
        rad_s_to_mev(r.delta_omega_shift).into(),
        rad_s_to_mev(r.gamma_medium).into(),
        rad_s_to_mev(r.gamma_total).into(),
        r.photon_number.into(),
        r.photon_number_emission.into(),
        watts(r.power).into(),
        rad_s_to_mev(r.delta_omega_eff).into(),
        r.q_eff.into(),
        r.q_norm.into(),
        watts(r.limit_narrow).into(),
        watts(r.limit_wide).into(),
        regime.into(),
        r.inverted.into(),
        sol.subwavelength_warning.into(),
    ])
}

fn steady(cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&STEADY_COLUMNS);
    t.push(steady_row(cfg)?);
    Ok(t)
}

fn sweep(cfg: &RunConfig) -> Result<Table> {
    let s = cfg.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
    let values = s.values()?;
    let base = serde_json::to_value(cfg).map_err(|e| Error::Config(e.to_string()))?;
    let rows: Vec<Result<Vec<Cell>>> = values
        .par_iter()
        .map(|&v| {
            let mut doc = base.clone();
            crate::config::set_path(&mut doc, &s.parameter, v)?;
            let point = RunConfig::from_value(doc)?;
            let mut row = vec![Cell::Num(v)];
            row.extend(steady_row(&point)?);
            Ok(row)
        })
        .collect();
    let mut cols = vec![s.parameter.as_str()];
    cols.extend(STEADY_COLUMNS);
    let mut t = Table::new(&cols);
    for r in rows {
        t.push(r?);
    }
    Ok(t)
}

fn fig2(cfg: &RunConfig) -> Result<(Table, Table)> {
    let f = cfg.fig2.clone().unwrap_or_else(|| serde_json::from_str("{}").expect("defaults"));
    let g_rel = f.g_over_gamma21.unwrap_or_else(|| {
        eprintln!("warning: fig2.g_over_gamma21 not set; using g = 0");
        0.0
    });
    if !(g_rel.is_finite() && g_rel >= 0.0) {
        return Err(Error::Config("fig2.g_over_gamma21 must be finite and >= 0".into()));
    }
    let mut main = Table::new(&["gamma_r_over_gamma21", "q_norm"]);
    main.meta("g_over_gamma21", crate::output::format_number(g_rel));
    if g_rel > 0.0 {
        main.meta("analytic_argmax", crate::output::format_number(q_norm_argmax(1.0, g_rel)));
    }
    for (x, q) in fig2_curve(1.0, g_rel, f.points)? {
        main.push(vec![x.into(), q.into()]);
    }
    let mut inset = Table::new(&["detuning_over_gamma21", "q_norm"]);
    inset.meta("g_over_gamma21", crate::output::format_number(g_rel));
    for (x, q) in fig2_inset(1.0, g_rel, f.inset_points)? {
        inset.push(vec![x.into(), q.into()]);
    }
    Ok((main, inset))
}

fn midir(cfg: &RunConfig) -> Result<Table> {
    let m = cfg.midir.clone().unwrap_or_else(|| serde_json::from_str("{}").expect("defaults"));
    let stack = cfg.stack(&mut UnitAudit::default())?;
    let geometry = Geometry::for_stack(um_to_cm(cfg.geometry.lx_um), um_to_cm(cfg.geometry.ly_um), &stack)?;
    let eps = stack.uniform_constant_eps();
    let mut t = Table::new(&[
        "hw21_meV",
        "full_linewidth_meV",
        "gamma_r_over_gamma21",
        "q_eff",
        "q_eff_limit",
        "lambda_over_sqrt_eps_um",
        "geometric_factor",
    ]);
    t.meta("reference_q_eff", "50-100 (quoted estimate, shown for comparison only)");
    let gamma21 = mev_to_rad_s(0.5 * m.full_linewidth_mev);
    for &hw in &m.hw21_mev {
        let w21 = mev_to_rad_s(hw);
        let (lam, geo) = match eps {
            Some(e) => (
                2.0 * std::f64::consts::PI * C_LIGHT / (w21 * e.sqrt()) / 1e-4,
                geometric_factor(&geometry, stack.lz(), w21, e),
            ),
            None => (f64::NAN, f64::NAN),
        };
        for &ratio in &m.gamma_r_over_gamma21 {
            let gr = ratio * gamma21;
            t.push(vec![
                hw.into(),
                m.full_linewidth_mev.into(),
                ratio.into(),
                q_eff_outcoupling_limit(w21, gamma21, gr).into(),
                q_eff_outcoupling_limit(w21, gamma21, 0.0).into(),
                lam.into(),
                geo.into(),
            ]);
        }
    }
    Ok(t)
}

fn parseval(cfg: Option<&RunConfig>, lobes: usize) -> Result<Table> {
    let (lx, ly) = cfg
        .map(|c| (um_to_cm(c.geometry.lx_um), um_to_cm(c.geometry.ly_um)))
        .unwrap_or((1e-4, 1e-4));
    let g = Geometry::new(lx, ly, 1e-5)?;
    let (kx, ky) = (0.37 * std::f64::consts::PI / lx, -0.61 * std::f64::consts::PI / ly);
    let mut t = Table::new(&["sum", "value", "expected", "abs_error", "tolerance", "pass"]);
    let checks = [
        ("y", parseval_y(ky, ly, lobes)?, 0.5, 2e-3),
        ("x_odd", parseval_x(kx, lx, 1, lobes)?, 0.5, 2e-3),
        ("x_even", parseval_x(kx, lx, 2, lobes)?, 0.5, 2e-3),
        ("cavity", parseval_sum(&ModeIndex::Cavity { n: 1 }, &g, (kx, ky), lobes)?, 0.25, 2e-3),
    ];
    for (name, v, expected, tol) in checks {
        let err = (v - expected).abs();
        t.push(vec![name.into(), v.into(), expected.into(), err.into(), tol.into(), (err <= tol).into()]);
    }
    Ok(t)
}

fn validate(cfg: Option<&RunConfig>, seed: Option<u64>, quick: bool) -> Result<(Table, bool)> {
    let mc = cfg.and_then(|c| c.monte_carlo.clone()).unwrap_or_default();
    let seed = seed.unwrap_or(mc.seed);
    let trajectories = if quick { 200 } else { mc.trajectories };
    let dt = if quick { 1e-2 } else { mc.dt_over_gamma21 };
    let mut sde = default_sde_config(dt, trajectories, seed);
    sde.t_end = mc.t_end_over_gamma21;
    sde.burn_in = mc.burn_in_over_gamma21;
    sde.k_modes = mc.k_modes;
    let mut t = Table::new(&["check", "value", "expected", "sigma", "pass"]);
    let mut all = true;
    let mut push = |t: &mut Table, name: &str, value: f64, expected: f64, sigma: f64, pass: bool| {
        all &= pass;
        let line = json!({"check": name, "value": value, "expected": expected, "sigma": sigma, "pass": pass});
        eprintln!("{line}");
        t.push(vec![name.into(), value.into(), expected.into(), sigma.into(), pass.into()]);
    };
    let steps = if quick { 100_000 } else { 1_000_000 };
    let r = check_noise_correlators(1.0, 0.0, 1e-3, steps, seed)?;
    push(&mut t, "noise_zero_occupation", r.empirical, r.configured, r.std_error, r.pass);
    let r = check_noise_correlators(1.0, 2.0, 1e-3, steps, seed)?;
    push(&mut t, "noise_occupation_2", r.empirical, r.configured, r.std_error, r.pass);
    push(&mut t, "noise_commutator", r.commutator_ratio, 1.0, 0.0, (r.commutator_ratio - 1.0).abs() < 1e-12);
    push(&mut t, "noise_cross_covariance", r.cross_covariance.norm(), 0.0, r.cross_std_error, r.pass);
    let d = check_decay_without_noise(1.0, 0.0, 1.0, 1e-4)?;
    push(&mut t, "decay_damped", d.amplitude, d.exact_amplitude, d.bound, d.pass && d.rel_error < 1e-3);
    let d = check_decay_without_noise(0.0, 2.0, 1.0, 1e-4)?;
    let slope_ok = (d.phase_slope / -2.0 - 1.0).abs() < 1e-6;
    push(&mut t, "decay_detuned_phase", d.phase_slope, -2.0, 0.0, slope_ok);
    for case in [single_bin_case(), detuned_ensemble_case(), thermal_case()] {
        let exact = case.analytic()?;
        let est = case.simulate(&sde)?;
        let pass = (est.photon_number_mean - exact).abs() <= 3.0 * est.std_error;
        push(&mut t, case.name, est.photon_number_mean, exact, est.std_error, pass);
    }
    let case = single_bin_case();
    let exact = case.analytic()?;
    let dts = [1e-3, 5e-4, 2.5e-4];
    let errs = dts
        .iter()
        .map(|&h| Ok((em_stationary_moment(&case.ensemble, case.rabi2, case.omega_nu, &case.params, h)? - exact).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let slope = log_log_slope(&dts, &errs);
    push(&mut t, "em_weak_order", slope, 1.0, 0.3, (slope - 1.0).abs() <= 0.3);
    let failed = t.rows.iter().filter(|r| r[4] == Cell::Text("false".into())).count();
    eprintln!("validate: {} checks, {} failed", t.rows.len(), failed);
    t.meta("seed", seed.to_string());
    Ok((t, all))
}
