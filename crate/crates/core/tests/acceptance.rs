//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use common::{real_line, rel, uniform, well_sheet};
use num_complex::Complex64;
use purcell2d::coupling::{parseval_sum, parseval_x, parseval_y, x_factor, y_factor, MIN_LOBES};
use purcell2d::dielectric::{DielectricStack, DispersionModel};
use purcell2d::emitter::{Ensemble, KBin};
use purcell2d::golden_rule::{rate_cavity, rate_free_space};
use purcell2d::langevin::{
    effective_linewidth, emitted_power, fig2_curve, geometric_factor, limit_powers, photon_term,
    q_eff_outcoupling_limit, q_eff_resonant, q_norm, q_norm_argmax, LangevinParams,
};
use purcell2d::mc_validator::{
    default_sde_config, detuned_ensemble_case, em_stationary_moment, log_log_slope, single_bin_case,
    thermal_case, McCase,
};
use purcell2d::modes::{normalization_d2, solve_dispersion, zeta, Geometry, ModeIndex};
use purcell2d::quadrature::Adaptive;
use purcell2d::units::{mev_to_rad_s, um_to_cm, C_LIGHT, HBAR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_quantization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let eps: f64 = rng.random_range(1.0..16.0);
        let g = Geometry::new(
            um_to_cm(rng.random_range(0.3..5.0)),
            um_to_cm(rng.random_range(0.3..5.0)),
            um_to_cm(rng.random_range(0.02..0.5)),
        )
        .unwrap();
        let stack = uniform(eps, g.lz);
        let omega = rng.random_range(5e13..5e14);
        let modes = [
            ModeIndex::PlaneWave { qx: 1e4, qy: -2e4 },
            ModeIndex::Waveguide { qx: 3e4 },
            ModeIndex::Cavity { n: rng.random_range(1..6) },
        ];
        for mode in modes {
            let d2 = normalization_d2(&stack, &g, &mode, omega).unwrap();
            // mode-averaged |E|² = |D|²/ε² weighted by ∫|ζ|²/S
            let norm = match mode {
                ModeIndex::PlaneWave { .. } => 1.0,
                ModeIndex::Waveguide { .. } => 0.5,
                ModeIndex::Cavity { .. } => 0.25,
            };
            let e2 = d2 / (eps * eps) * norm;
            let expect = 2.0 * PI * HBAR * omega / (g.volume() * eps);
            worst = worst.max(rel(e2, expect));
        }
    }
    outcome(worst < 1e-12, format!("max rel err {worst:.2e} (tol 1e-12)"))
}

fn c2_dispersion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_closed: f64 = 0.0;
    let mut worst_root: f64 = 0.0;
    for _ in 0..50 {
        let eps: f64 = rng.random_range(1.0..16.0);
        let lx = um_to_cm(rng.random_range(0.5..5.0));
        let ly = um_to_cm(rng.random_range(0.5..5.0));
        let g = Geometry::new(lx, ly, um_to_cm(0.1)).unwrap();
        let n = rng.random_range(1..5u32);
        let mode = ModeIndex::Cavity { n };
        let k = ((n as f64 * PI / lx).powi(2) + (PI / ly).powi(2)).sqrt();
        let expect = C_LIGHT * k / eps.sqrt();
        let sol = solve_dispersion(&uniform(eps, g.lz), &g, mode, None).unwrap();
        worst_closed = worst_closed.max(rel(sol.omega, expect));
        // Lorentz filling with zero oscillator strength forces the bracketed solver
        let flat = DielectricStack::uniform(DispersionModel::lorentz(eps, 0.0, 100.0 * expect), g.lz).unwrap();
        let sol = solve_dispersion(&flat, &g, mode, Some((0.3 * expect, 3.0 * expect))).unwrap();
        worst_root = worst_root.max(rel(sol.omega, expect));
    }
    let mut worst_res: f64 = 0.0;
    let g = Geometry::new(um_to_cm(2.0), um_to_cm(2.0), um_to_cm(0.2)).unwrap();
    let w0 = 5e14;
    let stacks = [
        DielectricStack::uniform(DispersionModel::lorentz(10.0, 3e14, w0), g.lz).unwrap(),
        DielectricStack::from_thicknesses(&[
            (um_to_cm(0.05), DispersionModel::constant(12.0)),
            (um_to_cm(0.1), DispersionModel::lorentz(10.0, 3e14, w0)),
            (um_to_cm(0.05), DispersionModel::constant(12.0)),
        ])
        .unwrap(),
    ];
    for stack in &stacks {
        for n in 1..=3 {
            let mode = ModeIndex::Cavity { n };
            let sol = solve_dispersion(stack, &g, mode, Some((0.05 * w0, 0.99 * w0))).unwrap();
            worst_res = worst_res.max(purcell2d::modes::dispersion_residual(stack, &g, &mode, sol.omega).unwrap());
        }
    }
    let pass = worst_closed < 1e-12 && worst_root < 1e-12 && worst_res < 1e-10;
    outcome(
        pass,
        format!(
            "closed form {worst_closed:.2e}, bracketed solver {worst_root:.2e} (tol 1e-12); Lorentz residual {worst_res:.2e} (tol 1e-10)"
        ),
    )
}

/// (1/L)∫ e^{i(k−k')x} f(x) dx over the box by adaptive quadrature.
fn overlap_quadrature(k: f64, kp: f64, l: f64, f: impl Fn(f64) -> f64) -> Complex64 {
    let q = Adaptive::with_rel_tol(1e-14);
    let s = k - kp;
    let re = q.integrate(|x| (s * x).cos() * f(x), -0.5 * l, 0.5 * l).unwrap().value;
    let im = q.integrate(|x| (s * x).sin() * f(x), -0.5 * l, 0.5 * l).unwrap().value;
    Complex64::new(re, im) / l
}

fn c3_appendix_factors() -> Outcome {
    let (lx, ly) = (um_to_cm(2.7), um_to_cm(1.9));
    let g = Geometry::new(lx, ly, um_to_cm(0.1)).unwrap();
    let (kx, ky) = (0.37 * PI / lx, -0.61 * PI / ly);
    let lobes = MIN_LOBES;
    let sums = [
        ("Y", parseval_y(ky, ly, lobes).unwrap(), 0.5),
        ("X odd", parseval_x(kx, lx, 3, lobes).unwrap(), 0.5),
        ("X even", parseval_x(kx, lx, 2, lobes).unwrap(), 0.5),
        (
            "cavity",
            parseval_sum(&ModeIndex::Cavity { n: 1 }, &g, (kx, ky), lobes).unwrap(),
            0.25,
        ),
    ];
    let worst_sum = sums.iter().map(|(_, v, e)| (v - e).abs()).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let wg = ModeIndex::Waveguide { qx: 0.0 };
    for i in 0..100 {
        let n = 1 + (i % 4) as u32;
        let k = rng.random_range(-3.0..3.0) * PI / ly;
        let kp = k + rng.random_range(-6.0..6.0) * PI / ly;
        let q = overlap_quadrature(k, kp, ly, |y| zeta(&wg, &g, 0.0, y).unwrap().re);
        worst = worst.max((Complex64::new(y_factor(k, kp, ly), 0.0) - q).norm() / q.norm());

        let cav = ModeIndex::Cavity { n };
        let k = rng.random_range(-3.0..3.0) * PI / lx;
        let kp = k + rng.random_range(-6.0..6.0) * PI / lx;
        let q = overlap_quadrature(k, kp, lx, |x| zeta(&cav, &g, x, 0.0).unwrap().re);
        worst = worst.max((x_factor(k, kp, lx, n) - q).norm() / q.norm());
    }
    let names: Vec<String> = sums.iter().map(|(n, v, _)| format!("{n} {v:.7}")).collect();
    outcome(
        worst_sum < 2e-3 && worst < 1e-8,
        format!(
            "sums [{}] max dev {worst_sum:.2e} (tol 2e-3); factors vs quadrature max rel {worst:.2e} (tol 1e-8)",
            names.join(", ")
        ),
    )
}

fn c4_purcell() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let eps: f64 = rng.random_range(1.0..16.0);
        let lz = um_to_cm(rng.random_range(0.05..0.4));
        let g = Geometry::new(um_to_cm(rng.random_range(0.5..5.0)), um_to_cm(rng.random_range(0.5..5.0)), lz).unwrap();
        let stack = uniform(eps, lz);
        let sol = solve_dispersion(&stack, &g, ModeIndex::Cavity { n: rng.random_range(1..4) }, None).unwrap();
        let dw = sol.omega / rng.random_range(5.0..200.0);
        let sheet = well_sheet(rng.random_range(5.0..20.0f64).min(0.5e7 * lz), 120.0, 0.0, 1.0, 1e12);
        let cavity = rate_cavity(&sheet, &stack, &g, &sol, dw).unwrap().rate;
        let free = rate_free_space(sheet.bare_dipole().unwrap(), sol.omega, eps).unwrap();
        let formula = 1.5 * PI * (C_LIGHT / (sol.omega * eps.sqrt())).powi(3) / g.volume() * 4.0 * sol.omega / dw;
        worst = worst.max(rel(cavity / free, formula));
    }
    outcome(worst < 1e-10, format!("max rel err {worst:.2e} over 50 draws (tol 1e-10)"))
}

fn c5_langevin() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_n: f64 = 0.0;
    for _ in 0..100 {
        let w21 = rng.random_range(1e14..3e14);
        let g21: f64 = rng.random_range(1e11..1e13);
        let gt = rng.random_range(1e11..1e13);
        let wn = w21 + rng.random_range(-20.0..20.0) * g21.max(gt);
        let n2 = rng.random_range(0.01..1.0);
        let rabi2 = rng.random_range(1e18..1e22);
        let bin = KBin {
            weight: 1.0,
            n1: 0.0,
            n2,
            gamma21: g21,
            omega21: w21,
        };
        let closed = photon_term(&bin, rabi2, wn, gt);
        let quad = rabi2 / PI
            * real_line(
                |w| g21 * n2 / (((wn - w).powi(2) + gt * gt) * ((w21 - w).powi(2) + g21 * g21)),
                &[wn.min(w21), wn.max(w21)],
                g21.max(gt),
            );
        worst_n = worst_n.max(rel(closed, quad));
    }
    let mut worst_q: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for _ in 0..20 {
        let w21 = rng.random_range(1e14..3e14);
        let g21: f64 = rng.random_range(1e11..1e13);
        let p = LangevinParams::new(rng.random_range(1e10..1e13), rng.random_range(0.0..1e12), 0.0, 0.0).unwrap();
        let gamma = rng.random_range(-0.5..1.0) * p.cavity_loss();
        let gt = p.total_loss(gamma).unwrap();
        let inv_dw = |wn: f64| {
            real_line(
                |w| 2.0 * p.gamma_r * g21 / (((wn - w).powi(2) + gt * gt) * ((w21 - w).powi(2) + g21 * g21)),
                &[wn.min(w21), wn.max(w21)],
                g21.max(gt),
            ) / (4.0 * PI)
        };
        let q_quad = w21 * inv_dw(w21);
        worst_q = worst_q.max(rel(q_quad, q_eff_resonant(w21, g21, p.gamma_r, gt - p.gamma_r)));
        let wn = w21 + rng.random_range(-10.0..10.0) * g21;
        let dw = effective_linewidth(g21, w21, wn, &p, gamma).unwrap();
        worst_det = worst_det.max(rel(1.0 / dw, inv_dw(wn)));
    }
    outcome(
        worst_n < 1e-8 && worst_q < 1e-6 && worst_det < 1e-6,
        format!(
            "per-k photon term {worst_n:.2e} (tol 1e-8); resonant Q_eff {worst_q:.2e}, detuned linewidth {worst_det:.2e} (tol 1e-6)"
        ),
    )
}

fn c6_limits() -> Outcome {
    let w = 1.5e14;
    let g21 = 1e11;
    // n1 = n2 keeps the medium transparent so Γt is set by the cavity alone
    let ens = Ensemble::new(vec![KBin {
        weight: 1e4,
        n1: 0.5,
        n2: 0.5,
        gamma21: g21,
        omega21: w,
    }])
    .unwrap();
    let rabi2 = 1e16;
    let narrow_p = LangevinParams::new(100.0 * g21, 0.0, 0.0, 0.0).unwrap();
    let wide_p = LangevinParams::new(0.01 * g21, 0.0, 0.0, 0.0).unwrap();
    let exact_n = emitted_power(&ens, rabi2, w, &narrow_p).unwrap();
    let exact_w = emitted_power(&ens, rabi2, w, &wide_p).unwrap();
    let ln = limit_powers(&ens, rabi2, w, &narrow_p).unwrap();
    let lw = limit_powers(&ens, rabi2, w, &wide_p).unwrap();
    let (en, ew) = (rel(ln.narrow, exact_n), rel(lw.wide, exact_w));
    outcome(
        en < 0.05 && ew < 0.05,
        format!("Γt/γ21 = 100: {en:.3e}; Γt/γ21 = 0.01: {ew:.3e} (tol 5e-2)"),
    )
}

fn c7_monte_carlo() -> Outcome {
    let cases: [(McCase, u64); 3] = [(single_bin_case(), 101), (detuned_ensemble_case(), 202), (thermal_case(), 303)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (case, seed) in cases {
        let analytic = case.analytic().unwrap();
        let est = case.simulate(&default_sde_config(2e-3, 2000, seed)).unwrap();
        let z = est.z_score(analytic);
        pass &= z.abs() <= 3.0;
        parts.push(format!(
            "{} {:.5}±{:.5} vs {:.5} (z {:+.2})",
            case.name, est.photon_number_mean, est.std_error, analytic, z
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c8_euler_maruyama() -> Outcome {
    let dts = [1e-3, 5e-4, 2.5e-4];
    let mut pass = true;
    let mut parts = Vec::new();
    for case in [single_bin_case(), detuned_ensemble_case()] {
        let exact = case.analytic().unwrap();
        let errs: Vec<f64> = dts
            .iter()
            .map(|&dt| (em_stationary_moment(&case.ensemble, case.rabi2, case.omega_nu, &case.params, dt).unwrap() - exact).abs())
            .collect();
        let slope = log_log_slope(&dts, &errs);
        pass &= (slope - 1.0).abs() <= 0.3;
        parts.push(format!("{} slope {slope:.4}", case.name));
    }
    // sampled trajectories agree with the discrete stationary moment at coarse dt
    let case = single_bin_case();
    let dt = 0.05;
    let discrete = em_stationary_moment(&case.ensemble, case.rabi2, case.omega_nu, &case.params, dt).unwrap();
    let est = case.simulate(&default_sde_config(dt, 2000, 808)).unwrap();
    let z = est.z_score(discrete);
    pass &= z.abs() <= 3.0;
    parts.push(format!("sampled vs discrete moment at dt 0.05: z {z:+.2}"));
    outcome(pass, format!("{} (tol 1.0±0.3)", parts.join("; ")))
}

fn c9_fig2() -> Outcome {
    let points = 4001;
    let step = (1e4f64).ln() / (points - 1) as f64;
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [0.05, 0.3, 1.0, 3.0] {
        let curve = fig2_curve(1.0, g, points).unwrap();
        let (imax, _) = curve
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |acc, (i, &(_, q))| if q > acc.1 { (i, q) } else { acc });
        let unimodal = curve[..=imax].windows(2).all(|w| w[1].1 > w[0].1)
            && curve[imax..].windows(2).all(|w| w[1].1 < w[0].1);
        let interior = imax > 0 && imax < points - 1;
        let off = (curve[imax].0 / q_norm_argmax(1.0, g)).ln().abs();
        pass &= unimodal && interior && off <= step;
        parts.push(format!("g {g}: |ln ratio| {off:.1e}"));
    }
    let flat = fig2_curve(1.0, 0.0, points).unwrap();
    let monotone = flat.windows(2).all(|w| w[1].1 < w[0].1);
    let start = q_norm(1.0, 0.0, 1e-12, 0.0);
    pass &= monotone && (start - 1.0).abs() < 1e-10;
    parts.push(format!("g 0: monotone {monotone}, Q_norm(0+) {start:.12}"));
    outcome(pass, format!("{} (grid step {step:.1e})", parts.join("; ")))
}

fn c10_midir() -> Outcome {
    let g21 = mev_to_rad_s(5.0);
    let mut worst: f64 = 0.0;
    let mut full_ok = true;
    let mut parts = Vec::new();
    for (e21, expect) in [(100.0, 10.0), (200.0, 20.0)] {
        let w21 = mev_to_rad_s(e21);
        let limit = q_eff_outcoupling_limit(w21, g21, 0.0);
        let full = q_eff_resonant(w21, g21, 1e-9 * g21, 0.0);
        worst = worst.max(rel(limit, expect));
        // Γr = 1e-9·γ21 leaves a relative offset of the same size
        full_ok &= rel(full, expect) < 2e-9;
        parts.push(format!("{e21} meV → {limit:.12}"));
    }
    // λ/(2√ε) = 1 µm in 1×1×0.1 µm³, and λ/√ε = 6 µm in 3×3×0.2 µm³
    let omega_of = |lam_um: f64| 2.0 * PI * C_LIGHT / um_to_cm(lam_um);
    let g1 = Geometry::new(um_to_cm(1.0), um_to_cm(1.0), um_to_cm(0.1)).unwrap();
    let g2 = Geometry::new(um_to_cm(3.0), um_to_cm(3.0), um_to_cm(0.2)).unwrap();
    let f1 = geometric_factor(&g1, g1.lz, omega_of(2.0), 1.0);
    let f2 = geometric_factor(&g2, g2.lz, omega_of(6.0 * 3.0), 9.0);
    let e1 = rel(f1, 60.0 / (PI * PI));
    let e2 = rel(f2, 90.0 / (PI * PI));
    worst = worst.max(e1).max(e2);
    parts.push(format!("geometric factors {f1:.10}, {f2:.10}"));
    outcome(worst < 1e-12 && full_ok, format!("{} max rel err {worst:.1e} (tol 1e-12)", parts.join("; ")))
}

fn run_cli(args: &[&str]) -> i32 {
    let mut full = vec!["purcell".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    purcell2d::cli::run(full)
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/midir_cavity.json");
    let mut parts = Vec::new();
    let mut pass = true;
    let jobs: [(&str, Vec<&str>); 2] = [
        ("sweep", vec!["--config", config, "sweep"]),
        ("validate", vec!["validate", "--quick"]),
    ];
    for (name, job) in jobs {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{name}_{run}.csv"));
            let path_s = path.to_str().unwrap().to_string();
            let mut args = vec!["--threads", "1", "--seed", "2024", "--out", &path_s];
            args.extend(job.iter().copied());
            let code = run_cli(&args);
            outputs.push((code, std::fs::read(&path).unwrap_or_default()));
        }
        let same = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
        pass &= same && outputs[0].0 == 0 && outputs[1].0 == 0;
        parts.push(format!(
            "{name}: exit {}/{}, {} bytes, identical {same}",
            outputs[0].0,
            outputs[1].0,
            outputs[0].1.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn main() {
    type Criterion = (&'static str, &'static str, f64, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("1", "quantization normalization", 1.0, c1_quantization),
        ("2", "dispersion roots", 1.0, c2_dispersion),
        ("3", "transverse overlap factors", 30.0, c3_appendix_factors),
        ("4", "Purcell identity", 1.0, c4_purcell),
        ("5", "Langevin closed forms", 10.0, c5_langevin),
        ("6", "limit consistency", 1.0, c6_limits),
        ("7", "Monte Carlo oracle", 300.0, c7_monte_carlo),
        ("8", "Euler-Maruyama convergence", 300.0, c8_euler_maruyama),
        ("9", "normalized Q curve shape", 1.0, c9_fig2),
        ("10", "mid-IR ratios", 1.0, c10_midir),
        ("11", "determinism", 60.0, c11_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == id) {
            continue;
        }
        let t0 = Instant::now();
        let out = f();
        let secs = t0.elapsed().as_secs_f64();
        let pass = out.pass && secs < budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {id:>2} {name}: {} [{secs:.2} s, budget {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
