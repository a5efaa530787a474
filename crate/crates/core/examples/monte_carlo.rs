//! Stochastic check of the steady state: sampled c-number trajectories
//! against the analytic photon number for three reference cases.

use purcell2d::mc_validator::{default_sde_config, detuned_ensemble_case, single_bin_case, thermal_case};

fn main() -> purcell2d::Result<()> {
    let trajectories = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let cfg = default_sde_config(5e-3, trajectories, 7);
    for case in [single_bin_case(), detuned_ensemble_case(), thermal_case()] {
        let exact = case.analytic()?;
        let est = case.simulate(&cfg)?;
        println!(
            "{:<16} sampled {:.5} ± {:.5}  analytic {:.5}  z {:+.2}",
            case.name,
            est.photon_number_mean,
            est.std_error,
            exact,
            est.z_score(exact)
        );
    }
    Ok(())
}
