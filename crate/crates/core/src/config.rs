//! JSON run configuration in practical units and its conversion to the
//! CGS objects used by the library.
//!
//! Lengths are μm (layers, lateral sizes) or nm (wells), energies and rates
//! are meV (ħω, ħγ), wavenumbers 1/μm or 1/nm. Every value is converted
//! once, here.

use crate::dielectric::{DielectricStack, DispersionModel};
use crate::emitter::{EmitterSheet, Envelope, KProfile, Subband};
use crate::error::{Error, Result};
use crate::langevin::LangevinParams;
use crate::modes::{Geometry, ModeIndex};
use crate::units::{mev_to_erg, mev_to_rad_s, nm_to_cm, per_nm_to_per_cm, um_to_cm, M_ELECTRON};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub stack: Vec<LayerConfig>,
    #[serde(default)]
    pub mode: Option<ModeConfig>,
    #[serde(default)]
    pub emitter: Option<EmitterConfig>,
    #[serde(default)]
    pub langevin: Option<LangevinConfig>,
    #[serde(default)]
    pub rates: Option<RatesConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub fig2: Option<Fig2Config>,
    #[serde(default)]
    pub midir: Option<MidirConfig>,
    #[serde(default)]
    pub monte_carlo: Option<MonteCarloConfig>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub lx_um: f64,
    pub ly_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerConfig {
    pub thickness_um: f64,
    pub model: ModelConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Constant {
        eps: f64,
    },
    Lorentz {
        eps_inf: f64,
        #[serde(rename = "plasma_meV")]
        plasma_mev: f64,
        #[serde(rename = "resonance_meV")]
        resonance_mev: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModeConfig {
    Planewave {
        q_per_um: [f64; 2],
        #[serde(default, rename = "bracket_meV")]
        bracket_mev: Option<[f64; 2]>,
    },
    Waveguide {
        qx_per_um: f64,
        #[serde(default, rename = "bracket_meV")]
        bracket_mev: Option<[f64; 2]>,
    },
    Cavity {
        n: u32,
        #[serde(default, rename = "bracket_meV")]
        bracket_mev: Option<[f64; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmitterConfig {
    pub well: WellConfig,
    pub populations: PopulationConfig,
    #[serde(rename = "gamma21_meV")]
    pub gamma21_mev: f64,
    #[serde(default = "default_degeneracy")]
    pub degeneracy: f64,
    #[serde(default)]
    pub k_grid: Option<KGridConfig>,
}

fn default_degeneracy() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum WellConfig {
    Infinite {
        width_nm: f64,
        #[serde(rename = "delta_e_meV")]
        delta_e_mev: f64,
        masses_m0: [f64; 2],
    },
    Sampled {
        z_nm: Vec<f64>,
        psi_lower: Vec<f64>,
        psi_upper: Vec<f64>,
        #[serde(rename = "delta_e_meV")]
        delta_e_mev: f64,
        masses_m0: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PopulationConfig {
    /// Common Fermi level measured from the lower band edge.
    Fermi {
        #[serde(rename = "mu_meV")]
        mu_mev: f64,
        #[serde(rename = "temperature_meV")]
        temperature_mev: f64,
    },
    /// Separate quasi-Fermi levels for the two subbands.
    Inverted {
        #[serde(rename = "mu_lower_meV")]
        mu_lower_mev: f64,
        #[serde(rename = "mu_upper_meV")]
        mu_upper_mev: f64,
        #[serde(rename = "temperature_meV")]
        temperature_mev: f64,
    },
    /// Explicit occupations on the k grid.
    Table {
        k_per_nm: Vec<f64>,
        n1: Vec<f64>,
        n2: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGridConfig {
    pub k_max_per_nm: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LangevinConfig {
    #[serde(rename = "gamma_r_meV")]
    pub gamma_r_mev: f64,
    #[serde(default, rename = "gamma_sigma_meV")]
    pub gamma_sigma_mev: f64,
    #[serde(default, rename = "t_r_meV")]
    pub t_r_mev: f64,
    #[serde(default, rename = "t_sigma_meV")]
    pub t_sigma_mev: f64,
    #[serde(default)]
    pub absorb_shift: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    /// Cavity linewidth Δω for the cavity rate; Δω_eff is used when absent.
    #[serde(default, rename = "cavity_linewidth_meV")]
    pub cavity_linewidth_mev: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Dotted path of a numeric config value, e.g. `langevin.gamma_r_meV`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
}

fn default_scale() -> Scale {
    Scale::Linear
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 1 {
            return Err(Error::Config("sweep.points must be >= 1".into()));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config("log sweep needs positive start and stop".into()));
        }
        let n = self.points;
        Ok((0..n)
            .map(|i| {
                let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Config {
    /// g = Γσ + γ in units of γ21; 0 with a warning when absent.
    #[serde(default)]
    pub g_over_gamma21: Option<f64>,
    #[serde(default = "default_fig2_points")]
    pub points: usize,
    #[serde(default = "default_inset_points")]
    pub inset_points: usize,
}

fn default_fig2_points() -> usize {
    201
}

fn default_inset_points() -> usize {
    101
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidirConfig {
    #[serde(default = "default_midir_energies", rename = "hw21_meV")]
    pub hw21_mev: Vec<f64>,
    /// Full linewidth ħ·2γ21.
    #[serde(default = "default_midir_linewidth", rename = "full_linewidth_meV")]
    pub full_linewidth_mev: f64,
    #[serde(default = "default_midir_ratios")]
    pub gamma_r_over_gamma21: Vec<f64>,
}

fn default_midir_energies() -> Vec<f64> {
    vec![100.0, 200.0]
}

fn default_midir_linewidth() -> f64 {
    10.0
}

fn default_midir_ratios() -> Vec<f64> {
    vec![0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    #[serde(default = "default_mc_dt")]
    pub dt_over_gamma21: f64,
    #[serde(default = "default_mc_t_end")]
    pub t_end_over_gamma21: f64,
    #[serde(default = "default_mc_burn_in")]
    pub burn_in_over_gamma21: f64,
    #[serde(default = "default_mc_trajectories")]
    pub trajectories: usize,
    #[serde(default = "default_mc_k_modes")]
    pub k_modes: usize,
    #[serde(default = "default_mc_seed")]
    pub seed: u64,
}

fn default_mc_dt() -> f64 {
    2e-3
}
fn default_mc_t_end() -> f64 {
    50.0
}
fn default_mc_burn_in() -> f64 {
    10.0
}
fn default_mc_trajectories() -> usize {
    2000
}
fn default_mc_k_modes() -> usize {
    16
}
fn default_mc_seed() -> u64 {
    1
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Records each boundary conversion when auditing is on.
#[derive(Debug, Default)]
pub struct UnitAudit {
    pub enabled: bool,
    pub lines: Vec<String>,
}

impl UnitAudit {
    fn note(&mut self, name: &str, input: f64, unit_in: &str, output: f64, unit_out: &str) {
        if self.enabled {
            self.lines
                .push(format!("audit {name} = {output:e} {unit_out} (from {input} {unit_in})"));
        }
    }
}

/// Everything built from a config, in CGS.
#[derive(Debug, Clone)]
pub struct System {
    pub geometry: Geometry,
    pub stack: DielectricStack,
    pub mode: Option<(ModeIndex, Option<(f64, f64)>)>,
    pub sheet: Option<EmitterSheet>,
    pub langevin: Option<(LangevinParams, bool)>,
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be finite")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Config(format!("{name} must be finite and > 0")))
    }
}

impl RunConfig {
    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        positive("geometry.lx_um", self.geometry.lx_um)?;
        positive("geometry.ly_um", self.geometry.ly_um)?;
        if self.stack.is_empty() {
            return Err(Error::Config("stack must contain at least one layer".into()));
        }
        for (i, l) in self.stack.iter().enumerate() {
            positive(&format!("stack[{i}].thickness_um"), l.thickness_um)?;
            match l.model {
                ModelConfig::Constant { eps } => {
                    positive(&format!("stack[{i}].model.eps"), eps)?;
                }
                ModelConfig::Lorentz {
                    eps_inf,
                    plasma_mev,
                    resonance_mev,
                } => {
                    positive(&format!("stack[{i}].model.eps_inf"), eps_inf)?;
                    finite(&format!("stack[{i}].model.plasma_meV"), plasma_mev)?;
                    positive(&format!("stack[{i}].model.resonance_meV"), resonance_mev)?;
                }
            }
        }
        if let Some(e) = &self.emitter {
            positive("emitter.gamma21_meV", e.gamma21_mev)?;
            positive("emitter.degeneracy", e.degeneracy)?;
        }
        if let Some(l) = &self.langevin {
            for (n, v) in [
                ("langevin.gamma_r_meV", l.gamma_r_mev),
                ("langevin.gamma_sigma_meV", l.gamma_sigma_mev),
                ("langevin.t_r_meV", l.t_r_mev),
                ("langevin.t_sigma_meV", l.t_sigma_mev),
            ] {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Config(format!("{n} must be finite and >= 0")));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn stack(&self, audit: &mut UnitAudit) -> Result<DielectricStack> {
        let parts = self
            .stack
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let t = um_to_cm(l.thickness_um);
                audit.note(&format!("stack[{i}].thickness"), l.thickness_um, "um", t, "cm");
                let model = match l.model {
                    ModelConfig::Constant { eps } => DispersionModel::constant(eps),
                    ModelConfig::Lorentz {
                        eps_inf,
                        plasma_mev,
                        resonance_mev,
                    } => {
                        let wp = mev_to_rad_s(plasma_mev);
                        let w0 = mev_to_rad_s(resonance_mev);
                        audit.note(&format!("stack[{i}].plasma_freq"), plasma_mev, "meV", wp, "rad/s");
                        audit.note(&format!("stack[{i}].resonance_freq"), resonance_mev, "meV", w0, "rad/s");
                        DispersionModel::lorentz(eps_inf, wp, w0)
                    }
                };
                (t, model)
            })
            .collect::<Vec<_>>();
        DielectricStack::from_thicknesses(&parts)
    }

    pub fn geometry(&self, stack: &DielectricStack, audit: &mut UnitAudit) -> Result<Geometry> {
        let lx = um_to_cm(self.geometry.lx_um);
        let ly = um_to_cm(self.geometry.ly_um);
        audit.note("lx", self.geometry.lx_um, "um", lx, "cm");
        audit.note("ly", self.geometry.ly_um, "um", ly, "cm");
        audit.note("lz", stack.lz() / 1e-4, "um", stack.lz(), "cm");
        Geometry::for_stack(lx, ly, stack)
    }

    pub fn mode(&self, audit: &mut UnitAudit) -> Result<Option<(ModeIndex, Option<(f64, f64)>)>> {
        let Some(m) = &self.mode else {
            return Ok(None);
        };
        let to_bracket = |b: &Option<[f64; 2]>, audit: &mut UnitAudit| {
            b.map(|[lo, hi]| {
                let (a, z) = (mev_to_rad_s(lo), mev_to_rad_s(hi));
                audit.note("mode.bracket_lo", lo, "meV", a, "rad/s");
                audit.note("mode.bracket_hi", hi, "meV", z, "rad/s");
                (a, z)
            })
        };
        let out = match m {
            ModeConfig::Planewave { q_per_um, bracket_mev } => {
                let qx = q_per_um[0] * 1e4;
                let qy = q_per_um[1] * 1e4;
                audit.note("mode.qx", q_per_um[0], "1/um", qx, "1/cm");
                audit.note("mode.qy", q_per_um[1], "1/um", qy, "1/cm");
                (ModeIndex::PlaneWave { qx, qy }, to_bracket(bracket_mev, audit))
            }
            ModeConfig::Waveguide { qx_per_um, bracket_mev } => {
                let qx = qx_per_um * 1e4;
                audit.note("mode.qx", *qx_per_um, "1/um", qx, "1/cm");
                (ModeIndex::Waveguide { qx }, to_bracket(bracket_mev, audit))
            }
            ModeConfig::Cavity { n, bracket_mev } => {
                (ModeIndex::cavity(*n).map_err(|e| Error::Config(e.to_string()))?, to_bracket(bracket_mev, audit))
            }
        };
        Ok(Some(out))
    }

    pub fn sheet(&self, audit: &mut UnitAudit) -> Result<Option<EmitterSheet>> {
        let Some(e) = &self.emitter else {
            return Ok(None);
        };
        let (lower_psi, upper_psi, de, masses) = match &e.well {
            WellConfig::Infinite {
                width_nm,
                delta_e_mev,
                masses_m0,
            } => {
                let l = nm_to_cm(positive("emitter.well.width_nm", *width_nm)?);
                audit.note("well.width", *width_nm, "nm", l, "cm");
                (
                    Envelope::infinite_well(1, l)?,
                    Envelope::infinite_well(2, l)?,
                    *delta_e_mev,
                    *masses_m0,
                )
            }
            WellConfig::Sampled {
                z_nm,
                psi_lower,
                psi_upper,
                delta_e_mev,
                masses_m0,
            } => {
                let z: Vec<f64> = z_nm.iter().map(|&v| nm_to_cm(v)).collect();
                // values are in 1/√nm; renormalization makes the scale irrelevant
                (
                    Envelope::sampled(z.clone(), psi_lower.clone())?,
                    Envelope::sampled(z, psi_upper.clone())?,
                    *delta_e_mev,
                    *masses_m0,
                )
            }
        };
        let m1 = positive("emitter.well.masses_m0[0]", masses[0])? * M_ELECTRON;
        let m2 = positive("emitter.well.masses_m0[1]", masses[1])? * M_ELECTRON;
        let de_erg = mev_to_erg(finite("emitter.well.delta_e_meV", de)?);
        audit.note("well.delta_e", de, "meV", de_erg, "erg");
        let lower = Subband::new(0.0, m1, lower_psi)?;
        let upper = Subband::new(de_erg, m2, upper_psi)?;
        let gamma21 = mev_to_rad_s(e.gamma21_mev);
        audit.note("gamma21", e.gamma21_mev, "meV", gamma21, "rad/s");
        let grid = |audit: &mut UnitAudit| -> Result<Vec<f64>> {
            let g = e.k_grid.clone().unwrap_or(KGridConfig {
                k_max_per_nm: 1.0,
                points: 256,
            });
            let kmax = per_nm_to_per_cm(positive("emitter.k_grid.k_max_per_nm", g.k_max_per_nm)?);
            audit.note("k_grid.k_max", g.k_max_per_nm, "1/nm", kmax, "1/cm");
            if g.points < 2 {
                return Err(Error::Config("emitter.k_grid.points must be >= 2".into()));
            }
            Ok(KProfile::uniform_grid(kmax, g.points))
        };
        let profile = match &e.populations {
            PopulationConfig::Fermi {
                mu_mev,
                temperature_mev,
            } => {
                let k = grid(audit)?;
                EmitterSheet::fermi_profile(
                    &lower,
                    &upper,
                    k,
                    mev_to_erg(*mu_mev),
                    mev_to_erg(*mu_mev),
                    mev_to_erg(*temperature_mev),
                    gamma21,
                )
            }
            PopulationConfig::Inverted {
                mu_lower_mev,
                mu_upper_mev,
                temperature_mev,
            } => {
                let k = grid(audit)?;
                EmitterSheet::fermi_profile(
                    &lower,
                    &upper,
                    k,
                    mev_to_erg(*mu_lower_mev),
                    mev_to_erg(*mu_upper_mev),
                    mev_to_erg(*temperature_mev),
                    gamma21,
                )
            }
            PopulationConfig::Table { k_per_nm, n1, n2 } => KProfile {
                k: k_per_nm.iter().map(|&k| per_nm_to_per_cm(k)).collect(),
                n1: n1.clone(),
                n2: n2.clone(),
                gamma21: vec![gamma21; k_per_nm.len()],
            },
        };
        let sheet = EmitterSheet::new(lower, upper, e.degeneracy, profile)?;
        Ok(Some(sheet))
    }

    pub fn langevin(&self, audit: &mut UnitAudit) -> Result<Option<(LangevinParams, bool)>> {
        let Some(l) = &self.langevin else {
            return Ok(None);
        };
        let gr = mev_to_rad_s(l.gamma_r_mev);
        let gs = mev_to_rad_s(l.gamma_sigma_mev);
        let tr = mev_to_erg(l.t_r_mev);
        let ts = mev_to_erg(l.t_sigma_mev);
        audit.note("gamma_r", l.gamma_r_mev, "meV", gr, "rad/s");
        audit.note("gamma_sigma", l.gamma_sigma_mev, "meV", gs, "rad/s");
        audit.note("t_r", l.t_r_mev, "meV", tr, "erg");
        audit.note("t_sigma", l.t_sigma_mev, "meV", ts, "erg");
        Ok(Some((LangevinParams::new(gr, gs, tr, ts)?, l.absorb_shift)))
    }

    pub fn build(&self, audit: &mut UnitAudit) -> Result<System> {
        let stack = self.stack(audit)?;
        let geometry = self.geometry(&stack, audit)?;
        let mode = self.mode(audit)?;
        let sheet = self.sheet(audit)?;
        if let Some(s) = &sheet {
            s.check_fits(&stack)?;
        }
        let langevin = self.langevin(audit)?;
        Ok(System {
            geometry,
            stack,
            mode,
            sheet,
            langevin,
        })
    }
}

/// Replaces the numeric value at a dotted path (`a.b.c`, array indices as
/// numbers) in a JSON document.
pub fn set_path(doc: &mut Value, path: &str, value: f64) -> Result<()> {
    let mut cur = doc;
    for part in path.split('.') {
        cur = match cur {
            Value::Object(map) => map
                .get_mut(part)
                .ok_or_else(|| Error::Config(format!("sweep parameter `{path}`: no key `{part}`")))?,
            Value::Array(arr) => {
                let i: usize = part
                    .parse()
                    .map_err(|_| Error::Config(format!("sweep parameter `{path}`: `{part}` is not an index")))?;
                arr.get_mut(i)
                    .ok_or_else(|| Error::Config(format!("sweep parameter `{path}`: index {i} out of range")))?
            }
            _ => return Err(Error::Config(format!("sweep parameter `{path}` does not name a value"))),
        };
    }
    if !cur.is_number() {
        return Err(Error::Config(format!("sweep parameter `{path}` is not numeric")));
    }
    *cur = serde_json::Number::from_f64(value)
        .map(Value::Number)
        .ok_or_else(|| Error::Config("sweep value must be finite".into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "geometry": {"lx_um": 3.0, "ly_um": 3.0},
        "stack": [{"thickness_um": 0.2, "model": {"type": "constant", "eps": 10.0}}]
    }"#;

    #[test]
    fn minimal_parses() {
        let cfg = RunConfig::from_json(MINIMAL).unwrap();
        let sys = cfg.build(&mut UnitAudit::default()).unwrap();
        assert!((sys.stack.lz() - 2e-5).abs() < 1e-18);
        assert!((sys.geometry.lx - 3e-4).abs() < 1e-18);
    }

    #[test]
    fn unknown_and_missing_keys_are_rejected() {
        let bad = MINIMAL.replace("\"ly_um\"", "\"lyy_um\"");
        let e = RunConfig::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("lyy_um"), "{e}");
        let missing = MINIMAL.replace(", \"ly_um\": 3.0", "");
        let e = RunConfig::from_json(&missing).unwrap_err();
        assert!(e.to_string().contains("ly_um"), "{e}");
        let bad_model = MINIMAL.replace("\"eps\": 10.0", "\"eps\": 10.0, \"extra\": 1");
        assert!(RunConfig::from_json(&bad_model).is_err());
    }

    #[test]
    fn hash_is_stable() {
        let a = RunConfig::from_json(MINIMAL).unwrap();
        let b = RunConfig::from_json(&MINIMAL.replace('\n', " ")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn path_setter() {
        let mut v: Value = serde_json::from_str(MINIMAL).unwrap();
        set_path(&mut v, "stack.0.model.eps", 4.0).unwrap();
        let cfg = RunConfig::from_value(v.clone()).unwrap();
        assert_eq!(cfg.stack[0].model, ModelConfig::Constant { eps: 4.0 });
        assert!(set_path(&mut v, "geometry.nope", 1.0).is_err());
        assert!(set_path(&mut v, "stack.0.model.type", 1.0).is_err());
    }

    #[test]
    fn sweep_grids() {
        let s = SweepConfig {
            parameter: "x".into(),
            start: 1.0,
            stop: 100.0,
            points: 3,
            scale: Scale::Log,
        };
        let v = s.values().unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
    }
}
