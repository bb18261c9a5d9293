//! JSON configuration and its merge with command-line flags.
//!
//! Precedence: a flag beats the config file, and the config file beats the
//! built-in defaults.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use glre_core::sweep::Output;
use glre_core::{DimensionlessParams, IntegrationConfig, LaserParams, Model, PumpGrid, Spacing};
use serde::Deserialize;

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub model: Option<Model>,
    pub params: Option<ParamsConfig>,
    pub pump: Option<f64>,
    pub pump_grid: Option<PumpGrid>,
    pub outputs: Option<Vec<Output>>,
    /// Replace γ⊥ by `2γ_d + γ∥(1 + P)` at every pump value.
    pub pump_dependent_dephasing: Option<bool>,
    pub gamma_d: Option<f64>,
    pub integration: Option<IntegrationOverrides>,
    pub workers: Option<usize>,
}

/// Parameters either as dimensionless ratios or as rates.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamsConfig {
    Dimensionless(DimensionlessParams<f64>),
    Physical(LaserParams<f64>),
}

/// Integration settings layered over the model defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationOverrides {
    pub dt_initial: Option<f64>,
    pub t_max: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub steady_state_tol: Option<f64>,
    pub max_steps: Option<u64>,
    pub stride: Option<u64>,
    /// Classic RK4 at `dt_initial` instead of the adaptive pair.
    pub fixed_step: Option<bool>,
}

impl IntegrationOverrides {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(mut self, other: &IntegrationOverrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            dt_initial,
            t_max,
            abs_tol,
            rel_tol,
            steady_state_tol,
            max_steps,
            stride,
            fixed_step
        );
        self
    }

    pub fn apply(&self, mut base: IntegrationConfig<f64>) -> IntegrationConfig<f64> {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { base.$f = v; } )* };
        }
        set!(dt_initial, t_max, steady_state_tol, max_steps, stride);
        if self.abs_tol.is_some() {
            base.abs_tol = self.abs_tol;
        }
        if self.rel_tol.is_some() {
            base.rel_tol = self.rel_tol;
        }
        if self.fixed_step == Some(true) {
            base.abs_tol = None;
            base.rel_tol = None;
        }
        base
    }
}

/// Reads and parses a config file; syntax errors name the byte offset.
pub fn load(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    parse(&text).with_context(|| format!("config {}", path.display()))
}

pub fn parse(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(|e| {
        let offset = byte_offset(text, e.line(), e.column());
        anyhow!(
            "invalid JSON at byte {offset} (line {}, column {}): {e}",
            e.line(),
            e.column()
        )
    })
}

/// Byte offset of a 1-based (line, column) position as reported by the
/// JSON parser; column 0 means "before the first byte of the line".
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// Dimensionless parameters given as flags; each one overrides the field of
/// a dimensionless config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamFlags {
    pub g: Option<f64>,
    pub ratio_2k_gp: Option<f64>,
    pub dth_over_n0: Option<f64>,
    pub n_emitters: Option<u64>,
    pub kappa_over_gpar: Option<f64>,
}

impl ParamFlags {
    fn any(&self) -> bool {
        self.g.is_some()
            || self.ratio_2k_gp.is_some()
            || self.dth_over_n0.is_some()
            || self.n_emitters.is_some()
            || self.kappa_over_gpar.is_some()
    }
}

/// Builds the validated parameter set from config and flags.
pub fn resolve_params(
    file: &ConfigFile,
    flags: &ParamFlags,
    pump_dephasing_flag: bool,
    gamma_d_flag: Option<f64>,
) -> Result<LaserParams<f64>> {
    let mut params = match (&file.params, flags.any()) {
        (Some(ParamsConfig::Physical(_)), true) => {
            bail!(
                "dimensionless parameter flags cannot override physical parameters from the config"
            )
        }
        (Some(ParamsConfig::Physical(p)), false) => *p,
        (Some(ParamsConfig::Dimensionless(d)), _) => {
            overlay_dimensionless(*d, flags).to_laser_params()?
        }
        (None, _) => {
            let missing: Vec<&str> = [
                ("--g", flags.g.is_none()),
                ("--ratio-2k-gp", flags.ratio_2k_gp.is_none()),
                ("--dth", flags.dth_over_n0.is_none()),
                ("--n0", flags.n_emitters.is_none()),
            ]
            .into_iter()
            .filter_map(|(name, absent)| absent.then_some(name))
            .collect();
            if !missing.is_empty() {
                bail!(
                    "no parameters: give a config with `params` or the flags {}",
                    missing.join(", ")
                );
            }
            DimensionlessParams {
                g: flags.g.unwrap(),
                ratio_2k_gp: flags.ratio_2k_gp.unwrap(),
                dth_over_n0: flags.dth_over_n0.unwrap(),
                n_emitters: flags.n_emitters.unwrap(),
                kappa_over_gpar: flags.kappa_over_gpar,
            }
            .to_laser_params()?
        }
    };
    if pump_dephasing_flag || file.pump_dependent_dephasing == Some(true) {
        params.pump_dependent_dephasing = true;
    }
    if let Some(gd) = gamma_d_flag.or(file.gamma_d) {
        params.gamma_d = gd;
    }
    params.validate()?;
    Ok(params)
}

fn overlay_dimensionless(
    mut d: DimensionlessParams<f64>,
    flags: &ParamFlags,
) -> DimensionlessParams<f64> {
    if let Some(v) = flags.g {
        d.g = v;
    }
    if let Some(v) = flags.ratio_2k_gp {
        d.ratio_2k_gp = v;
    }
    if let Some(v) = flags.dth_over_n0 {
        d.dth_over_n0 = v;
    }
    if let Some(v) = flags.n_emitters {
        d.n_emitters = v;
    }
    if flags.kappa_over_gpar.is_some() {
        d.kappa_over_gpar = flags.kappa_over_gpar;
    }
    d
}

/// Pump-grid flags; each overrides the matching field of the config grid.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GridFlags {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
}

/// `None` means "use the model's default grid".
pub fn resolve_grid(file: Option<PumpGrid>, flags: &GridFlags) -> Result<Option<PumpGrid>> {
    let touched = flags.min.is_some()
        || flags.max.is_some()
        || flags.count.is_some()
        || flags.spacing.is_some();
    let grid = match (file, touched) {
        (None, false) => return Ok(None),
        (Some(g), _) => PumpGrid {
            min: flags.min.unwrap_or(g.min),
            max: flags.max.unwrap_or(g.max),
            count: flags.count.unwrap_or(g.count),
            spacing: flags.spacing.unwrap_or(g.spacing),
        },
        (None, true) => {
            let (Some(min), Some(max)) = (flags.min, flags.max) else {
                bail!("--pump-min and --pump-max are both required without a `pump_grid` in the config");
            };
            PumpGrid {
                min,
                max,
                count: flags.count.unwrap_or(glre_core::sweep::DEFAULT_GRID_POINTS),
                spacing: flags.spacing.unwrap_or(Spacing::Linear),
            }
        }
    };
    grid.validate()?;
    Ok(Some(grid))
}
