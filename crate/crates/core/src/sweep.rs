//! Pump sweeps over the stationary solutions and their CSV form.
//!
//! Every pump point is an independent closed-form evaluation, so a sweep
//! fans out over a worker pool and collects the rows back in grid order;
//! the output does not depend on the number of workers.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lre::{beta, beta_c, lre_stationary};
use crate::params::{DerivedParams, LaserParams};
use crate::semiconductor::{semi_stationary_n, semi_stationary_ne, semi_threshold_pump};
use crate::statistics::{g2_semiconductor, g2_two_level};
use crate::two_level::{c_factor, stationary_inversion, stationary_n, stationary_no_ce};

/// Which stationary solution a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Two-level model with collective effects.
    Glre,
    /// Two-level model with the collective factor set to zero.
    GlreNoCe,
    /// Conventional two-variable rate equations.
    Lre,
    /// Level scheme with an instantly emptied lower level.
    Semiconductor,
}

impl Model {
    pub const ALL: [Model; 4] = [
        Model::Glre,
        Model::GlreNoCe,
        Model::Lre,
        Model::Semiconductor,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Model::Glre => "glre",
            Model::GlreNoCe => "glre_no_ce",
            Model::Lre => "lre",
            Model::Semiconductor => "semiconductor",
        }
    }

    /// Name of the population column: `n_e` for the semiconductor scheme,
    /// `delta` otherwise.
    pub fn population_name(self) -> &'static str {
        match self {
            Model::Semiconductor => "n_e",
            _ => "delta",
        }
    }

    /// Quantities this model can report.
    pub fn supports(self, output: Output) -> bool {
        match output {
            Output::CFactor => self == Model::Glre,
            Output::G2 => matches!(self, Model::Glre | Model::Semiconductor),
            _ => true,
        }
    }

    /// Pump at which the model starts lasing, when it has one.
    pub fn threshold_pump(self, dp: &DerivedParams<f64>) -> Option<f64> {
        match self {
            Model::Semiconductor => Some(semi_threshold_pump(dp)),
            _ => dp.p_th,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| {
                Error::invalid(
                    "model",
                    format!("unknown model `{s}`; expected glre, glre_no_ce, lre or semiconductor"),
                )
            })
    }
}

/// Optional per-row quantities. The pump and the model tag are always written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    N,
    /// Inversion Δ, or N_e for the semiconductor scheme.
    Population,
    CFactor,
    G2,
    Beta,
    BetaC,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::N,
        Output::Population,
        Output::CFactor,
        Output::G2,
        Output::Beta,
        Output::BetaC,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

/// Number of points in a default grid.
pub const DEFAULT_GRID_POINTS: usize = 200;

impl PumpGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        if !(self.min.is_finite() && self.max.is_finite()) {
            return bad(format!(
                "bounds must be finite, got {} and {}",
                self.min, self.max
            ));
        }
        if self.min < 0.0 {
            return bad(format!("min must be ≥ 0, got {}", self.min));
        }
        if !(self.min < self.max) {
            return bad(format!(
                "min < max required, got {} and {}",
                self.min, self.max
            ));
        }
        if self.count < 2 {
            return bad(format!("count must be ≥ 2, got {}", self.count));
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return bad("log spacing requires min > 0".into());
        }
        Ok(())
    }

    /// Grid points in ascending order, both ends included exactly.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.count - 1) as f64;
        let points = (0..self.count).map(|i| {
            if i == 0 {
                return self.min;
            }
            if i == self.count - 1 {
                return self.max;
            }
            let s = i as f64 / last;
            match self.spacing {
                Spacing::Linear => self.min + s * (self.max - self.min),
                Spacing::Log => (self.min.ln() + s * (self.max / self.min).ln()).exp(),
            }
        });
        Ok(points.collect())
    }

    /// Log grid over `[10⁻², 10²]` times the threshold pump when the model
    /// lases, linear over `[0, 10]` otherwise.
    pub fn default_for(model: Model, params: &LaserParams<f64>) -> Result<Self> {
        let dp = params.derive(0.0)?;
        Ok(match model.threshold_pump(&dp) {
            Some(pth) => PumpGrid {
                min: 1e-2 * pth,
                max: 1e2 * pth,
                count: DEFAULT_GRID_POINTS,
                spacing: Spacing::Log,
            },
            None => PumpGrid {
                min: 0.0,
                max: 10.0,
                count: DEFAULT_GRID_POINTS,
                spacing: Spacing::Linear,
            },
        })
    }
}

/// Problems with a row that do not prevent it from being written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Warning {
    /// Semiconductor scheme with N_e > N₀: neglecting pump blocking is no
    /// longer justified.
    NeExceedsN0,
}

impl Warning {
    pub fn tag(self) -> &'static str {
        match self {
            Warning::NeExceedsN0 => "ne_exceeds_n0",
        }
    }
}

/// One stationary operating point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub pump: f64,
    pub n: f64,
    /// Δ, or N_e for the semiconductor scheme.
    pub population: f64,
    pub c_factor: Option<f64>,
    pub g2: Option<f64>,
    pub beta: f64,
    pub beta_c: f64,
    pub model: Model,
    pub warnings: Vec<Warning>,
}

/// Evaluates the stationary solution of `model` at the pump stored in `dp`.
pub fn evaluate(model: Model, dp: &DerivedParams<f64>) -> Result<SweepRecord> {
    let mut warnings = Vec::new();
    let (n, population) = match model {
        Model::Glre => (stationary_n(dp), stationary_inversion(dp)),
        Model::GlreNoCe => stationary_no_ce(dp),
        Model::Lre => {
            let s = lre_stationary(dp);
            (s.n, s.delta)
        }
        Model::Semiconductor => {
            let ne = semi_stationary_ne(dp);
            if ne > dp.n0 {
                warnings.push(Warning::NeExceedsN0);
            }
            (semi_stationary_n(dp), ne)
        }
    };
    let c = match model {
        Model::Glre => Some(c_factor(population, dp)?),
        _ => None,
    };
    let g2 = match model {
        Model::Glre => Some(g2_two_level(n, dp)),
        Model::Semiconductor => Some(g2_semiconductor(n, dp)),
        _ => None,
    };
    let record = SweepRecord {
        pump: dp.pump,
        n,
        population,
        c_factor: c,
        g2,
        beta: beta(dp),
        beta_c: beta_c(dp),
        model,
        warnings,
    };
    let finite = [Some(n), Some(population), c, g2]
        .into_iter()
        .flatten()
        .all(f64::is_finite);
    if !finite {
        return Err(Error::NonFiniteStationary { pump: dp.pump });
    }
    Ok(record)
}

/// A pump sweep of one model over one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub model: Model,
    pub params: LaserParams<f64>,
    /// `None` selects [`PumpGrid::default_for`].
    #[serde(default)]
    pub pump_grid: Option<PumpGrid>,
    /// `None` writes every quantity the model supports.
    #[serde(default)]
    pub outputs: Option<Vec<Output>>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<PumpGrid> {
        match self.pump_grid {
            Some(g) => {
                g.validate()?;
                Ok(g)
            }
            None => PumpGrid::default_for(self.model, &self.params),
        }
    }

    pub fn columns(&self) -> Result<Columns> {
        Columns::new(self.model, self.outputs.as_deref())
    }
}

/// Evaluates every grid point on `workers` threads; rows come back in
/// ascending pump order.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRecord>> {
    spec.params.validate()?;
    let pumps = spec.grid()?.points()?;
    let eval = |&pump: &f64| {
        spec.params
            .derive(pump)
            .and_then(|dp| evaluate(spec.model, &dp))
    };
    if workers <= 1 {
        return pumps.iter().map(eval).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    pool.install(|| pumps.par_iter().map(eval).collect())
}

/// Column layout of a sweep CSV: `pump`, the selected outputs in canonical
/// order, `model`, `warnings`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Columns {
    model: Model,
    outputs: Vec<Output>,
}

impl Columns {
    pub fn new(model: Model, outputs: Option<&[Output]>) -> Result<Self> {
        let outputs = match outputs {
            None => Output::ALL
                .into_iter()
                .filter(|o| model.supports(*o))
                .collect(),
            Some(list) => {
                if let Some(bad) = list.iter().find(|o| !model.supports(**o)) {
                    return Err(Error::invalid(
                        "outputs",
                        format!("{bad:?} is not available for model {model}"),
                    ));
                }
                let mut v = list.to_vec();
                v.sort();
                v.dedup();
                v
            }
        };
        Ok(Columns { model, outputs })
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["pump"];
        h.extend(self.outputs.iter().map(|o| match o {
            Output::N => "n",
            Output::Population => self.model.population_name(),
            Output::CFactor => "c_factor",
            Output::G2 => "g2",
            Output::Beta => "beta",
            Output::BetaC => "beta_c",
        }));
        h.extend(["model", "warnings"]);
        h
    }

    pub fn row(&self, r: &SweepRecord) -> Vec<String> {
        let mut row = vec![fmt_f64(r.pump)];
        row.extend(self.outputs.iter().map(|o| match o {
            Output::N => fmt_f64(r.n),
            Output::Population => fmt_f64(r.population),
            Output::CFactor => r.c_factor.map(fmt_f64).unwrap_or_default(),
            Output::G2 => r.g2.map(fmt_f64).unwrap_or_default(),
            Output::Beta => fmt_f64(r.beta),
            Output::BetaC => fmt_f64(r.beta_c),
        }));
        row.push(r.model.tag().to_string());
        row.push(
            r.warnings
                .iter()
                .map(|w| w.tag())
                .collect::<Vec<_>>()
                .join(";"),
        );
        row
    }
}

/// Shortest decimal string that reads back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Writes a header row and then one row per record.
pub fn write_csv<W: Write>(out: W, columns: &Columns, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns.header())?;
    for r in records {
        w.write_record(columns.row(r))?;
    }
    w.flush()?;
    Ok(())
}
