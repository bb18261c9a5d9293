//! Figure presets: fixed parameter families written as one CSV per curve
//! plus a `manifest.json` describing the files, their parameters and their
//! columns.
//!
//! Pump sweeps use a log grid that brackets the threshold by two decades on
//! each side, except the `fig4*` presets, whose curves have very different
//! thresholds and share one grid. The grid of each curve is recorded in
//! the manifest.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{DimensionlessParams, LaserParams};
use crate::statistics::g2_two_level_formula;
use crate::sweep::{fmt_f64, run_sweep, Columns, Model, Output, PumpGrid, Spacing, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig1b,
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig4a,
        Figure::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1b => "fig1b",
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Figure::Fig1b => {
                "Photon output n(P) with and without collective effects and from the conventional rate equations, \
                 and the collective factor C(P); κ/γ∥ = 25, N₀ = 10⁴, g = 0.048, γ⊥/γ∥ = 20"
            }
            Figure::Fig2a => "Photon output n(P) for 2κ/γ⊥ ∈ {0.01, 1, 3, 6}; g = 2/3, Δ_th/N₀ = 0.01",
            Figure::Fig2b => "Autocorrelation g₂(P) for 2κ/γ⊥ ∈ {0.01, 1, 3, 6}; g = 2/3, Δ_th/N₀ = 0.01",
            Figure::Fig3a => "Autocorrelation g₂(n) for N₀/Δ_th ∈ {100, 50} and γ⊥/2κ ∈ {0.1, 1, 10}",
            Figure::Fig3b => "g₂(n = 0) over γ⊥/2κ and N₀/Δ_th",
            Figure::Fig4a => "Photon output n(P) for Δ_th/N₀ ∈ {0.9, 0.5, 0.1, 0.005}; g = 2/3, 2κ/γ⊥ = 2",
            Figure::Fig4b => "Autocorrelation g₂(P) for Δ_th/N₀ ∈ {0.9, 0.5, 0.1, 0.005}; g = 2/3, 2κ/γ⊥ = 2",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

/// Points per pump sweep in the presets.
pub const SWEEP_POINTS: usize = 400;
/// Points of the photon-number axis of `fig3a`.
pub const PHOTON_POINTS: usize = 401;
/// Points per axis of the `fig3b` map.
pub const MAP_POINTS: usize = 200;
/// Emitter count for the presets defined by ratios only.
pub const PRESET_EMITTERS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDoc {
    pub name: String,
    pub meaning: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDoc {
    pub variable: &'static str,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

/// One output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub file: String,
    pub description: String,
    pub parameters: BTreeMap<&'static str, f64>,
    pub grids: Vec<GridDoc>,
    pub columns: Vec<ColumnDoc>,
    pub rows: usize,
    #[serde(skip)]
    pub header: Vec<String>,
    #[serde(skip)]
    pub data: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub figure: &'static str,
    pub description: &'static str,
    pub notes: Vec<String>,
    pub files: Vec<Curve>,
}

fn meaning(column: &str) -> &'static str {
    match column {
        "pump" => "dimensionless pump P",
        "n" => "stationary intracavity photon number",
        "delta" => "stationary inversion Δ (emitter-count units)",
        "n_e" => "stationary upper-level population N_e",
        "c_factor" => "collective factor C(Δ)",
        "g2" => "zero-delay photon autocorrelation g₂",
        "beta" => "spontaneous-emission factor β = g/(1+g)",
        "beta_c" => "collective spontaneous-emission factor β_c = g/(1+g+2κ/γ⊥)",
        "model" => "model tag",
        "warnings" => "';'-separated warning tags, empty when none",
        "gamma_perp_over_2kappa" => "dephasing ratio γ⊥/2κ",
        "n0_over_delta_th" => "emitters per threshold inversion N₀/Δ_th",
        _ => "",
    }
}

fn column_docs(header: &[String]) -> Vec<ColumnDoc> {
    header
        .iter()
        .map(|h| ColumnDoc {
            name: h.clone(),
            meaning: meaning(h),
        })
        .collect()
}

fn parameter_map(params: &LaserParams<f64>) -> Result<BTreeMap<&'static str, f64>> {
    let dp = params.derive(0.0)?;
    let mut m = BTreeMap::new();
    m.insert("g", dp.g);
    m.insert("ratio_2k_gp", dp.ratio_2k_gp);
    m.insert("dth_over_n0", dp.d_th);
    m.insert("n_emitters", dp.n0);
    m.insert("kappa_over_gpar", dp.kappa / dp.gamma_par);
    m.insert("gamma_perp_over_gpar", dp.gamma_perp / dp.gamma_par);
    if let Some(pth) = dp.p_th {
        m.insert("p_th", pth);
    }
    Ok(m)
}

fn pump_grid_doc(g: &PumpGrid) -> GridDoc {
    GridDoc {
        variable: "pump",
        min: g.min,
        max: g.max,
        count: g.count,
        spacing: g.spacing,
    }
}

fn sweep_curve(
    file: String,
    description: String,
    model: Model,
    params: LaserParams<f64>,
    grid: PumpGrid,
    outputs: &[Output],
    workers: usize,
) -> Result<Curve> {
    let spec = SweepSpec {
        model,
        params,
        pump_grid: Some(grid),
        outputs: Some(outputs.to_vec()),
    };
    let records = run_sweep(&spec, workers)?;
    let columns = Columns::new(model, Some(outputs))?;
    let header: Vec<String> = columns.header().into_iter().map(String::from).collect();
    let data: Vec<Vec<String>> = records.iter().map(|r| columns.row(r)).collect();
    Ok(Curve {
        file,
        description,
        parameters: parameter_map(&params)?,
        grids: vec![pump_grid_doc(&grid)],
        columns: column_docs(&header),
        rows: data.len(),
        header,
        data,
    })
}

fn dimensionless(g: f64, ratio_2k_gp: f64, dth_over_n0: f64) -> Result<LaserParams<f64>> {
    DimensionlessParams {
        g,
        ratio_2k_gp,
        dth_over_n0,
        n_emitters: PRESET_EMITTERS,
        kappa_over_gpar: None,
    }
    .to_laser_params()
}

/// Parameters of the `fig1b` preset.
pub fn fig1b_params() -> Result<LaserParams<f64>> {
    DimensionlessParams::from_rate_ratios(0.048, 20.0, 25.0, 10_000).to_laser_params()
}

fn threshold_grid(params: &LaserParams<f64>) -> Result<PumpGrid> {
    let pth = params
        .derive(0.0)?
        .p_th
        .ok_or_else(|| Error::Inconsistent("figure preset without a lasing threshold".into()))?;
    Ok(PumpGrid {
        min: 1e-2 * pth,
        max: 1e2 * pth,
        count: SWEEP_POINTS,
        spacing: Spacing::Log,
    })
}

fn fig1b(workers: usize) -> Result<Vec<Curve>> {
    let p = fig1b_params()?;
    let grid = threshold_grid(&p)?;
    let np = [Output::N, Output::Population];
    Ok(vec![
        sweep_curve(
            "fig1b_glre.csv".into(),
            "GLRE photon output".into(),
            Model::Glre,
            p,
            grid,
            &np,
            workers,
        )?,
        sweep_curve(
            "fig1b_no_ce.csv".into(),
            "photon output with C = 0".into(),
            Model::GlreNoCe,
            p,
            grid,
            &np,
            workers,
        )?,
        sweep_curve(
            "fig1b_lre.csv".into(),
            "conventional rate equations".into(),
            Model::Lre,
            p,
            grid,
            &np,
            workers,
        )?,
        sweep_curve(
            "fig1b_c_factor.csv".into(),
            "collective factor C(P); clamps to 2κ/γ⊥ above threshold".into(),
            Model::Glre,
            p,
            grid,
            &[Output::CFactor],
            workers,
        )?,
    ])
}

const FIG2_RATIOS: [f64; 4] = [0.01, 1.0, 3.0, 6.0];
const FIG4_DTH: [f64; 4] = [0.9, 0.5, 0.1, 0.005];

fn fig2(output: Output, prefix: &str, workers: usize) -> Result<Vec<Curve>> {
    FIG2_RATIOS
        .iter()
        .map(|&r| {
            let p = dimensionless(2.0 / 3.0, r, 0.01)?;
            let grid = threshold_grid(&p)?;
            let outputs: &[Output] = if output == Output::N {
                &[Output::N, Output::Population]
            } else {
                &[output]
            };
            sweep_curve(
                format!("{prefix}_r{r}.csv"),
                format!("2κ/γ⊥ = {r}"),
                Model::Glre,
                p,
                grid,
                outputs,
                workers,
            )
        })
        .collect()
}

fn fig4(output: Output, prefix: &str, workers: usize) -> Result<Vec<Curve>> {
    let grid = PumpGrid {
        min: 1e-2,
        max: 1e3,
        count: SWEEP_POINTS,
        spacing: Spacing::Log,
    };
    FIG4_DTH
        .iter()
        .map(|&d| {
            let p = dimensionless(2.0 / 3.0, 2.0, d)?;
            let outputs: &[Output] = if output == Output::N {
                &[Output::N, Output::Population]
            } else {
                &[output]
            };
            sweep_curve(
                format!("{prefix}_dth{d}.csv"),
                format!("Δ_th/N₀ = {d}"),
                Model::Glre,
                p,
                grid,
                outputs,
                workers,
            )
        })
        .collect()
}

fn log_points(min: f64, max: f64, count: usize) -> Vec<f64> {
    PumpGrid {
        min,
        max,
        count,
        spacing: Spacing::Log,
    }
    .points()
    .expect("static grid is valid")
}

fn fig3a() -> Vec<Curve> {
    let (n_min, n_max) = (1e-4, 1e4);
    let ns = log_points(n_min, n_max, PHOTON_POINTS);
    let mut curves = Vec::new();
    for m in [100.0, 50.0] {
        for u in [0.1, 1.0, 10.0] {
            let header = vec!["n".to_string(), "g2".to_string()];
            let data: Vec<Vec<String>> = ns
                .iter()
                .map(|&n| vec![fmt_f64(n), fmt_f64(g2_two_level_formula(n, u, m))])
                .collect();
            let mut parameters = BTreeMap::new();
            parameters.insert("n0_over_delta_th", m);
            parameters.insert("gamma_perp_over_2kappa", u);
            curves.push(Curve {
                file: format!("fig3a_m{m}_u{u}.csv"),
                description: format!("N₀/Δ_th = {m}, γ⊥/2κ = {u}"),
                parameters,
                grids: vec![GridDoc {
                    variable: "n",
                    min: n_min,
                    max: n_max,
                    count: PHOTON_POINTS,
                    spacing: Spacing::Log,
                }],
                columns: column_docs(&header),
                rows: data.len(),
                header,
                data,
            });
        }
    }
    curves
}

fn fig3b() -> Vec<Curve> {
    let (u_min, u_max, m_min, m_max) = (1e-2, 1e2, 1e-1, 1e3);
    let us = log_points(u_min, u_max, MAP_POINTS);
    let ms = log_points(m_min, m_max, MAP_POINTS);
    let header: Vec<String> = ["gamma_perp_over_2kappa", "n0_over_delta_th", "g2"]
        .map(String::from)
        .to_vec();
    let mut data = Vec::with_capacity(MAP_POINTS * MAP_POINTS);
    for &u in &us {
        for &m in &ms {
            data.push(vec![
                fmt_f64(u),
                fmt_f64(m),
                fmt_f64(g2_two_level_formula(0.0, u, m)),
            ]);
        }
    }
    vec![Curve {
        file: "fig3b_map.csv".into(),
        description: "g₂(n = 0) on a log grid, N₀/Δ_th varying fastest".into(),
        parameters: BTreeMap::new(),
        grids: vec![
            GridDoc {
                variable: "gamma_perp_over_2kappa",
                min: u_min,
                max: u_max,
                count: MAP_POINTS,
                spacing: Spacing::Log,
            },
            GridDoc {
                variable: "n0_over_delta_th",
                min: m_min,
                max: m_max,
                count: MAP_POINTS,
                spacing: Spacing::Log,
            },
        ],
        columns: column_docs(&header),
        rows: data.len(),
        header,
        data,
    }]
}

/// Computes every curve of `figure`.
pub fn build(figure: Figure, workers: usize) -> Result<Manifest> {
    let mut notes = Vec::new();
    let files = match figure {
        Figure::Fig1b => {
            notes.push("C(P) clamps to 2κ/γ⊥ = 2.5 above threshold".into());
            fig1b(workers)?
        }
        Figure::Fig2a => fig2(Output::N, "fig2a", workers)?,
        Figure::Fig2b => fig2(Output::G2, "fig2b", workers)?,
        Figure::Fig3a => fig3a(),
        Figure::Fig3b => fig3b(),
        Figure::Fig4a => fig4(Output::N, "fig4a", workers)?,
        Figure::Fig4b => fig4(Output::G2, "fig4b", workers)?,
    };
    if matches!(
        figure,
        Figure::Fig2a | Figure::Fig2b | Figure::Fig4a | Figure::Fig4b
    ) {
        notes.push(format!(
            "N₀ = {PRESET_EMITTERS}; stationary values depend on N₀ only through Δ_th/N₀, and κ/γ∥ follows from g, Δ_th/N₀ and N₀"
        ));
    }
    Ok(Manifest {
        figure: figure.name(),
        description: figure.description(),
        notes,
        files,
    })
}

/// Writes the CSV files of `figure` and its `manifest.json` into `dir`
/// (created if missing) and returns the paths written, manifest last.
pub fn write_figure(figure: Figure, dir: &Path, workers: usize) -> Result<Vec<PathBuf>> {
    let manifest = build(figure, workers)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for curve in &manifest.files {
        let path = dir.join(&curve.file);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(&curve.header)?;
        for row in &curve.data {
            w.write_record(row)?;
        }
        w.flush()?;
        written.push(path);
    }
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text)?;
    written.push(path);
    Ok(written)
}
