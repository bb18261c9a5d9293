//! `glre`: stationary points, pump sweeps, time integration and figure
//! presets of the generalized laser rate equations.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 numerical
//! failure (non-convergence, non-finite values).

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use glre_core::lre::{integrate_lre, LreState};
use glre_core::semiconductor::integrate_semi;
use glre_core::sweep::{evaluate, fmt_f64, run_sweep, write_csv, Columns};
use glre_core::two_level::integrate_glre;
use glre_core::{lre, semiconductor, two_level};
use glre_core::{Figure, GlreState, LaserParams, Model, SemiState, Spacing, SweepSpec, Trajectory};

use crate::config::{ConfigFile, GridFlags, IntegrationOverrides, ParamFlags};

#[derive(Parser)]
#[command(
    name = "glre",
    version,
    about = "Generalized laser rate equations for nanolasers with collective effects"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary operating point at one pump value, as a one-row CSV.
    Steady(SteadyArgs),
    /// Stationary operating points over a pump grid.
    Sweep(SweepArgs),
    /// Time evolution from the dark (or empty) state.
    Integrate(IntegrateArgs),
    /// Data files and manifest for a figure preset.
    Figure(FigureArgs),
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// glre, glre_no_ce, lre or semiconductor.
    #[arg(long)]
    model: Option<Model>,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
    /// Saturation coupling g.
    #[arg(long)]
    g: Option<f64>,
    /// Ratio 2κ/γ⊥.
    #[arg(long = "ratio-2k-gp")]
    ratio_2k_gp: Option<f64>,
    /// Threshold inversion per emitter Δ_th/N₀.
    #[arg(long)]
    dth: Option<f64>,
    /// Number of emitters N₀.
    #[arg(long)]
    n0: Option<u64>,
    /// κ/γ∥; inferred from g, Δ_th/N₀ and N₀ when absent.
    #[arg(long = "kappa-over-gpar")]
    kappa_over_gpar: Option<f64>,
    /// Recompute γ⊥ at every pump as 2γ_d + γ∥(1 + P).
    #[arg(long)]
    pump_dephasing: bool,
    /// Pure dephasing rate γ_d used with --pump-dephasing.
    #[arg(long)]
    gamma_d: Option<f64>,
}

#[derive(Args)]
struct SteadyArgs {
    #[command(flatten)]
    common: Common,
    /// Dimensionless pump P.
    #[arg(long)]
    pump: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    pump_min: Option<f64>,
    #[arg(long)]
    pump_max: Option<f64>,
    #[arg(long)]
    pump_count: Option<usize>,
    /// Log-spaced pump grid.
    #[arg(long, conflicts_with = "pump_linear")]
    pump_log: bool,
    /// Linearly spaced pump grid.
    #[arg(long)]
    pump_linear: bool,
    /// Worker threads; the output does not depend on this.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    pump: Option<f64>,
    /// Integration horizon.
    #[arg(long)]
    t_max: Option<f64>,
    /// Fixed step (with --fixed-step) or first trial step.
    #[arg(long)]
    dt: Option<f64>,
    /// Record every n-th accepted step.
    #[arg(long)]
    stride: Option<u64>,
    /// Steady-state residual tolerance.
    #[arg(long)]
    steady_tol: Option<f64>,
    #[arg(long)]
    max_steps: Option<u64>,
    /// Classic RK4 at the step given by --dt.
    #[arg(long)]
    fixed_step: bool,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1b, fig2a, fig2b, fig3a, fig3b, fig4a or fig4b.
    name: String,
    /// Output directory; defaults to ./<name>.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    let numerical = e.chain().any(|c| {
        c.downcast_ref::<glre_core::Error>()
            .is_some_and(|e| e.is_numerical())
    });
    if numerical {
        3
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Steady(a) => steady(a),
        Command::Sweep(a) => sweep(a),
        Command::Integrate(a) => integrate(a),
        Command::Figure(a) => figure(a),
    }
}

struct Resolved {
    file: ConfigFile,
    model: Model,
    params: LaserParams<f64>,
}

fn resolve(c: &Common) -> Result<Resolved> {
    let file = match &c.config {
        Some(path) => config::load(path)?,
        None => ConfigFile::default(),
    };
    let flags = ParamFlags {
        g: c.g,
        ratio_2k_gp: c.ratio_2k_gp,
        dth_over_n0: c.dth,
        n_emitters: c.n0,
        kappa_over_gpar: c.kappa_over_gpar,
    };
    let params = config::resolve_params(&file, &flags, c.pump_dephasing, c.gamma_d)?;
    let model = c.model.or(file.model).unwrap_or(Model::Glre);
    Ok(Resolved {
        file,
        model,
        params,
    })
}

fn open_out(out: &str) -> Result<Box<dyn Write>> {
    if out == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let f = File::create(out).with_context(|| format!("cannot create {out}"))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn pump_of(flag: Option<f64>, file: &ConfigFile) -> Result<f64> {
    match flag.or(file.pump) {
        Some(p) => Ok(p),
        None => bail!("no pump value: pass --pump or set `pump` in the config"),
    }
}

fn steady(a: SteadyArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let pump = pump_of(a.pump, &r.file)?;
    let dp = r.params.derive(pump)?;
    let record = evaluate(r.model, &dp)?;
    let columns = Columns::new(r.model, r.file.outputs.as_deref())?;
    let mut out = open_out(&a.common.out)?;
    write_csv(&mut out, &columns, &[record])?;
    out.flush()?;
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let spacing = if a.pump_log {
        Some(Spacing::Log)
    } else if a.pump_linear {
        Some(Spacing::Linear)
    } else {
        None
    };
    let flags = GridFlags {
        min: a.pump_min,
        max: a.pump_max,
        count: a.pump_count,
        spacing,
    };
    let spec = SweepSpec {
        model: r.model,
        params: r.params,
        pump_grid: config::resolve_grid(r.file.pump_grid, &flags)?,
        outputs: r.file.outputs.clone(),
    };
    let columns = spec.columns()?;
    let workers = a.workers.or(r.file.workers).unwrap_or_else(default_workers);
    let records = run_sweep(&spec, workers)?;
    let mut out = open_out(&a.common.out)?;
    write_csv(&mut out, &columns, &records)?;
    out.flush()?;
    Ok(())
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn integrate(a: IntegrateArgs) -> Result<()> {
    let r = resolve(&a.common)?;
    let pump = pump_of(a.pump, &r.file)?;
    let dp = r.params.derive(pump)?;
    let flags = IntegrationOverrides {
        dt_initial: a.dt,
        t_max: a.t_max,
        steady_state_tol: a.steady_tol,
        max_steps: a.max_steps,
        stride: a.stride,
        fixed_step: a.fixed_step.then_some(true),
        ..Default::default()
    };
    let overrides = r
        .file
        .integration
        .clone()
        .unwrap_or_default()
        .overlay(&flags);
    let mut out = open_out(&a.common.out)?;
    match r.model {
        Model::Glre => {
            let cfg = overrides.apply(two_level::steady_config(&dp));
            let tr = integrate_glre(GlreState::dark(&dp), &dp, &cfg)?;
            write_trajectory(&mut out, &["n", "sigma", "d_corr", "delta"], &tr)?;
        }
        Model::Semiconductor => {
            let cfg = overrides.apply(semiconductor::steady_config(&dp));
            let tr = integrate_semi(SemiState::default(), &dp, &cfg)?;
            write_trajectory(&mut out, &["n", "sigma", "d_corr", "n_e"], &tr)?;
        }
        Model::Lre => {
            let cfg = overrides.apply(lre::steady_config(&dp));
            let tr = integrate_lre(LreState::dark(&dp), &dp, &cfg)?;
            write_trajectory(&mut out, &["n", "delta"], &tr)?;
        }
        Model::GlreNoCe => return Err(glre_core::Error::NoDynamics("glre_no_ce").into()),
    }
    out.flush()?;
    Ok(())
}

/// Columns `t`, the state, and `converged`, which is filled only on the
/// final row.
fn write_trajectory<const N: usize>(
    out: &mut dyn Write,
    names: &[&str; N],
    tr: &Trajectory<f64, N>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t"];
    header.extend(names);
    header.push("converged");
    w.write_record(&header)?;
    let last = tr.times.len() - 1;
    for (i, (t, y)) in tr.times.iter().zip(&tr.states).enumerate() {
        let mut row = vec![fmt_f64(*t)];
        row.extend(y.iter().map(|x| fmt_f64(*x)));
        row.push(if i == last {
            tr.converged.to_string()
        } else {
            String::new()
        });
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn figure(a: FigureArgs) -> Result<()> {
    let fig: Figure = a.name.parse()?;
    let dir = a.out.unwrap_or_else(|| Path::new(".").join(fig.name()));
    let workers = a.workers.unwrap_or_else(default_workers);
    let written = glre_core::figures::write_figure(fig, &dir, workers)?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}
