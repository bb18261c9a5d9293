//! Acceptance suite: thirteen end-to-end properties of the laser model,
//! each printed as one PASS/FAIL line. The process exits non-zero when any
//! property fails.
//!
//! Runs as `cargo test -p glre-cli --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use glre_core::lre::{beta, beta_c_formula, lre_stationary};
use glre_core::semiconductor::{find_semi_steady, semi_stationary_n, semi_threshold_pump};
use glre_core::statistics::{
    g2_semiconductor_at_pump, g2_semiconductor_formula, g2_two_level, g2_two_level_formula,
};
use glre_core::two_level::{
    c_factor, find_glre_steady, saturation_photon_number, stationary_inversion, stationary_n,
    stationary_n_no_ce,
};
use glre_core::{figures, integrate, semiconductor, two_level};
use glre_core::{DimensionlessParams, IntegrationConfig, LaserParams, PumpGrid, Spacing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = fn() -> Outcome;

fn main() {
    let checks: [(&str, Check); 13] = [
        (
            "ODE steady state matches the closed forms",
            ode_matches_closed_form,
        ),
        ("weak collective coupling reproduces the LRE", lre_limit),
        (
            "curves merge far above threshold",
            above_threshold_convergence,
        ),
        ("photon trapping below inversion", photon_trapping),
        ("collective factor clamps to 2κ/γ⊥", c_clamping),
        ("g₂ upper bound and limits", g2_bound_and_limits),
        ("sub-thermal light for Δ_th/N₀ > 1/2", sub_thermal_region),
        ("semiconductor g₂ identities", semiconductor_identities),
        ("photon saturation without lasing", saturation),
        ("β_c falls with 2κ/γ⊥", beta_c_monotone),
        ("opposite N₀ trends of g₂", emitter_number_contrast),
        ("RK4 is fourth order", rk4_order),
        ("sweep output is deterministic", sweep_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!outcome.pass);
        println!(
            "{verdict} [{:>2}] {name}: {} ({:.2?})",
            i + 1,
            outcome.detail,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn dimensionless(g: f64, ratio_2k_gp: f64, dth_over_n0: f64, n_emitters: u64) -> LaserParams<f64> {
    DimensionlessParams {
        g,
        ratio_2k_gp,
        dth_over_n0,
        n_emitters,
        kappa_over_gpar: None,
    }
    .to_laser_params()
    .expect("valid parameter set")
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn log_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    PumpGrid {
        min,
        max,
        count,
        spacing: Spacing::Log,
    }
    .points()
    .expect("valid grid")
}

fn log_uniform(rng: &mut ChaCha8Rng, min: f64, max: f64) -> f64 {
    10f64.powf(rng.gen_range(min.log10()..max.log10()))
}

const RANDOM_SETS: usize = 120;
const ODE_TOL: f64 = 1e-6;
const ODE_BUDGET: Duration = Duration::from_secs(120);

/// Random (g, 2κ/γ⊥, N₀/Δ_th, P); κ/γ∥ = 1 so Δ_th = 2/g and
/// N₀ = round(2m/g). The two-level pump range is [0, 10·P_th] (or
/// [0, 10⁴] without a threshold); the semiconductor range is
/// [0, 10·N_th/N₀], i.e. the same span relative to its own threshold.
fn ode_matches_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_101);
    let start = Instant::now();
    let (mut worst_glre, mut worst_semi) = (0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for i in 0..RANDOM_SETS {
        let g = log_uniform(&mut rng, 0.01, 2.0);
        let r = log_uniform(&mut rng, 1e-3, 10.0);
        let m = log_uniform(&mut rng, 0.1, 1e3);
        let n0 = ((2.0 * m / g).round() as u64).max(1);
        let params = DimensionlessParams {
            g,
            ratio_2k_gp: r,
            dth_over_n0: 2.0 / (g * n0 as f64),
            n_emitters: n0,
            kappa_over_gpar: Some(1.0),
        }
        .to_laser_params()
        .expect("valid parameter set");
        let dp0 = params.derive(0.0).unwrap();
        let u: f64 = rng.gen();

        let pmax = dp0.p_th.map_or(1e4, |p| 10.0 * p);
        let dp = params.derive(u * pmax).unwrap();
        match find_glre_steady(&dp, &two_level::steady_config(&dp)) {
            Ok(s) => {
                let e = rel(s.n, stationary_n(&dp));
                worst_glre = worst_glre.max(e);
                if !(e < ODE_TOL) {
                    failures.push(format!("set {i} glre error {e:.1e}"));
                }
            }
            Err(e) => failures.push(format!("set {i} glre: {e}")),
        }

        let dps = params.derive(u * 10.0 * semi_threshold_pump(&dp0)).unwrap();
        match find_semi_steady(&dps, &semiconductor::steady_config(&dps)) {
            Ok(s) => {
                let e = rel(s.n, semi_stationary_n(&dps));
                worst_semi = worst_semi.max(e);
                if !(e < ODE_TOL) {
                    failures.push(format!("set {i} semiconductor error {e:.1e}"));
                }
            }
            Err(e) => failures.push(format!("set {i} semiconductor: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "{RANDOM_SETS} sets, worst relative error glre {worst_glre:.1e}, semiconductor {worst_semi:.1e}, {elapsed:.1?}"
    );
    if !failures.is_empty() {
        detail += &format!("; {}", failures.join("; "));
    }
    Outcome::new(failures.is_empty() && elapsed < ODE_BUDGET, detail)
}

/// At 2κ/γ⊥ = 10⁻⁴ the collective terms vanish and the two-level photon
/// number must follow the conventional rate equations.
fn lre_limit() -> Outcome {
    let mut worst = 0.0f64;
    for (g, dth, n0) in [
        (2.0 / 3.0, 0.01, 1000),
        (0.048, 50.0 / (0.048 * 10_000.0), 10_000),
        (1.5, 0.3, 100),
    ] {
        let p = dimensionless(g, 1e-4, dth, n0);
        let pth = p.derive(0.0).unwrap().p_th.expect("lasing set");
        for pump in log_grid(0.1 * pth, 10.0 * pth, 400) {
            let dp = p.derive(pump).unwrap();
            worst = worst.max(rel(stationary_n(&dp), lre_stationary(&dp).n));
        }
    }
    Outcome::new(
        worst < 1e-3,
        format!("max |n − n_LRE|/n_LRE = {worst:.2e} (limit 1e-3)"),
    )
}

fn above_threshold_convergence() -> Outcome {
    let n_at = |r: f64| {
        let p = dimensionless(2.0 / 3.0, r, 0.01, 1000);
        let pth = p.derive(0.0).unwrap().p_th.unwrap();
        stationary_n(&p.derive(10.0 * pth).unwrap())
    };
    let (weak, strong) = (n_at(0.01), n_at(6.0));
    let d = rel(strong, weak);
    Outcome::new(
        d < 0.05,
        format!(
            "n(0.01) = {weak:.4}, n(6) = {strong:.4}, difference {:.2}% (limit 5%)",
            100.0 * d
        ),
    )
}

/// Over the pump range of the 2κ/γ⊥ family with g = 2/3, Δ_th/N₀ = 0.01.
fn photon_trapping() -> Outcome {
    let family = |r: f64| dimensionless(2.0 / 3.0, r, 0.01, 1000);
    let (weak, strong) = (family(0.01), family(6.0));
    let pth = weak.derive(0.0).unwrap().p_th.unwrap();
    let (mut checked, mut strict_r, mut strict_ce, mut violations) = (0, 0, 0, Vec::new());
    for pump in log_grid(1e-2 * pth, 1e2 * pth, 400) {
        let dw = weak.derive(pump).unwrap();
        let ds = strong.derive(pump).unwrap();
        if stationary_inversion(&dw) < 0.0 && stationary_inversion(&ds) < 0.0 {
            checked += 1;
            let (nw, ns) = (stationary_n(&dw), stationary_n(&ds));
            if ns > nw {
                violations.push(format!("P = {pump:.3e}: n(6) > n(0.01)"));
            }
            strict_r += usize::from(ns < nw);
        }
        for d in [&dw, &ds] {
            if stationary_inversion(d) < 0.0 {
                let (n, n_free) = (stationary_n(d), stationary_n_no_ce(d));
                if n > n_free {
                    violations.push(format!(
                        "P = {pump:.3e}, 2κ/γ⊥ = {}: n > n_noCE",
                        d.ratio_2k_gp
                    ));
                }
                strict_ce += usize::from(n < n_free);
            }
        }
    }
    let pass = checked > 0 && violations.is_empty() && strict_r > 0 && strict_ce > 0;
    let mut detail =
        format!("{checked} pumps with Δ < 0; strict: {strict_r} (2κ/γ⊥), {strict_ce} (vs C = 0)");
    if !violations.is_empty() {
        detail += &format!("; {}", violations.join("; "));
    }
    Outcome::new(pass, detail)
}

fn c_clamping() -> Outcome {
    let p = figures::fig1b_params().unwrap();
    let dp0 = p.derive(0.0).unwrap();
    let (pth, target) = (dp0.p_th.unwrap(), dp0.ratio_2k_gp);
    let gap = |pump: f64| {
        let dp = p.derive(pump).unwrap();
        (c_factor(stationary_inversion(&dp), &dp).unwrap() - target).abs()
    };
    let above: Vec<f64> = log_grid(1e-2 * pth, 1e2 * pth, 400)
        .into_iter()
        .filter(|&x| x > pth)
        .collect();
    let gaps: Vec<f64> = above.iter().map(|&x| gap(x)).collect();
    let rises = gaps.windows(2).filter(|w| w[1] >= w[0]).count();
    let final_gap = gap(100.0 * pth);
    Outcome::new(
        rises == 0 && final_gap < 0.01 * target,
        format!(
            "2κ/γ⊥ = {target}; {} pumps above P_th, {rises} non-decreasing steps; |C − 2κ/γ⊥| at 100·P_th = {final_gap:.2e} (limit {:.3})",
            above.len(),
            0.01 * target
        ),
    )
}

const MAP_SIDE: usize = 50;

/// The (γ⊥/2κ, Δ_th/N₀) map: γ⊥/2κ ∈ [10⁻², 10²], Δ_th/N₀ ∈ [10⁻³, 10].
fn g2_map() -> Vec<(f64, f64)> {
    let us = log_grid(1e-2, 1e2, MAP_SIDE);
    let ds = log_grid(1e-3, 10.0, MAP_SIDE);
    us.iter()
        .flat_map(|&u| ds.iter().map(move |&d| (u, d)))
        .collect()
}

fn g2_bound_and_limits() -> Outcome {
    let bound_violations = g2_map()
        .into_iter()
        .filter(|&(u, d)| !(g2_two_level_formula(0.0, u, 1.0 / d) < 2.0 + 1.0 / u))
        .count();
    // The approach to g₂ = 1 scales like (γ⊥/2κ)(N₀/Δ_th)/6n, so it is
    // checked on the parameter sets whose photon-number curves are drawn.
    let large_n = [100.0, 50.0]
        .iter()
        .flat_map(|&m| [0.1, 1.0, 10.0].map(|u| g2_two_level_formula(1e9, u, m) - 1.0))
        .fold(0.0f64, f64::max);
    let corner: f64 = g2_two_level_formula(0.0, 1e-6, 1e-6);
    let pass = bound_violations == 0 && large_n < 1e-6 && (corner - 4.0 / 3.0).abs() < 1e-3;
    Outcome::new(
        pass,
        format!(
            "{bound_violations}/{} grid points violate g₂(0) < 2 + 2κ/γ⊥; max g₂(10⁹) − 1 = {large_n:.1e}; corner g₂(0) = {corner:.6}",
            MAP_SIDE * MAP_SIDE
        ),
    )
}

fn sub_thermal_region() -> Outcome {
    let region: Vec<f64> = g2_map()
        .into_iter()
        .filter(|&(_, d)| d > 0.5)
        .map(|(u, d)| g2_two_level_formula(0.0, u, 1.0 / d))
        .collect();
    let outside = region.iter().filter(|&&g| !(g > 1.0 && g < 2.0)).count();
    let (lo, hi) = region
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &g| {
            (a.min(g), b.max(g))
        });
    Outcome::new(
        !region.is_empty() && outside == 0,
        format!("{} grid points with Δ_th/N₀ > 1/2, g₂(0) ∈ [{lo:.4}, {hi:.4}], {outside} outside (1, 2)", region.len()),
    )
}

fn semiconductor_identities() -> Outcome {
    let us = log_grid(1e-3, 1e3, 200);
    let identity = us
        .iter()
        .map(|&u| (g2_semiconductor_formula(0.0, u) - (2.0 - 2.0 / (3.0 + u))).abs())
        .fold(0.0f64, f64::max);
    let mut ns = vec![0.0];
    ns.extend(log_grid(1e-6, 1e9, 200));
    let mut max_g2 = 0.0f64;
    for &u in &us {
        for &n in &ns {
            max_g2 = max_g2.max(g2_semiconductor_formula(n, u));
        }
    }
    let mut max_pumped = 0.0f64;
    for (g, r, d) in [
        (2.0 / 3.0, 6.0, 0.01),
        (0.048, 2.5, 0.004),
        (1.5, 0.01, 2.0),
    ] {
        let p = dimensionless(g, r, d, 1000);
        let pth = semi_threshold_pump(&p.derive(0.0).unwrap());
        for pump in log_grid(1e-3 * pth, 1e3 * pth, 100) {
            max_pumped = max_pumped.max(g2_semiconductor_at_pump(&p.derive(pump).unwrap()));
        }
    }
    Outcome::new(
        identity < 1e-12 && max_g2 < 2.0 && max_pumped < 2.0,
        format!("identity error {identity:.1e}; max g₂ over (n, γ⊥/2κ) {max_g2:.6}, over pump sweeps {max_pumped:.6}"),
    )
}

fn saturation() -> Outcome {
    let mut worst = 0.0f64;
    for (g, n0) in [(1.0, 100), (0.1, 1000), (2.0, 10)] {
        let dp = dimensionless(g, 1.0, 2.0, n0).derive(1e6).unwrap();
        let n_s = saturation_photon_number(&dp).unwrap();
        assert_eq!(n_s, 0.5);
        worst = worst.max(rel(stationary_n(&dp), n_s));
    }
    Outcome::new(
        worst < 1e-3,
        format!(
            "n(P = 10⁶) within {:.3}% of n_s = 0.5 (limit 0.1%)",
            100.0 * worst
        ),
    )
}

fn beta_c_monotone() -> Outcome {
    let ratios = [0.0, 0.5, 1.0, 2.0, 6.0];
    let mut ok = true;
    let mut rows = Vec::new();
    for g in [0.01, 0.048, 2.0 / 3.0, 2.0] {
        let values: Vec<f64> = ratios.iter().map(|&r| beta_c_formula(g, r)).collect();
        let dp = dimensionless(g, 1.0, 0.01, 1000).derive(1.0).unwrap();
        ok &= values.windows(2).all(|w| w[1] < w[0]) && values[0] == beta(&dp);
        rows.push(format!("g = {g:.3}: {:.4}→{:.4}", values[0], values[4]));
    }
    Outcome::new(
        ok,
        format!("β_c(0) = β and strictly decreasing; {}", rows.join(", ")),
    )
}

/// Two-level: Δ_th fixed, N₀ grows, so N₀/Δ_th grows and so does g₂ at
/// fixed small n. Semiconductor: N_th fixed, N₀ grows at fixed P, so the
/// photon number grows and g₂ falls.
fn emitter_number_contrast() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let delta_th = 10.0;
    for r in [0.1, 1.0, 10.0] {
        let g2s: Vec<f64> = [50.0, 100.0]
            .iter()
            .map(|&m| {
                let n0 = (m * delta_th) as u64;
                let dp = dimensionless(2.0 / 3.0, r, 1.0 / m, n0)
                    .derive(1.0)
                    .unwrap();
                g2_two_level(0.1, &dp)
            })
            .collect();
        ok &= g2s[1] > g2s[0];
        notes.push(format!(
            "two-level 2κ/γ⊥ = {r}: {:.4} < {:.4}",
            g2s[0], g2s[1]
        ));
    }
    let base = dimensionless(2.0 / 3.0, 1.0, 0.02, 500);
    assert_eq!(base.derive(0.0).unwrap().n_th, delta_th);
    for pump in [1e-3, 1e-2, 0.1] {
        let g2s: Vec<f64> = [50, 100, 200]
            .iter()
            .map(|&k| {
                let p = LaserParams {
                    n_emitters: k * delta_th as u64,
                    ..base
                };
                g2_semiconductor_at_pump(&p.derive(pump).unwrap())
            })
            .collect();
        ok &= g2s.windows(2).all(|w| w[1] < w[0]);
        notes.push(format!(
            "semiconductor P = {pump}: {:.4} > {:.4} > {:.4}",
            g2s[0], g2s[1], g2s[2]
        ));
    }
    Outcome::new(ok, notes.join("; "))
}

/// y' = −y on [0, 1]; the error must shrink by 2⁴ = 16 per halving, within
/// a factor of two.
fn rk4_order() -> Outcome {
    let error = |dt: f64| {
        let tr = integrate(
            |y: &[f64; 1]| [-y[0]],
            [1.0],
            &IntegrationConfig::fixed(dt, 1.0),
        )
        .unwrap();
        (tr.final_state()[0] - (-1.0f64).exp()).abs()
    };
    let (e1, e2, e3) = (error(0.1), error(0.05), error(0.025));
    let (r1, r2) = (e1 / e2, e2 / e3);
    let inside = |r: f64| (8.0..=32.0).contains(&r);
    Outcome::new(
        inside(r1) && inside(r2),
        format!("error ratios {r1:.2}, {r2:.2} (window [8, 32])"),
    )
}

fn run_sweep_cli(args: &[&str], workers: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_glre"))
        .args(["sweep", "--workers", workers])
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "sweep failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn sweep_determinism() -> Outcome {
    let cases: [&[&str]; 3] = [
        &[
            "--g",
            "0.6666666666666666",
            "--ratio-2k-gp",
            "6",
            "--dth",
            "0.01",
            "--n0",
            "1000",
        ],
        &[
            "--model",
            "semiconductor",
            "--g",
            "0.048",
            "--ratio-2k-gp",
            "2.5",
            "--dth",
            "0.004",
            "--n0",
            "10000",
        ],
        &[
            "--model",
            "lre",
            "--g",
            "1.5",
            "--ratio-2k-gp",
            "0.3",
            "--dth",
            "0.2",
            "--n0",
            "50",
            "--pump-min",
            "0",
            "--pump-max",
            "20",
            "--pump-count",
            "997",
        ],
    ];
    let mut mismatches = Vec::new();
    let mut bytes = 0;
    for (i, args) in cases.iter().enumerate() {
        let reference = run_sweep_cli(args, "1");
        bytes += reference.len();
        for workers in ["1", "8", "8"] {
            if run_sweep_cli(args, workers) != reference {
                mismatches.push(format!("case {i} with {workers} workers"));
            }
        }
    }
    let detail = if mismatches.is_empty() {
        format!(
            "{} sweeps × 4 runs identical ({bytes} bytes per round)",
            cases.len()
        )
    } else {
        format!("differs: {}", mismatches.join(", "))
    };
    Outcome::new(mismatches.is_empty(), detail)
}
