//! Explicit time integration of small autonomous ODE systems.
//!
//! Two steppers: classic fixed-step RK4, and the Dormand–Prince 5(4)
//! embedded pair with step-size control (selected by setting `abs_tol`
//! and/or `rel_tol`). Integration stops at `t_max`, after `max_steps`
//! steps, or as soon as the scaled residual
//! `maxᵢ |ẏᵢ| / max(sᵢ, floorᵢ)` falls below `steady_state_tol`.
//!
//! [`integrate`] uses `sᵢ = |yᵢ|` with the floor defaulting to 1.
//! [`integrate_balanced`] takes `sᵢ` from a caller-supplied function, meant
//! to be the summed magnitude of the terms that cancel in `ẏᵢ` at a fixed
//! point. That residual is dimensionless and stays usable for stiff
//! systems: an explicit stepper hovering at its stability limit keeps the
//! fast components jittering at the `rel_tol` level, which a `|yᵢ|`-scaled
//! residual sees multiplied by the fastest rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DerivedParams;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationConfig<T> {
    /// Fixed step (RK4) or first trial step (adaptive).
    pub dt_initial: T,
    pub t_max: T,
    #[serde(default)]
    pub abs_tol: Option<T>,
    #[serde(default)]
    pub rel_tol: Option<T>,
    pub steady_state_tol: T,
    pub max_steps: u64,
    /// Record every `stride`-th accepted step. The initial and final states
    /// are always recorded.
    #[serde(default = "default_stride")]
    pub stride: u64,
    /// Per-component floor of the residual scale; `None` means 1 everywhere.
    #[serde(default)]
    pub residual_floor: Option<Vec<T>>,
}

fn default_stride() -> u64 {
    1
}

impl<T: Real> IntegrationConfig<T> {
    /// Fixed-step RK4 without steady-state stopping.
    pub fn fixed(dt: T, t_max: T) -> Self {
        IntegrationConfig {
            dt_initial: dt,
            t_max,
            abs_tol: None,
            rel_tol: None,
            steady_state_tol: T::min_positive_value(),
            max_steps: u64::MAX,
            stride: 1,
            residual_floor: None,
        }
    }

    /// Defaults for a laser configuration: first step 10⁻³/κ, horizon
    /// 10³·max(1/γ∥, 1/κ), residual tolerance 10⁻¹⁰, at most 10⁸ steps,
    /// adaptive with `rel_tol = 1e-12`, `abs_tol = 1e-16`. The step
    /// tolerance sits well below the residual tolerance so that
    /// step-control noise cannot hold the residual above it.
    pub fn for_laser(dp: &DerivedParams<T>) -> Self {
        let slow = dp.gamma_par.recip().max(dp.kappa.recip());
        IntegrationConfig {
            dt_initial: T::lit(1e-3) / dp.kappa,
            t_max: T::lit(1e3) * slow,
            abs_tol: Some(T::lit(1e-16)),
            rel_tol: Some(T::lit(1e-12)),
            steady_state_tol: T::lit(1e-10),
            max_steps: 100_000_000,
            stride: 1,
            residual_floor: None,
        }
    }

    pub fn is_adaptive(&self) -> bool {
        self.abs_tol.is_some() || self.rel_tol.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |field: &'static str, x: T| {
            if x.is_finite() && x > T::zero() {
                Ok(())
            } else {
                Err(Error::invalid(
                    field,
                    format!("must be finite and > 0, got {x}"),
                ))
            }
        };
        pos("dt_initial", self.dt_initial)?;
        if !(self.t_max.is_finite() && self.t_max >= T::zero()) {
            return Err(Error::invalid(
                "t_max",
                format!("must be finite and ≥ 0, got {}", self.t_max),
            ));
        }
        if let Some(a) = self.abs_tol {
            pos("abs_tol", a)?;
        }
        if let Some(r) = self.rel_tol {
            pos("rel_tol", r)?;
        }
        pos("steady_state_tol", self.steady_state_tol)?;
        if self.max_steps < 1 {
            return Err(Error::invalid("max_steps", "must be ≥ 1"));
        }
        if self.stride < 1 {
            return Err(Error::invalid("stride", "must be ≥ 1"));
        }
        if let Some(f) = &self.residual_floor {
            if f.iter().any(|x| !(x.is_finite() && *x > T::zero())) {
                return Err(Error::invalid(
                    "residual_floor",
                    "entries must be finite and > 0",
                ));
            }
        }
        Ok(())
    }
}

/// Recorded solution of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T, const N: usize> {
    pub times: Vec<T>,
    pub states: Vec<[T; N]>,
    pub converged: bool,
    pub final_residual: T,
    /// Accepted steps taken.
    pub steps: u64,
}

impl<T: Real, const N: usize> Trajectory<T, N> {
    pub fn final_state(&self) -> [T; N] {
        *self
            .states
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> T {
        *self
            .times
            .last()
            .expect("trajectory holds the initial time")
    }
}

fn scaled_residual<T: Real, const N: usize>(dy: &[T; N], scale: &[T; N], floor: &[T]) -> T {
    let mut worst = T::zero();
    for i in 0..N {
        let scale = scale[i].abs().max(floor[i]);
        let r = dy[i].abs() / scale;
        // NaN propagates as "not converged"
        if !(r <= worst) {
            worst = r;
        }
    }
    worst
}

#[inline]
fn lincomb<T: Real, const N: usize>(y: &[T; N], h: T, terms: &[(T, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + *c * k[i];
        }
        out[i] = out[i] + h * acc;
    }
    out
}

fn all_finite<T: Real, const N: usize>(y: &[T; N]) -> bool {
    y.iter().all(|x| x.is_finite())
}

fn to_f64_vec<T: Real, const N: usize>(y: &[T; N]) -> Vec<f64> {
    y.iter().map(|x| x.as_f64()).collect()
}

struct Dopri<T> {
    a: [[T; 6]; 6],
    b: [T; 7],
    e: [T; 7],
}

impl<T: Real> Dopri<T> {
    fn new() -> Self {
        let l = |x: f64| T::lit(x);
        let z = T::zero();
        Dopri {
            a: [
                [l(1.0 / 5.0), z, z, z, z, z],
                [l(3.0 / 40.0), l(9.0 / 40.0), z, z, z, z],
                [l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0), z, z, z],
                [
                    l(19372.0 / 6561.0),
                    l(-25360.0 / 2187.0),
                    l(64448.0 / 6561.0),
                    l(-212.0 / 729.0),
                    z,
                    z,
                ],
                [
                    l(9017.0 / 3168.0),
                    l(-355.0 / 33.0),
                    l(46732.0 / 5247.0),
                    l(49.0 / 176.0),
                    l(-5103.0 / 18656.0),
                    z,
                ],
                [
                    l(35.0 / 384.0),
                    z,
                    l(500.0 / 1113.0),
                    l(125.0 / 192.0),
                    l(-2187.0 / 6784.0),
                    l(11.0 / 84.0),
                ],
            ],
            b: [
                l(35.0 / 384.0),
                z,
                l(500.0 / 1113.0),
                l(125.0 / 192.0),
                l(-2187.0 / 6784.0),
                l(11.0 / 84.0),
                z,
            ],
            e: [
                l(71.0 / 57600.0),
                z,
                l(-71.0 / 16695.0),
                l(71.0 / 1920.0),
                l(-17253.0 / 339200.0),
                l(22.0 / 525.0),
                l(-1.0 / 40.0),
            ],
        }
    }
}

/// Integrates `ẏ = rhs(y)` from `initial` at t = 0, judging the steady
/// state against `|yᵢ|`.
pub fn integrate<T, const N: usize, F>(
    rhs: F,
    initial: [T; N],
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T, N>>
where
    T: Real,
    F: FnMut(&[T; N]) -> [T; N],
{
    integrate_balanced(rhs, |y: &[T; N]| *y, initial, config)
}

/// Integrates `ẏ = rhs(y)` from `initial` at t = 0, judging the steady
/// state against `scale(y)`.
pub fn integrate_balanced<T, const N: usize, F, S>(
    mut rhs: F,
    mut scale: S,
    initial: [T; N],
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T, N>>
where
    T: Real,
    F: FnMut(&[T; N]) -> [T; N],
    S: FnMut(&[T; N]) -> [T; N],
{
    config.validate()?;
    let floor: Vec<T> = match &config.residual_floor {
        Some(f) if f.len() == N => f.clone(),
        Some(f) => {
            return Err(Error::invalid(
                "residual_floor",
                format!("expected {N} entries, got {}", f.len()),
            ))
        }
        None => vec![T::one(); N],
    };
    if !all_finite(&initial) {
        return Err(Error::NonFinite {
            step: 0,
            time: 0.0,
            state: to_f64_vec(&initial),
        });
    }

    let mut t = T::zero();
    let mut y = initial;
    let mut k1 = rhs(&y);
    let mut residual = scaled_residual(&k1, &scale(&y), &floor);
    let mut traj = Trajectory {
        times: vec![t],
        states: vec![y],
        converged: residual < config.steady_state_tol,
        final_residual: residual,
        steps: 0,
    };
    if traj.converged {
        return Ok(traj);
    }

    let mut attempts: u64 = 0;
    let mut h = config.dt_initial.min(config.t_max);
    let tableau = config.is_adaptive().then(Dopri::<T>::new);
    let atol = config.abs_tol.unwrap_or(T::zero());
    let rtol = config.rel_tol.unwrap_or(T::zero());
    let two = T::lit(2.0);
    let six = T::lit(6.0);

    while t < config.t_max && attempts < config.max_steps {
        attempts += 1;
        let y_new;
        let k_new;
        match &tableau {
            None => {
                let n_next = T::from_count(traj.steps + 1);
                let mut t_next = n_next * config.dt_initial;
                if t_next >= config.t_max
                    || config.t_max - t_next < T::lit(1e-9) * config.dt_initial
                {
                    t_next = config.t_max;
                }
                h = t_next - t;
                let half = h / two;
                let k2 = rhs(&lincomb(&y, half, &[(T::one(), &k1)]));
                let k3 = rhs(&lincomb(&y, half, &[(T::one(), &k2)]));
                let k4 = rhs(&lincomb(&y, h, &[(T::one(), &k3)]));
                y_new = lincomb(
                    &y,
                    h / six,
                    &[(T::one(), &k1), (two, &k2), (two, &k3), (T::one(), &k4)],
                );
                if !all_finite(&y_new) {
                    return Err(Error::NonFinite {
                        step: traj.steps + 1,
                        time: t_next.as_f64(),
                        state: to_f64_vec(&y_new),
                    });
                }
                k_new = rhs(&y_new);
                t = t_next;
            }
            Some(tab) => {
                let h_min = T::epsilon() * T::lit(16.0) * t.abs().max(config.dt_initial);
                if h < h_min {
                    return Err(Error::StepUnderflow {
                        time: t.as_f64(),
                        step_size: h.as_f64(),
                    });
                }
                h = h.min(config.t_max - t);
                let a = &tab.a;
                let k2 = rhs(&lincomb(&y, h, &[(a[0][0], &k1)]));
                let k3 = rhs(&lincomb(&y, h, &[(a[1][0], &k1), (a[1][1], &k2)]));
                let k4 = rhs(&lincomb(
                    &y,
                    h,
                    &[(a[2][0], &k1), (a[2][1], &k2), (a[2][2], &k3)],
                ));
                let k5 = rhs(&lincomb(
                    &y,
                    h,
                    &[
                        (a[3][0], &k1),
                        (a[3][1], &k2),
                        (a[3][2], &k3),
                        (a[3][3], &k4),
                    ],
                ));
                let k6 = rhs(&lincomb(
                    &y,
                    h,
                    &[
                        (a[4][0], &k1),
                        (a[4][1], &k2),
                        (a[4][2], &k3),
                        (a[4][3], &k4),
                        (a[4][4], &k5),
                    ],
                ));
                let trial = lincomb(
                    &y,
                    h,
                    &[
                        (a[5][0], &k1),
                        (a[5][2], &k3),
                        (a[5][3], &k4),
                        (a[5][4], &k5),
                        (a[5][5], &k6),
                    ],
                );
                let k7 = rhs(&trial);
                let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
                let mut err = T::zero();
                let mut finite = all_finite(&trial) && all_finite(&k7);
                for i in 0..N {
                    let mut e = T::zero();
                    for (c, k) in tab.e.iter().zip(ks.iter()) {
                        e = e + *c * k[i];
                    }
                    let sc = atol + rtol * y[i].abs().max(trial[i].abs());
                    let ratio = (h * e).abs() / sc;
                    if !ratio.is_finite() {
                        finite = false;
                    }
                    err = err.max(ratio);
                }
                debug_assert!(tab.b[6] == T::zero());
                if !finite {
                    h = h * T::lit(0.1);
                    continue;
                }
                let factor = if err == T::zero() {
                    T::lit(5.0)
                } else {
                    (T::lit(0.9) * err.powf(T::lit(-0.2)))
                        .max(T::lit(0.2))
                        .min(T::lit(5.0))
                };
                if err > T::one() {
                    h = h * factor.min(T::one());
                    continue;
                }
                let t_next = t + h;
                t = if config.t_max - t_next <= T::epsilon() * config.t_max {
                    config.t_max
                } else {
                    t_next
                };
                y_new = trial;
                k_new = k7;
                h = h * factor;
            }
        }
        y = y_new;
        k1 = k_new;
        traj.steps += 1;
        if !all_finite(&k1) {
            return Err(Error::NonFinite {
                step: traj.steps,
                time: t.as_f64(),
                state: to_f64_vec(&y),
            });
        }
        residual = scaled_residual(&k1, &scale(&y), &floor);
        let done = residual < config.steady_state_tol;
        if done || traj.steps % config.stride == 0 {
            traj.times.push(t);
            traj.states.push(y);
        }
        if done {
            traj.converged = true;
            break;
        }
    }
    traj.final_residual = residual;
    if *traj.times.last().unwrap() != t {
        traj.times.push(t);
        traj.states.push(y);
    }
    Ok(traj)
}

/// Integrates until the `|yᵢ|`-scaled steady-state criterion holds and
/// returns that state.
pub fn find_steady<T, const N: usize, F>(
    rhs: F,
    initial: [T; N],
    config: &IntegrationConfig<T>,
) -> Result<[T; N]>
where
    T: Real,
    F: FnMut(&[T; N]) -> [T; N],
{
    find_steady_balanced(rhs, |y: &[T; N]| *y, initial, config)
}

/// [`find_steady`] with the residual judged against `term_scale(y)`.
pub fn find_steady_balanced<T, const N: usize, F, S>(
    rhs: F,
    term_scale: S,
    initial: [T; N],
    config: &IntegrationConfig<T>,
) -> Result<[T; N]>
where
    T: Real,
    F: FnMut(&[T; N]) -> [T; N],
    S: FnMut(&[T; N]) -> [T; N],
{
    let quiet = IntegrationConfig {
        stride: u64::MAX,
        ..config.clone()
    };
    let traj = integrate_balanced(rhs, term_scale, initial, &quiet)?;
    if traj.converged {
        Ok(traj.final_state())
    } else {
        Err(Error::NotConverged {
            residual: traj.final_residual.as_f64(),
            state: to_f64_vec(&traj.final_state()),
        })
    }
}
