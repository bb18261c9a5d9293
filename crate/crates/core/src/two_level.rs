//! Two-level emitter model: the four coupled mean-field rate equations for
//! photon number `n`, emitter–field correlation `Σ`, dipole–dipole
//! correlation `D` and inversion `Δ`, plus their closed-form stationary
//! solution.
//!
//! Stationary relations used throughout: `Ω₀Σ = 2κn`, `D = (2κ/γ⊥)·n·Δ`.
//! Eliminating `Σ` and `D` leaves the rate-equation pair of the
//! conventional model with `g` replaced by the inversion-dependent coupling
//! `G_Δ = g_c·(1 + C(Δ))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{find_steady_balanced, integrate_balanced, IntegrationConfig, Trajectory};
use crate::params::DerivedParams;
use crate::scalar::{positive_root, Real};

/// Mean-field state of the two-level model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct GlreState<T> {
    pub n: T,
    pub sigma: T,
    pub d_corr: T,
    pub delta: T,
}

/// Time derivatives of the [`GlreState`] fields.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StateDerivative<T> {
    pub dn: T,
    pub dsigma: T,
    pub dd_corr: T,
    pub ddelta: T,
}

impl<T: Real> GlreState<T> {
    /// Unpumped ground state: no photons, all emitters down.
    pub fn dark(dp: &DerivedParams<T>) -> Self {
        GlreState {
            n: T::zero(),
            sigma: T::zero(),
            d_corr: T::zero(),
            delta: -dp.n0,
        }
    }

    pub fn to_array(self) -> [T; 4] {
        [self.n, self.sigma, self.d_corr, self.delta]
    }

    pub fn from_array([n, sigma, d_corr, delta]: [T; 4]) -> Self {
        GlreState {
            n,
            sigma,
            d_corr,
            delta,
        }
    }
}

impl<T: Real> StateDerivative<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.dn, self.dsigma, self.dd_corr, self.ddelta]
    }

    pub fn max_abs(&self) -> T {
        self.to_array()
            .iter()
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }
}

/// Right-hand side of the two-level rate equations.
pub fn glre_rhs<T: Real>(state: &GlreState<T>, dp: &DerivedParams<T>) -> StateDerivative<T> {
    let two = T::lit(2.0);
    let GlreState {
        n,
        sigma,
        d_corr,
        delta,
    } = *state;
    let n_e = dp.upper_population(delta);
    StateDerivative {
        dn: dp.omega0 * sigma - two * dp.kappa * n,
        dsigma: -(dp.gamma_perp / two + dp.kappa) * sigma
            + two * dp.omega0 * dp.f * (n * delta + n_e + d_corr),
        dd_corr: -dp.gamma_perp * d_corr + dp.omega0 * delta * sigma,
        ddelta: -two * dp.omega0 * sigma
            + dp.gamma_par * (dp.pump * (dp.n0 - delta) - dp.n0 - delta),
    }
}

/// Summed magnitudes of the terms in each component of [`glre_rhs`]; the
/// natural scale against which a derivative counts as zero.
pub fn term_scale<T: Real>(state: &GlreState<T>, dp: &DerivedParams<T>) -> [T; 4] {
    let two = T::lit(2.0);
    let GlreState {
        n,
        sigma,
        d_corr,
        delta,
    } = *state;
    let (n, sigma, d_corr) = (n.abs(), sigma.abs(), d_corr.abs());
    let n_e = dp.upper_population(delta).abs();
    [
        dp.omega0 * sigma + two * dp.kappa * n,
        (dp.gamma_perp / two + dp.kappa) * sigma
            + two * dp.omega0 * dp.f * (n * delta.abs() + n_e + d_corr),
        dp.gamma_perp * d_corr + dp.omega0 * (delta * sigma).abs(),
        two * dp.omega0 * sigma + dp.gamma_par * (T::one() + dp.pump) * (dp.n0 + delta.abs()),
    ]
}

/// [`IntegrationConfig::for_laser`] with floors suited to [`term_scale`].
pub fn steady_config<T: Real>(dp: &DerivedParams<T>) -> IntegrationConfig<T> {
    IntegrationConfig {
        residual_floor: Some(vec![T::min_positive_value(); 4]),
        ..IntegrationConfig::for_laser(dp)
    }
}

/// Integrates [`glre_rhs`] from `initial` with the steady state judged by
/// [`term_scale`].
pub fn integrate_glre<T: Real>(
    initial: GlreState<T>,
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T, 4>> {
    integrate_balanced(
        |y: &[T; 4]| glre_rhs(&GlreState::from_array(*y), dp).to_array(),
        |y: &[T; 4]| term_scale(&GlreState::from_array(*y), dp),
        initial.to_array(),
        config,
    )
}

/// Steady state reached from the dark state.
pub fn find_glre_steady<T: Real>(
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<GlreState<T>> {
    find_steady_balanced(
        |y: &[T; 4]| glre_rhs(&GlreState::from_array(*y), dp).to_array(),
        |y: &[T; 4]| term_scale(&GlreState::from_array(*y), dp),
        GlreState::dark(dp).to_array(),
        config,
    )
    .map(GlreState::from_array)
}

/// Collective-effect strength
/// `C(Δ) = (2κ/γ⊥)(Δ/Δ_th) / [1 + (2κ/γ⊥)(1 − Δ/Δ_th)]`.
pub fn c_factor<T: Real>(delta: T, dp: &DerivedParams<T>) -> Result<T> {
    let x = delta / dp.delta_th;
    let r = dp.ratio_2k_gp;
    let denom = T::one() + r * (T::one() - x);
    if denom.abs() <= T::epsilon() * (T::one() + r) {
        return Err(Error::CFactorPole {
            delta: delta.as_f64(),
            ratio: x.as_f64(),
        });
    }
    Ok(r * x / denom)
}

/// θ(P) = (P − 1)N₀/Δ_th − P − 1 − g_c.
pub fn theta<T: Real>(dp: &DerivedParams<T>) -> T {
    let p = dp.pump;
    (p - T::one()) * dp.inv_d_th() - p - T::one() - dp.g_c
}

/// Stationary photon number
/// `n = [θ + √(θ² + 8g_c·P·N₀/Δ_th)] / 4g`, evaluated without cancellation
/// below threshold.
pub fn stationary_n<T: Real>(dp: &DerivedParams<T>) -> T {
    let c = dp.pump * dp.inv_d_th() / (T::one() + dp.ratio_2k_gp);
    positive_root(T::lit(2.0) * dp.g, theta(dp), c)
}

fn inversion_from_n<T: Real>(n: T, dp: &DerivedParams<T>) -> T {
    let s = T::one() + dp.ratio_2k_gp;
    let gap = (T::one() + dp.inv_d_th()) / (T::lit(2.0) * s * n + T::one());
    dp.delta_th * (T::one() - gap)
}

/// Stationary inversion from `1 − Δ/Δ_th = (1 + N₀/Δ_th) / (2(1 + 2κ/γ⊥)n + 1)`.
pub fn stationary_inversion<T: Real>(dp: &DerivedParams<T>) -> T {
    inversion_from_n(stationary_n(dp), dp)
}

/// Full stationary state `(n, Σ = 2κn/Ω₀, D = (2κ/γ⊥)nΔ, Δ)`.
pub fn stationary_state<T: Real>(dp: &DerivedParams<T>) -> GlreState<T> {
    let n = stationary_n(dp);
    let delta = inversion_from_n(n, dp);
    GlreState {
        n,
        sigma: T::lit(2.0) * dp.kappa * n / dp.omega0,
        d_corr: dp.ratio_2k_gp * n * delta,
        delta,
    }
}

/// Stationary point of the rate-equation pair with a constant coupling `G`
/// and threshold `Δ′_th`:
///
/// ```text
/// 0 = G(nΔ + N_e) − G·Δ′_th·n
/// 0 = −2G(nΔ + N_e) + P(N₀ − Δ) − N₀ − Δ
/// ```
///
/// The loss coefficient 2κ/γ∥ is written as `G·Δ′_th`. Returns `(n, Δ)`
/// with `n ≥ 0`.
pub fn stationary_constant_coupling<T: Real>(pump: T, coupling: T, threshold: T, n0: T) -> (T, T) {
    let m = n0 / threshold;
    let theta = (pump - T::one()) * m - pump - T::one() - coupling;
    let n = positive_root(T::lit(2.0) * coupling, theta, pump * m);
    let delta = threshold * (T::one() - (T::one() + m) / (T::lit(2.0) * n + T::one()));
    (n, delta)
}

/// Stationary `(n, Δ)` with collective effects switched off (`C ≡ 0`): the
/// constant-coupling problem with `G = g_c` and `Δ′_th = Δ_th(1 + 2κ/γ⊥)`.
pub fn stationary_no_ce<T: Real>(dp: &DerivedParams<T>) -> (T, T) {
    stationary_constant_coupling(
        dp.pump,
        dp.g_c,
        dp.delta_th * (T::one() + dp.ratio_2k_gp),
        dp.n0,
    )
}

pub fn stationary_n_no_ce<T: Real>(dp: &DerivedParams<T>) -> T {
    stationary_no_ce(dp).0
}

/// Limit of the photon number for `P → ∞` when lasing is impossible
/// (Δ_th/N₀ > 1): `n_s = [(Δ_th/N₀ − 1)(1 + 2κ/γ⊥)]⁻¹`.
pub fn saturation_photon_number<T: Real>(dp: &DerivedParams<T>) -> Result<T> {
    if dp.d_th <= T::one() {
        return Err(Error::LasingRegime {
            dth_over_n0: dp.d_th.as_f64(),
        });
    }
    Ok(((dp.d_th - T::one()) * (T::one() + dp.ratio_2k_gp)).recip())
}
