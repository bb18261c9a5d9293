//! Level scheme with an instantly emptied lower lasing level: the pump feeds
//! the upper level from outside the lasing transition and pump blocking is
//! neglected, so `N_e` is not bounded by N₀.

use serde::Serialize;

use crate::error::Result;
use crate::integrator::{find_steady_balanced, integrate_balanced, IntegrationConfig, Trajectory};
use crate::params::DerivedParams;
use crate::scalar::{positive_root, Real};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SemiState<T> {
    pub n: T,
    pub sigma: T,
    pub d_corr: T,
    /// Upper-level population.
    pub n_e: T,
}

impl<T: Real> SemiState<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.n, self.sigma, self.d_corr, self.n_e]
    }

    pub fn from_array([n, sigma, d_corr, n_e]: [T; 4]) -> Self {
        SemiState {
            n,
            sigma,
            d_corr,
            n_e,
        }
    }

    /// `N_e > N₀` means the neglect of pump blocking is no longer justified.
    pub fn exceeds_emitter_count(&self, dp: &DerivedParams<T>) -> bool {
        self.n_e > dp.n0
    }
}

/// Time derivatives `(ṅ, Σ̇, Ḋ, Ṅ_e)`.
pub fn semi_rhs<T: Real>(state: &SemiState<T>, dp: &DerivedParams<T>) -> [T; 4] {
    let two = T::lit(2.0);
    let SemiState {
        n,
        sigma,
        d_corr,
        n_e,
    } = *state;
    [
        dp.omega0 * sigma - two * dp.kappa * n,
        -(dp.gamma_perp / two + dp.kappa) * sigma
            + two * dp.omega0 * dp.f * (n_e * (n + T::one()) + d_corr),
        -dp.gamma_perp * d_corr + dp.omega0 * n_e * sigma,
        -dp.omega0 * sigma + dp.gamma_par * (dp.pump * dp.n0 - n_e),
    ]
}

/// Summed magnitudes of the terms in each component of [`semi_rhs`].
pub fn term_scale<T: Real>(state: &SemiState<T>, dp: &DerivedParams<T>) -> [T; 4] {
    let two = T::lit(2.0);
    let SemiState {
        n,
        sigma,
        d_corr,
        n_e,
    } = *state;
    let (n, sigma, d_corr, n_e) = (n.abs(), sigma.abs(), d_corr.abs(), n_e.abs());
    [
        dp.omega0 * sigma + two * dp.kappa * n,
        (dp.gamma_perp / two + dp.kappa) * sigma
            + two * dp.omega0 * dp.f * (n_e * (n + T::one()) + d_corr),
        dp.gamma_perp * d_corr + dp.omega0 * n_e * sigma,
        dp.omega0 * sigma + dp.gamma_par * (dp.pump * dp.n0 + n_e),
    ]
}

/// [`IntegrationConfig::for_laser`] with floors suited to [`term_scale`].
pub fn steady_config<T: Real>(dp: &DerivedParams<T>) -> IntegrationConfig<T> {
    IntegrationConfig {
        residual_floor: Some(vec![T::min_positive_value(); 4]),
        ..IntegrationConfig::for_laser(dp)
    }
}

/// Integrates [`semi_rhs`] from `initial` with the steady state judged by
/// [`term_scale`].
pub fn integrate_semi<T: Real>(
    initial: SemiState<T>,
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T, 4>> {
    integrate_balanced(
        |y: &[T; 4]| semi_rhs(&SemiState::from_array(*y), dp),
        |y: &[T; 4]| term_scale(&SemiState::from_array(*y), dp),
        initial.to_array(),
        config,
    )
}

/// Steady state reached from the empty state.
///
/// Far above threshold (N₀P/N_th of order 20 and more) the empty state can
/// lie in the basin of a large-amplitude oscillation that coexists with the
/// stable fixed point; the search then ends in [`Error::NotConverged`].
///
/// [`Error::NotConverged`]: crate::Error::NotConverged
pub fn find_semi_steady<T: Real>(
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<SemiState<T>> {
    find_semi_steady_from(SemiState::default(), dp, config)
}

/// Steady state reached from `initial`.
pub fn find_semi_steady_from<T: Real>(
    initial: SemiState<T>,
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<SemiState<T>> {
    find_steady_balanced(
        |y: &[T; 4]| semi_rhs(&SemiState::from_array(*y), dp),
        |y: &[T; 4]| term_scale(&SemiState::from_array(*y), dp),
        initial.to_array(),
        config,
    )
    .map(SemiState::from_array)
}

/// θ₀ = N₀P/N_th − 1 − g/(1 + 2κ/γ⊥).
pub fn theta0<T: Real>(dp: &DerivedParams<T>) -> T {
    dp.n0 * dp.pump / dp.n_th - T::one() - dp.g_c
}

/// Stationary photon number
/// `n = [θ₀ + √(θ₀² + 4g_c·N₀P/N_th)] / 2g`.
pub fn semi_stationary_n<T: Real>(dp: &DerivedParams<T>) -> T {
    let q = dp.n0 * dp.pump / dp.n_th;
    positive_root(dp.g, theta0(dp), q / (T::one() + dp.ratio_2k_gp))
}

fn ne_from_n<T: Real>(n: T, dp: &DerivedParams<T>) -> T {
    let s = T::one() + dp.ratio_2k_gp;
    dp.n_th * (T::one() - (T::one() + s * n).recip())
}

/// Stationary upper-level population from `1 − N_e/N_th = 1/(1 + (1 + 2κ/γ⊥)n)`.
pub fn semi_stationary_ne<T: Real>(dp: &DerivedParams<T>) -> T {
    ne_from_n(semi_stationary_n(dp), dp)
}

pub fn semi_stationary_state<T: Real>(dp: &DerivedParams<T>) -> SemiState<T> {
    let n = semi_stationary_n(dp);
    let n_e = ne_from_n(n, dp);
    SemiState {
        n,
        sigma: T::lit(2.0) * dp.kappa * n / dp.omega0,
        d_corr: dp.ratio_2k_gp * n_e * n,
        n_e,
    }
}

/// Pump at which N₀P = N_th, the point where θ₀ changes sign up to `1 + g_c`.
pub fn semi_threshold_pump<T: Real>(dp: &DerivedParams<T>) -> T {
    dp.n_th / dp.n0
}
