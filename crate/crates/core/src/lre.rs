//! Conventional laser rate equations (the large-dephasing limit) and the
//! spontaneous-emission β factors.

use serde::Serialize;

use crate::error::Result;
use crate::integrator::{integrate_balanced, IntegrationConfig, Trajectory};
use crate::params::DerivedParams;
use crate::scalar::Real;
use crate::two_level::stationary_constant_coupling;

/// Photon number and inversion of the two-variable rate equations.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LreState<T> {
    pub n: T,
    pub delta: T,
}

impl<T: Real> LreState<T> {
    pub fn dark(dp: &DerivedParams<T>) -> Self {
        LreState {
            n: T::zero(),
            delta: -dp.n0,
        }
    }

    pub fn to_array(self) -> [T; 2] {
        [self.n, self.delta]
    }

    pub fn from_array([n, delta]: [T; 2]) -> Self {
        LreState { n, delta }
    }
}

/// `(dn/dt, dΔ/dt)` of
///
/// ```text
/// γ∥⁻¹ṅ = g(nΔ + N_e) − (2κ/γ∥)n
/// γ∥⁻¹Δ̇ = −2g(nΔ + N_e) + P(N₀ − Δ) − N₀ − Δ
/// ```
pub fn lre_rhs<T: Real>(state: &LreState<T>, dp: &DerivedParams<T>) -> (T, T) {
    let two = T::lit(2.0);
    let LreState { n, delta } = *state;
    let gain = dp.g * (n * delta + dp.upper_population(delta));
    let dn = gain - two * dp.kappa / dp.gamma_par * n;
    let ddelta = -two * gain + dp.pump * (dp.n0 - delta) - dp.n0 - delta;
    (dp.gamma_par * dn, dp.gamma_par * ddelta)
}

/// Summed magnitudes of the terms in each component of [`lre_rhs`].
pub fn term_scale<T: Real>(state: &LreState<T>, dp: &DerivedParams<T>) -> [T; 2] {
    let two = T::lit(2.0);
    let LreState { n, delta } = *state;
    let gain = dp.g * ((n * delta).abs() + dp.upper_population(delta).abs());
    [
        dp.gamma_par * (gain + two * dp.kappa / dp.gamma_par * n.abs()),
        dp.gamma_par * (two * gain + (T::one() + dp.pump) * (dp.n0 + delta.abs())),
    ]
}

/// [`IntegrationConfig::for_laser`] with floors suited to [`term_scale`].
pub fn steady_config<T: Real>(dp: &DerivedParams<T>) -> IntegrationConfig<T> {
    IntegrationConfig {
        residual_floor: Some(vec![T::min_positive_value(); 2]),
        ..IntegrationConfig::for_laser(dp)
    }
}

/// Integrates [`lre_rhs`] from `initial` with the steady state judged by
/// [`term_scale`].
pub fn integrate_lre<T: Real>(
    initial: LreState<T>,
    dp: &DerivedParams<T>,
    config: &IntegrationConfig<T>,
) -> Result<Trajectory<T, 2>> {
    integrate_balanced(
        |y: &[T; 2]| {
            let (dn, dd) = lre_rhs(&LreState::from_array(*y), dp);
            [dn, dd]
        },
        |y: &[T; 2]| term_scale(&LreState::from_array(*y), dp),
        initial.to_array(),
        config,
    )
}

/// Stationary point: the constant-coupling solution with `G = g`, `Δ′_th = Δ_th`.
pub fn lre_stationary<T: Real>(dp: &DerivedParams<T>) -> LreState<T> {
    let (n, delta) = stationary_constant_coupling(dp.pump, dp.g, dp.delta_th, dp.n0);
    LreState { n, delta }
}

/// Fraction of spontaneous emission into the lasing mode, `β = g/(1 + g)`.
pub fn beta<T: Real>(dp: &DerivedParams<T>) -> T {
    dp.g / (T::one() + dp.g)
}

/// Collective β factor `β_c = g/(1 + g + 2κ/γ⊥)`.
pub fn beta_c<T: Real>(dp: &DerivedParams<T>) -> T {
    beta_c_formula(dp.g, dp.ratio_2k_gp)
}

/// `β_c` from `g` and `2κ/γ⊥` directly; `2κ/γ⊥ = 0` gives β.
pub fn beta_c_formula<T: Real>(g: T, ratio_2k_gp: T) -> T {
    g / (T::one() + g + ratio_2k_gp)
}

/// Relaxation rates renormalized by spontaneous emission into the mode,
/// with correspondingly rescaled pumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenormalizedRates<T> {
    /// γ_tot = γ∥(1 + g)
    pub gamma_tot: T,
    /// P′ = Pγ∥/γ_tot
    pub pump_tot: T,
    /// γ_c = γ∥(1 + g_c)
    pub gamma_c: T,
    /// P_c = Pγ∥/γ_c
    pub pump_c: T,
}

pub fn renormalized_rates<T: Real>(dp: &DerivedParams<T>) -> RenormalizedRates<T> {
    let gamma_tot = dp.gamma_par * (T::one() + dp.g);
    let gamma_c = dp.gamma_par * (T::one() + dp.g_c);
    RenormalizedRates {
        gamma_tot,
        pump_tot: dp.pump * dp.gamma_par / gamma_tot,
        gamma_c,
        pump_c: dp.pump * dp.gamma_par / gamma_c,
    }
}
