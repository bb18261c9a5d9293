//! Zero-delay photon autocorrelation g₂ at stationary operation.
//!
//! Both level schemes have closed forms in terms of the photon number `n`
//! and two dimensionless ratios. The `*_formula` functions take those
//! numbers directly and are what the parameter-map presets sweep over;
//! the other functions read them off a [`DerivedParams`].

use crate::params::DerivedParams;
use crate::scalar::Real;
use crate::semiconductor::semi_stationary_n;
use crate::two_level::stationary_n;

/// Two-level g₂ in terms of `u = γ⊥/2κ` and `m = N₀/Δ_th`:
///
/// `1 + (1 + u)(m + 1) / [3 + 6n(1 + 1/u) + u(m + 1)]`
pub fn g2_two_level_formula<T: Real>(n: T, gamma_perp_over_2kappa: T, inv_d_th: T) -> T {
    let u = gamma_perp_over_2kappa;
    let m1 = inv_d_th + T::one();
    let spread = if n == T::zero() {
        T::zero()
    } else {
        T::lit(6.0) * n * (T::one() + u.recip())
    };
    T::one() + (T::one() + u) * m1 / (T::lit(3.0) + spread + u * m1)
}

/// Semiconductor-scheme g₂: `1 + (u + 1) / [3 + 3n(1 + 1/u) + u]`.
pub fn g2_semiconductor_formula<T: Real>(n: T, gamma_perp_over_2kappa: T) -> T {
    let u = gamma_perp_over_2kappa;
    let spread = if n == T::zero() {
        T::zero()
    } else {
        T::lit(3.0) * n * (T::one() + u.recip())
    };
    T::one() + (u + T::one()) / (T::lit(3.0) + spread + u)
}

/// g₂ of the two-level model at photon number `n`.
///
/// Meant for stationary `n`; transient values are accepted but the formula
/// was obtained from the steady state.
pub fn g2_two_level<T: Real>(n: T, dp: &DerivedParams<T>) -> T {
    g2_two_level_formula(n, dp.gamma_perp_over_2kappa(), dp.inv_d_th())
}

/// g₂ along the stationary curve at the pump stored in `dp`.
pub fn g2_two_level_at_pump<T: Real>(dp: &DerivedParams<T>) -> T {
    g2_two_level(stationary_n(dp), dp)
}

/// Strict upper bound of the two-level g₂: `2 + 2κ/γ⊥`.
pub fn g2_upper_bound<T: Real>(dp: &DerivedParams<T>) -> T {
    T::lit(2.0) + dp.ratio_2k_gp
}

/// Range of g₂(n = 0) for configurations far from lasing (N₀ ≪ Δ_th) as
/// γ⊥/2κ runs from 0 to ∞: `(4/3, 2)`.
pub fn g2_nonlasing_range<T: Real>() -> (T, T) {
    (T::lit(4.0) / T::lit(3.0), T::lit(2.0))
}

pub fn g2_semiconductor<T: Real>(n: T, dp: &DerivedParams<T>) -> T {
    g2_semiconductor_formula(n, dp.gamma_perp_over_2kappa())
}

pub fn g2_semiconductor_at_pump<T: Real>(dp: &DerivedParams<T>) -> T {
    g2_semiconductor(semi_stationary_n(dp), dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_level::tests::dimless;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn coherent_limit() {
        for (u, m) in [(0.1, 100.0), (1.0, 1.0), (10.0, 0.01)] {
            assert!(g2_two_level_formula(1e9, u, m) - 1.0 < 1e-6);
            assert!(g2_semiconductor_formula(1e9, u) - 1.0 < 1e-6);
        }
    }

    #[test]
    fn reference_value_at_zero_photons() {
        // γ⊥/2κ = 1, N₀/Δ_th = 100: 1 + 2·101/(3 + 101)
        let g2: f64 = g2_two_level_formula(0.0, 1.0, 100.0);
        assert_relative_eq!(g2, 1.0 + 202.0 / 104.0, max_relative = 1e-15);
        assert!((g2 - 2.942).abs() < 1e-3);
        // same number from the unreduced ratio G₂/n² with Δ from the
        // stationary relation, evaluated at small n
        let (u, m, n) = (1.0f64, 100.0f64, 1e-9f64);
        let r = 1.0 / u;
        let gap = (1.0 + m) / (2.0 * (1.0 + r) * n + 1.0);
        let unreduced = 1.0 + (1.0 + u) * gap / (3.0 + u * gap);
        assert_relative_eq!(
            unreduced,
            g2_two_level_formula(n, u, m),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bunching_ceiling_for_many_emitters() {
        for r in [0.5, 1.0, 6.0] {
            let g2 = g2_two_level_formula(0.0, 1.0 / r, 1e12);
            assert_relative_eq!(g2, 2.0 + r, max_relative = 1e-9);
        }
    }

    #[test]
    fn nonlasing_range_limits() {
        let (lo, hi): (f64, f64) = g2_nonlasing_range();
        assert_relative_eq!(
            g2_two_level_formula(0.0, 0.0, 0.0),
            lo,
            max_relative = 1e-15
        );
        assert!((g2_two_level_formula(0.0, 1e3, 0.0) - hi).abs() < 1e-2);
        // Δ_th/N₀ = 2 stays sub-thermal for every dephasing ratio
        for k in 0..60 {
            let u = 10f64.powf(-3.0 + 0.1 * k as f64);
            let g2 = g2_two_level_formula(0.0, u, 0.5);
            assert!(g2 > 1.0 && g2 < 2.0);
        }
    }

    #[test]
    fn upper_bound_values() {
        let dp = dimless(1.0, 1.0, 0.1, 100).derive(1.0).unwrap();
        assert_eq!(g2_upper_bound(&dp), 3.0);
        let dp = dimless(1.0, 1e-9, 0.1, 100).derive(1.0).unwrap();
        assert!((g2_upper_bound(&dp) - 2.0).abs() < 1e-8);
        for i in 0..50 {
            let dth = 10f64.powf(-4.0 + 5.0 * i as f64 / 49.0);
            let dp = dimless(1.0, 1.0, dth, 100).derive(0.0).unwrap();
            assert!(g2_two_level(0.0, &dp) < g2_upper_bound(&dp));
        }
    }

    #[test]
    fn semiconductor_zero_photon_value() {
        assert_relative_eq!(
            g2_semiconductor_formula(0.0, 1.0),
            1.5,
            max_relative = 1e-15
        );
        for u in [1e-3f64, 0.1, 1.0, 7.0, 1e3] {
            let direct = g2_semiconductor_formula(0.0, u);
            assert!((direct - (2.0 - 2.0 / (3.0 + u))).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_with_pump() {
        let p = dimless(2.0 / 3.0, 6.0, 0.01, 1000);
        let dp0 = p.derive(0.0).unwrap();
        assert_eq!(g2_two_level_at_pump(&dp0), g2_two_level(0.0, &dp0));
        assert!(g2_two_level_at_pump(&p.derive(1e-3).unwrap()) > 2.0);
        let mut prev = f64::INFINITY;
        for k in 0..60 {
            let pump = 10f64.powf(-2.0 + 0.07 * k as f64);
            let g2 = g2_two_level_at_pump(&p.derive(pump).unwrap());
            assert!(g2 < prev);
            prev = g2;
        }
        assert!(prev - 1.0 < 1e-2);
    }

    #[test]
    fn superthermal_regions() {
        assert!(g2_two_level_formula(0.0, 0.1, 100.0) > 2.0);
        for k in 0..80 {
            let u = 10f64.powf(-4.0 + 0.1 * k as f64);
            assert!(g2_two_level_formula(0.0, u, 1.0 / 0.9) < 2.0);
        }
    }

    proptest! {
        #[test]
        fn bounds_and_monotonicity(
            n in 0.0f64..1e6, dn in 1e-6f64..1e3, u in 1e-3f64..1e3, m in 1e-3f64..1e4,
        ) {
            let a = g2_two_level_formula(n, u, m);
            let b = g2_two_level_formula(n + dn, u, m);
            prop_assert!(b < a);
            prop_assert!(a > 1.0 && a < 2.0 + 1.0 / u);
            let sa = g2_semiconductor_formula(n, u);
            let sb = g2_semiconductor_formula(n + dn, u);
            prop_assert!(sb < sa);
            prop_assert!(sa > 1.0 && sa < 2.0);
        }

        #[test]
        fn grows_with_emitter_count_at_fixed_n(n in 0.0f64..10.0, u in 1e-2f64..1e2, m in 1.0f64..1e3) {
            prop_assert!(g2_two_level_formula(n, u, 2.0 * m) > g2_two_level_formula(n, u, m));
        }
    }
}
