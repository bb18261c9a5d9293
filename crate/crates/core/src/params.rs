//! Laser parameter sets and the quantities derived from them.
//!
//! Rates are in arbitrary but common units ("κ-units" once a configuration
//! is built from dimensionless ratios, where κ ≡ 1). The photon decay rate
//! of the cavity is 2κ and the pump rate is γ∥·P with dimensionless P.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical parameters of one single-mode laser with `n_emitters` two-level emitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserParams<T> {
    /// Vacuum Rabi frequency Ω₀.
    pub omega0: T,
    /// Mean squared emitter–mode coupling, `f = N₀⁻¹ Σ fᵢ²`, in (0, 1].
    pub f: T,
    /// Number of emitters N₀.
    pub n_emitters: u64,
    /// Half the cavity photon decay rate.
    pub kappa: T,
    /// Population relaxation rate γ∥.
    pub gamma_par: T,
    /// Polarization decay rate γ⊥. Ignored when `pump_dependent_dephasing` is set.
    pub gamma_perp: T,
    /// Pure dephasing rate γ_d, used only with `pump_dependent_dephasing`.
    #[serde(default)]
    pub gamma_d: T,
    /// Recompute γ⊥ per pump value as `2γ_d + γ∥(1 + P)`.
    #[serde(default)]
    pub pump_dependent_dephasing: bool,
}

/// Dimensionless description of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionlessParams<T> {
    /// Saturation coupling g = 4Ω₀²f/(γ∥γ⊥).
    pub g: T,
    /// 2κ/γ⊥.
    pub ratio_2k_gp: T,
    /// d_th = Δ_th/N₀.
    pub dth_over_n0: T,
    pub n_emitters: u64,
    /// κ/γ∥. Only matters for time-domain integration; when absent it is
    /// inferred from `g`, `dth_over_n0` and `n_emitters`.
    #[serde(default)]
    pub kappa_over_gpar: Option<T>,
}

/// Everything the model formulas need at one pump value.
///
/// Built by [`LaserParams::derive`], which validates the inputs, so every
/// function taking a `&DerivedParams` is total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams<T> {
    pub pump: T,
    pub omega0: T,
    pub f: T,
    pub kappa: T,
    pub gamma_par: T,
    /// Effective γ⊥ at `pump` (pump-dependent when dephasing mode is on).
    pub gamma_perp: T,
    /// N₀ as a scalar.
    pub n0: T,
    pub g: T,
    pub g_c: T,
    pub ratio_2k_gp: T,
    /// Threshold inversion Δ_th = γ⊥κ/(2Ω₀²f).
    pub delta_th: T,
    pub d_th: T,
    /// Semiclassical threshold pump, absent when N₀ ≤ Δ_th.
    pub p_th: Option<T>,
    /// Threshold upper-level population of the semiconductor scheme.
    pub n_th: T,
}

fn positive<T: Real>(field: &'static str, x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be finite and > 0, got {x}"),
        ))
    }
}

impl<T: Real> LaserParams<T> {
    pub fn validate(&self) -> Result<()> {
        positive("omega0", self.omega0)?;
        positive("kappa", self.kappa)?;
        positive("gamma_par", self.gamma_par)?;
        if self.n_emitters < 1 {
            return Err(Error::invalid("n_emitters", "must be ≥ 1"));
        }
        if !(self.f.is_finite() && self.f > T::zero() && self.f <= T::one()) {
            return Err(Error::invalid(
                "f",
                format!("must lie in (0, 1], got {}", self.f),
            ));
        }
        if self.pump_dependent_dephasing {
            if !(self.gamma_d.is_finite() && self.gamma_d >= T::zero()) {
                return Err(Error::invalid(
                    "gamma_d",
                    format!("must be finite and ≥ 0, got {}", self.gamma_d),
                ));
            }
        } else {
            positive("gamma_perp", self.gamma_perp)?;
        }
        Ok(())
    }

    /// γ⊥ in effect at `pump`.
    pub fn gamma_perp_at(&self, pump: T) -> T {
        if self.pump_dependent_dephasing {
            T::lit(2.0) * self.gamma_d + self.gamma_par * (T::one() + pump)
        } else {
            self.gamma_perp
        }
    }

    /// Validates the parameters and evaluates all derived quantities at `pump`.
    pub fn derive(&self, pump: T) -> Result<DerivedParams<T>> {
        self.validate()?;
        if !(pump.is_finite() && pump >= T::zero()) {
            return Err(Error::invalid(
                "pump",
                format!("must be finite and ≥ 0, got {pump}"),
            ));
        }
        let two = T::lit(2.0);
        let gamma_perp = self.gamma_perp_at(pump);
        let coupling = self.omega0 * self.omega0 * self.f;
        let g = T::lit(4.0) * coupling / (self.gamma_par * gamma_perp);
        let ratio_2k_gp = two * self.kappa / gamma_perp;
        let delta_th = gamma_perp * self.kappa / (two * coupling);
        let n0 = T::from_count(self.n_emitters);
        let p_th = (n0 > delta_th).then(|| (n0 + delta_th) / (n0 - delta_th));
        Ok(DerivedParams {
            pump,
            omega0: self.omega0,
            f: self.f,
            kappa: self.kappa,
            gamma_par: self.gamma_par,
            gamma_perp,
            n0,
            g,
            g_c: g / (T::one() + ratio_2k_gp),
            ratio_2k_gp,
            delta_th,
            d_th: delta_th / n0,
            p_th,
            n_th: self.kappa * gamma_perp / (two * coupling),
        })
    }

    /// Copy of `self` with pump-dependent dephasing switched on.
    pub fn with_pump_dephasing(mut self, gamma_d: T) -> Self {
        self.pump_dependent_dephasing = true;
        self.gamma_d = gamma_d;
        self
    }
}

impl<T: Real> DimensionlessParams<T> {
    /// Parameter set described by rate ratios, the way cavity experiments
    /// usually quote them: κ/γ∥, γ⊥/γ∥, g and N₀.
    pub fn from_rate_ratios(
        g: T,
        gamma_perp_over_gpar: T,
        kappa_over_gpar: T,
        n_emitters: u64,
    ) -> Self {
        let two = T::lit(2.0);
        DimensionlessParams {
            g,
            ratio_2k_gp: two * kappa_over_gpar / gamma_perp_over_gpar,
            dth_over_n0: two * kappa_over_gpar / (g * T::from_count(n_emitters)),
            n_emitters,
            kappa_over_gpar: Some(kappa_over_gpar),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("g", self.g)?;
        positive("ratio_2k_gp", self.ratio_2k_gp)?;
        positive("dth_over_n0", self.dth_over_n0)?;
        if self.n_emitters < 1 {
            return Err(Error::invalid("n_emitters", "must be ≥ 1"));
        }
        if let Some(k) = self.kappa_over_gpar {
            positive("kappa_over_gpar", k)?;
        }
        Ok(())
    }

    /// Physical parameters in κ-units reproducing this dimensionless set.
    ///
    /// κ = 1, γ⊥ = 2/(2κ/γ⊥), f = 1 and Ω₀² = gγ∥γ⊥/4. Since Δ_th = 2κ/(gγ∥),
    /// the triple (g, d_th, N₀) already fixes γ∥; an explicit κ/γ∥ must agree
    /// with it to relative 1e-9.
    pub fn to_laser_params(&self) -> Result<LaserParams<T>> {
        self.validate()?;
        let two = T::lit(2.0);
        let kappa = T::one();
        let n0 = T::from_count(self.n_emitters);
        let delta_th = self.dth_over_n0 * n0;
        let gamma_par = match self.kappa_over_gpar {
            Some(k) => {
                let implied = two * k / self.g;
                let tol = T::lit(1e-9).max(T::epsilon() * T::lit(16.0));
                if (implied - delta_th).abs() > tol * implied.abs().max(delta_th.abs()) {
                    return Err(Error::Inconsistent(format!(
                        "Δ_th = 2(κ/γ∥)/g = {implied} but d_th·N₀ = {delta_th}; \
                         drop kappa_over_gpar or set it to g·d_th·N₀/2 = {}",
                        self.g * delta_th / two
                    )));
                }
                kappa / k
            }
            None => two * kappa / (self.g * delta_th),
        };
        let gamma_perp = two * kappa / self.ratio_2k_gp;
        let omega0 = (self.g * gamma_par * gamma_perp / T::lit(4.0)).sqrt();
        Ok(LaserParams {
            omega0,
            f: T::one(),
            n_emitters: self.n_emitters,
            kappa,
            gamma_par,
            gamma_perp,
            gamma_d: T::zero(),
            pump_dependent_dephasing: false,
        })
    }
}

impl<T: Real> DerivedParams<T> {
    pub fn is_lasing(&self) -> bool {
        self.p_th.is_some()
    }

    /// N₀/Δ_th.
    pub fn inv_d_th(&self) -> T {
        self.n0 / self.delta_th
    }

    /// γ⊥/2κ.
    pub fn gamma_perp_over_2kappa(&self) -> T {
        self.ratio_2k_gp.recip()
    }

    /// Upper-level population N_e = (N₀ + Δ)/2.
    pub fn upper_population(&self, delta: T) -> T {
        (self.n0 + delta) / T::lit(2.0)
    }

    pub fn dimensionless(&self) -> DimensionlessParams<T> {
        DimensionlessParams {
            g: self.g,
            ratio_2k_gp: self.ratio_2k_gp,
            dth_over_n0: self.d_th,
            n_emitters: self.n0.to_u64().unwrap_or(0),
            kappa_over_gpar: Some(self.kappa / self.gamma_par),
        }
    }
}
