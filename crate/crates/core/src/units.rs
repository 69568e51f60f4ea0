//! Dimensionless unit system and validated parameters.
//!
//! Everything in this crate works with ħ = M = ω = 1, where ω is the drive
//! frequency. The period is therefore T = 2π, energies are quoted in units of
//! ħω and amplitudes in units of √(ħMω³).

use crate::error::ParamError;

/// Physical parameters of the linearly driven oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega_ratio: f64,
    lambda_scaled: f64,
}

impl SystemParams {
    /// `omega_ratio` is ω/ω₀, `lambda_scaled` is λ/√(ħMω³).
    pub fn new(omega_ratio: f64, lambda_scaled: f64) -> Result<Self, ParamError> {
        if !omega_ratio.is_finite() || omega_ratio <= 0.0 {
            return Err(ParamError::NonPositiveFrequency(omega_ratio));
        }
        if omega_ratio == 1.0 {
            return Err(ParamError::Resonant);
        }
        if !lambda_scaled.is_finite() || lambda_scaled < 0.0 {
            return Err(ParamError::NegativeAmplitude(lambda_scaled));
        }
        Ok(Self {
            omega_ratio,
            lambda_scaled,
        })
    }

    pub fn omega_ratio(&self) -> f64 {
        self.omega_ratio
    }

    pub fn lambda_scaled(&self) -> f64 {
        self.lambda_scaled
    }

    /// Same frequency ratio, different amplitude.
    pub fn with_lambda(&self, lambda_scaled: f64) -> Result<Self, ParamError> {
        Self::new(self.omega_ratio, lambda_scaled)
    }

    /// ω₀/ω.
    pub fn omega0(&self) -> f64 {
        1.0 / self.omega_ratio
    }

    /// Unperturbed level E_n/(ħω).
    pub fn level(&self, n: usize) -> f64 {
        (n as f64 + 0.5) / self.omega_ratio
    }

    /// Scale of the position matrix elements, ⟨n+1|x|n⟩ = scale·√(n+1).
    pub fn x_scale(&self) -> f64 {
        (self.omega_ratio / 2.0).sqrt()
    }
}

/// Derived dimensionless constants for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitTable {
    /// ω₀/ω.
    pub omega0_over_omega: f64,
    /// √(omega_ratio/2), the position matrix-element scale.
    pub x_scale: f64,
    /// The drive amplitude, already in units of √(ħMω³).
    pub lambda_scaled: f64,
    params: SystemParams,
}

impl UnitTable {
    /// E_n/(ħω).
    pub fn level(&self, n: usize) -> f64 {
        self.params.level(n)
    }

    /// Converts an amplitude given in units of √(ħMω³) back into the
    /// internal convention. With ħ = M = ω = 1 the two coincide.
    pub fn amplitude_from_scaled(&self, scaled: f64) -> f64 {
        scaled
    }

    pub fn amplitude_to_scaled(&self, internal: f64) -> f64 {
        internal
    }
}

pub fn scaled_units(params: &SystemParams) -> UnitTable {
    UnitTable {
        omega0_over_omega: params.omega0(),
        x_scale: params.x_scale(),
        lambda_scaled: params.lambda_scaled(),
        params: *params,
    }
}

/// Tolerances and step sizes shared by the minimizer, the tracer and the
/// propagation oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Convergence threshold on |ΔF| between cycles, in (ħω)².
    pub tol_f: f64,
    /// Continuation step in λ/√(ħMω³).
    pub dlambda: f64,
    /// Fraction of the largest stable imaginary-time step.
    pub dtau_safety: f64,
    pub max_iters: usize,
    /// RK4 steps per period for the propagation oracle.
    pub propagator_steps: usize,
    /// F/(ħω)² at or below which a converged state counts as representable.
    pub representable_max_f: f64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            tol_f: 1e-8,
            dlambda: 0.025,
            dtau_safety: 0.9,
            max_iters: 200_000,
            propagator_steps: 2000,
            representable_max_f: 1e-3,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<(), ParamError> {
        let bad = |field: &'static str, value: f64| Err(ParamError::Numerics { field, value });
        if !(self.tol_f > 0.0) {
            return bad("tol_f", self.tol_f);
        }
        if !(self.dlambda > 0.0) || !self.dlambda.is_finite() {
            return bad("dlambda", self.dlambda);
        }
        if !(self.dtau_safety > 0.0 && self.dtau_safety < 1.0) {
            return bad("dtau_safety", self.dtau_safety);
        }
        if self.max_iters < 1 {
            return bad("max_iters", self.max_iters as f64);
        }
        if self.propagator_steps < 100 {
            return bad("propagator_steps", self.propagator_steps as f64);
        }
        if !(self.representable_max_f > 0.0) {
            return bad("representable_max_f", self.representable_max_f);
        }
        Ok(())
    }
}
