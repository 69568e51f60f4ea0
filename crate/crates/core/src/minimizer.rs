//! Minimization of F_ε[Ψ] = ⟨⟨Ψ|(K − ε)²|Ψ⟩⟩ / ⟨⟨Ψ|Ψ⟩⟩ over the window
//! coefficients and ε.
//!
//! One cycle is a first-order imaginary-time step on (K − ε)² followed by
//! ε ← ⟨⟨K⟩⟩. The step is
//!
//! ```text
//! c' = normalize(c − dτ · P_W (K − ε)(K − ε) c)
//! ```
//!
//! with the inner product evaluated exactly on the extended window. Since
//! ⟨⟨K⟩⟩ is also the minimizer of F over ε at fixed c, neither half of a cycle
//! can raise F as long as dτ·‖P_W(K − ε)²P_W‖ < 1, which the Gershgorin step
//! rule guarantees.

use crate::basis::ExtendedVector;
use crate::error::{Error, Result};
use crate::operator::OperatorContext;
use crate::units::NumericsConfig;

/// Normalized iterate of the minimizer. `f` is F_ε at the stored ε, in (ħω)².
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalState {
    pub vec: ExtendedVector,
    pub epsilon: f64,
    pub f: f64,
    pub iterations: usize,
}

impl VariationalState {
    /// Normalizes `vec` and evaluates F at `epsilon`.
    pub fn new(ctx: &OperatorContext, mut vec: ExtendedVector, epsilon: f64) -> Result<Self> {
        vec.normalize()?;
        let f = ctx.functional_f(&vec, epsilon)?;
        Ok(Self {
            vec,
            epsilon,
            f,
            iterations: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub converged: bool,
    pub final_f: f64,
    pub delta_f_last: f64,
    pub iterations: usize,
    /// final_f ≤ the configured representability threshold.
    pub representable: bool,
    /// Largest F increase seen between consecutive cycles (0 for a monotone run).
    pub max_f_increase: f64,
}

/// dτ = safety / B², with B the Gershgorin bound of (K − ε) on the extended window.
pub fn dtau_rule(ctx: &OperatorContext, epsilon: f64, safety: f64) -> f64 {
    let b = ctx.gershgorin_bound(epsilon);
    safety / (b * b)
}

const ANNIHILATION_NORM: f64 = 1e-10;

fn descend(
    ctx: &OperatorContext,
    vec: &ExtendedVector,
    residual: &ExtendedVector,
    epsilon: f64,
    dtau: f64,
) -> Result<ExtendedVector> {
    let grad = ctx.residual_back(residual, epsilon)?;
    let mut next = vec.clone();
    next.axpy(-dtau, &grad)?;
    // The input has unit norm; anything this small is cancellation noise.
    let norm = next.norm();
    if !(norm > ANNIHILATION_NORM) || !norm.is_finite() {
        return Err(Error::StepAnnihilated(dtau));
    }
    next.scale(1.0 / norm);
    Ok(next)
}

/// One imaginary-time step at fixed ε.
pub fn imaginary_time_step(
    ctx: &OperatorContext,
    state: &VariationalState,
    dtau: f64,
) -> Result<VariationalState> {
    let residual = ctx.residual(&state.vec, state.epsilon)?;
    let vec = descend(ctx, &state.vec, &residual, state.epsilon, dtau)?;
    let f = ctx.functional_f(&vec, state.epsilon)?;
    Ok(VariationalState {
        vec,
        epsilon: state.epsilon,
        f,
        iterations: state.iterations,
    })
}

/// ε ← ⟨⟨K⟩⟩ at fixed coefficients.
pub fn update_epsilon(ctx: &OperatorContext, state: &VariationalState) -> Result<VariationalState> {
    let epsilon = ctx.expectation_k(&state.vec)?;
    let f = ctx.functional_f(&state.vec, epsilon)?;
    Ok(VariationalState {
        vec: state.vec.clone(),
        epsilon,
        f,
        iterations: state.iterations,
    })
}

/// Alternates [`imaginary_time_step`] and [`update_epsilon`] until |ΔF| drops
/// below `cfg.tol_f` or `cfg.max_iters` cycles have run.
///
/// Running out of iterations is reported through `converged = false`, not as
/// an error.
pub fn relax(
    ctx: &OperatorContext,
    seed: &VariationalState,
    cfg: &NumericsConfig,
) -> Result<(VariationalState, ConvergenceReport)> {
    let mut vec = seed.vec.clone();
    vec.normalize()?;
    let mut epsilon = seed.epsilon;
    // K c on the extended window, reused for ⟨⟨K⟩⟩, F and the next residual.
    let mut kc = ctx.apply_k(&vec)?;
    let mut f = kc.dist_sqr_embedded(epsilon, &vec);

    let mut delta = f64::INFINITY;
    let mut max_increase = 0.0f64;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let mut residual = kc;
        residual.add_embedded(-epsilon, &vec);
        let dtau = dtau_rule(ctx, epsilon, cfg.dtau_safety);
        vec = descend(ctx, &vec, &residual, epsilon, dtau)?;

        kc = ctx.apply_k(&vec)?;
        epsilon = kc.dot_embedded(&vec);
        let f_new = kc.dist_sqr_embedded(epsilon, &vec);

        delta = f_new - f;
        max_increase = max_increase.max(delta);
        f = f_new;
        if delta.abs() < cfg.tol_f {
            converged = true;
            break;
        }
    }

    let state = VariationalState {
        vec,
        epsilon,
        f,
        iterations,
    };
    let report = ConvergenceReport {
        converged,
        final_f: f,
        delta_f_last: delta,
        iterations,
        representable: converged && f <= cfg.representable_max_f,
        max_f_increase: max_increase,
    };
    Ok((state, report))
}
