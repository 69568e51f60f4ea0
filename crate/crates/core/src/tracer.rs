//! Continuation of one Floquet state in the driving amplitude.
//!
//! Starting from the exact undriven state |start_n⟩ (m = 0) at λ = 0, the
//! amplitude is raised in steps of δλ; each minimization is seeded with the
//! converged coefficients and ε of the previous amplitude. The sweep runs to
//! `lambda_max` regardless of whether the state stays representable.

use crate::basis::{AnsatzWindow, ExtendedVector};
use crate::error::{Error, Result};
use crate::minimizer::{relax, ConvergenceReport, VariationalState};
use crate::operator::OperatorContext;
use crate::oracle::analytic::{circular_distance, exact_quasienergy, fold};
use crate::units::{NumericsConfig, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    /// Parameters at λ = 0; only the frequency ratio is used.
    pub params0: SystemParams,
    pub window: AnsatzWindow,
    pub lambda_max: f64,
    pub numerics: NumericsConfig,
    pub start_n: usize,
}

impl TraceConfig {
    /// The usual setup where the traced state sits at the window centre.
    pub fn centered(omega_ratio: f64, n0: usize, r: usize, lambda_max: f64) -> Result<Self> {
        Ok(Self {
            params0: SystemParams::new(omega_ratio, 0.0)?,
            window: AnsatzWindow::new(n0, r)?,
            lambda_max,
            numerics: NumericsConfig::default(),
            start_n: n0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.numerics.validate()?;
        if !self.window.n_range().contains(&self.start_n) {
            return Err(Error::StartOutsideWindow(self.start_n));
        }
        if !(self.lambda_max > 0.0) || !self.lambda_max.is_finite() {
            return Err(Error::InvalidLambdaMax(self.lambda_max));
        }
        Ok(())
    }

    /// λ = 0, δλ, 2δλ, … up to and including `lambda_max`.
    pub fn lambda_grid(&self) -> Vec<f64> {
        let dl = self.numerics.dlambda;
        let count = (self.lambda_max / dl + 1e-9).floor() as usize;
        let mut grid: Vec<f64> = (0..=count).map(|k| k as f64 * dl).collect();
        if self.lambda_max - grid[count] > 1e-9 * dl {
            grid.push(self.lambda_max);
        }
        grid
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub lambda_scaled: f64,
    pub epsilon_folded: f64,
    pub epsilon_unfolded: f64,
    /// Exact folded quasienergy of the traced state.
    pub epsilon_exact: f64,
    /// Circular distance between variational and exact quasienergy.
    pub delta_eps_exact: f64,
    /// F_ε in (ħω)².
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    pub representable: bool,
    /// Largest cycle-to-cycle F increase in this minimization.
    pub max_f_increase: f64,
}

impl TraceRecord {
    fn new(params: &SystemParams, start_n: usize, state: &VariationalState, report: &ConvergenceReport) -> Self {
        let epsilon_exact = exact_quasienergy(params, start_n);
        Self {
            lambda_scaled: params.lambda_scaled(),
            epsilon_folded: fold(state.epsilon),
            epsilon_unfolded: state.epsilon,
            epsilon_exact,
            delta_eps_exact: circular_distance(state.epsilon, epsilon_exact),
            f: state.f,
            iterations: report.iterations,
            converged: report.converged,
            representable: report.representable,
            max_f_increase: report.max_f_increase,
        }
    }
}

/// A record together with the converged state it describes.
#[derive(Debug, Clone)]
pub struct TracePoint {
    pub record: TraceRecord,
    pub params: SystemParams,
    pub state: VariationalState,
}

/// Runs the sweep, calling `observe` after every amplitude.
pub fn trace_with<F>(cfg: &TraceConfig, mut observe: F) -> Result<()>
where
    F: FnMut(&TracePoint),
{
    trace_while(cfg, |p| {
        observe(p);
        true
    })
}

/// Like [`trace_with`], but stops early once `keep_going` returns false.
pub fn trace_while<F>(cfg: &TraceConfig, mut keep_going: F) -> Result<()>
where
    F: FnMut(&TracePoint) -> bool,
{
    cfg.validate()?;
    let window = cfg.window;
    let params = cfg.params0.with_lambda(0.0)?;
    let ctx = OperatorContext::new(params, window);
    let seed_vec = ExtendedVector::unit(window, cfg.start_n, 0)?;
    let mut state = VariationalState::new(&ctx, seed_vec, params.level(cfg.start_n))?;

    for lambda in cfg.lambda_grid() {
        let params = cfg.params0.with_lambda(lambda)?;
        let ctx = OperatorContext::new(params, window);
        let seed = VariationalState::new(&ctx, state.vec, state.epsilon)?;
        let (next, report) = relax(&ctx, &seed, &cfg.numerics)?;
        let point = TracePoint {
            record: TraceRecord::new(&params, cfg.start_n, &next, &report),
            params,
            state: next,
        };
        if !keep_going(&point) {
            break;
        }
        state = point.state;
    }
    Ok(())
}

pub fn trace_points(cfg: &TraceConfig) -> Result<Vec<TracePoint>> {
    let mut out = Vec::new();
    trace_with(cfg, |p| out.push(p.clone()))?;
    Ok(out)
}

pub fn trace(cfg: &TraceConfig) -> Result<Vec<TraceRecord>> {
    let mut out = Vec::new();
    trace_with(cfg, |p| out.push(p.record.clone()))?;
    Ok(out)
}

/// Largest scaled amplitude for which the classical sloshing amplitude stays
/// inside the turning points of level r:
/// √([1 − (ω₀/ω)²]² (ω/ω₀) (2r + 1)).
pub fn representability_bound(params: &SystemParams, r: usize) -> f64 {
    let w0 = params.omega0();
    let detuning = 1.0 - w0 * w0;
    (detuning * detuning * params.omega_ratio() * (2 * r + 1) as f64).sqrt()
}

/// The first record flagged as not representable, if any.
pub fn breakdown_amplitude(records: &[TraceRecord]) -> Option<f64> {
    records.iter().find(|r| !r.representable).map(|r| r.lambda_scaled)
}
