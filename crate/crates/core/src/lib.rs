//! Variational computation of individual Floquet states.
//!
//! A Floquet state of a T-periodic Hamiltonian is an eigenvector of the
//! quasienergy operator K = H(t) − iħ d/dt on the space of T-periodic
//! functions. Because K is unbounded below there is no Rayleigh-Ritz
//! ground state, but the functional
//!
//! ```text
//! F_ε[Ψ] = ⟨⟨Ψ|(K − ε)²|Ψ⟩⟩ / ⟨⟨Ψ|Ψ⟩⟩ ≥ 0
//! ```
//!
//! vanishes exactly on eigenpairs. This crate minimizes F over a truncated
//! basis {e^{imωt}|n⟩} and ε jointly, follows a state through the driving
//! amplitude by continuation, and checks the results against the exactly
//! solvable linearly driven oscillator.
//!
//! Modules:
//! - [`units`]: dimensionless parameters (ħ = M = ω = 1).
//! - [`basis`]: windows and coefficient vectors.
//! - [`operator`]: matrix-free K and the exact residual.
//! - [`minimizer`]: imaginary-time relaxation of (K − ε)².
//! - [`tracer`]: continuation in λ.
//! - [`oracle`]: closed-form solution and brute-force propagation.

pub mod basis;
pub mod error;
pub mod minimizer;
pub mod operator;
pub mod oracle;
pub mod tracer;
pub mod units;

pub use basis::{overlap, AnsatzWindow, ExtendedVector};
pub use error::{Error, ParamError, Result};
pub use minimizer::{dtau_rule, imaginary_time_step, relax, update_epsilon, ConvergenceReport, VariationalState};
pub use operator::OperatorContext;
pub use tracer::{
    breakdown_amplitude, representability_bound, trace, trace_points, trace_while, trace_with, TraceConfig, TracePoint,
    TraceRecord,
};
pub use units::{scaled_units, NumericsConfig, SystemParams, UnitTable};
