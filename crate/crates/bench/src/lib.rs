//! Benchmark fixtures shared by the criterion targets.

use floquet_core::{AnsatzWindow, ExtendedVector, OperatorContext, SystemParams, VariationalState};

/// Operator at ω/ω₀ = 2/3 on the window centred at `n0` with half-width `r`.
pub fn context(lambda: f64, n0: usize, r: usize) -> OperatorContext {
    OperatorContext::new(
        SystemParams::new(2.0 / 3.0, lambda).expect("valid parameters"),
        AnsatzWindow::new(n0, r).expect("valid window"),
    )
}

/// A deterministic dense vector on the window of `ctx`.
pub fn dense_vector(ctx: &OperatorContext) -> ExtendedVector {
    let w = *ctx.window();
    ExtendedVector::from_coeffs(w, (0..w.dim()).map(|i| ((i as f64) * 0.7).sin()).collect()).expect("sized")
}

/// The undriven state |n0⟩ at its exact quasienergy, the tracer's usual seed.
pub fn undriven_seed(ctx: &OperatorContext) -> VariationalState {
    let n0 = ctx.window().n0();
    let v = ExtendedVector::unit(*ctx.window(), n0, 0).expect("inside window");
    VariationalState::new(ctx, v, ctx.params().level(n0)).expect("nonzero")
}
