//! Closed-form Floquet solution of the non-resonantly driven oscillator.
//!
//! The Floquet state developing from |n⟩ is the number state |n⟩ carried
//! along the T-periodic classical orbit ξ(t) = ξ₀ cos t, i.e. D(α(t))|n⟩ up to
//! a phase, with
//!
//! ```text
//! ξ₀   = λ / (1 − ω₀²)
//! α(t) = √(ω₀/2) ξ(t) + i ξ'(t) / √(2ω₀)
//! ε_n  = ω₀(n + 1/2) + λ² / (4(1 − ω₀²))   (mod 1)
//! ```
//!
//! (all in units ħ = M = ω = 1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::SystemParams;

/// Maps a quasienergy representative into [0, 1).
pub fn fold(epsilon: f64) -> f64 {
    let f = epsilon - epsilon.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance between two quasienergy classes on the unit circle, in [0, 1/2].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (fold(a) - fold(b)).abs();
    d.min(1.0 - d)
}

/// The common ac Stark shift λ²/(4(1 − ω₀²)) in units of ħω.
pub fn stark_shift(params: &SystemParams) -> f64 {
    let lam = params.lambda_scaled();
    let w0 = params.omega0();
    lam * lam / (4.0 * (1.0 - w0 * w0))
}

/// Unfolded quasienergy representative ω₀(n + 1/2) + shift.
pub fn exact_quasienergy_unfolded(params: &SystemParams, n: usize) -> f64 {
    params.level(n) + stark_shift(params)
}

/// Folded quasienergy of the state connected to |n⟩, in [0, 1).
pub fn exact_quasienergy(params: &SystemParams, n: usize) -> f64 {
    fold(exact_quasienergy_unfolded(params, n))
}

/// The T-periodic classical orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalTrajectory {
    /// ξ₀, so that ξ(t) = ξ₀ cos t.
    pub amplitude: f64,
    omega0: f64,
    lambda: f64,
}

impl ClassicalTrajectory {
    pub fn new(params: &SystemParams) -> Self {
        let w0 = params.omega0();
        Self {
            amplitude: params.lambda_scaled() / (1.0 - w0 * w0),
            omega0: w0,
            lambda: params.lambda_scaled(),
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        self.amplitude * t.cos()
    }

    pub fn velocity(&self, t: f64) -> f64 {
        -self.amplitude * t.sin()
    }

    /// ξ'' + ω₀²ξ + λ cos t, which vanishes along the orbit.
    pub fn equation_of_motion_defect(&self, t: f64) -> f64 {
        let accel = -self.amplitude * t.cos();
        accel + self.omega0 * self.omega0 * self.position(t) + self.lambda * t.cos()
    }

    /// Coherent-state label of the phase-space point (ξ(t), ξ'(t)).
    pub fn alpha(&self, t: f64) -> Complex64 {
        Complex64::new(
            (self.omega0 / 2.0).sqrt() * self.position(t),
            self.velocity(t) / (2.0 * self.omega0).sqrt(),
        )
    }
}

/// ln k! for k = 0..len.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..len {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Generalized Laguerre polynomial L_p^{(a)}(x) by upward recurrence.
fn laguerre(p: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..p {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// ⟨k|D(α)|n⟩ for k = 0..size.
pub fn displacement_column(alpha: Complex64, n: usize, size: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    let x = alpha.norm_sqr();
    if x == 0.0 {
        if n < size {
            out[n] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let lnf = ln_factorials(size.max(n + 1));
    let ln_abs = alpha.norm().ln();
    let phase = alpha.arg();
    for (k, slot) in out.iter_mut().enumerate() {
        let (lo, hi) = if k >= n { (n, k) } else { (k, n) };
        let d = hi - lo;
        let magnitude =
            (0.5 * (lnf[lo] - lnf[hi]) + d as f64 * ln_abs - 0.5 * x).exp() * laguerre(lo, d as f64, x);
        // k ≥ n: α^{k−n};  k < n: (−ᾱ)^{n−k}
        let angle = if k >= n {
            d as f64 * phase
        } else {
            d as f64 * (std::f64::consts::PI - phase)
        };
        *slot = Complex64::from_polar(magnitude, angle);
    }
    out
}

/// Tail weight above which a truncated coefficient array is rejected.
pub const MAX_TAIL_WEIGHT: f64 = 1e-6;

/// Oscillator-basis coefficients of the exact Floquet function from |n⟩ at
/// time t, over |0⟩..|size−1⟩. Fixed up to a global phase.
pub fn exact_floquet_coefficients(
    params: &SystemParams,
    n: usize,
    t: f64,
    size: usize,
) -> Result<Vec<Complex64>> {
    if n >= size {
        return Err(Error::TruncationTooSmall { size, tail: 1.0 });
    }
    let alpha = ClassicalTrajectory::new(params).alpha(t);
    let coeffs = displacement_column(alpha, n, size);
    let weight: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let tail = (1.0 - weight).abs();
    if tail > MAX_TAIL_WEIGHT {
        return Err(Error::TruncationTooSmall { size, tail });
    }
    Ok(coeffs)
}
