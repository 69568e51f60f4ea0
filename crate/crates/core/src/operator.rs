//! Matrix-free action of the quasienergy operator K = H(t) − i d/dt for the
//! linearly driven oscillator H(t) = p²/2 + ω₀²x²/2 + λ x cos t.
//!
//! In the basis e^{imt}|n⟩ the operator is real symmetric with
//!
//! ```text
//! ⟨n',m'|K|n,m⟩ = δ_{n'n} δ_{m'm} (E_n + m)
//!               + (λ/2) X_{n'n} (δ_{m',m+1} + δ_{m',m−1})
//! X_{n+1,n} = X_{n,n+1} = √(ω/2ω₀) √(n+1)
//! ```
//!
//! so K couples (n, m) only to (n ± 1, m ± 1). Applying K to a vector on a
//! window therefore lands exactly inside the window grown by one shell, and
//! the residual (K − ε)Ψ evaluated there carries no truncation error.

use crate::basis::{overlap, AnsatzWindow, ExtendedVector};
use crate::error::{Error, Result};
use crate::units::SystemParams;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorContext {
    params: SystemParams,
    window: AnsatzWindow,
    extended: AnsatzWindow,
    coupling: f64,
    /// √n for n = 0..=n_hi(extended) + 1.
    sqrt_n: Vec<f64>,
    /// Gershgorin bound of (K − ε) is max(upper − ε, lower + ε).
    gershgorin_upper: f64,
    gershgorin_lower: f64,
}

impl OperatorContext {
    pub fn new(params: SystemParams, window: AnsatzWindow) -> Self {
        let extended = window.grown();
        let coupling = 0.5 * params.lambda_scaled() * params.x_scale();
        let sqrt_n = (0..=extended.n_hi() + 1).map(|n| (n as f64).sqrt()).collect();
        let mut ctx = Self {
            params,
            window,
            extended,
            coupling,
            sqrt_n,
            gershgorin_upper: f64::NEG_INFINITY,
            gershgorin_lower: f64::NEG_INFINITY,
        };
        // |d − ε| + o = max(d + o − ε, o − d + ε), row by row.
        let w = extended;
        let r = w.r() as i64;
        let omega0 = params.omega0();
        for m in w.m_range() {
            let fourier = ((m > -r) as u32 + (m < r) as u32) as f64;
            for n in w.n_range() {
                let diag = omega0 * (n as f64 + 0.5) + m as f64;
                let mut off = 0.0;
                if n > w.n_lo() {
                    off += ctx.sqrt_n[n];
                }
                if n < w.n_hi() {
                    off += ctx.sqrt_n[n + 1];
                }
                let off = coupling.abs() * fourier * off;
                ctx.gershgorin_upper = ctx.gershgorin_upper.max(diag + off);
                ctx.gershgorin_lower = ctx.gershgorin_lower.max(off - diag);
            }
        }
        ctx
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn window(&self) -> &AnsatzWindow {
        &self.window
    }

    pub fn extended_window(&self) -> &AnsatzWindow {
        &self.extended
    }

    /// P_target (K − shift) v, exact for every row of `target`.
    fn apply_shifted(&self, v: &ExtendedVector, shift: f64, target: AnsatzWindow) -> ExtendedVector {
        let src = *v.window();
        let src_nc = src.n_count();
        let src_lo = src.n_lo();
        let src_r = src.r() as i64;
        let data = v.coeffs();
        let row = |m: i64| -> Option<&[f64]> {
            (m.abs() <= src_r).then(|| {
                let start = (m + src_r) as usize * src_nc;
                &data[start..start + src_nc]
            })
        };

        let g = self.coupling;
        let omega0 = self.params.omega0();
        let nc = target.n_count();
        let lo = target.n_lo();
        // Padded scratch rows: slot k holds oscillator index lo − 1 + k.
        let mut same = vec![0.0; nc + 2];
        let mut pair = vec![0.0; nc + 2];
        // overlap of the source n-range with [lo − 1, lo + nc]
        let first = src_lo.max(lo.saturating_sub(1));
        let last = (src_lo + src_nc).min(lo + nc + 1);
        let levels: Vec<f64> = (lo..lo + nc).map(|n| omega0 * (n as f64 + 0.5) - shift).collect();
        let sq = &self.sqrt_n[lo..lo + nc + 1];

        let mut out = ExtendedVector::zeros(target);
        for (m_idx, out_row) in out.coeffs_mut().chunks_exact_mut(nc).enumerate() {
            let m = m_idx as i64 - target.r() as i64;
            same.iter_mut().for_each(|x| *x = 0.0);
            pair.iter_mut().for_each(|x| *x = 0.0);
            if first < last {
                let dst = first + 1 - lo;
                let s0 = first - src_lo;
                let len = last - first;
                if let Some(r) = row(m) {
                    same[dst..dst + len].copy_from_slice(&r[s0..s0 + len]);
                }
                if g != 0.0 {
                    for r in [row(m - 1), row(m + 1)].into_iter().flatten() {
                        for (p, x) in pair[dst..dst + len].iter_mut().zip(&r[s0..s0 + len]) {
                            *p += x;
                        }
                    }
                }
            }
            let mf = m as f64;
            let same = &same[1..nc + 1];
            if g != 0.0 {
                let (sq_lo, sq_hi) = (&sq[..nc], &sq[1..nc + 1]);
                let (p_lo, p_hi) = (&pair[..nc], &pair[2..nc + 2]);
                for k in 0..nc {
                    out_row[k] = (levels[k] + mf) * same[k] + g * (sq_lo[k] * p_lo[k] + sq_hi[k] * p_hi[k]);
                }
            } else {
                for (o, (l, x)) in out_row.iter_mut().zip(levels.iter().zip(same)) {
                    *o = (l + mf) * x;
                }
            }
        }
        out
    }

    fn check_source(&self, v: &ExtendedVector) -> Result<()> {
        if *v.window() != self.window && *v.window() != self.extended {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    /// K v on the extended window.
    ///
    /// Exact for v on the base window. For v already on the extended window the
    /// result is projected back onto it.
    pub fn apply_k(&self, v: &ExtendedVector) -> Result<ExtendedVector> {
        self.check_source(v)?;
        Ok(self.apply_shifted(v, 0.0, self.extended))
    }

    /// (K − ε)v on the extended window, for v on the base window.
    pub fn residual(&self, v: &ExtendedVector, epsilon: f64) -> Result<ExtendedVector> {
        if *v.window() != self.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self.apply_shifted(v, epsilon, self.extended))
    }

    /// P_W (K − ε) r for r on the extended window. Exact: every base-window row
    /// of K only reaches into the extended window.
    pub(crate) fn residual_back(&self, r: &ExtendedVector, epsilon: f64) -> Result<ExtendedVector> {
        if *r.window() != self.extended {
            return Err(Error::WindowMismatch);
        }
        Ok(self.apply_shifted(r, epsilon, self.window))
    }

    /// F_ε[v] = ‖(K − ε)v‖² / ‖v‖².
    pub fn functional_f(&self, v: &ExtendedVector, epsilon: f64) -> Result<f64> {
        let norm_sqr = v.norm_sqr();
        if !(norm_sqr > 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(self.residual(v, epsilon)?.norm_sqr() / norm_sqr)
    }

    /// ⟨⟨K⟩⟩ = ⟨v|K|v⟩ / ⟨v|v⟩.
    pub fn expectation_k(&self, v: &ExtendedVector) -> Result<f64> {
        if *v.window() != self.window {
            return Err(Error::WindowMismatch);
        }
        let norm_sqr = v.norm_sqr();
        if !(norm_sqr > 0.0) {
            return Err(Error::ZeroVector);
        }
        let kv = self.apply_shifted(v, 0.0, self.window);
        Ok(overlap(v, &kv)? / norm_sqr)
    }

    /// Gershgorin bound on the spectral radius of (K − ε) restricted to the
    /// extended window.
    pub fn gershgorin_bound(&self, epsilon: f64) -> f64 {
        (self.gershgorin_upper - epsilon).max(self.gershgorin_lower + epsilon)
    }
}
