//! Truncated extended-space basis {e^{imωt}|n⟩} and coefficient vectors on it.
//!
//! A window keeps oscillator states n ∈ [max(n0 − r, 0), n0 + r] and Fourier
//! indices m ∈ [−r, r]. The basis is orthonormal under the time-averaged
//! scalar product, so overlaps are plain dot products of the real
//! coefficients.
//!
//! Flat layout is m-major: all n of the lowest m come first, with n
//! contiguous, i.e. `index = (m + r) * n_count + (n − n_lo)`.

use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnsatzWindow {
    n0: usize,
    r: usize,
}

impl AnsatzWindow {
    pub fn new(n0: usize, r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidWindow(r));
        }
        Ok(Self { n0, r })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Lowest oscillator index, clamped at zero.
    pub fn n_lo(&self) -> usize {
        self.n0.saturating_sub(self.r)
    }

    pub fn n_hi(&self) -> usize {
        self.n0 + self.r
    }

    pub fn n_count(&self) -> usize {
        self.n_hi() - self.n_lo() + 1
    }

    pub fn m_count(&self) -> usize {
        2 * self.r + 1
    }

    pub fn n_range(&self) -> Range<usize> {
        self.n_lo()..self.n_hi() + 1
    }

    pub fn m_range(&self) -> Range<i64> {
        -(self.r as i64)..self.r as i64 + 1
    }

    pub fn dim(&self) -> usize {
        self.n_count() * self.m_count()
    }

    pub fn contains_index(&self, n: i64, m: i64) -> bool {
        n >= self.n_lo() as i64
            && n <= self.n_hi() as i64
            && m.unsigned_abs() as usize <= self.r
    }

    pub fn contains_window(&self, other: &AnsatzWindow) -> bool {
        self.n_lo() <= other.n_lo() && self.n_hi() >= other.n_hi() && self.r >= other.r
    }

    /// The window grown by one shell: one more n on each side (where n ≥ 0
    /// allows) and one more |m|.
    pub fn grown(&self) -> AnsatzWindow {
        AnsatzWindow {
            n0: self.n0,
            r: self.r + 1,
        }
    }

    /// Unchecked flat index; callers must have checked `contains_index`.
    #[inline]
    pub(crate) fn index_unchecked(&self, n: usize, m: i64) -> usize {
        (m + self.r as i64) as usize * self.n_count() + (n - self.n_lo())
    }

    pub fn flat_index(&self, n: i64, m: i64) -> Result<usize> {
        if !self.contains_index(n, m) {
            return Err(Error::OutOfWindow { n, m });
        }
        Ok(self.index_unchecked(n as usize, m))
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn pair_of(&self, index: usize) -> Result<(usize, i64)> {
        if index >= self.dim() {
            return Err(Error::OutOfWindow {
                n: -1,
                m: index as i64,
            });
        }
        let nc = self.n_count();
        let n = self.n_lo() + index % nc;
        let m = (index / nc) as i64 - self.r as i64;
        Ok((n, m))
    }

    /// Iterates `(flat index, n, m)` in layout order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let nc = self.n_count();
        let lo = self.n_lo();
        let r = self.r as i64;
        (0..self.dim()).map(move |i| (i, lo + i % nc, (i / nc) as i64 - r))
    }
}

/// Real coefficients c_{n,m} on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedVector {
    window: AnsatzWindow,
    coeffs: Vec<f64>,
}

impl ExtendedVector {
    pub fn zeros(window: AnsatzWindow) -> Self {
        Self {
            window,
            coeffs: vec![0.0; window.dim()],
        }
    }

    pub fn from_coeffs(window: AnsatzWindow, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != window.dim() {
            return Err(Error::LengthMismatch {
                expected: window.dim(),
                got: coeffs.len(),
            });
        }
        Ok(Self { window, coeffs })
    }

    /// Unit vector at (n, m).
    pub fn unit(window: AnsatzWindow, n: usize, m: i64) -> Result<Self> {
        let mut v = Self::zeros(window);
        let i = window.flat_index(n as i64, m)?;
        v.coeffs[i] = 1.0;
        Ok(v)
    }

    pub fn window(&self) -> &AnsatzWindow {
        &self.window
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient at (n, m), zero outside the window.
    pub fn get(&self, n: i64, m: i64) -> f64 {
        if self.window.contains_index(n, m) {
            self.coeffs[self.window.index_unchecked(n as usize, m)]
        } else {
            0.0
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scales to unit norm; fails on the zero vector.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / norm;
        self.coeffs.iter_mut().for_each(|c| *c *= inv);
        Ok(norm)
    }

    pub fn scale(&mut self, factor: f64) {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
    }

    /// self += a·other (same window).
    pub fn axpy(&mut self, a: f64, other: &ExtendedVector) -> Result<()> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
        Ok(())
    }

    /// Copies into a containing window, zero elsewhere.
    pub fn embed(&self, bigger: AnsatzWindow) -> Result<ExtendedVector> {
        if !bigger.contains_window(&self.window) {
            return Err(Error::NotContained);
        }
        if bigger == self.window {
            return Ok(self.clone());
        }
        let mut out = ExtendedVector::zeros(bigger);
        let nc = self.window.n_count();
        let lo = self.window.n_lo();
        for (m_idx, row) in self.coeffs.chunks_exact(nc).enumerate() {
            let m = m_idx as i64 - self.window.r as i64;
            let start = bigger.index_unchecked(lo, m);
            out.coeffs[start..start + nc].copy_from_slice(row);
        }
        Ok(out)
    }

    /// Drops everything outside a contained window.
    pub fn restrict(&self, smaller: AnsatzWindow) -> Result<ExtendedVector> {
        if !self.window.contains_window(&smaller) {
            return Err(Error::NotContained);
        }
        if smaller == self.window {
            return Ok(self.clone());
        }
        let mut out = ExtendedVector::zeros(smaller);
        let nc = smaller.n_count();
        let lo = smaller.n_lo();
        for (m_idx, row) in out.coeffs.chunks_exact_mut(nc).enumerate() {
            let m = m_idx as i64 - smaller.r as i64;
            let start = self.window.index_unchecked(lo, m);
            row.copy_from_slice(&self.coeffs[start..start + nc]);
        }
        Ok(out)
    }

    /// Calls `f(self_index, small_index)` for every entry of the contained
    /// window `small`, row by row.
    fn for_each_embedded(&self, small: &AnsatzWindow, mut f: impl FnMut(std::ops::Range<usize>, std::ops::Range<usize>)) {
        let nc = small.n_count();
        for m in small.m_range() {
            let big = self.window.index_unchecked(small.n_lo(), m);
            let sm = (m + small.r as i64) as usize * nc;
            f(big..big + nc, sm..sm + nc);
        }
    }

    /// self += a·embed(small) without materializing the embedding.
    pub(crate) fn add_embedded(&mut self, a: f64, small: &ExtendedVector) {
        debug_assert!(self.window.contains_window(&small.window));
        let mut rows = Vec::with_capacity(small.window.m_count());
        self.for_each_embedded(&small.window, |b, s| rows.push((b, s)));
        for (b, s) in rows {
            for (x, y) in self.coeffs[b].iter_mut().zip(&small.coeffs[s]) {
                *x += a * y;
            }
        }
    }

    /// ⟨embed(small), self⟩.
    pub(crate) fn dot_embedded(&self, small: &ExtendedVector) -> f64 {
        let mut acc = 0.0;
        self.for_each_embedded(&small.window, |b, s| {
            acc += self.coeffs[b].iter().zip(&small.coeffs[s]).map(|(x, y)| x * y).sum::<f64>();
        });
        acc
    }

    /// ‖self − a·embed(small)‖².
    pub(crate) fn dist_sqr_embedded(&self, a: f64, small: &ExtendedVector) -> f64 {
        debug_assert!(self.window.contains_window(&small.window));
        let nc = self.window.n_count();
        let inner_nc = small.window.n_count();
        let offset = small.window.n_lo() - self.window.n_lo();
        let mut acc = 0.0;
        for (m_idx, row) in self.coeffs.chunks_exact(nc).enumerate() {
            let m = m_idx as i64 - self.window.r as i64;
            if m.unsigned_abs() as usize > small.window.r {
                acc += row.iter().map(|x| x * x).sum::<f64>();
                continue;
            }
            let s0 = (m + small.window.r as i64) as usize * inner_nc;
            let inner = &small.coeffs[s0..s0 + inner_nc];
            acc += row[..offset].iter().map(|x| x * x).sum::<f64>();
            acc += row[offset..offset + inner_nc]
                .iter()
                .zip(inner)
                .map(|(x, y)| (x - a * y) * (x - a * y))
                .sum::<f64>();
            acc += row[offset + inner_nc..].iter().map(|x| x * x).sum::<f64>();
        }
        acc
    }

    /// Collapses the Fourier index at time t: Σ_m c_{n,m} e^{imt}, indexed by
    /// absolute oscillator number over 0..=n_hi.
    pub fn at_time(&self, t: f64) -> Vec<num_complex::Complex64> {
        let mut out = vec![num_complex::Complex64::new(0.0, 0.0); self.window.n_hi() + 1];
        for (i, n, m) in self.window.iter() {
            out[n] += num_complex::Complex64::from_polar(self.coeffs[i], m as f64 * t);
        }
        out
    }
}

/// Extended-space scalar product Σ u_{n,m} v_{n,m}.
pub fn overlap(u: &ExtendedVector, v: &ExtendedVector) -> Result<f64> {
    if u.window != v.window {
        return Err(Error::WindowMismatch);
    }
    Ok(u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| a * b).sum())
}
