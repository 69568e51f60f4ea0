//! Brute-force one-period propagation in a truncated oscillator basis.
//!
//! The Schrödinger equation is integrated in the interaction picture of the
//! undriven oscillator, where the only remaining term is the drive
//!
//! ```text
//! (V_I(t)ψ)_j = λ cos t · s · (√j e^{iω₀t} ψ_{j−1} + √(j+1) e^{−iω₀t} ψ_{j+1}),
//! ```
//!
//! with s = √(ω/2ω₀). Removing the diagonal E_j makes the problem non-stiff, so
//! fixed-step classical RK4 has a global error of O(steps⁻⁴) governed by the
//! drive alone and free evolution is exact. The Schrödinger-picture state is
//! recovered at t = T by the phases e^{−iE_jT}.
//!
//! Nothing here touches the extended-space machinery.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::analytic::{circular_distance, fold};
use crate::error::{Error, Result};
use crate::units::SystemParams;

/// A propagated state is rejected when more than this much weight ends up in
/// the top two basis states, or the norm drifts by more than this.
pub const MAX_LEAKAGE: f64 = 1e-6;

/// Eigenvalues further than this from the unit circle are untrusted.
pub const UNITARITY_TOL: f64 = 1e-6;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn drive(params: &SystemParams, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
    let g = params.lambda_scaled() * params.x_scale() * t.cos();
    let up = Complex64::from_polar(1.0, params.omega0() * t);
    let down = up.conj();
    let n = psi.len();
    for j in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        if j > 0 {
            acc += up * psi[j - 1] * (j as f64).sqrt();
        }
        if j + 1 < n {
            acc += down * psi[j + 1] * ((j + 1) as f64).sqrt();
        }
        // dψ/dt = −i V ψ
        out[j] = -I * g * acc;
    }
}

/// Evolves `psi` from 0 to T without any acceptance checks.
pub(crate) fn evolve_period(params: &SystemParams, psi0: &[Complex64], steps: usize) -> Vec<Complex64> {
    let n = psi0.len();
    let mut psi = psi0.to_vec();
    if params.lambda_scaled() != 0.0 {
        let dt = 2.0 * PI / steps as f64;
        let mut k1 = vec![Complex64::new(0.0, 0.0); n];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut tmp = k1.clone();
        for s in 0..steps {
            let t = s as f64 * dt;
            drive(params, t, &psi, &mut k1);
            for j in 0..n {
                tmp[j] = psi[j] + 0.5 * dt * k1[j];
            }
            drive(params, t + 0.5 * dt, &tmp, &mut k2);
            for j in 0..n {
                tmp[j] = psi[j] + 0.5 * dt * k2[j];
            }
            drive(params, t + 0.5 * dt, &tmp, &mut k3);
            for j in 0..n {
                tmp[j] = psi[j] + dt * k3[j];
            }
            drive(params, t + dt, &tmp, &mut k4);
            for j in 0..n {
                psi[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
    }
    let period = 2.0 * PI;
    for (j, c) in psi.iter_mut().enumerate() {
        *c *= Complex64::from_polar(1.0, -params.level(j) * period);
    }
    psi
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// ψ(T) from ψ(0) in the oscillator basis |0⟩..|len−1⟩.
///
/// Fails when the norm drifts or weight piles up at the truncation edge by
/// more than [`MAX_LEAKAGE`].
pub fn propagate_one_period(params: &SystemParams, psi0: &[Complex64], steps: usize) -> Result<Vec<Complex64>> {
    if steps < 100 {
        return Err(Error::TooFewSteps(steps));
    }
    let before = norm_sqr(psi0);
    if !(before > 0.0) {
        return Err(Error::ZeroVector);
    }
    let psi = evolve_period(params, psi0, steps);
    let after = norm_sqr(&psi);
    let edge: f64 = psi.iter().rev().take(2).map(|c| c.norm_sqr()).sum::<f64>() / after;
    let loss = ((after - before) / before).abs().max(edge);
    if loss > MAX_LEAKAGE {
        return Err(Error::Leakage { loss });
    }
    Ok(psi)
}

/// |e^{−iεT}⟨ψ(T)|ψ(0)⟩| for normalized ψ(0). The ε phase drops out of the
/// modulus and is kept only for the signature.
#[allow(non_snake_case)]
pub fn raT_metric(params: &SystemParams, psi0: &[Complex64], epsilon: f64, steps: usize) -> Result<f64> {
    let psi_t = propagate_one_period(params, psi0, steps)?;
    let amp: Complex64 = psi_t.iter().zip(psi0).map(|(a, b)| a.conj() * b).sum();
    let phase = Complex64::from_polar(1.0, -epsilon * 2.0 * PI);
    Ok((phase * amp).norm() / norm_sqr(psi0))
}

/// Dense U(T, 0) over |0⟩..|size−1⟩, one propagated basis vector per column.
pub fn one_period_matrix(params: &SystemParams, size: usize, steps: usize) -> Result<DMatrix<Complex64>> {
    if steps < 100 {
        return Err(Error::TooFewSteps(steps));
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(size.max(1));
    let chunk = size.div_ceil(workers).max(1);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(size);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..size)
            .step_by(chunk)
            .map(|start| {
                scope.spawn(move || {
                    (start..(start + chunk).min(size))
                        .map(|k| {
                            let mut e = vec![Complex64::new(0.0, 0.0); size];
                            e[k] = Complex64::new(1.0, 0.0);
                            evolve_period(params, &e, steps)
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            columns.extend(h.join().expect("propagation thread panicked"));
        }
    });
    Ok(DMatrix::from_fn(size, size, |i, j| columns[j][i]))
}

/// Largest entry of U†U − 1 in absolute value, a cheap operator-norm proxy.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct StrobePair {
    pub quasienergy: f64,
    pub eigenvalue: Complex64,
    pub eigenvector: Vec<Complex64>,
    /// Modulus within [`UNITARITY_TOL`] of one and negligible weight at the
    /// truncation edge.
    pub trusted: bool,
}

#[derive(Debug, Clone)]
pub struct StrobeSpectrum {
    pub pairs: Vec<StrobePair>,
    pub unitarity_defect: f64,
}

/// Result of locating a state among the stroboscopic eigenspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct StrobeMatch {
    /// Folded quasienergy of the matched eigenspace.
    pub quasienergy: f64,
    /// Norm of the projection of the normalized state onto that eigenspace.
    pub overlap: f64,
    /// Indices into `pairs` spanning the eigenspace.
    pub members: Vec<usize>,
}

/// Quasienergies and eigenvectors of U(T, 0) over |0⟩..|size−1⟩.
///
/// U is normal, so its complex Schur form is diagonal up to integration error
/// and the Schur vectors are orthonormal eigenvectors, also inside
/// degenerate eigenspaces.
pub fn strobe_eigenpairs(params: &SystemParams, size: usize, steps: usize) -> Result<StrobeSpectrum> {
    let u = one_period_matrix(params, size, steps)?;
    let unitarity_defect = unitarity_defect(&u);
    let (q, t) = u.schur().unpack();
    let edge_rows = (size / 10).max(2);
    let pairs = (0..size)
        .map(|k| {
            let eigenvalue = t[(k, k)];
            let eigenvector: Vec<Complex64> = q.column(k).iter().copied().collect();
            let edge: f64 = eigenvector[size - edge_rows..].iter().map(|c| c.norm_sqr()).sum();
            let trusted = (eigenvalue.norm() - 1.0).abs() < UNITARITY_TOL && edge < MAX_LEAKAGE;
            // e^{−iε·2π} = eigenvalue
            let quasienergy = fold(-eigenvalue.arg() / (2.0 * PI));
            StrobePair {
                quasienergy,
                eigenvalue,
                eigenvector,
                trusted,
            }
        })
        .collect();
    Ok(StrobeSpectrum {
        pairs,
        unitarity_defect,
    })
}

impl StrobeSpectrum {
    /// Groups trusted pairs whose quasienergies lie within `cluster_tol` of
    /// each other (on the circle) and returns the group carrying the most
    /// weight of `psi`.
    pub fn match_state(&self, psi: &[Complex64], cluster_tol: f64) -> Option<StrobeMatch> {
        let norm = norm_sqr(psi).sqrt();
        if !(norm > 0.0) {
            return None;
        }
        let mut order: Vec<usize> = (0..self.pairs.len()).filter(|&i| self.pairs[i].trusted).collect();
        if order.is_empty() {
            return None;
        }
        order.sort_by(|&a, &b| self.pairs[a].quasienergy.total_cmp(&self.pairs[b].quasienergy));

        // single-linkage on the circle
        let mut clusters: Vec<Vec<usize>> = vec![vec![order[0]]];
        for w in order.windows(2) {
            if self.pairs[w[1]].quasienergy - self.pairs[w[0]].quasienergy <= cluster_tol {
                clusters.last_mut().unwrap().push(w[1]);
            } else {
                clusters.push(vec![w[1]]);
            }
        }
        if clusters.len() > 1 {
            let first = self.pairs[clusters[0][0]].quasienergy;
            let last = self.pairs[*clusters.last().unwrap().last().unwrap()].quasienergy;
            if circular_distance(first, last) <= cluster_tol {
                let tail = clusters.pop().unwrap();
                clusters[0].extend(tail);
            }
        }

        let weight = |i: usize| -> f64 {
            let v = &self.pairs[i].eigenvector;
            let amp: Complex64 = v.iter().zip(psi).map(|(a, b)| a.conj() * b).sum();
            amp.norm_sqr() / (norm * norm)
        };
        clusters
            .into_iter()
            .map(|members| {
                let weights: Vec<f64> = members.iter().map(|&i| weight(i)).collect();
                let total: f64 = weights.iter().sum();
                let mean: Complex64 = members
                    .iter()
                    .zip(&weights)
                    .map(|(&i, w)| {
                        let z = self.pairs[i].eigenvalue;
                        z / z.norm() * *w
                    })
                    .sum();
                StrobeMatch {
                    quasienergy: fold(-mean.arg() / (2.0 * PI)),
                    overlap: total.sqrt(),
                    members,
                }
            })
            .max_by(|a, b| a.overlap.total_cmp(&b.overlap))
    }
}
