#![allow(dead_code)]

use std::f64::consts::PI;

use floquet_core::oracle::{displacement_column, propagate_one_period, ClassicalTrajectory};
use floquet_core::{
    dtau_rule, imaginary_time_step, overlap, update_epsilon, AnsatzWindow, ExtendedVector, OperatorContext,
    SystemParams, VariationalState,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RATIO: f64 = 2.0 / 3.0;

pub fn params(lambda: f64) -> SystemParams {
    SystemParams::new(RATIO, lambda).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(w: AnsatzWindow, rng: &mut ChaCha8Rng) -> ExtendedVector {
    ExtendedVector::from_coeffs(w, (0..w.dim()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

/// K on `w` assembled entry by entry from
/// ⟨n',m'|K|n,m⟩ = δδ((n + ½)ω₀ + m) + (λ/2)⟨n'|x|n⟩(δ_{m',m+1} + δ_{m',m−1}).
pub fn dense_k(p: &SystemParams, w: &AnsatzWindow) -> DMatrix<f64> {
    let w0 = p.omega0();
    let lam = p.lambda_scaled();
    let x = |a: usize, b: usize| -> f64 {
        // ⟨a|x|b⟩ = √(1/2ω₀) (√b δ_{a,b−1} + √(b+1) δ_{a,b+1}), ħ = M = ω = 1
        let l = (0.5 / w0).sqrt();
        if a + 1 == b {
            l * (b as f64).sqrt()
        } else if a == b + 1 {
            l * (a as f64).sqrt()
        } else {
            0.0
        }
    };
    let d = w.dim();
    let mut k = DMatrix::zeros(d, d);
    for i in 0..d {
        let (np, mp) = w.pair_of(i).unwrap();
        for j in 0..d {
            let (n, m) = w.pair_of(j).unwrap();
            if i == j {
                k[(i, j)] += w0 * (n as f64 + 0.5) + m as f64;
            }
            if (mp - m).abs() == 1 {
                k[(i, j)] += 0.5 * lam * x(np, n);
            }
        }
    }
    k
}

pub fn to_dvec(v: &ExtendedVector) -> DVector<f64> {
    DVector::from_column_slice(v.coeffs())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Worst |apply_k(v) − K_dense v| / ‖K_dense‖_max over windows with dim ≤ 200,
/// for inputs on both the window and its extension.
pub fn dense_equivalence_defect() -> f64 {
    let mut rng = rng(11);
    let mut worst = 0.0f64;
    for (n0, r, lambda) in [(0, 1, 0.7), (0, 3, 2.5), (4, 2, 1.3), (10, 4, 5.0), (2, 5, 0.0), (7, 4, 3.3)] {
        let w = AnsatzWindow::new(n0, r).unwrap();
        let e = w.grown();
        assert!(e.dim() <= 200);
        let p = params(lambda);
        let ctx = OperatorContext::new(p, w);
        let k = dense_k(&p, &e);
        let scale = k.amax();
        for _ in 0..5 {
            let v = random_vec(w, &mut rng);
            let got = ctx.apply_k(&v).unwrap();
            let want = &k * to_dvec(&v.embed(e).unwrap());
            worst = worst.max(max_abs_diff(got.coeffs(), want.as_slice()) / scale);

            let u = random_vec(e, &mut rng);
            let got = ctx.apply_k(&u).unwrap();
            let want = &k * to_dvec(&u);
            worst = worst.max(max_abs_diff(got.coeffs(), want.as_slice()) / scale);
        }
    }
    worst
}

/// Worst |⟨u|Kv⟩ − ⟨Ku|v⟩| relative to ‖u‖‖Kv‖.
pub fn hermiticity_defect(trials: usize) -> f64 {
    let mut rng = rng(12);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let n0 = rng.random_range(0..40);
        let r = rng.random_range(1..12);
        let lambda = rng.random_range(0.0..8.0);
        let w = AnsatzWindow::new(n0, r).unwrap();
        let e = w.grown();
        let ctx = OperatorContext::new(params(lambda), w);
        let u = random_vec(w, &mut rng);
        let v = random_vec(w, &mut rng);
        let (ku, kv) = (ctx.apply_k(&u).unwrap(), ctx.apply_k(&v).unwrap());
        let a = overlap(&u.embed(e).unwrap(), &kv).unwrap();
        let b = overlap(&ku, &v.embed(e).unwrap()).unwrap();
        worst = worst.max((a - b).abs() / (u.norm() * kv.norm()));
        if t % 2 == 0 {
            // both arguments on the extended window
            let (u, v) = (random_vec(e, &mut rng), random_vec(e, &mut rng));
            let a = overlap(&u, &ctx.apply_k(&v).unwrap()).unwrap();
            let b = overlap(&ctx.apply_k(&u).unwrap(), &v).unwrap();
            worst = worst.max((a - b).abs() / (u.norm() * v.norm() * ctx.gershgorin_bound(0.0)));
        }
    }
    worst
}

/// Moves every coefficient from m to m + 1. Drops the top Fourier row.
pub fn shift_m(v: &ExtendedVector) -> ExtendedVector {
    let w = *v.window();
    let mut out = ExtendedVector::zeros(w);
    for (i, n, m) in w.iter() {
        if w.contains_index(n as i64, m + 1) {
            out.coeffs_mut()[w.flat_index(n as i64, m + 1).unwrap()] = v.coeffs()[i];
        }
    }
    out
}

/// Worst violation of K S = S (K + 1) for the Fourier shift S, together
/// with the worst error of ⟨⟨K⟩⟩_{Sv} − ⟨⟨K⟩⟩_v − 1.
pub fn ladder_shift_defect() -> (f64, f64) {
    let mut rng = rng(13);
    let mut op = 0.0f64;
    let mut expect = 0.0f64;
    for _ in 0..50 {
        let n0 = rng.random_range(0..30);
        let r = rng.random_range(1..10);
        let lambda = rng.random_range(0.0..6.0);
        let w = AnsatzWindow::new(n0, r).unwrap();
        let ctx = OperatorContext::new(params(lambda), w);
        let mut v = random_vec(w, &mut rng);
        // clear m = r so the shift stays inside the window
        for n in w.n_range() {
            v.coeffs_mut()[w.flat_index(n as i64, r as i64).unwrap()] = 0.0;
        }
        let sv = shift_m(&v);
        let lhs = ctx.apply_k(&sv).unwrap();
        let mut rhs = shift_m(&ctx.apply_k(&v).unwrap());
        rhs.axpy(1.0, &sv.embed(*ctx.extended_window()).unwrap()).unwrap();
        op = op.max(max_abs_diff(lhs.coeffs(), rhs.coeffs()) / ctx.gershgorin_bound(0.0));
        let d = ctx.expectation_k(&sv).unwrap() - ctx.expectation_k(&v).unwrap();
        expect = expect.max((d - 1.0).abs());
    }
    (op, expect)
}

/// Largest relative F increase over `seeds` random starts, each run through
/// a few full cycles with the step rule.
pub fn worst_descent(seeds: u64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..seeds {
        let mut rng = rng(1000 + seed);
        let n0 = rng.random_range(0..60);
        let r = rng.random_range(1..8);
        let lambda = rng.random_range(0.0..8.0);
        let w = AnsatzWindow::new(n0, r).unwrap();
        let ctx = OperatorContext::new(params(lambda), w);
        let eps = rng.random_range(-5.0..50.0);
        let mut s = VariationalState::new(&ctx, random_vec(w, &mut rng), eps).unwrap();
        for _ in 0..4 {
            let dtau = dtau_rule(&ctx, s.epsilon, 0.9);
            let stepped = imaginary_time_step(&ctx, &s, dtau).unwrap();
            worst = worst.max((stepped.f - s.f) / s.f);
            let updated = update_epsilon(&ctx, &stepped).unwrap();
            worst = worst.max((updated.f - stepped.f) / stepped.f);
            s = updated;
        }
    }
    worst
}

fn f_at(ctx: &OperatorContext, c: &ExtendedVector, eps: f64) -> f64 {
    ctx.functional_f(c, eps).unwrap()
}

/// The analytic gradient 2(P_W (K − ε)² c − F c) at unit-norm c, compared
/// with central differences along random directions.
pub fn gradient_rel_error() -> f64 {
    let mut rng = rng(14);
    let mut worst = 0.0f64;
    for (n0, r, lambda) in [(0, 2, 1.0), (5, 3, 3.0), (20, 4, 0.4), (1, 6, 6.0)] {
        let w = AnsatzWindow::new(n0, r).unwrap();
        let ctx = OperatorContext::new(params(lambda), w);
        let mut c = random_vec(w, &mut rng);
        c.normalize().unwrap();
        let eps = ctx.expectation_k(&c).unwrap() + rng.random_range(-0.5..0.5);
        let f = f_at(&ctx, &c, eps);

        let res = ctx.residual(&c, eps).unwrap();
        let mut a2 = ctx.apply_k(&res).unwrap();
        a2.axpy(-eps, &res).unwrap();
        let mut grad = a2.restrict(w).unwrap();
        grad.axpy(-f, &c).unwrap();
        grad.scale(2.0);

        for _ in 0..5 {
            let d = random_vec(w, &mut rng);
            let h = 1e-5;
            let mut plus = c.clone();
            plus.axpy(h, &d).unwrap();
            let mut minus = c.clone();
            minus.axpy(-h, &d).unwrap();
            let fd = (f_at(&ctx, &plus, eps) - f_at(&ctx, &minus, eps)) / (2.0 * h);
            let an = overlap(&grad, &d).unwrap();
            worst = worst.max((fd - an).abs() / an.abs().max(1e-3 * grad.norm() * d.norm()));
        }
    }
    worst
}

fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Observed convergence order of the one-period integrator from step
/// doubling: log₂(‖ψ_N − ψ_2N‖ / ‖ψ_2N − ψ_4N‖).
pub fn integrator_order() -> f64 {
    let p = params(1.0);
    let size = 24;
    let mut psi0 = vec![Complex64::new(0.0, 0.0); size];
    psi0[1] = Complex64::new(1.0, 0.0);
    let run = |steps| propagate_one_period(&p, &psi0, steps).unwrap();
    let (a, b, c) = (run(200), run(400), run(800));
    (diff_norm(&a, &b) / diff_norm(&b, &c)).log2()
}

/// Normalized Hermite functions of the ω₀ oscillator at x, orders 0..count.
pub fn hermite_functions(x: f64, omega0: f64, count: usize) -> Vec<f64> {
    let y = omega0.sqrt() * x;
    let mut out = Vec::with_capacity(count);
    let pre = omega0.powf(0.25);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * y * y).exp();
    for n in 0..count {
        out.push(pre * cur);
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * y * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// ⟨k|D|n⟩ for the shift by (ξ, ξ') by trapezoidal quadrature of
/// e^{−iξξ'/2} ∫ χ_k(x) e^{iξ'x} χ_n(x − ξ) dx.
pub fn quadrature_displacement(xi: f64, xi_dot: f64, omega0: f64, n: usize, size: usize) -> Vec<Complex64> {
    let (lo, hi, points) = (-14.0, 14.0, 8001);
    let h = (hi - lo) / (points - 1) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); size];
    for j in 0..points {
        let x = lo + j as f64 * h;
        let wgt = if j == 0 || j == points - 1 { 0.5 * h } else { h };
        let left = hermite_functions(x, omega0, size);
        let right = hermite_functions(x - xi, omega0, n + 1)[n];
        let phase = Complex64::from_polar(1.0, xi_dot * x);
        for (k, o) in out.iter_mut().enumerate() {
            *o += phase * (wgt * left[k] * right);
        }
    }
    let global = Complex64::from_polar(1.0, -0.5 * xi * xi_dot);
    out.iter().map(|c| c * global).collect()
}

/// Worst |⟨k|D(α)|n⟩ − quadrature| over several orbit points and columns.
pub fn displacement_quadrature_error() -> f64 {
    let mut worst = 0.0f64;
    for (lambda, t) in [(0.8, 0.0), (1.5, 0.7), (2.0, 2.1), (1.0, 4.0)] {
        let p = params(lambda);
        let orbit = ClassicalTrajectory::new(&p);
        let alpha = orbit.alpha(t);
        for n in [0usize, 1, 4, 9] {
            let size = 24;
            let exact = displacement_column(alpha, n, size);
            let quad = quadrature_displacement(orbit.position(t), orbit.velocity(t), p.omega0(), n, size);
            worst = worst.max(exact.iter().zip(&quad).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
    }
    worst
}
