//! Shared numerical kernels: Gauss-Legendre quadrature, adaptive Simpson
//! integration, central finite differences, and a fixed-order Runge-Kutta
//! integrator with pole-graded steps.
//!
//! Everything here is deterministic: no randomness, no hash-order effects,
//! so repeated runs produce bit-identical results.

use crate::error::{KelvinError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Nodes are computed by Newton iteration on the Legendre polynomial
/// three-term recurrence; accurate to machine precision for the orders
/// used here (<= a few hundred).
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Tricomi-style initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_deriv(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (_, d2) = legendre_with_deriv(n, x);
                    dp = d2;
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        // Ascending node order for reproducibility.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
        let nodes_sorted = idx.iter().map(|&i| nodes[i]).collect();
        let weights_sorted = idx.iter().map(|&i| weights[i]).collect();
        Self {
            nodes: nodes_sorted,
            weights: weights_sorted,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Integrate a vector-valued function over [a, b], accumulating into
    /// `dim` components.
    pub fn integrate_vec<F: FnMut(f64) -> Vec<f64>>(
        &self,
        a: f64,
        b: f64,
        dim: usize,
        mut f: F,
    ) -> Vec<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = vec![0.0; dim];
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            for (s, vi) in sum.iter_mut().zip(v) {
                *s += w * vi;
            }
        }
        for s in sum.iter_mut() {
            *s *= half;
        }
        sum
    }
}

/// Legendre polynomial P_n and its derivative at x, by recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive Simpson integration with absolute tolerance `tol`.
///
/// Fails with `QuadratureFailure` on non-finite integrand values. The
/// recursion depth is capped; at the cap the refined local estimate is
/// accepted, so sub-roundoff noise in the integrand (which no amount of
/// refinement can resolve) degrades accuracy gracefully instead of
/// aborting.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    context: &'static str,
) -> Result<f64> {
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    if !(fa.is_finite() && fm.is_finite() && fb.is_finite()) {
        return Err(KelvinError::QuadratureFailure { context });
    }
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 30, context)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    context: &'static str,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(KelvinError::QuadratureFailure { context });
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || depth == 0 {
        return Ok(left + right + delta / 15.0);
    }
    let l = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, context)?;
    let r = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, context)?;
    Ok(l + r)
}

// ---------------------------------------------------------------------------
// Central finite differences for meridian scalar fields f(z, r).
// ---------------------------------------------------------------------------

/// First derivative in z, central second order.
pub fn d_z<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    (f(z + h, r) - f(z - h, r)) / (2.0 * h)
}

/// First derivative in r, central second order.
pub fn d_r<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    (f(z, r + h) - f(z, r - h)) / (2.0 * h)
}

/// Second derivative in z.
pub fn d_zz<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    (f(z + h, r) - 2.0 * f(z, r) + f(z - h, r)) / (h * h)
}

/// Second derivative in r.
pub fn d_rr<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    (f(z, r + h) - 2.0 * f(z, r) + f(z, r - h)) / (h * h)
}

/// Mixed second derivative in z and r.
pub fn d_zr<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    (f(z + h, r + h) - f(z + h, r - h) - f(z - h, r + h) + f(z - h, r - h)) / (4.0 * h * h)
}

/// Axisymmetric Laplacian f,zz + f,rr + f,r / r of a meridian scalar.
pub fn laplacian_meridian<F: Fn(f64, f64) -> f64>(f: &F, z: f64, r: f64, h: f64) -> f64 {
    d_zz(f, z, r, h) + d_rr(f, z, r, h) + d_r(f, z, r, h) / r
}

// ---------------------------------------------------------------------------
// Runge-Kutta 4 with pole-graded steps for angular ODEs on (0, pi).
// ---------------------------------------------------------------------------

/// Step-size policy for integration over an interval with singular
/// endpoints at theta = 0 and theta = pi: the step shrinks proportionally
/// to the distance from the nearest pole.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Interior step ceiling.
    pub max_step: f64,
    /// Step as a fraction of the distance to the nearest pole.
    pub pole_fraction: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            max_step: 5e-4,
            pole_fraction: 5e-3,
        }
    }
}

impl StepControl {
    fn step_at(&self, theta: f64) -> f64 {
        let d = theta.min(std::f64::consts::PI - theta).abs().max(1e-12);
        self.max_step.min(self.pole_fraction * d)
    }
}

/// Integrate y' = f(theta, y) for a 2-component state from `t0` to `t1`
/// (either direction) with classic RK4 and graded steps, recording every
/// accepted step.
pub fn integrate_rk4<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    f: &F,
    t0: f64,
    t1: f64,
    y0: [f64; 2],
    ctrl: &StepControl,
) -> Vec<(f64, [f64; 2])> {
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut out = Vec::with_capacity(4096);
    out.push((t, y));
    while (t1 - t) * dir > 1e-15 {
        let h_mag = ctrl.step_at(t).min((t1 - t).abs());
        let h = dir * h_mag;
        let k1 = f(t, y);
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
        let k2 = f(t + 0.5 * h, y2);
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
        let k3 = f(t + 0.5 * h, y3);
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
        let k4 = f(t + h, y4);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        t += h;
        out.push((t, y));
    }
    out
}
