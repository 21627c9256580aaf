//! Trapezoid rules (periodic and real line) and Gauss-Hermite nodes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Trapezoid rule on `[0, 2 pi)` with node doubling.
///
/// Convergence is declared when two successive estimates differ by at most
/// `tol` times the mean modulus of the integrand on the finer grid, so the
/// tolerance is relative to the size of the integrand rather than of the
/// (possibly cancelling) result.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicTrapezoid {
    pub tol: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
}

impl Default for PeriodicTrapezoid {
    fn default() -> Self {
        Self { tol: 1e-14, min_nodes: 8, max_nodes: 1 << 20 }
    }
}

impl PeriodicTrapezoid {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    /// `(1 / 2 pi) int_0^{2 pi} f(t) dt`.
    pub fn mean<F: Fn(f64) -> Complex64>(&self, f: F) -> Result<Complex64> {
        let mut n = self.min_nodes.max(1).next_power_of_two();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for j in 0..n {
            let v = f(2.0 * PI * j as f64 / n as f64);
            sum += v;
            abs_sum += v.norm();
        }
        let mut estimate = sum / n as f64;
        loop {
            if 2 * n > self.max_nodes {
                return Err(Error::ConvergenceFailure { nodes: n, estimate });
            }
            for j in 0..n {
                let v = f(2.0 * PI * (2 * j + 1) as f64 / (2 * n) as f64);
                sum += v;
                abs_sum += v.norm();
            }
            n *= 2;
            let refined = sum / n as f64;
            let scale = abs_sum / n as f64;
            if !(refined.re.is_finite() && refined.im.is_finite()) {
                return Err(Error::ConvergenceFailure { nodes: n, estimate: refined });
            }
            if (refined - estimate).norm() <= self.tol * scale.max(f64::MIN_POSITIVE) {
                return Ok(refined);
            }
            estimate = refined;
        }
    }
}

/// `(1 / 2 pi) int_0^{2 pi} f(t) dt` for smooth `2 pi`-periodic `f`.
pub fn periodic_quadrature<F: Fn(f64) -> Complex64>(f: F, tol: f64) -> Result<Complex64> {
    PeriodicTrapezoid::with_tol(tol).mean(f)
}

/// `(1 / 2 pi) int_0^{2 pi} f(t) dt` with exactly `nodes` equispaced nodes.
pub fn periodic_trapezoid_fixed<F: Fn(f64) -> Complex64>(f: F, nodes: usize) -> Complex64 {
    let n = nodes.max(1);
    (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).sum::<Complex64>() / n as f64
}

/// `int_{-half_width}^{half_width} f(s) ds` by trapezoid with step halving.
///
/// Intended for integrands that have decayed to negligible size at the ends,
/// where the trapezoid rule converges geometrically in the step.
pub fn line_trapezoid<F: Fn(f64) -> Complex64>(f: F, half_width: f64, tol: f64) -> Result<Complex64> {
    let mut cells: usize = 16;
    let mut h = 2.0 * half_width / cells as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for j in 0..=cells {
        let w = if j == 0 || j == cells { 0.5 } else { 1.0 };
        let v = f(-half_width + j as f64 * h);
        sum += v * w;
        abs_sum += v.norm() * w;
    }
    let mut estimate = sum * h;
    while cells < (1 << 22) {
        for j in 0..cells {
            let v = f(-half_width + (j as f64 + 0.5) * h);
            sum += v;
            abs_sum += v.norm();
        }
        cells *= 2;
        h *= 0.5;
        let refined = sum * h;
        if (refined - estimate).norm() <= tol * (abs_sum * h).max(f64::MIN_POSITIVE) {
            return Ok(refined);
        }
        estimate = refined;
    }
    Err(Error::ConvergenceFailure { nodes: cells + 1, estimate })
}

/// Gauss-Hermite nodes and weights for the weight `e^{-x^2}`, nodes ascending.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // Orthonormal Hermite recurrence.
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        weights[i] = 2.0 / (pp * pp);
    }
    // nodes[0..m] hold the positive roots, largest first.
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..m {
        xs.push(-nodes[i]);
        ws.push(weights[i]);
    }
    for i in (0..n - m).rev() {
        xs.push(nodes[i]);
        ws.push(weights[i]);
    }
    (xs, ws)
}

/// Gauss-Legendre nodes (ascending, in `[-1, 1]`) and weights.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let prev = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        ws[i] = w;
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// `int_{R^dims} exp(E(y)) dy` for a complex exponent `E` that is a quadratic
/// polynomial in `y`, by tensor Gauss-Hermite quadrature in `x = y / scale`.
///
/// `decay` must bound the real part from above as
/// `Re E(scale x) <= Re E(0)-ish - decay |x|^2`; it is only used to skip nodes
/// whose contribution is below `e^{-60}` of the largest one.
pub fn gaussian_tensor_integral<E>(
    dims: usize,
    scale: f64,
    decay: f64,
    order: usize,
    exponent: E,
) -> Result<Complex64>
where
    E: Fn(&[f64]) -> Result<Complex64>,
{
    let at = |x: &[f64]| -> Result<Complex64> {
        let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
        exponent(&y)
    };
    // Recover the quadratic coefficients by polarization so the tensor loop
    // only does a few multiply-adds per node.
    let zero = vec![0.0; dims];
    let c0 = at(&zero)?;
    let mut lin = vec![Complex64::new(0.0, 0.0); dims];
    let mut quad = vec![vec![Complex64::new(0.0, 0.0); dims]; dims];
    let mut e = zero.clone();
    for i in 0..dims {
        e[i] = 1.0;
        let plus = at(&e)?;
        e[i] = -1.0;
        let minus = at(&e)?;
        e[i] = 0.0;
        lin[i] = (plus - minus) * 0.5;
        quad[i][i] = (plus + minus) * 0.5 - c0;
    }
    for i in 0..dims {
        for j in (i + 1)..dims {
            e[i] = 1.0;
            e[j] = 1.0;
            let both = at(&e)?;
            e[i] = 0.0;
            e[j] = 0.0;
            quad[i][j] = both - c0 - lin[i] - lin[j] - quad[i][i] - quad[j][j];
        }
    }

    let (nodes, weights) = gauss_hermite(order);
    // sum_i w_i e^{x_i^2} F(x_i) integrates F itself.
    let log_w: Vec<f64> = nodes.iter().zip(&weights).map(|(x, w)| w.ln() + x * x).collect();
    let bound: Vec<f64> = nodes.iter().zip(&log_w).map(|(x, lw)| lw - decay * x * x).collect();
    let best = bound.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut walk = TensorWalk {
        dims,
        nodes: &nodes,
        log_w: &log_w,
        bound: &bound,
        best,
        cutoff: dims as f64 * best - 60.0,
        lin: &lin,
        quad: &quad,
        idx: vec![0; dims],
        partial: vec![c0; dims + 1],
        partial_bound: vec![0.0; dims + 1],
        total: Complex64::new(0.0, 0.0),
    };
    walk.visit(0);
    let total = walk.total;
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::ConvergenceFailure { nodes: order, estimate: total });
    }
    Ok(total * scale.powi(dims as i32))
}

struct TensorWalk<'a> {
    dims: usize,
    nodes: &'a [f64],
    log_w: &'a [f64],
    bound: &'a [f64],
    best: f64,
    cutoff: f64,
    lin: &'a [Complex64],
    quad: &'a [Vec<Complex64>],
    idx: Vec<usize>,
    partial: Vec<Complex64>,
    partial_bound: Vec<f64>,
    total: Complex64,
}

impl TensorWalk<'_> {
    fn visit(&mut self, level: usize) {
        if level == self.dims {
            let lw: f64 = self.idx.iter().map(|&i| self.log_w[i]).sum();
            self.total += (self.partial[level] + lw).exp();
            return;
        }
        let remaining = (self.dims - level - 1) as f64 * self.best;
        for i in 0..self.nodes.len() {
            let pb = self.partial_bound[level] + self.bound[i];
            if pb + remaining < self.cutoff {
                continue;
            }
            let x = self.nodes[i];
            let mut e = self.partial[level] + self.lin[level] * x + self.quad[level][level] * (x * x);
            for j in 0..level {
                e += self.quad[j][level] * (self.nodes[self.idx[j]] * x);
            }
            self.idx[level] = i;
            self.partial[level + 1] = e;
            self.partial_bound[level + 1] = pb;
            self.visit(level + 1);
        }
    }
}
