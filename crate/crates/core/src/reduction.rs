//! The reduction operator `R_k` applied to Gaussian states, and their symbols.
//!
//! `Psi_{A,w}(z) = (1/2 pi) int_0^{2 pi} e^{-ikt} psi_{A,w}(e^{it} z) dt`.
//! Off the unit sphere the value includes the Bargmann weight
//! `e^{-k|z|^2/2}` of the integrand, i.e. the integral is evaluated as written.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bargmann::SqueezeMatrix;
use crate::error::{Error, Result};
use crate::numerics::linalg::{
    bilinear, hermitian, norm_sqr, principal_sqrt, quad_form, unitary_completion, ComplexMatrix,
    ComplexVector,
};
use crate::numerics::quadrature::{gaussian_tensor_integral, line_trapezoid, PeriodicTrapezoid};

/// Tolerance on `| |w| - 1 |` for centers used in reduction.
pub const CENTER_TOL: f64 = 1e-12;

/// Tolerance on `|eta . conj(w)|` (relative to `max(1, |eta|)`) for horizontal vectors.
pub const HORIZONTAL_TOL: f64 = 1e-12;

/// Gauss-Hermite order per real dimension in [`symbol_inner`] when `N - 1 > 1`.
pub const SYMBOL_INNER_ORDER: usize = 60;

fn check_center(a: &SqueezeMatrix, w: &ComplexVector) -> Result<()> {
    if w.len() != a.dim() {
        return Err(Error::invalid(format!(
            "center has length {}, matrix is {}x{}",
            w.len(),
            a.dim(),
            a.dim()
        )));
    }
    let norm = norm_sqr(w).sqrt();
    if (norm - 1.0).abs() > CENTER_TOL {
        return Err(Error::invalid(format!("center must lie on the unit sphere, |w| = {norm}")));
    }
    Ok(())
}

fn check_point(a: &SqueezeMatrix, z: &ComplexVector) -> Result<()> {
    if z.len() != a.dim() {
        return Err(Error::invalid(format!("point has length {}, expected {}", z.len(), a.dim())));
    }
    Ok(())
}

fn check_horizontal(w: &ComplexVector, eta: &ComplexVector) -> Result<()> {
    if eta.len() != w.len() {
        return Err(Error::invalid("horizontal vector has the wrong length"));
    }
    let overlap = hermitian(eta, w).norm();
    if overlap > HORIZONTAL_TOL * norm_sqr(eta).sqrt().max(1.0) {
        return Err(Error::invalid(format!("vector is not horizontal: |eta . conj(w)| = {overlap:e}")));
    }
    Ok(())
}

/// `[x^k] exp(p x + r x^2)` as `(mantissa, ln scale)`.
///
/// Uses `n c_n = p c_{n-1} + 2 r c_{n-2}`, rescaling as it goes. Unlike the
/// explicit binomial sum, whose terms can exceed the result by a factor of
/// `e^{0.6 k}`, the recurrence involves no catastrophic cancellation for the
/// values of `p`, `r` produced by Gaussian states.
pub(crate) fn taylor_coefficient(p: Complex64, r: Complex64, k: u32) -> (Complex64, f64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut prev = zero;
    let mut cur = Complex64::new(1.0, 0.0);
    let mut log_scale = 0.0;
    for n in 1..=k {
        let next = (p * cur + r * prev * 2.0) / n as f64;
        prev = cur;
        cur = next;
        let m = cur.norm().max(prev.norm());
        if m == 0.0 {
            return (zero, 0.0);
        }
        if !(1e-150..=1e150).contains(&m) {
            cur /= m;
            prev /= m;
            log_scale += m.ln();
        }
    }
    (cur, log_scale)
}

/// `exp(log_mag) * mantissa` without intermediate overflow.
fn scaled(mantissa: Complex64, log_mag: Complex64) -> Complex64 {
    if mantissa == Complex64::new(0.0, 0.0) {
        return mantissa;
    }
    (mantissa.ln() + log_mag).exp()
}

/// Exact value of `Psi_{A,w}(z)`.
///
/// With `p = k z(conj(w) - A w)` and `r = k Q_A(z)/2`,
/// `Psi = e^{-k + k Q_A(w)/2} [x^k] e^{p x + r x^2} e^{-k(|z|^2 - 1)/2}`.
pub fn reduce_exact(a: &SqueezeMatrix, w: &ComplexVector, k: u32, z: &ComplexVector) -> Result<Complex64> {
    check_center(a, w)?;
    check_point(a, z)?;
    let kf = k as f64;
    let aw = a.matrix() * w;
    let p = (hermitian(z, w) - bilinear(z, &aw)) * kf;
    let r = quad_form(a.matrix(), z)? * (kf / 2.0);
    let (mantissa, log_scale) = taylor_coefficient(p, r, k);
    let qw = quad_form(a.matrix(), w)?;
    let log_mag = qw * (kf / 2.0) - kf - kf * (norm_sqr(z) - 1.0) / 2.0 + log_scale;
    Ok(scaled(mantissa, log_mag))
}

/// `ln` of the holomorphic factor `psi_{A,w}(z) e^{k|z|^2/2}` for `|w| = 1`.
fn holomorphic_log(a: &ComplexMatrix, w: &ComplexVector, kf: f64, z: &ComplexVector) -> Complex64 {
    let d = z - w;
    let q = quad_form(a, &d).unwrap_or_default();
    (q * 0.5 + hermitian(z, w) - 0.5) * kf
}

/// `Psi_{A,w}(z)` by periodic trapezoid quadrature of the defining integral.
///
/// The holomorphic factor is integrated over the circle `rho e^{it} z`, using
/// `Psi_hol(z) = rho^{-k} Psi_hol(rho z)`; `rho` is picked among `1` and the
/// saddle radii of the integrand so that the integrand does not oscillate
/// over a much larger magnitude than the result.
pub fn reduce_quadrature(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    k: u32,
    z: &ComplexVector,
    tol: f64,
) -> Result<Complex64> {
    check_center(a, w)?;
    check_point(a, z)?;
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let kf = k as f64;
    let am = a.matrix();
    let on_circle = |rho: f64, t: f64| -> Complex64 {
        let zt = z.map(|x| x * Complex64::from_polar(rho, t));
        holomorphic_log(am, w, kf, &zt)
    };

    let aw = am * w;
    let p = (hermitian(z, w) - bilinear(z, &aw)) * kf;
    let r = quad_form(am, z)? * (kf / 2.0);
    let mut radii = vec![1.0];
    if r.norm() > 0.0 {
        let disc = principal_sqrt(p * p + r * kf * 8.0);
        radii.push(((-p + disc) / (r * 4.0)).norm());
        radii.push(((-p - disc) / (r * 4.0)).norm());
    } else if p.norm() > 0.0 {
        radii.push(kf / p.norm());
    }
    let coarse = 64;
    let peak = |rho: f64| -> f64 {
        (0..coarse)
            .map(|j| on_circle(rho, 2.0 * PI * j as f64 / coarse as f64).re)
            .fold(f64::NEG_INFINITY, f64::max)
            - kf * rho.ln()
    };
    let mut best = (f64::INFINITY, 1.0);
    for rho in radii.into_iter().filter(|r| r.is_finite() && *r > 1e-8 && *r < 1e8) {
        let m = peak(rho);
        if m < best.0 {
            best = (m, rho);
        }
    }
    let (shift, rho) = best;
    let shift = shift + kf * rho.ln();

    let rule = PeriodicTrapezoid {
        tol,
        min_nodes: (4 * k as usize + 16).next_power_of_two(),
        ..PeriodicTrapezoid::default()
    };
    let mean = rule.mean(|t| (on_circle(rho, t) - Complex64::new(shift, kf * t)).exp())?;
    let log_mag = Complex64::new(shift - kf * rho.ln() - kf * norm_sqr(z) / 2.0, 0.0);
    Ok(scaled(mean, log_mag))
}

/// Leading term of `Psi_{A,w}(e^{i t0} w)`:
/// `e^{-ik t0} / (sqrt(2 pi k) sqrt(Q_A(w) + 1))`, principal branch.
pub fn center_value_asymptotic(a: &SqueezeMatrix, w: &ComplexVector, k: u32, t0: f64) -> Result<Complex64> {
    check_center(a, w)?;
    let kf = k as f64;
    let q = quad_form(a.matrix(), w)?;
    Ok(Complex64::from_polar(1.0, -kf * t0) / ((2.0 * PI * kf).sqrt() * principal_sqrt(q + 1.0)))
}

/// `c e^{Q_M(u)/2} e^{-|u|^2/2}` on the horizontal space at `center`, where
/// `u_j = eta . conj(f_j)` are the coordinates of `eta` in `frame`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSymbol {
    center: ComplexVector,
    prefactor: Complex64,
    m: SqueezeMatrix,
    frame: Vec<ComplexVector>,
}

impl GaussianSymbol {
    /// Symbol with the frame of [`reduce_symbol_matrix`] at `w`.
    pub fn new(w: &ComplexVector, prefactor: Complex64, m: SqueezeMatrix) -> Result<Self> {
        if w.len() < 2 || m.dim() + 1 != w.len() {
            return Err(Error::invalid("symbol matrix must be (N-1)x(N-1) for a center in C^N, N >= 2"));
        }
        let p = unitary_completion(w)?;
        let frame = (1..w.len()).map(|j| p.column(j).into_owned()).collect();
        Ok(Self { center: w.clone(), prefactor, m, frame })
    }

    pub fn center(&self) -> &ComplexVector {
        &self.center
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn matrix(&self) -> &SqueezeMatrix {
        &self.m
    }

    pub fn frame(&self) -> &[ComplexVector] {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Frame coordinates of a horizontal vector.
    pub fn coordinates(&self, eta: &ComplexVector) -> Result<ComplexVector> {
        check_horizontal(&self.center, eta)?;
        Ok(ComplexVector::from_iterator(self.frame.len(), self.frame.iter().map(|f| hermitian(eta, f))))
    }

    /// Ambient horizontal vector with the given frame coordinates.
    pub fn horizontal(&self, u: &[Complex64]) -> Result<ComplexVector> {
        if u.len() != self.frame.len() {
            return Err(Error::invalid("wrong number of frame coordinates"));
        }
        let mut eta = ComplexVector::zeros(self.center.len());
        for (f, uj) in self.frame.iter().zip(u) {
            eta += f.map(|x| x * uj);
        }
        Ok(eta)
    }
}

/// `sigma_A` at `w`: rotate `w` to `e_1`, take the minor formula there.
///
/// The rotation is `P = unitary_completion(w)` (first column `w`), so that
/// `psi_{A,w}(zeta P^T) = psi_{P^T A P, e_1}(zeta)`; the symbol frame is the
/// remaining columns of `P`.
pub fn reduce_symbol_matrix(a: &SqueezeMatrix, w: &ComplexVector) -> Result<GaussianSymbol> {
    check_center(a, w)?;
    let n = a.dim();
    if n < 2 {
        return Err(Error::invalid("reduction needs N >= 2"));
    }
    let p = unitary_completion(w)?;
    let rotated = p.transpose() * a.matrix() * &p;
    let a11 = rotated[(0, 0)];
    let denom = a11 + 1.0;
    let mut m = ComplexMatrix::from_fn(n - 1, n - 1, |i, j| {
        rotated[(i + 1, j + 1)] - rotated[(i + 1, 0)] * rotated[(0, j + 1)] / denom
    });
    m = (&m + m.transpose()).map(|x| x * 0.5);
    let prefactor = 1.0 / ((2.0 * PI).sqrt() * principal_sqrt(denom));
    let frame = (1..n).map(|j| p.column(j).into_owned()).collect();
    Ok(GaussianSymbol { center: w.clone(), prefactor, m: SqueezeMatrix::new(m)?, frame })
}

pub fn symbol_eval_closed(sym: &GaussianSymbol, eta: &ComplexVector) -> Result<Complex64> {
    let u = sym.coordinates(eta)?;
    let q = quad_form(sym.m.matrix(), &u)?;
    Ok(sym.prefactor * (q * 0.5 - 0.5 * norm_sqr(&u)).exp())
}

/// `(1/2 pi) e^{-|eta|^2/2} int e^{Q_A(i s w + eta)/2} e^{-s^2/2} ds` by trapezoid.
pub fn symbol_eval_integral(a: &SqueezeMatrix, w: &ComplexVector, eta: &ComplexVector) -> Result<Complex64> {
    check_center(a, w)?;
    check_horizontal(w, eta)?;
    let eta_sq = norm_sqr(eta);
    // |integrand| <= e^{-(1-kappa)(s^2 + |eta|^2)/2}.
    let half_width = 8.0 / (1.0 - a.kappa()).sqrt();
    let am = a.matrix();
    let integral = line_trapezoid(
        |s| {
            let x = w.map(|v| v * Complex64::new(0.0, s)) + eta;
            let q = quad_form(am, &x).unwrap_or_default();
            (q * 0.5 - 0.5 * s * s - 0.5 * eta_sq).exp()
        },
        half_width,
        1e-14,
    )?;
    Ok(integral / (2.0 * PI))
}

/// `int sigma_1 conj(sigma_2) dL` over `C^{N-1}`.
pub fn symbol_inner(s1: &GaussianSymbol, s2: &GaussianSymbol) -> Result<Complex64> {
    if s1.dim() != s2.dim() {
        return Err(Error::invalid("symbols of different dimensions"));
    }
    let mismatch = (&s1.center - &s2.center).norm()
        + s1.frame.iter().zip(&s2.frame).map(|(f, g)| (f - g).norm()).sum::<f64>();
    if mismatch > 1e-10 {
        return Err(Error::invalid("symbols live on different frames"));
    }
    let c = s1.prefactor * s2.prefactor.conj();
    let (m1, m2) = (s1.m.matrix(), s2.m.matrix());
    if s1.dim() == 1 {
        return Ok(c * PI / principal_sqrt(1.0 - m1[(0, 0)] * m2[(0, 0)].conj()));
    }
    let n = s1.dim();
    let kappa = 0.5 * (s1.m.kappa() + s2.m.kappa());
    let scale = (1.0 - kappa * kappa).powf(-0.25);
    let decay = (1.0 - kappa) * scale * scale;
    let integral = gaussian_tensor_integral(2 * n, scale, decay, SYMBOL_INNER_ORDER, |y| {
        let u = ComplexVector::from_fn(n, |j, _| Complex64::new(y[2 * j], y[2 * j + 1]));
        Ok(quad_form(m1, &u)? * 0.5 + quad_form(m2, &u)?.conj() * 0.5 - norm_sqr(&u))
    })?;
    Ok(c * integral)
}

/// Leading term `(2 pi / k^N) <sigma_A, sigma_B>` of `<Psi_{A,w}, Psi_{B,w}>`.
pub fn reduced_inner_estimate(a: &SqueezeMatrix, b: &SqueezeMatrix, w: &ComplexVector, k: u32) -> Result<Complex64> {
    let sa = reduce_symbol_matrix(a, w)?;
    let sb = reduce_symbol_matrix(b, w)?;
    let n = a.dim() as i32;
    Ok(symbol_inner(&sa, &sb)? * (2.0 * PI / (k as f64).powi(n)))
}

/// `|sqrt(k) Psi_{A,w}(w + eta/sqrt(k)) - sigma_A(eta)|`.
pub fn symbol_limit_residual(a: &SqueezeMatrix, w: &ComplexVector, k: u32, eta: &ComplexVector) -> Result<f64> {
    let sym = reduce_symbol_matrix(a, w)?;
    let limit = symbol_eval_closed(&sym, eta)?;
    let rk = (k as f64).sqrt();
    let z = w + eta.map(|x| x / rk);
    Ok((reduce_exact(a, w, k, &z)? * rk - limit).norm())
}
