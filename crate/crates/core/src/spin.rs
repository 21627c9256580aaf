//! Spin states for `N = 2`: degree-`k` homogeneous polynomials on `C^2` in the
//! orthonormal basis `|n> = beta_n z_1^n z_2^{k-n}`,
//! `beta_n = (1/pi) sqrt((k+1)/2) sqrt(C(k, n))`, orthonormal for the surface
//! measure on `S^3` (total mass `2 pi^2`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bargmann::SqueezeMatrix;
use crate::error::{Error, Result};
use crate::numerics::combinatorics::{ln_factorial, log_binomial};
use crate::numerics::linalg::{
    check_unitary, norm_sqr, quad_form, ComplexMatrix, ComplexVector, HermitianPropagator,
};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Coefficients `c_0..c_k` in the basis `|n>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    k: u32,
    coeffs: Vec<Complex64>,
}

impl SpinState {
    pub fn new(k: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if coeffs.len() != k as usize + 1 {
            return Err(Error::invalid(format!("expected {} coefficients, got {}", k + 1, coeffs.len())));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(Self { k, coeffs })
    }

    /// `|n>`.
    pub fn basis(k: u32, n: u32) -> Result<Self> {
        if n > k {
            return Err(Error::invalid(format!("basis index {n} exceeds k = {k}")));
        }
        let mut coeffs = vec![ZERO; k as usize + 1];
        coeffs[n as usize] = Complex64::new(1.0, 0.0);
        Self::new(k, coeffs)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::from_column_slice(&self.coeffs)
    }

    pub fn from_vector(k: u32, v: &ComplexVector) -> Result<Self> {
        Self::new(k, v.iter().copied().collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { k: self.k, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > 0.0) {
            return Err(Error::invalid("cannot normalize the zero state"));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// `l^2` distance to another state of the same `k`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        same_k(self, other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    /// Value of the polynomial at `z` in `C^2`.
    pub fn eval(&self, z: &ComplexVector) -> Result<Complex64> {
        if z.len() != 2 {
            return Err(Error::invalid("spin states are evaluated on C^2"));
        }
        let k = self.k;
        let terms = (0..=k).map(|n| {
            let c = self.coeffs[n as usize];
            let log = log_pow(z[0], n).zip(log_pow(z[1], k - n)).map(|(a, b)| a + b + log_basis_norm_factor_unchecked(k, n));
            (c, log)
        });
        Ok(sum_scaled(terms).0)
    }
}

fn same_k(a: &SpinState, b: &SpinState) -> Result<()> {
    if a.k != b.k {
        return Err(Error::invalid(format!("states have different k: {} and {}", a.k, b.k)));
    }
    Ok(())
}

/// `ln(z^e)`, or `None` when the power vanishes.
fn log_pow(z: Complex64, e: u32) -> Option<Complex64> {
    if e == 0 {
        Some(ZERO)
    } else if z == ZERO {
        None
    } else {
        Some(z.ln() * e as f64)
    }
}

/// `sum_j c_j e^{log_j}` computed as `value`, with the largest `Re log_j` factored out.
/// Returns `(value, max_log)` where `max_log` is the factored exponent
/// (`-inf` when every term vanishes).
fn sum_scaled<I>(terms: I) -> (Complex64, f64)
where
    I: Iterator<Item = (Complex64, Option<Complex64>)>,
{
    let terms: Vec<(Complex64, Complex64)> = terms
        .filter_map(|(c, log)| log.filter(|_| c != ZERO).map(|l| (c, l)))
        .collect();
    let top = terms.iter().map(|(c, l)| l.re + c.norm().ln()).fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return (ZERO, f64::NEG_INFINITY);
    }
    let reduced: Complex64 = terms.iter().map(|(c, l)| c * (l - top).exp()).sum();
    if reduced == ZERO {
        return (ZERO, top);
    }
    ((reduced.ln() + top).exp(), top)
}

/// Monomial coefficients `m_j` of `z_1^{k-j} z_2^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly2 {
    k: u32,
    m: Vec<Complex64>,
}

impl HomPoly2 {
    pub fn new(k: u32, m: Vec<Complex64>) -> Result<Self> {
        if m.len() != k as usize + 1 {
            return Err(Error::invalid(format!("expected {} monomial coefficients, got {}", k + 1, m.len())));
        }
        Ok(Self { k, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn monomials(&self) -> &[Complex64] {
        &self.m
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let k = self.k;
        (0..=k).map(|j| self.m[j as usize] * z1.powu(k - j) * z2.powu(j)).sum()
    }
}

/// A squeeze parameter `mu` with `|mu| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct SqueezeParameter(Complex64);

impl SqueezeParameter {
    pub fn new(mu: Complex64) -> Result<Self> {
        if !(mu.norm() < 1.0) {
            return Err(Error::invalid(format!("squeeze parameter must satisfy |mu| < 1, got {mu}")));
        }
        Ok(Self(mu))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<[f64; 2]> for SqueezeParameter {
    type Error = Error;

    fn try_from(p: [f64; 2]) -> Result<Self> {
        Self::new(Complex64::new(p[0], p[1]))
    }
}

impl From<SqueezeParameter> for [f64; 2] {
    fn from(mu: SqueezeParameter) -> Self {
        [mu.0.re, mu.0.im]
    }
}

fn log_basis_norm_factor_unchecked(k: u32, n: u32) -> f64 {
    let lb = log_binomial(k as u64, n as u64).unwrap_or(f64::NAN);
    0.5 * ((k as f64 + 1.0) / 2.0).ln() - PI.ln() + 0.5 * lb
}

/// `ln beta_n`.
pub fn log_basis_norm_factor(k: u32, n: u32) -> Result<f64> {
    if n > k {
        return Err(Error::invalid(format!("basis index {n} exceeds k = {k}")));
    }
    Ok(log_basis_norm_factor_unchecked(k, n))
}

/// `beta_n = (1/pi) sqrt((k+1)/2) sqrt(C(k, n))`, so `|n> = beta_n z_1^n z_2^{k-n}`.
pub fn basis_norm_factor(k: u32, n: u32) -> Result<f64> {
    Ok(log_basis_norm_factor(k, n)?.exp())
}

/// `c_n = m_{k-n} / beta_n`.
pub fn poly_to_state(p: &HomPoly2) -> Result<SpinState> {
    let k = p.k;
    let coeffs = (0..=k)
        .map(|n| p.m[(k - n) as usize] * (-log_basis_norm_factor_unchecked(k, n)).exp())
        .collect();
    SpinState::new(k, coeffs)
}

pub fn state_to_poly(s: &SpinState) -> HomPoly2 {
    let k = s.k;
    let mut m = vec![ZERO; k as usize + 1];
    for n in 0..=k {
        m[(k - n) as usize] = s.coeffs[n as usize] * log_basis_norm_factor_unchecked(k, n).exp();
    }
    HomPoly2 { k, m }
}

/// `|o, mu>`: coefficient `(1/2k)^l (2l)!/l! sqrt(C(k, 2l)) mu^l` at `|k - 2l>`.
pub fn ket_mu(k: u32, mu: SqueezeParameter) -> Result<SpinState> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mu = mu.value();
    let kf = k as f64;
    let mut coeffs = vec![ZERO; k as usize + 1];
    for l in 0..=(k / 2) {
        let lu = l as u64;
        let log_mag = -(lu as f64) * (2.0 * kf).ln() + ln_factorial(2 * lu) - ln_factorial(lu)
            + 0.5 * log_binomial(k as u64, 2 * lu)?;
        let value = if l == 0 {
            Complex64::new(1.0, 0.0)
        } else if mu == ZERO {
            ZERO
        } else {
            (mu.ln() * l as f64 + log_mag).exp()
        };
        coeffs[(k - 2 * l) as usize] = value;
    }
    SpinState::new(k, coeffs)
}

/// `<o, mu | o, mu>`.
pub fn ket_mu_norm_sqr(k: u32, mu: SqueezeParameter) -> Result<f64> {
    Ok(ket_mu(k, mu)?.norm_sqr())
}

/// Coefficients of `Psi_{A,(1,0)}` in the basis `|n>`.
pub fn reduced_to_state(a: &SqueezeMatrix, k: u32) -> Result<SpinState> {
    let w = ComplexVector::from_column_slice(&[Complex64::new(1.0, 0.0), ZERO]);
    reduced_to_state_at(a, &w, k)
}

/// Coefficients of `Psi_{A,w}` in the basis `|n>`.
///
/// `Psi_{A,w} = e^{-k + k Q_A(w)/2} [x^k] exp(p(z) x + r(z) x^2)` with
/// `p(z) = k z(conj(w) - A w)` and `r(z) = k Q_A(z)/2`; the Taylor
/// coefficients satisfy `n c_n = p c_{n-1} + 2 r c_{n-2}` as polynomials.
pub fn reduced_to_state_at(a: &SqueezeMatrix, w: &ComplexVector, k: u32) -> Result<SpinState> {
    if a.dim() != 2 || w.len() != 2 {
        return Err(Error::invalid("spin states need N = 2"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let norm = norm_sqr(w).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("center must lie on the unit sphere, |w| = {norm}")));
    }
    let kf = k as f64;
    let am = a.matrix();
    let aw = am * w;
    // Monomial index j stands for z_1^{deg-j} z_2^j.
    let p = [(w[0].conj() - aw[0]) * kf, (w[1].conj() - aw[1]) * kf];
    let r = [am[(0, 0)] * (kf / 2.0), am[(0, 1)] * kf, am[(1, 1)] * (kf / 2.0)];

    let mut prev: Vec<Complex64> = Vec::new();
    let mut cur = vec![Complex64::new(1.0, 0.0)];
    let mut log_scale = 0.0;
    for n in 1..=k as usize {
        let mut next = vec![ZERO; n + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j] += p[0] * c;
            next[j + 1] += p[1] * c;
        }
        for (j, c) in prev.iter().enumerate() {
            let c2 = c * 2.0;
            next[j] += r[0] * c2;
            next[j + 1] += r[1] * c2;
            next[j + 2] += r[2] * c2;
        }
        let inv = 1.0 / n as f64;
        next.iter_mut().for_each(|c| *c *= inv);
        prev = cur;
        cur = next;
        let m = cur.iter().chain(prev.iter()).map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return SpinState::new(k, vec![ZERO; k as usize + 1]);
        }
        if !(1e-150..=1e150).contains(&m) {
            cur.iter_mut().for_each(|c| *c /= m);
            prev.iter_mut().for_each(|c| *c /= m);
            log_scale += m.ln();
        }
    }
    let qw = quad_form(am, w)?;
    let prefactor = qw * (kf / 2.0) - kf + log_scale;
    let coeffs = (0..=k)
        .map(|n| {
            let c = cur[(k - n) as usize];
            if c == ZERO {
                ZERO
            } else {
                (c.ln() + prefactor - log_basis_norm_factor_unchecked(k, n)).exp()
            }
        })
        .collect();
    SpinState::new(k, coeffs)
}

/// Matrix of the derivation `sum_ij X_ij z_i d/dz_j` in the basis `|n>`.
pub fn generator_matrix(k: u32, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.nrows() != 2 || x.ncols() != 2 {
        return Err(Error::invalid("generator must be 2x2"));
    }
    let size = k as usize + 1;
    let kf = k as f64;
    let mut d = ComplexMatrix::zeros(size, size);
    for n in 0..size {
        let nf = n as f64;
        // z_1 d_1 |n> = n |n>,  z_2 d_2 |n> = (k - n) |n>.
        d[(n, n)] = x[(0, 0)] * nf + x[(1, 1)] * (kf - nf);
        // z_2 d_1 |n> = sqrt(n (k - n + 1)) |n - 1>.
        if n > 0 {
            d[(n - 1, n)] = x[(1, 0)] * (nf * (kf - nf + 1.0)).sqrt();
        }
        // z_1 d_2 |n> = sqrt((k - n)(n + 1)) |n + 1>.
        if n < size - 1 {
            d[(n + 1, n)] = x[(0, 1)] * ((kf - nf) * (nf + 1.0)).sqrt();
        }
    }
    Ok(d)
}

fn check_su2(g: &ComplexMatrix) -> Result<()> {
    if g.nrows() != 2 || g.ncols() != 2 {
        return Err(Error::invalid("expected a 2x2 matrix"));
    }
    check_unitary(g)?;
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    if (det - 1.0).norm() > 1e-12 {
        return Err(Error::invalid(format!("determinant must be 1, got {det}")));
    }
    Ok(())
}

/// A logarithm `X` of `g` in SU(2) (`e^X = g`), with `X = i pi I` at `g = -I`.
fn su2_log(g: &ComplexMatrix) -> ComplexMatrix {
    let cos = g[(0, 0)].re.clamp(-1.0, 1.0);
    let sin = (g[(0, 0)].im.powi(2) + g[(1, 0)].norm_sqr()).sqrt();
    let theta = sin.atan2(cos);
    let id = ComplexMatrix::identity(2, 2);
    if sin < 1e-14 {
        if cos > 0.0 {
            return g - id;
        }
        return id.map(|x| x * Complex64::new(0.0, PI));
    }
    (g - id.map(|x| x * cos)).map(|x| x * (theta / sin))
}

/// `S_k(g)`, the action `psi(z) -> psi(z g)`, as a `(k+1) x (k+1)` unitary.
pub fn su2_matrix(g: &ComplexMatrix, k: u32) -> Result<ComplexMatrix> {
    check_su2(g)?;
    let x = su2_log(g);
    // S_k(e^X) = exp(D(X)) = exp(-i * (i D(X))), with i D(X) Hermitian.
    let h = generator_matrix(k, &x)?.map(|v| v * Complex64::new(0.0, 1.0));
    let h = (&h + h.adjoint()).map(|v| v * 0.5);
    Ok(HermitianPropagator::new(&h)?.at(1.0))
}

pub fn su2_action(g: &ComplexMatrix, s: &SpinState) -> Result<SpinState> {
    let m = su2_matrix(g, s.k)?;
    SpinState::from_vector(s.k, &(m * s.to_vector()))
}

/// `|p, mu> = S_k(g)|o, mu>`.
pub fn ket_pmu(g: &ComplexMatrix, mu: SqueezeParameter, k: u32) -> Result<SpinState> {
    su2_action(g, &ket_mu(k, mu)?)
}

/// `|S_w^* s|^2 (zeta)` with `S_w(zeta) = (1, zeta)/sqrt(1 + |zeta|^2)`.
pub fn husimi_cp1(s: &SpinState, zeta: Complex64) -> f64 {
    let k = s.k;
    let terms = (0..=k).map(|n| {
        let log = log_pow(zeta, k - n).map(|l| l + log_basis_norm_factor_unchecked(k, n));
        (s.coeffs[n as usize], log)
    });
    let (value, top) = sum_scaled(terms);
    if !top.is_finite() || value == ZERO {
        return 0.0;
    }
    let log_abs = value.norm().ln();
    (2.0 * log_abs - k as f64 * zeta.norm_sqr().ln_1p()).exp()
}

/// `sum_n c_n conj(d_n)`.
pub fn state_inner(s1: &SpinState, s2: &SpinState) -> Result<Complex64> {
    same_k(s1, s2)?;
    Ok(s1.coeffs.iter().zip(&s2.coeffs).map(|(a, b)| a * b.conj()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::{c, cmat, cvec, unitarity_defect};
    use crate::numerics::quadrature::gauss_legendre;
    use crate::reduction::reduce_exact;

    fn mu(re: f64, im: f64) -> SqueezeParameter {
        SqueezeParameter::new(c(re, im)).unwrap()
    }

    fn su2(alpha: Complex64, beta: Complex64) -> ComplexMatrix {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        let (a, b) = (alpha / n, beta / n);
        cmat(2, 2, &[a, -b.conj(), b, a.conj()])
    }

    fn sample_state(k: u32) -> SpinState {
        SpinState::new(k, (0..=k).map(|n| c((n as f64 * 0.7).sin(), (n as f64 * 1.3).cos() * 0.5)).collect()).unwrap()
    }

    #[test]
    fn basis_factor_examples() {
        let k = 9;
        assert!((basis_norm_factor(k, k).unwrap() - 5f64.sqrt() / PI).abs() < 1e-15);
        assert!((basis_norm_factor(2, 1).unwrap() - 1.5f64.sqrt() * 2f64.sqrt() / PI).abs() < 1e-15);
        assert!(basis_norm_factor(3, 4).is_err());
    }

    /// `int_{S^3} |s(z)|^2 dsigma` with `z = (sqrt(1-u) e^{i a}, sqrt(u) e^{i b})`,
    /// `dsigma = (1/2) du da db`.
    fn sphere_norm_sqr(s: &SpinState) -> f64 {
        let k = s.k() as usize;
        let (xs, ws) = gauss_legendre(k + 2);
        let m = 2 * k + 2;
        let mut acc = 0.0;
        for (x, wgt) in xs.iter().zip(&ws) {
            let u = 0.5 * (x + 1.0);
            for i in 0..m {
                for j in 0..m {
                    let (a, b) = (2.0 * PI * i as f64 / m as f64, 2.0 * PI * j as f64 / m as f64);
                    let z = cvec(&[Complex64::from_polar((1.0 - u).sqrt(), a), Complex64::from_polar(u.sqrt(), b)]);
                    acc += wgt * 0.5 * s.eval(&z).unwrap().norm_sqr();
                }
            }
        }
        acc * 0.5 * (2.0 * PI / m as f64).powi(2)
    }

    #[test]
    fn basis_vectors_have_unit_sphere_norm() {
        for (k, n) in [(1u32, 0u32), (6, 2), (12, 12), (15, 7)] {
            let v = sphere_norm_sqr(&SpinState::basis(k, n).unwrap());
            assert!((v - 1.0).abs() < 1e-8, "k = {k}, n = {n}: {v}");
        }
    }

    #[test]
    fn poly_round_trip() {
        let k = 12;
        let p = HomPoly2::new(k, vec![c(1.0, 0.0); k as usize + 1]).unwrap();
        let back = state_to_poly(&poly_to_state(&p).unwrap());
        for (a, b) in back.monomials().iter().zip(p.monomials()) {
            assert!((a - b).norm() < 1e-14);
        }
        let mut m = vec![ZERO; k as usize + 1];
        m[0] = c(1.0, 0.0);
        let s = poly_to_state(&HomPoly2::new(k, m).unwrap()).unwrap();
        assert!((s.coeffs()[k as usize].re - PI * (2.0 / (k as f64 + 1.0)).sqrt()).abs() < 1e-14);
        let basis = state_to_poly(&SpinState::basis(k, 4).unwrap());
        assert_eq!(basis.monomials().iter().filter(|x| **x != ZERO).count(), 1);
    }

    #[test]
    fn ket_mu_examples() {
        let s = ket_mu(30, mu(0.75, 0.0)).unwrap();
        assert_eq!(s.coeffs()[30], c(1.0, 0.0));
        let want = (1.0 / 60.0) * 2.0 * 435f64.sqrt() * 0.75;
        assert!((s.coeffs()[28].re - want).abs() < 1e-14);
        assert_eq!(s.coeffs()[29], ZERO);
        assert_eq!(ket_mu(30, mu(0.0, 0.0)).unwrap(), SpinState::basis(30, 30).unwrap());
        assert_eq!(ket_mu_norm_sqr(8, mu(0.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn ket_mu_components_decay_from_the_top() {
        let s = ket_mu(30, mu(0.75, 0.0)).unwrap().normalized().unwrap();
        let populated: Vec<f64> = (0..=15).map(|l| s.coeffs()[30 - 2 * l].norm()).collect();
        assert!(populated.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn ket_mu_norm_is_monotone_in_modulus() {
        let mut last = 0.0;
        for r in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95] {
            let v = ket_mu_norm_sqr(40, mu(r * 0.6, r * 0.8)).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn standard_reduced_state() {
        let k = 25;
        let s = reduced_to_state(&SqueezeMatrix::zeros(2), k).unwrap();
        let scalar = (crate::numerics::ln_poisson_mode(k as u64)).exp() * PI * (2.0 / (k as f64 + 1.0)).sqrt();
        assert!((s.coeffs()[k as usize] - scalar).norm() < 1e-14);
        assert!(s.coeffs()[..k as usize].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn reduced_state_of_lower_corner_is_scaled_ket_mu() {
        let m = c(0.4, -0.5);
        let k = 40;
        let s = reduced_to_state(&SqueezeMatrix::lower_corner(m).unwrap(), k).unwrap();
        let ket = ket_mu(k, mu(m.re, m.im)).unwrap();
        // k^k e^{-k} / k! * pi sqrt(2/(k+1)) times ket_mu.
        let scalar = (crate::numerics::ln_poisson_mode(k as u64)).exp() * PI * (2.0 / (k as f64 + 1.0)).sqrt();
        for (a, b) in s.coeffs().iter().zip(ket.coeffs()) {
            assert!((a - b * scalar).norm() <= 1e-12 * (b * scalar).norm().max(1e-300), "{a} vs {}", b * scalar);
        }
    }

    #[test]
    fn reduced_state_matches_pointwise_reduction() {
        let a = SqueezeMatrix::two_by_two(c(0.3, 0.2), c(-0.25, 0.1), c(0.1, -0.45)).unwrap();
        let w = cvec(&[c(0.6, 0.0), c(0.0, 0.8)]);
        for k in [3u32, 20, 60] {
            let s = reduced_to_state_at(&a, &w, k).unwrap();
            // Rounding in the expansion scales with the peak value, reached near w.
            let peak = reduce_exact(&a, &w, k, &w).unwrap().norm();
            for z in [cvec(&[c(0.6, 0.0), c(0.0, 0.8)]), cvec(&[c(0.28, 0.96), c(0.0, 0.0)]), cvec(&[c(0.5, 0.5), c(0.5, -0.5)])] {
                let want = reduce_exact(&a, &w, k, &z).unwrap();
                let got = s.eval(&z).unwrap();
                assert!((got - want).norm() <= 1e-10 * want.norm().max(peak * 1e-3), "k = {k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn su2_identity_and_diagonal() {
        let s = sample_state(9);
        let id = ComplexMatrix::identity(2, 2);
        assert!(su2_action(&id, &s).unwrap().distance(&s).unwrap() < 1e-13);
        let theta = 0.37;
        let g = cmat(2, 2, &[Complex64::from_polar(1.0, theta), ZERO, ZERO, Complex64::from_polar(1.0, -theta)]);
        let out = su2_action(&g, &s).unwrap();
        for n in 0..=9 {
            let want = s.coeffs()[n] * Complex64::from_polar(1.0, theta * (2.0 * n as f64 - 9.0));
            assert!((out.coeffs()[n] - want).norm() < 1e-13);
        }
        let minus = id.map(|x| -x);
        let flipped = su2_action(&minus, &s).unwrap();
        assert!(flipped.distance(&s.scaled(c(-1.0, 0.0))).unwrap() < 1e-13);
    }

    #[test]
    fn su2_action_is_substitution() {
        let s = sample_state(7);
        let g = su2(c(0.3, -0.5), c(0.6, 0.2));
        let moved = su2_action(&g, &s).unwrap();
        let z = cvec(&[c(0.2, 0.7), c(-0.4, 0.1)]);
        let zg = g.transpose() * &z;
        assert!((moved.eval(&z).unwrap() - s.eval(&zg).unwrap()).norm() < 1e-12);
        assert!(unitarity_defect(&su2_matrix(&g, 7).unwrap()) < 1e-12);
        assert!((moved.norm() - s.norm()).abs() < 1e-12);
    }

    #[test]
    fn su2_rejects_bad_matrices() {
        let u = cmat(2, 2, &[c(0.0, 1.0), ZERO, ZERO, c(1.0, 0.0)]);
        assert!(su2_action(&u, &sample_state(3)).is_err());
        let m = cmat(2, 2, &[c(2.0, 0.0), ZERO, ZERO, c(0.5, 0.0)]);
        assert!(su2_action(&m, &sample_state(3)).is_err());
    }

    #[test]
    fn ket_pmu_with_identity() {
        let id = ComplexMatrix::identity(2, 2);
        let a = ket_pmu(&id, mu(0.3, 0.1), 12).unwrap();
        assert!(a.distance(&ket_mu(12, mu(0.3, 0.1)).unwrap()).unwrap() < 1e-13);
    }

    #[test]
    fn husimi_examples() {
        let k = 11;
        let top = SpinState::basis(k, k).unwrap();
        for zeta in [c(0.0, 0.0), c(0.3, -0.4), c(2.0, 1.0)] {
            let want = (k as f64 + 1.0) / (2.0 * PI * PI) * (1.0 + zeta.norm_sqr()).powi(-(k as i32));
            assert!((husimi_cp1(&top, zeta) - want).abs() < 1e-14 * want.max(1e-300) + 1e-300);
        }
        let s = sample_state(k);
        let zeta = c(0.6, -1.2);
        let r = (1.0 + zeta.norm_sqr()).sqrt();
        let z = cvec(&[c(1.0 / r, 0.0), zeta / r]);
        assert!((husimi_cp1(&s, zeta) - s.eval(&z).unwrap().norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn husimi_of_tilted_state_peaks_at_origin() {
        let s = ket_mu(10, mu(0.25, 0.5)).unwrap();
        let at0 = husimi_cp1(&s, ZERO);
        for i in -20..=20 {
            for j in -20..=20 {
                let zeta = c(i as f64 * 0.1, j as f64 * 0.1);
                assert!(husimi_cp1(&s, zeta) <= at0 * (1.0 + 1e-12));
            }
        }
    }

    /// `2 pi int_C f1 conj(f2) dx dy / (1 + |zeta|^2)^2` over the chart, with
    /// `zeta = sqrt(u/(1-u)) e^{i a}`, `dx dy / (1+|zeta|^2)^2 = du da / 2`.
    fn chart_inner(s1: &SpinState, s2: &SpinState) -> Complex64 {
        let k = s1.k() as usize;
        let (xs, ws) = gauss_legendre(k + 2);
        let m = 2 * k + 2;
        let mut acc = ZERO;
        for (x, wgt) in xs.iter().zip(&ws) {
            let u = 0.5 * (x + 1.0);
            for i in 0..m {
                let zeta = Complex64::from_polar((u / (1.0 - u)).sqrt(), 2.0 * PI * i as f64 / m as f64);
                let r = (1.0 + zeta.norm_sqr()).sqrt();
                let z = cvec(&[c(1.0 / r, 0.0), zeta / r]);
                acc += s1.eval(&z).unwrap() * s2.eval(&z).unwrap().conj() * (wgt * 0.5);
            }
        }
        acc * 0.5 * (2.0 * PI / m as f64) * 2.0 * PI
    }

    #[test]
    fn state_inner_examples() {
        let k = 10;
        for n in 0..=k {
            for m in 0..=k {
                let v = state_inner(&SpinState::basis(k, n).unwrap(), &SpinState::basis(k, m).unwrap()).unwrap();
                assert_eq!(v, c(if n == m { 1.0 } else { 0.0 }, 0.0));
            }
        }
        let ket = ket_mu(k, mu(0.2, 0.6)).unwrap();
        assert!((state_inner(&ket, &ket).unwrap().re - ket_mu_norm_sqr(k, mu(0.2, 0.6)).unwrap()).abs() < 1e-15);
        let (a, b) = (sample_state(k), ket);
        let exact = state_inner(&a, &b).unwrap();
        let quad = chart_inner(&a, &b);
        assert!((exact - quad).norm() < 1e-8, "{exact} vs {quad}");
        assert!(state_inner(&a, &sample_state(3)).is_err());
    }
}
