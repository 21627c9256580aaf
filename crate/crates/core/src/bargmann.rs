//! Gaussian coherent states `psi_{A,w}` in the Bargmann space of `C^N`.
//!
//! `psi_{A,w}(z) = e^{k Q_A(z-w)/2} e^{k z w^*} e^{-k|w|^2/2} e^{-k|z|^2/2}`
//! with `Q_A(z) = z A z^T`. All evaluations accumulate the complex exponent
//! and exponentiate once.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{
    self, check_unitary, hermitian, norm_sqr, quad_form, right_mul, ComplexMatrix,
    ComplexVector,
};
use crate::numerics::quadrature::gaussian_tensor_integral;

/// Margin below 1 required of the Takagi radius.
pub const DISK_MARGIN: f64 = 1e-10;

/// Gauss-Hermite order per real dimension in [`bargmann_inner`].
pub const BARGMANN_INNER_ORDER: usize = 80;

/// A complex symmetric matrix strictly inside the generalized unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrixJson", into = "ComplexMatrixJson")]
pub struct SqueezeMatrix {
    a: ComplexMatrix,
    kappa: f64,
}

impl SqueezeMatrix {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        let kappa = linalg::takagi_radius(&a)?;
        if !(kappa < 1.0 - DISK_MARGIN) {
            return Err(Error::invalid(format!(
                "squeeze matrix must satisfy kappa < 1, got kappa = {kappa}"
            )));
        }
        Ok(Self { a, kappa })
    }

    pub fn zeros(n: usize) -> Self {
        Self { a: ComplexMatrix::zeros(n, n), kappa: 0.0 }
    }

    /// `[[a, c], [c, b]]`.
    pub fn two_by_two(a: Complex64, c: Complex64, b: Complex64) -> Result<Self> {
        Self::new(linalg::cmat(2, 2, &[a, c, c, b]))
    }

    /// `diag(0, mu)`, the matrix `[mu]`.
    pub fn lower_corner(mu: Complex64) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        Self::two_by_two(zero, zero, mu)
    }

    pub fn scalar(mu: Complex64) -> Result<Self> {
        Self::new(linalg::cmat(1, 1, &[mu]))
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn quadratic_form(&self, z: &ComplexVector) -> Result<Complex64> {
        quadratic_form(self, z)
    }
}

/// JSON form of a complex matrix: array of rows, each entry `[re, im]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrixJson(pub Vec<Vec<[f64; 2]>>);

impl From<&ComplexMatrix> for ComplexMatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        ComplexMatrixJson(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }
}

impl TryFrom<ComplexMatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(json: ComplexMatrixJson) -> Result<Self> {
        let rows = json.0.len();
        let cols = json.0.first().map_or(0, |r| r.len());
        if rows == 0 || json.0.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows must be non-empty and of equal length"));
        }
        let entries: Vec<Complex64> =
            json.0.iter().flatten().map(|p| Complex64::new(p[0], p[1])).collect();
        Ok(ComplexMatrix::from_row_slice(rows, cols, &entries))
    }
}

impl TryFrom<ComplexMatrixJson> for SqueezeMatrix {
    type Error = Error;

    fn try_from(json: ComplexMatrixJson) -> Result<Self> {
        SqueezeMatrix::new(ComplexMatrix::try_from(json)?)
    }
}

impl From<SqueezeMatrix> for ComplexMatrixJson {
    fn from(s: SqueezeMatrix) -> Self {
        ComplexMatrixJson::from(&s.a)
    }
}

fn check_dims(a: &SqueezeMatrix, vs: &[&ComplexVector]) -> Result<()> {
    for v in vs {
        if v.len() != a.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch: matrix is {}x{}, vector has length {}",
                a.dim(),
                a.dim(),
                v.len()
            )));
        }
    }
    Ok(())
}

pub fn quadratic_form(a: &SqueezeMatrix, z: &ComplexVector) -> Result<Complex64> {
    check_dims(a, &[z])?;
    quad_form(&a.a, z)
}

/// `ln psi_{A,w}(z)` (any branch; only its exponential is meaningful).
pub fn gaussian_state_log(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    k: u32,
    z: &ComplexVector,
) -> Result<Complex64> {
    check_dims(a, &[w, z])?;
    let kf = k as f64;
    let d = z - w;
    let q = quad_form(&a.a, &d)?;
    Ok(kf * (q * 0.5 + hermitian(z, w) - 0.5 * norm_sqr(w) - 0.5 * norm_sqr(z)))
}

pub fn gaussian_state_eval(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    k: u32,
    z: &ComplexVector,
) -> Result<Complex64> {
    Ok(gaussian_state_log(a, w, k, z)?.exp())
}

/// The same state written as `e^{k Q_A(z-w)/2} e^{-k|z-w|^2/2} e^{i k Im(z w^*)}`.
pub fn gaussian_state_eval_phase_form(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    k: u32,
    z: &ComplexVector,
) -> Result<Complex64> {
    check_dims(a, &[w, z])?;
    let kf = k as f64;
    let d = z - w;
    let q = quad_form(&a.a, &d)?;
    let phase = hermitian(z, w).im;
    Ok((kf * (q * 0.5 - 0.5 * norm_sqr(&d) + Complex64::new(0.0, phase))).exp())
}

/// `|psi_{A,w}(z)|^2 = e^{k [Re Q_A(z-w) - |z-w|^2]}`.
pub fn husimi(a: &SqueezeMatrix, w: &ComplexVector, k: u32, z: &ComplexVector) -> Result<f64> {
    check_dims(a, &[w, z])?;
    let d = z - w;
    let q = quad_form(&a.a, &d)?;
    Ok((k as f64 * (q.re - norm_sqr(&d))).exp())
}

/// Right action of a unitary `g`: returns `(g A g^T, w g^{-1})`, so that
/// `psi_{g A g^T, w g^{-1}}(z) = psi_{A,w}(z g)`.
pub fn unitary_covariance(
    g: &ComplexMatrix,
    a: &SqueezeMatrix,
    w: &ComplexVector,
) -> Result<(SqueezeMatrix, ComplexVector)> {
    check_unitary(g)?;
    check_dims(a, &[w])?;
    if g.nrows() != a.dim() {
        return Err(Error::invalid("unitary and squeeze matrix dimensions differ"));
    }
    let moved = g * &a.a * g.transpose();
    // Exact symmetry; kappa is unitarily invariant.
    let moved = (&moved + moved.transpose()).map(|x| x * 0.5);
    let w_moved = right_mul(w, &g.adjoint());
    Ok((SqueezeMatrix { a: moved, kappa: a.kappa }, w_moved))
}

/// Quantum translation `(T_w f)(z) = e^{-k|w|^2/2} e^{k z w^*} f(z - w)`.
pub fn weyl_translate_eval<F>(f: F, w: &ComplexVector, k: u32, z: &ComplexVector) -> Complex64
where
    F: Fn(&ComplexVector) -> Complex64,
{
    let kf = k as f64;
    let shift = z - w;
    (kf * (hermitian(z, w) - 0.5 * norm_sqr(w))).exp() * f(&shift)
}

/// `<psi_{A,w}, psi_{B,v}> = int psi_{A,w} conj(psi_{B,v}) dL` over `C^N`, `N <= 2`.
pub fn bargmann_inner(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    b: &SqueezeMatrix,
    v: &ComplexVector,
    k: u32,
) -> Result<Complex64> {
    bargmann_inner_with_order(a, w, b, v, k, BARGMANN_INNER_ORDER)
}

/// [`bargmann_inner`] with an explicit Gauss-Hermite order.
///
/// The integrand is centred at `(w + v)/2` and the coordinates are scaled by
/// `(k sqrt(1 - kappa^2))^{-1/2}`, the geometric mean of the widths along the
/// most and least squeezed directions.
pub fn bargmann_inner_with_order(
    a: &SqueezeMatrix,
    w: &ComplexVector,
    b: &SqueezeMatrix,
    v: &ComplexVector,
    k: u32,
    order: usize,
) -> Result<Complex64> {
    let n = a.dim();
    if n > 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if b.dim() != n {
        return Err(Error::invalid("squeeze matrices of different dimensions"));
    }
    check_dims(a, &[w, v])?;
    let kf = k as f64;
    let kappa = a.kappa.max(b.kappa);
    let s = 1.0 / (kf * (1.0 - kappa * kappa).sqrt()).sqrt();
    let center: ComplexVector = (w + v).map(|x| x * 0.5);

    let point = |y: &[f64]| -> ComplexVector {
        ComplexVector::from_fn(n, |j, _| center[j] + Complex64::new(y[2 * j], y[2 * j + 1]))
    };
    // |integrand| <= e^{-k(1-kappa)|z - center|^2}.
    let decay = kf * (1.0 - kappa) * s * s;
    gaussian_tensor_integral(2 * n, s, decay, order, |y| {
        let z = point(y);
        Ok(gaussian_state_log(a, w, k, &z)? + gaussian_state_log(b, v, k, &z)?.conj())
    })
}
