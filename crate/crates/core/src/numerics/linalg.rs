//! Small dense complex linear algebra.
//!
//! Vectors are stored as columns but represent the row vectors `z` of the
//! quadratic forms `z A z^T`; right multiplication `z g` of a row vector is
//! therefore `g^T z` on the stored column (see [`right_mul`]).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cvec(entries: &[Complex64]) -> ComplexVector {
    ComplexVector::from_column_slice(entries)
}

/// Builds a matrix from row-major entries.
pub fn cmat(rows: usize, cols: usize, entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// `z A z^T` for a row vector `z`.
pub fn quad_form(a: &ComplexMatrix, z: &ComplexVector) -> Result<Complex64> {
    if !a.is_square() || a.nrows() != z.len() {
        return Err(Error::invalid(format!(
            "quadratic form of a {}x{} matrix with a vector of length {}",
            a.nrows(),
            a.ncols(),
            z.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..z.len() {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..z.len() {
            row += a[(i, j)] * z[j];
        }
        acc += z[i] * row;
    }
    Ok(acc)
}

/// Bilinear (not Hermitian) pairing `z v^T`.
pub fn bilinear(z: &ComplexVector, v: &ComplexVector) -> Complex64 {
    z.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
}

/// Hermitian pairing `z \bar v^T`.
pub fn hermitian(z: &ComplexVector, v: &ComplexVector) -> Complex64 {
    z.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sqr(z: &ComplexVector) -> f64 {
    z.iter().map(|x| x.norm_sqr()).sum()
}

/// Row vector times matrix: `z g`.
pub fn right_mul(z: &ComplexVector, g: &ComplexMatrix) -> ComplexVector {
    g.transpose() * z
}

pub fn symmetry_defect(a: &ComplexMatrix) -> f64 {
    frobenius(&(a - a.transpose()))
}

pub fn hermiticity_defect(a: &ComplexMatrix) -> f64 {
    frobenius(&(a - a.adjoint()))
}

pub fn unitarity_defect(g: &ComplexMatrix) -> f64 {
    let n = g.nrows();
    frobenius(&(g.adjoint() * g - ComplexMatrix::identity(n, n)))
}

pub fn check_square(a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.is_square() && a.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )))
    }
}

pub fn check_symmetric(a: &ComplexMatrix) -> Result<()> {
    check_square(a, "symmetric matrix")?;
    if !all_finite(a) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let defect = symmetry_defect(a);
    if defect > 1e-12 * frobenius(a).max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::invalid(format!("matrix is not symmetric (defect {defect:e})")));
    }
    Ok(())
}

pub fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    check_square(a, "Hermitian matrix")?;
    if !all_finite(a) {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let defect = hermiticity_defect(a);
    if defect > 1e-12 * frobenius(a).max(f64::MIN_POSITIVE) && defect > 0.0 {
        return Err(Error::invalid(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    Ok(())
}

pub fn check_unitary(g: &ComplexMatrix) -> Result<()> {
    check_square(g, "unitary matrix")?;
    let defect = unitarity_defect(g);
    if !(defect <= 1e-12) {
        return Err(Error::invalid(format!("matrix is not unitary (defect {defect:e})")));
    }
    Ok(())
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues_jacobi(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = cs * arp - sn * arq;
                    a[(r, q)] = sn * arp + cs * arq;
                }
                for r in 0..n {
                    let apr = a[(p, r)];
                    let aqr = a[(q, r)];
                    a[(p, r)] = cs * apr - sn * aqr;
                    a[(q, r)] = sn * apr + cs * aqr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real symmetric embedding `[[Re H, -Im H], [Im H, Re H]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues_jacobi(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    let n = h.nrows();
    let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let x = h[(i, j)];
            emb[(i, j)] = x.re;
            emb[(i + n, j + n)] = x.re;
            emb[(i, j + n)] = -x.im;
            emb[(i + n, j)] = x.im;
        }
    }
    let ev = symmetric_eigenvalues_jacobi(&emb);
    Ok(ev.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}

/// Takagi values of a complex symmetric matrix, descending.
///
/// These are the square roots of the eigenvalues of `A* A`; the first one is
/// the Takagi radius `kappa(A)`.
pub fn takagi_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_symmetric(a)?;
    let gram = a.adjoint() * a;
    // Symmetrize against rounding before the Hermitian check.
    let gram = (&gram + gram.adjoint()).map(|x| x * 0.5);
    let mut values: Vec<f64> = hermitian_eigenvalues_jacobi(&gram)?
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    values.reverse();
    Ok(values)
}

pub fn takagi_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(takagi_values(a)?[0])
}

/// Spectral data of a Hermitian matrix, reusable for `exp(-i theta H)` at many `theta`.
#[derive(Debug, Clone)]
pub struct HermitianPropagator {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianPropagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        check_hermitian(h)?;
        let sym = (h + h.adjoint()).map(|x| x * 0.5);
        let eig = SymmetricEigen::new(sym);
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `exp(-i theta H)`.
    pub fn at(&self, theta: f64) -> ComplexMatrix {
        if theta == 0.0 {
            let n = self.eigenvalues.len();
            return ComplexMatrix::identity(n, n);
        }
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -theta * lambda);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * v.adjoint()
    }

    /// `exp(-i theta H) x` without forming the full matrix.
    pub fn apply(&self, theta: f64, x: &ComplexVector) -> ComplexVector {
        if theta == 0.0 {
            return x.clone();
        }
        let v = &self.eigenvectors;
        let mut coeffs = v.adjoint() * x;
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            coeffs[j] *= Complex64::from_polar(1.0, -theta * lambda);
        }
        v * coeffs
    }
}

/// `exp(-i theta H)` for Hermitian `H`, via eigendecomposition.
pub fn hermitian_propagator(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    Ok(HermitianPropagator::new(h)?.at(theta))
}

/// Square root on the principal branch; callers rely on it for right half-plane arguments.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// A unitary matrix whose first column is the unit vector `w`; the remaining
/// columns span the Hermitian complement of `w`.
///
/// With `alpha = arg(w_1)` and `v = e^{-i alpha} w`, the Householder reflector
/// `R = I - 2 u u^* / |u|^2`, `u = e_1 - v`, sends `e_1` to `v`; the returned
/// matrix is `R diag(e^{i alpha}, 1, ..., 1)`. For `w = e_1` this is the identity.
pub fn unitary_completion(w: &ComplexVector) -> Result<ComplexMatrix> {
    let n = w.len();
    if n == 0 {
        return Err(Error::invalid("empty vector"));
    }
    let norm = norm_sqr(w).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("vector must have unit length, got {norm}")));
    }
    let alpha = if w[0].norm() > 0.0 { w[0].arg() } else { 0.0 };
    let phase = Complex64::from_polar(1.0, alpha);
    let v = w.map(|x| x * phase.conj());
    let mut u = -v.clone();
    u[0] += Complex64::new(1.0, 0.0);
    let u_norm_sqr = norm_sqr(&u);
    let mut r = ComplexMatrix::identity(n, n);
    if u_norm_sqr > 1e-300 {
        r -= (&u * u.adjoint()).map(|x| x * (2.0 / u_norm_sqr));
    }
    for i in 0..n {
        r[(i, 0)] *= phase;
    }
    Ok(r)
}
