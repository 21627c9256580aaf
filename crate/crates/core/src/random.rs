//! Seeded samplers for test data: squeeze matrices, unitaries, sphere points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bargmann::SqueezeMatrix;
use crate::numerics::linalg::{hermitian, norm_sqr, takagi_radius, ComplexMatrix, ComplexVector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniform point of the unit sphere in `C^n`.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(n, |_, _| complex_normal(rng));
        let norm = norm_sqr(&v).sqrt();
        if norm > 1e-6 {
            return v.map(|x| x / norm);
        }
    }
}

/// Uniform point of the disk `|mu| < radius`.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random symmetric matrix with Takagi radius uniform in `[0, kappa_max)`.
pub fn squeeze_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, kappa_max: f64) -> SqueezeMatrix {
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng));
        let sym = (&g + g.transpose()).map(|x| x * 0.5);
        let kappa = takagi_radius(&sym).unwrap_or(0.0);
        if kappa < 1e-6 {
            continue;
        }
        let target = kappa_max * rng.random::<f64>();
        if let Ok(a) = SqueezeMatrix::new(sym.map(|x| x * (target / kappa))) {
            return a;
        }
    }
}

/// Haar-random unitary via Gram-Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = ComplexVector::from_fn(n, |_, _| complex_normal(rng));
        for _ in 0..2 {
            for q in &cols {
                let proj = hermitian(&v, q);
                v -= q.map(|x| x * proj);
            }
        }
        let norm = norm_sqr(&v).sqrt();
        if norm > 1e-6 {
            cols.push(v.map(|x| x / norm));
        }
    }
    ComplexMatrix::from_columns(&cols)
}

/// Uniform element of SU(2), `[[a, -conj(b)], [b, conj(a)]]`.
pub fn special_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let p = sphere_point(rng, 2);
    let (a, b) = (p[0], p[1]);
    ComplexMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Random vector Hermitian-orthogonal to `w` with `|eta| <= radius`.
pub fn horizontal_vector<R: Rng + ?Sized>(rng: &mut R, w: &ComplexVector, radius: f64) -> ComplexVector {
    let mut v = ComplexVector::from_fn(w.len(), |_, _| complex_normal(rng));
    let proj = hermitian(&v, w);
    v -= w.map(|x| x * proj);
    let norm = norm_sqr(&v).sqrt().max(1e-300);
    let target = radius * rng.random::<f64>();
    v.map(|x| x * (target / norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::unitarity_defect;

    #[test]
    fn samplers_respect_their_constraints() {
        let mut rng = seeded(7);
        for n in 1..4 {
            let a = squeeze_matrix(&mut rng, n, 0.9);
            assert!(a.kappa() < 0.9);
            let u = unitary(&mut rng, n);
            assert!(unitarity_defect(&u) < 1e-13);
            let w = sphere_point(&mut rng, n);
            assert!((norm_sqr(&w) - 1.0).abs() < 1e-14);
        }
        let g = special_unitary_2(&mut rng);
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        assert!((det - 1.0).norm() < 1e-14);
        let w = sphere_point(&mut rng, 3);
        let eta = horizontal_vector(&mut rng, &w, 2.0);
        assert!(hermitian(&eta, &w).norm() < 1e-14 && norm_sqr(&eta) <= 4.0);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = squeeze_matrix(&mut seeded(3), 2, 0.5);
        let b = squeeze_matrix(&mut seeded(3), 2, 0.5);
        assert_eq!(a, b);
    }
}
