//! Spin operators `L^_j`, symmetrized quantization and exact propagation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linalg::{ComplexMatrix, HermitianPropagator};
use crate::spin::SpinState;

use super::hamiltonian::HamiltonianSpec;

/// `(L^_1, L^_2, L^_3)` on degree-`k` polynomials, scaled so that
/// `[L^_1, L^_2] = (i/k) L^_3`.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub l: [ComplexMatrix; 3],
}

impl SpinOperators {
    pub fn new(k: u32) -> Result<Self> {
        Self::with_l3_scale(k, 1.0)
    }

    /// As [`SpinOperators::new`] with `L^_3` multiplied by `scale`; only
    /// meaningful for checking that the commutator test detects a wrong scale.
    pub fn with_l3_scale(k: u32, scale: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let size = k as usize + 1;
        let kf = k as f64;
        let inv = 1.0 / (2.0 * kf);
        let mut l1 = ComplexMatrix::zeros(size, size);
        let mut l2 = ComplexMatrix::zeros(size, size);
        let mut l3 = ComplexMatrix::zeros(size, size);
        for n in 0..size {
            let nf = n as f64;
            if n > 0 {
                // <n-1| z_2 d_1 |n>
                let down = (nf * (kf - nf + 1.0)).sqrt() * inv;
                l1[(n - 1, n)] = Complex64::new(down, 0.0);
                l2[(n - 1, n)] = Complex64::new(0.0, down);
            }
            if n + 1 < size {
                // <n+1| z_1 d_2 |n>
                let up = ((kf - nf) * (nf + 1.0)).sqrt() * inv;
                l1[(n + 1, n)] = Complex64::new(up, 0.0);
                l2[(n + 1, n)] = Complex64::new(0.0, -up);
            }
            l3[(n, n)] = Complex64::new(scale * (nf - kf / 2.0) / kf, 0.0);
        }
        Ok(Self { l: [l1, l2, l3] })
    }

    pub fn k(&self) -> u32 {
        (self.l[0].nrows() - 1) as u32
    }

    /// `|| [L^_1, L^_2] - (i/k) L^_3 ||_F`.
    pub fn commutator_residual(&self) -> f64 {
        let [l1, l2, l3] = &self.l;
        let k = self.k() as f64;
        let comm = l1 * l2 - l2 * l1;
        let target = l3.map(|x| x * Complex64::new(0.0, 1.0 / k));
        crate::numerics::linalg::frobenius(&(comm - target))
    }
}

pub fn spin_operators(k: u32) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    let [l1, l2, l3] = SpinOperators::new(k)?.l;
    Ok((l1, l2, l3))
}

/// Distinct orderings of a multiset of factor indices.
fn orderings(factors: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = factors.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // Next lexicographic permutation.
    loop {
        let n = sorted.len();
        let Some(i) = (1..n).rev().find(|&i| sorted[i - 1] < sorted[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| sorted[j] > sorted[i - 1]).unwrap_or(i);
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
    out
}

/// Quantize with the operators of [`SpinOperators`]: every monomial becomes the
/// average over all orderings of the corresponding operator product.
pub fn quantize_with(h: &HamiltonianSpec, ops: &SpinOperators) -> ComplexMatrix {
    let size = ops.l[0].nrows();
    let mut out = ComplexMatrix::zeros(size, size);
    for term in h.terms() {
        let factors: Vec<usize> =
            (0..3).flat_map(|j| std::iter::repeat_n(j, term.exps[j] as usize)).collect();
        if factors.is_empty() {
            for i in 0..size {
                out[(i, i)] += term.coeff;
            }
            continue;
        }
        let orders = orderings(&factors);
        let weight = term.coeff / orders.len() as f64;
        for order in orders {
            let mut prod = ops.l[order[0]].clone();
            for &f in &order[1..] {
                prod *= &ops.l[f];
            }
            out += prod.map(|x| x * weight);
        }
    }
    (&out + out.adjoint()).map(|x| x * 0.5)
}

pub fn quantize(h: &HamiltonianSpec, k: u32) -> Result<ComplexMatrix> {
    Ok(quantize_with(h, &SpinOperators::new(k)?))
}

/// `e^{-ikt h^}` for repeated application at several times.
#[derive(Debug, Clone)]
pub struct QuantumPropagator {
    k: u32,
    spectral: HermitianPropagator,
}

impl QuantumPropagator {
    pub fn new(h: &HamiltonianSpec, k: u32) -> Result<Self> {
        Ok(Self { k, spectral: HermitianPropagator::new(&quantize(h, k)?)? })
    }

    pub fn apply(&self, s: &SpinState, t: f64) -> Result<SpinState> {
        if s.k() != self.k {
            return Err(Error::invalid(format!("state has k = {}, propagator k = {}", s.k(), self.k)));
        }
        let out = self.spectral.apply(self.k as f64 * t, &s.to_vector());
        SpinState::from_vector(self.k, &out)
    }
}

pub fn quantum_propagate(s: &SpinState, h: &HamiltonianSpec, t: f64) -> Result<SpinState> {
    QuantumPropagator::new(h, s.k())?.apply(s, t)
}
