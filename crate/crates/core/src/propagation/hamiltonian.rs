//! Polynomial Hamiltonians in `l_1, l_2, l_3` on `CP^1`, their canonical lifts
//! to `C^2`, Hamilton flows and Hessian blocks at a critical point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{hermitian, norm_sqr, ComplexVector};
use crate::numerics::ode::{rk4_solve, Trajectory};

/// Maximum total degree of a monomial.
pub const MAX_DEGREE: u32 = 4;

/// Finite-difference step for [`hessian_blocks`].
pub const HESSIAN_STEP: f64 = 1e-5;

/// Tolerance on `|h(o)|` and `|grad h(o)|` in [`hessian_blocks`].
pub const CRITICAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    pub exps: [u32; 3],
}

/// `h = sum coeff * l_1^{e_1} l_2^{e_2} l_3^{e_3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct HamiltonianSpec {
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawSpec {
    terms: Vec<Term>,
}

impl TryFrom<RawSpec> for HamiltonianSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        HamiltonianSpec::new(raw.terms)
    }
}

impl HamiltonianSpec {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if !t.coeff.is_finite() {
                return Err(Error::invalid("Hamiltonian coefficients must be finite"));
            }
            let degree: u32 = t.exps.iter().sum();
            if degree > MAX_DEGREE {
                return Err(Error::invalid(format!("monomial degree {degree} exceeds {MAX_DEGREE}")));
            }
        }
        Ok(Self { terms })
    }

    /// `a^2 l_1^2 - b^2 l_2^2`.
    pub fn hyperbolic(a: f64, b: f64) -> Self {
        Self {
            terms: vec![Term { coeff: a * a, exps: [2, 0, 0] }, Term { coeff: -b * b, exps: [0, 2, 0] }],
        }
    }

    /// `l_j` for `j` in `1..=3`.
    pub fn coordinate(j: usize) -> Result<Self> {
        if !(1..=3).contains(&j) {
            return Err(Error::invalid(format!("coordinate index must be 1, 2 or 3, got {j}")));
        }
        let mut exps = [0; 3];
        exps[j - 1] = 1;
        Ok(Self { terms: vec![Term { coeff: 1.0, exps }] })
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: vec![Term { coeff: c, exps: [0, 0, 0] }] }
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `h` as a polynomial in `l`.
    pub fn eval(&self, l: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * l[0].powi(t.exps[0] as i32) * l[1].powi(t.exps[1] as i32) * l[2].powi(t.exps[2] as i32))
            .sum()
    }

    /// `(dh/dl_1, dh/dl_2, dh/dl_3)`.
    pub fn gradient(&self, l: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for t in &self.terms {
            for (j, gj) in g.iter_mut().enumerate() {
                if t.exps[j] == 0 {
                    continue;
                }
                let mut v = t.coeff * t.exps[j] as f64;
                for (i, &e) in t.exps.iter().enumerate() {
                    let e = if i == j { e - 1 } else { e };
                    v *= l[i].powi(e as i32);
                }
                *gj += v;
            }
        }
        g
    }
}

/// `(L_1, L_2, L_3) = (Re(z_1 conj z_2), Im(z_1 conj z_2), (|z_1|^2 - |z_2|^2)/2)`.
pub fn moment_map(z: &ComplexVector) -> [f64; 3] {
    let p = z[0] * z[1].conj();
    [p.re, p.im, 0.5 * (z[0].norm_sqr() - z[1].norm_sqr())]
}

fn check_c2(z: &ComplexVector) -> Result<()> {
    if z.len() != 2 {
        return Err(Error::invalid("lifts are defined on C^2"));
    }
    Ok(())
}

/// `H(z) = |z|^2 h(L(z)/|z|^2)`.
pub fn classical_lift_eval(h: &HamiltonianSpec, z: &ComplexVector) -> Result<f64> {
    check_c2(z)?;
    let r2 = norm_sqr(z);
    if r2 == 0.0 {
        return Err(Error::invalid("the lift is not defined at z = 0"));
    }
    let l = moment_map(z).map(|x| x / r2);
    Ok(r2 * h.eval(l))
}

/// `dH/d conj(z)`.
pub fn lift_gradient_bar(h: &HamiltonianSpec, z: &ComplexVector) -> Result<ComplexVector> {
    check_c2(z)?;
    let r2 = norm_sqr(z);
    if r2 == 0.0 {
        return Err(Error::invalid("the lift is not defined at z = 0"));
    }
    let l = moment_map(z).map(|x| x / r2);
    let p = h.eval(l);
    let g = h.gradient(l);
    let half = 0.5;
    let i = Complex64::new(0.0, 1.0);
    let dl = [
        [z[1] * half, z[0] * half],
        [i * z[1] * half, -i * z[0] * half],
        [z[0] * half, -z[1] * half],
    ];
    let mut out = z.map(|x| x * p);
    for j in 0..3 {
        for c in 0..2 {
            out[c] += (dl[j][c] - z[c] * l[j]) * g[j];
        }
    }
    Ok(out)
}

/// Hamilton field `dz/dt = i dH/d conj(z)`. With this sign the flow of `L_3`
/// is `(z_1 e^{it/2}, z_2 e^{-it/2})`, matching `e^{-ikt L3^}` on coherent states.
pub fn hamilton_field(h: &HamiltonianSpec, z: &ComplexVector) -> Result<ComplexVector> {
    Ok(lift_gradient_bar(h, z)?.map(|x| x * Complex64::new(0.0, 1.0)))
}

pub fn hamilton_flow(h: &HamiltonianSpec, w0: &ComplexVector, t: f64, step: f64) -> Result<Trajectory> {
    check_c2(w0)?;
    let norm = norm_sqr(w0).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("initial point must lie on the unit sphere, |w| = {norm}")));
    }
    let field = |_t: f64, y: &[Complex64]| -> Vec<Complex64> {
        let z = ComplexVector::from_column_slice(y);
        match hamilton_field(h, &z) {
            Ok(v) => v.iter().copied().collect(),
            Err(_) => vec![Complex64::new(f64::NAN, 0.0); y.len()],
        }
    };
    rk4_solve(field, w0.as_slice(), t, step)
}

/// Derivative of `ys` at index `i` from the Lagrange interpolant through the
/// (up to) five nearest samples.
fn lagrange_derivative(ts: &[f64], ys: &[Vec<Complex64>], i: usize) -> Vec<Complex64> {
    let n = ts.len();
    let width = n.min(5);
    let start = i.saturating_sub(width / 2).min(n - width);
    let idx: Vec<usize> = (start..start + width).collect();
    let dim = ys[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let x = ts[i];
    for &j in &idx {
        // d/dx of the j-th basis polynomial at x.
        let mut deriv = 0.0;
        for &m in &idx {
            if m == j {
                continue;
            }
            let mut term = 1.0 / (ts[j] - ts[m]);
            for &l in &idx {
                if l != j && l != m {
                    term *= (x - ts[l]) / (ts[j] - ts[l]);
                }
            }
            deriv += term;
        }
        for (o, y) in out.iter_mut().zip(&ys[j]) {
            *o += y * deriv;
        }
    }
    out
}

/// `delta_t = -t H(w(0)) + (i/2) int_0^t (w conj(w') - w' conj(w)) ds`.
///
/// `w'` is taken from the sampled trajectory (finite differences), so the
/// formula can also be applied to trajectories that are not flow lines.
pub fn delta_phase(trajectory: &Trajectory, h: &HamiltonianSpec) -> Result<Vec<f64>> {
    let ts = &trajectory.times;
    let ys = &trajectory.states;
    if ts.is_empty() {
        return Err(Error::invalid("empty trajectory"));
    }
    let h0 = classical_lift_eval(h, &ComplexVector::from_column_slice(&ys[0]))?;
    if ts.len() == 1 {
        return Ok(vec![0.0]);
    }
    let integrand: Vec<Complex64> = (0..ts.len())
        .map(|i| {
            let w = ComplexVector::from_column_slice(&ys[i]);
            let dw = ComplexVector::from_vec(lagrange_derivative(ts, ys, i));
            (hermitian(&w, &dw) - hermitian(&dw, &w)) * Complex64::new(0.0, 0.5)
        })
        .collect();
    let mut out = Vec::with_capacity(ts.len());
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(0.0);
    for i in 1..ts.len() {
        acc += (integrand[i] + integrand[i - 1]) * (0.5 * (ts[i] - ts[i - 1]));
        if acc.im.abs() > 1e-10 {
            return Err(Error::NumericalInconsistency(format!(
                "phase integral has imaginary part {:e} at t = {}",
                acc.im, ts[i]
            )));
        }
        out.push(-ts[i] * h0 + acc.re);
    }
    Ok(out)
}

/// `h` in the chart `zeta -> (1, zeta)/sqrt(1 + |zeta|^2)` around `o = pi(1, 0)`.
pub fn chart_eval(h: &HamiltonianSpec, x: f64, y: f64) -> f64 {
    let zeta = Complex64::new(x, y);
    let r = (1.0 + zeta.norm_sqr()).sqrt();
    let z = ComplexVector::from_column_slice(&[Complex64::new(1.0 / r, 0.0), zeta / r]);
    classical_lift_eval(h, &z).unwrap_or(f64::NAN)
}

/// `R = (1/2) d^2h/dzeta^2` and `S = d^2h/dzeta d conj(zeta)` at `o`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianBlocks {
    pub r: Complex64,
    pub s: f64,
}

impl HessianBlocks {
    /// Real Hessian `[[h_xx, h_xy], [h_xy, h_yy]]` with these blocks.
    pub fn real_hessian(&self) -> [[f64; 2]; 2] {
        let hxx = 4.0 * self.r.re + 2.0 * self.s;
        let hyy = -4.0 * self.r.re + 2.0 * self.s;
        let hxy = -4.0 * self.r.im;
        [[hxx, hxy], [hxy, hyy]]
    }

    pub fn from_real_hessian(hxx: f64, hyy: f64, hxy: f64) -> Self {
        let r = Complex64::new(hxx - hyy, -2.0 * hxy) * 0.125;
        Self { r, s: 0.25 * (hxx + hyy) }
    }
}

/// Hessian blocks of `h` at `o = pi(1, 0)`, by central differences in the chart.
pub fn hessian_blocks(h: &HamiltonianSpec) -> Result<HessianBlocks> {
    let d = HESSIAN_STEP;
    let f = |x: f64, y: f64| chart_eval(h, x, y);
    let f0 = f(0.0, 0.0);
    let gx = (f(d, 0.0) - f(-d, 0.0)) / (2.0 * d);
    let gy = (f(0.0, d) - f(0.0, -d)) / (2.0 * d);
    if f0.abs() > CRITICAL_TOL || gx.hypot(gy) > CRITICAL_TOL {
        return Err(Error::PreconditionViolation(format!(
            "o = pi(1,0) must be a critical point with h(o) = 0; got h = {f0:e}, |grad h| = {:e}",
            gx.hypot(gy)
        )));
    }
    let hxx = (f(d, 0.0) - 2.0 * f0 + f(-d, 0.0)) / (d * d);
    let hyy = (f(0.0, d) - 2.0 * f0 + f(0.0, -d)) / (d * d);
    let hxy = (f(d, d) - f(d, -d) - f(-d, d) + f(-d, -d)) / (4.0 * d * d);
    Ok(HessianBlocks::from_real_hessian(hxx, hyy, hxy))
}

/// Real `4 x 4` Hessian of the lift at `w` in coordinates
/// `(Re z_1, Im z_1, Re z_2, Im z_2)`, by central differences with step `d`.
pub fn lift_real_hessian(h: &HamiltonianSpec, w: &ComplexVector, d: f64) -> Result<[[f64; 4]; 4]> {
    check_c2(w)?;
    let base: Vec<f64> = vec![w[0].re, w[0].im, w[1].re, w[1].im];
    let eval = |x: &[f64]| -> Result<f64> {
        let z = ComplexVector::from_column_slice(&[Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])]);
        classical_lift_eval(h, &z)
    };
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut x = base.clone();
            let mut at = |si: f64, sj: f64| -> Result<f64> {
                x.copy_from_slice(&base);
                x[i] += si * d;
                x[j] += sj * d;
                eval(&x)
            };
            let v = if i == j {
                (at(1.0, 0.0)? - 2.0 * at(0.0, 0.0)? + at(-1.0, 0.0)?) / (d * d)
            } else {
                (at(1.0, 1.0)? - at(1.0, -1.0)? - at(-1.0, 1.0)? + at(-1.0, -1.0)?) / (4.0 * d * d)
            };
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Ok(out)
}
