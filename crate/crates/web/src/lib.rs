//! Browser bindings. The exported functions are thin wrappers around plain
//! Rust functions (`*_values`) so that the numerics can be tested natively.

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use spinsqueeze::propagation::compare_propagation;
use spinsqueeze::spin::{husimi_cp1, ket_mu, SpinState, SqueezeParameter};

fn squeeze(mu_re: f64, mu_im: f64) -> Result<SqueezeParameter, String> {
    SqueezeParameter::new(Complex64::new(mu_re, mu_im)).map_err(|e| e.to_string())
}

fn check_k(k: u32) -> Result<(), String> {
    // Keeps the dense propagation and the page responsive.
    if !(1..=2000).contains(&k) {
        return Err(format!("k must be in 1..=2000, got {k}"));
    }
    Ok(())
}

fn interleaved(s: &SpinState) -> Vec<f64> {
    s.coeffs().iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Coefficients of `|o,mu>` as `[re_0, im_0, re_1, im_1, ...]`.
pub fn ket_values(k: u32, mu_re: f64, mu_im: f64, normalize: bool) -> Result<Vec<f64>, String> {
    check_k(k)?;
    let mut s = ket_mu(k, squeeze(mu_re, mu_im)?).map_err(|e| e.to_string())?;
    if normalize {
        s = s.normalized().map_err(|e| e.to_string())?;
    }
    Ok(interleaved(&s))
}

/// Husimi function of the normalized `|o,mu>` on a `steps x steps` grid of
/// `[-half_width, half_width]^2`, rows by imaginary part (ascending).
pub fn husimi_values(k: u32, mu_re: f64, mu_im: f64, half_width: f64, steps: u32) -> Result<Vec<f64>, String> {
    check_k(k)?;
    if !(2..=400).contains(&steps) || !(half_width > 0.0 && half_width.is_finite()) {
        return Err("grid needs 2..=400 steps and a positive half width".into());
    }
    let s = ket_mu(k, squeeze(mu_re, mu_im)?)
        .and_then(|s| s.normalized())
        .map_err(|e| e.to_string())?;
    let h = 2.0 * half_width / (steps - 1) as f64;
    let axis: Vec<f64> = (0..steps).map(|i| -half_width + h * i as f64).collect();
    Ok(axis
        .iter()
        .flat_map(|&y| axis.iter().map(move |&x| (x, y)))
        .map(|(x, y)| husimi_cp1(&s, Complex64::new(x, y)))
        .collect())
}

/// Exact against semiclassical propagation of `|o,0>`.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Comparison {
    l2: f64,
    quantum: Vec<f64>,
    semiclassical: Vec<f64>,
}

#[wasm_bindgen]
impl Comparison {
    #[wasm_bindgen(getter)]
    pub fn l2_difference(&self) -> f64 {
        self.l2
    }

    /// `|c_n|` of the normalized exact state.
    #[wasm_bindgen(getter)]
    pub fn quantum(&self) -> Vec<f64> {
        self.quantum.clone()
    }

    /// `|c_n|` of the normalized prediction.
    #[wasm_bindgen(getter)]
    pub fn semiclassical(&self) -> Vec<f64> {
        self.semiclassical.clone()
    }
}

pub fn compare_values(k: u32, t: f64, a: f64, b: f64) -> Result<Comparison, String> {
    check_k(k)?;
    if k > 600 {
        return Err("compare is limited to k <= 600 in the browser".into());
    }
    let r = compare_propagation(k, t, a, b).map_err(|e| e.to_string())?;
    let mags = |s: &SpinState| s.coeffs().iter().map(|c| c.norm()).collect();
    Ok(Comparison { l2: r.l2_difference, quantum: mags(&r.lhs), semiclassical: mags(&r.rhs) })
}

#[wasm_bindgen]
pub fn ket_coefficients(k: u32, mu_re: f64, mu_im: f64, normalize: bool) -> Result<Vec<f64>, JsError> {
    ket_values(k, mu_re, mu_im, normalize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn husimi_grid(k: u32, mu_re: f64, mu_im: f64, half_width: f64, steps: u32) -> Result<Vec<f64>, JsError> {
    husimi_values(k, mu_re, mu_im, half_width, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare(k: u32, t: f64, a: f64, b: f64) -> Result<Comparison, JsError> {
    compare_values(k, t, a, b).map_err(|e| JsError::new(&e))
}
