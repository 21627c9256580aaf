//! File formats shared with the CLI and the plotting scripts.
//!
//! Complex scalars in JSON are `[re, im]`; matrices are arrays of rows.
//! CSV files always carry a header row and split complex numbers into
//! `re`/`im` columns. Floats are written with 17 significant digits.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{ComplexMatrix, ComplexVector};
use crate::propagation::PropagationResult;
use crate::spin::SpinState;

/// `{:.16e}`: round-trips every finite `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex_to_json(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_from_json(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_from_json(v: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|p| complex_from_json(*p)))
}

pub fn vector_to_json(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| complex_to_json(*z)).collect()
}

pub fn matrix_from_json(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    ComplexMatrix::try_from(crate::bargmann::ComplexMatrixJson(rows.to_vec()))
}

/// Parses `re,im` (or a bare real number).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| -> Result<f64> {
        p.parse::<f64>().map_err(|_| Error::invalid(format!("not a number: {p:?}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::invalid(format!("expected re,im, got {s:?}"))),
    }
}

/// JSON sidecar of a state CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSidecar {
    pub k: u32,
    pub normalized: bool,
}

pub fn write_state_csv<W: Write>(out: W, s: &SpinState) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"])?;
    for (n, c) in s.coeffs().iter().enumerate() {
        w.write_record([n.to_string(), fmt_f64(c.re), fmt_f64(c.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_state_csv<R: Read>(input: R) -> Result<SpinState> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "re", "im"] {
        return Err(Error::invalid("state CSV must have header n,re,im"));
    }
    let mut coeffs = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |j: usize| -> Result<&str> {
            rec.get(j).ok_or_else(|| Error::invalid(format!("row {i} is short")))
        };
        let n: usize = field(0)?.parse().map_err(|_| Error::invalid(format!("bad index in row {i}")))?;
        if n != i {
            return Err(Error::invalid(format!("row {i} has index {n}")));
        }
        let re: f64 = field(1)?.parse().map_err(|_| Error::invalid(format!("bad re in row {i}")))?;
        let im: f64 = field(2)?.parse().map_err(|_| Error::invalid(format!("bad im in row {i}")))?;
        coeffs.push(Complex64::new(re, im));
    }
    if coeffs.len() < 2 {
        return Err(Error::invalid("state CSV needs at least two rows"));
    }
    SpinState::new((coeffs.len() - 1) as u32, coeffs)
}

/// `path.json` next to `path.csv`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Writes the state CSV and its JSON sidecar.
pub fn write_state_files(csv_path: &Path, s: &SpinState, normalized: bool) -> Result<()> {
    let mut buf = Vec::new();
    write_state_csv(&mut buf, s)?;
    fs::write(csv_path, buf)?;
    let side = StateSidecar { k: s.k(), normalized };
    fs::write(sidecar_path(csv_path), serde_json::to_string_pretty(&side)? + "\n")?;
    Ok(())
}

pub fn write_propagation_csv<W: Write>(out: W, res: &PropagationResult) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "re_mu", "im_mu", "re_nu", "im_nu", "delta"])?;
    for i in 0..res.times.len() {
        let mu = res.mu(i);
        let nu = res.nu_t[i];
        w.write_record([res.times[i], mu.re, mu.im, nu.re, nu.im, res.delta_t[i]].map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// One Husimi sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridValue {
    pub zeta: Complex64,
    pub value: f64,
}

pub fn write_grid_csv<W: Write>(out: W, values: &[GridValue]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re_zeta", "im_zeta", "value"])?;
    for v in values {
        w.write_record([v.zeta.re, v.zeta.im, v.value].map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}
