//! Log-space factorials and binomials.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const DIRECT_LIMIT: u64 = 32;

/// `ln Gamma(x + 1) - [(x + 1/2) ln x - x + ln(2 pi)/2]`, valid for `x >= 10`.
pub fn stirling_remainder(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < DIRECT_LIMIT {
        let mut p = 1.0f64;
        for i in 2..=n {
            p *= i as f64;
        }
        p.ln()
    } else {
        let x = n as f64;
        (x + 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + stirling_remainder(x)
    }
}

/// `ln C(k, n)`.
pub fn log_binomial(k: u64, n: u64) -> Result<f64> {
    if n > k {
        return Err(Error::invalid(format!("binomial C({k}, {n}) with n > k")));
    }
    let small = n.min(k - n);
    let large = k - small;
    if small == 0 {
        return Ok(0.0);
    }
    if small <= 64 {
        // ln C(k, m) = sum_i ln((k - i) / (i + 1)); every term is positive.
        let kf = k as f64;
        let acc = (0..small)
            .map(|i| {
                let i = i as f64;
                ((kf - 2.0 * i - 1.0) / (i + 1.0)).ln_1p()
            })
            .sum();
        return Ok(acc);
    }
    let (kf, sf, lf) = (k as f64, small as f64, large as f64);
    let main = sf * (lf / sf).ln_1p() + lf * (sf / lf).ln_1p();
    let half = 0.5 * (kf / (2.0 * PI * sf * lf)).ln();
    Ok(main + half + stirling_remainder(kf) - stirling_remainder(sf) - stirling_remainder(lf))
}

/// `ln(e^{-k} k^k / k!)`, the peak weight of a Poisson distribution with mean `k`.
pub fn ln_poisson_mode(k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let x = k as f64;
    if k < DIRECT_LIMIT {
        x * x.ln() - x - ln_factorial(k)
    } else {
        -0.5 * (2.0 * PI * x).ln() - stirling_remainder(x)
    }
}
