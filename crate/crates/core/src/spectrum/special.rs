//! Terminating Gauss series and the complex log-gamma function.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sparse::C64;

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// `F(−n, −N; c; z) = Σ_k (−n)_k (−N)_k / (c)_k · z^k / k!`, a polynomial of
/// degree `min(n, N)`.
pub fn hypergeom_terminating(n: u32, big_n: u32, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::InvalidHypergeometric(c));
    }
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..n.min(big_n) {
        let k = k as f64;
        term *= (k - n as f64) * (k - big_n as f64) / ((c + k) * (k + 1.0)) * z;
        acc.add(term);
    }
    Ok(acc.value())
}

// B_{2k} / (2k(2k−1)) for k = 1..=10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Real part at which the asymptotic series is used directly.
const SHIFT_TO: f64 = 16.0;

/// Principal branch of `log Γ(z)`, continuous in the plane cut along the
/// non-positive real axis, with `log Γ(z+1) = log Γ(z) + log z`.
pub fn complex_log_gamma(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < SHIFT_TO {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    let main = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    Ok(main - shift)
}
