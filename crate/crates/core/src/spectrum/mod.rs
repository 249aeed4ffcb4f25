//! Bound spectra, radial eigenfunctions, and the partial-wave S-matrix.
//!
//! Units are `ħ = m = 1`. With `κ_n = |q|λ/n` and `s = √(1+κ_n²)` the two bound
//! branches are `E_I = (1 − s)/λ²` and `E_II = (1 + s)/λ²`, and the radial
//! decay base is `Ω_n = 1/(κ_n + s)`.

mod onshell;
mod radial;
mod special;

pub use onshell::{onshell_residuals, OnShellResiduals};
pub use radial::{
    build_eigenstate, diagonalize_radial, eigen_residual, radial_eigenfunction, required_nmax, spectrum_rows,
    tail_estimate, Branch, EigenState, NmaxPolicy, RadialEigenfunction, SpectrumRow, DEFAULT_TAIL_TOLERANCE,
    MAX_AUTO_NMAX,
};
pub use special::{complex_log_gamma, hypergeom_terminating};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::LengthScale;
use crate::sparse::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub n: u32,
    pub kappa_n: f64,
    #[serde(rename = "E_I")]
    pub e_i: f64,
    #[serde(rename = "E_II")]
    pub e_ii: f64,
    #[serde(rename = "Omega_n")]
    pub omega_n: f64,
}

/// `(κ, s − 1, Ω)` for a given `κ ≥ 0`, without cancellation at small `κ`.
fn kappa_terms(kappa: f64) -> (f64, f64) {
    let s = (1.0 + kappa * kappa).sqrt();
    let s_minus_1 = kappa * kappa / (1.0 + s);
    (s_minus_1, 1.0 / (kappa + s))
}

/// Both bound energies of principal number `n`. `κ_n` uses `|q|`: branch I
/// binds for `q > 0`, branch II for `q < 0`, with the same `|κ_n|`.
pub fn bound_energies(lambda: LengthScale, q: f64, n: u32) -> Result<SpectrumResult> {
    if n == 0 {
        return Err(Error::ZeroPrincipal);
    }
    let l = lambda.value();
    let kappa = q.abs() * l / n as f64;
    let (s_minus_1, omega) = kappa_terms(kappa);
    Ok(SpectrumResult {
        n,
        kappa_n: kappa,
        e_i: if s_minus_1 == 0.0 { 0.0 } else { -s_minus_1 / (l * l) },
        e_ii: (2.0 + s_minus_1) / (l * l),
        omega_n: omega,
    })
}

/// `q²/(λ²E² − 2E)`, which equals `n²` on the bound spectrum.
pub fn casimir_quantization(lambda: LengthScale, q: f64, energy: f64) -> Result<f64> {
    let l = lambda.value();
    let d = l * l * energy * energy - 2.0 * energy;
    if d <= 0.0 {
        return Err(Error::EnergyOutOfWindow {
            energy,
            window: "E < 0 or E > 2/lambda^2",
        });
    }
    Ok(q * q / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub lambda: f64,
    /// `(E_I + q²/2n²)/λ²`.
    pub coefficient: f64,
    /// The reference constant `q⁴/(24n⁴)`.
    pub reference: f64,
    pub rel_deviation: f64,
}

/// Compares the first correction of `E_I` in `λ²` with `q⁴/(24n⁴)`.
pub fn commutative_limit(lambdas: &[f64], q: f64, n: u32) -> Result<Vec<SeriesPoint>> {
    let reference = q.powi(4) / (24.0 * (n as f64).powi(4));
    lambdas
        .iter()
        .map(|&l| {
            let e = bound_energies(LengthScale::new(l)?, q, n)?.e_i;
            let coefficient = (e + q * q / (2.0 * (n * n) as f64)) / (l * l);
            Ok(SeriesPoint {
                lambda: l,
                coefficient,
                reference,
                rel_deviation: (coefficient - reference).abs() / reference.abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    SO4,
    SO31,
    E3,
}

/// Sign of `λ²E² − 2E` with an absolute dead band of `1e−12`.
pub fn classify_symmetry(lambda: LengthScale, energy: f64) -> Symmetry {
    let l = lambda.value();
    let d = l * l * energy * energy - 2.0 * energy;
    if d > 1e-12 {
        Symmetry::SO4
    } else if d < -1e-12 {
        Symmetry::SO31
    } else {
        Symmetry::E3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringParams {
    pub energy: f64,
    pub p: f64,
    pub tau: f64,
}

fn scattering_window(lambda: LengthScale, energy: f64) -> Result<f64> {
    let l = lambda.value();
    let p2 = 2.0 * energy - l * l * energy * energy;
    if !(energy > 0.0 && energy < 2.0 / (l * l)) || p2 <= 0.0 {
        return Err(Error::EnergyOutOfWindow {
            energy,
            window: "scattering (0, 2/lambda^2)",
        });
    }
    Ok(p2)
}

pub fn scattering_params(lambda: LengthScale, q: f64, energy: f64) -> Result<ScatteringParams> {
    let p2 = scattering_window(lambda, energy)?;
    Ok(ScatteringParams {
        energy,
        p: p2.sqrt(),
        tau: 1.0 + q * q / p2,
    })
}

/// `τ = 1 + q²/(2E − λ²E²)`.
pub fn scattering_tau(lambda: LengthScale, q: f64, energy: f64) -> Result<f64> {
    scattering_params(lambda, q, energy).map(|s| s.tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SMatrixEntry {
    pub j: u32,
    pub energy: f64,
    #[serde(skip)]
    pub value: C64,
}

/// `S_j(E) = Γ(j+1 − iq/p)/Γ(j+1 + iq/p)`, real energies inside the window only.
pub fn smatrix(lambda: LengthScale, q: f64, j: u32, energy: f64) -> Result<SMatrixEntry> {
    let p = scattering_params(lambda, q, energy)?.p;
    let a = C64::new(j as f64 + 1.0, -q / p);
    let value = (complex_log_gamma(a)? - complex_log_gamma(a.conj())?).exp();
    Ok(SMatrixEntry { j, energy, value })
}

/// Energies where `j + 1 − iq/p = −k`, `k = 0..count`: both roots of
/// `2E − λ²E² = −q²/n²` with `n = j + 1 + k`, lower root first.
pub fn smatrix_poles(lambda: LengthScale, q: f64, j: u32, count: u32) -> Vec<f64> {
    let l = lambda.value();
    let mut out = Vec::with_capacity(2 * count as usize);
    for k in 0..count {
        let n = (j + 1 + k) as f64;
        let c = q * q / (n * n);
        // λ²E² − 2E − c = 0
        let disc = (1.0 + l * l * c).sqrt();
        let low = -c / (1.0 + disc);
        out.push(low);
        out.push((1.0 + disc) / (l * l));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(l: f64) -> LengthScale {
        LengthScale::new(l).unwrap()
    }

    #[test]
    fn free_edges() {
        let r = bound_energies(lam(0.3), 0.0, 2).unwrap();
        assert_eq!(r.e_i, 0.0);
        assert!((r.e_ii - 2.0 / 0.09).abs() < 1e-12);
        assert!(bound_energies(lam(0.3), 1.0, 0).is_err());
    }

    #[test]
    fn reference_ground_state() {
        // 30-digit values: E_I = −0.49875621120890270…, Ω_1 = 0.90498756211208902…
        let r = bound_energies(lam(0.1), 1.0, 1).unwrap();
        assert!((r.e_i + 0.498_756_211_208_902_7).abs() < 1e-13, "{}", r.e_i);
        assert!((r.omega_n - 0.904_987_562_112_089_0).abs() < 1e-13, "{}", r.omega_n);
    }

    #[test]
    fn omega_matches_defining_ratio() {
        for kappa in [0.05, 0.3, 1.0, 4.0] {
            let s: f64 = (1.0 + kappa * kappa as f64).sqrt();
            let ratio = (kappa - s + 1.0) / (kappa + s - 1.0);
            let (_, omega) = kappa_terms(kappa);
            assert!((omega - ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn casimir_inverts_spectrum() {
        for n in 1..6 {
            let r = bound_energies(lam(0.4), 1.3, n).unwrap();
            for e in [r.e_i, r.e_ii] {
                let c = casimir_quantization(lam(0.4), 1.3, e).unwrap();
                assert!((c - (n * n) as f64).abs() < 1e-10 * (n * n) as f64);
            }
        }
        assert!(casimir_quantization(lam(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn classification() {
        let l = lam(0.5);
        assert_eq!(classify_symmetry(l, -1.0), Symmetry::SO4);
        assert_eq!(classify_symmetry(l, 4.0), Symmetry::SO31);
        assert_eq!(classify_symmetry(l, 8.0), Symmetry::E3);
        assert_eq!(classify_symmetry(l, 0.0), Symmetry::E3);
        assert_eq!(classify_symmetry(l, 9.0), Symmetry::SO4);
    }

    #[test]
    fn smatrix_basics() {
        let l = lam(0.5);
        let s = smatrix(l, 0.0, 2, 1.0).unwrap();
        assert!((s.value - C64::new(1.0, 0.0)).norm() < 1e-15);
        let a = smatrix(l, 1.0, 1, 1.5).unwrap().value;
        let b = smatrix(l, 1.0, 1, 8.0 - 1.5).unwrap().value;
        assert!((a - b).norm() < 1e-12);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert!(smatrix(l, 1.0, 0, 8.0).is_err());
        assert!(smatrix(l, 1.0, 0, -0.1).is_err());
    }

    #[test]
    fn poles_are_bound_energies() {
        let l = lam(0.2);
        let poles = smatrix_poles(l, 1.0, 1, 3);
        assert_eq!(poles.len(), 6);
        for k in 0..3 {
            let r = bound_energies(l, 1.0, 2 + k).unwrap();
            assert!((poles[2 * k as usize] - r.e_i).abs() < 1e-12);
            assert!((poles[2 * k as usize + 1] - r.e_ii).abs() < 1e-9);
        }
    }

    #[test]
    fn tau_limits() {
        let l = lam(1.0);
        assert_eq!(scattering_tau(l, 0.0, 0.7).unwrap(), 1.0);
        assert!(scattering_tau(l, 1.0, 1e-6).unwrap() > 1e5);
        let a = scattering_tau(l, 1.0, 0.3).unwrap();
        let b = scattering_tau(l, 1.0, 1.7).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn series_coefficient_is_one_eighth() {
        let pts = commutative_limit(&[0.01], 1.0, 1).unwrap();
        assert!((pts[0].coefficient - 0.125).abs() < 1e-4);
        assert!((pts[0].reference - 1.0 / 24.0).abs() < 1e-15);
    }
}
