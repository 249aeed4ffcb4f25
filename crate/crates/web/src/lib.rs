//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; the page slices it into
//! tuples. Bad input comes back as a JS exception carrying the error text.

use fuzzy_coulomb::fock::{build_basis, LengthScale};
use fuzzy_coulomb::spectrum::{bound_energies, radial_eigenfunction, required_nmax, smatrix, Branch};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn scale(lambda: f64) -> Result<LengthScale, JsError> {
    LengthScale::new(lambda).map_err(js_err)
}

/// `[λ, E_I, E_II]` triples for `points` values of `λ` spread evenly over
/// `[lambda_min, lambda_max]`, principal number `n`.
#[wasm_bindgen]
pub fn spectrum_curve(q: f64, n: u32, lambda_min: f64, lambda_max: f64, points: u32) -> Result<Vec<f64>, JsError> {
    if points < 2 || !(lambda_min > 0.0 && lambda_max > lambda_min) {
        return Err(JsError::new("need 0 < lambda_min < lambda_max and at least 2 points"));
    }
    let mut out = Vec::with_capacity(3 * points as usize);
    for k in 0..points {
        let l = lambda_min + (lambda_max - lambda_min) * k as f64 / (points - 1) as f64;
        let sr = bound_energies(scale(l)?, q, n).map_err(js_err)?;
        out.extend([l, sr.e_i, sr.e_ii]);
    }
    Ok(out)
}

/// `[r, R(r)]` pairs at `r = λ(N+1)` for the bound state `(n, j)`, truncated
/// where the remaining weight drops below `1e-12`. Branch II needs `q < 0`.
#[wasm_bindgen]
pub fn radial_profile(lambda: f64, q: f64, n: u32, j: u32, branch_two: bool) -> Result<Vec<f64>, JsError> {
    if j >= n {
        return Err(JsError::new("need j < n"));
    }
    let l = scale(lambda)?;
    let branch = if branch_two { Branch::II } else { Branch::I };
    if (branch_two && q >= 0.0) || (!branch_two && q <= 0.0) {
        return Err(JsError::new("branch I binds for q > 0, branch II for q < 0"));
    }
    let omega = bound_energies(l, q, n).map_err(js_err)?.omega_n;
    let nmax = required_nmax(omega, j as usize, 1e-12).min(2000);
    let rf = radial_eigenfunction(branch, l, q, n - j - 1, j, &build_basis(nmax), 1.0).map_err(js_err)?;
    Ok(rf
        .values
        .values
        .iter()
        .enumerate()
        .flat_map(|(level, v)| [lambda * (level + 1) as f64, *v])
        .collect())
}

/// `[E, δ, |S| − 1]` for `points` energies inside the scattering window
/// `0 < E < 2/λ²`, where `S_j = e^{2iδ}` and `δ ∈ (−π/2, π/2]`.
#[wasm_bindgen]
pub fn smatrix_phase(lambda: f64, q: f64, j: u32, points: u32) -> Result<Vec<f64>, JsError> {
    let l = scale(lambda)?;
    let edge = 2.0 / (lambda * lambda);
    let mut out = Vec::with_capacity(3 * points as usize);
    for k in 1..=points {
        let e = edge * k as f64 / (points + 1) as f64;
        let s = smatrix(l, q, j, e).map_err(js_err)?.value;
        out.extend([e, s.arg() / 2.0, s.norm() - 1.0]);
    }
    Ok(out)
}
