//! Closed-form radial eigenfunctions and the brute-force radial eigensolver.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{bound_energies, hypergeom_terminating};
use crate::error::{Error, Result};
use crate::fock::{build_basis, FockBasis, LengthScale};
use crate::ncwave::{build_psi_jm, NCWaveFunction, RadialProfile, WaveSpec};
use crate::sparse::{SparseMatrix, C64};
use crate::superops::{HatOperators, SuperOperator};

/// Default bound on `Ω^{2(nmax−j)}`.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `E < 0`, attractive coupling.
    I,
    /// `E > 2/λ²`, repulsive coupling.
    II,
}

impl Branch {
    fn label(self) -> &'static str {
        match self {
            Branch::I => "I",
            Branch::II => "II",
        }
    }

    fn check_coupling(self, q: f64) -> Result<()> {
        let ok = match self {
            Branch::I => q > 0.0,
            Branch::II => q < 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NoBoundBranch {
                branch: self.label(),
                q,
            })
        }
    }
}

/// `Ω^{2(nmax−j)}`, the squared decay of the profile at the cut.
pub fn tail_estimate(omega: f64, j: usize, nmax: usize) -> f64 {
    if nmax < j {
        return 1.0;
    }
    omega.abs().powi(2 * (nmax - j) as i32)
}

/// Smallest `nmax` with `tail_estimate(Ω, j, nmax) ≤ tolerance`.
pub fn required_nmax(omega: f64, j: usize, tolerance: f64) -> usize {
    let o = omega.abs();
    if o == 0.0 || tolerance >= 1.0 {
        return j;
    }
    if o >= 1.0 {
        return usize::MAX;
    }
    let steps = (tolerance.ln() / (2.0 * o.ln())).ceil().max(0.0) as usize;
    let mut n = j + steps;
    // guard against rounding in the logarithms
    while n > j && tail_estimate(o, j, n - 1) <= tolerance {
        n -= 1;
    }
    while tail_estimate(o, j, n) > tolerance {
        n += 1;
    }
    n
}

#[derive(Debug, Clone)]
pub struct RadialEigenfunction {
    pub branch: Branch,
    pub n_r: u32,
    pub j: u32,
    /// `n = n_r + j + 1`.
    pub principal: u32,
    pub energy: f64,
    pub omega: f64,
    pub tail: f64,
    pub values: RadialProfile,
}

/// `R(N) = (±Ω)^N F(−n_r, −N; 2j+2; 2κΩ⁻¹)` for `N ≤ nmax − j` with the signed
/// `κ = qλ/n`, so branch I (`q > 0`) has a negative argument and branch II
/// (`q < 0`) is branch I of `|q|` times `(−1)^N`. The principal number is
/// taken as `n_r + j + 1`.
pub fn radial_eigenfunction(
    branch: Branch,
    lambda: LengthScale,
    q: f64,
    n_r: u32,
    j: u32,
    basis: &FockBasis,
    tail_tolerance: f64,
) -> Result<RadialEigenfunction> {
    branch.check_coupling(q)?;
    let nmax = basis.nmax();
    let ju = j as usize;
    if ju > nmax {
        return Err(Error::LevelOutOfRange { level: ju, nmax });
    }
    let principal = n_r + j + 1;
    let sr = bound_energies(lambda, q, principal)?;
    let tail = tail_estimate(sr.omega_n, ju, nmax);
    if tail > tail_tolerance {
        return Err(Error::InadequateTruncation {
            tail,
            tolerance: tail_tolerance,
            required: required_nmax(sr.omega_n, ju, tail_tolerance),
        });
    }
    let (base, z, energy) = match branch {
        Branch::I => (sr.omega_n, -2.0 * sr.kappa_n / sr.omega_n, sr.e_i),
        Branch::II => (-sr.omega_n, -2.0 * sr.kappa_n / sr.omega_n, sr.e_ii),
    };
    let c = 2.0 * j as f64 + 2.0;
    let mut values = vec![0.0; nmax + 1];
    let mut pow = 1.0;
    for (big_n, v) in values.iter_mut().enumerate().take(nmax - ju + 1) {
        *v = pow * hypergeom_terminating(n_r, big_n as u32, c, z)?;
        pow *= base;
    }
    Ok(RadialEigenfunction {
        branch,
        n_r,
        j,
        principal,
        energy,
        omega: sr.omega_n,
        tail,
        values: RadialProfile::new(values),
    })
}

/// `⟨A, B⟩` restricted to rows of one Fock level.
fn block_inner(basis: &FockBasis, lambda: f64, a: &SparseMatrix, b: &SparseMatrix, level: usize) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for r in basis.level_range(level) {
        let mut x = a.row(r).peekable();
        let mut y = b.row(r).peekable();
        while let (Some(&(ca, va)), Some(&(cb, vb))) = (x.peek(), y.peek()) {
            if ca < cb {
                x.next();
            } else if cb < ca {
                y.next();
            } else {
                s += (basis.level(ca) + 1) as f64 * va.conj() * vb;
                x.next();
                y.next();
            }
        }
    }
    s * (4.0 * PI * lambda.powi(3))
}

/// Spacing between radial levels excited together; outputs of one probe
/// cannot overlap and couplings at distance two stay visible.
const COMB: usize = 5;

/// Eigenpairs of `Ĥ` restricted to the `(j, m)` sector, ascending.
///
/// The sector basis is `Ψ_jm` with single-level radial profiles
/// `N = 0..=nmax−j`; its weighted Gram matrix is diagonal but not the
/// identity, so the generalized problem `A c = E G c` is solved. `Ĥ` is
/// applied on a basis one level larger so every matrix element is exact.
pub fn diagonalize_radial(
    lambda: LengthScale,
    q: f64,
    j: u32,
    m: i32,
    basis: &FockBasis,
) -> Result<Vec<(f64, RadialProfile)>> {
    let nb = basis.nmax();
    let ju = j as usize;
    let spec = WaveSpec::integer(j as usize, m as i64)?;
    if ju > nb {
        return Err(Error::InvalidWaveSpec {
            j: j as f64,
            m: m as f64,
            reason: format!("j exceeds nmax = {nb}"),
        });
    }
    let count = nb - ju + 1;
    let ext = Arc::new(build_basis(nb + 1));
    let hat = HatOperators::new(Arc::clone(&ext), lambda);
    let h = hat.hamiltonian(q);
    let l = lambda.value();

    let mut probes = Vec::new();
    let mut images = Vec::new();
    for r in 0..COMB.min(count) {
        let profile = RadialProfile::new(
            (0..=nb)
                .map(|n| if n % COMB == r && n < count { 1.0 } else { 0.0 })
                .collect(),
        );
        let psi = build_psi_jm(&ext, lambda, spec, &profile)?;
        let img = h.apply(&psi)?;
        probes.push(psi);
        images.push(img);
    }

    let mut gram = vec![0.0; count];
    let mut a = vec![[C64::new(0.0, 0.0); 3]; count];
    for n in 0..count {
        let probe = &probes[n % COMB];
        gram[n] = block_inner(&ext, l, probe.matrix(), probe.matrix(), n + ju).re;
    }
    // a[n][d] = ⟨ψ_{n+d−1}, Ĥ ψ_n⟩
    for n in 0..count {
        let img = &images[n % COMB];
        for d in 0..3 {
            let Some(mrow) = (n + d).checked_sub(1).filter(|&x| x < count) else {
                continue;
            };
            a[n][d] = block_inner(&ext, l, probes[mrow % COMB].matrix(), img.matrix(), mrow + ju);
        }
    }

    let scale = a
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    check_band(&ext, &images, ju, count, nb, scale)?;
    let mut asym: f64 = 0.0;
    for n in 0..count {
        asym = asym.max(a[n][1].im.abs());
        if n + 1 < count {
            // ⟨ψ_{n+1}, Hψ_n⟩ against conj ⟨ψ_n, Hψ_{n+1}⟩
            asym = asym.max((a[n][2] - a[n + 1][0].conj()).norm());
        }
    }
    if asym > 1e-9 * scale {
        return Err(Error::NonHermitianBlock(asym / scale));
    }

    let mut b = DMatrix::<f64>::zeros(count, count);
    for n in 0..count {
        b[(n, n)] = a[n][1].re / gram[n];
        if n + 1 < count {
            let off = 0.5 * (a[n][2].re + a[n + 1][0].re) / (gram[n] * gram[n + 1]).sqrt();
            b[(n + 1, n)] = off;
            b[(n, n + 1)] = off;
        }
    }
    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    Ok(order
        .into_iter()
        .map(|k| {
            let mut values = vec![0.0; nb + 1];
            for n in 0..count {
                values[n] = eig.eigenvectors[(n, k)] / gram[n].sqrt();
            }
            let peak = values
                .iter()
                .fold(0.0f64, |m, v| if v.abs() > m.abs() { *v } else { m });
            let lead = values
                .iter()
                .copied()
                .find(|v| v.abs() > 1e-12 * peak.abs())
                .unwrap_or(1.0);
            let norm = peak.abs().max(f64::MIN_POSITIVE) * lead.signum();
            values.iter_mut().for_each(|v| *v /= norm);
            (eig.eigenvalues[k], RadialProfile::new(values))
        })
        .collect())
}

/// Every entry of a probe image must sit within one level of a probed level.
fn check_band(
    basis: &FockBasis,
    images: &[NCWaveFunction],
    j: usize,
    count: usize,
    nb: usize,
    scale: f64,
) -> Result<()> {
    let tol = 1e-10 * scale / (4.0 * PI * images[0].lambda().value().powi(3));
    for (r, img) in images.iter().enumerate() {
        for (row, col, v) in img.matrix().iter() {
            let level = basis.level(row);
            if level > nb || v.norm() <= tol {
                continue;
            }
            if basis.level(col) != level {
                return Err(Error::NotBanded {
                    a: level,
                    b: basis.level(col),
                    value: v.norm(),
                });
            }
            let covered = (0..count)
                .filter(|n| n % COMB == r)
                .any(|n| (level as i64 - (n + j) as i64).abs() <= 1);
            if !covered {
                let src = (0..count)
                    .filter(|n| n % COMB == r)
                    .min_by_key(|n| (level as i64 - (n + j) as i64).abs())
                    .unwrap_or(0);
                return Err(Error::NotBanded {
                    a: src + j,
                    b: level,
                    value: v.norm(),
                });
            }
        }
    }
    Ok(())
}

/// Largest truncation [`NmaxPolicy::Auto`] will pick; sectors needing more
/// are flagged instead of diagonalized.
pub const MAX_AUTO_NMAX: usize = 600;

/// How the Fock truncation is chosen per spectrum row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NmaxPolicy {
    Fixed(usize),
    /// Smallest `nmax` with `Ω_n^{2(nmax−j)} ≤ tolerance`.
    Auto {
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub lambda: f64,
    pub q: f64,
    pub n: u32,
    pub j: u32,
    #[serde(rename = "E_closed_form")]
    pub e_closed: f64,
    #[serde(rename = "E_diagonalized")]
    pub e_diag: f64,
    pub abs_error: f64,
    #[serde(rename = "Omega_n")]
    pub omega_n: f64,
    pub nmax_used: usize,
    pub tail: f64,
    pub note: String,
}

/// Closed-form against diagonalized energies for `n = 1..=n_max`,
/// `j = 0..=min(n−1, j_max)`. In block `j` the state with principal number
/// `n` is the `(n−j−1)`-th eigenvalue, counted from the bottom on branch I and
/// from the top on branch II. Failed or infeasible sectors are flagged in
/// `note`. With `q = 0` there are no bound states; the rows then compare the
/// band edge with the free spectrum.
pub fn spectrum_rows(
    lambda: LengthScale,
    q: f64,
    n_max: u32,
    j_max: u32,
    branch: Branch,
    policy: NmaxPolicy,
) -> Result<Vec<SpectrumRow>> {
    if q != 0.0 {
        branch.check_coupling(q)?;
    }
    let mut cache: HashMap<(u32, usize), std::result::Result<Vec<f64>, String>> = HashMap::new();
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let sr = bound_energies(lambda, q, n)?;
        for j in 0..=(n - 1).min(j_max) {
            let nmax = match policy {
                NmaxPolicy::Fixed(v) => v,
                NmaxPolicy::Auto { tolerance } => required_nmax(sr.omega_n, j as usize, tolerance),
            };
            let e_closed = match branch {
                Branch::I => sr.e_i,
                Branch::II => sr.e_ii,
            };
            if nmax > MAX_AUTO_NMAX && matches!(policy, NmaxPolicy::Auto { .. }) {
                rows.push(SpectrumRow {
                    lambda: lambda.value(),
                    q,
                    n,
                    j,
                    e_closed,
                    e_diag: f64::NAN,
                    abs_error: f64::NAN,
                    omega_n: sr.omega_n,
                    nmax_used: nmax.min(MAX_AUTO_NMAX),
                    tail: f64::NAN,
                    note: format!("truncation infeasible: needs nmax > {MAX_AUTO_NMAX}"),
                });
                continue;
            }
            let eig = cache.entry((j, nmax)).or_insert_with(|| {
                diagonalize_radial(lambda, q, j, 0, &build_basis(nmax))
                    .map(|v| v.into_iter().map(|(e, _)| e).collect())
                    .map_err(|e| e.to_string())
            });
            let k = (n - j - 1) as usize;
            let (e_diag, note) = match eig {
                Ok(vals) if k < vals.len() => {
                    let e = match branch {
                        Branch::I => vals[k],
                        Branch::II => vals[vals.len() - 1 - k],
                    };
                    let note = if q == 0.0 {
                        "no bound states for q = 0; free spectrum".to_string()
                    } else {
                        String::new()
                    };
                    (e, note)
                }
                Ok(_) => (f64::NAN, "block too small".to_string()),
                Err(msg) => (f64::NAN, msg.clone()),
            };
            rows.push(SpectrumRow {
                lambda: lambda.value(),
                q,
                n,
                j,
                e_closed,
                e_diag,
                abs_error: (e_diag - e_closed).abs(),
                omega_n: sr.omega_n,
                nmax_used: nmax,
                tail: tail_estimate(sr.omega_n, j as usize, nmax),
                note,
            });
        }
    }
    Ok(rows)
}

/// A closed-form eigenfunction lifted to a wave function.
#[derive(Debug, Clone)]
pub struct EigenState {
    pub psi: NCWaveFunction,
    pub radial: RadialEigenfunction,
    /// Highest Fock level carrying the profile.
    pub profile_nmax: usize,
}

/// Builds `Ψ_jm` with the closed-form profile cut at `profile_nmax`, on a
/// basis `guard` levels larger so operators of that reach act exactly.
#[allow(clippy::too_many_arguments)]
pub fn build_eigenstate(
    branch: Branch,
    lambda: LengthScale,
    q: f64,
    n_r: u32,
    j: u32,
    m: i32,
    profile_nmax: usize,
    guard: usize,
    tail_tolerance: f64,
) -> Result<EigenState> {
    let radial = radial_eigenfunction(branch, lambda, q, n_r, j, &build_basis(profile_nmax), tail_tolerance)?;
    let basis = Arc::new(build_basis(profile_nmax + guard));
    let psi = build_psi_jm(&basis, lambda, WaveSpec::integer(j as usize, m as i64)?, &radial.values)?;
    Ok(EigenState {
        psi,
        radial,
        profile_nmax,
    })
}

/// `‖(op − target)Ψ‖/‖Ψ‖` in the weighted norm.
pub fn eigen_residual(op: &SuperOperator, psi: &NCWaveFunction, target: C64) -> Result<f64> {
    let out = op.apply(psi)?.sub(&psi.scale(target))?;
    Ok((out.weighted_norm_sq_unchecked() / psi.weighted_norm_sq_unchecked()).sqrt() + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(l: f64) -> LengthScale {
        LengthScale::new(l).unwrap()
    }

    #[test]
    fn required_nmax_is_tight() {
        let o = 0.9;
        let n = required_nmax(o, 2, 1e-12);
        assert!(tail_estimate(o, 2, n) <= 1e-12);
        assert!(tail_estimate(o, 2, n - 1) > 1e-12);
        assert_eq!(required_nmax(0.0, 3, 1e-12), 3);
    }

    #[test]
    fn ground_profile_is_geometric() {
        let basis = build_basis(40);
        let r = radial_eigenfunction(Branch::I, lam(1.0), 1.0, 0, 0, &basis, 1e-12).unwrap();
        for n in 0..10 {
            assert!((r.values.at(n) - r.omega.powi(n as i32)).abs() < 1e-15);
        }
        assert_eq!(r.principal, 1);
    }

    #[test]
    fn branch_two_is_sign_twisted_branch_one() {
        let basis = build_basis(120);
        let one = radial_eigenfunction(Branch::I, lam(0.7), 1.0, 2, 1, &basis, 1e-10).unwrap();
        let two = radial_eigenfunction(Branch::II, lam(0.7), -1.0, 2, 1, &basis, 1e-10).unwrap();
        let z = 2.0 * bound_energies(lam(0.7), 1.0, 4).unwrap().kappa_n / one.omega;
        for n in 0..20 {
            let direct = (-one.omega).powi(n as i32) * hypergeom_terminating(2, n as u32, 4.0, -z).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((two.values.at(n) - sign * one.values.at(n)).abs() < 1e-12);
            assert!((two.values.at(n) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_coupling_sign_is_rejected() {
        let basis = build_basis(10);
        assert!(matches!(
            radial_eigenfunction(Branch::I, lam(1.0), -1.0, 0, 0, &basis, 1.0),
            Err(Error::NoBoundBranch { .. })
        ));
        assert!(radial_eigenfunction(Branch::II, lam(1.0), 1.0, 0, 0, &basis, 1.0).is_err());
    }

    #[test]
    fn short_truncation_is_reported() {
        let basis = build_basis(10);
        match radial_eigenfunction(Branch::I, lam(0.1), 1.0, 0, 0, &basis, 1e-12) {
            Err(Error::InadequateTruncation { required, .. }) => assert!(required > 100),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_particle_spectrum_is_nonnegative() {
        let vals = diagonalize_radial(lam(0.5), 0.0, 1, 0, &build_basis(20)).unwrap();
        assert!(vals.iter().all(|(e, _)| *e > -1e-12));
    }

    #[test]
    fn eigenvalues_independent_of_m() {
        let basis = build_basis(18);
        let a = diagonalize_radial(lam(1.0), 1.0, 2, 0, &basis).unwrap();
        let b = diagonalize_radial(lam(1.0), 1.0, 2, -2, &basis).unwrap();
        for ((x, _), (y, _)) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn ground_state_matches_closed_form() {
        let l = lam(1.0);
        let e = bound_energies(l, 1.0, 1).unwrap();
        let nmax = required_nmax(e.omega_n, 0, 1e-16);
        let vals = diagonalize_radial(l, 1.0, 0, 0, &build_basis(nmax)).unwrap();
        assert!((vals[0].0 - e.e_i).abs() < 1e-9, "{} vs {}", vals[0].0, e.e_i);
        // the eigenvector is the geometric profile
        for n in 0..8 {
            assert!((vals[0].1.at(n) - e.omega_n.powi(n as i32)).abs() < 1e-7);
        }
    }
}
