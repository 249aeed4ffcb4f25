//! Residuals of the dynamical-symmetry relations on a constructed eigenstate.

use std::sync::Arc;

use serde::Serialize;

use super::radial::{eigen_residual, EigenState};
use crate::error::Result;
use crate::fock::{levi_civita, Axis};
use crate::ncwave::NCWaveFunction;
use crate::sparse::C64;
use crate::superops::{commutator, EnergyParams, HatOperators, SuperOperator};

/// All values are `‖…Ψ‖/‖Ψ‖` in the weighted norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OnShellResiduals {
    pub energy: f64,
    /// `(Ĥ − E)Ψ`.
    pub hamiltonian: f64,
    /// Largest `[Ĥ, Â_k]Ψ`.
    pub lrl_conservation: f64,
    /// `Ĉ′₁Ψ`.
    pub casimir1: f64,
    /// `(Ĉ′₂ − q²)Ψ`.
    pub casimir2: f64,
    /// Largest `([K̂_i, K̂_j] − iε_{ijk}L̂_k)Ψ` with `K̂ = Â/√|λ²E² − 2E|`;
    /// for `E` inside the scattering window the sign of the right side flips.
    pub so4: f64,
}

fn i_eps_l(hat: &HatOperators, i: Axis, j: Axis, sign: f64) -> SuperOperator {
    SuperOperator::sum(
        Axis::ALL
            .iter()
            .filter_map(|&k| {
                let e = levi_civita(i.index(), j.index(), k.index());
                (e != 0.0).then(|| hat.angular_momentum(k).scale(C64::new(0.0, sign * e)))
            })
            .collect(),
    )
}

/// Residuals at energy `energy` and coupling `q` for an arbitrary wave
/// function; on an eigenstate they all vanish up to the profile cut.
pub fn onshell_residuals(psi: &NCWaveFunction, q: f64, energy: f64) -> Result<OnShellResiduals> {
    let lambda = psi.lambda();
    let hat = HatOperators::new(Arc::clone(psi.basis()), lambda);
    let ep = EnergyParams::new(energy, lambda);
    let h = hat.hamiltonian(q);
    let zero = C64::new(0.0, 0.0);

    let hamiltonian = eigen_residual(&h, psi, C64::new(energy, 0.0))?;
    let mut lrl_conservation: f64 = 0.0;
    for k in Axis::ALL {
        lrl_conservation = lrl_conservation.max(eigen_residual(&commutator(&h, &hat.lrl(k, q)), psi, zero)?);
    }
    let casimir1 = eigen_residual(&hat.casimir(1, ep), psi, zero)?;
    let casimir2 = eigen_residual(&hat.casimir(2, ep), psi, C64::new(q * q, 0.0))?;

    let l = lambda.value();
    let d = l * l * energy * energy - 2.0 * energy;
    let mut so4: f64 = 0.0;
    if d.abs() > 1e-12 {
        let scale = 1.0 / d.abs().sqrt();
        let sign = d.signum();
        for (i, j) in [(Axis::X, Axis::Y), (Axis::Y, Axis::Z), (Axis::Z, Axis::X)] {
            let ki = hat.lrl(i, q).scale_re(scale);
            let kj = hat.lrl(j, q).scale_re(scale);
            let op = commutator(&ki, &kj).sub(&i_eps_l(&hat, i, j, sign));
            so4 = so4.max(eigen_residual(&op, psi, zero)?);
        }
    }
    Ok(OnShellResiduals {
        energy,
        hamiltonian,
        lrl_conservation,
        casimir1,
        casimir2,
        so4,
    })
}

impl EigenState {
    pub fn onshell_residuals(&self, q: f64) -> Result<OnShellResiduals> {
        onshell_residuals(&self.psi, q, self.radial.energy)
    }
}
