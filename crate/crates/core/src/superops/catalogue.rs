//! Numeric identity suite: every identity of the exact catalogue, plus a few
//! that involve `1/r̂`, checked by applying both sides to random balanced wave
//! functions supported below the guard level.

use std::collections::HashMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{anticommutator, commutator, AuxName, EnergyParams, Fault, HatOperators, SuperOperator, WPrimeName};
use crate::fock::{build_basis, levi_civita, pauli, Axis, LengthScale};
use crate::ncwave::random_balanced;
use crate::sparse::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// One index assignment of an identity.
#[derive(Clone)]
pub enum Check {
    Ops {
        lhs: SuperOperator,
        rhs: SuperOperator,
    },
    /// Scalar identity: `Σ lhs == rhs`.
    Terms {
        lhs: Vec<C64>,
        rhs: C64,
    },
}

type Builder = fn(&HatOperators, EnergyParams, f64) -> Vec<Check>;

#[derive(Clone)]
pub struct NumericIdentity {
    pub name: &'static str,
    pub formula: String,
    pub energy_dependent: bool,
    build: Builder,
}

impl NumericIdentity {
    pub fn checks(&self, hat: &HatOperators, energy: EnergyParams, q: f64) -> Vec<Check> {
        (self.build)(hat, energy, q)
    }
}

#[derive(Debug, Clone)]
pub struct NumericSuiteConfig {
    pub nmax: usize,
    pub lambda: f64,
    pub energies: Vec<f64>,
    /// Coupling used where an identity involves the Coulomb term.
    pub q: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for NumericSuiteConfig {
    fn default() -> Self {
        Self {
            nmax: 16,
            lambda: 1.0,
            energies: vec![-1.0, 0.5, 3.0],
            q: 1.0,
            samples: 2,
            tolerance: 1e-10,
            seed: 0x5eed,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub paper_ref: String,
    pub guard_level: usize,
    pub residual: f64,
    pub pass: bool,
}

fn axes() -> [Axis; 3] {
    Axis::ALL
}

fn eps(i: Axis, j: Axis, k: Axis) -> f64 {
    levi_civita(i.index(), j.index(), k.index())
}

/// `Σ_k ε_{ijk} f(k)`.
fn eps_sum(h: &HatOperators, i: Axis, j: Axis, f: impl Fn(Axis) -> SuperOperator) -> SuperOperator {
    let terms: Vec<SuperOperator> = axes()
        .into_iter()
        .filter(|&k| eps(i, j, k) != 0.0)
        .map(|k| f(k).scale_re(eps(i, j, k)))
        .collect();
    if terms.is_empty() {
        SuperOperator::zero(h.dim())
    } else {
        SuperOperator::sum(terms)
    }
}

fn pairs(f: impl Fn(Axis, Axis) -> Check) -> Vec<Check> {
    let mut out = Vec::new();
    for i in axes() {
        for j in axes() {
            out.push(f(i, j));
        }
    }
    out
}

fn singles(f: impl Fn(Axis) -> Check) -> Vec<Check> {
    axes().into_iter().map(f).collect()
}

fn ops(lhs: SuperOperator, rhs: SuperOperator) -> Check {
    Check::Ops { lhs, rhs }
}

fn zero(h: &HatOperators) -> SuperOperator {
    SuperOperator::zero(h.dim())
}

fn zeta(h: &HatOperators) -> SuperOperator {
    h.aux(AuxName::ZetaScalar)
}

fn zeta_k(h: &HatOperators, k: Axis) -> SuperOperator {
    h.aux(AuxName::ZetaK(k))
}

fn w_k(h: &HatOperators, k: Axis) -> SuperOperator {
    h.aux(AuxName::WK(k))
}

fn w(h: &HatOperators) -> SuperOperator {
    h.aux(AuxName::WScalar)
}

fn lam(h: &HatOperators) -> f64 {
    h.lambda().value()
}

fn dot(f: impl Fn(Axis) -> (SuperOperator, SuperOperator)) -> SuperOperator {
    SuperOperator::sum(
        axes()
            .into_iter()
            .map(|i| {
                let (a, b) = f(i);
                a.then_apply(&b)
            })
            .collect(),
    )
}

fn xl_xr(h: &HatOperators) -> SuperOperator {
    dot(|i| (h.position_left(i), h.position_right(i)))
}

fn rr(h: &HatOperators) -> SuperOperator {
    h.radius().then_apply(&h.radius())
}

/// `2iλ r̂ V̂_k`, which equals `−λ ŵ_k`.
fn minus_lambda_w_via_velocity(h: &HatOperators, k: Axis) -> SuperOperator {
    h.radius().then_apply(&h.velocity(k)).scale(I * 2.0 * lam(h))
}

/// `r̂ζ̂_k − x̂_kζ̂`.
fn lrl_numerator(h: &HatOperators, k: Axis) -> SuperOperator {
    h.radius()
        .then_apply(&zeta_k(h, k))
        .sub(&h.position(k).then_apply(&zeta(h)))
}

// ---- Pauli tables, evaluated on 2×2 matrices ----

fn sig(k: usize, a: usize, b: usize) -> C64 {
    pauli(Axis::ALL[k])[a][b]
}

fn sigsig(i: usize, j: usize, a: usize, b: usize) -> C64 {
    (0..2).map(|g| sig(i, a, g) * sig(j, g, b)).sum()
}

fn delta(a: usize, b: usize) -> C64 {
    C64::new((a == b) as u8 as f64, 0.0)
}

fn eps0(i: usize, j: usize, k: usize) -> C64 {
    C64::new(levi_civita(i, j, k), 0.0)
}

fn pauli_cases(f: impl Fn(usize, usize, usize, usize) -> Check) -> Vec<Check> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..2 {
                for b in 0..2 {
                    out.push(f(i, j, a, b));
                }
            }
        }
    }
    out
}

fn pauli_commutator(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pauli_cases(|i, j, a, b| Check::Terms {
        lhs: vec![sigsig(i, j, a, b), -sigsig(j, i, a, b)],
        rhs: (0..3).map(|k| 2.0 * I * eps0(i, j, k) * sig(k, a, b)).sum(),
    })
}

fn pauli_anticommutator(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pauli_cases(|i, j, a, b| Check::Terms {
        lhs: vec![sigsig(i, j, a, b), sigsig(j, i, a, b)],
        rhs: 2.0 * delta(i, j) * delta(a, b),
    })
}

fn pauli_product(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pauli_cases(|i, j, a, b| Check::Terms {
        lhs: vec![sigsig(i, j, a, b)],
        rhs: delta(i, j) * delta(a, b) + (0..3).map(|k| I * eps0(i, j, k) * sig(k, a, b)).sum::<C64>(),
    })
}

fn pauli_eps_contraction(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for i in 0..3 {
        for a in 0..2 {
            for b in 0..2 {
                let mut lhs = Vec::new();
                for j in 0..3 {
                    for k in 0..3 {
                        if levi_civita(i, j, k) != 0.0 {
                            lhs.push(eps0(i, j, k) * sigsig(j, k, a, b));
                        }
                    }
                }
                out.push(Check::Terms {
                    lhs,
                    rhs: 2.0 * I * sig(i, a, b),
                });
            }
        }
    }
    out
}

fn pauli_completeness(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for g in 0..2 {
                for m in 0..2 {
                    out.push(Check::Terms {
                        lhs: (0..3).map(|k| sig(k, a, b) * sig(k, g, m)).collect(),
                        rhs: 2.0 * delta(a, m) * delta(b, g) - delta(a, b) * delta(g, m),
                    });
                }
            }
        }
    }
    out
}

fn pauli_trace(_: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    (0..3)
        .map(|k| Check::Terms {
            lhs: vec![sig(k, 0, 0), sig(k, 1, 1)],
            rhs: C64::new(0.0, 0.0),
        })
        .collect()
}

// ---- coordinates and rotations ----

fn left_right_coordinates_commute(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| ops(commutator(&h.position_left(i), &h.position_right(j)), zero(h)))
}

fn left_coordinate_algebra(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| {
        ops(
            commutator(&h.position_left(i), &h.position_left(j)),
            eps_sum(h, i, j, |k| h.position_left(k)).scale(I * 2.0 * lam(h)),
        )
    })
}

fn right_coordinate_algebra(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| {
        ops(
            commutator(&h.position_right(i), &h.position_right(j)),
            eps_sum(h, i, j, |k| h.position_right(k)).scale(I * -2.0 * lam(h)),
        )
    })
}

fn coordinate_radius_commute(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|i| ops(commutator(&h.position(i), &h.radius()), zero(h)))
}

fn coordinate_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| {
        ops(
            commutator(&h.position(i), &h.position(j)),
            eps_sum(h, i, j, |k| h.angular_momentum(k)).scale(I * lam(h) * lam(h)),
        )
    })
}

fn rotation(h: &HatOperators, v: impl Fn(Axis) -> SuperOperator) -> Vec<Check> {
    pairs(|i, j| ops(commutator(&h.angular_momentum(i), &v(j)), eps_sum(h, i, j, &v).scale(I)))
}

fn angular_momentum_algebra(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| h.angular_momentum(k))
}

fn rotation_of_coordinates(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| h.position(k))
}

fn rotation_of_zeta(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| zeta_k(h, k))
}

fn rotation_of_w(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| w_k(h, k))
}

fn rotation_of_lrl_numerator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| lrl_numerator(h, k))
}

fn rotation_of_wprime(h: &HatOperators, e: EnergyParams, _: f64) -> Vec<Check> {
    rotation(h, |k| h.w_prime(WPrimeName::K(k), e))
}

fn lrl_rotation(h: &HatOperators, _: EnergyParams, q: f64) -> Vec<Check> {
    rotation(h, |k| h.lrl(k, q))
}

// ---- velocity and LRL ----

fn velocity_polynomial_form(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|i| {
        ops(
            commutator(&h.position(i), &h.aux(AuxName::BigW)),
            w_k(h, i).scale_re(-lam(h)),
        )
    })
}

fn lrl_zeta_form(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| {
        let mut terms = Vec::new();
        for i in axes() {
            for j in axes() {
                let e = eps(i, j, k);
                if e != 0.0 {
                    terms.push(anticommutator(&h.angular_momentum(i), &w_k(h, j)).scale(I * 0.25 * e));
                }
            }
        }
        ops(SuperOperator::sum(terms), lrl_numerator(h, k).scale_re(-0.5 / lam(h)))
    })
}

fn velocity_dual_construction(h: &HatOperators, _: EnergyParams, q: f64) -> Vec<Check> {
    singles(|i| ops(h.velocity_commutator(i, q), h.velocity(i)))
}

fn lrl_dual_construction(h: &HatOperators, _: EnergyParams, q: f64) -> Vec<Check> {
    singles(|k| ops(h.lrl(k, q), h.lrl_zeta_form(k, q)))
}

fn hamiltonian_w_form(h: &HatOperators, _: EnergyParams, q: f64) -> Vec<Check> {
    vec![ops(h.hamiltonian(q), h.hamiltonian_w_form(q))]
}

fn wprime_shift_form(h: &HatOperators, e: EnergyParams, _: f64) -> Vec<Check> {
    let mut out = singles(|k| ops(h.w_prime(WPrimeName::K(k), e), h.w_prime_shifted(WPrimeName::K(k), e)));
    out.push(ops(
        h.w_prime(WPrimeName::Scalar, e),
        h.w_prime_shifted(WPrimeName::Scalar, e),
    ));
    out
}

// ---- ζ, x, r commutators ----

fn zeta_position_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| ops(commutator(&zeta(h), &h.position(k)), minus_lambda_w_via_velocity(h, k)))
}

fn zeta_radius_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| {
        ops(
            commutator(&zeta_k(h, k), &h.radius()),
            minus_lambda_w_via_velocity(h, k),
        )
    })
}

fn zeta_left_radius_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| ops(commutator(&zeta_k(h, k), &h.radius_left()), w_k(h, k).scale_re(-lam(h))))
}

fn zeta_trace_commutes(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| ops(commutator(&zeta(h), &zeta_k(h, k)), zero(h)))
}

fn zeta_algebra(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| {
        ops(
            commutator(&zeta_k(h, i), &zeta_k(h, j)),
            eps_sum(h, i, j, |k| h.angular_momentum(k)).scale(I * -4.0),
        )
    })
}

fn position_zeta_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    pairs(|i, j| {
        let rhs = if i == j { w(h).scale_re(lam(h)) } else { zero(h) };
        ops(commutator(&h.position(i), &zeta_k(h, j)), rhs)
    })
}

// ---- W′ ----

fn wprime_trace_commutes(h: &HatOperators, e: EnergyParams, _: f64) -> Vec<Check> {
    singles(|k| {
        ops(
            commutator(&h.w_prime(WPrimeName::Scalar, e), &h.w_prime(WPrimeName::K(k), e)),
            zero(h),
        )
    })
}

fn wprime_algebra(h: &HatOperators, e: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let c = 4.0 * l * e.omega() * (1.0 + l * e.omega() / 4.0);
    pairs(|i, j| {
        ops(
            commutator(&h.w_prime(WPrimeName::K(i), e), &h.w_prime(WPrimeName::K(j), e)),
            eps_sum(h, i, j, |k| h.angular_momentum(k)).scale(I * c),
        )
    })
}

fn wprime_square(h: &HatOperators, e: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let ww = dot(|i| (h.w_prime(WPrimeName::K(i), e), h.w_prime(WPrimeName::K(i), e)));
    let shift = e.eta() * e.eta() * l * l - 4.0;
    let ll1 = h.angular_momentum_sq().add(&h.identity());
    let w0 = h.w_prime(WPrimeName::Scalar, e);
    vec![ops(ww.add(&ll1.scale_re(shift)), w0.then_apply(&w0))]
}

// ---- contractions and quadratic forms ----

fn angular_zeta_contraction(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    vec![ops(dot(|j| (h.angular_momentum(j), zeta_k(h, j))), zero(h))]
}

fn angular_position_contraction(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    vec![ops(dot(|j| (h.angular_momentum(j), h.position(j))), zero(h))]
}

fn angular_momentum_square(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let rhs = rr(h)
        .sub(&xl_xr(h))
        .sub(&h.identity().scale_re(l * l))
        .scale_re(0.5 / (l * l));
    vec![ops(h.angular_momentum_sq(), rhs)]
}

fn position_square(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let lhs = dot(|i| (h.position(i), h.position(i)));
    let rhs = rr(h).add(&xl_xr(h)).sub(&h.identity().scale_re(l * l)).scale_re(0.5);
    vec![ops(lhs, rhs)]
}

fn left_right_position_contraction(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let mut quartic = Vec::new();
    for al in 1..=2 {
        for be in 1..=2 {
            quartic.push(SuperOperator::compose(vec![
                h.a_hat_dag(al),
                h.a_hat(be),
                h.b_hat(al),
                h.b_hat_dag(be),
            ]));
        }
    }
    let tail = rr(h)
        .sub(&h.radius().scale_re(2.0 * l))
        .add(&h.identity().scale_re(l * l))
        .scale_re(1.0 / (l * l));
    vec![ops(
        xl_xr(h).scale_re(1.0 / (l * l)),
        SuperOperator::sum(quartic).scale_re(2.0).sub(&tail),
    )]
}

fn zeta_trace_square(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let mut quartic = Vec::new();
    for al in 1..=2 {
        for be in 1..=2 {
            quartic.push(SuperOperator::compose(vec![
                h.a_hat_dag(al),
                h.a_hat_dag(be),
                h.b_hat(al),
                h.b_hat(be),
            ]));
            quartic.push(SuperOperator::compose(vec![
                h.a_hat(al),
                h.a_hat(be),
                h.b_hat_dag(al),
                h.b_hat_dag(be),
            ]));
        }
    }
    let tail = xl_xr(h)
        .add(&rr(h))
        .add(&h.identity().scale_re(l * l))
        .scale_re(1.0 / (l * l));
    vec![ops(
        zeta(h).then_apply(&zeta(h)),
        SuperOperator::sum(quartic).add(&tail),
    )]
}

fn zeta_vector_square(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let l = lam(h);
    let lhs = dot(|i| (zeta_k(h, i), zeta_k(h, i)));
    let tail = rr(h)
        .sub(&xl_xr(h))
        .add(&h.identity().scale_re(l * l))
        .scale_re(2.0 / (l * l));
    vec![ops(lhs, zeta(h).then_apply(&zeta(h)).add(&tail))]
}

fn radius_zeta_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    vec![ops(commutator(&h.radius(), &zeta(h)), w(h).scale_re(lam(h)))]
}

fn radius_zeta_anticommutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let rhs = w(h)
        .scale_re(lam(h))
        .add(&zeta(h).then_apply(&h.radius()).scale_re(2.0));
    vec![ops(anticommutator(&h.radius(), &zeta(h)), rhs)]
}

fn position_zeta_contracted_commutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let lhs = SuperOperator::sum(
        axes()
            .into_iter()
            .map(|i| commutator(&h.position(i), &zeta_k(h, i)))
            .collect(),
    );
    vec![ops(lhs, w(h).scale_re(3.0 * lam(h)))]
}

fn position_zeta_contracted_anticommutator(h: &HatOperators, _: EnergyParams, _: f64) -> Vec<Check> {
    let lhs = SuperOperator::sum(
        axes()
            .into_iter()
            .map(|i| anticommutator(&h.position(i), &zeta_k(h, i)))
            .collect(),
    );
    let rhs = h
        .radius()
        .then_apply(&zeta(h))
        .scale_re(2.0)
        .sub(&w(h).scale_re(lam(h)));
    vec![ops(lhs, rhs)]
}

const EXTRA_FORMULAS: [(&str, &str); 5] = [
    ("velocity_dual_construction", "-i [x_k, H] == i/(2 r) w_k"),
    (
        "lrl_dual_construction",
        "1/2 eps(i,j,k) (L_i V_j + V_j L_i) + q x_k/r == -1/(2 lambda r) (r zeta_k - x_k zeta) + q x_k/r",
    ),
    ("hamiltonian_w_form", "-1/2 Laplacian - q/r == W/(2 lambda r) - q/r"),
    ("lrl_rotation", "[L_i, A_j] == i eps(i,j,k) A_k"),
    ("wprime_shift_form", "eta x_k - zeta_k == W_k + omega x_k"),
];

/// Identities whose right side is evaluated through `V̂_k = (i/2r̂)ŵ_k`.
const VIA_VELOCITY: [&str; 2] = ["zeta_position_commutator", "zeta_radius_commutator"];

pub fn numeric_catalogue() -> Vec<NumericIdentity> {
    let table: [(&'static str, bool, Builder); 44] = [
        ("pauli_commutator", false, pauli_commutator),
        ("pauli_anticommutator", false, pauli_anticommutator),
        ("pauli_product", false, pauli_product),
        ("pauli_eps_contraction", false, pauli_eps_contraction),
        ("pauli_completeness", false, pauli_completeness),
        ("pauli_trace", false, pauli_trace),
        ("left_right_coordinates_commute", false, left_right_coordinates_commute),
        ("left_coordinate_algebra", false, left_coordinate_algebra),
        ("right_coordinate_algebra", false, right_coordinate_algebra),
        ("coordinate_radius_commute", false, coordinate_radius_commute),
        ("coordinate_commutator", false, coordinate_commutator),
        ("angular_momentum_algebra", false, angular_momentum_algebra),
        ("rotation_of_coordinates", false, rotation_of_coordinates),
        ("rotation_of_zeta", false, rotation_of_zeta),
        ("rotation_of_w", false, rotation_of_w),
        ("rotation_of_lrl_numerator", false, rotation_of_lrl_numerator),
        ("rotation_of_wprime", true, rotation_of_wprime),
        ("velocity_polynomial_form", false, velocity_polynomial_form),
        ("lrl_zeta_form", false, lrl_zeta_form),
        ("zeta_position_commutator", false, zeta_position_commutator),
        ("zeta_radius_commutator", false, zeta_radius_commutator),
        ("zeta_left_radius_commutator", false, zeta_left_radius_commutator),
        ("zeta_trace_commutes", false, zeta_trace_commutes),
        ("zeta_algebra", false, zeta_algebra),
        ("position_zeta_commutator", false, position_zeta_commutator),
        ("wprime_trace_commutes", true, wprime_trace_commutes),
        ("wprime_algebra", true, wprime_algebra),
        ("angular_zeta_contraction", false, angular_zeta_contraction),
        ("angular_position_contraction", false, angular_position_contraction),
        ("angular_momentum_square", false, angular_momentum_square),
        ("position_square", false, position_square),
        (
            "left_right_position_contraction",
            false,
            left_right_position_contraction,
        ),
        ("zeta_trace_square", false, zeta_trace_square),
        ("zeta_vector_square", false, zeta_vector_square),
        ("radius_zeta_commutator", false, radius_zeta_commutator),
        ("radius_zeta_anticommutator", false, radius_zeta_anticommutator),
        (
            "position_zeta_contracted_commutator",
            false,
            position_zeta_contracted_commutator,
        ),
        (
            "position_zeta_contracted_anticommutator",
            false,
            position_zeta_contracted_anticommutator,
        ),
        ("wprime_square", true, wprime_square),
        ("velocity_dual_construction", false, velocity_dual_construction),
        ("lrl_dual_construction", false, lrl_dual_construction),
        ("hamiltonian_w_form", false, hamiltonian_w_form),
        ("lrl_rotation", false, lrl_rotation),
        ("wprime_shift_form", true, wprime_shift_form),
    ];
    let formulas: HashMap<String, String> = crate::symbolic::symbolic_catalogue()
        .into_iter()
        .map(|id| (id.name.clone(), id.formula()))
        .chain(EXTRA_FORMULAS.iter().map(|(n, f)| (n.to_string(), f.to_string())))
        .collect();
    table
        .into_iter()
        .map(|(name, energy_dependent, build)| {
            let mut formula = formulas.get(name).cloned().unwrap_or_default();
            if VIA_VELOCITY.contains(&name) {
                formula.push_str("  (right side as 2 i lambda r V_k)");
            }
            NumericIdentity {
                name,
                formula,
                energy_dependent,
                build,
            }
        })
        .collect()
}

fn flip(op: &SuperOperator) -> SuperOperator {
    op.with_fault(Fault::SignFlip).unwrap_or_else(|| op.scale_re(-1.0))
}

fn seed_for(base: u64, identity: usize, energy: usize, case: usize, sample: usize) -> u64 {
    base ^ ((identity as u64) << 40) ^ ((energy as u64) << 32) ^ ((case as u64) << 16) ^ sample as u64
}

/// Largest relative residual of one identity; guard level is the maximum over cases.
fn evaluate(index: usize, id: &NumericIdentity, hat: &HatOperators, config: &NumericSuiteConfig) -> IdentityReport {
    let lambda = hat.lambda();
    let energies: Vec<f64> = if id.energy_dependent {
        config.energies.clone()
    } else {
        config.energies.iter().take(1).copied().collect()
    };
    let mut guard = 0;
    let mut residual: f64 = 0.0;
    for (ei, &energy) in energies.iter().enumerate() {
        let e = EnergyParams::new(energy, lambda);
        let checks = id.checks(hat, e, config.q);
        let per_case: Vec<(usize, f64)> = checks
            .par_iter()
            .enumerate()
            .map(|(ci, check)| match check {
                Check::Terms { lhs, rhs } => {
                    let mut lhs = lhs.clone();
                    if config.fault.is_some() {
                        lhs[0] = -lhs[0];
                    }
                    let s: C64 = lhs.iter().sum();
                    (0, (s - rhs).norm())
                }
                Check::Ops { lhs, rhs } => {
                    let lhs = if config.fault.is_some() { flip(lhs) } else { lhs.clone() };
                    let diff = lhs.sub(rhs);
                    let g = diff.guard_level();
                    if g > config.nmax {
                        return (g, f64::INFINITY);
                    }
                    let top = config.nmax - g;
                    let worst = (0..config.samples)
                        .map(|s| {
                            let mut rng = ChaCha8Rng::seed_from_u64(seed_for(config.seed, index, ei, ci, s));
                            let psi = random_balanced(hat.basis(), lambda, top, &mut rng);
                            let out = diff.apply(&psi).expect("shared basis");
                            (out.weighted_norm_sq_unchecked() / psi.weighted_norm_sq_unchecked()).sqrt()
                        })
                        .fold(0.0, f64::max);
                    (g, worst)
                }
            })
            .collect();
        for (g, r) in per_case {
            guard = guard.max(g);
            residual = if r.is_nan() { f64::INFINITY } else { residual.max(r) };
        }
    }
    IdentityReport {
        identity_name: id.name.to_string(),
        paper_ref: id.formula.clone(),
        guard_level: guard,
        residual,
        pass: residual <= config.tolerance,
    }
}

/// Runs `identities` (all of them if `None`) and returns one report each, in catalogue order.
pub fn run_numeric_suite(config: &NumericSuiteConfig, only: Option<&[String]>) -> Vec<IdentityReport> {
    let lambda = LengthScale::new(config.lambda).expect("positive length scale");
    let hat = HatOperators::new(Arc::new(build_basis(config.nmax)), lambda);
    let cat = numeric_catalogue();
    cat.par_iter()
        .enumerate()
        .filter(|(_, id)| only.is_none_or(|names| names.iter().any(|n| n == id.name)))
        .map(|(i, id)| evaluate(i, id, &hat, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_described() {
        let cat = numeric_catalogue();
        let mut names: Vec<&str> = cat.iter().map(|c| c.name).collect();
        names.sort();
        let n = names.len();
        names.dedup();
        assert_eq!(n, names.len());
        for id in &cat {
            assert!(!id.formula.is_empty(), "{} has no formula", id.name);
        }
    }

    #[test]
    fn every_exact_identity_has_a_numeric_twin() {
        let numeric: Vec<&str> = numeric_catalogue().iter().map(|c| c.name).collect();
        for id in crate::symbolic::symbolic_catalogue() {
            assert!(numeric.contains(&id.name.as_str()), "missing {}", id.name);
        }
    }

    #[test]
    fn small_suite_passes_and_fault_is_caught() {
        let config = NumericSuiteConfig {
            nmax: 8,
            samples: 1,
            ..Default::default()
        };
        let only = vec!["coordinate_commutator".to_string(), "pauli_trace".to_string()];
        let good = run_numeric_suite(&config, Some(&only));
        assert_eq!(good.len(), 2);
        assert!(good.iter().all(|r| r.pass), "{good:?}");
        let bad = run_numeric_suite(
            &NumericSuiteConfig {
                fault: Some(Fault::SignFlip),
                ..config
            },
            Some(&only),
        );
        assert!(bad.iter().all(|r| !r.pass), "{bad:?}");
    }
}
