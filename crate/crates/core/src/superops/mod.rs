//! Superoperators: linear maps on wave functions built from left and right
//! multiplication by Fock-space operators.
//!
//! A [`SuperOperator`] is an immutable composition tree. Every node knows how
//! many Fock levels it can push support upward on the row side and on the
//! column side ([`Reach`]); inputs supported on levels `<= nmax - guard` are
//! mapped exactly, with no truncation error.

mod catalogue;

pub use catalogue::{numeric_catalogue, run_numeric_suite, Check, IdentityReport, NumericIdentity, NumericSuiteConfig};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fock::{pauli, Axis, FockBasis, FockMatrix, FockOperators, LengthScale};
use crate::ncwave::NCWaveFunction;
use crate::sparse::{SparseMatrix, C64};

/// How far a superoperator can raise the row and column occupation levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Reach {
    pub row: usize,
    pub col: usize,
}

impl Reach {
    fn then(self, other: Reach) -> Reach {
        Reach {
            row: self.row + other.row,
            col: self.col + other.col,
        }
    }

    fn max(self, other: Reach) -> Reach {
        Reach {
            row: self.row.max(other.row),
            col: self.col.max(other.col),
        }
    }

    /// Number of top levels an input must avoid.
    pub fn guard(self) -> usize {
        self.row.max(self.col)
    }
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Node {
    Identity,
    Left(Arc<FockMatrix>),
    Right(Arc<FockMatrix>),
    /// `f(r̂)`, diagonal in the matrix-unit basis: `Ψ_ab ↦ f(½(r_a + r_b)) Ψ_ab`.
    Radial {
        f: RadialFn,
        lambda: f64,
        label: &'static str,
    },
    Scale(C64, SuperOperator),
    Sum(Vec<SuperOperator>),
    /// Operator product; the last factor acts first.
    Compose(Vec<SuperOperator>),
    Commutator(SuperOperator, SuperOperator),
    Anticommutator(SuperOperator, SuperOperator),
}

#[derive(Clone)]
pub struct SuperOperator {
    node: Arc<Node>,
    dim: usize,
    reach: Reach,
}

impl fmt::Debug for SuperOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Identity => write!(f, "1"),
            Node::Left(m) => write!(f, "L[{}nz]", m.matrix().nnz()),
            Node::Right(m) => write!(f, "R[{}nz]", m.matrix().nnz()),
            Node::Radial { label, .. } => write!(f, "{label}(r)"),
            Node::Scale(c, s) => write!(f, "({c})*{s:?}"),
            Node::Sum(v) => f.debug_tuple("Sum").field(v).finish(),
            Node::Compose(v) => f.debug_tuple("Compose").field(v).finish(),
            Node::Commutator(a, b) => write!(f, "[{a:?}, {b:?}]"),
            Node::Anticommutator(a, b) => write!(f, "{{{a:?}, {b:?}}}"),
        }
    }
}

/// Deliberate corruption used to check that identity tests can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// First commutator becomes an anticommutator, or failing that the
    /// first summand of the first sum changes sign.
    SignFlip,
}

impl SuperOperator {
    fn from_node(node: Node, dim: usize, reach: Reach) -> Self {
        Self {
            node: Arc::new(node),
            dim,
            reach,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_node(Node::Identity, dim, Reach::default())
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_node(Node::Sum(Vec::new()), dim, Reach::default())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reach(&self) -> Reach {
        self.reach
    }

    pub fn guard_level(&self) -> usize {
        self.reach.guard()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_node(Node::Scale(c, self.clone()), self.dim, self.reach)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn sum(terms: Vec<SuperOperator>) -> Self {
        assert!(!terms.is_empty(), "empty sum has no dimension");
        let dim = terms[0].dim;
        let reach = terms.iter().fold(Reach::default(), |r, t| {
            assert_eq!(t.dim, dim, "dimension mismatch");
            r.max(t.reach)
        });
        Self::from_node(Node::Sum(terms), dim, reach)
    }

    /// Product `factors[0] ∘ factors[1] ∘ …`.
    pub fn compose(factors: Vec<SuperOperator>) -> Self {
        assert!(!factors.is_empty(), "empty product has no dimension");
        let dim = factors[0].dim;
        let reach = factors.iter().fold(Reach::default(), |r, t| {
            assert_eq!(t.dim, dim, "dimension mismatch");
            r.then(t.reach)
        });
        Self::from_node(Node::Compose(factors), dim, reach)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(vec![self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::sum(vec![self.clone(), other.scale_re(-1.0)])
    }

    /// `self ∘ other`.
    pub fn then_apply(&self, other: &Self) -> Self {
        Self::compose(vec![self.clone(), other.clone()])
    }

    pub fn apply(&self, psi: &NCWaveFunction) -> Result<NCWaveFunction> {
        if psi.matrix().dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: psi.matrix().dim(),
            });
        }
        Ok(psi.with_matrix(self.apply_matrix(psi.matrix(), psi.basis())))
    }

    fn apply_matrix(&self, m: &SparseMatrix, basis: &FockBasis) -> SparseMatrix {
        match &*self.node {
            Node::Identity => m.clone(),
            Node::Left(op) => op.matrix().matmul(m),
            Node::Right(op) => m.matmul(op.matrix()),
            Node::Radial { f, lambda, .. } => m.map_entries(|r, c, v| {
                let rad = 0.5 * lambda * (basis.level(r) + basis.level(c) + 2) as f64;
                v * f(rad)
            }),
            Node::Scale(c, s) => s.apply_matrix(m, basis).scale(*c),
            Node::Sum(terms) => {
                let one = C64::new(1.0, 0.0);
                terms.iter().fold(SparseMatrix::zeros(m.dim()), |acc, t| {
                    acc.lin_comb(one, &t.apply_matrix(m, basis), one)
                })
            }
            Node::Compose(factors) => factors
                .iter()
                .rev()
                .fold(m.clone(), |acc, f| f.apply_matrix(&acc, basis)),
            Node::Commutator(s, t) => {
                let st = s.apply_matrix(&t.apply_matrix(m, basis), basis);
                let ts = t.apply_matrix(&s.apply_matrix(m, basis), basis);
                st.sub(&ts)
            }
            Node::Anticommutator(s, t) => {
                let st = s.apply_matrix(&t.apply_matrix(m, basis), basis);
                let ts = t.apply_matrix(&s.apply_matrix(m, basis), basis);
                st.add(&ts)
            }
        }
    }

    /// Returns a corrupted copy, or `None` if the tree has nowhere to put a sign error.
    pub fn with_fault(&self, fault: Fault) -> Option<SuperOperator> {
        match fault {
            Fault::SignFlip => self.flip_first_commutator().or_else(|| self.flip_first_summand()),
        }
    }

    fn rebuild(&self, node: Node) -> SuperOperator {
        Self::from_node(node, self.dim, self.reach)
    }

    fn flip_first_commutator(&self) -> Option<SuperOperator> {
        match &*self.node {
            Node::Commutator(a, b) => Some(self.rebuild(Node::Anticommutator(a.clone(), b.clone()))),
            Node::Anticommutator(a, b) => a
                .flip_first_commutator()
                .map(|a| self.rebuild(Node::Anticommutator(a, b.clone())))
                .or_else(|| {
                    b.flip_first_commutator()
                        .map(|b| self.rebuild(Node::Anticommutator(a.clone(), b)))
                }),
            Node::Scale(c, s) => s.flip_first_commutator().map(|s| self.rebuild(Node::Scale(*c, s))),
            Node::Sum(v) => Self::replace_first(v, Self::flip_first_commutator).map(|v| self.rebuild(Node::Sum(v))),
            Node::Compose(v) => {
                Self::replace_first(v, Self::flip_first_commutator).map(|v| self.rebuild(Node::Compose(v)))
            }
            _ => None,
        }
    }

    fn flip_first_summand(&self) -> Option<SuperOperator> {
        match &*self.node {
            Node::Sum(v) if !v.is_empty() => {
                let mut v = v.clone();
                v[0] = v[0].scale_re(-1.0);
                Some(self.rebuild(Node::Sum(v)))
            }
            Node::Scale(c, s) => s.flip_first_summand().map(|s| self.rebuild(Node::Scale(*c, s))),
            Node::Compose(v) => {
                Self::replace_first(v, Self::flip_first_summand).map(|v| self.rebuild(Node::Compose(v)))
            }
            Node::Commutator(a, b) => a
                .flip_first_summand()
                .map(|a| self.rebuild(Node::Commutator(a, b.clone()))),
            Node::Anticommutator(a, b) => a
                .flip_first_summand()
                .map(|a| self.rebuild(Node::Anticommutator(a, b.clone()))),
            _ => None,
        }
    }

    fn replace_first(
        v: &[SuperOperator],
        f: fn(&SuperOperator) -> Option<SuperOperator>,
    ) -> Option<Vec<SuperOperator>> {
        v.iter().enumerate().find_map(|(i, s)| {
            f(s).map(|s| {
                let mut out = v.to_vec();
                out[i] = s;
                out
            })
        })
    }
}

pub fn left_mul(basis: &FockBasis, m: Arc<FockMatrix>) -> Result<SuperOperator> {
    check_dim(basis, &m)?;
    let reach = Reach { row: m.raise(), col: 0 };
    Ok(SuperOperator::from_node(Node::Left(m), basis.dim(), reach))
}

pub fn right_mul(basis: &FockBasis, m: Arc<FockMatrix>) -> Result<SuperOperator> {
    check_dim(basis, &m)?;
    let reach = Reach { row: 0, col: m.lower() };
    Ok(SuperOperator::from_node(Node::Right(m), basis.dim(), reach))
}

fn check_dim(basis: &FockBasis, m: &FockMatrix) -> Result<()> {
    if m.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: m.dim(),
        });
    }
    Ok(())
}

/// `ST − TS`.
pub fn commutator(s: &SuperOperator, t: &SuperOperator) -> SuperOperator {
    assert_eq!(s.dim, t.dim, "dimension mismatch");
    let reach = s.reach.then(t.reach);
    SuperOperator::from_node(Node::Commutator(s.clone(), t.clone()), s.dim, reach)
}

/// `ST + TS`.
pub fn anticommutator(s: &SuperOperator, t: &SuperOperator) -> SuperOperator {
    assert_eq!(s.dim, t.dim, "dimension mismatch");
    let reach = s.reach.then(t.reach);
    SuperOperator::from_node(Node::Anticommutator(s.clone(), t.clone()), s.dim, reach)
}

/// Energy together with the derived `ω = −2λE` and `η = 2/λ + ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    energy: f64,
    omega: f64,
    eta: f64,
}

impl EnergyParams {
    pub fn new(energy: f64, lambda: LengthScale) -> Self {
        let l = lambda.value();
        let omega = -2.0 * l * energy;
        Self {
            energy,
            omega,
            eta: 2.0 / l + omega,
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Auxiliary operators built from mixed left/right ladder pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxName {
    /// `ŵ_k = σ^k_{αβ}(â⁺_α b̂_β − â_β b̂⁺_α)`
    WK(Axis),
    /// `ζ̂_k = σ^k_{αβ}(â⁺_α b̂_β + â_β b̂⁺_α)`
    ZetaK(Axis),
    /// `ŵ = â⁺_α b̂_α − â_α b̂⁺_α`
    WScalar,
    /// `ζ̂ = â⁺_α b̂_α + â_α b̂⁺_α`
    ZetaScalar,
    /// `Ŵ_k = 2x̂_k/λ − ζ̂_k`
    BigWK(Axis),
    /// `Ŵ = 2r̂/λ − ζ̂`
    BigW,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WPrimeName {
    /// `Ŵ′_k = ηx̂_k − ζ̂_k`
    K(Axis),
    /// `Ŵ′ = ηr̂ − ζ̂`
    Scalar,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// All hatted operators on one truncated basis and length scale.
#[derive(Debug, Clone)]
pub struct HatOperators {
    ops: Arc<FockOperators>,
    a: [SuperOperator; 2],
    a_dag: [SuperOperator; 2],
    b: [SuperOperator; 2],
    b_dag: [SuperOperator; 2],
    x_left: [SuperOperator; 3],
    x_right: [SuperOperator; 3],
}

impl HatOperators {
    pub fn new(basis: Arc<FockBasis>, lambda: LengthScale) -> Self {
        let ops = Arc::new(FockOperators::new(basis, lambda));
        let b = &*ops.basis;
        let lift = |f: fn(&FockBasis, Arc<FockMatrix>) -> Result<SuperOperator>, m: &Arc<FockMatrix>| {
            f(b, Arc::clone(m)).expect("operators share the basis")
        };
        let a = [lift(left_mul, &ops.a[0]), lift(left_mul, &ops.a[1])];
        let a_dag = [lift(left_mul, &ops.a_dag[0]), lift(left_mul, &ops.a_dag[1])];
        let bb = [lift(right_mul, &ops.a[0]), lift(right_mul, &ops.a[1])];
        let b_dag = [lift(right_mul, &ops.a_dag[0]), lift(right_mul, &ops.a_dag[1])];
        let x_left = [0, 1, 2].map(|k| lift(left_mul, &ops.x[k]));
        let x_right = [0, 1, 2].map(|k| lift(right_mul, &ops.x[k]));
        Self {
            a,
            a_dag,
            b: bb,
            b_dag,
            x_left,
            x_right,
            ops,
        }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.ops.basis
    }

    pub fn lambda(&self) -> LengthScale {
        self.ops.lambda
    }

    fn l(&self) -> f64 {
        self.ops.lambda.value()
    }

    pub fn dim(&self) -> usize {
        self.ops.basis.dim()
    }

    pub fn identity(&self) -> SuperOperator {
        SuperOperator::identity(self.dim())
    }

    /// `â_α` (left multiplication by `a_α`), `α` in 1..=2.
    pub fn a_hat(&self, alpha: usize) -> SuperOperator {
        self.a[alpha - 1].clone()
    }

    pub fn a_hat_dag(&self, alpha: usize) -> SuperOperator {
        self.a_dag[alpha - 1].clone()
    }

    /// `b̂_α Ψ = Ψ a_α`.
    pub fn b_hat(&self, alpha: usize) -> SuperOperator {
        self.b[alpha - 1].clone()
    }

    /// `b̂⁺_α Ψ = Ψ a⁺_α`.
    pub fn b_hat_dag(&self, alpha: usize) -> SuperOperator {
        self.b_dag[alpha - 1].clone()
    }

    pub fn position_left(&self, i: Axis) -> SuperOperator {
        self.x_left[i.index()].clone()
    }

    pub fn position_right(&self, i: Axis) -> SuperOperator {
        self.x_right[i.index()].clone()
    }

    /// `x̂_i Ψ = ½(x_i Ψ + Ψ x_i)`.
    pub fn position(&self, i: Axis) -> SuperOperator {
        self.position_left(i).add(&self.position_right(i)).scale_re(0.5)
    }

    pub fn radius_left(&self) -> SuperOperator {
        left_mul(self.basis(), Arc::clone(&self.ops.r)).expect("shared basis")
    }

    pub fn radius_right(&self) -> SuperOperator {
        right_mul(self.basis(), Arc::clone(&self.ops.r)).expect("shared basis")
    }

    pub fn radius(&self) -> SuperOperator {
        self.radius_left().add(&self.radius_right()).scale_re(0.5)
    }

    /// `f(r̂)` for a function of the symmetric radius.
    pub fn radial_function(
        &self,
        label: &'static str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> SuperOperator {
        SuperOperator::from_node(
            Node::Radial {
                f: Arc::new(f),
                lambda: self.l(),
                label,
            },
            self.dim(),
            Reach::default(),
        )
    }

    /// `1/r̂`; exact because `r̂ ≥ λ > 0`.
    pub fn inverse_radius(&self) -> SuperOperator {
        self.radial_function("1/", |r| 1.0 / r)
    }

    /// `L̂_i = (x̂ᴸ_i − x̂ᴿ_i)/(2λ)`.
    pub fn angular_momentum(&self, i: Axis) -> SuperOperator {
        self.position_left(i)
            .sub(&self.position_right(i))
            .scale_re(0.5 / self.l())
    }

    /// `Σ_α (â⁺_α − b̂⁺_α)(â_α − b̂_α)`, i.e. `[a⁺_α,[a_α,Ψ]]`.
    fn double_commutator(&self) -> SuperOperator {
        SuperOperator::sum(
            (1..=2)
                .map(|al| {
                    let up = self.a_hat_dag(al).sub(&self.b_hat_dag(al));
                    let down = self.a_hat(al).sub(&self.b_hat(al));
                    up.then_apply(&down)
                })
                .collect(),
        )
    }

    /// `Δ̂Ψ = −(1/λr̂)[a⁺_α,[a_α,Ψ]]`.
    pub fn laplacian(&self) -> SuperOperator {
        self.inverse_radius()
            .then_apply(&self.double_commutator())
            .scale_re(-1.0 / self.l())
    }

    /// `Ĥ = −½Δ̂ − q/r̂`.
    pub fn hamiltonian(&self, q: f64) -> SuperOperator {
        self.laplacian().scale_re(-0.5).sub(&self.inverse_radius().scale_re(q))
    }

    /// `Ĥ = (1/2λr̂)Ŵ − q/r̂`.
    pub fn hamiltonian_w_form(&self, q: f64) -> SuperOperator {
        let invr = self.inverse_radius();
        invr.then_apply(&self.aux(AuxName::BigW))
            .scale_re(0.5 / self.l())
            .sub(&invr.scale_re(q))
    }

    /// `V̂_i = −i[x̂_i, Ĥ]`.
    pub fn velocity_commutator(&self, i: Axis, q: f64) -> SuperOperator {
        commutator(&self.position(i), &self.hamiltonian(q)).scale(-I)
    }

    /// `V̂_i = (i/2r̂)ŵ_i`.
    pub fn velocity(&self, i: Axis) -> SuperOperator {
        self.inverse_radius()
            .then_apply(&self.aux(AuxName::WK(i)))
            .scale(I * 0.5)
    }

    /// `â⁺_α b̂_β ± â_β b̂⁺_α`.
    fn mixed(&self, alpha: usize, beta: usize, sign: f64) -> SuperOperator {
        let first = self.a_hat_dag(alpha).then_apply(&self.b_hat(beta));
        let second = self.a_hat(beta).then_apply(&self.b_hat_dag(alpha));
        first.add(&second.scale_re(sign))
    }

    fn pauli_contract(&self, k: Axis, sign: f64) -> SuperOperator {
        let s = pauli(k);
        let mut terms = Vec::new();
        for al in 1..=2 {
            for be in 1..=2 {
                let coef = s[al - 1][be - 1];
                if coef != c(0.0) {
                    terms.push(self.mixed(al, be, sign).scale(coef));
                }
            }
        }
        SuperOperator::sum(terms)
    }

    fn trace(&self, sign: f64) -> SuperOperator {
        SuperOperator::sum((1..=2).map(|al| self.mixed(al, al, sign)).collect())
    }

    pub fn aux(&self, name: AuxName) -> SuperOperator {
        match name {
            AuxName::WK(k) => self.pauli_contract(k, -1.0),
            AuxName::ZetaK(k) => self.pauli_contract(k, 1.0),
            AuxName::WScalar => self.trace(-1.0),
            AuxName::ZetaScalar => self.trace(1.0),
            AuxName::BigWK(k) => self
                .position(k)
                .scale_re(2.0 / self.l())
                .sub(&self.aux(AuxName::ZetaK(k))),
            AuxName::BigW => self
                .radius()
                .scale_re(2.0 / self.l())
                .sub(&self.aux(AuxName::ZetaScalar)),
        }
    }

    /// `ηx̂_k − ζ̂_k` or `ηr̂ − ζ̂`.
    pub fn w_prime(&self, name: WPrimeName, energy: EnergyParams) -> SuperOperator {
        match name {
            WPrimeName::K(k) => self
                .position(k)
                .scale_re(energy.eta())
                .sub(&self.aux(AuxName::ZetaK(k))),
            WPrimeName::Scalar => self.radius().scale_re(energy.eta()).sub(&self.aux(AuxName::ZetaScalar)),
        }
    }

    /// `Ŵ_k + ωx̂_k` or `Ŵ + ωr̂`; equal to [`Self::w_prime`].
    pub fn w_prime_shifted(&self, name: WPrimeName, energy: EnergyParams) -> SuperOperator {
        match name {
            WPrimeName::K(k) => self
                .aux(AuxName::BigWK(k))
                .add(&self.position(k).scale_re(energy.omega())),
            WPrimeName::Scalar => self.aux(AuxName::BigW).add(&self.radius().scale_re(energy.omega())),
        }
    }

    fn coulomb_term(&self, k: Axis, q: f64) -> SuperOperator {
        self.inverse_radius().then_apply(&self.position(k)).scale_re(q)
    }

    /// `Â_k = ½ε_{ijk}(L̂_iV̂_j + V̂_jL̂_i) + q x̂_k/r̂`.
    pub fn lrl(&self, k: Axis, q: f64) -> SuperOperator {
        let mut terms = Vec::new();
        for i in Axis::ALL {
            for j in Axis::ALL {
                let e = crate::fock::levi_civita(i.index(), j.index(), k.index());
                if e == 0.0 {
                    continue;
                }
                let (li, vj) = (self.angular_momentum(i), self.velocity(j));
                terms.push(anticommutator(&li, &vj).scale_re(0.5 * e));
            }
        }
        terms.push(self.coulomb_term(k, q));
        SuperOperator::sum(terms)
    }

    /// `Â_k = −(1/2λr̂)(r̂ζ̂_k − x̂_kζ̂) + q x̂_k/r̂`.
    pub fn lrl_zeta_form(&self, k: Axis, q: f64) -> SuperOperator {
        let inner = self
            .radius()
            .then_apply(&self.aux(AuxName::ZetaK(k)))
            .sub(&self.position(k).then_apply(&self.aux(AuxName::ZetaScalar)));
        self.inverse_radius()
            .then_apply(&inner)
            .scale_re(-0.5 / self.l())
            .add(&self.coulomb_term(k, q))
    }

    /// `Ŵ′_k/(2λ)`, the LRL vector restricted to the energy-`E` eigenspace.
    pub fn lrl_onshell(&self, k: Axis, energy: EnergyParams) -> SuperOperator {
        self.w_prime(WPrimeName::K(k), energy).scale_re(0.5 / self.l())
    }

    /// `Σ_j L̂_j L̂_j`.
    pub fn angular_momentum_sq(&self) -> SuperOperator {
        SuperOperator::sum(
            Axis::ALL
                .iter()
                .map(|&i| self.angular_momentum(i).then_apply(&self.angular_momentum(i)))
                .collect(),
        )
    }

    /// On-shell Casimirs: `Ĉ′₁ = L̂_jŴ′_j/(2λ)` and
    /// `Ĉ′₂ = (Ŵ′_iŴ′_i + (η²λ² − 4)(L̂_iL̂_i + 1))/(4λ²)`.
    pub fn casimir(&self, which: u8, energy: EnergyParams) -> SuperOperator {
        let l = self.l();
        match which {
            1 => SuperOperator::sum(
                Axis::ALL
                    .iter()
                    .map(|&j| self.angular_momentum(j).then_apply(&self.lrl_onshell(j, energy)))
                    .collect(),
            ),
            2 => {
                let ww = SuperOperator::sum(
                    Axis::ALL
                        .iter()
                        .map(|&i| {
                            let w = self.w_prime(WPrimeName::K(i), energy);
                            w.then_apply(&w)
                        })
                        .collect(),
                );
                let shift = energy.eta() * energy.eta() * l * l - 4.0;
                let ll1 = self.angular_momentum_sq().add(&self.identity());
                ww.add(&ll1.scale_re(shift)).scale_re(0.25 / (l * l))
            }
            _ => panic!("casimir index must be 1 or 2, got {which}"),
        }
    }
}
