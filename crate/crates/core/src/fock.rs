//! Truncated two-mode Fock space and the concrete operators living on it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::{SparseMatrix, C64};

/// Spatial axis 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Axis from its 1-based label.
    pub fn new(label: usize) -> Option<Axis> {
        match label {
            1 => Some(Axis::X),
            2 => Some(Axis::Y),
            3 => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn label(self) -> usize {
        self.index() + 1
    }
}

/// Levi-Civita symbol on 0-based axis indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Pauli matrix for `axis`, standard convention: σ¹ real symmetric,
/// σ² imaginary antisymmetric, σ³ diagonal.
pub fn pauli(axis: Axis) -> [[C64; 2]; 2] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        Axis::X => [[o, one], [one, o]],
        Axis::Y => [[o, -i], [i, o]],
        Axis::Z => [[one, o], [o, -one]],
    }
}

/// The non-commutative length parameter λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthScale(f64);

impl LengthScale {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Self(lambda))
        } else {
            Err(Error::InvalidLength(lambda))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Occupation states `|n1,n2⟩` with `n1 + n2 <= nmax`, ordered by total
/// occupation and then by descending `n1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    nmax: usize,
    states: Vec<(usize, usize)>,
}

impl FockBasis {
    pub fn new(nmax: usize) -> Self {
        let mut states = Vec::with_capacity(Self::dim_for(nmax));
        for n in 0..=nmax {
            for n2 in 0..=n {
                states.push((n - n2, n2));
            }
        }
        Self { nmax, states }
    }

    pub fn dim_for(nmax: usize) -> usize {
        (nmax + 1) * (nmax + 2) / 2
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> (usize, usize) {
        self.states[idx]
    }

    pub fn index(&self, n1: usize, n2: usize) -> Option<usize> {
        let n = n1 + n2;
        (n <= self.nmax).then(|| n * (n + 1) / 2 + n2)
    }

    /// Total occupation of the state at `idx`.
    pub fn level(&self, idx: usize) -> usize {
        let (n1, n2) = self.states[idx];
        n1 + n2
    }

    /// Basis positions belonging to total occupation `n`.
    pub fn level_range(&self, n: usize) -> std::ops::Range<usize> {
        let start = n * (n + 1) / 2;
        start..start + n + 1
    }
}

/// Single boson ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    A1,
    A2,
    A1Dag,
    A2Dag,
}

impl Ladder {
    pub fn annihilator(mode: usize) -> Ladder {
        if mode == 0 {
            Ladder::A1
        } else {
            Ladder::A2
        }
    }

    pub fn creator(mode: usize) -> Ladder {
        if mode == 0 {
            Ladder::A1Dag
        } else {
            Ladder::A2Dag
        }
    }

    /// Acts on an occupation pair; `None` if the result vanishes.
    fn act(self, (n1, n2): (usize, usize)) -> Option<((usize, usize), f64)> {
        match self {
            Ladder::A1 if n1 > 0 => Some(((n1 - 1, n2), (n1 as f64).sqrt())),
            Ladder::A2 if n2 > 0 => Some(((n1, n2 - 1), (n2 as f64).sqrt())),
            Ladder::A1Dag => Some(((n1 + 1, n2), ((n1 + 1) as f64).sqrt())),
            Ladder::A2Dag => Some(((n1, n2 + 1), ((n2 + 1) as f64).sqrt())),
            _ => None,
        }
    }
}

/// An operator on the truncated Fock space together with how far it can
/// move support between occupation levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    mat: SparseMatrix,
    raise: usize,
    lower: usize,
}

impl FockMatrix {
    pub fn new(basis: &FockBasis, mat: SparseMatrix) -> Result<Self> {
        if mat.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: mat.dim(),
            });
        }
        let (mut raise, mut lower) = (0usize, 0usize);
        for (r, c, _) in mat.iter() {
            let (lr, lc) = (basis.level(r), basis.level(c));
            raise = raise.max(lr.saturating_sub(lc));
            lower = lower.max(lc.saturating_sub(lr));
        }
        Ok(Self { mat, raise, lower })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Largest increase of total occupation produced by this operator.
    pub fn raise(&self) -> usize {
        self.raise
    }

    /// Largest decrease of total occupation produced by this operator.
    pub fn lower(&self) -> usize {
        self.lower
    }
}

/// Matrix of a word of ladder operators, applied right-to-left, built
/// entry by entry. Words that leave the truncated space map to zero.
fn word_matrix(basis: &FockBasis, terms: &[(C64, Vec<Ladder>)]) -> SparseMatrix {
    let mut trip = Vec::new();
    for (col, &state) in basis.states().iter().enumerate() {
        for (coef, word) in terms {
            let mut cur = Some((state, 1.0));
            for op in word.iter().rev() {
                cur = cur.and_then(|(s, w)| op.act(s).map(|(s2, f)| (s2, w * f)));
            }
            if let Some(((n1, n2), w)) = cur {
                if let Some(row) = basis.index(n1, n2) {
                    trip.push((row, col, coef * w));
                }
            }
        }
    }
    SparseMatrix::from_triplets(basis.dim(), trip)
}

pub fn build_basis(nmax: usize) -> FockBasis {
    FockBasis::new(nmax)
}

/// Standard boson ladder action; raising out of the truncation gives zero.
pub fn ladder_matrix(basis: &FockBasis, which: Ladder) -> FockMatrix {
    let m = word_matrix(basis, &[(C64::new(1.0, 0.0), vec![which])]);
    FockMatrix::new(basis, m).expect("dimension is consistent by construction")
}

/// `N = a⁺₁a₁ + a⁺₂a₂`.
pub fn number_matrix(basis: &FockBasis) -> FockMatrix {
    let diag: Vec<C64> = (0..basis.dim()).map(|i| C64::new(basis.level(i) as f64, 0.0)).collect();
    FockMatrix::new(basis, SparseMatrix::from_diagonal(&diag)).unwrap()
}

/// `x_i = λ σⁱ_{αβ} a⁺_α a_β`.
pub fn coordinate_matrix(basis: &FockBasis, axis: Axis, lambda: LengthScale) -> FockMatrix {
    let s = pauli(axis);
    let mut terms = Vec::new();
    for (alpha, row) in s.iter().enumerate() {
        for (beta, &entry) in row.iter().enumerate() {
            if entry != C64::new(0.0, 0.0) {
                terms.push((
                    entry * lambda.value(),
                    vec![Ladder::creator(alpha), Ladder::annihilator(beta)],
                ));
            }
        }
    }
    FockMatrix::new(basis, word_matrix(basis, &terms)).unwrap()
}

/// `r = λ(N + 1)`.
pub fn radius_matrix(basis: &FockBasis, lambda: LengthScale) -> FockMatrix {
    let diag: Vec<C64> = (0..basis.dim())
        .map(|i| C64::new(lambda.value() * (basis.level(i) + 1) as f64, 0.0))
        .collect();
    FockMatrix::new(basis, SparseMatrix::from_diagonal(&diag)).unwrap()
}

/// `r⁻¹`, exact since `r` is diagonal with entries at least λ.
pub fn inverse_radius_matrix(basis: &FockBasis, lambda: LengthScale) -> FockMatrix {
    let diag: Vec<C64> = (0..basis.dim())
        .map(|i| C64::new(1.0 / (lambda.value() * (basis.level(i) + 1) as f64), 0.0))
        .collect();
    FockMatrix::new(basis, SparseMatrix::from_diagonal(&diag)).unwrap()
}

pub fn identity_matrix(basis: &FockBasis) -> FockMatrix {
    FockMatrix::new(basis, SparseMatrix::identity(basis.dim())).unwrap()
}

/// Cached operator set for one basis and length scale.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub basis: Arc<FockBasis>,
    pub lambda: LengthScale,
    pub a: [Arc<FockMatrix>; 2],
    pub a_dag: [Arc<FockMatrix>; 2],
    pub x: [Arc<FockMatrix>; 3],
    pub r: Arc<FockMatrix>,
    pub identity: Arc<FockMatrix>,
}

impl FockOperators {
    pub fn new(basis: Arc<FockBasis>, lambda: LengthScale) -> Self {
        let b = basis.as_ref();
        Self {
            a: [
                Arc::new(ladder_matrix(b, Ladder::A1)),
                Arc::new(ladder_matrix(b, Ladder::A2)),
            ],
            a_dag: [
                Arc::new(ladder_matrix(b, Ladder::A1Dag)),
                Arc::new(ladder_matrix(b, Ladder::A2Dag)),
            ],
            x: Axis::ALL.map(|ax| Arc::new(coordinate_matrix(b, ax, lambda))),
            r: Arc::new(radius_matrix(b, lambda)),
            identity: Arc::new(identity_matrix(b)),
            basis,
            lambda,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: f64) -> LengthScale {
        LengthScale::new(v).unwrap()
    }

    /// Plain matrix commutator, the oracle for the algebra checks below.
    fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
        a.matmul(b).sub(&b.matmul(a))
    }

    #[test]
    fn basis_order_and_dimension() {
        assert_eq!(build_basis(0).states(), &[(0, 0)]);
        assert_eq!(build_basis(1).states(), &[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(build_basis(2).dim(), 6);
        let b = build_basis(7);
        assert_eq!(b.dim(), FockBasis::dim_for(7));
        for (i, &(n1, n2)) in b.states().iter().enumerate() {
            assert_eq!(b.index(n1, n2), Some(i));
            assert!(n1 + n2 <= 7);
        }
        assert_eq!(b.index(5, 3), None);
    }

    #[test]
    fn ladder_actions() {
        let b = build_basis(3);
        let a1 = ladder_matrix(&b, Ladder::A1);
        let a1d = ladder_matrix(&b, Ladder::A1Dag);
        let s10 = b.index(1, 0).unwrap();
        assert_eq!(a1.matrix().get(b.index(0, 0).unwrap(), s10), C64::new(1.0, 0.0));
        let v = a1d.matrix().get(b.index(2, 0).unwrap(), s10);
        assert!((v.re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((a1d.raise(), a1d.lower()), (1, 0));
        assert_eq!((a1.raise(), a1.lower()), (0, 1));
    }

    #[test]
    fn ccr_holds_below_top_level() {
        let b = build_basis(5);
        for mode in 0..2 {
            let a = ladder_matrix(&b, Ladder::annihilator(mode));
            let ad = ladder_matrix(&b, Ladder::creator(mode));
            let c = commutator(a.matrix(), ad.matrix());
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    if b.level(i) < 5 && b.level(j) < 5 {
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((c.get(i, j) - C64::new(want, 0.0)).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn number_operator_matches_ladder_products() {
        let b = build_basis(4);
        let n = number_matrix(&b);
        assert_eq!(n.matrix().get(0, 0), C64::new(0.0, 0.0));
        let s11 = b.index(1, 1).unwrap();
        assert_eq!(n.matrix().get(s11, s11), C64::new(2.0, 0.0));
        let prod = ladder_matrix(&b, Ladder::A1Dag)
            .matrix()
            .matmul(ladder_matrix(&b, Ladder::A1).matrix())
            .add(
                &ladder_matrix(&b, Ladder::A2Dag)
                    .matrix()
                    .matmul(ladder_matrix(&b, Ladder::A2).matrix()),
            );
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                assert!((prod.get(i, j) - n.matrix().get(i, j)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coordinates_act_as_pauli_bilinears() {
        let b = build_basis(2);
        let l = lam(1.0);
        let s10 = b.index(1, 0).unwrap();
        let s01 = b.index(0, 1).unwrap();
        let x3 = coordinate_matrix(&b, Axis::Z, l);
        assert_eq!(x3.matrix().get(s10, s10), C64::new(1.0, 0.0));
        let x1 = coordinate_matrix(&b, Axis::X, l);
        assert_eq!(x1.matrix().get(s01, s10), C64::new(1.0, 0.0));
        for ax in Axis::ALL {
            let x = coordinate_matrix(&b, ax, l);
            assert!(x.matrix().is_hermitian(0.0));
            assert_eq!((x.raise(), x.lower()), (0, 0));
        }
    }

    #[test]
    fn fuzzy_sphere_relations_on_full_space() {
        let b = build_basis(9);
        let l = lam(0.37);
        let x: Vec<_> = Axis::ALL.iter().map(|&a| coordinate_matrix(&b, a, l)).collect();
        let r = radius_matrix(&b, l);
        for i in 0..3 {
            for j in 0..3 {
                let mut rhs = SparseMatrix::zeros(b.dim());
                for k in 0..3 {
                    let e = levi_civita(i, j, k);
                    if e != 0.0 {
                        rhs = rhs.add(&x[k].matrix().scale(C64::new(0.0, 2.0 * l.value() * e)));
                    }
                }
                let diff = commutator(x[i].matrix(), x[j].matrix()).sub(&rhs);
                assert!(diff.max_abs() < 1e-13);
            }
            assert!(commutator(x[i].matrix(), r.matrix()).max_abs() < 1e-13);
        }
        let mut s = r.matrix().matmul(r.matrix());
        for xi in &x {
            s = s.sub(&xi.matrix().matmul(xi.matrix()));
        }
        let want = SparseMatrix::identity(b.dim()).scale(C64::new(l.value().powi(2), 0.0));
        assert!(s.sub(&want).max_abs() < 1e-13);
        assert_eq!(r.matrix().get(0, 0), C64::new(0.37, 0.0));
    }

    #[test]
    fn length_scale_must_be_positive() {
        assert!(LengthScale::new(0.0).is_err());
        assert!(LengthScale::new(-1.0).is_err());
        assert!(LengthScale::new(f64::NAN).is_err());
    }
}
