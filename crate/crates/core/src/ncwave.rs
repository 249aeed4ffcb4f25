//! Wave functions on the fuzzy space: operators on the auxiliary Fock space
//! with the weighted Hilbert-Schmidt inner product.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, LengthScale};
use crate::sparse::{SparseMatrix, C64};

/// A wave function Ψ, stored as its matrix on the Fock space.
#[derive(Debug, Clone)]
pub struct NCWaveFunction {
    basis: Arc<FockBasis>,
    mat: SparseMatrix,
    lambda: LengthScale,
}

impl NCWaveFunction {
    pub fn new(basis: Arc<FockBasis>, mat: SparseMatrix, lambda: LengthScale) -> Result<Self> {
        if mat.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: mat.dim(),
            });
        }
        Ok(Self { basis, mat, lambda })
    }

    pub fn zero(basis: Arc<FockBasis>, lambda: LengthScale) -> Self {
        let dim = basis.dim();
        Self {
            basis,
            mat: SparseMatrix::zeros(dim),
            lambda,
        }
    }

    pub fn identity(basis: Arc<FockBasis>, lambda: LengthScale) -> Self {
        let dim = basis.dim();
        Self {
            basis,
            mat: SparseMatrix::identity(dim),
            lambda,
        }
    }

    /// `|n1,n2⟩⟨n1',n2'|`.
    pub fn projector(
        basis: Arc<FockBasis>,
        lambda: LengthScale,
        ket: (usize, usize),
        bra: (usize, usize),
    ) -> Result<Self> {
        let idx = |(a, b): (usize, usize)| {
            basis.index(a, b).ok_or(Error::LevelOutOfRange {
                level: a + b,
                nmax: basis.nmax(),
            })
        };
        let (r, c) = (idx(ket)?, idx(bra)?);
        let mat = SparseMatrix::from_triplets(basis.dim(), vec![(r, c, C64::new(1.0, 0.0))]);
        Ok(Self { basis, mat, lambda })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.mat
    }

    pub fn lambda(&self) -> LengthScale {
        self.lambda
    }

    pub(crate) fn with_matrix(&self, mat: SparseMatrix) -> Self {
        Self {
            basis: Arc::clone(&self.basis),
            mat,
            lambda: self.lambda,
        }
    }

    /// Block-diagonal in total occupation, i.e. a member of the state space.
    pub fn is_balanced(&self) -> bool {
        self.mat
            .iter()
            .all(|(r, c, _)| self.basis.level(r) == self.basis.level(c))
    }

    /// Highest occupation level touched by a row or column.
    pub fn max_level(&self) -> Option<usize> {
        self.mat
            .iter()
            .map(|(r, c, _)| self.basis.level(r).max(self.basis.level(c)))
            .max()
    }

    pub fn scale(&self, alpha: C64) -> Self {
        self.with_matrix(self.mat.scale(alpha))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_matrix(self.mat.add(&other.mat)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_matrix(self.mat.sub(&other.mat)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.lambda != other.lambda || *self.basis != *other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(())
    }

    /// `4πλ³ Tr[(N+1) Ψ†Ψ]` without the balance check; used for residuals
    /// of intermediate operators.
    pub fn weighted_norm_sq_unchecked(&self) -> f64 {
        let l = self.lambda.value();
        let s: f64 = self
            .mat
            .iter()
            .map(|(_, c, v)| (self.basis.level(c) + 1) as f64 * v.norm_sqr())
            .sum();
        4.0 * PI * l * l * l * s
    }

    pub fn weighted_norm(&self) -> Result<f64> {
        weighted_norm_sq(self).map(f64::sqrt)
    }

    /// CSV matrix dump; see [`SparseMatrix::to_csv`].
    pub fn to_csv(&self) -> String {
        self.mat.to_csv()
    }
}

pub fn weighted_norm_sq(psi: &NCWaveFunction) -> Result<f64> {
    if !psi.is_balanced() {
        return Err(Error::Unbalanced);
    }
    Ok(psi.weighted_norm_sq_unchecked())
}

/// `⟨Φ,Ψ⟩ = 4πλ³ Tr[(N+1) Φ†Ψ]`.
pub fn inner_product(phi: &NCWaveFunction, psi: &NCWaveFunction) -> Result<C64> {
    phi.check_compatible(psi)?;
    if !phi.is_balanced() || !psi.is_balanced() {
        return Err(Error::Unbalanced);
    }
    Ok(inner_product_unchecked(phi, psi))
}

pub(crate) fn inner_product_unchecked(phi: &NCWaveFunction, psi: &NCWaveFunction) -> C64 {
    let l = phi.lambda.value();
    let mut s = C64::new(0.0, 0.0);
    for r in 0..phi.mat.dim() {
        let mut a = phi.mat.row(r).peekable();
        let mut b = psi.mat.row(r).peekable();
        while let (Some(&(ca, va)), Some(&(cb, vb))) = (a.peek(), b.peek()) {
            if ca < cb {
                a.next();
            } else if cb < ca {
                b.next();
            } else {
                s += (phi.basis.level(ca) + 1) as f64 * va.conj() * vb;
                a.next();
                b.next();
            }
        }
    }
    s * (4.0 * PI * l * l * l)
}

/// Values `R(λ(N+1))` on Fock levels `N = 0..=nmax`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(basis: &FockBasis, value: f64) -> Self {
        Self {
            values: vec![value; basis.nmax() + 1],
        }
    }

    /// Samples an analytic `R(r)` at `r = λ(N+1)`.
    pub fn sample(basis: &FockBasis, lambda: LengthScale, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: (0..=basis.nmax()).map(|n| f(lambda.value() * (n + 1) as f64)).collect(),
        }
    }

    pub fn at(&self, level: usize) -> f64 {
        self.values.get(level).copied().unwrap_or(0.0)
    }
}

/// Indicator profile of a single Fock level.
pub fn delta_radial_profile(basis: &FockBasis, level: usize) -> Result<RadialProfile> {
    if level > basis.nmax() {
        return Err(Error::LevelOutOfRange {
            level,
            nmax: basis.nmax(),
        });
    }
    let mut values = vec![0.0; basis.nmax() + 1];
    values[level] = 1.0;
    Ok(RadialProfile { values })
}

/// Angular labels `(j, m)`, stored doubled so half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WaveSpec {
    two_j: u32,
    two_m: i32,
}

impl WaveSpec {
    pub fn new(j: f64, m: f64) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidWaveSpec {
            j,
            m,
            reason: reason.into(),
        };
        let (tj, tm) = (2.0 * j, 2.0 * m);
        if j < 0.0 || tj.fract() != 0.0 || tm.fract() != 0.0 {
            return Err(bad("labels must be integers or half-integers, j >= 0"));
        }
        if m.abs() > j {
            return Err(bad("|m| > j"));
        }
        if (tj - tm).rem_euclid(2.0) != 0.0 {
            return Err(bad("j - m must be an integer"));
        }
        Ok(Self {
            two_j: tj as u32,
            two_m: tm as i32,
        })
    }

    pub fn integer(j: usize, m: i64) -> Result<Self> {
        Self::new(j as f64, m as f64)
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.two_m as f64 / 2.0
    }

    pub fn is_integer(&self) -> bool {
        self.two_j % 2 == 0
    }
}

#[derive(Debug, Serialize)]
struct WaveHeader {
    nmax: usize,
    lambda: f64,
    j: f64,
    m: f64,
}

/// JSON header written next to a wave-function CSV dump.
pub fn wave_header_json(psi: &NCWaveFunction, spec: WaveSpec) -> String {
    serde_json::to_string(&WaveHeader {
        nmax: psi.basis.nmax(),
        lambda: psi.lambda.value(),
        j: spec.j(),
        m: spec.m(),
    })
    .expect("plain struct serializes")
}

/// `sqrt(k!/(k-n)!)`, the amplitude of `a^n` on `|k⟩`.
fn lowering_amp(k: usize, n: usize) -> f64 {
    (k - n + 1..=k).map(|v| v as f64).product::<f64>().sqrt()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

/// Angular-momentum eigenfunction
/// `Σ (a⁺₁)^{m1}(a⁺₂)^{m2}/(m1!m2!) · R(r) · a₁^{n1}(−a₂)^{n2}/(n1!n2!)`
/// summed over `m1+m2 = n1+n2 = j`, `m1−m2−n1+n2 = 2m`.
pub fn build_psi_jm(
    basis: &Arc<FockBasis>,
    lambda: LengthScale,
    spec: WaveSpec,
    radial: &RadialProfile,
) -> Result<NCWaveFunction> {
    if !spec.is_integer() {
        return Err(Error::InvalidWaveSpec {
            j: spec.j(),
            m: spec.m(),
            reason: "the monomial construction needs integer j".into(),
        });
    }
    let j = spec.two_j as usize / 2;
    let m = spec.two_m as i64 / 2;
    if j > basis.nmax() {
        return Err(Error::InvalidWaveSpec {
            j: spec.j(),
            m: spec.m(),
            reason: format!("j exceeds nmax = {}", basis.nmax()),
        });
    }
    // n2 = m2 + m
    let lo = 0.max(-m) as usize;
    let hi = (j as i64).min(j as i64 - m) as usize;
    let mut trip = Vec::new();
    for m2 in lo..=hi {
        let n2 = (m2 as i64 + m) as usize;
        let (m1, n1) = (j - m2, j - n2);
        let norm = 1.0 / (factorial(m1) * factorial(m2) * factorial(n1) * factorial(n2));
        let sign = if n2 % 2 == 0 { 1.0 } else { -1.0 };
        for (col, &(k1, k2)) in basis.states().iter().enumerate() {
            if k1 < n1 || k2 < n2 {
                continue;
            }
            let (l1, l2) = (k1 - n1, k2 - n2);
            let r = radial.at(l1 + l2);
            if r == 0.0 {
                continue;
            }
            let (o1, o2) = (l1 + m1, l2 + m2);
            let row = match basis.index(o1, o2) {
                Some(row) => row,
                None => continue,
            };
            let amp = lowering_amp(k1, n1) * lowering_amp(k2, n2) * lowering_amp(o1, m1) * lowering_amp(o2, m2);
            trip.push((row, col, C64::new(sign * norm * amp * r, 0.0)));
        }
    }
    NCWaveFunction::new(
        Arc::clone(basis),
        SparseMatrix::from_triplets(basis.dim(), trip),
        lambda,
    )
}

/// Random balanced wave function supported on levels `0..=max_level`,
/// with independent standard-normal-ish complex entries in every block.
pub fn random_balanced<R: Rng>(
    basis: &Arc<FockBasis>,
    lambda: LengthScale,
    max_level: usize,
    rng: &mut R,
) -> NCWaveFunction {
    let mut trip = Vec::new();
    for n in 0..=max_level.min(basis.nmax()) {
        for r in basis.level_range(n) {
            for c in basis.level_range(n) {
                let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                trip.push((r, c, v));
            }
        }
    }
    NCWaveFunction {
        basis: Arc::clone(basis),
        mat: SparseMatrix::from_triplets(basis.dim(), trip),
        lambda,
    }
}
