//! Decides whether a normal-ordered superoperator vanishes on every balanced
//! wave function.
//!
//! A wave function is expanded in normal-ordered monomials
//! `(a⁺₁)^{M1} (a⁺₂)^{M2} a₁^{N1} a₂^{N2}`, written `u^M v^N`. On this basis the
//! four hat operators of one mode act as
//!
//! ```text
//! â⁺ = u      â = v + ∂_u      b̂ = v      b̂⁺ = u + ∂_v
//! ```
//!
//! so a word sends a monomial to a finite sum of shifted monomials whose
//! coefficients are polynomials in `(M1, M2, N1, N2)`. A monomial is balanced
//! when `M1 + M2 = N1 + N2`; the operator annihilates the balanced subspace iff
//! every coefficient polynomial vanishes after substituting `N2 = M1 + M2 − N1`.

use std::collections::BTreeMap;

use super::expr::{OperatorExpr, Word};
use super::scalar::Scalar;

/// Exponents of `(M1, M2, N1, N2)`.
type Exps = [u32; 4];

#[derive(Clone, Default, PartialEq, Debug)]
struct Poly {
    terms: BTreeMap<Exps, Scalar>,
}

impl Poly {
    fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        Self { terms }
    }

    /// `var + shift`.
    fn linear(var: usize, shift: i64) -> Self {
        let mut e = [0; 4];
        e[var] = 1;
        let mut p = Self::constant(Scalar::int(shift));
        p.terms.insert(e, Scalar::one());
        p
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Poly) {
        for (k, v) in &other.terms {
            let e = self.terms.entry(*k).or_default();
            e.add_assign(v);
            if e.is_zero() {
                self.terms.remove(k);
            }
        }
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]];
                let e = out.terms.entry(k).or_default();
                e.add_assign(&va.mul(vb));
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        };
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Falling factorial `(var + shift)(var + shift − 1)…` with `k` factors.
    fn falling(var: usize, shift: i64, k: u32) -> Poly {
        (0..k as i64).fold(Poly::constant(Scalar::one()), |acc, i| {
            acc.mul(&Poly::linear(var, shift - i))
        })
    }

    /// Replaces `N2` by `M1 + M2 − N1`.
    fn restrict_balanced(&self) -> Poly {
        let mut sub = Poly::linear(0, 0);
        sub.add_assign(&Poly::linear(1, 0));
        sub.add_assign(&Poly::linear(2, 0).scale(&Scalar::int(-1)));
        let mut powers = vec![Poly::constant(Scalar::one())];
        let mut out = Poly::default();
        for (k, v) in &self.terms {
            while powers.len() <= k[3] as usize {
                let next = powers.last().unwrap().mul(&sub);
                powers.push(next);
            }
            let mono = Poly {
                terms: BTreeMap::from([([k[0], k[1], k[2], 0], v.clone())]),
            };
            out.add_assign(&mono.mul(&powers[k[3] as usize]));
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k as i64).fold(1i64, |acc, i| acc * (n as i64 - i) / (i + 1))
}

/// Action of `â⁺^p â^q b̂⁺^s b̂^t` of one mode: output shift `(du, dv)` and the
/// coefficient polynomial in that mode's `(M, N)`.
fn mode_action(p: u32, q: u32, s: u32, t: u32, m_var: usize, n_var: usize) -> Vec<((i64, i64), Poly)> {
    let mut out = Vec::new();
    for k in 0..=s {
        for l in 0..=q {
            let c = Scalar::int(binomial(s, k) * binomial(q, l));
            // ∂_v^k on v^{N+t}, then ∂_u^l on u^{M+s−k}
            let poly = Poly::falling(n_var, t as i64, k)
                .mul(&Poly::falling(m_var, s as i64 - k as i64, l))
                .scale(&c);
            let du = p as i64 + s as i64 - k as i64 - l as i64;
            let dv = t as i64 + q as i64 - k as i64 - l as i64;
            out.push(((du, dv), poly));
        }
    }
    out
}

fn word_action(w: &Word) -> Vec<([i64; 4], Poly)> {
    let e = w.0;
    // letter slots: A+1 A+2 A1 A2 B+1 B+2 B1 B2
    let m1 = mode_action(e[0], e[2], e[4], e[6], 0, 2);
    let m2 = mode_action(e[1], e[3], e[5], e[7], 1, 3);
    let mut out = Vec::with_capacity(m1.len() * m2.len());
    for ((du1, dv1), p1) in &m1 {
        for ((du2, dv2), p2) in &m2 {
            out.push(([*du1, *du2, *dv1, *dv2], p1.mul(p2)));
        }
    }
    out
}

/// True iff `expr` maps every balanced wave function to zero.
pub fn annihilates_balanced(expr: &OperatorExpr) -> bool {
    let mut by_shift: BTreeMap<[i64; 4], Poly> = BTreeMap::new();
    for (w, c) in expr.terms() {
        for (shift, poly) in word_action(w) {
            by_shift.entry(shift).or_default().add_assign(&poly.scale(c));
        }
    }
    by_shift.values().all(|p| p.restrict_balanced().is_zero())
}
