//! Words in the ladder superoperators and their normal-ordered sums.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;

/// One of `â⁺₁ â⁺₂ â₁ â₂ b̂⁺₁ b̂⁺₂ b̂₁ b̂₂`, numbered in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const COUNT: usize = 8;

    /// `side`: false for `â`, true for `b̂`; `dagger` for the `+` letters; `mode` 1 or 2.
    pub fn new(side_b: bool, dagger: bool, mode: u8) -> Letter {
        assert!(mode == 1 || mode == 2, "mode must be 1 or 2");
        let base = if side_b { 4 } else { 0 } + if dagger { 0 } else { 2 };
        Letter(base + mode - 1)
    }

    pub fn from_index(i: u8) -> Letter {
        assert!((i as usize) < Self::COUNT);
        Letter(i)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_b(self) -> bool {
        self.0 >= 4
    }

    pub fn is_dagger(self) -> bool {
        self.0 % 4 < 2
    }

    pub fn mode(self) -> u8 {
        self.0 % 2 + 1
    }

    /// `[self, other]` when it is a scalar, as `±1`, else 0.
    fn contraction(self, other: Letter) -> i64 {
        if self.is_b() != other.is_b() || self.mode() != other.mode() {
            return 0;
        }
        match (self.is_dagger(), other.is_dagger()) {
            (false, true) if self.is_b() => -1,
            (false, true) => 1,
            (true, false) if self.is_b() => 1,
            (true, false) => -1,
            _ => 0,
        }
    }

    pub fn name(self) -> String {
        format!(
            "{}{}{}",
            if self.is_b() { "B" } else { "A" },
            if self.is_dagger() { "+" } else { "" },
            self.mode()
        )
    }
}

/// Normal-ordered word: exponents of the eight letters in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub [u32; Letter::COUNT]);

impl Word {
    pub fn unit() -> Word {
        Word::default()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn from_letters(letters: &[Letter]) -> Option<Word> {
        if letters.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        let mut e = [0; Letter::COUNT];
        for l in letters {
            e[l.index()] += 1;
        }
        Some(Word(e))
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                out.push(Letter(i as u8));
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let n = Letter(i as u8).name();
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Sum of letter strings in arbitrary order, as produced by the parser.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawExpr {
    pub terms: Vec<(Scalar, Vec<Letter>)>,
}

impl RawExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn letter(l: Letter) -> Self {
        Self {
            terms: vec![(Scalar::one(), vec![l])],
        }
    }

    pub fn add(mut self, other: RawExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scale(self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.into_iter().map(|(s, w)| (s.mul(c), w)).collect(),
        }
    }

    pub fn neg(self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    /// Concatenation product, distributed over the sums.
    pub fn mul(&self, other: &RawExpr) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                terms.push((c1.mul(c2), w));
            }
        }
        Self { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Canonical normal-ordered expression. Two expressions are equal iff their
/// term maps are identical.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct OperatorExpr {
    terms: BTreeMap<Word, Scalar>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(Word::unit(), c);
        out
    }

    pub fn word(w: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(w, Scalar::one());
        out
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(Word::from_letters(&[l]).unwrap())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_default();
        e.add_assign(&c);
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (w, s) in &self.terms {
            out.add_term(*w, s.mul(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// Product of two normal-ordered expressions by the closed-form
    /// reordering of each mode: `c^q (c⁺)^p = Σ_k s^k k! C(q,k) C(p,k) (c⁺)^{p−k} c^{q−k}`
    /// with `s = +1` for `â` and `s = −1` for `b̂`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let coef = c1.mul(c2);
                for (w, k) in wick_words(w1, w2) {
                    out.add_term(w, coef.mul(&Scalar::int(k)));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Expansion of `w1 · w2` into normal-ordered words with integer weights.
fn wick_words(w1: &Word, w2: &Word) -> Vec<(Word, i64)> {
    // four independent blocks: (â,1) (â,2) (b̂,1) (b̂,2); each block has a
    // creation-like index (dagger) and an annihilation-like index
    let blocks: [(usize, usize, i64); 4] = [(0, 2, 1), (1, 3, 1), (4, 6, -1), (5, 7, -1)];
    let mut partial: Vec<(Word, i64)> = vec![(Word::unit(), 1)];
    for (cre, ann, sign) in blocks {
        let (p1, q1) = (w1.0[cre], w1.0[ann]);
        let (p2, q2) = (w2.0[cre], w2.0[ann]);
        let mut next = Vec::new();
        for k in 0..=q1.min(p2) {
            let weight = sign.pow(k) * factorial(k) * binom(q1, k) * binom(p2, k);
            for (w, c) in &partial {
                let mut w = *w;
                w.0[cre] = p1 + p2 - k;
                w.0[ann] = q1 + q2 - k;
                next.push((w, c * weight));
            }
        }
        partial = next;
    }
    partial
}

/// Normal ordering by adjacent-swap rewriting: `XY → YX + [X,Y]` for every
/// out-of-order pair until each string is sorted.
pub fn normal_order(raw: &RawExpr) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    let mut work: Vec<(Scalar, Vec<Letter>)> = raw.terms.clone();
    while let Some((c, mut s)) = work.pop() {
        if c.is_zero() {
            continue;
        }
        match s.windows(2).position(|p| p[0] > p[1]) {
            None => out.add_term(Word::from_letters(&s).unwrap(), c),
            Some(i) => {
                let (x, y) = (s[i], s[i + 1]);
                let k = x.contraction(y);
                if k != 0 {
                    let mut shorter = s.clone();
                    shorter.drain(i..i + 2);
                    work.push((c.scale_int(k), shorter));
                }
                s.swap(i, i + 1);
                work.push((c, s));
            }
        }
    }
    out
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c}) {w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(m: u8) -> Letter {
        Letter::new(false, false, m)
    }
    fn ad(m: u8) -> Letter {
        Letter::new(false, true, m)
    }
    fn b(m: u8) -> Letter {
        Letter::new(true, false, m)
    }
    fn bd(m: u8) -> Letter {
        Letter::new(true, true, m)
    }

    fn raw(letters: &[Letter]) -> RawExpr {
        RawExpr {
            terms: vec![(Scalar::one(), letters.to_vec())],
        }
    }

    fn word(letters: &[Letter]) -> OperatorExpr {
        let mut sorted = letters.to_vec();
        sorted.sort();
        OperatorExpr::word(Word::from_letters(&sorted).unwrap())
    }

    #[test]
    fn letter_order_and_names() {
        let order = [ad(1), ad(2), a(1), a(2), bd(1), bd(2), b(1), b(2)];
        for (i, l) in order.iter().enumerate() {
            assert_eq!(l.index(), i);
        }
        assert_eq!(bd(2).name(), "B+2");
        assert_eq!(a(1).name(), "A1");
    }

    #[test]
    fn ccr_a() {
        let got = normal_order(&raw(&[a(1), ad(1)]));
        let want = word(&[ad(1), a(1)]).add(&OperatorExpr::scalar(Scalar::one()));
        assert_eq!(got, want);
    }

    #[test]
    fn ccr_b_has_negative_sign() {
        let got = normal_order(&raw(&[b(1), bd(1)]));
        let want = word(&[bd(1), b(1)]).sub(&OperatorExpr::scalar(Scalar::one()));
        assert_eq!(got, want);
    }

    #[test]
    fn sides_commute_without_correction() {
        assert_eq!(normal_order(&raw(&[a(1), bd(2)])), word(&[a(1), bd(2)]));
        assert_eq!(normal_order(&raw(&[bd(1), a(1)])), word(&[a(1), bd(1)]));
        assert_eq!(normal_order(&raw(&[a(2), ad(1)])), word(&[ad(1), a(2)]));
    }

    #[test]
    fn wick_matches_rewriting_on_examples() {
        let cases: Vec<Vec<Letter>> = vec![
            vec![a(1), a(1), ad(1), ad(1)],
            vec![b(2), b(2), bd(2), a(1), ad(1)],
            vec![a(1), b(1), ad(1), bd(1), a(1), bd(1)],
        ];
        for letters in cases {
            let by_rewrite = normal_order(&raw(&letters));
            let by_wick = letters.iter().fold(OperatorExpr::scalar(Scalar::one()), |acc, &l| {
                acc.mul(&OperatorExpr::letter(l))
            });
            assert_eq!(by_rewrite, by_wick, "{letters:?}");
        }
    }

    #[test]
    fn a_squared_adag_squared() {
        // a²a⁺² = a⁺²a² + 4a⁺a + 2
        let got = normal_order(&raw(&[a(1), a(1), ad(1), ad(1)]));
        let want = word(&[ad(1), ad(1), a(1), a(1)])
            .add(&word(&[ad(1), a(1)]).scale(&Scalar::int(4)))
            .add(&OperatorExpr::scalar(Scalar::int(2)));
        assert_eq!(got, want);
    }

    #[test]
    fn commutator_of_number_and_letter() {
        let n = word(&[ad(1), a(1)]);
        let l = OperatorExpr::letter(ad(1));
        assert_eq!(n.commutator(&l), l);
        let nb = word(&[bd(1), b(1)]);
        // [b⁺b, b⁺] = b⁺[b,b⁺] = −b⁺
        assert_eq!(
            nb.commutator(&OperatorExpr::letter(bd(1))),
            OperatorExpr::letter(bd(1)).scale(&Scalar::int(-1))
        );
    }
}
