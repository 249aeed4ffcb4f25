//! Expression grammar for ladder-superoperator identities.
//!
//! ```text
//! identity := NAME ':' expr '==' expr [ '[quotient=balanced]' ]
//! expr     := ['+'|'-'] term { ('+'|'-') term }
//! term     := factor { ['*'] factor }               juxtaposition is product
//! factor   := atom [ '^' INT ] { '/' INT }
//! atom     := INT | 'i' | 'lambda' | 'omega' | 'eta'
//!           | letter | macro | func
//!           | '(' expr ')' | '[' expr ',' expr ']' | '{' expr ',' expr '}'
//! letter   := ('A'|'B') ['+'] idx | ('A'|'B') idx '+'      e.g. A+1, Balpha, A1+
//! func     := 'sigma(' idx ',' idx ',' idx ')' | 'delta(' idx ',' idx ')'
//!           | 'eps(' idx ',' idx ',' idx ')'
//! macro    := NAME [ '_' idx ] | NAME '(' idx ',' idx ')'
//! idx      := '1' | '2' | '3' | greek name | latin name
//! ```
//!
//! Greek index names (`alpha beta gamma mu nu rho tau`) run over the two
//! boson modes; latin names (`i j k l m n p`) run over the three axes.
//! An index occurring twice or more inside one product, commutator or power
//! is summed at the innermost such node. Indices left over are free.
//!
//! Macros: `xL_k xR_k x_k rL rR r L_k zeta zeta_k zeta(a,b) w w_k w(a,b)
//! W W_k Wp Wp_k` (`W'` is accepted for `Wp`).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

use super::expr::{Letter, RawExpr};
use super::scalar::Scalar;
use crate::error::{Error, Result};

const GREEK: [&str; 7] = ["alpha", "beta", "gamma", "mu", "nu", "rho", "tau"];
const LATIN: [&str; 7] = ["i", "j", "k", "l", "m", "n", "p"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IdxKind {
    Mode,
    Axis,
}

impl IdxKind {
    fn range(self) -> std::ops::RangeInclusive<u8> {
        match self {
            IdxKind::Mode => 1..=2,
            IdxKind::Axis => 1..=3,
        }
    }

    fn of_name(name: &str) -> Option<IdxKind> {
        if GREEK.contains(&name) {
            Some(IdxKind::Mode)
        } else if LATIN.contains(&name) {
            Some(IdxKind::Axis)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Idx {
    Fixed(u8),
    Var(String),
}

#[derive(Debug, Clone)]
enum Node {
    Num(BigRational),
    Imag,
    Lambda,
    Omega,
    Eta,
    Letter {
        b: bool,
        dagger: bool,
        idx: Idx,
    },
    Macro {
        name: String,
        args: Vec<Idx>,
    },
    Func {
        name: String,
        args: Vec<Idx>,
    },
    Pow {
        base: Box<Node>,
        exp: i32,
        bound: Vec<String>,
    },
    Div(Box<Node>, BigInt),
    Sum(Vec<(bool, Node)>),
    Product {
        factors: Vec<Node>,
        bound: Vec<String>,
    },
    Comm {
        a: Box<Node>,
        b: Box<Node>,
        anti: bool,
        bound: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Letter { b: bool, dagger: bool, idx: String },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Underscore,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|c| c.1);
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match ch {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '_' => Some(Tok::Underscore),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|c| c.1).collect();
            let v = text.parse().map_err(|_| err(pos, "integer too large"))?;
            out.push((pos, Tok::Int(v)));
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while at(i).is_some_and(|c| c.is_ascii_alphabetic() || c == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|c| c.1).collect();
            // ladder letters: A+1, A1, A1+, Balpha, B+beta
            if word == "A" || word == "B" || word.starts_with('A') || word.starts_with('B') {
                let b = word.starts_with('B');
                let rest = &word[1..];
                if rest.is_empty() {
                    let mut dagger = false;
                    let mut j = i;
                    if at(j) == Some('+') {
                        dagger = true;
                        j += 1;
                    }
                    let istart = j;
                    if at(j).is_some_and(|c| c.is_ascii_digit()) {
                        j += 1;
                    } else {
                        while at(j).is_some_and(|c| c.is_ascii_alphabetic()) {
                            j += 1;
                        }
                    }
                    if j == istart {
                        return Err(err(pos, format!("letter '{word}' needs a mode index")));
                    }
                    let idx: String = chars[istart..j].iter().map(|c| c.1).collect();
                    i = j;
                    if !dagger && postfix_dagger(&chars, i) {
                        dagger = true;
                        i += 1;
                    }
                    out.push((pos, Tok::Letter { b, dagger, idx }));
                    continue;
                }
                if GREEK.contains(&rest) {
                    let mut dagger = false;
                    if postfix_dagger(&chars, i) {
                        dagger = true;
                        i += 1;
                    }
                    out.push((
                        pos,
                        Tok::Letter {
                            b,
                            dagger,
                            idx: rest.to_string(),
                        },
                    ));
                    continue;
                }
            }
            out.push((pos, Tok::Ident(word)));
            continue;
        }
        return Err(err(pos, format!("unexpected character '{ch}'")));
    }
    Ok(out)
}

/// A `+` glued to a letter is a dagger only when nothing operand-like follows.
fn postfix_dagger(chars: &[(usize, char)], i: usize) -> bool {
    if chars.get(i).map(|c| c.1) != Some('+') {
        return false;
    }
    match chars.get(i + 1).map(|c| c.1) {
        None => true,
        Some(c) => c.is_whitespace() || matches!(c, ',' | ')' | ']' | '}'),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let p = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(err(p, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut terms = Vec::new();
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        terms.push((neg, self.term()?));
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push((false, self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Node::Sum(terms))
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Ident(_) | Tok::Letter { .. } | Tok::LParen | Tok::LBracket | Tok::LBrace)
        )
    }

    fn term(&mut self) -> Result<Node> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.bump();
                factors.push(self.factor()?);
            } else if self.starts_atom() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        Ok(Node::Product {
            factors,
            bound: Vec::new(),
        })
    }

    fn factor(&mut self) -> Result<Node> {
        let mut node = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let p = self.here();
            let neg = if self.peek() == Some(&Tok::Minus) {
                self.bump();
                true
            } else {
                false
            };
            let e = match self.bump() {
                Some(Tok::Int(v)) => v as i32,
                _ => return Err(err(p, "expected integer exponent")),
            };
            let exp = if neg { -e } else { e };
            if exp < 0 && !matches!(node, Node::Lambda) {
                return Err(err(p, "only lambda may carry a negative power"));
            }
            node = Node::Pow {
                base: Box::new(node),
                exp,
                bound: Vec::new(),
            };
        }
        while self.peek() == Some(&Tok::Slash) {
            self.bump();
            let p = self.here();
            match self.bump() {
                Some(Tok::Int(0)) => return Err(err(p, "division by zero")),
                Some(Tok::Int(v)) => node = Node::Div(Box::new(node), BigInt::from(v)),
                _ => return Err(err(p, "expected integer divisor")),
            }
        }
        Ok(node)
    }

    fn idx(&mut self) -> Result<Idx> {
        let p = self.here();
        match self.bump() {
            Some(Tok::Int(v)) if (1..=3).contains(&v) => Ok(Idx::Fixed(v as u8)),
            Some(Tok::Ident(name)) if IdxKind::of_name(&name).is_some() => Ok(Idx::Var(name)),
            Some(Tok::Ident(name)) => Err(err(p, format!("unknown index name '{name}'"))),
            _ => Err(err(p, "expected index")),
        }
    }

    fn idx_list(&mut self) -> Result<Vec<Idx>> {
        self.expect(Tok::LParen, "'('")?;
        let mut args = vec![self.idx()?];
        while self.peek() == Some(&Tok::Comma) {
            self.bump();
            args.push(self.idx()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Node> {
        let p = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Node::Num(BigRational::from_integer(BigInt::from(v)))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(open @ (Tok::LBracket | Tok::LBrace)) => {
                let anti = open == Tok::LBrace;
                let a = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.expr()?;
                self.expect(if anti { Tok::RBrace } else { Tok::RBracket }, "closing bracket")?;
                Ok(Node::Comm {
                    a: Box::new(a),
                    b: Box::new(b),
                    anti,
                    bound: Vec::new(),
                })
            }
            Some(Tok::Letter { b, dagger, idx }) => {
                let idx = match idx.parse::<u8>() {
                    Ok(v) if v == 1 || v == 2 => Idx::Fixed(v),
                    Ok(_) => return Err(err(p, "mode index must be 1 or 2")),
                    Err(_) if IdxKind::of_name(&idx) == Some(IdxKind::Mode) => Idx::Var(idx),
                    Err(_) => return Err(err(p, format!("'{idx}' is not a mode index"))),
                };
                Ok(Node::Letter { b, dagger, idx })
            }
            Some(Tok::Ident(name)) => self.named(p, name),
            _ => Err(err(p, "expected operand")),
        }
    }

    fn named(&mut self, p: usize, name: String) -> Result<Node> {
        match name.as_str() {
            "i" => return Ok(Node::Imag),
            "lambda" => return Ok(Node::Lambda),
            "omega" => return Ok(Node::Omega),
            "eta" => return Ok(Node::Eta),
            "sigma" | "delta" | "eps" => {
                let args = self.idx_list()?;
                let want = if name == "delta" { 2 } else { 3 };
                if args.len() != want {
                    return Err(err(p, format!("{name} takes {want} indices")));
                }
                return Ok(Node::Func { name, args });
            }
            _ => {}
        }
        let canon = if name == "W'" { "Wp".to_string() } else { name };
        let (axis_ok, pair_ok, bare_ok) = match canon.as_str() {
            "x" | "xL" | "xR" | "L" => (true, false, false),
            "r" | "rL" | "rR" => (false, false, true),
            "zeta" | "w" => (true, true, true),
            "W" | "Wp" => (true, false, true),
            _ => return Err(err(p, format!("unknown name '{canon}'"))),
        };
        let args = match self.peek() {
            Some(Tok::Underscore) if axis_ok => {
                self.bump();
                vec![self.idx()?]
            }
            Some(Tok::LParen) if pair_ok => self.idx_list()?,
            _ if bare_ok => Vec::new(),
            _ => return Err(err(p, format!("'{canon}' needs an index"))),
        };
        if pair_ok && args.len() > 2 {
            return Err(err(p, format!("'{canon}' takes at most two indices")));
        }
        Ok(Node::Macro { name: canon, args })
    }
}

fn slot_kinds(node: &Node) -> Vec<(IdxKind, &Idx)> {
    match node {
        Node::Letter { idx, .. } => vec![(IdxKind::Mode, idx)],
        Node::Func { name, args } => match name.as_str() {
            "sigma" => vec![
                (IdxKind::Axis, &args[0]),
                (IdxKind::Mode, &args[1]),
                (IdxKind::Mode, &args[2]),
            ],
            "eps" => args.iter().map(|a| (IdxKind::Axis, a)).collect(),
            // delta accepts either kind; both arguments must agree
            _ => {
                let k = args
                    .iter()
                    .find_map(|a| match a {
                        Idx::Var(v) => IdxKind::of_name(v),
                        Idx::Fixed(3) => Some(IdxKind::Axis),
                        _ => None,
                    })
                    .unwrap_or(IdxKind::Axis);
                args.iter().map(|a| (k, a)).collect()
            }
        },
        Node::Macro { args, .. } => {
            let kind = if args.len() == 2 { IdxKind::Mode } else { IdxKind::Axis };
            args.iter().map(|a| (kind, a)).collect()
        }
        _ => Vec::new(),
    }
}

/// Validates index kinds and attaches summation indices bottom-up. Returns the
/// occurrence counts of indices still free below this node.
fn bind(node: &mut Node) -> Result<BTreeMap<String, usize>> {
    let mut counts = BTreeMap::new();
    match node {
        Node::Letter { .. } | Node::Func { .. } | Node::Macro { .. } => {
            for (kind, idx) in slot_kinds(node) {
                match idx {
                    Idx::Fixed(v) => {
                        if !kind.range().contains(v) {
                            return Err(Error::Symbolic(format!("index {v} out of range for {kind:?}")));
                        }
                    }
                    Idx::Var(name) => {
                        if IdxKind::of_name(name) != Some(kind) {
                            return Err(Error::Symbolic(format!(
                                "index '{name}' used where a {} index is required",
                                if kind == IdxKind::Mode { "mode" } else { "axis" }
                            )));
                        }
                        *counts.entry(name.clone()).or_insert(0) += 1;
                    }
                }
            }
        }
        Node::Div(inner, _) => return bind(inner),
        Node::Sum(terms) => {
            for (_, t) in terms {
                for (k, v) in bind(t)? {
                    let e = counts.entry(k).or_insert(0);
                    *e = (*e).max(v);
                }
            }
        }
        Node::Pow { base, exp, bound } => {
            for (k, v) in bind(base)? {
                counts.insert(k, v * exp.unsigned_abs() as usize);
            }
            *bound = take_repeated(&mut counts);
        }
        Node::Product { factors, bound } => {
            for f in factors.iter_mut() {
                for (k, v) in bind(f)? {
                    *counts.entry(k).or_insert(0) += v;
                }
            }
            *bound = take_repeated(&mut counts);
        }
        Node::Comm { a, b, bound, .. } => {
            for f in [a, b] {
                for (k, v) in bind(f)? {
                    *counts.entry(k).or_insert(0) += v;
                }
            }
            *bound = take_repeated(&mut counts);
        }
        Node::Num(_) | Node::Imag | Node::Lambda | Node::Omega | Node::Eta => {}
    }
    Ok(counts)
}

fn take_repeated(counts: &mut BTreeMap<String, usize>) -> Vec<String> {
    let rep: Vec<String> = counts.iter().filter(|(_, &v)| v >= 2).map(|(k, _)| k.clone()).collect();
    for k in &rep {
        counts.remove(k);
    }
    rep
}

type Env = BTreeMap<String, u8>;

fn resolve(idx: &Idx, env: &Env) -> Result<u8> {
    match idx {
        Idx::Fixed(v) => Ok(*v),
        Idx::Var(name) => env.get(name).copied().ok_or_else(|| Error::UnboundIndex(name.clone())),
    }
}

fn gauss(re: i64, im: i64) -> Scalar {
    Scalar::constant(Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    ))
}

/// `σ^k_{αβ}` with the standard Pauli matrices.
pub fn sigma_entry(k: u8, alpha: u8, beta: u8) -> Scalar {
    match (k, alpha, beta) {
        (1, 1, 2) | (1, 2, 1) => gauss(1, 0),
        (2, 1, 2) => gauss(0, -1),
        (2, 2, 1) => gauss(0, 1),
        (3, 1, 1) => gauss(1, 0),
        (3, 2, 2) => gauss(-1, 0),
        _ => Scalar::zero(),
    }
}

fn eps_value(i: u8, j: u8, k: u8) -> i64 {
    crate::fock::levi_civita(i as usize - 1, j as usize - 1, k as usize - 1) as i64
}

/// Enumerates assignments of `vars` over their ranges, extending `env`.
fn assignments(vars: &[String], env: &Env) -> Vec<Env> {
    let mut out = vec![env.clone()];
    for v in vars {
        let kind = IdxKind::of_name(v).expect("validated index name");
        let mut next = Vec::new();
        for e in &out {
            for val in kind.range() {
                let mut e = e.clone();
                e.insert(v.clone(), val);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

fn letter(b: bool, dagger: bool, mode: u8) -> RawExpr {
    RawExpr::letter(Letter::new(b, dagger, mode))
}

mod macros {
    use super::*;

    fn lambda() -> Scalar {
        Scalar::lambda_pow(1)
    }

    pub fn x_left(k: u8) -> RawExpr {
        let mut out = RawExpr::zero();
        for al in 1..=2 {
            for be in 1..=2 {
                let s = sigma_entry(k, al, be);
                if !s.is_zero() {
                    out = out.add(letter(false, true, al).mul(&letter(false, false, be)).scale(&s));
                }
            }
        }
        out.scale(&lambda())
    }

    pub fn x_right(k: u8) -> RawExpr {
        let mut out = RawExpr::zero();
        for al in 1..=2 {
            for be in 1..=2 {
                let s = sigma_entry(k, al, be);
                if !s.is_zero() {
                    out = out.add(letter(true, false, be).mul(&letter(true, true, al)).scale(&s));
                }
            }
        }
        out.scale(&lambda())
    }

    pub fn r_left() -> RawExpr {
        let n = (1..=2).fold(RawExpr::zero(), |acc, al| {
            acc.add(letter(false, true, al).mul(&letter(false, false, al)))
        });
        n.add(RawExpr::scalar(Scalar::one())).scale(&lambda())
    }

    pub fn r_right() -> RawExpr {
        let n = (1..=2).fold(RawExpr::zero(), |acc, al| {
            acc.add(letter(true, false, al).mul(&letter(true, true, al)))
        });
        n.add(RawExpr::scalar(Scalar::one())).scale(&lambda())
    }

    fn half() -> Scalar {
        Scalar::rational(1, 2)
    }

    pub fn x(k: u8) -> RawExpr {
        x_left(k).add(x_right(k)).scale(&half())
    }

    pub fn r() -> RawExpr {
        r_left().add(r_right()).scale(&half())
    }

    pub fn ang(k: u8) -> RawExpr {
        x_left(k)
            .add(x_right(k).neg())
            .scale(&Scalar::rational(1, 2).mul(&Scalar::lambda_pow(-1)))
    }

    /// `â⁺_α b̂_β ± â_β b̂⁺_α`.
    pub fn mixed(al: u8, be: u8, sign: i64) -> RawExpr {
        let first = letter(false, true, al).mul(&letter(true, false, be));
        let second = letter(false, false, be).mul(&letter(true, true, al));
        first.add(second.scale(&Scalar::int(sign)))
    }

    pub fn trace(sign: i64) -> RawExpr {
        (1..=2).fold(RawExpr::zero(), |acc, al| acc.add(mixed(al, al, sign)))
    }

    pub fn contract(k: u8, sign: i64) -> RawExpr {
        let mut out = RawExpr::zero();
        for al in 1..=2 {
            for be in 1..=2 {
                let s = sigma_entry(k, al, be);
                if !s.is_zero() {
                    out = out.add(mixed(al, be, sign).scale(&s));
                }
            }
        }
        out
    }
}

fn eval_macro(name: &str, args: &[u8]) -> RawExpr {
    use macros::*;
    let zeta_like = |sign: i64| match args {
        [] => trace(sign),
        [k] => contract(*k, sign),
        [a, b] => mixed(*a, *b, sign),
        _ => unreachable!("arity checked by the parser"),
    };
    match (name, args) {
        ("xL", [k]) => x_left(*k),
        ("xR", [k]) => x_right(*k),
        ("x", [k]) => x(*k),
        ("L", [k]) => ang(*k),
        ("rL", []) => r_left(),
        ("rR", []) => r_right(),
        ("r", []) => r(),
        ("zeta", _) => zeta_like(1),
        ("w", _) => zeta_like(-1),
        ("W", []) => r()
            .scale(&Scalar::int(2).mul(&Scalar::lambda_pow(-1)))
            .add(trace(1).neg()),
        ("W", [k]) => x(*k)
            .scale(&Scalar::int(2).mul(&Scalar::lambda_pow(-1)))
            .add(contract(*k, 1).neg()),
        ("Wp", []) => r().scale(&Scalar::eta()).add(trace(1).neg()),
        ("Wp", [k]) => x(*k).scale(&Scalar::eta()).add(contract(*k, 1).neg()),
        _ => unreachable!("macro table checked by the parser"),
    }
}

fn eval(node: &Node, env: &Env) -> Result<RawExpr> {
    Ok(match node {
        Node::Num(v) => RawExpr::scalar(Scalar::constant(Complex::new(
            v.clone(),
            BigRational::from_integer(0.into()),
        ))),
        Node::Imag => RawExpr::scalar(Scalar::imag_unit()),
        Node::Lambda => RawExpr::scalar(Scalar::lambda_pow(1)),
        Node::Omega => RawExpr::scalar(Scalar::omega()),
        Node::Eta => RawExpr::scalar(Scalar::eta()),
        Node::Letter { b, dagger, idx } => letter(*b, *dagger, resolve(idx, env)?),
        Node::Func { name, args } => {
            let v: Vec<u8> = args.iter().map(|a| resolve(a, env)).collect::<Result<_>>()?;
            let s = match name.as_str() {
                "sigma" => sigma_entry(v[0], v[1], v[2]),
                "eps" => Scalar::int(eps_value(v[0], v[1], v[2])),
                _ => Scalar::int((v[0] == v[1]) as i64),
            };
            RawExpr::scalar(s)
        }
        Node::Macro { name, args } => {
            let v: Vec<u8> = args.iter().map(|a| resolve(a, env)).collect::<Result<_>>()?;
            eval_macro(name, &v)
        }
        Node::Div(inner, d) => {
            let inv = BigRational::new(BigInt::from(1), d.clone());
            eval(inner, env)?.scale(&Scalar::constant(Complex::new(
                inv,
                BigRational::from_integer(0.into()),
            )))
        }
        Node::Sum(terms) => {
            let mut out = RawExpr::zero();
            for (neg, t) in terms {
                let v = eval(t, env)?;
                out = out.add(if *neg { v.neg() } else { v });
            }
            out
        }
        Node::Pow { base, exp, bound } => {
            let mut out = RawExpr::zero();
            for e in assignments(bound, env) {
                if let (Node::Lambda, true) = (&**base, *exp < 0) {
                    out = out.add(RawExpr::scalar(Scalar::lambda_pow(*exp)));
                    continue;
                }
                let b = eval(base, &e)?;
                let p = (0..*exp).fold(RawExpr::scalar(Scalar::one()), |acc, _| acc.mul(&b));
                out = out.add(p);
            }
            out
        }
        Node::Product { factors, bound } => {
            let mut out = RawExpr::zero();
            for e in assignments(bound, env) {
                let mut p = RawExpr::scalar(Scalar::one());
                for f in factors {
                    p = p.mul(&eval(f, &e)?);
                    if p.is_empty() {
                        break;
                    }
                }
                out = out.add(p);
            }
            out
        }
        Node::Comm { a, b, anti, bound } => {
            let mut out = RawExpr::zero();
            for e in assignments(bound, env) {
                let (x, y) = (eval(a, &e)?, eval(b, &e)?);
                let yx = y.mul(&x);
                out = out.add(x.mul(&y)).add(if *anti { yx } else { yx.neg() });
            }
            out
        }
    })
}

/// A parsed expression with summation indices attached and free indices listed.
#[derive(Debug, Clone)]
pub struct Expr {
    node: Node,
    free: BTreeSet<String>,
}

impl Expr {
    pub fn free_indices(&self) -> &BTreeSet<String> {
        &self.free
    }

    /// Expansion into letter strings with the free indices fixed by `env`.
    pub fn expand_with(&self, env: &BTreeMap<String, u8>) -> Result<RawExpr> {
        eval(&self.node, env)
    }

    pub fn expand(&self) -> Result<RawExpr> {
        if let Some(v) = self.free.iter().next() {
            return Err(Error::UnboundIndex(v.clone()));
        }
        eval(&self.node, &Env::new())
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let mut node = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.here(), "unexpected trailing input"));
    }
    let free = bind(&mut node)?.into_keys().collect();
    Ok(Expr { node, free })
}

/// Parses a closed expression into its expanded, not yet normal-ordered form.
pub fn parse(src: &str) -> Result<RawExpr> {
    parse_expr(src)?.expand()
}

/// All assignments of the given free indices.
pub fn free_assignments(free: &BTreeSet<String>) -> Vec<BTreeMap<String, u8>> {
    let vars: Vec<String> = free.iter().cloned().collect();
    assignments(&vars, &Env::new())
}
