//! Exact algebra of the eight hat ladder letters.
//!
//! Expressions are parsed from text ([`parse`]), expanded into letter strings
//! and brought to a unique normal-ordered form ([`normal_order`]). Two
//! expressions are equal iff their normal forms coincide. Identities that only
//! hold on balanced wave functions are decided by [`annihilates_balanced`].

mod expr;
mod parse;
mod quotient;
mod scalar;

pub use expr::{normal_order, Letter, OperatorExpr, RawExpr, Word};
pub use parse::{free_assignments, parse, parse_expr, sigma_entry, Expr};
pub use quotient::annihilates_balanced;
pub use scalar::{GaussRational, Scalar};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// The built-in identity catalogue in the line format of [`parse_identity_file`].
pub const CATALOGUE: &str = include_str!("catalogue.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quotient {
    None,
    Balanced,
}

impl fmt::Display for Quotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quotient::None => "none",
            Quotient::Balanced => "balanced",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Identity {
    pub name: String,
    pub lhs_src: String,
    pub rhs_src: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub quotient: Quotient,
}

impl Identity {
    /// `LHS == RHS` as written.
    pub fn formula(&self) -> String {
        format!("{} == {}", self.lhs_src, self.rhs_src)
    }
}

/// Splits off a trailing `[quotient=...]` annotation.
fn split_quotient(text: &str) -> Result<(&str, Quotient)> {
    let t = text.trim_end();
    if let Some(open) = t.rfind('[') {
        if t.ends_with(']') {
            let inner: String = t[open + 1..t.len() - 1]
                .chars()
                .filter(|c| !c.is_whitespace())
                .collect();
            if let Some(kind) = inner.strip_prefix("quotient=") {
                let q = match kind {
                    "balanced" => Quotient::Balanced,
                    "none" => Quotient::None,
                    other => {
                        return Err(Error::Parse {
                            pos: open,
                            msg: format!("unknown quotient '{other}'"),
                        })
                    }
                };
                return Ok((&t[..open], q));
            }
        }
    }
    Ok((t, Quotient::None))
}

/// Parses one `NAME : LHS == RHS [quotient=balanced]` line.
pub fn parse_identity_line(line: &str) -> Result<Identity> {
    let colon = line.find(':').ok_or(Error::Parse {
        pos: 0,
        msg: "expected 'NAME :'".into(),
    })?;
    let name = line[..colon].trim();
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(Error::Parse {
            pos: 0,
            msg: "identity name must be a single word".into(),
        });
    }
    let body_start = colon + 1;
    let (body, quotient) = split_quotient(&line[body_start..])?;
    let eq = body.find("==").ok_or(Error::Parse {
        pos: body_start,
        msg: "expected '=='".into(),
    })?;
    let (lhs_src, rhs_src) = (body[..eq].trim(), body[eq + 2..].trim());
    let shift = |e: Error, off: usize| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + off, msg },
        other => other,
    };
    let lhs_off = body_start + (body[..eq].len() - body[..eq].trim_start().len());
    let rhs_off = body_start + eq + 2 + (body[eq + 2..].len() - body[eq + 2..].trim_start().len());
    let lhs = parse_expr(lhs_src).map_err(|e| shift(e, lhs_off))?;
    let rhs = parse_expr(rhs_src).map_err(|e| shift(e, rhs_off))?;
    Ok(Identity {
        name: name.to_string(),
        lhs_src: lhs_src.to_string(),
        rhs_src: rhs_src.to_string(),
        lhs,
        rhs,
        quotient,
    })
}

/// Parses an identity file; blank lines and `#` comments are skipped. Parse
/// errors report the 1-based line number in the message.
pub fn parse_identity_file(text: &str) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_identity_line(t).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos,
                msg: format!("line {}: {msg}", no + 1),
            },
            other => other,
        })?);
    }
    Ok(out)
}

pub fn symbolic_catalogue() -> Vec<Identity> {
    parse_identity_file(CATALOGUE).expect("built-in catalogue parses")
}

/// Outcome of an exact verification.
#[derive(Debug, Clone)]
pub struct ProofRecord {
    pub equal: bool,
    pub quotient: Quotient,
    /// Normal form of `LHS − RHS` at the first failing index assignment, or at
    /// the last one checked when every assignment passes.
    pub difference: OperatorExpr,
    /// Free-index values of `difference`.
    pub assignment: BTreeMap<String, u8>,
    pub cases: usize,
}

fn difference_at(lhs: &Expr, rhs: &Expr, env: &BTreeMap<String, u8>) -> Result<OperatorExpr> {
    let raw = lhs.expand_with(env)?.add(rhs.expand_with(env)?.neg());
    Ok(normal_order(&raw))
}

fn decide(d: &OperatorExpr, quotient: Quotient) -> bool {
    match quotient {
        Quotient::None => d.is_zero(),
        Quotient::Balanced => d.is_zero() || annihilates_balanced(d),
    }
}

/// Checks `lhs == rhs` for every value of the free indices.
pub fn verify_parsed(lhs: &Expr, rhs: &Expr, quotient: Quotient) -> Result<ProofRecord> {
    let free: std::collections::BTreeSet<String> = lhs.free_indices().union(rhs.free_indices()).cloned().collect();
    let envs = free_assignments(&free);
    let mut last = None;
    for env in &envs {
        let d = difference_at(lhs, rhs, env)?;
        let equal = decide(&d, quotient);
        if !equal {
            return Ok(ProofRecord {
                equal,
                quotient,
                difference: d,
                assignment: env.clone(),
                cases: envs.len(),
            });
        }
        last = Some((d, env.clone()));
    }
    let (difference, assignment) = last.expect("at least one assignment");
    Ok(ProofRecord {
        equal: true,
        quotient,
        difference,
        assignment,
        cases: envs.len(),
    })
}

/// Verifies `lhs == rhs` with no quotient.
pub fn verify_identity(lhs: &str, rhs: &str) -> Result<ProofRecord> {
    verify_parsed(&parse_expr(lhs)?, &parse_expr(rhs)?, Quotient::None)
}

/// `normal_order(e1 e2 − e2 e1)`.
pub fn expr_commutator(e1: &OperatorExpr, e2: &OperatorExpr) -> OperatorExpr {
    e1.commutator(e2)
}

/// One line of the symbolic suite report.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolicReport {
    pub identity_name: String,
    pub paper_ref: String,
    pub quotient: Quotient,
    pub cases: usize,
    pub difference_terms: usize,
    pub difference: String,
    pub pass: bool,
}

impl SymbolicReport {
    fn failed(id: &Identity, msg: String) -> Self {
        SymbolicReport {
            identity_name: id.name.clone(),
            paper_ref: id.formula(),
            quotient: id.quotient,
            cases: 0,
            difference_terms: 0,
            difference: msg,
            pass: false,
        }
    }
}

/// Verifies each identity in parallel; results keep the input order.
pub fn run_symbolic_suite(identities: &[Identity]) -> Vec<SymbolicReport> {
    identities
        .par_iter()
        .map(|id| match verify_parsed(&id.lhs, &id.rhs, id.quotient) {
            Ok(rec) => SymbolicReport {
                identity_name: id.name.clone(),
                paper_ref: id.formula(),
                quotient: id.quotient,
                cases: rec.cases,
                difference_terms: if rec.equal { 0 } else { rec.difference.len() },
                difference: if rec.equal {
                    "0".into()
                } else {
                    let at: Vec<String> = rec.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("[{}] {}", at.join(","), rec.difference)
                },
                pass: rec.equal,
            },
            Err(e) => SymbolicReport::failed(id, e.to_string()),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_parses() {
        let ids = symbolic_catalogue();
        assert!(ids.len() >= 25);
        let mut names: Vec<&str> = ids.iter().map(|i| i.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), ids.len(), "duplicate identity names");
    }

    #[test]
    fn quotient_annotation() {
        let id = parse_identity_line("t : L_j x_j == 0 [quotient = balanced]").unwrap();
        assert_eq!(id.quotient, Quotient::Balanced);
        let id = parse_identity_line("t : [A1, A+1] == 1").unwrap();
        assert_eq!(id.quotient, Quotient::None);
        assert_eq!(id.rhs_src, "1");
    }

    #[test]
    fn rhs_ending_in_commutator_is_not_an_annotation() {
        let id = parse_identity_line("t : 0 == [A1, A2]").unwrap();
        assert_eq!(id.quotient, Quotient::None);
        assert_eq!(id.rhs_src, "[A1, A2]");
    }

    #[test]
    fn verify_simple() {
        assert!(verify_identity("[A1, A+1]", "1").unwrap().equal);
        assert!(verify_identity("[B1, B+1]", "-1").unwrap().equal);
        let rec = verify_identity("[A1, A+1]", "2").unwrap();
        assert!(!rec.equal);
        assert_eq!(rec.difference, OperatorExpr::scalar(Scalar::int(-1)));
    }

    #[test]
    fn quotient_is_needed_for_contraction() {
        let id = parse_identity_line("t : L_j x_j == 0").unwrap();
        assert!(!verify_parsed(&id.lhs, &id.rhs, Quotient::None).unwrap().equal);
        assert!(verify_parsed(&id.lhs, &id.rhs, Quotient::Balanced).unwrap().equal);
    }

    #[test]
    fn line_errors_name_the_line() {
        let err = parse_identity_file("# c\n\nok : 1 == 1\nbad : 1 == (\n").unwrap_err();
        match err {
            Error::Parse { msg, .. } => assert!(msg.starts_with("line 4"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
