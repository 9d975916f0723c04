//! Line-oriented instance files:
//!
//! ```text
//! # comment
//! q: 2
//! gen: t a t^-1
//! gen: mat(1, 1, 0)
//! target: a a a
//! ```
//!
//! Group elements are words over `a`, `t` and their inverses, or triples
//! `mat(k, num, denexp)` for the matrix `(q^k, num / q^denexp; 0, 1)`. An empty word is
//! the identity.

use std::fmt::Write;

use num_bigint::BigInt;
use thiserror::Error;

use crate::base::Base;
use crate::group::{GroupElement, GroupWord, WordError};
use crate::knapsack::KnapsackInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing `{0}:` line")]
    Missing(&'static str),
    #[error("line {line}: duplicate `{key}:` (first given on line {first})")]
    Duplicate {
        line: usize,
        key: &'static str,
        first: usize,
    },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: expected `key: value`")]
    Malformed { line: usize },
    #[error("line {line}: invalid base `{text}` (need an integer >= 2)")]
    InvalidBase { line: usize, text: String },
    #[error("line {line}: malformed triple `{text}` (expected mat(<k>, <num>, <denexp>))")]
    Triple { line: usize, text: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordError },
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Missing(_) => None,
            ParseError::Duplicate { line, .. }
            | ParseError::UnknownKey { line, .. }
            | ParseError::Malformed { line }
            | ParseError::InvalidBase { line, .. }
            | ParseError::Triple { line, .. }
            | ParseError::Word { line, .. } => Some(*line),
        }
    }
}

enum ElementSyntax {
    Word(GroupWord),
    Triple(i64, BigInt, u64),
}

impl ElementSyntax {
    fn parse(text: &str, line: usize) -> Result<ElementSyntax, ParseError> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("mat") {
            let bad = || ParseError::Triple {
                line,
                text: text.to_string(),
            };
            let inner = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let [k, num, e] = parts.as_slice() else {
                return Err(bad());
            };
            return Ok(ElementSyntax::Triple(
                k.parse().map_err(|_| bad())?,
                num.parse().map_err(|_| bad())?,
                e.parse().map_err(|_| bad())?,
            ));
        }
        GroupWord::parse(text)
            .map(ElementSyntax::Word)
            .map_err(|source| ParseError::Word { line, source })
    }

    fn eval(&self, q: Base) -> GroupElement {
        match self {
            ElementSyntax::Word(w) => w.eval(q),
            ElementSyntax::Triple(k, num, e) => GroupElement::from_parts(*k, num.clone(), *e, q),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<KnapsackInstance, ParseError> {
    let mut q: Option<(Base, usize)> = None;
    let mut target: Option<(ElementSyntax, usize)> = None;
    let mut gens: Vec<ElementSyntax> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or(ParseError::Malformed { line })?;
        let value = value.trim();
        match key.trim() {
            "q" => {
                if let Some((_, first)) = q {
                    return Err(ParseError::Duplicate {
                        line,
                        key: "q",
                        first,
                    });
                }
                let base = value
                    .parse::<u32>()
                    .ok()
                    .and_then(|n| Base::new(n).ok())
                    .ok_or_else(|| ParseError::InvalidBase {
                        line,
                        text: value.to_string(),
                    })?;
                q = Some((base, line));
            }
            "gen" => gens.push(ElementSyntax::parse(value, line)?),
            "target" => {
                if let Some((_, first)) = target {
                    return Err(ParseError::Duplicate {
                        line,
                        key: "target",
                        first,
                    });
                }
                target = Some((ElementSyntax::parse(value, line)?, line));
            }
            other => {
                return Err(ParseError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }
    let (q, _) = q.ok_or(ParseError::Missing("q"))?;
    let (target, _) = target.ok_or(ParseError::Missing("target"))?;
    let generators = gens.iter().map(|g| g.eval(q)).collect();
    Ok(KnapsackInstance::new(q, generators, target.eval(q))
        .expect("evaluation yields canonical elements"))
}

fn triple(g: &GroupElement) -> String {
    format!(
        "mat({}, {}, {})",
        g.t_exp(),
        g.coeff().numerator(),
        g.coeff().den_exp()
    )
}

/// Text form that [`parse_instance`] reads back to the same instance.
pub fn format_instance(inst: &KnapsackInstance) -> String {
    let mut s = String::new();
    writeln!(s, "q: {}", inst.q).unwrap();
    for g in &inst.generators {
        writeln!(s, "gen: {}", triple(g)).unwrap();
    }
    writeln!(s, "target: {}", triple(&inst.target)).unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: i64, num: i64, e: u64, q: u32) -> GroupElement {
        GroupElement::from_parts(k, BigInt::from(num), e, Base::new(q).unwrap())
    }

    #[test]
    fn parses_words_and_triples() {
        let inst = parse_instance(
            "# demo\nq: 2\ngen: t a t^-1\ngen: mat(1, 1, 0)  # trailing\n\ntarget: a a a\n",
        )
        .unwrap();
        assert_eq!(inst.generators, vec![el(0, 2, 0, 2), el(1, 1, 0, 2)]);
        assert_eq!(inst.target, el(0, 3, 0, 2));
        let inst = parse_instance("q: 3\ngen: mat(0, 3, 1)\ntarget:\n").unwrap();
        assert_eq!(inst.generators, vec![el(0, 1, 0, 3)]);
        assert_eq!(inst.target, GroupElement::identity());
    }

    #[test]
    fn errors_cite_lines() {
        assert_eq!(
            parse_instance("gen: a\ntarget: a\n").unwrap_err(),
            ParseError::Missing("q")
        );
        assert_eq!(
            parse_instance("q: 2\nq: 3\n").unwrap_err(),
            ParseError::Duplicate {
                line: 2,
                key: "q",
                first: 1
            }
        );
        assert_eq!(
            parse_instance("q: 2\nfoo: 1\n").unwrap_err(),
            ParseError::UnknownKey {
                line: 2,
                key: "foo".into()
            }
        );
        assert_eq!(
            parse_instance("q: 2\ngen: mat(1, 2)\n").unwrap_err(),
            ParseError::Triple {
                line: 2,
                text: "mat(1, 2)".into()
            }
        );
        assert_eq!(
            parse_instance("q: 1\n").unwrap_err(),
            ParseError::InvalidBase {
                line: 1,
                text: "1".into()
            }
        );
        let err = parse_instance("q: 2\n\ntarget: a b\n").unwrap_err();
        assert_eq!(err.line(), Some(3));
        assert!(err.to_string().starts_with("line 3:"));
    }

    #[test]
    fn format_round_trips() {
        let inst = parse_instance("q: 5\ngen: t^-1 a t^-1\ngen: a^-1 t\ntarget: t t a\n").unwrap();
        assert_eq!(parse_instance(&format_instance(&inst)).unwrap(), inst);
    }
}
