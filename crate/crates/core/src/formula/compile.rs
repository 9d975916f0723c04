use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::Serialize;

use super::{clear_denominators, normalize, Formula, FormulaError};
use crate::atoms::{
    LinearAtom, LinearMachine, PowerMachine, Relation, ShiftMachine, ValuationMachine,
};
use crate::automata::machine::{materialize, product_with_machine, DigitMachine};
use crate::automata::{decode, Automaton};
use crate::base::Base;

pub const DEFAULT_TRACK_LIMIT: usize = 24;

/// Size of one intermediate automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub label: String,
    pub tracks: usize,
    pub states: usize,
}

/// Formula-to-automaton compiler for one base. Every subformula is compiled over its
/// own free variables in alphabetical order and aligned to the parent's layout.
#[derive(Debug)]
pub struct Compiler {
    q: Base,
    track_limit: usize,
    stages: Vec<Stage>,
    keep: bool,
    kept: Vec<(String, Automaton)>,
}

impl Compiler {
    pub fn new(q: Base) -> Self {
        Compiler {
            q,
            track_limit: DEFAULT_TRACK_LIMIT,
            stages: Vec::new(),
            keep: false,
            kept: Vec::new(),
        }
    }

    pub fn with_track_limit(mut self, limit: usize) -> Self {
        self.track_limit = limit;
        self
    }

    /// Retain every recorded intermediate automaton (for DOT export).
    pub fn keep_intermediates(mut self, keep: bool) -> Self {
        self.keep = keep;
        self
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn intermediates(&self) -> &[(String, Automaton)] {
        &self.kept
    }

    /// Automaton over `env`'s tracks accepting the encodings of the satisfying
    /// assignments of `phi`.
    pub fn compile(&mut self, phi: &Formula, env: &[String]) -> Result<Automaton, FormulaError> {
        let mut seen = BTreeSet::new();
        for v in env {
            if !seen.insert(v) {
                return Err(FormulaError::DuplicateVariable(v.clone()));
            }
        }
        self.check_tracks(env.len())?;
        let phi = normalize(phi);
        if let Some(v) = phi.free_vars().into_iter().find(|v| !env.contains(v)) {
            return Err(FormulaError::UnboundVariable(v));
        }
        let a = self.aligned(&phi, env)?;
        self.record("result", &a);
        Ok(a)
    }

    fn check_tracks(&self, needed: usize) -> Result<(), FormulaError> {
        if needed > self.track_limit {
            return Err(FormulaError::TrackLimit {
                needed,
                limit: self.track_limit,
            });
        }
        Ok(())
    }

    fn record(&mut self, label: &str, a: &Automaton) {
        self.stages.push(Stage {
            label: label.to_string(),
            tracks: a.arity(),
            states: a.num_states(),
        });
        if self.keep {
            self.kept.push((label.to_string(), a.clone()));
        }
    }

    fn aligned(&mut self, phi: &Formula, env: &[String]) -> Result<Automaton, FormulaError> {
        let (a, vars) = self.local(phi)?;
        align(&a, &vars, env)
    }

    /// Compiles over the sorted free variables of `phi`, which are returned alongside.
    fn local(&mut self, phi: &Formula) -> Result<(Automaton, Vec<String>), FormulaError> {
        let q = self.q;
        let vars: Vec<String> = phi.free_vars().into_iter().collect();
        self.check_tracks(vars.len())?;
        let a = match phi {
            Formula::True => Automaton::full(q, vars.len()),
            Formula::False => Automaton::empty(q, vars.len()),
            Formula::Eq(l, r) | Formula::Geq(l, r) => {
                let rel = if matches!(phi, Formula::Eq(..)) {
                    Relation::Eq
                } else {
                    Relation::Geq
                };
                let atom = clear_denominators(l, r, rel, q);
                let own: Vec<String> = atom.coeffs.keys().cloned().collect();
                let a = materialize(&LinearMachine::for_atom(&atom, &own, q), q).minimize();
                align(&a, &own, &vars)?
            }
            Formula::Shift { ell, x, y } => {
                let (x, y) = (predicate_var(x), predicate_var(y));
                on_tracks(&ShiftMachine::new(*ell, q), &[x, y], &vars, q)
            }
            Formula::Power { ell, x } => {
                on_tracks(&PowerMachine::new(*ell, q), &[predicate_var(x)], &vars, q)
            }
            Formula::Vq { x, y } => {
                let (x, y) = (predicate_var(x), predicate_var(y));
                on_tracks(&ValuationMachine::new(q), &[x, y], &vars, q)
            }
            Formula::Not(f) => {
                let (a, _) = self.local(f)?;
                a.complement()?.minimize()
            }
            Formula::And(fs) => self.conjunction(fs, &vars)?,
            Formula::Or(fs) => {
                let mut acc = Automaton::empty(q, vars.len());
                for f in fs {
                    let a = self.aligned(f, &vars)?;
                    acc = acc.union(&a)?.minimize();
                }
                acc
            }
            Formula::Exists(v, body) => {
                if !body.free_vars().contains(v) {
                    return self.local(body);
                }
                let mut body_env = vars.clone();
                body_env.push(v.clone());
                self.check_tracks(body_env.len())?;
                let a = self.aligned(body, &body_env)?;
                let r = a.eliminate(vars.len())?;
                self.record(&format!("exists {v}"), &r);
                r
            }
            Formula::Forall(v, body) => {
                let rewritten = Formula::not(Formula::exists(v, Formula::not((**body).clone())));
                return self.local(&rewritten);
            }
        };
        Ok((a, vars))
    }

    /// Materializes the non-linear conjuncts, then intersects the linear ones lazily so
    /// that atoms with large coefficients only ever meet constrained inputs.
    fn conjunction(&mut self, fs: &[Formula], vars: &[String]) -> Result<Automaton, FormulaError> {
        let q = self.q;
        let mut parts = Vec::new();
        flatten_and(fs, &mut parts);
        let mut linear: Vec<LinearAtom> = Vec::new();
        let mut acc: Option<Automaton> = None;
        for f in parts {
            match f {
                Formula::Eq(l, r) => linear.push(clear_denominators(l, r, Relation::Eq, q)),
                Formula::Geq(l, r) => linear.push(clear_denominators(l, r, Relation::Geq, q)),
                _ => {
                    let a = self.aligned(f, vars)?;
                    acc = Some(match acc {
                        None => a,
                        Some(b) => b.intersect(&a)?.minimize(),
                    });
                }
            }
        }
        let mut acc = acc.unwrap_or_else(|| Automaton::full(q, vars.len()));
        let joins = linear.len();
        for (i, atom) in linear.into_iter().enumerate() {
            if atom.is_ground() {
                if atom.holds(&BTreeMap::new()) == Some(false) {
                    acc = Automaton::empty(q, vars.len());
                }
                continue;
            }
            let own: Vec<String> = atom.coeffs.keys().cloned().collect();
            let tracks: Vec<usize> = own
                .iter()
                .map(|v| vars.iter().position(|w| w == v).unwrap())
                .collect();
            let machine = LinearMachine::for_atom(&atom, &own, q);
            acc = product_with_machine(&acc, &machine, &tracks).minimize();
            if joins > 1 {
                self.record(&format!("and linear {}/{joins}", i + 1), &acc);
            }
        }
        Ok(acc)
    }
}

fn flatten_and<'a>(fs: &'a [Formula], out: &mut Vec<&'a Formula>) {
    for f in fs {
        match f {
            Formula::And(inner) => flatten_and(inner, out),
            g => out.push(g),
        }
    }
}

fn predicate_var(t: &super::Term) -> String {
    t.as_var()
        .expect("normalized predicates take variables")
        .to_string()
}

/// `machine` reading the named variables among the sorted `vars`.
fn on_tracks<M: DigitMachine>(machine: &M, args: &[String], vars: &[String], q: Base) -> Automaton {
    let tracks: Vec<usize> = args
        .iter()
        .map(|a| vars.iter().position(|v| v == a).unwrap())
        .collect();
    if tracks.len() == vars.len() && tracks.windows(2).all(|w| w[0] < w[1]) {
        return materialize(machine, q).minimize();
    }
    product_with_machine(&Automaton::full(q, vars.len()), machine, &tracks).minimize()
}

/// Re-lays an automaton over tracks `from` onto `to`, a superset of `from`.
fn align(a: &Automaton, from: &[String], to: &[String]) -> Result<Automaton, FormulaError> {
    if from == to {
        return Ok(a.clone());
    }
    let mut cur = a.clone();
    let mut layout: Vec<String> = from.to_vec();
    for v in to {
        if !layout.contains(v) {
            cur = cur.cylindrify(layout.len())?;
            layout.push(v.clone());
        }
    }
    let mut perm = Vec::with_capacity(to.len());
    for v in to {
        perm.push(
            layout
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| FormulaError::UnboundVariable(v.clone()))?,
        );
    }
    if let Some(extra) = layout.iter().find(|v| !to.contains(v)) {
        return Err(FormulaError::UnboundVariable(extra.clone()));
    }
    Ok(cur.reorder_tracks(&perm)?)
}

/// [`Compiler::compile`] with default settings.
pub fn compile(phi: &Formula, env: &[String], q: Base) -> Result<Automaton, FormulaError> {
    Compiler::new(q).compile(phi, env)
}

/// Satisfiability over the integers; a sentence is compiled with one unconstrained track.
pub fn is_satisfiable(phi: &Formula, q: Base) -> Result<bool, FormulaError> {
    let env: Vec<String> = phi.free_vars().into_iter().collect();
    let mut a = compile(phi, &env, q)?;
    if env.is_empty() {
        a = a.cylindrify(0)?;
    }
    Ok(!a.is_empty())
}

/// The assignment decoded from the shortest accepted word, if any.
pub fn model(phi: &Formula, q: Base) -> Result<Option<BTreeMap<String, BigInt>>, FormulaError> {
    let env: Vec<String> = phi.free_vars().into_iter().collect();
    let mut a = compile(phi, &env, q)?;
    if env.is_empty() {
        a = a.cylindrify(0)?;
        return Ok((!a.is_empty()).then(BTreeMap::new));
    }
    Ok(a.shortest_accepted()
        .map(|w| env.iter().cloned().zip(decode(&w, q)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::encoding::encode_i64;
    use crate::formula::Term;

    fn b(q: u32) -> Base {
        Base::new(q).unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reflexive_equation_is_full() {
        let q = b(3);
        let a = compile(
            &Formula::eq(Term::var("x"), Term::var("x")),
            &names(&["x"]),
            q,
        )
        .unwrap();
        assert!(a.language_eq(&Automaton::full(q, 1)));
    }

    #[test]
    fn even_numbers_by_projection() {
        let q = b(2);
        let f = Formula::exists(
            "y",
            Formula::eq(Term::var("x"), Term::var("y").plus(&Term::var("y"), q)),
        );
        let a = compile(&f, &names(&["x"]), q).unwrap();
        for x in -20..=20 {
            assert_eq!(
                a.accepts(&encode_i64(&[x], q)).unwrap(),
                x % 2 == 0,
                "x = {x}"
            );
        }
    }

    #[test]
    fn shift_with_pinned_values() {
        let q = b(2);
        let f = Formula::And(vec![
            Formula::shift(1, "x", "y"),
            Formula::eq(Term::var("x"), Term::int(2)),
            Formula::eq(Term::var("y"), Term::int(8)),
        ]);
        let m = model(&f, q).unwrap().unwrap();
        assert_eq!(m["x"], BigInt::from(2));
        assert_eq!(m["y"], BigInt::from(8));
    }

    #[test]
    fn satisfiability_examples() {
        let q = b(2);
        assert!(is_satisfiable(
            &Formula::exists("x", Formula::eq(Term::var("x"), Term::int(1))),
            q
        )
        .unwrap());
        let odd = Formula::exists(
            "x",
            Formula::eq(Term::var("x").plus(&Term::var("x"), q), Term::int(1)),
        );
        assert!(!is_satisfiable(&odd, q).unwrap());
        let gap = Formula::exists(
            "x",
            Formula::And(vec![
                Formula::power(1, "x"),
                Formula::geq(Term::var("x"), Term::int(5)),
                Formula::leq(Term::var("x"), Term::int(7)),
            ]),
        );
        assert!(!is_satisfiable(&gap, q).unwrap());
    }

    #[test]
    fn models() {
        let q = b(2);
        let f = Formula::And(vec![
            Formula::eq(Term::var("x"), Term::int(7)),
            Formula::eq(Term::var("y"), Term::var("x")),
        ]);
        let m = model(&f, q).unwrap().unwrap();
        assert_eq!(
            (m["x"].clone(), m["y"].clone()),
            (BigInt::from(7), BigInt::from(7))
        );
        assert_eq!(model(&Formula::False, q).unwrap(), None);
        let f = Formula::And(vec![
            Formula::shift(2, "x", "y"),
            Formula::eq(Term::var("x"), Term::int(2)),
            Formula::geq(Term::var("y"), Term::int(3)),
        ]);
        let m = model(&f, q).unwrap().unwrap();
        assert_eq!(m["y"], BigInt::from(8));
    }

    #[test]
    fn errors() {
        let q = b(2);
        let f = Formula::eq(Term::var("x"), Term::var("y"));
        assert_eq!(
            compile(&f, &names(&["x"]), q).unwrap_err(),
            FormulaError::UnboundVariable("y".into())
        );
        assert_eq!(
            compile(&f, &names(&["x", "x", "y"]), q).unwrap_err(),
            FormulaError::DuplicateVariable("x".into())
        );
        let err = Compiler::new(q)
            .with_track_limit(1)
            .compile(&f, &names(&["x", "y"]))
            .unwrap_err();
        assert_eq!(
            err,
            FormulaError::TrackLimit {
                needed: 2,
                limit: 1
            }
        );
    }
}
