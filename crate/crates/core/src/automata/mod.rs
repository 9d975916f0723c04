//! Finite automata over tuples of base-`q` digits.
//!
//! An automaton of arity `m` reads words whose letters are `m`-tuples of digits and
//! denotes a relation on `Z^m` through the encoding in [`encoding`]. Transition
//! functions are stored per state as reduced ordered decision diagrams over the tracks,
//! so an unconstrained track costs nothing. Leaves are sorted state sets; in a
//! deterministic automaton every leaf is a singleton.
//!
//! The empty word is never accepted. Constructions keep that invariant, so language
//! comparisons only concern nonempty words.

mod diagram;
mod dot;
pub mod encoding;
pub(crate) mod machine;
mod minimize;
mod ops;
mod search;

use std::collections::HashSet;

use thiserror::Error;

use crate::base::Base;
pub(crate) use diagram::{Arena, NodeId};
pub use encoding::{decode, encode, EncodedWord};

pub type StateId = u32;
pub(crate) type StateSet = Box<[StateId]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigitTupleAlphabet {
    pub base: Base,
    pub arity: usize,
}

impl DigitTupleAlphabet {
    pub fn new(base: Base, arity: usize) -> Self {
        DigitTupleAlphabet { base, arity }
    }

    /// Number of letters, `q^arity`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        (self.base.get() as u128)
            .checked_pow(self.arity as u32)
            .unwrap_or(u128::MAX)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet mismatch: q={0}, arity {1} vs q={2}, arity {3}")]
    AlphabetMismatch(u32, usize, u32, usize),
    #[error("track {track} out of range for arity {arity}")]
    TrackOutOfRange { track: usize, arity: usize },
    #[error("invalid track permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("operation requires a deterministic complete automaton")]
    NotDeterministic,
    #[error("word has arity {found}, automaton has arity {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("word contains a digit outside 0..{0}")]
    DigitOutOfRange(u32),
    #[error("too many tracks for the sign bookkeeping ({0} > 64)")]
    TooManyTracks(usize),
}

#[derive(Debug, Clone)]
pub struct Automaton {
    alphabet: DigitTupleAlphabet,
    arena: Arena<StateSet>,
    roots: Vec<NodeId>,
    finals: Vec<bool>,
    initial: StateSet,
    deterministic: bool,
}

impl Automaton {
    pub(crate) fn from_parts(
        alphabet: DigitTupleAlphabet,
        arena: Arena<StateSet>,
        roots: Vec<NodeId>,
        finals: Vec<bool>,
        initial: StateSet,
    ) -> Self {
        debug_assert_eq!(roots.len(), finals.len());
        let mut a = Automaton {
            alphabet,
            arena,
            roots,
            finals,
            initial,
            deterministic: false,
        };
        a.deterministic = a.check_deterministic();
        a
    }

    fn check_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self
                .roots
                .iter()
                .all(|&r| self.arena.leaves(r).iter().all(|s| s.len() == 1))
    }

    /// Accepts no word.
    pub fn empty(base: Base, arity: usize) -> Self {
        let mut arena = Arena::new();
        let sink = arena.leaf(vec![0].into_boxed_slice());
        Automaton::from_parts(
            DigitTupleAlphabet::new(base, arity),
            arena,
            vec![sink],
            vec![false],
            vec![0].into_boxed_slice(),
        )
    }

    /// Accepts every nonempty word.
    pub fn full(base: Base, arity: usize) -> Self {
        let mut arena = Arena::new();
        let to_one = arena.leaf(vec![1].into_boxed_slice());
        Automaton::from_parts(
            DigitTupleAlphabet::new(base, arity),
            arena,
            vec![to_one, to_one],
            vec![false, true],
            vec![0].into_boxed_slice(),
        )
    }

    /// Builds an automaton from an explicit transition table: `delta(state, letter)` lists
    /// the successors, letters being enumerated exhaustively. Intended for small alphabets.
    pub fn from_table(
        base: Base,
        arity: usize,
        num_states: usize,
        initial: &[StateId],
        finals: &[StateId],
        mut delta: impl FnMut(StateId, &[u32]) -> Vec<StateId>,
    ) -> Self {
        let q = base.get();
        let mut arena: Arena<StateSet> = Arena::new();
        let mut roots = Vec::with_capacity(num_states);
        for s in 0..num_states as StateId {
            let mut letter = vec![0u32; arity];
            let root = table_node(&mut arena, q, 0, &mut letter, &mut |l| {
                let mut succ = delta(s, l);
                succ.sort_unstable();
                succ.dedup();
                succ.into_boxed_slice()
            });
            roots.push(root);
        }
        let mut fin = vec![false; num_states];
        for &f in finals {
            fin[f as usize] = true;
        }
        let mut init = initial.to_vec();
        init.sort_unstable();
        init.dedup();
        Automaton::from_parts(
            DigitTupleAlphabet::new(base, arity),
            arena,
            roots,
            fin,
            init.into_boxed_slice(),
        )
    }

    pub fn alphabet(&self) -> DigitTupleAlphabet {
        self.alphabet
    }

    pub fn base(&self) -> Base {
        self.alphabet.base
    }

    pub fn arity(&self) -> usize {
        self.alphabet.arity
    }

    pub fn num_states(&self) -> usize {
        self.roots.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals[s as usize]
    }

    /// Number of decision-diagram nodes backing the transition functions.
    pub fn diagram_size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack: Vec<NodeId> = self.roots.clone();
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                if let diagram::Node::Branch { kids, .. } = self.arena.node(n) {
                    stack.extend(kids.iter().copied());
                }
            }
        }
        seen.len()
    }

    /// Successor states of `s` on `letter`.
    pub fn step(&self, s: StateId, letter: &[u32]) -> &[StateId] {
        self.arena.eval(self.roots[s as usize], letter)
    }

    /// Distinct successors of `s` over all letters.
    pub(crate) fn successors(&self, s: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self
            .arena
            .leaves(self.roots[s as usize])
            .into_iter()
            .flat_map(|l| l.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts(&self, word: &EncodedWord) -> Result<bool, AutomatonError> {
        if word.arity() != self.arity() {
            return Err(AutomatonError::ArityMismatch {
                expected: self.arity(),
                found: word.arity(),
            });
        }
        if !word.digits_in_range(self.base()) {
            return Err(AutomatonError::DigitOutOfRange(self.base().get()));
        }
        let mut current: Vec<StateId> = self.initial.to_vec();
        for letter in word.letters() {
            let mut next: Vec<StateId> = current
                .iter()
                .flat_map(|&s| self.step(s, letter).iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            current = next;
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|&s| self.is_final(s)))
    }

    pub(crate) fn check_same_alphabet(&self, other: &Automaton) -> Result<(), AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch(
                self.base().get(),
                self.arity(),
                other.base().get(),
                other.arity(),
            ));
        }
        Ok(())
    }
}

fn table_node(
    arena: &mut Arena<StateSet>,
    q: u32,
    track: usize,
    letter: &mut Vec<u32>,
    leaf: &mut impl FnMut(&[u32]) -> StateSet,
) -> NodeId {
    if track == letter.len() {
        let v = leaf(letter);
        return arena.leaf(v);
    }
    let kids = (0..q)
        .map(|d| {
            letter[track] = d;
            table_node(arena, q, track + 1, letter, leaf)
        })
        .collect();
    letter[track] = 0;
    arena.branch(track as u32, kids)
}
