use std::collections::{HashMap, HashSet};

use super::diagram::{Arena, NodeId};
use super::ops::Interner;
use super::{Automaton, StateId, StateSet};

impl Automaton {
    /// Minimal complete deterministic automaton in canonical form.
    ///
    /// States are numbered breadth-first from the initial state, visiting successors in
    /// the lexicographic order of the letters that first reach them, so two automata with
    /// the same language minimize to structurally identical values.
    pub fn minimize(&self) -> Automaton {
        let dfa = self.determinize();
        let reachable = dfa.reachable();

        // Moore refinement; signatures are transition diagrams over class ids.
        let mut class = vec![u32::MAX; dfa.num_states()];
        let mut count = {
            let mut kinds: Interner<bool> = Interner::new();
            for &s in &reachable {
                class[s as usize] = kinds.get(&dfa.finals[s as usize]);
            }
            kinds.len()
        };
        loop {
            let mut sig_arena: Arena<u32> = Arena::new();
            let mut memo: HashMap<NodeId, NodeId> = HashMap::new();
            let mut sigs: Interner<(u32, NodeId)> = Interner::new();
            let mut next = vec![u32::MAX; dfa.num_states()];
            for &s in &reachable {
                let node = sig_arena.import(
                    &dfa.arena,
                    dfa.roots[s as usize],
                    &mut memo,
                    &mut |t: &StateSet| class[t[0] as usize],
                );
                next[s as usize] = sigs.get(&(class[s as usize], node));
            }
            let refined = sigs.len();
            class = next;
            if refined == count {
                break;
            }
            count = refined;
        }

        let mut rep: HashMap<u32, StateId> = HashMap::new();
        for &s in &reachable {
            rep.entry(class[s as usize]).or_insert(s);
        }
        let mut canon: Interner<u32> = Interner::new();
        canon.get(&class[dfa.initial[0] as usize]);
        let mut out: Arena<StateSet> = Arena::new();
        let mut import_memo: HashMap<NodeId, NodeId> = HashMap::new();
        let mut roots = Vec::new();
        let mut finals = Vec::new();
        let mut next = 0;
        while next < canon.len() {
            let c = canon.keys[next];
            next += 1;
            let s = rep[&c];
            // leaf ids are handed out in first-visit order, which follows letter order
            let root = out.import(
                &dfa.arena,
                dfa.roots[s as usize],
                &mut import_memo,
                &mut |t: &StateSet| vec![canon.get(&class[t[0] as usize])].into_boxed_slice(),
            );
            roots.push(root);
            finals.push(dfa.finals[s as usize]);
        }
        Automaton::from_parts(
            self.alphabet,
            out,
            roots,
            finals,
            vec![0].into_boxed_slice(),
        )
    }

    /// Structural identity of the canonical minimal forms, i.e. language equality.
    pub fn language_eq(&self, other: &Automaton) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        self.minimize().is_isomorphic(&other.minimize())
    }

    /// Whether two automata are identical up to renaming states, assuming both are in the
    /// canonical minimal form produced by [`Automaton::minimize`].
    pub fn is_isomorphic(&self, other: &Automaton) -> bool {
        if self.alphabet != other.alphabet
            || self.num_states() != other.num_states()
            || self.initial != other.initial
            || self.finals != other.finals
        {
            return false;
        }
        let mut seen = HashSet::new();
        self.roots.iter().zip(&other.roots).all(|(&a, &b)| {
            self.arena.same_shape(
                a,
                &other.arena,
                b,
                &|x: &StateSet, y: &StateSet| x == y,
                &mut seen,
            )
        })
    }
}
