use std::collections::{HashSet, VecDeque};

use super::diagram::{Arena, Node, NodeId};
use super::{Automaton, EncodedWord, StateId, StateSet};

impl Automaton {
    /// True iff no nonempty word is accepted.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &s in self.initial.iter() {
            for t in self.successors(s) {
                if !std::mem::replace(&mut seen[t as usize], true) {
                    queue.push_back(t);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            if self.finals[s as usize] {
                return false;
            }
            for t in self.successors(s) {
                if !std::mem::replace(&mut seen[t as usize], true) {
                    queue.push_back(t);
                }
            }
        }
        true
    }

    /// A shortest accepted word; among those, the lexicographically least letter sequence
    /// (letters compared track by track, track 0 first).
    pub fn shortest_accepted(&self) -> Option<EncodedWord> {
        let dfa = self.determinize();
        let n = dfa.num_states();
        // distance (possibly zero letters) to a final state
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n as StateId {
            for t in dfa.successors(s) {
                preds[t as usize].push(s);
            }
        }
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for (s, d) in dist.iter_mut().enumerate() {
            if dfa.finals[s] {
                *d = 0;
                queue.push_back(s as StateId);
            }
        }
        while let Some(t) = queue.pop_front() {
            for &p in &preds[t as usize] {
                if dist[p as usize] == usize::MAX {
                    dist[p as usize] = dist[t as usize] + 1;
                    queue.push_back(p);
                }
            }
        }
        let init = dfa.initial[0];
        let first = dfa
            .successors(init)
            .into_iter()
            .map(|t| dist[t as usize])
            .min()?;
        if first == usize::MAX {
            return None;
        }
        let arity = dfa.arity();
        let mut letters = Vec::with_capacity(first + 1);
        let mut state = init;
        let mut want = first;
        loop {
            let letter = least_letter(&dfa.arena, dfa.roots[state as usize], arity, &|t| {
                dist[t as usize] == want
            })
            .expect("distance table guarantees a successor");
            state = dfa.step(state, &letter)[0];
            letters.push(letter);
            if want == 0 {
                break;
            }
            want -= 1;
        }
        Some(EncodedWord::new(arity, letters))
    }
}

/// Lexicographically least letter whose leaf satisfies `pred`.
fn least_letter(
    arena: &Arena<StateSet>,
    root: NodeId,
    arity: usize,
    pred: &impl Fn(StateId) -> bool,
) -> Option<Vec<u32>> {
    fn go(
        arena: &Arena<StateSet>,
        id: NodeId,
        track: usize,
        letter: &mut Vec<u32>,
        pred: &impl Fn(StateId) -> bool,
        dead: &mut HashSet<(NodeId, usize)>,
    ) -> bool {
        if track == letter.len() {
            return pred(arena.leaf_value(id)[0]);
        }
        if dead.contains(&(id, track)) {
            return false;
        }
        let found = match arena.node(id) {
            Node::Branch { track: t, kids } if *t as usize == track => {
                let kids = kids.clone();
                kids.iter().enumerate().any(|(d, &k)| {
                    letter[track] = d as u32;
                    go(arena, k, track + 1, letter, pred, dead)
                })
            }
            _ => {
                letter[track] = 0;
                go(arena, id, track + 1, letter, pred, dead)
            }
        };
        if !found {
            dead.insert((id, track));
        }
        found
    }
    let mut letter = vec![0; arity];
    let mut dead = HashSet::new();
    go(arena, root, 0, &mut letter, pred, &mut dead).then_some(letter)
}
