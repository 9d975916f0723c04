//! Implicit deterministic automata that read a few tracks at a time, and their
//! on-the-fly product with an explicit automaton.
//!
//! Only product states reachable from the start are ever built, which keeps relations
//! such as `y = q^k x` with large `k` tractable once other conjuncts pin the variables.

use std::collections::HashMap;
use std::hash::Hash;

use super::diagram::{Arena, NodeId, LEAF_TRACK};
use super::ops::Interner;
use super::{Automaton, DigitTupleAlphabet, StateId, StateSet};
use crate::base::Base;

pub(crate) trait DigitMachine {
    type State: Clone + Eq + Hash;

    /// Number of tracks read per letter.
    fn arity(&self) -> usize;
    fn start(&self) -> Self::State;
    /// `digits[i]` is the digit on the machine's `i`-th track.
    fn step(&self, s: &Self::State, digits: &[u32]) -> Self::State;
    /// Whether the word read so far is accepted.
    fn accepting(&self, s: &Self::State) -> bool;
    /// States from which nothing can ever be accepted.
    fn is_dead(&self, _s: &Self::State) -> bool {
        false
    }
}

/// Explored machine states with memoized successor rows over all `q^arity` letters.
struct Table<'m, M: DigitMachine> {
    machine: &'m M,
    q: u32,
    states: Interner<M::State>,
    rows: Vec<Option<Box<[StateId]>>>,
}

impl<'m, M: DigitMachine> Table<'m, M> {
    fn new(machine: &'m M, q: Base) -> Self {
        Table {
            machine,
            q: q.get(),
            states: Interner::new(),
            rows: Vec::new(),
        }
    }

    fn id(&mut self, s: &M::State) -> StateId {
        let id = self.states.get(s);
        if self.rows.len() < self.states.len() {
            self.rows.resize(self.states.len(), None);
        }
        id
    }

    fn successor(&mut self, s: StateId, letter_index: usize) -> StateId {
        if self.rows[s as usize].is_none() {
            let k = self.machine.arity();
            let count = (self.q as usize).pow(k as u32);
            let state = self.states.keys[s as usize].clone();
            let mut digits = vec![0u32; k];
            let mut row = Vec::with_capacity(count);
            for idx in 0..count {
                let mut rest = idx;
                for j in (0..k).rev() {
                    digits[j] = (rest % self.q as usize) as u32;
                    rest /= self.q as usize;
                }
                let next = self.machine.step(&state, &digits);
                row.push(self.id(&next));
            }
            self.rows[s as usize] = Some(row.into_boxed_slice());
        }
        self.rows[s as usize].as_ref().unwrap()[letter_index]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pair {
    Live(StateId, StateId),
    Sink,
}

/// Intersection of the deterministic automaton `a` with `machine`, whose track `i` is
/// read from track `tracks[i]` of `a`.
pub(crate) fn product_with_machine<M: DigitMachine>(
    a: &Automaton,
    machine: &M,
    tracks: &[usize],
) -> Automaton {
    assert_eq!(tracks.len(), machine.arity());
    let a = a.determinize();
    let q = a.base();
    let k = tracks.len();
    // machine position of each track of `a`, and the weight of its digit in a letter index
    let mut position: Vec<Option<usize>> = vec![None; a.arity()];
    for (i, &t) in tracks.iter().enumerate() {
        assert!(position[t].is_none(), "machine tracks must be distinct");
        position[t] = Some(i);
    }
    let weight: Vec<usize> = (0..k)
        .map(|i| (q.get() as usize).pow((k - 1 - i) as u32))
        .collect();
    let mut machine_tracks: Vec<u32> = tracks.iter().map(|&t| t as u32).collect();
    machine_tracks.sort_unstable();

    let live = a.coreachable();
    let mut table = Table::new(machine, q);
    let start = table.id(&machine.start());

    let mut pairs: Interner<Pair> = Interner::new();
    pairs.get(&Pair::Sink);
    let init = if live[a.initial[0] as usize] && !machine.is_dead(&machine.start()) {
        Pair::Live(a.initial[0], start)
    } else {
        Pair::Sink
    };
    pairs.get(&init);

    // stage 1: per explicit node, a diagram over (successor in `a`, machine letter index)
    let mut staged: Arena<(StateId, usize)> = Arena::new();
    let mut stage_memo: HashMap<(NodeId, usize, usize), NodeId> = HashMap::new();
    let mut stage_root: HashMap<StateId, NodeId> = HashMap::new();
    // stage 2: leaves resolved against one machine state
    let mut out: Arena<StateSet> = Arena::new();
    let mut import_memo: HashMap<(NodeId, StateId), NodeId> = HashMap::new();
    let sink_leaf = out.leaf(vec![0].into_boxed_slice());

    let mut roots = Vec::new();
    let mut finals = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let pair = pairs.keys[next];
        next += 1;
        match pair {
            Pair::Sink => {
                roots.push(sink_leaf);
                finals.push(false);
            }
            Pair::Live(s, r) => {
                let sr = match stage_root.get(&s) {
                    Some(&n) => n,
                    None => {
                        let n = stage(
                            &a.arena,
                            a.roots[s as usize],
                            0,
                            0,
                            &machine_tracks,
                            &position,
                            &weight,
                            q.get(),
                            &mut staged,
                            &mut stage_memo,
                        );
                        stage_root.insert(s, n);
                        n
                    }
                };
                let root = resolve(
                    &staged,
                    sr,
                    r,
                    &mut out,
                    &mut import_memo,
                    &mut |(t, idx): &(StateId, usize)| {
                        let m = table.successor(r, *idx);
                        let dead =
                            !live[*t as usize] || machine.is_dead(&table.states.keys[m as usize]);
                        let p = if dead { Pair::Sink } else { Pair::Live(*t, m) };
                        vec![pairs.get(&p)].into_boxed_slice()
                    },
                );
                roots.push(root);
                let machine_state = &table.states.keys[r as usize];
                finals.push(a.finals[s as usize] && machine.accepting(machine_state));
            }
        }
    }
    let initial = vec![pairs.get(&init)].into_boxed_slice();
    Automaton::from_parts(
        DigitTupleAlphabet::new(q, a.arity()),
        out,
        roots,
        finals,
        initial,
    )
}

/// Standalone automaton of `machine` over its own tracks.
pub(crate) fn materialize<M: DigitMachine>(machine: &M, q: Base) -> Automaton {
    let k = machine.arity();
    let tracks: Vec<usize> = (0..k).collect();
    product_with_machine(&Automaton::full(q, k), machine, &tracks)
}

#[allow(clippy::too_many_arguments)]
fn stage(
    src: &Arena<StateSet>,
    id: NodeId,
    next_machine: usize,
    partial: usize,
    machine_tracks: &[u32],
    position: &[Option<usize>],
    weight: &[usize],
    q: u32,
    out: &mut Arena<(StateId, usize)>,
    memo: &mut HashMap<(NodeId, usize, usize), NodeId>,
) -> NodeId {
    if let Some(&r) = memo.get(&(id, next_machine, partial)) {
        return r;
    }
    let mt = machine_tracks
        .get(next_machine)
        .copied()
        .unwrap_or(LEAF_TRACK);
    let top = src.top(id);
    let r = if mt == LEAF_TRACK && top == LEAF_TRACK {
        out.leaf((src.leaf_value(id)[0], partial))
    } else if mt <= top {
        let w = weight[position[mt as usize].unwrap()];
        let kids = (0..q)
            .map(|d| {
                let child = src.cofactor(id, mt, d);
                stage(
                    src,
                    child,
                    next_machine + 1,
                    partial + d as usize * w,
                    machine_tracks,
                    position,
                    weight,
                    q,
                    out,
                    memo,
                )
            })
            .collect();
        out.branch(mt, kids)
    } else {
        let kids = (0..q)
            .map(|d| {
                let child = src.cofactor(id, top, d);
                stage(
                    src,
                    child,
                    next_machine,
                    partial,
                    machine_tracks,
                    position,
                    weight,
                    q,
                    out,
                    memo,
                )
            })
            .collect();
        out.branch(top, kids)
    };
    memo.insert((id, next_machine, partial), r);
    r
}

fn resolve(
    staged: &Arena<(StateId, usize)>,
    id: NodeId,
    machine_state: StateId,
    out: &mut Arena<StateSet>,
    memo: &mut HashMap<(NodeId, StateId), NodeId>,
    f: &mut impl FnMut(&(StateId, usize)) -> StateSet,
) -> NodeId {
    use super::diagram::Node;
    if let Some(&r) = memo.get(&(id, machine_state)) {
        return r;
    }
    let r = match staged.node(id) {
        Node::Leaf(v) => {
            let v = f(v);
            out.leaf(v)
        }
        Node::Branch { track, kids } => {
            let kids: Vec<NodeId> = kids
                .iter()
                .map(|&k| resolve(staged, k, machine_state, out, memo, f))
                .collect();
            out.branch(*track, kids)
        }
    };
    memo.insert((id, machine_state), r);
    r
}

impl Automaton {
    /// States of a deterministic automaton from which a final state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in 0..n as StateId {
            for t in self.successors(s) {
                preds[t as usize].push(s);
            }
        }
        let mut live: Vec<bool> = self.finals.clone();
        let mut stack: Vec<StateId> = (0..n as StateId).filter(|&s| live[s as usize]).collect();
        while let Some(t) = stack.pop() {
            for &p in &preds[t as usize] {
                if !live[p as usize] {
                    live[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        live
    }
}
