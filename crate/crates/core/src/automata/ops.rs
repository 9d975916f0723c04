use std::collections::{HashMap, VecDeque};

use super::diagram::{Arena, NodeId};
use super::{Automaton, AutomatonError, DigitTupleAlphabet, StateId, StateSet};

fn singleton(s: StateId) -> StateSet {
    vec![s].into_boxed_slice()
}

fn union_sets(a: &StateSet, b: &StateSet) -> StateSet {
    let mut v: Vec<StateId> = a.iter().chain(b.iter()).copied().collect();
    v.sort_unstable();
    v.dedup();
    v.into_boxed_slice()
}

/// Interns keys to dense ids, remembering insertion order.
pub(crate) struct Interner<K> {
    ids: HashMap<K, StateId>,
    pub keys: Vec<K>,
}

impl<K: Clone + Eq + std::hash::Hash> Interner<K> {
    pub fn new() -> Self {
        Interner {
            ids: HashMap::new(),
            keys: Vec::new(),
        }
    }

    pub fn get(&mut self, k: &K) -> StateId {
        if let Some(&id) = self.ids.get(k) {
            return id;
        }
        let id = self.keys.len() as StateId;
        self.ids.insert(k.clone(), id);
        self.keys.push(k.clone());
        id
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Combine {
    And,
    Or,
}

impl Automaton {
    /// Subset construction. Returns a clone when already deterministic.
    pub fn determinize(&self) -> Automaton {
        if self.deterministic {
            return self.clone();
        }
        let mut unions: Arena<StateSet> = Arena::new();
        let empty = unions.leaf(Vec::new().into_boxed_slice());
        let mut union_memo = HashMap::new();
        let mut out: Arena<StateSet> = Arena::new();
        let mut out_memo: HashMap<NodeId, NodeId> = HashMap::new();
        let mut subsets: Interner<StateSet> = Interner::new();
        subsets.get(&self.initial);
        let mut roots = Vec::new();
        let mut finals = Vec::new();
        let mut next = 0usize;
        while next < subsets.len() {
            let set = subsets.keys[next].clone();
            next += 1;
            let mut acc = empty;
            for &s in set.iter() {
                acc = unions.combine_with(
                    acc,
                    &self.arena,
                    self.roots[s as usize],
                    &mut union_memo,
                    &mut |a, b| union_sets(a, b),
                );
            }
            let root = out.import(&unions, acc, &mut out_memo, &mut |s| {
                singleton(subsets.get(s))
            });
            roots.push(root);
            finals.push(set.iter().any(|&s| self.finals[s as usize]));
        }
        Automaton::from_parts(self.alphabet, out, roots, finals, singleton(0))
    }

    fn product(&self, other: &Automaton, mode: Combine) -> Result<Automaton, AutomatonError> {
        self.check_same_alphabet(other)?;
        let a = self.determinize();
        let b = other.determinize();
        let mut pairs: Interner<(StateId, StateId)> = Interner::new();
        pairs.get(&(a.initial[0], b.initial[0]));
        let mut out: Arena<StateSet> = Arena::new();
        let mut memo: HashMap<(NodeId, NodeId), NodeId> = HashMap::new();
        // leaves of `pairs_arena` carry the pair directly; mapped to ids on import
        let mut pair_arena: Arena<(StateId, StateId)> = Arena::new();
        let mut import_memo: HashMap<NodeId, NodeId> = HashMap::new();
        let mut roots = Vec::new();
        let mut finals = Vec::new();
        let mut next = 0usize;
        while next < pairs.len() {
            let (sa, sb) = pairs.keys[next];
            next += 1;
            let node = product_node(
                &a.arena,
                a.roots[sa as usize],
                &b.arena,
                b.roots[sb as usize],
                &mut pair_arena,
                &mut memo,
            );
            let root = out.import(&pair_arena, node, &mut import_memo, &mut |p| {
                singleton(pairs.get(p))
            });
            roots.push(root);
            let (fa, fb) = (a.finals[sa as usize], b.finals[sb as usize]);
            finals.push(match mode {
                Combine::And => fa && fb,
                Combine::Or => fa || fb,
            });
        }
        Ok(Automaton::from_parts(
            self.alphabet,
            out,
            roots,
            finals,
            singleton(0),
        ))
    }

    pub fn intersect(&self, other: &Automaton) -> Result<Automaton, AutomatonError> {
        self.product(other, Combine::And)
    }

    pub fn union(&self, other: &Automaton) -> Result<Automaton, AutomatonError> {
        self.product(other, Combine::Or)
    }

    /// Complement relative to all nonempty words. Requires a deterministic automaton.
    pub fn complement(&self) -> Result<Automaton, AutomatonError> {
        if !self.deterministic {
            return Err(AutomatonError::NotDeterministic);
        }
        let mut roots = self.roots.clone();
        let mut finals: Vec<bool> = self.finals.iter().map(|f| !f).collect();
        let mut initial = self.initial.clone();
        let init = self.initial[0] as usize;
        if finals[init] {
            // keep the empty word rejected with a fresh copy of the initial state
            roots.push(self.roots[init]);
            finals.push(false);
            initial = singleton((roots.len() - 1) as StateId);
        }
        Ok(Automaton::from_parts(
            self.alphabet,
            self.arena.clone(),
            roots,
            finals,
            initial,
        ))
    }

    /// Deletes `track`. The result is in general nondeterministic and may need
    /// [`Automaton::saturate_padding`] to stay closed under sign padding.
    pub fn project(&self, track: usize) -> Result<Automaton, AutomatonError> {
        let arity = self.arity();
        if track >= arity {
            return Err(AutomatonError::TrackOutOfRange { track, arity });
        }
        let mut out: Arena<StateSet> = Arena::new();
        let mut memo = HashMap::new();
        let mut union_memo = HashMap::new();
        let roots: Vec<NodeId> = self
            .roots
            .iter()
            .map(|&r| {
                project_node(
                    &self.arena,
                    r,
                    track as u32,
                    &mut out,
                    &mut memo,
                    &mut union_memo,
                )
            })
            .collect();
        Ok(Automaton::from_parts(
            DigitTupleAlphabet::new(self.base(), arity - 1),
            out,
            roots,
            self.finals.clone(),
            self.initial.clone(),
        ))
    }

    /// Accepts `w` iff the input accepts `w p^k` for some `k >= 0`, where `p` is the
    /// padding letter of `w`'s last letter. Output is deterministic.
    pub fn saturate_padding(&self) -> Result<Automaton, AutomatonError> {
        let arity = self.arity();
        if arity > 64 {
            return Err(AutomatonError::TooManyTracks(arity));
        }
        let dfa = self.determinize();
        let q = dfa.base();
        let pad_of = |sigma: u64| -> Vec<u32> {
            (0..arity)
                .map(|i| {
                    if sigma >> i & 1 == 1 {
                        q.top_digit()
                    } else {
                        0
                    }
                })
                .collect()
        };
        let mut acc_memo: HashMap<(StateId, u64), bool> = HashMap::new();
        let mut reaches_final = |t: StateId, sigma: u64| -> bool {
            if let Some(&b) = acc_memo.get(&(t, sigma)) {
                return b;
            }
            let pad = pad_of(sigma);
            let mut seen = std::collections::HashSet::new();
            let mut cur = t;
            let mut found = false;
            while seen.insert(cur) {
                if dfa.finals[cur as usize] {
                    found = true;
                    break;
                }
                cur = dfa.step(cur, &pad)[0];
            }
            acc_memo.insert((t, sigma), found);
            found
        };
        let mut states: Interner<(StateId, bool)> = Interner::new();
        states.get(&(dfa.initial[0], false));
        let mut staged: Arena<(StateId, bool)> = Arena::new();
        let mut stage_memo: HashMap<(NodeId, u32, u64), NodeId> = HashMap::new();
        let mut out: Arena<StateSet> = Arena::new();
        let mut import_memo = HashMap::new();
        let mut root_of_source: HashMap<StateId, NodeId> = HashMap::new();
        let mut roots = Vec::new();
        let mut finals = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let (t, accepting) = states.keys[next];
            next += 1;
            let root = match root_of_source.get(&t) {
                Some(&r) => r,
                None => {
                    let staged_root = saturate_node(
                        &dfa.arena,
                        dfa.roots[t as usize],
                        0,
                        0,
                        arity as u32,
                        q.top_digit(),
                        &mut staged,
                        &mut stage_memo,
                        &mut reaches_final,
                    );
                    let r = out.import(&staged, staged_root, &mut import_memo, &mut |k| {
                        singleton(states.get(k))
                    });
                    root_of_source.insert(t, r);
                    r
                }
            };
            roots.push(root);
            finals.push(accepting);
        }
        Ok(Automaton::from_parts(
            self.alphabet,
            out,
            roots,
            finals,
            singleton(0),
        ))
    }

    /// Inserts an unconstrained track at `position` (existing tracks at or after it shift up).
    pub fn cylindrify(&self, position: usize) -> Result<Automaton, AutomatonError> {
        let arity = self.arity();
        if position > arity {
            return Err(AutomatonError::TrackOutOfRange {
                track: position,
                arity: arity + 1,
            });
        }
        let p = position as u32;
        let mut out: Arena<StateSet> = Arena::new();
        let mut memo = HashMap::new();
        let rename = |t: u32| if t >= p { t + 1 } else { t };
        let roots = self
            .roots
            .iter()
            .map(|&r| out.import_renamed(&self.arena, r, &rename, &mut memo))
            .collect();
        Ok(Automaton::from_parts(
            DigitTupleAlphabet::new(self.base(), arity + 1),
            out,
            roots,
            self.finals.clone(),
            self.initial.clone(),
        ))
    }

    /// Output track `i` carries input track `permutation[i]`.
    pub fn reorder_tracks(&self, permutation: &[usize]) -> Result<Automaton, AutomatonError> {
        let arity = self.arity();
        let mut seen = vec![false; arity];
        if permutation.len() != arity
            || permutation
                .iter()
                .any(|&p| p >= arity || std::mem::replace(&mut seen[p], true))
        {
            return Err(AutomatonError::InvalidPermutation(permutation.to_vec()));
        }
        let mut new_of_old = vec![0u32; arity];
        for (new, &old) in permutation.iter().enumerate() {
            new_of_old[old] = new as u32;
        }
        if new_of_old.iter().enumerate().all(|(i, &n)| i as u32 == n) {
            return Ok(self.clone());
        }
        let mut out: Arena<StateSet> = Arena::new();
        let mut memo = HashMap::new();
        let mut select_memo = HashMap::new();
        let roots = self
            .roots
            .iter()
            .map(|&r| {
                reorder_node(
                    &self.arena,
                    r,
                    &new_of_old,
                    &mut out,
                    &mut memo,
                    &mut select_memo,
                )
            })
            .collect();
        Ok(Automaton::from_parts(
            self.alphabet,
            out,
            roots,
            self.finals.clone(),
            self.initial.clone(),
        ))
    }

    /// Drops `track` existentially and restores padding closure; the result is minimal.
    pub fn eliminate(&self, track: usize) -> Result<Automaton, AutomatonError> {
        Ok(self.project(track)?.saturate_padding()?.minimize())
    }

    /// States reachable from the initial states by nonempty or empty words.
    pub(crate) fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue: VecDeque<StateId> = self.initial.iter().copied().collect();
        for &s in self.initial.iter() {
            seen[s as usize] = true;
        }
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for t in self.successors(s) {
                if !std::mem::replace(&mut seen[t as usize], true) {
                    queue.push_back(t);
                }
            }
        }
        order
    }
}

fn product_node(
    a: &Arena<StateSet>,
    x: NodeId,
    b: &Arena<StateSet>,
    y: NodeId,
    out: &mut Arena<(StateId, StateId)>,
    memo: &mut HashMap<(NodeId, NodeId), NodeId>,
) -> NodeId {
    use super::diagram::LEAF_TRACK;
    if let Some(&r) = memo.get(&(x, y)) {
        return r;
    }
    let (tx, ty) = (a.top(x), b.top(y));
    let r = if tx == LEAF_TRACK && ty == LEAF_TRACK {
        out.leaf((a.leaf_value(x)[0], b.leaf_value(y)[0]))
    } else {
        let t = tx.min(ty);
        let q = match if tx == t { a.node(x) } else { b.node(y) } {
            super::diagram::Node::Branch { kids, .. } => kids.len() as u32,
            super::diagram::Node::Leaf(_) => unreachable!(),
        };
        let kids = (0..q)
            .map(|d| product_node(a, a.cofactor(x, t, d), b, b.cofactor(y, t, d), out, memo))
            .collect();
        out.branch(t, kids)
    };
    memo.insert((x, y), r);
    r
}

fn project_node(
    src: &Arena<StateSet>,
    id: NodeId,
    track: u32,
    out: &mut Arena<StateSet>,
    memo: &mut HashMap<NodeId, NodeId>,
    union_memo: &mut HashMap<(NodeId, NodeId), NodeId>,
) -> NodeId {
    use super::diagram::Node;
    if let Some(&r) = memo.get(&id) {
        return r;
    }
    let r = match src.node(id) {
        Node::Leaf(v) => out.leaf(v.clone()),
        Node::Branch { track: t, kids } => {
            let kids: Vec<NodeId> = kids
                .iter()
                .map(|&k| project_node(src, k, track, out, memo, union_memo))
                .collect();
            if *t == track {
                let mut acc = kids[0];
                for &k in &kids[1..] {
                    acc = out.combine_self(acc, k, union_memo, &mut |a, b| union_sets(a, b));
                }
                acc
            } else if *t > track {
                out.branch(t - 1, kids)
            } else {
                out.branch(*t, kids)
            }
        }
    };
    memo.insert(id, r);
    r
}

/// Rebuilds a deterministic transition diagram with leaves `(target, accepting)`, where
/// `accepting` depends on which tracks read the top digit (the sign pattern `sigma`).
#[allow(clippy::too_many_arguments)]
fn saturate_node(
    src: &Arena<StateSet>,
    id: NodeId,
    track: u32,
    sigma: u64,
    arity: u32,
    top_digit: u32,
    out: &mut Arena<(StateId, bool)>,
    memo: &mut HashMap<(NodeId, u32, u64), NodeId>,
    acc: &mut impl FnMut(StateId, u64) -> bool,
) -> NodeId {
    if let Some(&r) = memo.get(&(id, track, sigma)) {
        return r;
    }
    let r = if track == arity {
        let t = src.leaf_value(id)[0];
        let a = acc(t, sigma);
        out.leaf((t, a))
    } else if src.top(id) == track {
        let n = match src.node(id) {
            super::diagram::Node::Branch { kids, .. } => kids.clone(),
            _ => unreachable!(),
        };
        let kids = n
            .iter()
            .enumerate()
            .map(|(d, &k)| {
                let bit = (d as u32 == top_digit) as u64;
                saturate_node(
                    src,
                    k,
                    track + 1,
                    sigma | bit << track,
                    arity,
                    top_digit,
                    out,
                    memo,
                    acc,
                )
            })
            .collect();
        out.branch(track, kids)
    } else {
        let low = saturate_node(src, id, track + 1, sigma, arity, top_digit, out, memo, acc);
        let high = saturate_node(
            src,
            id,
            track + 1,
            sigma | 1 << track,
            arity,
            top_digit,
            out,
            memo,
            acc,
        );
        let mut kids = vec![low; top_digit as usize];
        kids.push(high);
        out.branch(track, kids)
    };
    memo.insert((id, track, sigma), r);
    r
}

fn reorder_node(
    src: &Arena<StateSet>,
    id: NodeId,
    new_of_old: &[u32],
    out: &mut Arena<StateSet>,
    memo: &mut HashMap<NodeId, NodeId>,
    select_memo: &mut HashMap<(u32, Vec<NodeId>), NodeId>,
) -> NodeId {
    use super::diagram::Node;
    if let Some(&r) = memo.get(&id) {
        return r;
    }
    let r = match src.node(id) {
        Node::Leaf(v) => out.leaf(v.clone()),
        Node::Branch { track, kids } => {
            let kids: Vec<NodeId> = kids
                .iter()
                .map(|&k| reorder_node(src, k, new_of_old, out, memo, select_memo))
                .collect();
            out.select(new_of_old[*track as usize], kids, select_memo)
        }
    };
    memo.insert(id, r);
    r
}
