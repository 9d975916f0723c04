//! Hash-consed, reduced, ordered decision diagrams over digit tracks.
//!
//! A branch node tests one track and has one child per digit `0..q`. Tracks increase
//! strictly along every path; a track that is skipped is unconstrained. A branch whose
//! children are all identical is never created, so each function of a letter has a
//! unique representation within an arena.

use std::collections::HashMap;
use std::hash::Hash;

pub(crate) type NodeId = u32;

/// Sentinel "track" of a leaf; sorts after every real track.
pub(crate) const LEAF_TRACK: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node<L> {
    Leaf(L),
    Branch { track: u32, kids: Box<[NodeId]> },
}

#[derive(Debug, Clone)]
pub(crate) struct Arena<L> {
    nodes: Vec<Node<L>>,
    unique: HashMap<Node<L>, NodeId>,
}

impl<L: Clone + Eq + Hash> Default for Arena<L> {
    fn default() -> Self {
        Arena {
            nodes: Vec::new(),
            unique: HashMap::new(),
        }
    }
}

impl<L: Clone + Eq + Hash> Arena<L> {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, node: Node<L>) -> NodeId {
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.unique.insert(node, id);
        id
    }

    pub fn leaf(&mut self, value: L) -> NodeId {
        self.intern(Node::Leaf(value))
    }

    pub fn branch(&mut self, track: u32, kids: Vec<NodeId>) -> NodeId {
        debug_assert!(!kids.is_empty());
        if kids.iter().all(|&k| k == kids[0]) {
            return kids[0];
        }
        debug_assert!(kids.iter().all(|&k| self.top(k) > track));
        self.intern(Node::Branch {
            track,
            kids: kids.into_boxed_slice(),
        })
    }

    pub fn node(&self, id: NodeId) -> &Node<L> {
        &self.nodes[id as usize]
    }

    pub fn top(&self, id: NodeId) -> u32 {
        match &self.nodes[id as usize] {
            Node::Leaf(_) => LEAF_TRACK,
            Node::Branch { track, .. } => *track,
        }
    }

    pub fn leaf_value(&self, id: NodeId) -> &L {
        match &self.nodes[id as usize] {
            Node::Leaf(v) => v,
            Node::Branch { .. } => panic!("node {id} is not a leaf"),
        }
    }

    /// Child of `id` for `digit` on `track`; `id` itself when it does not test `track`.
    /// Requires `top(id) >= track`.
    pub fn cofactor(&self, id: NodeId, track: u32, digit: u32) -> NodeId {
        match &self.nodes[id as usize] {
            Node::Branch { track: t, kids } if *t == track => kids[digit as usize],
            _ => id,
        }
    }

    pub fn eval(&self, mut id: NodeId, letter: &[u32]) -> &L {
        loop {
            match &self.nodes[id as usize] {
                Node::Leaf(v) => return v,
                Node::Branch { track, kids } => id = kids[letter[*track as usize] as usize],
            }
        }
    }

    /// Distinct leaf values below `root`, in first-visit order of a digit-ordered DFS.
    pub fn leaves(&self, root: NodeId) -> Vec<&L> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match &self.nodes[id as usize] {
                Node::Leaf(v) => out.push(v),
                Node::Branch { kids, .. } => stack.extend(kids.iter().rev()),
            }
        }
        out
    }

    /// Copies the diagram under `id` from `src` into `self`, relabelling leaves.
    pub fn import<S: Clone + Eq + Hash>(
        &mut self,
        src: &Arena<S>,
        id: NodeId,
        memo: &mut HashMap<NodeId, NodeId>,
        f: &mut impl FnMut(&S) -> L,
    ) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match src.node(id) {
            Node::Leaf(v) => {
                let v = f(v);
                self.leaf(v)
            }
            Node::Branch { track, kids } => {
                let kids: Vec<NodeId> =
                    kids.iter().map(|&k| self.import(src, k, memo, f)).collect();
                self.branch(*track, kids)
            }
        };
        memo.insert(id, r);
        r
    }

    /// Pointwise combination of a diagram already in `self` with one from `other`.
    pub fn combine_with<B: Clone + Eq + Hash>(
        &mut self,
        x: NodeId,
        other: &Arena<B>,
        y: NodeId,
        memo: &mut HashMap<(NodeId, NodeId), NodeId>,
        f: &mut impl FnMut(&L, &B) -> L,
    ) -> NodeId {
        if let Some(&r) = memo.get(&(x, y)) {
            return r;
        }
        let (tx, ty) = (self.top(x), other.top(y));
        let r = if tx == LEAF_TRACK && ty == LEAF_TRACK {
            let v = f(self.leaf_value(x), other.leaf_value(y));
            self.leaf(v)
        } else {
            let t = tx.min(ty);
            let q = if tx == t {
                self.arity_of(x)
            } else {
                other.arity_of(y)
            };
            let kids: Vec<NodeId> = (0..q as u32)
                .map(|d| {
                    let cx = self.cofactor(x, t, d);
                    let cy = other.cofactor(y, t, d);
                    self.combine_with(cx, other, cy, memo, f)
                })
                .collect();
            self.branch(t, kids)
        };
        memo.insert((x, y), r);
        r
    }

    /// Pointwise combination of two diagrams that both live in `self`.
    pub fn combine_self(
        &mut self,
        x: NodeId,
        y: NodeId,
        memo: &mut HashMap<(NodeId, NodeId), NodeId>,
        f: &mut impl FnMut(&L, &L) -> L,
    ) -> NodeId {
        if let Some(&r) = memo.get(&(x, y)) {
            return r;
        }
        let (tx, ty) = (self.top(x), self.top(y));
        let r = if tx == LEAF_TRACK && ty == LEAF_TRACK {
            let v = f(self.leaf_value(x), self.leaf_value(y));
            self.leaf(v)
        } else {
            let t = tx.min(ty);
            let q = if tx == t {
                self.arity_of(x)
            } else {
                self.arity_of(y)
            };
            let kids: Vec<NodeId> = (0..q as u32)
                .map(|d| {
                    let cx = self.cofactor(x, t, d);
                    let cy = self.cofactor(y, t, d);
                    self.combine_self(cx, cy, memo, f)
                })
                .collect();
            self.branch(t, kids)
        };
        memo.insert((x, y), r);
        r
    }

    fn arity_of(&self, id: NodeId) -> usize {
        match &self.nodes[id as usize] {
            Node::Branch { kids, .. } => kids.len(),
            Node::Leaf(_) => 0,
        }
    }

    /// Copies `id` from `src` with every track renamed through `rename`, which must be
    /// strictly monotone on the tracks that occur.
    pub fn import_renamed(
        &mut self,
        src: &Arena<L>,
        id: NodeId,
        rename: &impl Fn(u32) -> u32,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> NodeId {
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = match src.node(id) {
            Node::Leaf(v) => self.leaf(v.clone()),
            Node::Branch { track, kids } => {
                let kids: Vec<NodeId> = kids
                    .iter()
                    .map(|&k| self.import_renamed(src, k, rename, memo))
                    .collect();
                self.branch(rename(*track), kids)
            }
        };
        memo.insert(id, r);
        r
    }

    /// Builds the diagram "if `track` = d then `kids[d]`" where the kids may test tracks
    /// on either side of `track`.
    pub fn select(
        &mut self,
        track: u32,
        kids: Vec<NodeId>,
        memo: &mut HashMap<(u32, Vec<NodeId>), NodeId>,
    ) -> NodeId {
        let low = kids
            .iter()
            .map(|&k| self.top(k))
            .min()
            .unwrap_or(LEAF_TRACK);
        if track < low {
            return self.branch(track, kids);
        }
        debug_assert_ne!(low, track);
        let key = (track, kids);
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let kids = &key.1;
        let q = kids.iter().map(|&k| self.arity_of(k)).max().unwrap_or(0);
        let split: Vec<NodeId> = (0..q as u32)
            .map(|e| {
                let sub: Vec<NodeId> = kids.iter().map(|&k| self.cofactor(k, low, e)).collect();
                self.select(track, sub, memo)
            })
            .collect();
        let r = self.branch(low, split);
        memo.insert(key, r);
        r
    }

    /// Structural equality of `x` in `self` and `y` in `other` with leaves compared by `eq`.
    pub fn same_shape<B: Clone + Eq + Hash>(
        &self,
        x: NodeId,
        other: &Arena<B>,
        y: NodeId,
        eq: &impl Fn(&L, &B) -> bool,
        seen: &mut std::collections::HashSet<(NodeId, NodeId)>,
    ) -> bool {
        if !seen.insert((x, y)) {
            return true;
        }
        match (self.node(x), other.node(y)) {
            (Node::Leaf(a), Node::Leaf(b)) => eq(a, b),
            (
                Node::Branch {
                    track: ta,
                    kids: ka,
                },
                Node::Branch {
                    track: tb,
                    kids: kb,
                },
            ) => {
                ta == tb
                    && ka.len() == kb.len()
                    && ka
                        .iter()
                        .zip(kb.iter())
                        .all(|(&a, &b)| self.same_shape(a, other, b, eq, seen))
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_sharing() {
        let mut a: Arena<u32> = Arena::new();
        let l0 = a.leaf(0);
        let l1 = a.leaf(1);
        assert_eq!(a.branch(0, vec![l0, l0]), l0);
        let b = a.branch(1, vec![l0, l1]);
        assert_eq!(a.branch(1, vec![l0, l1]), b);
        assert_eq!(*a.eval(b, &[0, 1]), 1);
        assert_eq!(*a.eval(b, &[1, 0]), 0);
    }

    #[test]
    fn select_reorders() {
        // f(x0, x1) = x0 written with x0 moved to track 1 under a track-0 test
        let mut a: Arena<u32> = Arena::new();
        let l0 = a.leaf(0);
        let l1 = a.leaf(1);
        let inner = a.branch(0, vec![l1, l0]);
        let mut memo = HashMap::new();
        let r = a.select(1, vec![inner, l0], &mut memo);
        // r(t0, t1) = if t1 == 0 { inner(t0) } else { 0 }
        assert_eq!(*a.eval(r, &[0, 0]), 1);
        assert_eq!(*a.eval(r, &[1, 0]), 0);
        assert_eq!(*a.eval(r, &[0, 1]), 0);
        assert_eq!(a.top(r), 0);
    }
}
