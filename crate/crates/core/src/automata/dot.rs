use std::fmt::Write;

use super::diagram::Node;
use super::{Automaton, NodeId, StateId};

impl Automaton {
    /// Graphviz rendering with one edge per letter; letters print as colon-separated
    /// digits, track 0 first.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let q = self.base().get();
        writeln!(s, "digraph automaton {{").unwrap();
        writeln!(
            s,
            "  // q = {q}, arity = {}; digits are read least significant first",
            self.arity()
        )
        .unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        writeln!(s, "  init [shape=point];").unwrap();
        for st in 0..self.num_states() {
            let shape = if self.finals[st] {
                "doublecircle"
            } else {
                "circle"
            };
            writeln!(s, "  s{st} [shape={shape}];").unwrap();
        }
        for &i in self.initial.iter() {
            writeln!(s, "  init -> s{i};").unwrap();
        }
        for st in 0..self.num_states() {
            let mut letter = vec![0u32; self.arity()];
            let mut edges: Vec<(Vec<u32>, StateId)> = Vec::new();
            self.letters_of(self.roots[st], 0, &mut letter, &mut edges);
            for (l, t) in edges {
                let label: Vec<String> = l.iter().map(u32::to_string).collect();
                let label = if label.is_empty() {
                    "()".to_string()
                } else {
                    label.join(":")
                };
                writeln!(s, "  s{st} -> s{t} [label=\"{label}\"];").unwrap();
            }
        }
        s.push_str("}\n");
        debug_assert!(q >= 2);
        s
    }

    fn letters_of(
        &self,
        id: NodeId,
        track: usize,
        letter: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, StateId)>,
    ) {
        if track == letter.len() {
            for &t in self.arena.leaf_value(id).iter() {
                out.push((letter.clone(), t));
            }
            return;
        }
        let q = self.base().get();
        for d in 0..q {
            letter[track] = d;
            let next = match self.arena.node(id) {
                Node::Branch { track: t, kids } if *t as usize == track => kids[d as usize],
                _ => id,
            };
            self.letters_of(next, track + 1, letter, out);
        }
    }
}
