//! Bounded brute-force search and random instances, used to cross-check the solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::Base;
use crate::group::{power_product, GroupElement, GroupWord, Letter};
use crate::knapsack::{verify_witness, KnapsackInstance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub found: Option<Vec<u64>>,
    pub searched_bound: u64,
}

/// First exponent vector in `[0, bound]^n`, in lexicographic order, whose power product
/// equals the target.
pub fn brute_force(inst: &KnapsackInstance, bound: u64) -> OracleOutcome {
    let mut xs = vec![0u64; inst.len()];
    let found = search(inst, bound, 0, &GroupElement::identity(), &mut xs).then_some(xs);
    debug_assert!(found.as_ref().is_none_or(|xs| verify_witness(inst, xs)));
    OracleOutcome {
        found,
        searched_bound: bound,
    }
}

fn search(
    inst: &KnapsackInstance,
    bound: u64,
    i: usize,
    prefix: &GroupElement,
    xs: &mut [u64],
) -> bool {
    let q = inst.q;
    if i == inst.len() {
        return *prefix == inst.target;
    }
    let g = &inst.generators[i];
    let mut p = prefix.clone();
    for x in 0..=bound {
        xs[i] = x;
        if search(inst, bound, i + 1, &p, xs) {
            return true;
        }
        p = p.multiply(g, q);
    }
    xs[i] = 0;
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceKind {
    /// The target is the product with these exponents.
    ConstructedSat(Vec<u64>),
    /// The target was perturbed; the instance may or may not be solvable.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomInstance {
    pub instance: KnapsackInstance,
    pub words: Vec<GroupWord>,
    pub kind: InstanceKind,
}

pub const MAX_CONSTRUCTED_EXPONENT: u64 = 6;

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len.max(1));
    let letters = [Letter::A, Letter::AInv, Letter::T, Letter::TInv];
    GroupWord((0..len).map(|_| letters[rng.gen_range(0..4)]).collect())
}

/// Deterministic in `(q, n, max_word_len, seed)`. Half of the instances have a target
/// built as a genuine product with exponents at most 6; the others multiply such a
/// product by a random non-identity element.
pub fn random_instance(q: Base, n: usize, max_word_len: usize, seed: u64) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<GroupWord> = (0..n)
        .map(|_| random_word(&mut rng, max_word_len))
        .collect();
    let generators: Vec<GroupElement> = words.iter().map(|w| w.eval(q)).collect();
    let exps: Vec<u64> = (0..n)
        .map(|_| rng.gen_range(0..=MAX_CONSTRUCTED_EXPONENT))
        .collect();
    let product = power_product(&generators, &exps, q);
    let (target, kind) = if rng.gen_bool(0.5) {
        (product, InstanceKind::ConstructedSat(exps))
    } else {
        let factor = loop {
            let f = random_word(&mut rng, max_word_len).eval(q);
            if !f.is_identity() {
                break f;
            }
        };
        (product.multiply(&factor, q), InstanceKind::Unknown)
    };
    let instance =
        KnapsackInstance::new(q, generators, target).expect("evaluated words are canonical");
    RandomInstance {
        instance,
        words,
        kind,
    }
}
