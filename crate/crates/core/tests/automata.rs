use num_bigint::BigInt;
use proptest::prelude::*;

use bsknap::atoms::{linear_automaton, shift_automaton, LinearAtom};
use bsknap::automata::encoding::encode_i64;
use bsknap::automata::{decode, encode, Automaton};
use bsknap::Base;

fn xy() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

fn atom() -> impl Strategy<Value = LinearAtom> {
    (-4i64..=4, -4i64..=4, -9i64..=9, any::<bool>()).prop_map(|(a, b, c, eq)| {
        if eq {
            LinearAtom::eq(&[("x", a), ("y", b)], c)
        } else {
            LinearAtom::geq(&[("x", a), ("y", b)], c)
        }
    })
}

fn base() -> impl Strategy<Value = Base> {
    (2u32..=5).prop_map(|q| Base::new(q).unwrap())
}

fn accepts(a: &Automaton, point: &[i64], q: Base) -> bool {
    a.accepts(&encode_i64(point, q)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boolean_operations_agree(q in base(), s in atom(), t in atom(), x in -60i64..=60, y in -60i64..=60) {
        let a = linear_automaton(&s, &xy(), q).unwrap();
        let b = linear_automaton(&t, &xy(), q).unwrap();
        let (va, vb) = (accepts(&a, &[x, y], q), accepts(&b, &[x, y], q));
        prop_assert_eq!(accepts(&a.intersect(&b).unwrap(), &[x, y], q), va && vb);
        prop_assert_eq!(accepts(&a.union(&b).unwrap(), &[x, y], q), va || vb);
        prop_assert_eq!(accepts(&a.complement().unwrap(), &[x, y], q), !va);
    }

    #[test]
    fn determinize_and_minimize_preserve_acceptance(q in base(), s in atom(), x in -60i64..=60) {
        let a = linear_automaton(&s, &xy(), q).unwrap();
        let nfa = a.union(&shift_automaton(1, q)).unwrap().project(1).unwrap();
        let dfa = nfa.determinize();
        prop_assert!(dfa.is_deterministic());
        let w = encode_i64(&[x], q);
        prop_assert_eq!(nfa.accepts(&w).unwrap(), dfa.accepts(&w).unwrap());
        prop_assert_eq!(dfa.accepts(&w).unwrap(), dfa.minimize().accepts(&w).unwrap());
    }

    #[test]
    fn encoding_round_trips(q in base(), xs in proptest::collection::vec(-100_000i64..=100_000, 1..4), pads in 0usize..4) {
        let values: Vec<BigInt> = xs.iter().map(|&x| BigInt::from(x)).collect();
        let mut w = encode(&values, q);
        for _ in 0..pads {
            w = w.padded(q);
        }
        prop_assert_eq!(decode(&w, q), values);
    }

    #[test]
    fn reorder_swaps_tracks(q in base(), s in atom(), x in -40i64..=40, y in -40i64..=40) {
        let a = linear_automaton(&s, &xy(), q).unwrap();
        let swapped = a.reorder_tracks(&[1, 0]).unwrap();
        prop_assert_eq!(accepts(&a, &[x, y], q), accepts(&swapped, &[y, x], q));
    }

    #[test]
    fn cylindrify_ignores_new_track(q in base(), s in atom(), x in -40i64..=40, y in -40i64..=40, z in -40i64..=40) {
        let a = linear_automaton(&s, &xy(), q).unwrap();
        let c = a.cylindrify(1).unwrap();
        prop_assert_eq!(accepts(&a, &[x, y], q), accepts(&c, &[x, z, y], q));
    }
}

#[test]
fn eliminate_projects_existentially() {
    let q = Base::new(3).unwrap();
    // y = 3x + 1, so projecting out x leaves y = 1 (mod 3)
    let a = linear_automaton(&LinearAtom::eq(&[("y", 1), ("x", -3)], 1), &xy(), q).unwrap();
    let p = a.eliminate(0).unwrap();
    for y in -50..=50i64 {
        assert_eq!(accepts(&p, &[y], q), y.rem_euclid(3) == 1, "y = {y}");
    }
}

#[test]
fn minimal_automata_are_unique_up_to_numbering() {
    let q = Base::new(2).unwrap();
    let a = linear_automaton(&LinearAtom::eq(&[("x", 2), ("y", -2)], 0), &xy(), q).unwrap();
    let b = linear_automaton(&LinearAtom::eq(&[("x", 1), ("y", -1)], 0), &xy(), q).unwrap();
    assert!(a.minimize().is_isomorphic(&b.minimize()));
    assert!(a.language_eq(&b));
    let c = linear_automaton(&LinearAtom::geq(&[("x", 1), ("y", -1)], 0), &xy(), q).unwrap();
    assert!(!a.language_eq(&c));
}

#[test]
fn empty_and_full() {
    let q = Base::new(2).unwrap();
    assert!(Automaton::empty(q, 1).is_empty());
    assert!(!Automaton::full(q, 1).is_empty());
    assert!(Automaton::full(q, 1).complement().unwrap().is_empty());
}

#[test]
fn dot_output_names_states() {
    let q = Base::new(2).unwrap();
    let dot = shift_automaton(1, q).to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("->"));
}
