use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use bsknap::atoms::{
    linear_automaton, power_automaton, semantics, shift_automaton, vq_automaton, LinearAtom,
};
use bsknap::automata::encoding::encode_i64;
use bsknap::formula::{compile, Formula};
use bsknap::Base;

fn base() -> impl Strategy<Value = Base> {
    (2u32..=5).prop_map(|q| Base::new(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shift_negative_is_swapped(q in base(), ell in 1i64..=4, x in -300i64..=300, y in -300i64..=300) {
        let w = encode_i64(&[x, y], q);
        let v = encode_i64(&[y, x], q);
        prop_assert_eq!(shift_automaton(-ell, q).accepts(&w).unwrap(), shift_automaton(ell, q).accepts(&v).unwrap());
    }

    #[test]
    fn linear_matches_arithmetic(q in base(), a in -6i64..=6, b in -6i64..=6, c in -20i64..=20, x in -500i64..=500, y in -500i64..=500) {
        let env = vec!["x".to_string(), "y".to_string()];
        let vals: BTreeMap<String, BigInt> = [("x".to_string(), BigInt::from(x)), ("y".to_string(), BigInt::from(y))].into();
        for atom in [LinearAtom::eq(&[("x", a), ("y", b)], c), LinearAtom::geq(&[("x", a), ("y", b)], c)] {
            let got = linear_automaton(&atom, &env, q).unwrap().accepts(&encode_i64(&[x, y], q)).unwrap();
            prop_assert_eq!(got, atom.holds(&vals).unwrap());
        }
    }

    #[test]
    fn large_values(q in base(), e in 0u32..40, ell in 1u32..=3) {
        let p = BigInt::from(q.get()).pow(e);
        let w = bsknap::automata::encode(std::slice::from_ref(&p), q);
        prop_assert_eq!(power_automaton(ell, q).accepts(&w).unwrap(), e % ell == 0);
        prop_assert!(semantics::is_power(&p, 1, q));
    }
}

#[test]
fn valuation_is_contained_in_powers() {
    // Vq(x, y) implies y is a power of q
    for qn in [2u32, 3] {
        let q = Base::new(qn).unwrap();
        let env = vec!["y".to_string()];
        let image = compile(&Formula::exists("x", Formula::vq("x", "y")), &env, q).unwrap();
        let powers = power_automaton(1, q);
        assert!(image
            .intersect(&powers.complement().unwrap())
            .unwrap()
            .is_empty());
        assert!(image.language_eq(&powers));
    }
}

#[test]
fn vq_examples() {
    let q = Base::new(2).unwrap();
    let a = vq_automaton(q);
    for (x, y, expect) in [
        (12, 4, true),
        (12, 2, false),
        (-12, 4, true),
        (0, 1, false),
        (7, 1, true),
    ] {
        assert_eq!(
            a.accepts(&encode_i64(&[x, y], q)).unwrap(),
            expect,
            "V2({x}, {y})"
        );
    }
}

#[test]
fn shift_zero_is_equal_powers() {
    let q = Base::new(3).unwrap();
    let a = shift_automaton(0, q);
    for x in -30..=30i64 {
        for y in -30..=30i64 {
            let expect = x == y && semantics::is_power(&BigInt::from(x), 1, q);
            assert_eq!(a.accepts(&encode_i64(&[x, y], q)).unwrap(), expect);
        }
    }
}

#[test]
fn unknown_variable_is_an_error() {
    let q = Base::new(2).unwrap();
    let atom = LinearAtom::eq(&[("z", 1)], 0);
    assert!(linear_automaton(&atom, &["x".to_string()], q).is_err());
}
