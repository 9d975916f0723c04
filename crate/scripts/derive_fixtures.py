#!/usr/bin/env python3
"""Recompute the known-answer fixtures by direct enumeration.

Everything here is independent of the Rust crate: group elements are pairs
(k, Fraction), integers are encoded digit by digit from the definition, and every
predicate is evaluated from its arithmetic definition. Run from the repository root:

    python3 scripts/derive_fixtures.py > crates/core/tests/fixtures/known_answers.json
"""

import itertools
import json
from fractions import Fraction


# --- BS(1,q) as pairs (k, u) standing for the matrix (q^k, u; 0, 1) ---------------

def mul(g, h, q):
    (k, u), (l, v) = g, h
    return (k + l, u + v * Fraction(q) ** k)


def inv(g, q):
    k, u = g
    return (-k, -u * Fraction(q) ** (-k))


def power_iter(g, s, q):
    r = (0, Fraction(0))
    for _ in range(s):
        r = mul(r, g, q)
    return r


def word(text, q):
    images = {"a": (0, Fraction(1)), "t": (1, Fraction(0))}
    r = (0, Fraction(0))
    for tok in text.split():
        if tok.endswith("^-1"):
            r = mul(r, inv(images[tok[0]], q), q)
        else:
            r = mul(r, images[tok], q)
    return r


def triple(g, q):
    """(k, numerator, e) with u = numerator / q^e and e minimal."""
    k, u = g
    e = 0
    while (u * q ** e).denominator != 1:
        e += 1
    return [k, int(u * q ** e), e]


def integral(g):
    k, u = g
    return k >= 0 and u.denominator == 1


def integral_shift(elems, q):
    k = 0
    while True:
        prefix = (k, Fraction(0))
        ok = integral(prefix)
        for g in elems:
            prefix = mul(prefix, g, q)
            ok = ok and integral(prefix)
        if ok:
            return k
        k += 1


# --- encoding from the definition ------------------------------------------------

def digit_value(d, q, last):
    return -1 if last and d == q - 1 else d


def decode(digits, q):
    return sum(digit_value(d, q, i == len(digits) - 1) * q ** i for i, d in enumerate(digits))


def encode(x, q):
    """Shortest digit list decoding to x, found by search over lengths."""
    for n in itertools.count(1):
        for digits in itertools.product(range(q), repeat=n):
            if decode(list(digits), q) == x:
                return list(digits)


def encode_tuple(values, q):
    tracks = [encode(v, q) for v in values]
    n = max(len(t) for t in tracks)
    padded = []
    for t in tracks:
        pad = q - 1 if t[-1] == q - 1 else 0
        padded.append(t + [pad] * (n - len(t)))
    return [list(letter) for letter in zip(*padded)]


# --- predicates from the definitions ---------------------------------------------

def log_q(x, q):
    if x <= 0:
        return None
    e = 0
    while x % q == 0:
        x //= q
        e += 1
    return e if x == 1 else None


def shift(ell, x, y, q):
    a, b = log_q(x, q), log_q(y, q)
    if a is None or b is None:
        return False
    for s in range(0, 200):
        if a + ell * s == b:
            return True
    return False


def is_power(ell, x, q):
    e = log_q(x, q)
    return e is not None and e % ell == 0


def vq(x, y, q):
    if x == 0:
        return False
    p = 1
    while x % (p * q) == 0:
        p *= q
    return y == p


def lex_key(values, q):
    enc = encode_tuple(values, q)
    return (len(enc), enc)


# --- knapsack semantics ----------------------------------------------------------

def brute_force(gens, target, q, bound):
    for xs in itertools.product(range(bound + 1), repeat=len(gens)):
        r = (0, Fraction(0))
        for g, x in zip(gens, xs):
            r = mul(r, power_iter(g, x, q), q)
        if r == target:
            return list(xs)
    return None


def m_star(g, h, h2, q, bound=64):
    """h2 = h g^s for some s <= bound, on (U, M) pairs."""
    k = log_q(h[1], q)
    k2 = log_q(h2[1], q)
    if k is None or k2 is None:
        return False
    start = (k, Fraction(h[0]))
    goal = (k2, Fraction(h2[0]))
    cur = start
    for _ in range(bound + 1):
        if cur == goal:
            return True
        cur = mul(cur, g, q)
    return False


def closing(g, h0, hn, q):
    k0, kn = log_q(h0[1], q), log_q(hn[1], q)
    if k0 is None or kn is None:
        return False
    return mul((k0, Fraction(h0[0])), g, q) == (kn, Fraction(hn[0]))


def el(k, u):
    return (k, Fraction(u))


def main():
    out = {}

    q2, q3 = 2, 3
    out["group"] = {
        "word": [
            {"q": 3, "word": "a t", "expect": triple(word("a t", 3), 3)},
            {"q": 2, "word": "t a t^-1", "expect": triple(word("t a t^-1", 2), 2)},
        ],
        "multiply": [
            {"q": 2, "g": triple(el(1, 0), 2), "h": triple(el(0, 1), 2), "expect": triple(mul(el(1, 0), el(0, 1), 2), 2)},
            {"q": 2, "g": triple(el(1, 1), 2), "h": triple(el(1, 1), 2), "expect": triple(mul(el(1, 1), el(1, 1), 2), 2)},
        ],
        "inverse": [
            {"q": 2, "g": triple(el(1, 1), 2), "expect": triple(inv(el(1, 1), 2), 2)},
        ],
        "power": [
            {"q": 2, "g": triple(el(1, 1), 2), "s": 3, "expect": triple(power_iter(el(1, 1), 3, 2), 2)},
        ],
        "integral": [
            {"q": 2, "g": triple((1, Fraction(-1, 2)), 2), "expect": integral((1, Fraction(-1, 2)))},
        ],
        "integral_shift": [
            {"q": 2, "elems": [triple(el(-1, 0), 2)], "expect": integral_shift([el(-1, 0)], 2)},
            {"q": 2, "elems": [triple(el(0, 1), 2), triple(el(-2, 0), 2)],
             "expect": integral_shift([el(0, 1), el(-2, 0)], 2)},
        ],
    }

    out["encoding"] = {
        "encode": [{"q": q, "value": v, "expect": encode(v, q)} for q, v in [(2, 3), (3, -2), (2, 5), (5, -7)]],
        "decode": [{"q": q, "digits": d, "expect": decode(d, q)} for q, d in [(2, [1]), (2, [1, 1, 0])]],
    }

    atoms = []
    for x, y in [(2, 32), (2, 16)]:
        atoms.append({"kind": "shift", "q": 2, "ell": 2, "args": [x, y], "expect": shift(2, x, y, q2)})
    for x in [1, 4, 16, 64, 2, 8, 32]:
        atoms.append({"kind": "power", "q": 2, "ell": 2, "args": [x], "expect": is_power(2, x, q2)})
    for x, y in [(12, 4), (12, 2), (-12, 4)]:
        atoms.append({"kind": "vq", "q": 2, "args": [x, y], "expect": vq(x, y, q2)})
    for x in list(range(0, 51)) + list(range(-50, 0)):
        atoms.append({"kind": "geq0", "q": 2, "args": [x], "expect": x >= 0})
    for a, b in [(7, 7), (7, 8)]:
        atoms.append({"kind": "equal", "q": 2, "args": [a, b], "expect": a == b})
    out["atoms"] = atoms

    out["linear_grid"] = {
        "q": 3,
        "coeffs": [2, 3],
        "constant": 7,
        "range": [-20, 20],
        "solutions": [[x, y] for x in range(-20, 21) for y in range(-20, 21) if 2 * x + 3 * y == 7],
    }

    formulas = {}
    formulas["even_by_projection"] = {"q": 2, "range": [-20, 20],
                                      "members": [x for x in range(-20, 21) if any(x == 2 * y for y in range(-20, 21))]}
    formulas["projection_of_y_keeps_all"] = {"q": 2, "range": [-20, 20],
                                             "members": list(range(-20, 21)),
                                             "short_one": encode_tuple([1], 2)}
    formulas["shift1_pinned"] = {"q": 2, "pairs": [[x, y] for x in range(-40, 41) for y in range(-40, 41)
                                                   if shift(1, x, y, 2) and x == 2 and y == 8]}
    formulas["power_between_5_and_7"] = {"q": 2, "sat": any(is_power(1, x, 2) for x in range(5, 8))}
    formulas["double_x_is_one"] = {"q": 2, "sat": any(2 * x == 1 for x in range(-100, 101))}
    # shortest-encoding witness of S_2(x, y), x = 2, y >= 3
    cands = [(2, y) for y in range(3, 5000) if shift(2, 2, y, 2)]
    best = min(cands, key=lambda p: lex_key(list(p), 2))
    formulas["shift2_model"] = {"q": 2, "expect": list(best)}
    out["formulas"] = formulas

    ground = []
    for g, vals in [(el(0, 1), (0, 1, 5, 1)), (el(0, 1), (0, 1, 5, 2)), (el(1, 0), (0, 1, 0, 8)), (el(1, 0), (0, 1, 1, 8))]:
        ground.append({"kind": "m_star", "q": 2, "g": triple(g, 2), "values": list(vals),
                       "expect": m_star(g, vals[0:2], vals[2:4], 2)})
    for g, vals in [(el(0, 5), (0, 1, 5, 1)), (el(-1, 0), (0, 2, 0, 1))]:
        ground.append({"kind": "closing", "q": 2, "g": triple(g, 2), "values": list(vals),
                       "expect": closing(g, vals[0:2], vals[2:4], 2)})
    out["ground"] = ground

    knapsack = []
    cases = [
        (2, ["a"], "a a a a a"),
        (2, ["t a t^-1"], "a a a"),
        (2, ["a", "t a t^-1"], "a a a a a a a"),
        (2, ["t"], "a"),
        (3, ["a t"], None),
        (2, [], ""),
        (2, [], "a"),
        (2, ["a"], "a a a"),
    ]
    for q, gens, target in cases:
        gs = [word(w, q) for w in gens]
        tg = word(target, q) if target is not None else (2, Fraction(4))
        found = brute_force(gs, tg, q, 20)
        knapsack.append({"q": q, "gens": [triple(g, q) for g in gs], "target": triple(tg, q),
                         "sat": found is not None, "oracle_witness": found})
    out["knapsack"] = knapsack

    out["recover"] = [
        {"q": 2, "gen": triple(el(1, 0), 2), "chain": [[0, 1], [0, 8]], "expect": log_q(8, 2) - log_q(1, 2)},
        {"q": 2, "gen": triple(el(0, 1), 2), "chain": [[0, 1], [5, 1]], "expect": 5},
    ]
    out["verify"] = [
        {"q": 2, "gens": [triple(el(0, 1), 2), triple(el(0, 2), 2)], "xs": [1, 3], "target": triple(el(0, 7), 2),
         "expect": mul(power_iter(el(0, 1), 1, 2), power_iter(el(0, 2), 3, 2), 2) == el(0, 7)},
        {"q": 2, "gens": [triple(el(0, 1), 2)], "xs": [4], "target": triple(el(0, 5), 2),
         "expect": power_iter(el(0, 1), 4, 2) == el(0, 5)},
    ]
    out["instance_files"] = [
        {"text": "q: 2\ngen: t a t^-1\ntarget: a\n", "gens": [triple(word("t a t^-1", 2), 2)]},
        {"text": "q: 3\ngen: mat(0, 3, 1)\ntarget: a\n", "gens": [triple((0, Fraction(3, 3)), 3)]},
        {"text": "q: 2\ngen: mat(1, 1, 0)\ntarget: a\n", "gens": [triple(el(1, 1), 2)]},
    ]
    out["cli"] = [
        {"text": "q: 2\ngen: a\ntarget: a a a\n", "first_line": "SAT", "exponents": brute_force([el(0, 1)], el(0, 3), 2, 20)},
        {"text": "q: 2\ngen: t\ntarget: a\n", "first_line": "SAT" if brute_force([el(1, 0)], el(0, 1), 2, 20) else "UNSAT",
         "exponents": None},
    ]

    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
