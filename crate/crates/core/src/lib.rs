//! Exact knapsack solver for the Baumslag-Solitar groups `BS(1,q)`.
//!
//! Group elements are matrices `(q^k, u; 0, 1)` with `u` in `Z[1/q]`. A knapsack instance
//! `g_1^{x_1} ... g_n^{x_n} = g` is reduced to a first-order formula over the integers
//! with linear atoms, the shift predicates `S_l`, powers of `q` and `V_q`, which is
//! decided by compiling it to automata over base-`q` digits.

pub mod atoms;
pub mod automata;
pub mod base;
pub mod cli;
pub mod formula;
pub mod group;
pub mod instance;
pub mod knapsack;
pub mod oracle;
pub mod report;

pub use base::Base;
