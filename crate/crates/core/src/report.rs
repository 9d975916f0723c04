//! Run reports printed by the command-line tool.

use std::fmt::Write;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::formula::Stage;
use crate::knapsack::{Decision, HChain, KnapsackResult};

pub(crate) fn big_as_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub bound: u64,
    pub found: Option<Vec<u64>>,
    pub agrees: bool,
}

/// Integers that may exceed 64 bits are serialized as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub decision: Decision,
    pub q: u32,
    pub generators: usize,
    pub exponents: Option<Vec<u64>>,
    pub chain: Option<HChain>,
    pub verified: bool,
    pub stages: Vec<Stage>,
    pub oracle: Option<OracleReport>,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(q: u32, generators: usize, result: &KnapsackResult, wall_time_ms: f64) -> Self {
        RunReport {
            decision: result.decision,
            q,
            generators,
            exponents: result.exponents.clone(),
            chain: result.chain.clone(),
            verified: result.verified,
            stages: result.stages.clone(),
            oracle: None,
            wall_time_ms,
        }
    }

    pub fn decision_line(&self) -> &'static str {
        match self.decision {
            Decision::Sat => "SAT",
            Decision::Unsat => "UNSAT",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn witness_text(&self) -> String {
        let mut s = String::new();
        if let Some(xs) = &self.exponents {
            for (i, x) in xs.iter().enumerate() {
                writeln!(s, "x{} = {x}", i + 1).unwrap();
            }
        }
        if let Some(chain) = &self.chain {
            for (i, e) in chain.0.iter().enumerate() {
                writeln!(s, "h{i}: U = {}, M = {}", e.u, e.m).unwrap();
            }
        }
        s
    }

    pub fn stats_text(&self) -> String {
        let mut s = String::new();
        for (i, st) in self.stages.iter().enumerate() {
            writeln!(
                s,
                "stage {i:>3}  {:<24} tracks {:>2}  states {}",
                st.label, st.tracks, st.states
            )
            .unwrap();
        }
        writeln!(s, "wall time {:.1} ms", self.wall_time_ms).unwrap();
        s
    }
}
