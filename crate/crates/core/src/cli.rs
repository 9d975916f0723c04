//! Command-line driver: `bsknap [solve] <file> [options]`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

use crate::formula::{Compiler, FormulaError, DEFAULT_TRACK_LIMIT};
use crate::instance::parse_instance;
use crate::knapsack::{solve_with, Decision, KnapsackError};
use crate::oracle::brute_force;
use crate::report::{OracleReport, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "bsknap",
    version,
    about = "Decide knapsack instances over BS(1,q)"
)]
struct Args {
    /// Instance file.
    file: PathBuf,
    /// Print the exponents and the chain of integral matrices.
    #[arg(long)]
    witness: bool,
    /// Re-check the witness by group arithmetic (on by default).
    #[arg(long, overrides_with = "no_verify")]
    verify: bool,
    #[arg(long)]
    no_verify: bool,
    /// Also run the brute-force search with exponents up to B and compare.
    #[arg(long, value_name = "B")]
    oracle_bound: Option<u64>,
    /// Write every pipeline automaton as a DOT file into DIR.
    #[arg(long, value_name = "DIR")]
    emit_dot: Option<PathBuf>,
    /// Print automaton sizes per pipeline stage.
    #[arg(long)]
    stats: bool,
    /// Print a JSON report after the decision line.
    #[arg(long)]
    json: bool,
    /// Maximum number of tracks in any intermediate automaton.
    #[arg(long, default_value_t = DEFAULT_TRACK_LIMIT)]
    track_limit: usize,
}

/// Runs the tool and returns the exit code.
pub fn run(
    args: impl IntoIterator<Item = OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut args: Vec<OsString> = args.into_iter().collect();
    if args.get(1).is_some_and(|a| a == "solve") {
        args.remove(1);
    }
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&args, out) {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(args: &Args, out: &mut dyn Write) -> Result<i32, (i32, String)> {
    let path = args.file.display();
    let text =
        std::fs::read_to_string(&args.file).map_err(|e| (EXIT_PARSE, format!("{path}: {e}")))?;
    let inst = parse_instance(&text).map_err(|e| (EXIT_PARSE, format!("{path}: {e}")))?;

    let start = Instant::now();
    let mut compiler = Compiler::new(inst.q)
        .with_track_limit(args.track_limit)
        .keep_intermediates(args.emit_dot.is_some());
    let result = solve_with(&inst, &mut compiler).map_err(|e| match e {
        KnapsackError::Formula(FormulaError::TrackLimit { .. }) => (EXIT_LIMIT, e.to_string()),
        KnapsackError::Inconsistent(_) => (EXIT_VERIFY, e.to_string()),
        _ => (EXIT_PARSE, e.to_string()),
    })?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut report = RunReport::new(inst.q.get(), inst.len(), &result, elapsed);

    if args.verify || !args.no_verify {
        if let Some(xs) = &result.exponents {
            if !crate::knapsack::verify_witness(&inst, xs) {
                return Err((EXIT_VERIFY, format!("witness {xs:?} does not verify")));
            }
        }
    }

    if let Some(dir) = &args.emit_dot {
        std::fs::create_dir_all(dir)
            .map_err(|e| (EXIT_PARSE, format!("{}: {e}", dir.display())))?;
        for (i, (label, a)) in compiler.intermediates().iter().enumerate() {
            let name: String = label
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
                .collect();
            let file = dir.join(format!("{i:03}-{name}.dot"));
            std::fs::write(&file, a.to_dot())
                .map_err(|e| (EXIT_PARSE, format!("{}: {e}", file.display())))?;
        }
    }

    let mut disagreement = None;
    if let Some(bound) = args.oracle_bound {
        let outcome = brute_force(&inst, bound);
        let agrees = !(outcome.found.is_some() && result.decision == Decision::Unsat);
        if !agrees {
            disagreement = Some(format!(
                "oracle found {:?} but the solver says UNSAT",
                outcome.found.as_ref().unwrap()
            ));
        }
        report.oracle = Some(OracleReport {
            bound,
            found: outcome.found,
            agrees,
        });
    }

    let io = |e: std::io::Error| (EXIT_PARSE, e.to_string());
    writeln!(out, "{}", report.decision_line()).map_err(io)?;
    if args.json {
        writeln!(out, "{}", report.to_json()).map_err(io)?;
    } else {
        if args.witness {
            write!(out, "{}", report.witness_text()).map_err(io)?;
        }
        if let Some(o) = &report.oracle {
            match &o.found {
                Some(xs) => writeln!(out, "oracle (bound {}): found {xs:?}", o.bound),
                None => writeln!(out, "oracle (bound {}): none", o.bound),
            }
            .map_err(io)?;
        }
        if args.stats {
            write!(out, "{}", report.stats_text()).map_err(io)?;
        }
    }
    match disagreement {
        Some(msg) => Err((EXIT_VERIFY, msg)),
        None => Ok(EXIT_OK),
    }
}
