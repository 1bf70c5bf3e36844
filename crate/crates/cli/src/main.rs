//! Command-line front end: decide formulas, check axioms on finite choice
//! data, lift partial choices, and search for rationalizing relations.
//!
//! Results go to stdout as JSON; a one-line human summary goes to stderr.
//! Exit codes: 0 for sat / liftable / rationalizable / axioms hold, 1 for
//! the negative verdict, 2 for input or usage problems, 3 for exhausted
//! resource limits, 4 when `solve --verify` catches a disagreement between
//! the solver and the enumeration oracle.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bstc_core::choice::{check_axiom, rationalizable, Axiom, AxiomWitness, FiniteChoice};
use bstc_core::lifting::{liftable, LiftDecision, Obstruction};
use bstc_core::oracle::{brute_decide, BruteVerdict, OracleLimits};
use bstc_core::places::SearchLimits;
use bstc_core::solver::{solve, Semantics, Verdict};
use bstc_core::syntax::parse_formula;
use bstc_core::Universe;

#[derive(Parser)]
#[command(name = "bstc", version, about = "Satisfiability and analysis for set-theoretic choice formulas")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a formula and print a model when one exists.
    Solve {
        /// Formula file ('-' for stdin).
        file: PathBuf,
        #[arg(short, long, default_value = "unrestricted")]
        semantics: String,
        /// Cross-check the verdict against the enumeration oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Check the choice axioms on a finite choice function.
    CheckAxioms {
        /// Choice file in JSON ('-' for stdin).
        file: PathBuf,
        /// One of alpha, gamma, beta, rho, warp; default checks all five.
        #[arg(long)]
        axiom: Option<String>,
    },
    /// Extend a partial choice to a total one satisfying an axiom.
    Lift {
        file: PathBuf,
        /// One of alpha, beta, warp.
        #[arg(long)]
        axiom: String,
    },
    /// Search for a strict relation whose maximal sets reproduce the data.
    Rationalize { file: PathBuf },
    /// Decide a formula by bounded enumeration, independently of the solver.
    Oracle {
        file: PathBuf,
        #[arg(short, long, default_value = "unrestricted")]
        semantics: String,
        /// Largest universe size to try.
        #[arg(long, default_value_t = 4)]
        max_universe: usize,
    },
}

enum Failure {
    Input(String),
    Resource(String),
    Disagreement(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (msg, code) = match self {
            Failure::Input(m) => (m, 2),
            Failure::Resource(m) => (m, 3),
            Failure::Disagreement(m) => (m, 4),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => f.report(),
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))
}

fn parse_semantics(s: &str) -> Result<Semantics, Failure> {
    Semantics::parse(s).ok_or_else(|| {
        Failure::Input(format!(
            "unknown semantics '{s}' (expected unrestricted, alpha, beta or warp)"
        ))
    })
}

fn parse_axiom(s: &str) -> Result<Axiom, Failure> {
    Axiom::parse(s).ok_or_else(|| {
        Failure::Input(format!(
            "unknown axiom '{s}' (expected alpha, gamma, beta, rho or warp)"
        ))
    })
}

fn load_choice(path: &PathBuf) -> Result<FiniteChoice, Failure> {
    let text = read_input(path)?;
    FiniteChoice::from_json_str(&text).map_err(|e| Failure::Input(e.to_string()))
}

fn search_limits() -> Result<SearchLimits, Failure> {
    let mut limits = SearchLimits::default();
    if let Ok(v) = std::env::var("BSTC_MAX_PLACES") {
        limits.max_places = v
            .parse()
            .map_err(|_| Failure::Input(format!("BSTC_MAX_PLACES must be a number, got '{v}'")))?;
    }
    Ok(limits)
}

fn emit(result: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(result).expect("serializable");
    match writeln!(std::io::stdout(), "{text}") {
        Ok(()) => Ok(()),
        // Downstream closed the pipe (e.g. piping into head); the exit code
        // still carries the verdict.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::Input(format!("writing stdout: {e}"))),
    }
}

fn witness_json(u: &Universe, w: &AxiomWitness) -> serde_json::Value {
    serde_json::json!({
        "axiom": w.axiom.name(),
        "satisfied": w.satisfied,
        "counterexample": w.counterexample.as_ref().map(|v| serde_json::json!({
            "menu_a": u.render(v.menu_a),
            "menu_b": u.render(v.menu_b),
            "witness": u.render(v.witness),
        })),
    })
}

fn run(cmd: Cmd) -> Result<u8, Failure> {
    match cmd {
        Cmd::Solve { file, semantics, verify } => {
            let semantics = parse_semantics(&semantics)?;
            let text = read_input(&file)?;
            let f = parse_formula(&text).map_err(|e| Failure::Input(e.to_string()))?;
            let limits = search_limits()?;
            let out = solve(&f, semantics, &limits)
                .map_err(|e| Failure::Resource(e.to_string()))?;
            if verify {
                let max_universe = match &out.verdict {
                    Verdict::Sat(sat) => sat.model.universe.len(),
                    Verdict::Unsat => out.stats.place_bound.unwrap_or(5).min(5),
                };
                let oracle = brute_decide(
                    &f,
                    semantics,
                    &OracleLimits {
                        max_universe: max_universe.max(1),
                        ..OracleLimits::default()
                    },
                )
                .map_err(|e| Failure::Resource(format!("oracle: {e}")))?;
                if oracle.is_sat() != out.verdict.is_sat() {
                    return Err(Failure::Disagreement(format!(
                        "solver says {}, oracle says {}",
                        out.status(),
                        if oracle.is_sat() { "sat" } else { "unsat" }
                    )));
                }
            }
            emit(&out.to_json())?;
            match &out.verdict {
                Verdict::Sat(sat) => {
                    eprintln!(
                        "sat under {}: universe of {}, {} constrained menu(s)",
                        semantics.name(),
                        sat.model.universe.len(),
                        out.stats.choice_terms
                    );
                    Ok(0)
                }
                Verdict::Unsat => {
                    eprintln!("unsat under {}", semantics.name());
                    Ok(1)
                }
            }
        }
        Cmd::CheckAxioms { file, axiom } => {
            let ch = load_choice(&file)?;
            let axioms = match axiom {
                Some(s) => vec![parse_axiom(&s)?],
                None => Axiom::ALL.to_vec(),
            };
            let u = ch.universe().clone();
            let witnesses: Vec<AxiomWitness> =
                axioms.iter().map(|&ax| check_axiom(&ch, ax)).collect();
            let all_ok = witnesses.iter().all(|w| w.satisfied);
            emit(&serde_json::json!({
                "axioms": witnesses.iter().map(|w| witness_json(&u, w)).collect::<Vec<_>>(),
                "all_satisfied": all_ok,
            }))?;
            for w in &witnesses {
                if w.satisfied {
                    eprintln!("{}: holds", w.axiom.name());
                } else {
                    let v = w.counterexample.as_ref().expect("violated axioms carry one");
                    eprintln!(
                        "{}: violated at {:?} vs {:?} (witness {:?})",
                        w.axiom.name(),
                        u.render(v.menu_a),
                        u.render(v.menu_b),
                        u.render(v.witness)
                    );
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Cmd::Lift { file, axiom } => {
            let ch = load_choice(&file)?;
            let axiom = parse_axiom(&axiom)?;
            let u = ch.universe().clone();
            let decision = liftable(&ch, axiom).map_err(|e| Failure::Input(e.to_string()))?;
            match decision {
                LiftDecision::Liftable(total) => {
                    emit(&serde_json::json!({
                        "axiom": axiom.name(),
                        "liftable": true,
                        "lift": total.to_json(),
                        "obstruction": null,
                    }))?;
                    eprintln!("liftable under {}: total choice over {} menus", axiom.name(), total.len());
                    Ok(0)
                }
                LiftDecision::Obstructed(o) => {
                    let (kind, detail) = match &o {
                        Obstruction::Pairwise(v) => (
                            "pairwise",
                            serde_json::json!({
                                "menu_a": u.render(v.menu_a),
                                "menu_b": u.render(v.menu_b),
                                "witness": u.render(v.witness),
                            }),
                        ),
                        Obstruction::RejectionCover { family } => (
                            "rejection-cover",
                            serde_json::json!({
                                "family": family.iter().map(|m| u.render(*m)).collect::<Vec<_>>(),
                            }),
                        ),
                        Obstruction::NoRankFunction { regions } => (
                            "no-rank-function",
                            serde_json::json!({
                                "regions": regions.iter().map(|r| u.render(*r)).collect::<Vec<_>>(),
                            }),
                        ),
                    };
                    emit(&serde_json::json!({
                        "axiom": axiom.name(),
                        "liftable": false,
                        "lift": null,
                        "obstruction": { "kind": kind, "detail": detail },
                    }))?;
                    eprintln!("not liftable under {}: {kind} obstruction", axiom.name());
                    Ok(1)
                }
            }
        }
        Cmd::Rationalize { file } => {
            let ch = load_choice(&file)?;
            let u = ch.universe().clone();
            match rationalizable(&ch) {
                Some(rel) => {
                    let pairs: Vec<[&str; 2]> = rel
                        .pairs()
                        .into_iter()
                        .map(|(a, b)| [u.name(a), u.name(b)])
                        .collect();
                    emit(&serde_json::json!({
                        "rationalizable": true,
                        // Each pair [a, b] says b beats a.
                        "relation": pairs,
                        "cyclic": rel.has_cycle(),
                    }))?;
                    eprintln!("rationalizable with {} strict pair(s)", pairs.len());
                    Ok(0)
                }
                None => {
                    emit(&serde_json::json!({
                        "rationalizable": false,
                        "relation": null,
                    }))?;
                    eprintln!("not rationalizable");
                    Ok(1)
                }
            }
        }
        Cmd::Oracle { file, semantics, max_universe } => {
            let semantics = parse_semantics(&semantics)?;
            let text = read_input(&file)?;
            let f = parse_formula(&text).map_err(|e| Failure::Input(e.to_string()))?;
            let limits = OracleLimits {
                max_universe: max_universe.max(1),
                ..OracleLimits::default()
            };
            let verdict =
                brute_decide(&f, semantics, &limits).map_err(|e| Failure::Resource(e.to_string()))?;
            match verdict {
                BruteVerdict::Sat(model) => {
                    let u = &model.universe;
                    emit(&serde_json::json!({
                        "status": "sat",
                        "semantics": semantics.name(),
                        "model": {
                            "universe": u.names(),
                            "individuals": model.individuals.iter()
                                .map(|(x, &i)| (x.clone(), u.name(i).to_string()))
                                .collect::<std::collections::BTreeMap<_, _>>(),
                            "sets": model.sets.iter()
                                .map(|(v, s)| (v.clone(), u.render(*s)))
                                .collect::<std::collections::BTreeMap<_, _>>(),
                            "choice": model.choice.entries().map(|(m, c)| serde_json::json!({
                                "menu": u.render(m),
                                "chosen": u.render(c),
                            })).collect::<Vec<_>>(),
                        },
                    }))?;
                    eprintln!("sat with a universe of {}", u.len());
                    Ok(0)
                }
                BruteVerdict::Unsat => {
                    emit(&serde_json::json!({
                        "status": "unsat",
                        "semantics": semantics.name(),
                        "model": null,
                    }))?;
                    eprintln!("unsat up to universes of {max_universe}");
                    Ok(1)
                }
            }
        }
    }
}
