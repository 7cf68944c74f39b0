//! `kcycling` command-line front-end. Every invocation prints exactly one
//! JSON document on stdout. Exit status: 0 when the result is ok or
//! verified, 1 when a witness or refutation was found, 2 for usage errors,
//! exhausted budgets and other failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use kcycling::indep::{self, SetFamily};
use kcycling::search::{self, SearchLimits, SearchOutcome};
use kcycling::simplex::{self, SimplexRoundFamily};
use kcycling::subsets::binomial;
use kcycling::{cycling, verifier, Error, Mode, OrientationFamily, Verification};

#[derive(Parser)]
#[command(name = "kcycling", version, about = "Orientation families covering k-cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the optimal increasingly k-cycling family on [n].
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Write the family file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively check a family file.
    Verify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "increasing")]
        mode: Mode,
        /// Include wall-clock time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// ceil(log2((n-1)/(k-2))).
    Lowerbound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Exact minimum number of rounds for tiny n.
    SearchExact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_rounds: usize,
        #[arg(long)]
        node_budget: u64,
        /// Raise the guard on n (at most 7).
        #[arg(long, default_value_t = search::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Round budget from the local lemma for facet orientations.
    SimplexBudget {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Random facet rounds repaired by resampling.
    SimplexConstruct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Defaults to the local-lemma budget.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        resample_limit: u64,
    },
    /// Check a facet-signing family file.
    SimplexVerify {
        #[arg(long)]
        family: PathBuf,
    },
    /// Most r-sets one round can satisfy, by exhaustive enumeration.
    SimplexMaxcover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Lift the enumeration guard.
        #[arg(long)]
        force: bool,
    },
    /// Check a set family for k-independence.
    IndepVerify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Random k-independent family of m subsets of {0, ..., t-1}.
    IndepConstruct {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        retries: u32,
    },
    /// Turn a set family (one set per edge) into rounds and check them.
    IndepOrient {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k_check: usize,
    },
    /// Smallest random k-independent family found for C(n,2) edges, as rounds.
    WUpper {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        retries: u32,
    },
}

/// A printed document and the exit status that goes with it.
struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }

    fn verdict(doc: Value, ok: bool) -> Self {
        Outcome {
            doc,
            code: if ok { 0 } else { 1 },
        }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

fn verdict_doc(v: &Verification) -> Value {
    let mut doc = json!({
        "status": status(v.is_ok()),
        "mode": v.mode,
        "n": v.n,
        "k": v.k,
        "rounds": v.rounds,
        "subsets_checked": v.subsets_checked,
    });
    if let Some(w) = &v.witness {
        doc["witness"] = to_value(w);
    }
    doc
}

fn run(command: Command) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Construct { n, k, out } => {
            let family = cycling::construct_family(n, k)?;
            match out {
                None => Outcome::ok(to_value(family.to_document(Some(k)))),
                Some(path) => {
                    std::fs::write(&path, family.to_json(Some(k)) + "\n").map_err(|e| {
                        Error::Malformed(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Outcome::ok(json!({
                        "n": n,
                        "k": k,
                        "rounds": family.len(),
                        "lower_bound": cycling::lower_bound(n, k)?,
                        "out": path.display().to_string(),
                    }))
                }
            }
        }
        Command::Verify {
            family,
            k,
            mode,
            timing,
        } => {
            let (f, _) = OrientationFamily::from_json(&read(&family)?)?;
            let start = Instant::now();
            let v = verifier::check(&f, k, mode)?;
            let mut doc = verdict_doc(&v);
            if timing {
                doc["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            }
            Outcome::verdict(doc, v.is_ok())
        }
        Command::Lowerbound { n, k } => Outcome::ok(json!({
            "n": n,
            "k": k,
            "lower_bound": cycling::lower_bound(n, k)?,
        })),
        Command::SearchExact {
            n,
            k,
            max_rounds,
            node_budget,
            max_n,
        } => {
            let limits = SearchLimits {
                max_rounds,
                node_budget,
                max_n,
            };
            let outcome = search::exact_min_search(n, k, limits)?;
            let code = match outcome {
                SearchOutcome::Minimum { .. } => 0,
                SearchOutcome::Refuted { .. } => 1,
                SearchOutcome::BudgetExhausted { .. } => 2,
            };
            Outcome {
                doc: to_value(outcome.report(n, k)),
                code,
            }
        }
        Command::SimplexBudget { n, r } => Outcome::ok(json!({
            "n": n,
            "r": r,
            "budget": simplex::lll_round_budget(n, r)?,
            "coefficient": simplex::lll_coefficient(r),
            "lower_bound": simplex::simplex_lower_bound(n, r)?,
        })),
        Command::SimplexConstruct {
            n,
            r,
            rounds,
            seed,
            resample_limit,
        } => {
            let t = match rounds {
                Some(t) => t,
                None => simplex::lll_round_budget(n, r)?,
            };
            let fam = simplex::randomized_construct(n, r, t, seed, resample_limit)?;
            Outcome::ok(to_value(fam.to_document()))
        }
        Command::SimplexVerify { family } => {
            let fam = SimplexRoundFamily::from_json(&read(&family)?)?;
            let v = simplex::check_simplex_family(&fam);
            let mut doc = json!({
                "status": status(v.is_ok()),
                "n": v.n,
                "r": v.r,
                "rounds": v.rounds,
                "subsets_checked": v.subsets_checked,
            });
            if let Some(w) = &v.witness {
                doc["witness"] = to_value(w);
            }
            Outcome::verdict(doc, v.is_ok())
        }
        Command::SimplexMaxcover { n, r, force } => Outcome::ok(json!({
            "n": n,
            "r": r,
            "max_consistent": simplex::max_consistent_per_round(n, r, force)?,
            "simplices": binomial(n, r),
        })),
        Command::IndepVerify { family, k } => {
            let fam = SetFamily::from_json(&read(&family)?)?;
            let check = indep::is_k_independent(&fam, k)?;
            let mut doc = json!({
                "status": status(check.is_ok()),
                "k": k,
                "m": fam.len(),
                "t": fam.ground_size(),
                "tuples_checked": check.tuples_checked,
            });
            if let Some(w) = &check.witness {
                doc["witness"] = to_value(w);
            }
            Outcome::verdict(doc, check.is_ok())
        }
        Command::IndepConstruct {
            m,
            k,
            t,
            seed,
            retries,
        } => {
            let fam = indep::randomized_family(m, k, t, seed, retries)?;
            Outcome::ok(to_value(fam.to_document()))
        }
        Command::IndepOrient { family, n, k_check } => {
            let fam = SetFamily::from_json(&read(&family)?)?;
            let f = indep::derive_orientations(&fam, n)?;
            let v = verifier::check_all_orderings(&f, k_check)?;
            Outcome::verdict(
                json!({
                    "family": f.to_document(Some(k_check)),
                    "verification": verdict_doc(&v),
                }),
                v.is_ok(),
            )
        }
        Command::WUpper { n, k, seed, retries } => {
            let res = indep::w_upper_pipeline(n, k, seed, retries)?;
            Outcome::verdict(
                json!({
                    "n": n,
                    "k": k,
                    "t": res.t,
                    "floor": res.floor,
                    "family": res.family.to_document(Some(k)),
                    "verification": verdict_doc(&res.verification),
                }),
                res.verification.is_ok(),
            )
        }
    })
}

fn error_doc(e: &Error) -> Value {
    let mut doc = json!({ "status": "error", "error": e.to_string() });
    if let Error::ResampleLimit { stuck, .. } = e {
        doc["stuck"] = json!(stuck);
    }
    doc
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.command).unwrap_or_else(|e| Outcome {
        doc: error_doc(&e),
        code: 2,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.doc).expect("serializable")
    );
    ExitCode::from(outcome.code)
}
