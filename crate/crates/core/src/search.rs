//! Exact minimum of increasingly `k`-cycling families for tiny `n`, by
//! depth-first search over sets of rounds.
//!
//! Rounds are chosen in strictly increasing order of their pair-bit code, so
//! each unordered family is visited once. Partial families are pruned when a
//! vertex already has more identically oriented neighbours than the
//! remaining rounds can separate.

use serde::Serialize;

use crate::cycling::{local_capacity_ok, lower_bound};
use crate::error::{Error, Result};
use crate::family::{FamilyDocument, OrientationFamily};
use crate::subsets::{binomial, combinations};
use crate::tournament::Tournament;
use crate::verifier::{check_increasing, cycle_is_directed};

pub const DEFAULT_MAX_N: usize = 5;
/// Hard ceiling: the search stores one coverage mask per tournament.
pub const HARD_MAX_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_rounds: usize,
    pub node_budget: u64,
    /// Guard on `n`; defaults to [`DEFAULT_MAX_N`], may be raised up to
    /// [`HARD_MAX_N`].
    pub max_n: usize,
}

impl SearchLimits {
    pub fn new(max_rounds: usize, node_budget: u64) -> Self {
        SearchLimits {
            max_rounds,
            node_budget,
            max_n: DEFAULT_MAX_N,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `minimum` rounds suffice (with `certificate`) and every smaller count
    /// was refuted.
    Minimum {
        minimum: usize,
        certificate: OrientationFamily,
        nodes: u64,
    },
    /// No family with at most `up_to` rounds exists.
    Refuted { up_to: usize, nodes: u64 },
    /// The node budget ran out; every count up to `refuted_up_to` had been
    /// refuted before that.
    BudgetExhausted { refuted_up_to: usize, nodes: u64 },
}

/// Structured report of a search, as printed by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub status: &'static str,
    pub n: usize,
    pub k: usize,
    pub lower_bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimum: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuted_up_to: Option<usize>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FamilyDocument>,
}

impl SearchOutcome {
    pub fn report(&self, n: usize, k: usize) -> SearchReport {
        let lower_bound = lower_bound(n, k).expect("search validated n, k");
        let mut report = SearchReport {
            status: "",
            n,
            k,
            lower_bound,
            minimum: None,
            refuted_up_to: None,
            nodes: 0,
            certificate: None,
        };
        match self {
            SearchOutcome::Minimum {
                minimum,
                certificate,
                nodes,
            } => {
                report.status = "minimum";
                report.minimum = Some(*minimum);
                report.refuted_up_to = Some(minimum - 1);
                report.nodes = *nodes;
                report.certificate = Some(certificate.to_document(Some(k)));
            }
            SearchOutcome::Refuted { up_to, nodes } => {
                report.status = "refuted";
                report.refuted_up_to = Some(*up_to);
                report.nodes = *nodes;
            }
            SearchOutcome::BudgetExhausted {
                refuted_up_to,
                nodes,
            } => {
                report.status = "budget_exhausted";
                report.refuted_up_to = Some(*refuted_up_to);
                report.nodes = *nodes;
            }
        }
        report
    }
}

struct Search {
    n: usize,
    k: usize,
    tournaments: Vec<Tournament>,
    /// Bit `s` set when tournament covers the `s`-th increasing k-subset.
    cover: Vec<u64>,
    full: u64,
    nodes: u64,
    budget: u64,
}

struct OutOfBudget;

impl Search {
    fn dfs(
        &mut self,
        chosen: &mut Vec<usize>,
        covered: u64,
        start: usize,
        target: usize,
    ) -> std::result::Result<bool, OutOfBudget> {
        let remaining = target - chosen.len();
        for code in start..self.tournaments.len() {
            if self.nodes >= self.budget {
                return Err(OutOfBudget);
            }
            self.nodes += 1;
            chosen.push(code);
            let now = covered | self.cover[code];
            let refs: Vec<&Tournament> = chosen.iter().map(|&c| &self.tournaments[c]).collect();
            let viable = local_capacity_ok(&refs, self.n, self.k, remaining - 1);
            if viable {
                if remaining == 1 {
                    if now == self.full {
                        return Ok(true);
                    }
                } else if self.dfs(chosen, now, code + 1, target)? {
                    return Ok(true);
                }
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Finds the minimum number of rounds of an increasingly `k`-cycling family
/// on `[n]`, trying `1..=max_rounds` in turn.
pub fn exact_min_search(n: usize, k: usize, limits: SearchLimits) -> Result<SearchOutcome> {
    lower_bound(n, k)?;
    if limits.max_n > HARD_MAX_N {
        return Err(Error::GuardExceeded(format!(
            "max_n {} above hard limit {HARD_MAX_N}",
            limits.max_n
        )));
    }
    if n > limits.max_n {
        return Err(Error::GuardExceeded(format!(
            "n = {n} above search limit {}",
            limits.max_n
        )));
    }
    let subsets = combinations(n, k);
    debug_assert!(binomial(n, k) <= 64);
    let pairs = n * (n - 1) / 2;
    let tournaments: Vec<Tournament> = (0..1u64 << pairs).map(|c| Tournament::from_code(n, c)).collect();
    let cover = tournaments
        .iter()
        .map(|t| {
            subsets
                .iter()
                .enumerate()
                .filter(|(_, s)| cycle_is_directed(t, s))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let full = if subsets.len() == 64 {
        u64::MAX
    } else {
        (1u64 << subsets.len()) - 1
    };
    let mut search = Search {
        n,
        k,
        tournaments,
        cover,
        full,
        nodes: 0,
        budget: limits.node_budget,
    };
    for target in 1..=limits.max_rounds {
        let mut chosen = Vec::with_capacity(target);
        match search.dfs(&mut chosen, 0, 0, target) {
            Err(OutOfBudget) => {
                return Ok(SearchOutcome::BudgetExhausted {
                    refuted_up_to: target - 1,
                    nodes: search.nodes,
                })
            }
            Ok(true) => {
                let rounds = chosen.iter().map(|&c| search.tournaments[c].clone()).collect();
                let certificate = OrientationFamily::new(n, rounds)?;
                assert!(check_increasing(&certificate, k)?.is_ok());
                return Ok(SearchOutcome::Minimum {
                    minimum: target,
                    certificate,
                    nodes: search.nodes,
                });
            }
            Ok(false) => {}
        }
    }
    Ok(SearchOutcome::Refuted {
        up_to: limits.max_rounds,
        nodes: search.nodes,
    })
}
