//! Acceptance criteria, one test per criterion. Each prints a single
//! `[PASS]` / `[FAIL]` line; run with `--nocapture` to see them.

use std::ops::ControlFlow;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::Command;

use kcycling::indep::w_upper_pipeline;
use kcycling::search::{exact_min_search, SearchLimits, SearchOutcome};
use kcycling::simplex::{
    check_simplex_family, lll_coefficient, lll_round_budget, max_consistent_per_round,
    randomized_construct, FacetSigning, SimplexRoundFamily,
};
use kcycling::subsets::{binomial, combinations, for_each_combination};
use kcycling::verifier::{covering_rounds, cycle_is_directed};
use kcycling::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn criterion(id: u32, what: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("[PASS] criterion {id}: {what}"),
        Err(e) => {
            println!("[FAIL] criterion {id}: {what}");
            resume_unwind(e);
        }
    }
}

/// `ceil(log2 ceil((n-1)/(k-2)))` from the bit length, independent of the
/// library's doubling loop.
fn expected_rounds(n: usize, k: usize) -> usize {
    let q = (n - 1).div_ceil(k - 2) as u64;
    if q <= 1 {
        0
    } else {
        (64 - (q - 1).leading_zeros()) as usize
    }
}

#[test]
fn criterion_01_optimality_sweep() {
    criterion(1, "3<=k<=8, k<=n<=64: size = ceil(log2((n-1)/(k-2))), exhaustively verified", || {
        for k in 3..=8 {
            for n in k..=64 {
                let f = construct_family(n, k).unwrap();
                assert_eq!(f.len(), expected_rounds(n, k), "n={n} k={k}");
                assert_eq!(f.len(), lower_bound(n, k).unwrap());
                let v = check_increasing(&f, k).unwrap();
                assert!(v.is_ok(), "n={n} k={k}: {:?}", v.witness);
                assert_eq!(v.subsets_checked, binomial(n, k));
            }
        }
    });
}

#[test]
fn criterion_02_triangles() {
    criterion(2, "k=3, 3<=n<=64: size = ceil(log2(n-1)), all triangles verified; n=33 has 5 rounds", || {
        for n in 3..=64 {
            let f = construct_family(n, 3).unwrap();
            assert_eq!(f.len(), expected_rounds(n, 3));
            assert_eq!(f.len(), ((n - 1) as f64).log2().ceil() as usize);
            let v = check_increasing(&f, 3).unwrap();
            assert!(v.is_ok());
            assert_eq!(v.subsets_checked, binomial(n, 3));
        }
        let f = construct_family(33, 3).unwrap();
        let v = check_increasing(&f, 3).unwrap();
        assert!(v.is_ok());
        assert_eq!((v.rounds, v.subsets_checked), (5, 5456));
    });
}

#[test]
fn criterion_03_exact_search() {
    criterion(3, "exact search refutes 1 round for (4,3) over 64 tournaments, finds minimum 2 for (5,3)", || {
        let out = exact_min_search(4, 3, SearchLimits::new(1, 1_000)).unwrap();
        assert_eq!(out, SearchOutcome::Refuted { up_to: 1, nodes: 64 });
        assert!(lower_bound(4, 3).unwrap() > 1);
        // Independent brute force: no single tournament on 4 vertices has all
        // four triangles cyclic.
        let all_cyclic = (0..64u64).any(|code| {
            let t = Tournament::from_code(4, code);
            combinations(4, 3).iter().all(|s| cycle_is_directed(&t, s))
        });
        assert!(!all_cyclic);

        match exact_min_search(5, 3, SearchLimits::new(3, 50_000_000)).unwrap() {
            SearchOutcome::Minimum { minimum, certificate, .. } => {
                assert_eq!(minimum, 2);
                assert_eq!(minimum, lower_bound(5, 3).unwrap());
                assert!(check_increasing(&certificate, 3).unwrap().is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    });
}

#[test]
fn criterion_04_pigeonhole_soundness() {
    criterion(4, "100/100 short random families yield re-verified pigeonhole witnesses", || {
        let mut rng = StdRng::seed_from_u64(2024);
        let mut sound = 0;
        for _ in 0..100 {
            let n = rng.gen_range(4..=32);
            let k = rng.gen_range(3..=n.min(8));
            let lb = lower_bound(n, k).unwrap();
            let rounds = rng.gen_range(0..lb);
            let f = OrientationFamily::new(
                n,
                (0..rounds).map(|_| Tournament::from_fn(n, |_, _| rng.gen())).collect(),
            )
            .unwrap();
            let w = pigeonhole_witness(&f, k).unwrap().expect("witness must exist");
            let s = w.subset();
            assert_eq!(s.len(), k);
            let uncovered = covering_rounds(&f, &s).is_empty()
                && f.rounds().iter().all(|t| !t.is_strong_on(&s));
            if uncovered {
                sound += 1;
            }
        }
        assert_eq!(sound, 100);
    });
}

#[test]
fn criterion_05_single_round_max_cover() {
    criterion(5, "one round satisfies at most 2 of the 5 tetrahedra on 5 points; no 2-round family", || {
        assert_eq!(max_consistent_per_round(5, 4, false).unwrap(), 2);
        // Counting: two rounds reach at most 4 < C(5,4) simplices.
        assert!(2 * 2 < binomial(5, 4));
        // Exhaustive: every pair of the 2^10 signings fails the checker.
        let cover: Vec<u32> = (0..1u32 << 10)
            .map(|code| {
                let round = FacetSigning::new(5, 4, (0..10).map(|i| if code >> i & 1 == 1 { 1 } else { -1 }).collect()).unwrap();
                combinations(5, 4)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| round.is_consistent(s).unwrap())
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
            .collect();
        assert!(cover.iter().all(|c| c.count_ones() <= 2));
        for a in 0..cover.len() {
            for b in a..cover.len() {
                assert_ne!(cover[a] | cover[b], 0b11111);
            }
        }
        // Spot-check the checker itself on the best pair.
        let mk = |code: usize| {
            FacetSigning::new(5, 4, (0..10).map(|i| if code >> i & 1 == 1 { 1 } else { -1 }).collect()).unwrap()
        };
        let best = (0..cover.len()).max_by_key(|&c| cover[c].count_ones()).unwrap();
        let fam = SimplexRoundFamily::new(5, 4, vec![mk(best), mk(best ^ 0b1010)]).unwrap();
        assert!(!check_simplex_family(&fam).is_ok());
    });
}

#[test]
fn criterion_06_exactly_two() {
    criterion(6, "exactly 2 of the 2^r facet-sign patterns are consistent, r = 3, 4, 5", || {
        for r in 3..=5 {
            let simplex: Vec<usize> = (0..r).collect();
            let count = (0..1u32 << r)
                .filter(|code| {
                    let signs = (0..r).map(|i| if code >> i & 1 == 1 { 1 } else { -1 }).collect();
                    FacetSigning::new(r, r, signs).unwrap().is_consistent(&simplex).unwrap()
                })
                .count();
            assert_eq!(count, 2, "r = {r}");
        }
    });
}

#[test]
fn criterion_07_lll_pipeline() {
    criterion(7, "local-lemma budgets (5,4)=21, (5,3)=12; resampling succeeds at budget; coefficients", || {
        assert_eq!(lll_round_budget(5, 4).unwrap(), 21);
        assert_eq!(lll_round_budget(5, 3).unwrap(), 12);
        for (n, r, seed) in [(5, 3, 1u64), (6, 3, 2), (5, 4, 3), (6, 4, 4)] {
            let t = lll_round_budget(n, r).unwrap();
            // Exact check of 4 p d <= 1 at t and its failure at t - 1.
            let half = 1u128 << (r - 1);
            let d = (r * (n - r)) as u128;
            let holds = |t: u32| 4 * d * (half - 1).pow(t) <= half.pow(t);
            assert!(holds(t as u32) && !holds(t as u32 - 1));
            let fam = randomized_construct(n, r, t, seed, 100_000).unwrap();
            assert_eq!(fam.len(), t);
            assert!(check_simplex_family(&fam).is_ok(), "n={n} r={r}");
        }
        assert!(lll_coefficient(4) <= 5.20);
        assert!(lll_coefficient(3) <= 2.41);
        assert!((1.0 / (8f64 / 7.0).log2() - lll_coefficient(4)).abs() < 1e-12);
    });
}

fn weak_oracle(f: &OrientationFamily, k: usize) -> Option<Vec<usize>> {
    for_each_combination(f.n(), k, |s| {
        let hit = f
            .rounds()
            .iter()
            .any(|t| t.induced(s).unwrap().has_hamiltonian_cycle_exhaustive().unwrap());
        if hit {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(s.to_vec())
        }
    })
}

#[test]
fn criterion_08_cross_module() {
    criterion(8, "triangle-cyclic == r=3 consistency (all n=4, 1e5 sampled n<=6); weak == enumeration for k<=7", || {
        let agree = |t: &Tournament| {
            let round = FacetSigning::from_tournament(t);
            combinations(t.n(), 3)
                .iter()
                .all(|s| round.is_consistent(s).unwrap() == cycle_is_directed(t, s))
        };
        for code in 0..1u64 << 6 {
            assert!(agree(&Tournament::from_code(4, code)));
        }
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100_000 {
            let n = rng.gen_range(3..=6);
            let t = Tournament::from_fn(n, |_, _| rng.gen());
            assert!(agree(&t));
        }
        let mut rng = StdRng::seed_from_u64(88);
        for _ in 0..400 {
            let n = rng.gen_range(3..=8);
            let k = rng.gen_range(3..=n.min(7));
            let rounds = rng.gen_range(0..3);
            let f = OrientationFamily::new(
                n,
                (0..rounds).map(|_| Tournament::from_fn(n, |_, _| rng.gen())).collect(),
            )
            .unwrap();
            let got = check_weak(&f, k).unwrap().witness.map(|w| w.subset());
            assert_eq!(got, weak_oracle(&f, k), "n={n} k={k}");
        }
    });
}

#[test]
fn criterion_09_independent_family_pipeline() {
    criterion(9, "k-independent pipeline covers every ordering for (5,3), (6,3), (6,4)", || {
        for (n, k) in [(5, 3), (6, 3), (6, 4)] {
            let res = w_upper_pipeline(n, k, 7, 20).unwrap();
            let v = check_all_orderings(&res.family, k).unwrap();
            assert!(v.is_ok(), "n={n} k={k}");
            assert!(check_weak(&res.family, k).unwrap().is_ok());
            assert!(res.family.len() >= lower_bound(n, k).unwrap());
            if k == 3 {
                assert!(check_increasing(&res.family, 3).unwrap().is_ok());
            }
        }
    });
}

fn run_cli(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_kcycling"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}

#[test]
fn criterion_10_determinism() {
    criterion(10, "seeded commands are byte-reproducible across consecutive runs", || {
        let commands: &[&[&str]] = &[
            &["simplex-construct", "--n", "6", "--r", "4", "--seed", "5", "--resample-limit", "100000"],
            &["simplex-construct", "--n", "5", "--r", "4", "--rounds", "2", "--seed", "5", "--resample-limit", "500"],
            &["indep-construct", "--m", "10", "--k", "3", "--t", "40", "--seed", "9", "--retries", "50"],
            &["w-upper", "--n", "6", "--k", "4", "--seed", "3"],
            &["construct", "--n", "17", "--k", "5"],
            &["search-exact", "--n", "5", "--k", "3", "--max-rounds", "2", "--node-budget", "10000000"],
        ];
        for args in commands {
            let first = run_cli(args);
            let second = run_cli(args);
            assert!(!first.0.is_empty());
            assert_eq!(first, second, "{args:?}");
        }
    });
}
