//! Exhaustive checkers for the three cycle-covering properties of an
//! [`OrientationFamily`].
//!
//! Subsets are visited in lexicographic order and the first failure is
//! returned, so witnesses do not depend on how the work is split. A cycle
//! counts as covered when some round orients it as a directed cycle in
//! either direction.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::family::OrientationFamily;
use crate::subsets::{binomial, for_each_permutation, lex_rank, next_combination};
use crate::tournament::Tournament;
use crate::witness::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every `u1 < ... < uk` must have `u1 u2 ... uk u1` directed in some round.
    Increasing,
    /// Every `k`-set must carry some directed Hamiltonian cycle in some round.
    Weak,
    /// Every cyclic ordering of every `k`-set must be directed in some round.
    All,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "increasing" => Ok(Mode::Increasing),
            "weak" => Ok(Mode::Weak),
            "all" => Ok(Mode::All),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    /// Subsets examined: all `C(n,k)` on success, otherwise up to and
    /// including the witness.
    pub subsets_checked: u64,
    pub witness: Option<Witness>,
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        self.witness.is_none()
    }

    fn from_outcome(mode: Mode, family: &OrientationFamily, k: usize, witness: Option<Witness>) -> Self {
        let n = family.n();
        let subsets_checked = match &witness {
            None => binomial(n, k),
            Some(w) => lex_rank(n, &w.subset()) + 1,
        };
        Verification {
            mode,
            n,
            k,
            rounds: family.len(),
            subsets_checked,
            witness,
        }
    }
}

pub fn check(family: &OrientationFamily, k: usize, mode: Mode) -> Result<Verification> {
    match mode {
        Mode::Increasing => check_increasing(family, k),
        Mode::Weak => check_weak(family, k),
        Mode::All => check_all_orderings(family, k),
    }
}

fn check_k(family: &OrientationFamily, k: usize) -> Result<()> {
    if k < 3 || k > family.n() {
        return domain(format!("need 3 <= k <= n, got k = {k}, n = {}", family.n()));
    }
    Ok(())
}

/// Whether `ordering`, read cyclically, is a directed cycle of `t` in one
/// direction or the other.
pub fn cycle_is_directed(t: &Tournament, ordering: &[usize]) -> bool {
    let len = ordering.len();
    let edge = |i: usize| (ordering[i], ordering[(i + 1) % len]);
    let forward = (0..len).all(|i| {
        let (a, b) = edge(i);
        t.beats(a, b)
    });
    forward
        || (0..len).all(|i| {
            let (a, b) = edge(i);
            t.beats(b, a)
        })
}

/// Indices of the rounds that direct the cycle `ordering`.
pub fn covering_rounds(family: &OrientationFamily, ordering: &[usize]) -> Vec<usize> {
    family
        .rounds()
        .iter()
        .enumerate()
        .filter(|(_, t)| cycle_is_directed(t, ordering))
        .map(|(i, _)| i)
        .collect()
}

fn explain_cycle(family: &OrientationFamily, ordering: &[usize]) -> Vec<String> {
    let len = ordering.len();
    let first_break = |t: &Tournament, forward: bool| {
        (0..len)
            .map(|i| (ordering[i], ordering[(i + 1) % len]))
            .find(|&(a, b)| t.beats(a, b) != forward)
            .map(|(a, b)| if forward { (b, a) } else { (a, b) })
    };
    family
        .rounds()
        .iter()
        .enumerate()
        .map(|(r, t)| match (first_break(t, true), first_break(t, false)) {
            (Some((a, b)), Some((c, d))) => format!(
                "round {r}: edge {a}->{b} breaks the forward cycle, edge {c}->{d} breaks the reverse cycle"
            ),
            _ => format!("round {r}: cycle is directed"),
        })
        .collect()
}

fn uncycled(family: &OrientationFamily, vertices: Vec<usize>, ordering: Vec<usize>) -> Witness {
    let detail = explain_cycle(family, &ordering);
    Witness::UncycledSubset {
        vertices,
        ordering,
        detail,
    }
}

/// Round membership sets, one bit per (round, direction): bits `0..rounds`
/// say which rounds orient an edge forward, bits `rounds..2*rounds` which
/// orient it backward. A cycle is directed in some round iff the AND over its
/// edges is nonzero.
trait Lanes: Clone + Send + Sync {
    fn with_bits(total: usize, bit: impl Fn(usize) -> bool) -> Self;
    fn and(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// Folds over the indices of the set bits.
    fn fold_ones<A>(&self, init: A, f: impl FnMut(A, usize) -> A) -> A;
}

macro_rules! int_lanes {
    ($($t:ty),*) => {$(
        impl Lanes for $t {
            #[inline]
            fn with_bits(total: usize, bit: impl Fn(usize) -> bool) -> Self {
                (0..total).filter(|&i| bit(i)).fold(0, |m, i| m | 1 << i)
            }
            #[inline(always)]
            fn and(&self, other: &Self) -> Self {
                self & other
            }
            #[inline(always)]
            fn is_zero(&self) -> bool {
                *self == 0
            }
            #[inline(always)]
            fn fold_ones<A>(&self, mut acc: A, mut f: impl FnMut(A, usize) -> A) -> A {
                let mut m = *self;
                while m != 0 {
                    acc = f(acc, m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                acc
            }
        }
    )*};
}

// Narrow lanes let the innermost loop pack more subsets per vector op.
int_lanes!(u16, u32, u64, u128);

#[derive(Clone)]
struct Wide(Box<[u64]>);

impl Lanes for Wide {
    fn with_bits(total: usize, bit: impl Fn(usize) -> bool) -> Self {
        let mut words = vec![0u64; total.div_ceil(64)];
        for i in (0..total).filter(|&i| bit(i)) {
            words[i / 64] |= 1 << (i % 64);
        }
        Wide(words.into_boxed_slice())
    }
    fn and(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
    fn fold_ones<A>(&self, mut acc: A, mut f: impl FnMut(A, usize) -> A) -> A {
        for (i, w) in self.0.iter().enumerate() {
            acc = w.fold_ones(acc, |a, b| f(a, 64 * i + b));
        }
        acc
    }
}

struct StepTable<L> {
    n: usize,
    /// `step[a * n + b]`: rounds orienting `a -> b` (forward lanes) and
    /// `b -> a` (backward lanes).
    step: Vec<L>,
    /// `back[u * n + w] == step[w * n + u]`, so closing edges into `u` are
    /// contiguous in `w`.
    back: Vec<L>,
    lanes: usize,
    /// For `n <= 64`: `closers[(u * n + v) * lanes + b]` is the set of `x > v`
    /// for which lane `b` survives both `v -> x` and the closing edge `x -> u`.
    closers: Vec<u64>,
}

impl<L: Lanes> StepTable<L> {
    fn new(family: &OrientationFamily) -> Self {
        let n = family.n();
        let rounds = family.rounds();
        let r = rounds.len();
        let lanes = |a: usize, b: usize| {
            if a == b {
                return L::with_bits(2 * r, |_| false);
            }
            L::with_bits(2 * r, |i| {
                if i < r {
                    rounds[i].beats(a, b)
                } else {
                    rounds[i - r].beats(b, a)
                }
            })
        };
        let mut step = Vec::with_capacity(n * n);
        let mut back = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                step.push(lanes(a, b));
                back.push(lanes(b, a));
            }
        }
        let lanes = 2 * r;
        let mut closers = Vec::new();
        if n <= 64 {
            closers = vec![0u64; n * n * lanes];
            for u in 0..n {
                for v in 0..n {
                    for x in v + 1..n {
                        let both = step[v * n + x].and(&back[u * n + x]);
                        both.fold_ones((), |_, b| closers[(u * n + v) * lanes + b] |= 1 << x);
                    }
                }
            }
        }
        StepTable {
            n,
            step,
            back,
            lanes,
            closers,
        }
    }

    #[inline(always)]
    fn at(&self, a: usize, b: usize) -> &L {
        &self.step[a * self.n + b]
    }

    fn cycle_covered(&self, ordering: &[usize]) -> bool {
        let len = ordering.len();
        let mut mask = self.at(ordering[len - 1], ordering[0]).clone();
        for w in ordering.windows(2) {
            mask = mask.and(self.at(w[0], w[1]));
            if mask.is_zero() {
                return false;
            }
        }
        !mask.is_zero()
    }

    /// Lexicographically first increasing `k`-subset starting with `prefix`
    /// whose increasing cycle is not covered.
    fn first_uncovered_increasing(&self, k: usize, prefix: &[usize]) -> Option<Vec<usize>> {
        let mut path = prefix.to_vec();
        let u1 = path[0];
        let mut masks: Vec<L> = Vec::with_capacity(k);
        // masks[d] covers the edges among path[..=d]; start with an all-ones
        // equivalent by seeding from the first edge.
        if path.len() >= 2 {
            let mut m = self.at(path[0], path[1]).clone();
            masks.push(m.clone());
            for w in path[1..].windows(2) {
                m = m.and(self.at(w[0], w[1]));
                masks.push(m.clone());
            }
            if m.is_zero() {
                // Already dead; the smallest completion is a witness.
                return self.complete_smallest(&mut path, k);
            }
        }
        if self.descend(k, u1, &mut path, &mut masks) {
            Some(path)
        } else {
            None
        }
    }

    fn complete_smallest(&self, path: &mut Vec<usize>, k: usize) -> Option<Vec<usize>> {
        while path.len() < k {
            let next = path.last().unwrap() + 1;
            if next >= self.n {
                return None;
            }
            path.push(next);
        }
        Some(path.clone())
    }

    /// Smallest final vertex `x > v` closing an uncovered cycle, given the
    /// lanes `m` surviving the path from `u1` to `v`.
    #[inline(always)]
    fn bad_closer(&self, u1: usize, v: usize, m: &L) -> Option<usize> {
        let n = self.n;
        if !self.closers.is_empty() {
            // Bit-parallel over every final vertex at once.
            let base = (u1 * n + v) * self.lanes;
            let alive = m.fold_ones(0u64, |acc, b| acc | self.closers[base + b]);
            let above = if v + 1 >= 64 { 0 } else { !0u64 << (v + 1) };
            let tail = if n >= 64 { !0u64 } else { (1u64 << n) - 1 };
            let bad = above & tail & !alive;
            return (bad != 0).then(|| bad.trailing_zeros() as usize);
        }
        let row = &self.step[v * n + v + 1..v * n + n];
        let col = &self.back[u1 * n + v + 1..u1 * n + n];
        row.iter()
            .zip(col)
            .position(|(a, b)| m.and(a).and(b).is_zero())
            .map(|off| v + 1 + off)
    }

    /// Depth-first extension of `path`; returns `true` with `path` holding a
    /// witness.
    fn descend(&self, k: usize, u1: usize, path: &mut Vec<usize>, masks: &mut Vec<L>) -> bool {
        let n = self.n;
        let depth = path.len();
        let v = *path.last().unwrap();
        let m = masks.last().expect("paths start with an edge").clone();
        if depth == k - 1 {
            return match self.bad_closer(u1, v, &m) {
                Some(x) => {
                    path.push(x);
                    true
                }
                None => false,
            };
        }
        if depth == k - 2 {
            for w in v + 1..n - 1 {
                let m2 = m.and(self.at(v, w));
                if m2.is_zero() {
                    path.extend([w, w + 1]);
                    return true;
                }
                if let Some(x) = self.bad_closer(u1, w, &m2) {
                    path.extend([w, x]);
                    return true;
                }
            }
            return false;
        }
        let last = n - (k - depth);
        for w in v + 1..=last {
            let m2 = m.and(self.at(v, w));
            path.push(w);
            if m2.is_zero() {
                // No round survives this prefix: any completion is a witness.
                return self.complete_smallest(path, k).is_some();
            }
            masks.push(m2);
            if self.descend(k, u1, path, masks) {
                return true;
            }
            masks.pop();
            path.pop();
        }
        false
    }
}

macro_rules! with_table {
    ($family:expr, $table:ident => $body:expr) => {{
        let rounds = $family.len();
        if rounds <= 8 {
            let $table = StepTable::<u16>::new($family);
            $body
        } else if rounds <= 16 {
            let $table = StepTable::<u32>::new($family);
            $body
        } else if rounds <= 32 {
            let $table = StepTable::<u64>::new($family);
            $body
        } else if rounds <= 64 {
            let $table = StepTable::<u128>::new($family);
            $body
        } else {
            let $table = StepTable::<Wide>::new($family);
            $body
        }
    }};
}

/// Work items: the two smallest vertices of a subset, in lexicographic order.
fn prefixes(n: usize, k: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for a in 0..=n - k {
        for b in a + 1..=n - k + 1 {
            out.push([a, b]);
        }
    }
    out
}

/// First `k`-subset (lexicographically) for which `covered` is false.
fn first_failing_subset(
    n: usize,
    k: usize,
    covered: impl Fn(&[usize]) -> bool + Sync,
) -> Option<Vec<usize>> {
    prefixes(n, k).into_par_iter().find_map_first(|[a, b]| {
        // Remaining k-2 vertices drawn from b+1..n, enumerated as offsets.
        let rest = n - b - 1;
        let m = k - 2;
        let mut tail: Vec<usize> = (0..m).collect();
        let mut subset = vec![0; k];
        subset[0] = a;
        subset[1] = b;
        loop {
            for (slot, t) in subset[2..].iter_mut().zip(&tail) {
                *slot = b + 1 + t;
            }
            if !covered(&subset) {
                return Some(subset);
            }
            if m == 0 || !next_combination(&mut tail, rest) {
                return None;
            }
        }
    })
}

/// Checks that every `u1 < ... < uk` has its increasing cycle directed in
/// some round.
pub fn check_increasing(family: &OrientationFamily, k: usize) -> Result<Verification> {
    check_k(family, k)?;
    let n = family.n();
    let found = with_table!(family, table => {
        prefixes(n, k)
            .into_par_iter()
            .find_map_first(|p| table.first_uncovered_increasing(k, &p))
    });
    let witness = found.map(|s| uncycled(family, s.clone(), s));
    Ok(Verification::from_outcome(Mode::Increasing, family, k, witness))
}

/// Checks that every `k`-set spans a strongly connected (hence Hamiltonian)
/// sub-tournament in some round.
pub fn check_weak(family: &OrientationFamily, k: usize) -> Result<Verification> {
    check_k(family, k)?;
    let n = family.n();
    let found = first_failing_subset(n, k, |s| family.rounds().iter().any(|t| t.is_strong_on(s)));
    let witness = found.map(|s| {
        let detail = family
            .rounds()
            .iter()
            .enumerate()
            .map(|(r, t)| {
                let sub = t.induced(&s).expect("subset is valid");
                format!(
                    "round {r}: sub-tournament is not strongly connected (scores {:?})",
                    sub.scores()
                )
            })
            .collect();
        Witness::UncycledSubset {
            vertices: s.clone(),
            ordering: s,
            detail,
        }
    });
    Ok(Verification::from_outcome(Mode::Weak, family, k, witness))
}

/// Direction-free cyclic orderings of positions `0..k`: position 0 first and
/// the second position smaller than the last, in lexicographic order.
fn cyclic_orderings(k: usize) -> Vec<Vec<usize>> {
    let mut rest: Vec<usize> = (1..k).collect();
    let mut out = Vec::new();
    for_each_permutation(&mut rest, &mut |p| {
        if p[0] < p[p.len() - 1] {
            let mut o = Vec::with_capacity(k);
            o.push(0);
            o.extend_from_slice(p);
            out.push(o);
        }
    });
    out.sort();
    out
}

/// Checks that every cyclic ordering of every `k`-set is directed in some
/// round.
pub fn check_all_orderings(family: &OrientationFamily, k: usize) -> Result<Verification> {
    check_k(family, k)?;
    let n = family.n();
    let orderings = cyclic_orderings(k);
    let first_bad = |table_covered: &dyn Fn(&[usize]) -> bool, s: &[usize]| {
        let mut buf = vec![0; k];
        orderings.iter().find_map(|o| {
            for (slot, &p) in buf.iter_mut().zip(o) {
                *slot = s[p];
            }
            (!table_covered(&buf)).then(|| buf.clone())
        })
    };
    let found = with_table!(family, table => {
        let covered = |o: &[usize]| table.cycle_covered(o);
        first_failing_subset(n, k, |s| first_bad(&covered, s).is_none()).map(|s| {
            let o = first_bad(&covered, &s).expect("subset failed");
            (s, o)
        })
    });
    let witness = found.map(|(s, o)| uncycled(family, s, o));
    Ok(Verification::from_outcome(Mode::All, family, k, witness))
}

/// Straightforward subset-by-subset reference for [`check_increasing`]; used
/// to cross-check the pruned search.
pub fn check_increasing_naive(family: &OrientationFamily, k: usize) -> Result<Option<Vec<usize>>> {
    check_k(family, k)?;
    Ok(crate::subsets::for_each_combination(family.n(), k, |s| {
        if family.rounds().iter().any(|t| cycle_is_directed(t, s)) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(s.to_vec())
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(t: Tournament) -> OrientationFamily {
        OrientationFamily::new(t.n(), vec![t]).unwrap()
    }

    #[test]
    fn transitive_round_fails_everywhere() {
        let f = single(Tournament::transitive(4));
        let v = check_increasing(&f, 3).unwrap();
        assert_eq!(v.witness.as_ref().unwrap().subset(), vec![0, 1, 2]);
        assert_eq!(v.subsets_checked, 1);
        for k in 3..=4 {
            assert!(!check_weak(&f, k).unwrap().is_ok());
            assert!(!check_all_orderings(&f, k).unwrap().is_ok());
        }
    }

    #[test]
    fn witness_detail_names_breaking_edges() {
        let f = single(Tournament::transitive(3));
        let v = check_increasing(&f, 3).unwrap();
        let w = v.witness.unwrap();
        assert_eq!(
            w.detail(),
            ["round 0: edge 0->2 breaks the forward cycle, edge 0->1 breaks the reverse cycle"]
        );
    }

    #[test]
    fn reverse_direction_counts() {
        // 0->2->1->0 is the increasing triangle traversed backwards.
        let t = Tournament::from_fn(3, |i, j| (i, j) == (0, 2));
        assert!(t.beats(0, 2) && t.beats(2, 1) && t.beats(1, 0));
        assert!(check_increasing(&single(t), 3).unwrap().is_ok());
    }

    #[test]
    fn domain_errors() {
        let f = single(Tournament::transitive(4));
        assert!(check_increasing(&f, 2).is_err());
        assert!(check_weak(&f, 5).is_err());
    }

    #[test]
    fn empty_family_fails() {
        let f = OrientationFamily::new(3, vec![]).unwrap();
        assert!(!check_increasing(&f, 3).unwrap().is_ok());
    }

    #[test]
    fn cyclic_ordering_counts() {
        assert_eq!(cyclic_orderings(3), vec![vec![0, 1, 2]]);
        assert_eq!(cyclic_orderings(4).len(), 3);
        assert_eq!(cyclic_orderings(5).len(), 12);
        assert_eq!(cyclic_orderings(6).len(), 60);
    }

    #[test]
    fn pruned_search_matches_naive_on_random_families() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(3..10);
            let k = rng.gen_range(3..=n);
            let rounds = rng.gen_range(0..5);
            let f = OrientationFamily::new(
                n,
                (0..rounds)
                    .map(|_| Tournament::from_fn(n, |_, _| rng.gen()))
                    .collect(),
            )
            .unwrap();
            let fast = check_increasing(&f, k).unwrap().witness.map(|w| w.subset());
            assert_eq!(fast, check_increasing_naive(&f, k).unwrap());
        }
    }

    #[test]
    fn wide_lanes_agree_with_narrow() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        let n = 7;
        let rounds: Vec<Tournament> = (0..70).map(|_| Tournament::from_fn(n, |_, _| rng.gen())).collect();
        for take in [5, 33, 70] {
            let f = OrientationFamily::new(n, rounds[..take].to_vec()).unwrap();
            for k in 3..=n {
                let fast = check_increasing(&f, k).unwrap().witness.map(|w| w.subset());
                assert_eq!(fast, check_increasing_naive(&f, k).unwrap());
            }
        }
    }

    #[test]
    fn large_vertex_counts_use_the_scalar_leaf() {
        for k in [3, 4] {
            let f = crate::cycling::construct_family(70, k).unwrap();
            assert!(check_increasing(&f, k).unwrap().is_ok());
            let mut rounds = f.rounds().to_vec();
            rounds.pop();
            let g = OrientationFamily::new(70, rounds).unwrap();
            let fast = check_increasing(&g, k).unwrap().witness.map(|w| w.subset());
            assert_eq!(fast, check_increasing_naive(&g, k).unwrap());
            assert!(fast.is_some());
        }
    }
}
