//! `k`-independent set families and their translation into orientation
//! rounds.
//!
//! A family of subsets of `{0..t}` is `k`-independent when any `k` members
//! `A_1..A_k` realise all `2^k` membership patterns: for every choice of
//! `B_i` in `{A_i, complement of A_i}` the intersection of the `B_i` is
//! nonempty. Indexing one set per edge of `K_n` and reading ground element
//! `s` as round `s` (edge reversed against `i -> j` for `i < j` iff `s` lies
//! in its set) gives rounds in which every orientation of every `k` edges
//! shows up, in particular every cyclic orientation of every `k`-cycle.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycling::lower_bound;
use crate::error::{domain, Error, Result};
use crate::family::OrientationFamily;
use crate::subsets::{binomial, pair_index};
use crate::tournament::Tournament;
use crate::verifier::{check_all_orderings, Verification};
use crate::witness::Witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    t: usize,
    /// One bitset over the ground set per member.
    members: Vec<Vec<u64>>,
}

/// File form: `{"t": 8, "sets": [[0, 3, 5], [1, 2], ...]}`. When a family
/// feeds [`derive_orientations`], set `e` belongs to edge `e` in
/// lexicographic pair order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFamilyDocument {
    pub t: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(t: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let words = t.div_ceil(64);
        let members = sets
            .iter()
            .map(|set| {
                let mut bits = vec![0u64; words];
                for &x in set {
                    if x >= t {
                        return domain(format!("element {x} outside ground set of size {t}"));
                    }
                    bits[x / 64] |= 1 << (x % 64);
                }
                Ok(bits)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetFamily { t, members })
    }

    pub fn ground_size(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: usize, x: usize) -> bool {
        self.members[set][x / 64] >> (x % 64) & 1 == 1
    }

    pub fn set(&self, index: usize) -> Vec<usize> {
        (0..self.t).filter(|&x| self.contains(index, x)).collect()
    }

    pub fn remove(&mut self, index: usize) {
        self.members.remove(index);
    }

    /// Grows the ground set to `t` elements without touching membership.
    pub fn with_ground_size(&self, t: usize) -> Result<Self> {
        if t < self.t {
            return domain(format!("cannot shrink ground set from {} to {t}", self.t));
        }
        let sets: Vec<Vec<usize>> = (0..self.len()).map(|i| self.set(i)).collect();
        SetFamily::new(t, &sets)
    }

    pub fn to_document(&self) -> SetFamilyDocument {
        SetFamilyDocument {
            t: self.t,
            sets: (0..self.len()).map(|i| self.set(i)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SetFamilyDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        SetFamily::new(doc.t, &doc.sets)
    }

    /// Mask of the ground-set bits inside word `w`.
    fn word_mask(&self, w: usize) -> u64 {
        let rem = self.t - 64 * w;
        if rem >= 64 {
            !0
        } else {
            (1u64 << rem) - 1
        }
    }

    /// `set` itself or its complement within the ground set.
    fn side(&self, set: usize, inside: bool) -> Vec<u64> {
        self.members[set]
            .iter()
            .enumerate()
            .map(|(w, &bits)| if inside { bits } else { !bits & self.word_mask(w) })
            .collect()
    }
}


#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceCheck {
    pub k: usize,
    pub tuples_checked: u64,
    pub witness: Option<Witness>,
}

impl IndependenceCheck {
    pub fn is_ok(&self) -> bool {
        self.witness.is_none()
    }
}

/// Pattern bit `i` set means the `i`-th chosen set itself (rather than its
/// complement).
fn pattern_bools(pattern: usize, k: usize) -> Vec<bool> {
    (0..k).map(|i| pattern >> i & 1 == 1).collect()
}

/// First missing pattern (in increasing pattern order) of a `k`-tuple.
fn first_missing_pattern(fam: &SetFamily, tuple: &[usize]) -> Option<usize> {
    let k = tuple.len();
    (0..1usize << k).find(|&pattern| {
        (0..fam.t).all(|x| {
            tuple
                .iter()
                .enumerate()
                .any(|(i, &set)| fam.contains(set, x) != (pattern >> i & 1 == 1))
        })
    })
}

/// Flat per-member bitsets for the search: `sides[(2 * set + inside) * words..]`.
struct Sides {
    words: usize,
    sides: Vec<u64>,
}

impl Sides {
    fn new(fam: &SetFamily) -> Self {
        let words = fam.t.div_ceil(64).max(1);
        let mut sides = Vec::with_capacity(fam.len() * 2 * words);
        for set in 0..fam.len() {
            for inside in [false, true] {
                let mut bits = fam.side(set, inside);
                bits.resize(words, 0);
                sides.extend(bits);
            }
        }
        Sides { words, sides }
    }

    #[inline]
    fn get(&self, set: usize, inside: bool) -> &[u64] {
        let start = (2 * set + inside as usize) * self.words;
        &self.sides[start..start + self.words]
    }
}

/// Depth-first over tuples starting with `first`, keeping the `2^depth`
/// partial intersections per level in reusable flat buffers. A prefix with an
/// empty cell fails for every extension, so its smallest completion is
/// returned.
fn first_failing_tuple(sides: &Sides, m: usize, k: usize, first: usize) -> Option<Vec<usize>> {
    let w = sides.words;
    // levels[d] holds 2^d cells of `w` words each, after d sets.
    let mut levels: Vec<Vec<u64>> = (0..k).map(|d| vec![0u64; (1 << d) * w]).collect();
    levels[0].fill(!0);

    fn complete(mut tuple: Vec<usize>, k: usize, m: usize) -> Option<Vec<usize>> {
        while tuple.len() < k {
            let next = tuple.last().unwrap() + 1;
            if next >= m {
                return None;
            }
            tuple.push(next);
        }
        Some(tuple)
    }

    /// Splits the cells of `src` by `set` into `dst`; false if a cell empties.
    fn split(sides: &Sides, src: &[u64], dst: &mut [u64], set: usize) -> bool {
        let w = sides.words;
        let (out, inn) = (sides.get(set, false), sides.get(set, true));
        let mut ok = true;
        for (c, cell) in src.chunks_exact(w).enumerate() {
            for (half, side) in [out, inn].into_iter().enumerate() {
                let target = &mut dst[(2 * c + half) * w..(2 * c + half + 1) * w];
                let mut any = 0;
                for ((t, a), b) in target.iter_mut().zip(cell).zip(side) {
                    *t = a & b;
                    any |= *t;
                }
                ok &= any != 0;
            }
        }
        ok
    }

    /// Whether splitting `src` by `set` leaves every cell nonempty, without
    /// storing the result.
    fn splits_cleanly(sides: &Sides, src: &[u64], set: usize) -> bool {
        let w = sides.words;
        let (out, inn) = (sides.get(set, false), sides.get(set, true));
        src.chunks_exact(w).all(|cell| {
            [out, inn]
                .into_iter()
                .all(|side| cell.iter().zip(side).any(|(a, b)| a & b != 0))
        })
    }

    fn go(
        sides: &Sides,
        m: usize,
        k: usize,
        tuple: &mut Vec<usize>,
        levels: &mut [Vec<u64>],
    ) -> Option<Vec<usize>> {
        let depth = tuple.len();
        let last = m - (k - depth);
        let start = tuple.last().map_or(0, |v| v + 1);
        if depth == k - 1 {
            let src = &levels[depth];
            return (start..=last)
                .find(|&next| !splits_cleanly(sides, src, next))
                .map(|next| {
                    let mut t = tuple.clone();
                    t.push(next);
                    t
                });
        }
        for next in start..=last {
            let (head, tail) = levels.split_at_mut(depth + 1);
            let ok = split(sides, &head[depth], &mut tail[0], next);
            tuple.push(next);
            if !ok {
                return complete(tuple.clone(), k, m);
            }
            if let Some(found) = go(sides, m, k, tuple, levels) {
                return Some(found);
            }
            tuple.pop();
        }
        None
    }

    if k == 1 {
        return (!splits_cleanly(sides, &levels[0], first)).then(|| vec![first]);
    }
    let (head, tail) = levels.split_at_mut(1);
    let mut tuple = vec![first];
    if !split(sides, &head[0], &mut tail[0], first) {
        return complete(tuple, k, m);
    }
    go(sides, m, k, &mut tuple, &mut levels)
}

/// Checks every `k`-tuple of distinct members against every membership
/// pattern; the witness is the lexicographically first failing tuple with
/// its first missing pattern.
pub fn is_k_independent(fam: &SetFamily, k: usize) -> Result<IndependenceCheck> {
    if k == 0 {
        return domain("k must be at least 1");
    }
    if fam.len() < k {
        return domain(format!("family has {} sets, fewer than k = {k}", fam.len()));
    }
    if k >= usize::BITS as usize {
        return domain(format!("k = {k} too large"));
    }
    let m = fam.len();
    let sides = Sides::new(fam);
    let found = (0..=m - k)
        .into_par_iter()
        .find_map_first(|first| first_failing_tuple(&sides, m, k, first));
    let witness = found.map(|tuple| {
        let pattern = first_missing_pattern(fam, &tuple).expect("tuple fails");
        let bools = pattern_bools(pattern, k);
        let detail = tuple
            .iter()
            .zip(&bools)
            .map(|(&set, &inside)| {
                let side = if inside { "A" } else { "complement of A" };
                format!("{side}_{set} = {:?}", {
                    let bits = fam.side(set, inside);
                    (0..fam.t).filter(|x| bits[x / 64] >> (x % 64) & 1 == 1).collect::<Vec<_>>()
                })
            })
            .chain(std::iter::once("intersection is empty".to_string()))
            .collect();
        Witness::MissingIntersectionPattern {
            sets: tuple,
            pattern: bools,
            detail,
        }
    });
    let tuples_checked = match &witness {
        None => binomial(m, k),
        Some(w) => crate::subsets::lex_rank(m, &w.subset()) + 1,
    };
    Ok(IndependenceCheck {
        k,
        tuples_checked,
        witness,
    })
}

/// Draws `m` random subsets of `{0..t}` (each element kept with probability
/// 1/2) until the family is `k`-independent, up to `retries` attempts.
pub fn randomized_family(m: usize, k: usize, t: usize, seed: u64, retries: u32) -> Result<SetFamily> {
    if t == 0 {
        return domain("ground set must be nonempty");
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..retries {
        let sets: Vec<Vec<usize>> = (0..m)
            .map(|_| (0..t).filter(|_| rng.gen::<bool>()).collect())
            .collect();
        let fam = SetFamily::new(t, &sets)?;
        if is_k_independent(&fam, k)?.is_ok() {
            return Ok(fam);
        }
    }
    Err(Error::RetriesExhausted { k, t, retries })
}

/// One round per ground element: in round `s` the edge `{i, j}` (`i < j`,
/// set index `pair_index(i, j)`) runs `j -> i` iff `s` is in its set.
pub fn derive_orientations(fam: &SetFamily, n: usize) -> Result<OrientationFamily> {
    let edges = n * n.saturating_sub(1) / 2;
    if fam.len() != edges {
        return domain(format!(
            "need one set per edge: C({n},2) = {edges}, family has {}",
            fam.len()
        ));
    }
    let rounds = (0..fam.t)
        .map(|s| Tournament::from_fn(n, |i, j| !fam.contains(pair_index(n, i, j), s)))
        .collect();
    OrientationFamily::new(n, rounds)
}

#[derive(Clone, Debug)]
pub struct WUpperResult {
    pub family: OrientationFamily,
    pub sets: SetFamily,
    /// Ground-set size (= rounds) reached by the search.
    pub t: usize,
    /// `ceil(log2((n-1)/(k-2)))`, a floor for any cycling family.
    pub floor: usize,
    pub verification: Verification,
}

/// Searches the smallest ground-set size `t` at which [`randomized_family`]
/// produces a `k`-independent family of `C(n,2)` sets (doubling, then
/// bisection), and turns it into rounds covering every `k`-cycle ordering.
pub fn w_upper_pipeline(n: usize, k: usize, seed: u64, retries: u32) -> Result<WUpperResult> {
    let floor = lower_bound(n, k)?;
    let m = n * (n - 1) / 2;
    let attempt = |t: usize| match randomized_family(m, k, t, seed, retries) {
        Ok(fam) => Ok(Some(fam)),
        Err(Error::RetriesExhausted { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    // Every pattern needs its own element.
    let mut lo = (1usize << k) - 1;
    let mut hi = lo + 1;
    let mut best = loop {
        if let Some(fam) = attempt(hi)? {
            break fam;
        }
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| Error::Domain("ground set overflow".into()))?;
        if hi > 1 << 16 {
            return Err(Error::RetriesExhausted { k, t: hi, retries });
        }
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match attempt(mid)? {
            Some(fam) => {
                hi = mid;
                best = fam;
            }
            None => lo = mid,
        }
    }
    let family = derive_orientations(&best, n)?;
    let verification = check_all_orderings(&family, k)?;
    assert!(verification.is_ok(), "k-independent families cover every ordering");
    Ok(WUpperResult {
        family,
        sets: best,
        t: hi,
        floor,
        verification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::combinations;

    fn coordinate_family(k: usize) -> SetFamily {
        let t = 1 << k;
        let sets: Vec<Vec<usize>> = (0..k).map(|i| (0..t).filter(|x| x >> i & 1 == 1).collect()).collect();
        SetFamily::new(t, &sets).unwrap()
    }

    /// Pattern-by-pattern brute force, independent of the pruned search.
    fn brute_independent(fam: &SetFamily, k: usize) -> Option<Vec<usize>> {
        combinations(fam.len(), k).into_iter().find(|tuple| {
            (0..1usize << k).any(|pattern| {
                !(0..fam.ground_size()).any(|x| {
                    tuple
                        .iter()
                        .enumerate()
                        .all(|(i, &set)| fam.contains(set, x) == (pattern >> i & 1 == 1))
                })
            })
        })
    }

    #[test]
    fn coordinate_sets_are_independent() {
        for k in 1..=6 {
            let fam = coordinate_family(k);
            let check = is_k_independent(&fam, k).unwrap();
            assert!(check.is_ok());
            assert_eq!(check.tuples_checked, 1);
        }
    }

    #[test]
    fn disjoint_pair_fails() {
        let fam = SetFamily::new(2, &[vec![0], vec![1]]).unwrap();
        let check = is_k_independent(&fam, 2).unwrap();
        match check.witness.unwrap() {
            Witness::MissingIntersectionPattern { sets, pattern, .. } => {
                assert_eq!(sets, vec![0, 1]);
                // Pattern 0 (both complements) is {}, as is pattern 3 (both sets);
                // pattern 0 comes first.
                assert_eq!(pattern, vec![false, false]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors() {
        let fam = SetFamily::new(2, &[vec![0]]).unwrap();
        assert!(is_k_independent(&fam, 2).is_err());
        assert!(is_k_independent(&fam, 0).is_err());
        assert!(SetFamily::new(2, &[vec![2]]).is_err());
        assert!(derive_orientations(&fam, 3).is_err());
    }

    #[test]
    fn duplicates_break_independence() {
        let fam = SetFamily::new(4, &[vec![0, 1], vec![0, 2], vec![0, 2]]).unwrap();
        assert!(!is_k_independent(&fam, 2).unwrap().is_ok());
    }

    #[test]
    fn pruned_check_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..400 {
            let k = rng.gen_range(1..4);
            let m = rng.gen_range(k..9);
            let t = rng.gen_range(1..80);
            let sets: Vec<Vec<usize>> = (0..m).map(|_| (0..t).filter(|_| rng.gen::<bool>()).collect()).collect();
            let fam = SetFamily::new(t, &sets).unwrap();
            let got = is_k_independent(&fam, k).unwrap();
            assert_eq!(got.witness.map(|w| w.subset()), brute_independent(&fam, k));
        }
    }

    #[test]
    fn removal_and_padding_preserve_independence() {
        let fam = randomized_family(12, 3, 40, 2, 50).unwrap();
        let mut smaller = fam.clone();
        smaller.remove(4);
        assert!(is_k_independent(&smaller, 3).unwrap().is_ok());
        assert!(is_k_independent(&fam.with_ground_size(70).unwrap(), 3).unwrap().is_ok());
    }

    #[test]
    fn tiny_ground_set_fails() {
        assert!(matches!(
            randomized_family(10, 2, 1, 0, 20),
            Err(Error::RetriesExhausted { k: 2, t: 1, retries: 20 })
        ));
    }

    #[test]
    fn small_random_family() {
        let fam = randomized_family(3, 3, 8, 1, 10_000).unwrap();
        assert!(is_k_independent(&fam, 3).unwrap().is_ok());
    }

    #[test]
    fn empty_ground_set_gives_no_rounds() {
        let fam = SetFamily::new(0, &[vec![], vec![], vec![]]).unwrap();
        let f = derive_orientations(&fam, 3).unwrap();
        assert!(f.is_empty());
        assert!(!check_all_orderings(&f, 3).unwrap().is_ok());
    }

    #[test]
    fn rounds_are_columns() {
        let fam = randomized_family(10, 2, 12, 4, 100).unwrap();
        let f = derive_orientations(&fam, 5).unwrap();
        assert_eq!(f.len(), 12);
        // Swapping ground elements 0 and 1 swaps rounds 0 and 1.
        let swapped: Vec<Vec<usize>> = (0..10)
            .map(|i| {
                let mut s: Vec<usize> = fam.set(i).into_iter().map(|x| match x { 0 => 1, 1 => 0, x => x }).collect();
                s.sort_unstable();
                s
            })
            .collect();
        let g = derive_orientations(&SetFamily::new(12, &swapped).unwrap(), 5).unwrap();
        assert_eq!(g.rounds()[0], f.rounds()[1]);
        assert_eq!(g.rounds()[1], f.rounds()[0]);
        assert_eq!(g.rounds()[2..], f.rounds()[2..]);
    }

    #[test]
    fn json_round_trip() {
        let fam = randomized_family(6, 2, 10, 8, 100).unwrap();
        assert_eq!(SetFamily::from_json(&fam.to_json()).unwrap(), fam);
        assert!(SetFamily::from_json(r#"{"t":2,"sets":[[3]]}"#).is_err());
    }
}
