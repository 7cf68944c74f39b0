//! Orientation rounds for the facets of simplices on `[n]`.
//!
//! A round assigns a sign to every `(r-1)`-subset; `+1` stands for the
//! orientation given by increasing vertex order. An `r`-set `v1 < ... < vr`
//! is satisfied by a round when its facets carry orientations induced by a
//! single orientation of the `r`-set. Orientation `eps <v1...vr>` induces
//! `eps (-1)^i <v1..v(i-1) v(i+1)..vr>` on the facet that drops `vi`, with
//! `i` counted from 1, so consistency means the facet signs read
//! `eps * (-1)^i` for `i = 1..=r`.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::family::OrientationFamily;
use crate::subsets::{binomial, for_each_combination, lex_rank};
use crate::tournament::Tournament;
use crate::witness::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of `perm` relative to its sorted order.
pub fn permutation_parity<T: Ord + Copy>(perm: &[T]) -> Result<Parity> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if let Some(pos) = sorted.windows(2).position(|w| w[0] == w[1]) {
        let rank = perm.iter().position(|x| *x == sorted[pos]).unwrap();
        return Err(Error::Duplicate(rank));
    }
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    Ok(if inversions % 2 == 0 { Parity::Even } else { Parity::Odd })
}

fn alternating(i: usize) -> i8 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign, relative to increasing order, of the orientation that
/// `simplex_sign <simplex>` induces on the facet dropping the `i`-th smallest
/// vertex (`i` is 1-based).
pub fn induced_sign(simplex: &[usize], simplex_sign: i8, i: usize) -> Result<i8> {
    check_sorted(simplex)?;
    check_sign(simplex_sign)?;
    if i == 0 || i > simplex.len() {
        return domain(format!("facet index {i} outside 1..={}", simplex.len()));
    }
    Ok(simplex_sign * alternating(i))
}

/// The facet of a sorted simplex dropping its `i`-th smallest vertex (1-based).
pub fn facet(simplex: &[usize], i: usize) -> Vec<usize> {
    simplex
        .iter()
        .enumerate()
        .filter(|&(pos, _)| pos + 1 != i)
        .map(|(_, &v)| v)
        .collect()
}

fn check_sorted(s: &[usize]) -> Result<()> {
    for w in s.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Duplicate(w[0]));
        }
        if w[0] > w[1] {
            return domain(format!("vertices {s:?} are not in increasing order"));
        }
    }
    Ok(())
}

fn check_sign(sign: i8) -> Result<()> {
    if sign != 1 && sign != -1 {
        return domain(format!("sign must be +1 or -1, got {sign}"));
    }
    Ok(())
}

/// Whether facet signs `signs[i-1]` (facet dropping the `i`-th vertex) are
/// all induced by one orientation of the simplex.
pub fn signs_consistent(signs: &[i8]) -> bool {
    let eps = -signs[0];
    signs
        .iter()
        .enumerate()
        .all(|(pos, &s)| s == eps * alternating(pos + 1))
}

/// One round: a sign for every `(r-1)`-subset of `[n]`, stored in
/// lexicographic subset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSigning {
    n: usize,
    r: usize,
    signs: Vec<i8>,
}

impl FacetSigning {
    pub fn new(n: usize, r: usize, signs: Vec<i8>) -> Result<Self> {
        if r < 3 {
            return domain(format!("simplex size r must be >= 3, got {r}"));
        }
        let expected = binomial(n, r - 1);
        if signs.len() as u64 != expected {
            return domain(format!(
                "expected C({n},{}) = {expected} signs, got {}",
                r - 1,
                signs.len()
            ));
        }
        signs.iter().try_for_each(|&s| check_sign(s))?;
        Ok(FacetSigning { n, r, signs })
    }

    /// Signs from a function of each sorted `(r-1)`-subset.
    pub fn from_fn(n: usize, r: usize, mut sign: impl FnMut(&[usize]) -> i8) -> Result<Self> {
        let mut signs = Vec::new();
        for_each_combination::<()>(n, r.saturating_sub(1), |s| {
            signs.push(sign(s));
            ControlFlow::Continue(())
        });
        FacetSigning::new(n, r, signs)
    }

    /// The `r = 3` signing of a tournament: `{i, j}` with `i < j` gets `+1`
    /// iff `i -> j`.
    pub fn from_tournament(t: &Tournament) -> Self {
        FacetSigning::from_fn(t.n(), 3, |e| if t.beats(e[0], e[1]) { 1 } else { -1 })
            .expect("well-formed signing")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Sign of a sorted `(r-1)`-subset.
    pub fn sign(&self, subset: &[usize]) -> i8 {
        self.signs[lex_rank(self.n, subset) as usize]
    }

    fn facet_signs(&self, s: &[usize]) -> Vec<i8> {
        (1..=s.len()).map(|i| self.sign(&facet(s, i))).collect()
    }

    fn check_simplex(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.r {
            return domain(format!("expected an {}-subset, got {s:?}", self.r));
        }
        check_sorted(s)?;
        if let Some(&v) = s.last().filter(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Whether the facets of the sorted `r`-set `s` are consistently oriented.
    pub fn is_consistent(&self, s: &[usize]) -> Result<bool> {
        self.check_simplex(s)?;
        Ok(signs_consistent(&self.facet_signs(s)))
    }

    pub fn to_sign_string(&self) -> String {
        self.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }

    pub fn from_sign_string(n: usize, r: usize, text: &str) -> Result<Self> {
        let signs = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '\u{2212}' => Ok(-1),
                other => Err(Error::Malformed(format!("sign character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        FacetSigning::new(n, r, signs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexRoundFamily {
    n: usize,
    r: usize,
    rounds: Vec<FacetSigning>,
}

/// File form: `{"n": 5, "r": 4, "rounds": ["+-+-+--+-+", ...]}`, one sign per
/// `(r-1)`-subset in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexFamilyDocument {
    pub n: usize,
    pub r: usize,
    pub rounds: Vec<String>,
}

impl SimplexRoundFamily {
    pub fn new(n: usize, r: usize, rounds: Vec<FacetSigning>) -> Result<Self> {
        if r < 3 {
            return domain(format!("simplex size r must be >= 3, got {r}"));
        }
        for (index, round) in rounds.iter().enumerate() {
            if (round.n, round.r) != (n, r) {
                return domain(format!(
                    "round {index} has (n, r) = ({}, {}), family has ({n}, {r})",
                    round.n, round.r
                ));
            }
        }
        Ok(SimplexRoundFamily { n, r, rounds })
    }

    /// The `r = 3` translation of a tournament family.
    pub fn from_orientations(family: &OrientationFamily) -> Self {
        let rounds = family.rounds().iter().map(FacetSigning::from_tournament).collect();
        SimplexRoundFamily {
            n: family.n(),
            r: 3,
            rounds,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rounds(&self) -> &[FacetSigning] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn to_document(&self) -> SimplexFamilyDocument {
        SimplexFamilyDocument {
            n: self.n,
            r: self.r,
            rounds: self.rounds.iter().map(FacetSigning::to_sign_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SimplexFamilyDocument =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let rounds = doc
            .rounds
            .iter()
            .map(|s| FacetSigning::from_sign_string(doc.n, doc.r, s))
            .collect::<Result<Vec<_>>>()?;
        SimplexRoundFamily::new(doc.n, doc.r, rounds)
    }
}

fn sign_pattern(signs: &[i8]) -> String {
    signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
}

fn inconsistent(fam: &SimplexRoundFamily, s: Vec<usize>) -> Witness {
    let plus: Vec<i8> = (1..=fam.r).map(alternating).collect();
    let minus: Vec<i8> = plus.iter().map(|x| -x).collect();
    let detail = fam
        .rounds
        .iter()
        .enumerate()
        .map(|(i, round)| {
            format!(
                "round {i}: facet signs {} match neither {} nor {}",
                sign_pattern(&round.facet_signs(&s)),
                sign_pattern(&plus),
                sign_pattern(&minus)
            )
        })
        .collect();
    Witness::InconsistentSimplex { vertices: s, detail }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexVerification {
    pub n: usize,
    pub r: usize,
    pub rounds: usize,
    pub subsets_checked: u64,
    pub witness: Option<Witness>,
}

impl SimplexVerification {
    pub fn is_ok(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks that every `r`-subset is consistently oriented in some round.
pub fn check_simplex_family(fam: &SimplexRoundFamily) -> SimplexVerification {
    let found = first_unsatisfied(fam);
    let subsets_checked = match &found {
        None => binomial(fam.n, fam.r),
        Some(s) => lex_rank(fam.n, s) + 1,
    };
    SimplexVerification {
        n: fam.n,
        r: fam.r,
        rounds: fam.len(),
        subsets_checked,
        witness: found.map(|s| inconsistent(fam, s)),
    }
}

fn first_unsatisfied(fam: &SimplexRoundFamily) -> Option<Vec<usize>> {
    for_each_combination(fam.n, fam.r, |s| {
        let ok = fam
            .rounds
            .iter()
            .any(|round| signs_consistent(&round.facet_signs(s)));
        if ok {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(s.to_vec())
        }
    })
}

/// Default cap on `C(n, r-1)` for [`max_consistent_per_round`].
pub const MAX_COVER_GUARD: u64 = 25;

/// Largest number of `r`-subsets a single round can satisfy, by trying all
/// `2^C(n,r-1)` signings.
pub fn max_consistent_per_round(n: usize, r: usize, force: bool) -> Result<u64> {
    if r < 3 || n < r {
        return domain(format!("need 3 <= r <= n, got n = {n}, r = {r}"));
    }
    let facets = binomial(n, r - 1);
    if facets > 63 || (!force && facets > MAX_COVER_GUARD) {
        return Err(Error::GuardExceeded(format!(
            "2^{facets} signings to enumerate (limit 2^{MAX_COVER_GUARD})"
        )));
    }
    // Each r-set is satisfied by exactly two bit patterns on its facets.
    let mut targets: Vec<(u64, u64, u64)> = Vec::new();
    for_each_combination::<()>(n, r, |s| {
        let mut mask = 0u64;
        let mut plus = 0u64;
        for i in 1..=r {
            let bit = 1u64 << lex_rank(n, &facet(s, i));
            mask |= bit;
            if alternating(i) == 1 {
                plus |= bit;
            }
        }
        targets.push((mask, plus, mask & !plus));
        ControlFlow::Continue(())
    });
    let best = (0..1u64 << facets)
        .map(|code| {
            targets
                .iter()
                .filter(|&&(mask, a, b)| {
                    let got = code & mask;
                    got == a || got == b
                })
                .count() as u64
        })
        .max()
        .unwrap_or(0);
    Ok(best)
}

/// Smallest `t` with `4 p d <= 1`, where `p = ((2^(r-1) - 1) / 2^(r-1))^t`
/// is the chance an `r`-set stays unsatisfied over `t` random rounds and
/// `d = r (n - r)` bounds how many other `r`-sets share a facet with it.
/// Evaluated exactly as `4 d (2^(r-1) - 1)^t <= 2^((r-1) t)`.
pub fn lll_round_budget(n: usize, r: usize) -> Result<usize> {
    if r < 3 || n <= r {
        return domain(format!("need n > r >= 3, got n = {n}, r = {r}"));
    }
    let half = BigUint::from(1u8) << (r - 1);
    let fail = &half - 1u8;
    let lhs_base = BigUint::from(4 * r * (n - r));
    let mut t = 0;
    let mut lhs = lhs_base;
    let mut rhs = BigUint::from(1u8);
    while lhs > rhs {
        t += 1;
        lhs *= &fail;
        rhs *= &half;
    }
    Ok(t)
}

/// `1 / log2(2^(r-1) / (2^(r-1) - 1))`, the leading coefficient of the
/// budget in front of `log2 n`.
pub fn lll_coefficient(r: usize) -> f64 {
    let half = (1u64 << (r - 1)) as f64;
    1.0 / (half / (half - 1.0)).log2()
}

/// `ceil(log2(n - r + 2))`: fewer rounds always leave two `(r-1)`-sets
/// through a common `(r-2)`-set with identical induced-sign sequences.
pub fn simplex_lower_bound(n: usize, r: usize) -> Result<usize> {
    if r < 3 || n < r {
        return domain(format!("need 3 <= r <= n, got n = {n}, r = {r}"));
    }
    let target = (n - r + 2) as u128;
    let mut t = 0;
    while 1u128 << t < target {
        t += 1;
    }
    Ok(t)
}

/// Fixes an `(r-2)`-set `L` and records, for each `x` outside it, the
/// sequence of signs that `L + {x}` induces on `L` round by round. Two equal
/// sequences for `x` and `y` mean `L + {x, y}` is unsatisfied in every round.
pub fn simplex_pigeonhole_witness(fam: &SimplexRoundFamily) -> Option<Witness> {
    let (n, r) = (fam.n, fam.r);
    if n < r {
        return None;
    }
    let induced_on_base = |base: &[usize], x: usize, round: &FacetSigning| {
        let mut f = base.to_vec();
        let pos = f.partition_point(|&v| v < x);
        f.insert(pos, x);
        round.sign(&f) * alternating(pos + 1)
    };
    for_each_combination(n, r - 2, |base| {
        let mut seen: std::collections::BTreeMap<Vec<i8>, usize> = Default::default();
        for x in (0..n).filter(|x| !base.contains(x)) {
            let seq: Vec<i8> = fam.rounds.iter().map(|round| induced_on_base(base, x, round)).collect();
            if let Some(&y) = seen.get(&seq) {
                let mut s = base.to_vec();
                s.extend([x, y]);
                s.sort_unstable();
                return ControlFlow::Break(inconsistent(fam, s));
            }
            seen.insert(seq, x);
        }
        ControlFlow::Continue(())
    })
}

/// Random rounds repaired by resampling: while some `r`-set is unsatisfied
/// in every round, redraw the signs of its `r` facets in all rounds. Returns
/// only families that pass [`check_simplex_family`].
pub fn randomized_construct(
    n: usize,
    r: usize,
    t: usize,
    seed: u64,
    resample_limit: u64,
) -> Result<SimplexRoundFamily> {
    if t == 0 {
        return domain("need at least one round");
    }
    if r < 3 || n < r {
        return domain(format!("need 3 <= r <= n, got n = {n}, r = {r}"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let facets = binomial(n, r - 1) as usize;
    let mut signs: Vec<Vec<i8>> = (0..t)
        .map(|_| (0..facets).map(|_| if rng.gen() { 1 } else { -1 }).collect())
        .collect();
    let mut resamples = 0u64;
    loop {
        let fam = SimplexRoundFamily::new(
            n,
            r,
            signs
                .iter()
                .map(|s| FacetSigning::new(n, r, s.clone()))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let Some(bad) = first_unsatisfied(&fam) else {
            debug_assert!(check_simplex_family(&fam).is_ok());
            return Ok(fam);
        };
        if resamples == resample_limit {
            return Err(Error::ResampleLimit {
                limit: resample_limit,
                stuck: bad,
            });
        }
        resamples += 1;
        let slots: Vec<usize> = (1..=r).map(|i| lex_rank(n, &facet(&bad, i)) as usize).collect();
        for round in signs.iter_mut() {
            for &slot in &slots {
                round[slot] = if rng.gen() { 1 } else { -1 };
            }
        }
    }
}
