//! The circular-gap construction of increasingly `k`-cycling families, the
//! matching local lower bound, and its pigeonhole witness extractor.
//!
//! Vertices `0..N` (with `N = 2^r (k-2) + 1`) sit on a circle. For an ordered
//! pair `(i, j)` the clockwise gap `d(i, j)` counts the vertices strictly
//! between them, and `f(i, j) = d(i, j) / (k-2)` (floor) is an `r`-bit number.
//! Round `l` orients `i -> j` exactly when bit `l` of `f(i, j)` is zero; bit 1
//! is the most significant. Since `d(i,j) + d(j,i) = N - 2` we get
//! `f(i,j) + f(j,i) = 2^r - 1`, so each bit is set for exactly one direction.

use std::collections::BTreeMap;

use crate::error::{domain, Error, Result};
use crate::family::OrientationFamily;
use crate::tournament::Tournament;
use crate::witness::Witness;

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 3 {
        return domain(format!("cycle length k must be >= 3, got {k}"));
    }
    if n < k {
        return domain(format!("need n >= k, got n = {n}, k = {k}"));
    }
    Ok(())
}

/// Smallest `r` with `2^r (k-2) >= n-1`, i.e. `ceil(log2((n-1)/(k-2)))`.
pub fn lower_bound(n: usize, k: usize) -> Result<usize> {
    check_nk(n, k)?;
    let (need, block) = ((n - 1) as u128, (k - 2) as u128);
    let mut r = 0;
    while block << r < need {
        r += 1;
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub k: usize,
    /// Number of rounds.
    pub r: usize,
    /// `2^r (k-2) + 1`, the circle the construction actually lives on.
    pub n_padded: usize,
}

impl ConstructionParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let r = lower_bound(n, k)?;
        let n_padded = (k - 2)
            .checked_shl(r as u32)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::Domain(format!("n = {n} too large")))?;
        Ok(ConstructionParams { n, k, r, n_padded })
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        for v in [a, b] {
            if v >= self.n_padded {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n_padded,
                });
            }
        }
        if a == b {
            return Err(Error::SelfPair(a));
        }
        Ok(())
    }

    /// Vertices strictly between `a` and `b` walking clockwise from `a`.
    pub fn clockwise_gap(&self, a: usize, b: usize) -> Result<usize> {
        self.check_pair(a, b)?;
        Ok(self.gap(a, b))
    }

    #[inline]
    fn gap(&self, a: usize, b: usize) -> usize {
        if b > a {
            b - a - 1
        } else {
            self.n_padded + b - a - 1
        }
    }

    /// `floor(clockwise_gap(i, j) / (k - 2))`, in `0..2^r`.
    pub fn f_value(&self, i: usize, j: usize) -> Result<usize> {
        self.check_pair(i, j)?;
        Ok(self.gap(i, j) / (self.k - 2))
    }

    /// Bit `level` (1-based, most significant first) of the `r`-digit form
    /// of `f(i, j)`.
    pub fn f_bit(&self, i: usize, j: usize, level: usize) -> Result<bool> {
        if level == 0 || level > self.r {
            return domain(format!("bit level {level} outside 1..={}", self.r));
        }
        Ok(self.f_value(i, j)? >> (self.r - level) & 1 == 1)
    }

    /// Round `level` on the full padded circle.
    fn padded_round(&self, level: usize, n: usize) -> Tournament {
        let shift = self.r - level;
        Tournament::from_fn(n, |i, j| (self.gap(i, j) / (self.k - 2)) >> shift & 1 == 0)
    }
}

/// `r = ceil(log2((n-1)/(k-2)))` rounds on `[n]` such that every increasing
/// `k`-cycle is directed in one of them. Built on `[n_padded]` and restricted
/// to the lowest `n` labels.
pub fn construct_family(n: usize, k: usize) -> Result<OrientationFamily> {
    let p = ConstructionParams::new(n, k)?;
    let rounds = (1..=p.r).map(|level| p.padded_round(level, n)).collect();
    OrientationFamily::new(n, rounds)
}

/// The same rounds on all `n_padded` vertices, before restriction.
pub fn construct_padded(p: &ConstructionParams) -> OrientationFamily {
    let rounds = (1..=p.r)
        .map(|level| p.padded_round(level, p.n_padded))
        .collect();
    OrientationFamily::new(p.n_padded, rounds).expect("rounds share n")
}

/// Per-round direction sequence of the edge `u v` seen from `u`: character
/// `l` is `0` if round `l` orients `u -> v`, `1` otherwise.
pub fn local_sequence(family: &OrientationFamily, u: usize, v: usize) -> String {
    family
        .rounds()
        .iter()
        .map(|t| if t.beats(u, v) { '0' } else { '1' })
        .collect()
}

/// Looks for a vertex `u` with `k-1` neighbours sharing one local sequence.
/// In every round `u` is then a source or sink of the sub-tournament on
/// `u` and those neighbours, so no cycle through all of them is directed.
pub fn pigeonhole_witness(family: &OrientationFamily, k: usize) -> Result<Option<Witness>> {
    if k < 3 {
        return domain(format!("cycle length k must be >= 3, got {k}"));
    }
    let n = family.n();
    if k > n {
        return Ok(None);
    }
    for u in 0..n {
        let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for v in (0..n).filter(|&v| v != u) {
            let seq = local_sequence(family, u, v);
            let group = groups.entry(seq.clone()).or_default();
            group.push(v);
            if group.len() == k - 1 {
                let detail = seq
                    .chars()
                    .enumerate()
                    .map(|(r, c)| {
                        let how = if c == '0' { "away from" } else { "into" };
                        format!("round {r}: every listed edge points {how} {u}")
                    })
                    .collect();
                return Ok(Some(Witness::DuplicateLocalSequence {
                    center: u,
                    neighbors: group.clone(),
                    sequence: seq,
                    detail,
                }));
            }
        }
    }
    Ok(None)
}

/// Whether a partial family of rounds can still be extended by `remaining`
/// rounds without creating a pigeonhole witness: each group of neighbours
/// sharing a partial sequence must fit into `(k-2) 2^remaining` classes.
pub(crate) fn local_capacity_ok(rounds: &[&Tournament], n: usize, k: usize, remaining: usize) -> bool {
    let cap = ((k - 2) as u128) << remaining.min(100);
    for u in 0..n {
        let mut groups: BTreeMap<u64, u128> = BTreeMap::new();
        for v in (0..n).filter(|&v| v != u) {
            let key = rounds
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, t)| acc | (!t.beats(u, v) as u64) << i);
            let c = groups.entry(key).or_default();
            *c += 1;
            if *c > cap {
                return false;
            }
        }
    }
    true
}
