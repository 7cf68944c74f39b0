//! Tournaments on `[n]` stored as one packed bit per unordered pair.
//!
//! Pairs are laid out in lexicographic order (0,1), (0,2), ..., (1,2), ...
//! and a set bit means the edge runs from the lower to the higher vertex.

use crate::error::{Error, Result};
use crate::subsets::{for_each_permutation, pair_index};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tournament {
    n: usize,
    bits: Vec<u64>,
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Tournament {
    /// Builds a tournament from `forward(i, j)`, queried once for every
    /// `i < j`; `true` orients the edge `i -> j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = vec![0u64; pair_count(n).div_ceil(64)];
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                if forward(i, j) {
                    bits[p / 64] |= 1 << (p % 64);
                }
                p += 1;
            }
        }
        Tournament { n, bits }
    }

    /// The tournament whose pair bits are the low `C(n,2)` bits of `code`.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(pair_count(n) <= 64, "code form needs C(n,2) <= 64");
        Tournament::from_fn(n, |i, j| code >> pair_index(n, i, j) & 1 == 1)
    }

    /// `i -> j` whenever `i < j`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    pub fn from_bit_string(n: usize, s: &str) -> Result<Self> {
        let expected = pair_count(n);
        if s.len() != expected {
            return Err(Error::BitLength {
                n,
                expected,
                found: s.chars().count(),
            });
        }
        let bytes = s.as_bytes();
        if let Some(bad) = bytes.iter().find(|b| **b != b'0' && **b != b'1') {
            return Err(Error::Malformed(format!(
                "bit string contains {:?}",
                *bad as char
            )));
        }
        let mut p = 0;
        Ok(Tournament::from_fn(n, |_, _| {
            p += 1;
            bytes[p - 1] == b'1'
        }))
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.pair_count())
            .map(|p| if self.bit(p) { '1' } else { '0' })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    #[inline]
    pub fn bit(&self, p: usize) -> bool {
        self.bits[p / 64] >> (p % 64) & 1 == 1
    }

    /// Whether the edge between `i` and `j` points from `i` to `j`.
    /// Vertices must be distinct and in range.
    #[inline]
    pub fn beats(&self, i: usize, j: usize) -> bool {
        debug_assert!(i != j && i < self.n && j < self.n);
        if i < j {
            self.bit(pair_index(self.n, i, j))
        } else {
            !self.bit(pair_index(self.n, j, i))
        }
    }

    /// The edge `{i, j}` as an ordered `(source, target)` pair.
    pub fn direction(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::SelfPair(i));
        }
        Ok(if self.beats(i, j) { (i, j) } else { (j, i) })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Every edge flipped.
    pub fn reversed(&self) -> Self {
        Tournament::from_fn(self.n, |i, j| !self.beats(i, j))
    }

    /// Sub-tournament on `subset`, with vertices relabelled by their rank in
    /// the subset.
    pub fn induced(&self, subset: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Duplicate(w[0]));
            }
        }
        self.check_vertex(*sorted.last().unwrap())?;
        Ok(Tournament::from_fn(sorted.len(), |a, b| {
            self.beats(sorted[a], sorted[b])
        }))
    }

    /// Out-degree of every vertex.
    pub fn scores(&self) -> Vec<usize> {
        let mut scores = vec![0; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.beats(i, j) {
                    scores[i] += 1;
                } else {
                    scores[j] += 1;
                }
            }
        }
        scores
    }

    /// Reachability in both directions from vertex 0.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        #[allow(clippy::needless_range_loop)]
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0];
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = stack.pop() {
                for w in 0..self.n {
                    if w != v && !seen[w] && self.beats(v, w) == forward {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count == self.n
        };
        reach(true) && reach(false)
    }

    /// Whether some ordering of all vertices is a directed cycle.
    ///
    /// A tournament on at least three vertices is Hamiltonian exactly when it
    /// is strongly connected, so this is a linear-size reachability test.
    pub fn has_hamiltonian_cycle(&self) -> Result<bool> {
        if self.n < 3 {
            return Err(Error::Domain(format!(
                "Hamiltonian cycle needs n >= 3, got {}",
                self.n
            )));
        }
        Ok(self.is_strongly_connected())
    }

    /// Brute-force counterpart of [`Tournament::has_hamiltonian_cycle`]:
    /// tries every cyclic ordering starting at vertex 0.
    pub fn has_hamiltonian_cycle_exhaustive(&self) -> Result<bool> {
        if self.n < 3 {
            return Err(Error::Domain(format!(
                "Hamiltonian cycle needs n >= 3, got {}",
                self.n
            )));
        }
        let mut rest: Vec<usize> = (1..self.n).collect();
        let mut found = false;
        for_each_permutation(&mut rest, &mut |tail| {
            if found {
                return;
            }
            let mut prev = 0;
            for &v in tail {
                if !self.beats(prev, v) {
                    return;
                }
                prev = v;
            }
            found = self.beats(prev, 0);
        });
        Ok(found)
    }

    /// Whether the sub-tournament on `vertices` is strongly connected, using
    /// Landau's score criterion: with scores sorted ascending, every proper
    /// prefix of length `j` must sum to more than `C(j,2)`.
    pub fn is_strong_on(&self, vertices: &[usize]) -> bool {
        let k = vertices.len();
        let mut scores: Vec<usize> = vec![0; k];
        for a in 0..k {
            for b in a + 1..k {
                if self.beats(vertices[a], vertices[b]) {
                    scores[a] += 1;
                } else {
                    scores[b] += 1;
                }
            }
        }
        scores.sort_unstable();
        let mut sum = 0;
        for (j, s) in scores[..k.saturating_sub(1)].iter().enumerate() {
            sum += s;
            let len = j + 1;
            if sum == len * (len - 1) / 2 {
                return false;
            }
        }
        true
    }
}
