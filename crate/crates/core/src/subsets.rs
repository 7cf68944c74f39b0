//! Binomial coefficients and lexicographic enumeration of fixed-size subsets.

use std::ops::ControlFlow;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Index of the unordered pair `{i, j}` (`i < j`) in the order
/// (0,1), (0,2), ..., (0,n-1), (1,2), ...
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Position of a sorted subset of `[n]` among all subsets of the same size in
/// lexicographic order.
pub fn lex_rank(n: usize, subset: &[usize]) -> u64 {
    let m = subset.len();
    let mut rank = 0u64;
    let mut next = 0;
    for (pos, &c) in subset.iter().enumerate() {
        for skipped in next..c {
            rank += binomial(n - skipped - 1, m - pos - 1);
        }
        next = c + 1;
    }
    rank
}

/// Advances `comb` to the next `k`-subset of `[n]` in lexicographic order.
/// Returns `false` once the last subset has been passed.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `visit` on every `k`-subset of `[n]` in lexicographic order, stopping
/// early when it breaks.
pub fn for_each_combination<B>(
    n: usize,
    k: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    if k > n {
        return None;
    }
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        if let ControlFlow::Break(b) = visit(&comb) {
            return Some(b);
        }
        if k == 0 || !next_combination(&mut comb, n) {
            return None;
        }
    }
}

/// All `k`-subsets of `[n]`, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination::<()>(n, k, |c| {
        out.push(c.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Calls `visit` on every permutation of `items` (Heap's algorithm order).
pub(crate) fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    fn heap(len: usize, items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if len <= 1 {
            visit(items);
            return;
        }
        for i in 0..len - 1 {
            heap(len - 1, items, visit);
            if len.is_multiple_of(2) {
                items.swap(i, len - 1);
            } else {
                items.swap(0, len - 1);
            }
        }
        heap(len - 1, items, visit);
    }
    let len = items.len();
    heap(len, items, visit);
}
