//! Callback-driven generators: strictly increasing compositions, cartesian
//! products, and the bottom-up pool of WTI trees built from them.

use alloc::vec;
use alloc::vec::Vec;

use crate::wti::{join_wti_trees, WtiTree};

/// Emits every strictly increasing sequence of positive integers whose sum
/// is `alpha`, whose last (largest) part is at most `beta` and whose length
/// is at most `gamma`, in lexicographic order.
///
/// The slice handed to `emit` is a view into a single reused buffer.
pub fn generate_increasing<F>(alpha: usize, beta: usize, gamma: usize, mut emit: F)
where
    F: FnMut(&[usize]),
{
    if alpha == 0 || gamma == 0 {
        return;
    }
    let mut buf = Vec::with_capacity(gamma.min(alpha));
    extend_increasing(&mut buf, 1, alpha, beta, gamma, &mut emit);
}

fn extend_increasing<F>(
    buf: &mut Vec<usize>,
    smallest: usize,
    remaining: usize,
    beta: usize,
    gamma: usize,
    emit: &mut F,
) where
    F: FnMut(&[usize]),
{
    if remaining == 0 {
        emit(buf);
        return;
    }
    if buf.len() == gamma {
        return;
    }
    for part in smallest..=beta.min(remaining) {
        let rest = remaining - part;
        // The next part must exceed this one.
        if rest != 0 && rest <= part {
            continue;
        }
        buf.push(part);
        extend_increasing(buf, part + 1, rest, beta, gamma, emit);
        buf.pop();
    }
}

/// Emits every tuple taking one element from each collection, last
/// coordinate varying fastest. Nothing is emitted if any collection is
/// empty; zero collections yield the single empty tuple.
pub fn cartesian_product<'a, T, F>(collections: &[&'a [T]], mut emit: F)
where
    F: FnMut(&[&'a T]),
{
    if collections.iter().any(|c| c.is_empty()) {
        return;
    }
    let q = collections.len();
    let mut index = vec![0usize; q];
    let mut tuple: Vec<&'a T> = collections.iter().map(|c| &c[0]).collect();
    loop {
        emit(&tuple);
        // Odometer step.
        let mut pos = q;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < collections[pos].len() {
                tuple[pos] = &collections[pos][index[pos]];
                break;
            }
            index[pos] = 0;
            tuple[pos] = &collections[pos][0];
        }
    }
}

/// All WTI trees up to some order whose vertices have a bounded number of
/// children, grouped by order.
#[derive(Clone, Debug, Default)]
pub struct WtiPool {
    /// Index 0 is always empty.
    by_order: Vec<Vec<WtiTree>>,
    failed_joins: u64,
}

impl WtiPool {
    /// Pool holding only the single-vertex tree.
    pub fn seed() -> Self {
        WtiPool {
            by_order: vec![Vec::new(), vec![WtiTree::single_vertex()]],
            failed_joins: 0,
        }
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len() - 1
    }

    /// Trees of order `k`; empty when `k` is out of range.
    pub fn order(&self, k: usize) -> &[WtiTree] {
        self.by_order.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &WtiTree> + '_ {
        self.by_order.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_order.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Joins attempted while building the pool that hit a repeated
    /// transmission and were discarded.
    pub fn failed_joins(&self) -> u64 {
        self.failed_joins
    }

    /// Appends the trees of the next order. The caller is responsible for
    /// them being exactly the WTI trees of order `max_order() + 1`.
    pub fn push_order(&mut self, trees: Vec<WtiTree>, failed_joins: u64) {
        debug_assert!(trees.iter().all(|t| t.order() == self.by_order.len()));
        self.by_order.push(trees);
        self.failed_joins += failed_joins;
    }

    /// Builds the trees of order `max_order() + 1` from the trees already
    /// present, with at most `max_children` children per vertex.
    pub fn extend_one_order(&mut self, max_children: usize) {
        let k = self.by_order.len();
        let mut trees = Vec::new();
        let mut failed = 0u64;
        generate_increasing(k - 1, k - 1, max_children, |sizes| {
            self.join_all(sizes, |outcome| match outcome {
                Some(tree) => trees.push(tree),
                None => failed += 1,
            });
        });
        self.push_order(trees, failed);
    }

    /// Joins every tuple of the cartesian product of the collections named
    /// by `sizes`, reporting each joined tree, or `None` for a failed join.
    pub fn join_all<F>(&self, sizes: &[usize], mut report: F)
    where
        F: FnMut(Option<WtiTree>),
    {
        let collections: Vec<&[WtiTree]> = sizes.iter().map(|&s| self.order(s)).collect();
        cartesian_product(&collections, |tuple| report(join_wti_trees(tuple).ok()));
    }
}

/// Builds every WTI tree of order at most `n` in which no vertex has more
/// than `h` children. Passing `h >= n - 1` leaves the child count unbounded.
pub fn generate_wti_trees(n: usize, h: usize) -> WtiPool {
    assert!(n >= 1 && h >= 1, "order and child bounds must be positive");
    let mut pool = WtiPool::seed();
    for _ in 2..=n {
        pool.extend_one_order(h);
    }
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    fn increasing(alpha: usize, beta: usize, gamma: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        generate_increasing(alpha, beta, gamma, |s| out.push(s.to_vec()));
        out
    }

    /// Every subset of `1..=alpha` summing to `alpha`, as a sorted sequence.
    fn subsets_summing_to(alpha: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << alpha) {
            let sum: usize = (1..=alpha).filter(|i| mask & (1 << (i - 1)) != 0).sum();
            if sum == alpha {
                out.push((1..=alpha).filter(|i| mask & (1 << (i - 1)) != 0).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn increasing_examples() {
        assert_eq!(increasing(6, 3, 3), [vec![1, 2, 3]]);
        assert_eq!(increasing(1, 1, 1), [vec![1]]);
        assert_eq!(increasing(5, 5, 2), [vec![1, 4], vec![2, 3], vec![5]]);
        assert!(increasing(4, 1, 4).is_empty());
    }

    #[test]
    fn increasing_matches_subset_filter() {
        for alpha in 1..=25 {
            let all = subsets_summing_to(alpha);
            for beta in 1..=25 {
                for gamma in 1..=8 {
                    let expected: Vec<Vec<usize>> = all
                        .iter()
                        .filter(|s| *s.last().unwrap() <= beta && s.len() <= gamma)
                        .cloned()
                        .collect();
                    assert_eq!(
                        increasing(alpha, beta, gamma),
                        expected,
                        "alpha={alpha} beta={beta} gamma={gamma}"
                    );
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let mut out = Vec::new();
        cartesian_product(&[&['a', 'b'][..], &['c']], |t| out.push([*t[0], *t[1]]));
        assert_eq!(out, [['a', 'c'], ['b', 'c']]);

        let mut calls = 0;
        cartesian_product(&[&[][..], &['c']], |_: &[&char]| calls += 1);
        assert_eq!(calls, 0);

        let mut out = Vec::new();
        cartesian_product(&[&['x'][..], &['y'], &['z']], |t| out.push(t.to_vec()));
        assert_eq!(out, [vec![&'x', &'y', &'z']]);
    }

    #[test]
    fn product_is_mixed_radix() {
        let a = [0, 1, 2];
        let b = [0, 1];
        let mut out = Vec::new();
        cartesian_product(&[&a[..], &b], |t| out.push(*t[0] * 2 + *t[1]));
        assert_eq!(out, [0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn pool_small_examples() {
        let pool = generate_wti_trees(1, 1);
        assert_eq!(pool.len(), 1);
        assert_eq!(pool.order(1)[0].order(), 1);

        let pool = generate_wti_trees(3, 2);
        assert_eq!([1, 2, 3].map(|k| pool.order(k).len()), [1, 1, 1]);

        let pool = generate_wti_trees(4, 3);
        let parents: Vec<&[u8]> = pool.order(4).iter().map(|t| t.parents()).collect();
        // Root over a leaf and an edge from (1, 2), then the chain from (3).
        assert_eq!(parents, [&[0, 0, 0, 2][..], &[0, 0, 1, 2]]);
    }

    #[test]
    fn pool_trees_keep_invariants() {
        let pool = generate_wti_trees(11, 11);
        for t in pool.iter() {
            t.check_invariants().unwrap();
        }
        assert!(pool.failed_joins() > 0);
    }

    #[test]
    fn child_bound_is_respected() {
        let pool = generate_wti_trees(10, 2);
        for t in pool.iter() {
            assert!(t.child_counts().iter().all(|&c| c <= 2));
        }
    }
}
