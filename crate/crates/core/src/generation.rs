//! Two-phase driver that reports every TI tree exactly once, in its
//! canonical representation.
//!
//! Phase one builds the WTI pool up to half the target order, reports the
//! TI trees found there and keeps the degree-admissible trees as subtrees.
//! Phase two assembles every larger tree directly around its
//! minimum-transmission vertex: in a TI tree of order `k` that vertex has at
//! least three components hanging off it, each of order below `k / 2`.
//!
//! Phase two never needs per-level checks. For a subtree of order `s` under
//! a root of a tree of order `k`, a vertex at depth `l` inside the subtree
//! (with transmission `t` there, subtree root transmission `t0`) ends up with
//!
//! ```text
//! Tr(u) - Tr(root) = t - t0 + (k - 2s) + (k - s) l
//! ```
//!
//! which depends on nothing else in the tuple. These offsets are positive
//! whenever every `s < k / 2`, so a tuple forms a TI tree iff the offset sets
//! of its members are pairwise disjoint and each free of repeats. Offset sets
//! are precomputed as bitsets per target order ([`CandidateTable`]), and
//! tuples are searched depth first, abandoning a prefix at the first overlap.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::enumeration::{cartesian_product, generate_increasing, generate_wti_trees, WtiPool};
use crate::wti::{join_wti_trees, max_transmission, WtiTree, MAX_ORDER};

/// Largest vertex degree and number of root children of a tree.
pub fn get_max_degree(tree: &WtiTree) -> (usize, usize) {
    let counts = tree.child_counts();
    let root_children = counts[0];
    let max_degree = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| if v == 0 { c } else { c + 1 })
        .max()
        .unwrap_or(0);
    (max_degree, root_children)
}

/// Whether `tree` is the canonical representation of a TI tree: every
/// transmission distinct, the root's the smallest.
pub fn is_ti_tree(tree: &WtiTree) -> bool {
    let root = tree.root_transmission();
    let mut seen = vec![0u64; max_transmission(tree.order()) / 64 + 1];
    for &t in tree.transmissions() {
        let (word, bit) = (t as usize / 64, 1u64 << (t % 64));
        if seen[word] & bit != 0 {
            return false;
        }
        seen[word] |= bit;
    }
    tree.transmissions()[1..].iter().all(|&t| t > root)
}

/// Number of TI trees reported per order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TiCensus {
    counts: Vec<u64>,
}

impl TiCensus {
    pub fn new(max_order: usize) -> Self {
        TiCensus {
            counts: vec![0; max_order + 1],
        }
    }

    pub fn max_order(&self) -> usize {
        self.counts.len() - 1
    }

    /// Count for order `k`; zero outside the census range.
    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn record(&mut self, k: usize) {
        self.add(k, 1);
    }

    pub fn add(&mut self, k: usize, amount: u64) {
        self.counts[k] += amount;
    }

    pub fn merge(&mut self, other: &TiCensus) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(order, count)` for every order `1..=max_order()`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().copied().enumerate().skip(1)
    }

    /// Counts for orders `1..=max_order()`.
    pub fn counts(&self) -> &[u64] {
        &self.counts[1..]
    }
}

/// Degree-admissible WTI trees kept as phase-two building blocks: maximum
/// degree at most `m` and fewer than `m` root children, so that hanging
/// them under a new root cannot push any degree past `m`.
#[derive(Clone, Debug, Default)]
pub struct SubtreePool {
    /// Index 0 is always empty.
    by_order: Vec<Vec<WtiTree>>,
}

impl SubtreePool {
    pub fn order(&self, k: usize) -> &[WtiTree] {
        self.by_order.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.by_order.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &WtiTree> + '_ {
        self.by_order.iter().flatten()
    }
}

/// Rejected generation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamError {
    ZeroOrder,
    OrderTooLarge(usize),
    ZeroDegree,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParamError::ZeroOrder => f.write_str("maximum order must be at least 1"),
            ParamError::OrderTooLarge(n) => {
                write!(f, "maximum order {n} exceeds the supported {MAX_ORDER}")
            }
            ParamError::ZeroDegree => f.write_str("maximum degree must be at least 1"),
        }
    }
}

impl core::error::Error for ParamError {}

/// Validated `(n, m)` pair plus the bounds both phases derive from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerationPlan {
    max_order: usize,
    max_degree: usize,
}

impl GenerationPlan {
    /// `max_degree: None` means unbounded, which is the same as `n - 1`.
    pub fn new(max_order: usize, max_degree: Option<usize>) -> Result<Self, ParamError> {
        if max_order == 0 {
            return Err(ParamError::ZeroOrder);
        }
        if max_order > MAX_ORDER {
            return Err(ParamError::OrderTooLarge(max_order));
        }
        let max_degree = match max_degree {
            Some(0) => return Err(ParamError::ZeroDegree),
            Some(m) => m.min(max_order - 1).max(1),
            None => (max_order - 1).max(1),
        };
        Ok(GenerationPlan {
            max_order,
            max_degree,
        })
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Effective degree cap, clamped to `n - 1` (and at least 1).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Largest order built in phase one. Never below 1, so that `n = 1`
    /// still sees the single-vertex tree.
    pub fn phase_one_cap(&self) -> usize {
        (self.max_order / 2).max(1)
    }

    /// Orders assembled in phase two.
    pub fn phase_two_orders(&self) -> Range<usize> {
        self.phase_one_cap() + 1..self.max_order + 1
    }

    /// Largest subtree order allowed around the centre of a tree of order
    /// `k`: the largest integer strictly below `k / 2`.
    pub fn subtree_cap(k: usize) -> usize {
        k.div_ceil(2) - 1
    }

    /// Emits the subtree-order sequences that phase two tries for order `k`.
    pub fn phase_two_sequences<F: FnMut(&[usize])>(&self, k: usize, emit: F) {
        generate_increasing(k - 1, Self::subtree_cap(k), self.max_degree, emit);
    }

    /// Phase one from scratch: builds the WTI pool and filters it.
    pub fn phase_one<F: FnMut(&WtiTree)>(&self, census: &mut TiCensus, func: F) -> SubtreePool {
        let pool = generate_wti_trees(self.phase_one_cap(), self.max_degree);
        self.phase_one_from_pool(&pool, census, func)
    }

    /// Phase one over an already built WTI pool (orders up to
    /// [`phase_one_cap`](Self::phase_one_cap), children bounded by `m`).
    /// TI trees are reported in increasing order.
    pub fn phase_one_from_pool<F: FnMut(&WtiTree)>(
        &self,
        pool: &WtiPool,
        census: &mut TiCensus,
        mut func: F,
    ) -> SubtreePool {
        let m = self.max_degree;
        let mut subtrees = SubtreePool {
            by_order: vec![Vec::new()],
        };
        for k in 1..=self.phase_one_cap() {
            let mut kept = Vec::new();
            for tree in pool.order(k) {
                let (max_degree, root_children) = get_max_degree(tree);
                if max_degree > m {
                    continue;
                }
                if is_ti_tree(tree) {
                    census.record(k);
                    func(tree);
                }
                if root_children < m {
                    kept.push(tree.clone());
                }
            }
            subtrees.by_order.push(kept);
        }
        subtrees
    }
}

/// Phase-two lookup structure for one target order `k`: for every subtree
/// order `s < k / 2`, the admissible subtrees together with the bitset of
/// transmission offsets each would occupy in a tree of order `k`.
pub struct CandidateTable<'p> {
    order: usize,
    words: usize,
    columns: Vec<Column<'p>>,
}

struct Column<'p> {
    trees: Vec<&'p WtiTree>,
    /// `words` bitset words per tree.
    offsets: Vec<u64>,
}

impl<'p> CandidateTable<'p> {
    pub fn new(subtrees: &'p SubtreePool, k: usize) -> Self {
        let cap = GenerationPlan::subtree_cap(k);
        let words = max_transmission(k) / 64 + 1;
        let mut columns = Vec::with_capacity(cap + 1);
        columns.push(Column {
            trees: Vec::new(),
            offsets: Vec::new(),
        });
        let mut scratch = vec![0u64; words];
        for s in 1..=cap {
            let mut column = Column {
                trees: Vec::new(),
                offsets: Vec::new(),
            };
            for tree in subtrees.order(s) {
                if offset_set(tree, k, &mut scratch) {
                    column.trees.push(tree);
                    column.offsets.extend_from_slice(&scratch);
                }
            }
            columns.push(column);
        }
        CandidateTable {
            order: k,
            words,
            columns,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of usable subtrees of order `s`.
    pub fn column_len(&self, s: usize) -> usize {
        self.columns.get(s).map_or(0, |c| c.trees.len())
    }

    /// Tries every tuple over the columns named by `sizes` (strictly
    /// increasing), with the largest subtree restricted to indices in
    /// `outer`. Each TI tree found is joined and passed to `emit`; returns
    /// how many were found.
    ///
    /// Tuples are visited with the largest subtree outermost.
    pub fn search<F: FnMut(&WtiTree)>(
        &self,
        sizes: &[usize],
        outer: Range<usize>,
        mut emit: F,
    ) -> u64 {
        debug_assert!(sizes.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(sizes.iter().sum::<usize>() + 1, self.order);
        let q = sizes.len();
        if q == 0 || sizes.iter().any(|&s| self.column_len(s) == 0) {
            return 0;
        }
        let mut state = SearchState {
            occupied: vec![0u64; (q + 1) * self.words],
            chosen: Vec::with_capacity(q),
            found: 0,
        };
        let last = self.column_len(sizes[q - 1]);
        let outer = outer.start.min(last)..outer.end.min(last);
        self.descend(sizes, q - 1, Some(outer), &mut state, &mut emit);
        state.found
    }

    fn descend<F: FnMut(&WtiTree)>(
        &self,
        sizes: &[usize],
        coord: usize,
        restrict: Option<Range<usize>>,
        state: &mut SearchState<'p>,
        emit: &mut F,
    ) {
        let w = self.words;
        let column = &self.columns[sizes[coord]];
        let range = restrict.unwrap_or(0..column.trees.len());
        // Slot `depth` holds offsets used by the subtrees picked so far.
        let depth = sizes.len() - 1 - coord;
        for i in range {
            let candidate = &column.offsets[i * w..(i + 1) * w];
            let (used, next) = state.occupied[depth * w..(depth + 2) * w].split_at_mut(w);
            if used.iter().zip(candidate).any(|(a, b)| a & b != 0) {
                continue;
            }
            for ((n, a), b) in next.iter_mut().zip(used.iter()).zip(candidate) {
                *n = a | b;
            }
            state.chosen.push(column.trees[i]);
            if coord == 0 {
                // `chosen` runs from the largest subtree down.
                let mut children = state.chosen.clone();
                children.reverse();
                let tree = join_wti_trees(&children)
                    .expect("disjoint offsets imply distinct transmissions");
                debug_assert!(is_ti_tree(&tree));
                state.found += 1;
                emit(&tree);
            } else {
                self.descend(sizes, coord - 1, None, state, emit);
            }
            state.chosen.pop();
        }
    }
}

struct SearchState<'p> {
    occupied: Vec<u64>,
    chosen: Vec<&'p WtiTree>,
    found: u64,
}

/// Fills `out` with the transmission offsets the vertices of `tree` would
/// have relative to the root of a tree of order `k` they hang under.
/// Returns false if two of them coincide.
fn offset_set(tree: &WtiTree, k: usize, out: &mut [u64]) -> bool {
    out.fill(0);
    let s = tree.order() as i64;
    let k = k as i64;
    let base = tree.root_transmission() as i64;
    for (level, values) in tree.levels().enumerate() {
        let shift = (k - 2 * s) + (k - s) * level as i64 - base;
        for &t in values {
            let offset = t as i64 + shift;
            debug_assert!(offset >= 1, "subtree does not hang off a centroid");
            let offset = offset as usize;
            let (word, bit) = (offset / 64, 1u64 << (offset % 64));
            if out[word] & bit != 0 {
                return false;
            }
            out[word] |= bit;
        }
    }
    true
}

/// Reports every TI tree of order at most `n` and maximum degree at most
/// `max_degree` (`None` for unbounded) to `func`, single-threaded and in a
/// fixed order: phase-one trees by increasing order, then phase-two trees
/// by order, subtree-order sequence and tuple.
pub fn generate_ti_trees<F>(
    n: usize,
    max_degree: Option<usize>,
    mut func: F,
) -> Result<TiCensus, ParamError>
where
    F: FnMut(&WtiTree),
{
    let plan = GenerationPlan::new(n, max_degree)?;
    let mut census = TiCensus::new(n);
    let subtrees = plan.phase_one(&mut census, &mut func);
    for k in plan.phase_two_orders() {
        let table = CandidateTable::new(&subtrees, k);
        let mut found = 0;
        plan.phase_two_sequences(k, |sizes| {
            found += table.search(sizes, 0..usize::MAX, &mut func);
        });
        census.add(k, found);
    }
    Ok(census)
}

/// Same output as [`generate_ti_trees`] (as a set), computed the long way
/// round: every tuple of the cartesian product is joined and the result
/// checked with [`is_ti_tree`]. Tuples follow mixed-radix order.
pub fn generate_ti_trees_by_product<F>(
    n: usize,
    max_degree: Option<usize>,
    mut func: F,
) -> Result<TiCensus, ParamError>
where
    F: FnMut(&WtiTree),
{
    let plan = GenerationPlan::new(n, max_degree)?;
    let mut census = TiCensus::new(n);
    let subtrees = plan.phase_one(&mut census, &mut func);
    for k in plan.phase_two_orders() {
        plan.phase_two_sequences(k, |sizes| {
            let collections: Vec<&[WtiTree]> = sizes.iter().map(|&s| subtrees.order(s)).collect();
            cartesian_product(&collections, |tuple| {
                if let Ok(tree) = join_wti_trees(tuple) {
                    if is_ti_tree(&tree) {
                        census.record(k);
                        func(&tree);
                    }
                }
            });
        });
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_rooted_at_end(order: usize) -> WtiTree {
        let mut t = WtiTree::single_vertex();
        for _ in 1..order {
            t = join_wti_trees(&[&t]).unwrap();
        }
        t
    }

    fn spider(legs: &[usize]) -> WtiTree {
        let parts: Vec<WtiTree> = legs.iter().map(|&l| path_rooted_at_end(l)).collect();
        let refs: Vec<&WtiTree> = parts.iter().collect();
        join_wti_trees(&refs).unwrap()
    }

    fn census(n: usize, m: Option<usize>) -> Vec<u64> {
        generate_ti_trees(n, m, |_| {}).unwrap().counts().to_vec()
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(get_max_degree(&spider(&[1, 2, 3])), (3, 3));
        assert_eq!(get_max_degree(&path_rooted_at_end(4)), (2, 1));
        assert_eq!(get_max_degree(&WtiTree::single_vertex()), (0, 0));
    }

    #[test]
    fn ti_examples() {
        assert!(is_ti_tree(&spider(&[1, 2, 3])));
        assert!(!is_ti_tree(&spider(&[1, 2, 4])));
        assert!(is_ti_tree(&WtiTree::single_vertex()));
        assert!(!is_ti_tree(&path_rooted_at_end(2)));
    }

    #[test]
    fn census_through_eleven() {
        assert_eq!(census(11, None), [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 6]);
    }

    #[test]
    fn census_through_fifteen() {
        let c = census(15, None);
        assert_eq!(c[12..], [24, 1, 82]);
    }

    #[test]
    fn path_degree_cap_leaves_only_trivial_tree() {
        assert_eq!(census(7, Some(2)), [1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn single_order_runs() {
        assert_eq!(census(1, None), [1]);
        assert_eq!(census(2, None), [1, 0]);
        assert_eq!(census(3, Some(2)), [1, 0, 0]);
    }

    #[test]
    fn parameters_are_validated() {
        assert_eq!(GenerationPlan::new(0, None), Err(ParamError::ZeroOrder));
        assert_eq!(
            GenerationPlan::new(300, None),
            Err(ParamError::OrderTooLarge(300))
        );
        assert_eq!(GenerationPlan::new(5, Some(0)), Err(ParamError::ZeroDegree));
        assert_eq!(GenerationPlan::new(5, Some(99)).unwrap().max_degree(), 4);
    }

    #[test]
    fn subtree_cap_is_strictly_below_half() {
        for k in 2..60 {
            let cap = GenerationPlan::subtree_cap(k);
            assert!(2 * cap < k && 2 * (cap + 1) >= k, "k={k}");
        }
    }

    #[test]
    fn phase_two_sequences_have_at_least_three_parts() {
        let plan = GenerationPlan::new(40, None).unwrap();
        for k in plan.phase_two_orders() {
            plan.phase_two_sequences(k, |s| assert!(s.len() >= 3, "k={k} {s:?}"));
        }
    }

    #[test]
    fn pruned_search_matches_product_route() {
        for n in [12, 16, 19] {
            for m in [Some(3), Some(4), None] {
                let mut fast = Vec::new();
                let c1 = generate_ti_trees(n, m, |t| fast.push(t.clone())).unwrap();
                let mut slow = Vec::new();
                let c2 = generate_ti_trees_by_product(n, m, |t| slow.push(t.clone())).unwrap();
                assert_eq!(c1, c2);
                fast.sort_by(|a, b| a.parents().cmp(b.parents()));
                slow.sort_by(|a, b| a.parents().cmp(b.parents()));
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn emitted_trees_are_canonical() {
        generate_ti_trees(17, None, |t| {
            t.check_invariants().unwrap();
            assert!(is_ti_tree(t));
        })
        .unwrap();
    }

    #[test]
    fn outer_range_partitions_the_search() {
        let plan = GenerationPlan::new(19, None).unwrap();
        let mut census = TiCensus::new(19);
        let subtrees = plan.phase_one(&mut census, |_| {});
        let table = CandidateTable::new(&subtrees, 19);
        plan.phase_two_sequences(19, |sizes| {
            let outer = table.column_len(*sizes.last().unwrap());
            let whole = table.search(sizes, 0..outer, |_| {});
            let split: u64 = (0..outer)
                .map(|i| table.search(sizes, i..i + 1, |_| {}))
                .sum();
            assert_eq!(whole, split);
        });
    }
}
