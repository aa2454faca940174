//! Brute-force reference implementation used to check the generator.
//!
//! Nothing in here uses the join arithmetic: trees come from level-sequence
//! enumeration (or Prüfer sequences), and transmissions from one
//! breadth-first search per vertex.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest order the oracle agrees to enumerate.
pub const ORACLE_MAX_ORDER: usize = 22;

/// Largest order for the Prüfer route, which walks all `n^(n-2)` labeled trees.
pub const PRUFER_MAX_ORDER: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Requested order is zero or above the guard for the chosen route.
    OrderOutOfRange { order: usize, limit: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OracleError::OrderOutOfRange { order, limit } => {
                write!(f, "oracle order {order} outside 1..={limit}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

/// Unrooted tree stored as adjacency lists over labels `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyTree {
    adj: Vec<Vec<usize>>,
}

impl AdjacencyTree {
    /// Builds a tree from `n - 1` edges. Panics if the edges do not form a
    /// spanning tree of `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        assert!(
            n >= 1 && edges.len() == n - 1,
            "a tree on {n} vertices has {} edges",
            n - 1
        );
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "bad edge ({u}, {v})");
            adj[u].push(v);
            adj[v].push(u);
        }
        let tree = AdjacencyTree { adj };
        assert!(
            tree.distances_from(0).iter().all(|&d| d != usize::MAX),
            "edges do not connect all vertices"
        );
        tree
    }

    /// Builds a tree from a parent array whose entry 0 is ignored.
    pub fn from_parents<P: Copy + Into<usize>>(parents: &[P]) -> Self {
        let edges: Vec<(usize, usize)> =
            (1..parents.len()).map(|x| (parents[x].into(), x)).collect();
        Self::from_edges(parents.len(), &edges)
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(smaller, larger)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = (0..self.order())
            .flat_map(|u| {
                self.adj[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Hop distances from `source`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Transmission of every vertex, one BFS per vertex.
pub fn transmissions_bfs(tree: &AdjacencyTree) -> Vec<u32> {
    (0..tree.order())
        .map(|v| tree.distances_from(v).iter().map(|&d| d as u32).sum())
        .collect()
}

/// Whether all transmissions are pairwise distinct.
pub fn is_ti_graph(tree: &AdjacencyTree) -> bool {
    let mut values = transmissions_bfs(tree);
    values.sort_unstable();
    values.windows(2).all(|w| w[0] != w[1])
}

/// Isomorphism-invariant encoding of a tree as balanced parentheses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(core::str::from_utf8(&self.0).unwrap_or("<invalid>"))
    }
}

/// Encoding of `tree` rooted at `root`, children sorted by
/// (subtree order, encoding).
pub fn rooted_canonical_form(tree: &AdjacencyTree, root: usize) -> CanonicalForm {
    CanonicalForm(encode_rooted(tree, root, usize::MAX).1)
}

fn encode_rooted(tree: &AdjacencyTree, v: usize, parent: usize) -> (usize, Vec<u8>) {
    let mut children: Vec<(usize, Vec<u8>)> = tree
        .neighbors(v)
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| encode_rooted(tree, u, v))
        .collect();
    children.sort_unstable();
    let size = 1 + children.iter().map(|c| c.0).sum::<usize>();
    let mut out = Vec::with_capacity(2 * size);
    out.push(b'(');
    for (_, enc) in children {
        out.extend_from_slice(&enc);
    }
    out.push(b')');
    (size, out)
}

/// Free-tree canonical form: the smallest rooted encoding over the
/// minimum-transmission vertices (one, or two adjacent ones).
pub fn canonical_form(tree: &AdjacencyTree) -> CanonicalForm {
    let tr = transmissions_bfs(tree);
    let min = *tr.iter().min().expect("trees are nonempty");
    (0..tree.order())
        .filter(|&v| tr[v] == min)
        .map(|v| rooted_canonical_form(tree, v))
        .min()
        .unwrap()
}

/// Emits every free tree of order `n` exactly once up to isomorphism, by
/// stepping through canonical level sequences.
pub fn enumerate_free_trees<F>(n: usize, mut emit: F) -> Result<(), OracleError>
where
    F: FnMut(&AdjacencyTree),
{
    if n == 0 || n > ORACLE_MAX_ORDER {
        return Err(OracleError::OrderOutOfRange {
            order: n,
            limit: ORACLE_MAX_ORDER,
        });
    }
    if n == 1 {
        emit(&AdjacencyTree {
            adj: vec![Vec::new()],
        });
        return Ok(());
    }
    // Initial sequence: a path of length n/2 from the root followed by one
    // of length (n-1)/2.
    let mut layout: Vec<usize> = (0..=n / 2).chain(1..n.div_ceil(2)).collect();
    loop {
        layout = next_free_tree(layout);
        emit(&tree_from_levels(&layout));
        match next_rooted_tree(&layout, None) {
            Some(next) => layout = next,
            None => return Ok(()),
        }
    }
}

/// Successor of a rooted level sequence, changing positions `p..`.
fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut result = pred.to_vec();
    for i in p..result.len() {
        result[i] = result[i - p + q];
    }
    Some(result)
}

/// Splits a level sequence at the second child of the root into the first
/// subtree (levels shifted up) and the rest.
fn split_tree(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let second = layout
        .iter()
        .enumerate()
        .skip(2)
        .find(|&(_, &l)| l == 1)
        .map_or(layout.len(), |(i, _)| i);
    let left = layout[1..second].iter().map(|&l| l - 1).collect();
    let rest = core::iter::once(0)
        .chain(layout[second..].iter().copied())
        .collect();
    (left, rest)
}

/// Returns `candidate` if it is the canonical (centroid-rooted) sequence
/// of a free tree, otherwise the next sequence that is.
fn next_free_tree(candidate: Vec<usize>) -> Vec<usize> {
    let (left, rest) = split_tree(&candidate);
    let left_height = left.iter().copied().max().unwrap_or(0);
    let rest_height = rest.iter().copied().max().unwrap_or(0);
    let mut valid = rest_height >= left_height;
    if valid
        && rest_height == left_height
        && (left.len() > rest.len() || (left.len() == rest.len() && left > rest))
    {
        valid = false;
    }
    if valid {
        return candidate;
    }
    let p = left.len();
    let mut next = next_rooted_tree(&candidate, Some(p)).expect("p is never the root");
    if candidate[p] > 2 {
        let (new_left, _) = split_tree(&next);
        let new_left_height = new_left.iter().copied().max().unwrap_or(0);
        let len = next.len();
        let suffix = new_left_height + 1;
        for (slot, level) in next[len - suffix..].iter_mut().zip(1..) {
            *slot = level;
        }
    }
    next
}

fn tree_from_levels(levels: &[usize]) -> AdjacencyTree {
    let mut edges = Vec::with_capacity(levels.len() - 1);
    // Most recent vertex seen on each level.
    let mut last_on_level = vec![0usize; levels.len()];
    for (v, &l) in levels.iter().enumerate() {
        if l > 0 {
            edges.push((last_on_level[l - 1], v));
        }
        last_on_level[l] = v;
    }
    AdjacencyTree::from_edges(levels.len(), &edges)
}

/// Canonical forms of all free trees of order `n`, found by decoding every
/// Prüfer sequence and deduplicating.
pub fn free_trees_by_prufer(n: usize) -> Result<BTreeSet<CanonicalForm>, OracleError> {
    if n == 0 || n > PRUFER_MAX_ORDER {
        return Err(OracleError::OrderOutOfRange {
            order: n,
            limit: PRUFER_MAX_ORDER,
        });
    }
    let mut forms = BTreeSet::new();
    if n <= 2 {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        forms.insert(canonical_form(&AdjacencyTree::from_edges(n, &edges)));
        return Ok(forms);
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        forms.insert(canonical_form(&prufer_decode(n, &seq)));
        // Next sequence in base n.
        let mut i = seq.len();
        loop {
            if i == 0 {
                return Ok(forms);
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
        }
    }
}

fn prufer_decode(n: usize, seq: &[usize]) -> AdjacencyTree {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    AdjacencyTree::from_edges(n, &edges)
}

/// Canonical forms of the TI trees of order `n` with maximum degree at
/// most `max_degree` (`None` for unbounded), sorted.
pub fn ti_free_tree_forms(
    n: usize,
    max_degree: Option<usize>,
) -> Result<Vec<CanonicalForm>, OracleError> {
    let mut forms = Vec::new();
    enumerate_free_trees(n, |t| {
        if max_degree.is_none_or(|m| t.max_degree() <= m) && is_ti_graph(t) {
            forms.push(canonical_form(t));
        }
    })?;
    forms.sort_unstable();
    Ok(forms)
}

/// Rooted canonical forms of every rooted tree of order `n` that can be
/// ordered as an unbalanced tree (children of each vertex have pairwise
/// distinct subtree orders), has every level free of repeated
/// transmissions, and gives no vertex more than `max_children` children.
pub fn unbalanced_wti_rooted_forms(
    n: usize,
    max_children: usize,
) -> Result<BTreeSet<CanonicalForm>, OracleError> {
    let mut forms = BTreeSet::new();
    enumerate_free_trees(n, |t| {
        let tr = transmissions_bfs(t);
        for root in 0..n {
            if rooted_is_unbalanced_wti(t, root, &tr, max_children) {
                forms.insert(rooted_canonical_form(t, root));
            }
        }
    })?;
    Ok(forms)
}

fn rooted_is_unbalanced_wti(
    t: &AdjacencyTree,
    root: usize,
    tr: &[u32],
    max_children: usize,
) -> bool {
    let dist = t.distances_from(root);
    // Subtree sizes: process vertices from deepest to shallowest.
    let mut by_depth: Vec<usize> = (0..t.order()).collect();
    by_depth.sort_unstable_by_key(|&v| core::cmp::Reverse(dist[v]));
    let mut size = vec![1usize; t.order()];
    for &v in &by_depth {
        for &u in t.neighbors(v) {
            if dist[u] == dist[v] + 1 {
                size[v] += size[u];
            }
        }
    }
    for v in 0..t.order() {
        let mut child_sizes: Vec<usize> = t
            .neighbors(v)
            .iter()
            .filter(|&&u| dist[u] == dist[v] + 1)
            .map(|&u| size[u])
            .collect();
        if child_sizes.len() > max_children {
            return false;
        }
        child_sizes.sort_unstable();
        if child_sizes.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
    }
    let mut per_level: Vec<(usize, u32)> = (0..t.order()).map(|v| (dist[v], tr[v])).collect();
    per_level.sort_unstable();
    per_level.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spider(legs: &[usize]) -> AdjacencyTree {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        AdjacencyTree::from_edges(next, &edges)
    }

    fn path(n: usize) -> AdjacencyTree {
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        AdjacencyTree::from_edges(n, &edges)
    }

    fn count_free_trees(n: usize) -> usize {
        let mut count = 0;
        enumerate_free_trees(n, |_| count += 1).unwrap();
        count
    }

    #[test]
    fn transmission_examples() {
        assert_eq!(transmissions_bfs(&path(3)), [3, 2, 3]);
        assert_eq!(transmissions_bfs(&path(1)), [0]);
        let mut spider_values = transmissions_bfs(&spider(&[1, 2, 3]));
        spider_values.sort_unstable();
        assert_eq!(spider_values, [10, 11, 13, 14, 15, 18, 19]);
    }

    #[test]
    fn ti_examples() {
        assert!(is_ti_graph(&spider(&[1, 2, 3])));
        assert!(!is_ti_graph(&path(3)));
        assert!(!is_ti_graph(&path(2)));
        assert!(is_ti_graph(&path(1)));
    }

    #[test]
    fn canonical_form_examples() {
        let a = path(4);
        let b = AdjacencyTree::from_edges(4, &[(2, 0), (0, 3), (3, 1)]);
        let star = AdjacencyTree::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&star));
    }

    #[test]
    fn free_tree_counts_small() {
        let counts: Vec<usize> = (1..=12).map(count_free_trees).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551]);
    }

    #[test]
    fn enumerated_trees_are_pairwise_non_isomorphic() {
        for n in 1..=11 {
            let mut forms = BTreeSet::new();
            let mut count = 0;
            enumerate_free_trees(n, |t| {
                assert_eq!(t.order(), n);
                forms.insert(canonical_form(t));
                count += 1;
            })
            .unwrap();
            assert_eq!(forms.len(), count, "n={n}");
        }
    }

    #[test]
    fn prufer_route_agrees_for_small_orders() {
        for n in 1..=8 {
            let mut forms = BTreeSet::new();
            enumerate_free_trees(n, |t| {
                forms.insert(canonical_form(t));
            })
            .unwrap();
            assert_eq!(free_trees_by_prufer(n).unwrap(), forms, "n={n}");
        }
    }

    #[test]
    fn guards_reject_large_orders() {
        assert!(enumerate_free_trees(30, |_| {}).is_err());
        assert!(enumerate_free_trees(0, |_| {}).is_err());
        assert!(free_trees_by_prufer(12).is_err());
    }

    #[test]
    fn ti_counts_small() {
        let counts: Vec<usize> = (1..=11)
            .map(|n| ti_free_tree_forms(n, None).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 6]);
    }

    #[test]
    fn unbalanced_wti_small_orders() {
        // Order 4: the chain rooted at an end and the path rooted at its
        // second vertex.
        assert_eq!(unbalanced_wti_rooted_forms(4, 4).unwrap().len(), 2);
        assert_eq!(unbalanced_wti_rooted_forms(3, 3).unwrap().len(), 1);
    }
}
