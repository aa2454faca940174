//! Weakly transmission irregular (WTI) rooted trees and the join procedure.
//!
//! A [`WtiTree`] is an ordered rooted tree in which no two vertices on the
//! same level share a transmission, and in which the children of every
//! vertex have strictly increasing subtree orders. Trees are only ever built
//! by [`join_wti_trees`], which puts a fresh root above one or more smaller
//! trees and derives every transmission of the result from the stored
//! transmissions of the parts, without touching distances directly.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Vertex label inside a single tree. The root is always `0`.
pub type Label = u8;

/// Sum of hop distances from a vertex to every other vertex of its tree.
pub type Transmission = u16;

/// Largest order representable with [`Label`]-sized vertex labels.
pub const MAX_ORDER: usize = Label::MAX as usize;

/// Upper bound on any transmission in a tree of the given order.
#[inline]
pub const fn max_transmission(order: usize) -> usize {
    order * order.saturating_sub(1) / 2
}

/// Compact, immutable record of a WTI tree.
///
/// Labels follow join order, so `parent(x) < x` for every non-root `x`, and
/// the level lists hold the transmissions of each level's vertices in
/// increasing label order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WtiTree {
    /// `parents[0]` is an unused sentinel (always 0).
    parents: Box<[Label]>,
    /// Level `i` occupies `transmissions[level_starts[i]..level_starts[i + 1]]`.
    level_starts: Box<[u8]>,
    transmissions: Box<[Transmission]>,
}

impl WtiTree {
    /// The unique tree of order 1.
    pub fn single_vertex() -> Self {
        WtiTree {
            parents: Box::new([0]),
            level_starts: Box::new([0, 1]),
            transmissions: Box::new([0]),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.parents.len()
    }

    /// Maximum level; zero for the single-vertex tree.
    #[inline]
    pub fn depth(&self) -> usize {
        self.level_starts.len() - 2
    }

    /// Number of levels, `depth() + 1`.
    #[inline]
    pub fn level_count(&self) -> usize {
        self.level_starts.len() - 1
    }

    /// Parent array indexed by label; entry 0 is a sentinel.
    #[inline]
    pub fn parents(&self) -> &[Label] {
        &self.parents
    }

    /// Transmissions of the vertices on level `i`, in increasing label order.
    #[inline]
    pub fn level(&self, i: usize) -> &[Transmission] {
        let start = self.level_starts[i] as usize;
        let end = self.level_starts[i + 1] as usize;
        &self.transmissions[start..end]
    }

    pub fn levels(&self) -> impl ExactSizeIterator<Item = &[Transmission]> + '_ {
        (0..self.level_count()).map(move |i| self.level(i))
    }

    /// All transmissions, level by level.
    #[inline]
    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    #[inline]
    pub fn root_transmission(&self) -> Transmission {
        self.transmissions[0]
    }

    /// Number of children of every vertex, indexed by label.
    pub fn child_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.order()];
        for &p in &self.parents[1..] {
            counts[p as usize] += 1;
        }
        counts
    }

    /// Order of the subtree hanging from every vertex, indexed by label.
    pub fn subtree_orders(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.order()];
        // Parents precede children, so a reverse sweep sees every subtree complete.
        for x in (1..self.order()).rev() {
            sizes[self.parents[x] as usize] += sizes[x];
        }
        sizes
    }

    /// Level of every vertex, recomputed from the parent array.
    pub fn vertex_levels(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.order()];
        for x in 1..self.order() {
            levels[x] = levels[self.parents[x] as usize] + 1;
        }
        levels
    }

    /// Revalidates every structural invariant of the record.
    ///
    /// Transmission values are only range-checked here; comparing them to
    /// real distance sums is the job of the oracle.
    pub fn check_invariants(&self) -> Result<(), InvariantError> {
        let n = self.order();
        if n == 0 || n > MAX_ORDER {
            return Err(InvariantError::OrderOutOfRange(n));
        }
        if self.transmissions.len() != n {
            return Err(InvariantError::LevelSizesMismatch);
        }
        for x in 1..n {
            if self.parents[x] as usize >= x {
                return Err(InvariantError::ParentNotBeforeChild(x));
            }
        }
        if self.level(0).len() != 1 {
            return Err(InvariantError::LevelSizesMismatch);
        }
        if self.level_starts.windows(2).any(|w| w[0] > w[1]) {
            return Err(InvariantError::LevelSizesMismatch);
        }

        let levels = self.vertex_levels();
        let mut per_level = vec![0usize; self.level_count()];
        for &l in &levels {
            match per_level.get_mut(l) {
                Some(c) => *c += 1,
                None => return Err(InvariantError::LevelSizesMismatch),
            }
        }
        for (i, &count) in per_level.iter().enumerate() {
            if count != self.level(i).len() || count == 0 {
                return Err(InvariantError::LevelSizesMismatch);
            }
        }

        let bound = max_transmission(n);
        for (i, values) in self.levels().enumerate() {
            if values.iter().any(|&t| t as usize > bound) {
                return Err(InvariantError::TransmissionOutOfRange(i));
            }
            let mut sorted = values.to_vec();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(InvariantError::DuplicateInLevel(i));
            }
        }

        let sizes = self.subtree_orders();
        let mut last_child_order = vec![0usize; n];
        for (&p, &size) in self.parents.iter().zip(&sizes).skip(1) {
            let p = p as usize;
            if size <= last_child_order[p] {
                return Err(InvariantError::NotUnbalanced(p));
            }
            last_child_order[p] = size;
        }
        Ok(())
    }
}

impl fmt::Debug for WtiTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<&[Transmission]> = self.levels().collect();
        f.debug_struct("WtiTree")
            .field("order", &self.order())
            .field("depth", &self.depth())
            .field("parents", &&self.parents[1..])
            .field("levels", &levels)
            .finish()
    }
}

/// Broken [`WtiTree`] invariant, as reported by [`WtiTree::check_invariants`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantError {
    OrderOutOfRange(usize),
    ParentNotBeforeChild(usize),
    LevelSizesMismatch,
    DuplicateInLevel(usize),
    TransmissionOutOfRange(usize),
    NotUnbalanced(usize),
}

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InvariantError::OrderOutOfRange(n) => write!(f, "order {n} out of range"),
            InvariantError::ParentNotBeforeChild(x) => {
                write!(f, "vertex {x} does not come after its parent")
            }
            InvariantError::LevelSizesMismatch => {
                f.write_str("level lists disagree with the parent array")
            }
            InvariantError::DuplicateInLevel(l) => write!(f, "level {l} repeats a transmission"),
            InvariantError::TransmissionOutOfRange(l) => {
                write!(f, "level {l} holds an impossible transmission")
            }
            InvariantError::NotUnbalanced(v) => {
                write!(
                    f,
                    "children of vertex {v} are not in strictly increasing order"
                )
            }
        }
    }
}

impl core::error::Error for InvariantError {}

/// A join produced two equal transmissions on one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DuplicateTransmission {
    pub level: usize,
}

impl fmt::Display for DuplicateTransmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} of the joined tree repeats a transmission",
            self.level
        )
    }
}

impl core::error::Error for DuplicateTransmission {}

/// Result of [`join_wti_trees`]: the joined tree, or the first offending level.
pub type JoinOutcome = Result<WtiTree, DuplicateTransmission>;

/// Transmission of a new root placed above subtrees with the given root
/// transmissions, in a tree of `joined_order` vertices.
#[inline]
pub fn root_transmission_of_join(child_root_transmissions: &[u32], joined_order: u32) -> u32 {
    child_root_transmissions.iter().sum::<u32>() + joined_order - 1
}

/// Transmission of a root child in the joined tree. Crossing the edge moves
/// `child_subtree_order` vertices one step closer and everything else one
/// step further away.
#[inline]
pub fn child_transmission_step(
    root_transmission: u32,
    joined_order: u32,
    child_subtree_order: u32,
) -> u32 {
    debug_assert!(child_subtree_order >= 1 && child_subtree_order < joined_order);
    root_transmission + joined_order - 2 * child_subtree_order
}

/// Shifts the transmissions of one level of a child tree into the joined
/// tree. `delta_root` is how much the child's root transmission grew.
pub fn lift_level(
    child_level_values: &[Transmission],
    delta_root: u32,
    joined_order: u32,
    child_order: u32,
    level_in_child: u32,
) -> Vec<u32> {
    let shift = lift_shift(delta_root, joined_order, child_order, level_in_child);
    child_level_values
        .iter()
        .map(|&t| t as u32 + shift)
        .collect()
}

#[inline]
fn lift_shift(delta_root: u32, joined_order: u32, child_order: u32, level_in_child: u32) -> u32 {
    delta_root + (joined_order - child_order) * level_in_child
}

/// Places a new root above `children` and derives the joined tree's
/// transmissions level by level.
///
/// Children must have strictly increasing orders. Returns
/// [`DuplicateTransmission`] when some level of the result repeats a value.
///
/// # Panics
///
/// If `children` is empty or the joined order exceeds [`MAX_ORDER`].
pub fn join_wti_trees(children: &[&WtiTree]) -> JoinOutcome {
    assert!(!children.is_empty(), "a join needs at least one child");
    debug_assert!(
        children.windows(2).all(|w| w[0].order() < w[1].order()),
        "children must have strictly increasing orders"
    );

    let order: usize = 1 + children.iter().map(|c| c.order()).sum::<usize>();
    assert!(
        order <= MAX_ORDER,
        "joined order {order} exceeds {MAX_ORDER}"
    );
    let depth = 1 + children.iter().map(|c| c.depth()).max().unwrap_or(0);
    let n = order as u32;

    let root = children
        .iter()
        .map(|c| c.root_transmission() as u32)
        .sum::<u32>()
        + n
        - 1;

    // Level sizes of the joined tree.
    let mut level_starts = vec![0u8; depth + 2];
    level_starts[1] = 1;
    for l in 1..=depth {
        let len: usize = children
            .iter()
            .filter(|c| l - 1 < c.level_count())
            .map(|c| c.level(l - 1).len())
            .sum();
        level_starts[l + 1] = level_starts[l] + len as u8;
    }

    let mut transmissions = Vec::with_capacity(order);
    transmissions.push(root as Transmission);
    let deltas: Vec<u32> = children
        .iter()
        .map(|c| child_transmission_step(root, n, c.order() as u32) - c.root_transmission() as u32)
        .collect();
    for l in 1..=depth {
        let level_in_child = (l - 1) as u32;
        for (child, &delta) in children.iter().zip(&deltas) {
            if l > child.level_count() {
                continue;
            }
            let shift = lift_shift(delta, n, child.order() as u32, level_in_child);
            transmissions.extend(
                child
                    .level(l - 1)
                    .iter()
                    .map(|&t| (t as u32 + shift) as Transmission),
            );
        }
    }
    debug_assert_eq!(transmissions.len(), order);

    // Values inside one child's slice of a level stay distinct after the
    // shift, but slices of different children may collide.
    let mut seen = vec![0u64; max_transmission(order) / 64 + 1];
    for l in 1..=depth {
        let values = &transmissions[level_starts[l] as usize..level_starts[l + 1] as usize];
        if values.len() < 2 {
            continue;
        }
        let mut duplicate = false;
        for &t in values {
            let (word, bit) = (t as usize / 64, 1u64 << (t % 64));
            if seen[word] & bit != 0 {
                duplicate = true;
                break;
            }
            seen[word] |= bit;
        }
        for &t in values {
            seen[t as usize / 64] = 0;
        }
        if duplicate {
            return Err(DuplicateTransmission { level: l });
        }
    }

    let mut parents = vec![0 as Label; order];
    let mut offset = 1usize;
    for child in children {
        parents[offset] = 0;
        for (x, &p) in child.parents().iter().enumerate().skip(1) {
            parents[offset + x] = (p as usize + offset) as Label;
        }
        offset += child.order();
    }

    Ok(WtiTree {
        parents: parents.into_boxed_slice(),
        level_starts: level_starts.into_boxed_slice(),
        transmissions: transmissions.into_boxed_slice(),
    })
}
