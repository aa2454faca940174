//! Isomorph-free generation of transmission-irregular (TI) trees.
//!
//! The transmission of a vertex is the sum of its distances to all other
//! vertices; a tree is TI when no two vertices share a transmission. Every
//! TI tree has a unique rooted form: rooted at its minimum-transmission
//! vertex, with the children of each vertex ordered by strictly increasing
//! subtree order. Such rooted forms are weakly transmission irregular
//! (no repeated transmission within a level), and so are all of their
//! subtrees, which is what lets [`generation`] build them bottom-up from
//! smaller WTI trees ([`wti`]) without ever producing an isomorphic copy.
//!
//! [`oracle`] is an independent brute-force checker.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod enumeration;
pub mod generation;
pub mod oracle;
pub mod wti;

pub use enumeration::{cartesian_product, generate_increasing, generate_wti_trees, WtiPool};
pub use generation::{
    generate_ti_trees, get_max_degree, is_ti_tree, CandidateTable, GenerationPlan, ParamError,
    SubtreePool, TiCensus,
};
pub use wti::{join_wti_trees, DuplicateTransmission, JoinOutcome, WtiTree};
