//! Rigidity of symmetry-constrained bar-joint frameworks on the cylinder
//! `x^2 + y^2 = 1`.
//!
//! The crate decides and certifies rigidity of symmetric graphs two ways and
//! cross-validates them:
//!
//! * combinatorially: `(2,2)`-sparsity via the pebble game, symmetry-refined
//!   tightness, and recursive construction certificates down to a catalog of
//!   base graphs ([`sparsity`], [`construction`], [`catalog`]);
//! * geometrically: exact-rational rigidity matrices at random symmetric
//!   realizations, with rank and kernel computed over the rationals
//!   ([`geometry`]).
//!
//! Representation-theoretic necessary conditions (character counts of fixed
//! vertices and edges) live in [`characters`], and the symmetric two-spanning-
//! tree decompositions in [`trees`].

pub mod catalog;
pub mod characters;
pub mod construction;
pub mod geometry;
pub mod graph;
pub mod sparsity;
pub mod trees;

pub use graph::{GroupName, GroupSpec, SymOp, SymmetricGraph, ValidationReport};
pub use sparsity::SparsityReport;
