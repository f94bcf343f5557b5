//! Isomorphism testing for finite groups given by Cayley tables.
//!
//! The crate is organised bottom-up: [`group`] holds tables and the brute-force
//! oracle, [`perm`] is the permutation-group engine, [`graph`] and [`code`] are
//! the combinatorial equivalence solvers, [`rep`] does linear representations over
//! prime fields, and [`coprime`], [`cohom`] and [`centrad`] are the class-specific
//! isomorphism tests. [`exec`] provides the fork-join layer and its work/span meter.

pub mod arith;
pub mod centrad;
pub mod code;
pub mod corpus;
pub mod cohom;
pub mod coprime;
pub mod exec;
pub mod fp;
pub mod graph;
pub mod group;
pub mod perm;
pub mod rep;
