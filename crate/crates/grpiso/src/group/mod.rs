//! Finite groups as Cayley tables: validation, structure, constructors and the
//! brute-force isomorphism oracle.

mod abelian;
mod build;
mod hom;
mod oracle;
mod subgroup;
mod table;

pub use abelian::{abelian_basis, AbelianBasis};
pub use build::{build_group, parse_descriptor, relabel_table, GroupDescriptor};
pub use hom::GroupHom;
pub use oracle::{generating_set, oracle_aut, oracle_aut_guarded, oracle_iso, ORACLE_GUARD};
pub use subgroup::{
    center, closure, is_subgroup, normal_closure, quotient, sylow_elements, Subgroup,
};
pub use table::{CayleyTable, Line};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is empty or not square")]
    Malformed,
    #[error("entry at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize },
    #[error("{0:?} is not a permutation")]
    NotLatin(Line),
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("bad action: {0}")]
    BadAction(String),
    #[error("bad cocycle: {0}")]
    BadCocycle(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("group of order {order} exceeds the oracle guard {guard}")]
    TooLarge { order: usize, guard: usize },
}
