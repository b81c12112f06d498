//! Finite quasigroups and the balanced "medial-like" functional equations on
//! one or two binary operations.
//!
//! The crate is organised bottom-up:
//!
//! * [`tables`]: validated Cayley tables (Latin squares), divisions, mappings
//!   and isotopies.
//! * [`abelian`]: abelian groups given by Cayley tables, their invariant
//!   factors, automorphisms and holomorphisms.
//! * [`equations`]: balanced equation terms, the parser, the Belousov test,
//!   the two 24-entry catalogs and brute-force satisfaction.
//! * [`linearize`]: construction and verification of linear representations
//!   `f(x,y) = φ(x) + ψ(y) + c` for single operations, pairs and families.
//! * [`enumerate`]: exhaustive Latin-square generation and censuses.
//!
//! Sweeps that touch many tables go through [`exec::Exec`], which runs on
//! rayon when the `parallel` feature is enabled and sequentially otherwise.

pub mod abelian;
pub mod enumerate;
pub mod equations;
pub mod exec;
pub mod linearize;
pub mod tables;

pub use abelian::{AbelianGroup, Automorphism, GroupError, HolomorphismDecomposition};
pub use equations::{
    pair_catalog, parse_equation, single_catalog, BalancedEquation, CatalogEntry, Classification, EquationError, Term,
    Verdict,
};
pub use exec::Exec;
pub use linearize::{
    Convention, LinearRep, LinearizeError, PairLinearRep, RelationCheck, RelationSet, Slot, TheoremReport,
};
pub use tables::{validate_table, Element, Mapping, Property, QuasigroupTable, TableError};

/// Size limits that guard the brute-force routines.
///
/// Every limit is an explicit error when exceeded; nothing is silently
/// truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest table order accepted by validation.
    pub max_table_order: usize,
    /// Largest group order for automorphism enumeration.
    pub max_automorphism_order: usize,
    /// Largest order for full Latin-square enumeration.
    pub max_enumeration_order: usize,
    /// Largest order for the ordered-pair census.
    pub max_pair_census_order: usize,
    /// Largest number of variable assignments a satisfaction check may visit.
    pub max_assignments: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_order: 32,
            max_automorphism_order: 64,
            max_enumeration_order: 5,
            max_pair_census_order: 3,
            // order 16 with four variables
            max_assignments: 16u64.pow(4),
        }
    }
}
