//! Finite truncations of products of alternating groups with a lamplighter
//! coordinate, generated by two elements acting diagonally. Provides exact
//! arithmetic in each coordinate, word and conjugacy deciders, constructive
//! parameter builders, and quotient-size bounds for separability depth.

pub mod checks;
pub mod depth;
pub mod groups;
pub mod oracle;
pub mod params;
pub mod perm;
pub mod words;
pub mod wreath;

pub use checks::{SuiteOptions, SuiteReport};
pub use depth::{
    DepthError, DepthReport, DepthWitness, Direction, GrowthMode, GrowthTable, QuotientKind,
    QuotientSize,
};
pub use groups::{ConjugacyDecision, GroupError, TruncatedElement};
pub use params::{Constants, GrowthSpec, ParamError, ParameterTables, Row, TableMode};
pub use perm::{CycleType, PermError, Permutation};
pub use words::{Gen, GroupElement, Word, WordError};
pub use wreath::{FiniteWreathElement, WreathElement, WreathError};
