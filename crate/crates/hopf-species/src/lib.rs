//! Exact-arithmetic computer algebra for Hopf monoids in vector species.
//!
//! The crate enumerates canonical bases of species on explicit label sets,
//! equips a zoo of examples with (co)monoid structure, builds substitution
//! bimonoids on composite carriers, and verifies the defining laws
//! exhaustively at desk scale over the rationals.

pub mod error;
pub mod exec;
pub mod interp;
pub mod json;
pub mod label;
pub mod lincomb;
pub mod linalg;
pub mod morphism;
pub mod partition;
pub mod species;
pub mod structures;
pub mod tee;
pub mod verify;
pub mod zoo;
pub mod term;

pub use error::{Error, Result};
pub use interp::{QuotientRow, RTee};
pub use label::{canonical_labels, Bijection, Label, LabelSet};
pub use lincomb::{rat, rat_int, LinComb, Rational};
pub use morphism::Morphism;
pub use partition::{enumerate_partitions, Decomposition, SetPartition};
pub use species::{Species, Trunc};
pub use structures::{Bimonoid, BimonoidOps, Comonoid, ComonoidOps, Fault};
pub use term::{Composite, Graph, Poset, Side, Term};
pub use verify::{Antipode, Report, Witness};
