//! Superposition logic toolkit.
//!
//! First-order logic extended with a binary connective `sup` whose truth is
//! fixed by a choice function picking one of its two operands. The crate
//! covers the syntax, the choice-function machinery, the sentence- and
//! formula-level truth relations, Hilbert proof checking, and a set of
//! executable constructions (UI failure witnesses, uniformity refutation,
//! model building from complete theory fragments).

pub mod choice;
pub mod constructions;
pub mod gen;
pub mod proofs;
pub mod semantics;
pub mod syntax;
pub use choice::{ChoiceClass, ChoiceTable, ClassSpec, EquivOracle, Mode};
pub use semantics::{Structure, Valuation, Verdict};
pub use syntax::{parse, parse_lenient, Formula, Signature, SyntaxClass, Term};
