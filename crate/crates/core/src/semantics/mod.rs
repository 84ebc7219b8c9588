//! Classical evaluation over finite structures, the two superposition truth
//! relations, and bounded consequence checking.

mod consequence;
mod eval;
mod structure;

use thiserror::Error;

use crate::choice::{ChoiceError, Mode};
use crate::syntax::SubstError;

pub use consequence::{
    check_consequence, find_model, is_tautology, ConsequenceError, Countermodel, Model, SearchSpace, Semantics,
    SpaceReport, Verdict,
};
pub use eval::{eval_classical, eval_fcs, eval_scs};
pub use structure::{count_structures, structures, Structure, StructureError, Structures, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is unbound")]
    Unbound(String),
    #[error("symbol `{0}` is not interpreted in the structure")]
    Uninterpreted(String),
    #[error("parameter `@{0}` names no element of the structure")]
    UnknownElement(String),
    #[error("`{0}` contains a superposition")]
    NotClassical(String),
    #[error("`{0}` is not a restricted formula")]
    NotRestricted(String),
    #[error("`{0}` is not a sentence")]
    NotSentence(String),
    #[error("expected a {expected}-mode table, found a {found}-mode table")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

impl EvalError {
    pub fn missing_pair(&self) -> Option<&crate::choice::Pair> {
        match self {
            EvalError::Choice(ChoiceError::MissingEntry(p)) => Some(p),
            _ => None,
        }
    }
}
