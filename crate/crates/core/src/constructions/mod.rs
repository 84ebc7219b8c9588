//! Executable constructions: UI failure witnesses, the uniformity
//! refutation, object superposition, interpolation, and model building from
//! complete theory fragments.

pub mod interpolation;
pub mod objects;
pub mod theory;
pub mod ui;
pub mod uniformity;

pub use interpolation::{interpolation_report, interpolation_universe, InterpolationReport};
pub use objects::{object_superposition_report, ObjectError, ObjectReport, ObjectRow};
pub use theory::{
    build_choice_from_theory, check_sv_closure, check_theory_fragment, lemma_criterion, TheoryCheck, TheoryError,
    TheoryFragment, TheoryModel,
};
pub use ui::{ui_failure_general, ui_failure_witness, UiError, UiWitness};
pub use uniformity::{refute_uniformity, UniformityError, UniformityRefutation};
