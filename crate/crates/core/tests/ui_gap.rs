//! UI with a superposed body: the axiom matcher accepts the instance, but
//! the sentence choice semantics does not validate it, because the table
//! may treat the parameter instances and the named instance differently.

use std::collections::BTreeMap;

use supkit::choice::{ChoiceTable, ClassSpec, Mode};
use supkit::proofs::build::Derivation;
use supkit::proofs::{check_proof, CheckOptions, Scheme, SystemId};
use supkit::semantics::{eval_classical, eval_scs, is_tautology, SearchSpace, Structure};
use supkit::syntax::{parse_lenient, Formula};

fn p(s: &str) -> Formula {
    parse_lenient(s).unwrap().0
}

#[test]
fn ui_with_superposed_body_is_not_scs_valid_when_parameters_differ_from_terms() {
    let ui = p("(forall v. P(v) sup Q(v)) -> P(c) sup Q(c)");
    let mut d = Derivation::new(SystemId::L0);
    d.axiom(ui.clone(), Scheme::UI).unwrap();
    assert_eq!(check_proof(&d.into_proof(), &CheckOptions::default()), Ok(()));

    // One element named by c, in P and not in Q. The parameter pair picks P,
    // the constant pair picks Q.
    let mut m = Structure::new(["e0"]).unwrap();
    m.set_constant("c", "e0").unwrap();
    m.set_relation("P", 1, &[vec!["e0"]]).unwrap();
    m.set_relation("Q", 1, &[]).unwrap();
    let mut f = ChoiceTable::new(Mode::Sentence);
    f.insert(&p("P(@e0)"), &p("Q(@e0)"), &p("P(@e0)")).unwrap();
    f.insert(&p("P(c)"), &p("Q(c)"), &p("Q(c)")).unwrap();
    assert!(eval_scs(&m, &f, &p("forall v. P(v) sup Q(v)")).unwrap());
    assert!(!eval_classical(&m, &p("Q(c)"), &BTreeMap::new()).unwrap());
    assert!(!eval_scs(&m, &f, &ui).unwrap());

    let v = is_tautology(&ui, &ClassSpec::all(), &SearchSpace::default()).unwrap();
    assert!(!v.is_valid());
    assert!(v.countermodel.unwrap().reverified);
}

#[test]
fn ui_with_classical_body_stays_valid() {
    let ui = p("(forall v. P(v) \\/ Q(v)) -> P(c) \\/ Q(c)");
    assert!(is_tautology(&ui, &ClassSpec::all(), &SearchSpace::default()).unwrap().is_valid());
}
