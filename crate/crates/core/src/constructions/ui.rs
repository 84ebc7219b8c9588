//! Counterexamples to universal instantiation under formula choice semantics.
//!
//! Given a table `f` on the two pairs `{a(v), b(v)}` and `{a(t), b(t)}`, the
//! four combinations of its choices each determine a guard `v = r` (with `r`
//! one of two term tuples) and one of two structures such that
//! `forall v. (v = r -> a(v) sup b(v))` holds while its instance at `r` fails.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::choice::{ChoiceError, ChoiceTable, Mode, Pair};
use crate::semantics::{eval_fcs, find_model, structures, EvalError, Structure};
use crate::syntax::{Formula, Signature, SubstError, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum UiError {
    #[error("term `{0}` is not closed")]
    OpenTerm(String),
    #[error("expected {expected} terms, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("condition ({condition}) fails: {detail}")]
    Condition { condition: &'static str, detail: String },
    #[error("`{0}` is unsatisfiable in the search space")]
    Unsatisfiable(String),
    #[error("the table has no choice for {0}")]
    Missing(String),
    #[error("the table is in {0} mode; formula mode is required")]
    Mode(Mode),
    #[error("the constructed witness did not verify: {0}")]
    Verification(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which of the two prepared structures a witness lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Satisfies `a(t) /\ ~b(t)`.
    M1,
    /// Satisfies `~a(t) /\ b(t)`.
    M2,
}

#[derive(Clone, Debug, Serialize)]
pub struct UiWitness {
    pub case_id: u8,
    pub model: Side,
    pub structure: Structure,
    /// The quantified formula, free in `vars`.
    pub psi: Formula,
    pub vars: Vec<String>,
    /// The closed terms the instance is taken at.
    pub terms: Vec<Term>,
    pub closure: Formula,
    pub instance: Formula,
    pub closure_holds: bool,
    pub instance_holds: bool,
}

impl UiWitness {
    /// Recomputes both truth values under `f`.
    pub fn verify(&self, f: &ChoiceTable) -> Result<bool, UiError> {
        Ok(eval_fcs(&self.structure, f, &self.closure)? && !eval_fcs(&self.structure, f, &self.instance)?)
    }

    /// The dual failure of existential generalization: `~psi` holds at the
    /// terms while `exists v. ~psi` fails.
    pub fn eg_failure(&self, f: &ChoiceTable) -> Result<bool, UiError> {
        let neg = Formula::not(self.psi.clone());
        let inst = Formula::not(self.instance.clone());
        let ex = self.vars.iter().rev().fold(neg, |acc, v| Formula::exists(v, acc));
        Ok(eval_fcs(&self.structure, f, &inst)? && !eval_fcs(&self.structure, f, &ex)?)
    }
}

fn instantiate(phi: &Formula, vars: &[String], terms: &[Term]) -> Result<Formula, SubstError> {
    let map: BTreeMap<String, Term> = vars.iter().cloned().zip(terms.iter().cloned()).collect();
    phi.substitute_all(&map)
}

fn guard(vars: &[String], terms: &[Term]) -> Formula {
    let eqs = vars.iter().zip(terms).map(|(v, t)| Formula::eq(Term::var(v), t.clone())).collect();
    Formula::conjunction(eqs).expect("at least one variable")
}

fn picks_first(f: &ChoiceTable, a: &Formula, b: &Formula) -> Result<bool, UiError> {
    if f.mode() != Mode::Formula {
        return Err(UiError::Mode(f.mode()));
    }
    match f.choose(a, b) {
        Ok(c) => Ok(c.primitive() == a.primitive()),
        Err(ChoiceError::MissingEntry(p)) => Err(UiError::Missing(p.to_string())),
        Err(e) => Err(UiError::Verification(e.to_string())),
    }
}

/// The general form: `alpha(s) = beta(t)` and `alpha(t) = beta(s)`, and both
/// `alpha(t) /\ ~beta(t)` and `~alpha(t) /\ beta(t)` satisfiable.
#[allow(clippy::too_many_arguments)]
pub fn ui_failure_general(
    sig: &Signature,
    alpha: &Formula,
    beta: &Formula,
    vars: &[String],
    t: &[Term],
    s: &[Term],
    f: &ChoiceTable,
    max_domain: usize,
) -> Result<UiWitness, UiError> {
    for terms in [t, s] {
        if terms.len() != vars.len() {
            return Err(UiError::Arity { expected: vars.len(), found: terms.len() });
        }
        if let Some(x) = terms.iter().find(|x| !x.is_closed()) {
            return Err(UiError::OpenTerm(x.to_string()));
        }
    }
    let (a_t, b_t) = (instantiate(alpha, vars, t)?, instantiate(beta, vars, t)?);
    let (a_s, b_s) = (instantiate(alpha, vars, s)?, instantiate(beta, vars, s)?);
    if a_s.primitive() != b_t.primitive() {
        return Err(UiError::Condition { condition: "a", detail: format!("{a_s} differs from {b_t}") });
    }
    if a_t.primitive() != b_s.primitive() {
        return Err(UiError::Condition { condition: "b", detail: format!("{a_t} differs from {b_s}") });
    }
    if Pair::new(alpha, beta).is_none() || Pair::new(&a_t, &b_t).is_none() {
        return Err(UiError::Condition { condition: "c", detail: "the superposed formulas coincide".into() });
    }
    let vocab = [alpha, beta].iter().fold(sig.clone(), |acc, x| acc.union(&x.vocabulary()));
    let m1_spec = Formula::and(a_t.clone(), Formula::not(b_t.clone()));
    let m2_spec = Formula::and(Formula::not(a_t.clone()), b_t.clone());
    let m1 = find_model(std::slice::from_ref(&m1_spec), &vocab, max_domain)
        .ok_or_else(|| UiError::Unsatisfiable(m1_spec.to_string()))?;
    let m2 = find_model(std::slice::from_ref(&m2_spec), &vocab, max_domain)
        .ok_or_else(|| UiError::Unsatisfiable(m2_spec.to_string()))?;

    let on_vars = picks_first(f, alpha, beta)?;
    let on_terms = picks_first(f, &a_t, &b_t)?;
    let (case_id, at, model) = match (on_vars, on_terms) {
        (true, true) => (1, s, Side::M2),
        (true, false) => (2, t, Side::M1),
        (false, true) => (3, t, Side::M2),
        (false, false) => (4, s, Side::M1),
    };
    let structure = match model {
        Side::M1 => m1,
        Side::M2 => m2,
    };
    let psi = Formula::implies(guard(vars, at), Formula::sup(alpha.clone(), beta.clone()));
    let closure = vars.iter().rev().fold(psi.clone(), |acc, v| Formula::forall(v, acc));
    let instance = instantiate(&psi, vars, at)?;
    let closure_holds = eval_fcs(&structure, f, &closure)?;
    let instance_holds = eval_fcs(&structure, f, &instance)?;
    let w = UiWitness {
        case_id,
        model,
        structure,
        psi,
        vars: vars.to_vec(),
        terms: at.to_vec(),
        closure,
        instance,
        closure_holds,
        instance_holds,
    };
    if !closure_holds || instance_holds {
        return Err(UiError::Verification(format!(
            "case {case_id}: closure {closure_holds}, instance {instance_holds}"
        )));
    }
    Ok(w)
}

/// The single-formula form: `alpha` has one free variable `var`, and both
/// `alpha(t1) /\ ~alpha(t2)` and `~alpha(t1) /\ alpha(t2)` are satisfiable.
/// The superposition is `alpha(v1) sup alpha(v2)`.
pub fn ui_failure_witness(
    sig: &Signature,
    alpha: &Formula,
    var: &str,
    t1: &Term,
    t2: &Term,
    f: &ChoiceTable,
    max_domain: usize,
) -> Result<UiWitness, UiError> {
    let free = alpha.free_vars();
    if free.len() != 1 || !free.contains(var) {
        return Err(UiError::Condition { condition: "alpha", detail: format!("{alpha} must be free in {var} only") });
    }
    if t1 == t2 {
        return Err(UiError::Condition { condition: "terms", detail: "the terms must be distinct".into() });
    }
    let (v1, v2) = fresh_pair(alpha);
    let a1 = alpha.substitute(var, &Term::var(&v1))?;
    let a2 = alpha.substitute(var, &Term::var(&v2))?;
    let vars = [v1, v2];
    ui_failure_general(sig, &a1, &a2, &vars, &[t1.clone(), t2.clone()], &[t2.clone(), t1.clone()], f, max_domain)
}

fn fresh_pair(alpha: &Formula) -> (String, String) {
    let used = alpha.to_string();
    let mut names = (1..).map(|i| format!("v{i}")).filter(|n| !used.contains(n.as_str()));
    let a = names.next().expect("infinitely many names");
    let b = names.next().expect("infinitely many names");
    (a, b)
}

/// The two pairs a UI witness depends on.
pub fn ui_pairs(alpha: &Formula, var: &str, t1: &Term, t2: &Term) -> Result<[(Formula, Formula); 2], UiError> {
    let (v1, v2) = fresh_pair(alpha);
    Ok([
        (alpha.substitute(var, &Term::var(&v1))?, alpha.substitute(var, &Term::var(&v2))?),
        (alpha.substitute(var, t1)?, alpha.substitute(var, t2)?),
    ])
}

/// All formula-mode tables on the given pairs, first member chosen first.
pub fn tables_on(pairs: &[(Formula, Formula)]) -> Vec<ChoiceTable> {
    let mut out = vec![ChoiceTable::new(Mode::Formula)];
    for (a, b) in pairs {
        let mut next = Vec::with_capacity(out.len() * 2);
        for t in &out {
            for pick in [a, b] {
                let mut t2 = t.clone();
                t2.insert(a, b, pick).expect("classical pair");
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Instances `forall w. (forall v. (phi -> psi) -> (phi -> forall v. psi))`
/// of the distribution scheme, over superpositions of the same pairs a UI
/// witness uses; `v` is the first variable of `vars`, `w` the rest.
pub fn d_instances(alpha: &Formula, beta: &Formula, vars: &[String], t: &[Term]) -> Result<Vec<Formula>, UiError> {
    let v = &vars[0];
    let a_t = instantiate(alpha, vars, t)?;
    let b_t = instantiate(beta, vars, t)?;
    let open_sup = Formula::sup(alpha.clone(), beta.clone());
    let closed_sup = Formula::sup(a_t.clone(), b_t.clone());
    // Antecedents must not mention v.
    let phis = vec![closed_sup.clone(), Formula::not(closed_sup), a_t, Formula::not(b_t)];
    let psis = vec![
        open_sup.clone(),
        Formula::not(open_sup.clone()),
        alpha.clone(),
        Formula::implies(guard(vars, t), open_sup),
    ];
    let mut out = Vec::new();
    for phi in &phis {
        for psi in &psis {
            let d = Formula::implies(
                Formula::forall(v, Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(phi.clone(), Formula::forall(v, psi.clone())),
            );
            let closed = vars[1..].iter().rev().fold(d, |acc, w| Formula::forall(w, acc));
            out.push(closed);
        }
    }
    Ok(out)
}

/// Counts D instances that fail under `eval_fcs` over every structure of the
/// vocabulary up to `max_domain` and every table given.
pub fn d_violations(
    instances: &[Formula],
    sig: &Signature,
    tables: &[ChoiceTable],
    max_domain: usize,
) -> Result<usize, UiError> {
    let vocab = instances.iter().fold(sig.clone(), |acc, x| acc.union(&x.vocabulary()));
    let mut bad = 0;
    for n in 1..=max_domain {
        let domain = Structure::standard_domain(n);
        for m in structures(&vocab, &domain).map_err(|e| UiError::Verification(e.to_string()))? {
            for f in tables {
                for d in instances {
                    if !eval_fcs(&m, f, d)? {
                        bad += 1;
                    }
                }
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn sig3() -> Signature {
        Signature::new().with_constants(["c1", "c2", "c3"])
    }

    #[test]
    fn four_cases_for_equality() {
        let alpha = p("v = c3");
        let (t1, t2) = (Term::constant("c1"), Term::constant("c2"));
        let pairs = ui_pairs(&alpha, "v", &t1, &t2).unwrap();
        let mut seen = Vec::new();
        for f in tables_on(&pairs) {
            let w = ui_failure_witness(&sig3(), &alpha, "v", &t1, &t2, &f, 3).unwrap();
            assert!(w.verify(&f).unwrap());
            assert!(w.eg_failure(&f).unwrap());
            seen.push(w.case_id);
        }
        seen.sort();
        assert_eq!(seen, vec![1, 2, 3, 4]);
    }

    #[test]
    fn case_one_shape() {
        let alpha = p("v = c3");
        let (t1, t2) = (Term::constant("c1"), Term::constant("c2"));
        let mut f = ChoiceTable::new(Mode::Formula);
        f.insert(&p("v1 = c3"), &p("v2 = c3"), &p("v1 = c3")).unwrap();
        f.insert(&p("c1 = c3"), &p("c2 = c3"), &p("c1 = c3")).unwrap();
        let w = ui_failure_witness(&sig3(), &alpha, "v", &t1, &t2, &f, 3).unwrap();
        assert_eq!(w.case_id, 1);
        assert_eq!(w.model, Side::M2);
        assert_eq!(w.psi, p("v1 = c2 /\\ v2 = c1 -> (v1 = c3 sup v2 = c3)"));
        assert_eq!(w.instance, p("c2 = c2 /\\ c1 = c1 -> (c2 = c3 sup c1 = c3)"));
    }

    #[test]
    fn condition_a_is_checked() {
        let vars = vec!["v1".to_string(), "v2".to_string()];
        let t = [Term::constant("c1"), Term::constant("c2")];
        let s = [Term::constant("c1"), Term::constant("c2")];
        let f = ChoiceTable::new(Mode::Formula);
        let e = ui_failure_general(&Signature::new(), &p("R(v1, v2)"), &p("R(v2, v1)"), &vars, &t, &s, &f, 2);
        assert!(matches!(e, Err(UiError::Condition { condition: "a", .. })));
    }

    #[test]
    fn sentence_tables_are_refused() {
        let f = ChoiceTable::new(Mode::Sentence);
        let e = ui_failure_witness(&sig3(), &p("v = c3"), "v", &Term::constant("c1"), &Term::constant("c2"), &f, 3);
        assert_eq!(e.unwrap_err(), UiError::Mode(Mode::Sentence));
    }
}
