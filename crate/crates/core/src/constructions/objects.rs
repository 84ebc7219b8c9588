//! Does `(v = a) sup (v = b)` single out one object? Under sentence choice
//! semantics the answer depends on the table, and regular tables never do.

use serde::Serialize;
use thiserror::Error;

use crate::choice::{extendable, ChoiceClass, ChoiceError, ChoiceTable, ClassSpec, EquivOracle, Mode};
use crate::semantics::{eval_scs, EvalError, Structure};
use crate::syntax::{Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ObjectError {
    #[error("`{0}` is not an element of the structure")]
    UnknownElement(String),
    #[error("the two objects must be distinct")]
    SameObject,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectRow {
    pub table: ChoiceTable,
    /// Choice on `{a = a, a = b}`.
    pub at_a: Formula,
    /// Choice on `{b = a, b = b}`.
    pub at_b: Formula,
    pub witnesses: Vec<String>,
    /// `exists! v. ((v = a) sup (v = b))` under the table.
    pub unique: bool,
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectReport {
    pub a: String,
    pub b: String,
    pub sentence: Formula,
    pub oracle: String,
    pub rows: Vec<ObjectRow>,
}

impl ObjectReport {
    /// Some table yields a unique witness.
    pub fn some_unique(&self) -> bool {
        self.rows.iter().any(|r| r.unique)
    }

    /// No regular table yields a unique witness.
    pub fn no_regular_unique(&self) -> bool {
        !self.rows.iter().any(|r| r.unique && r.regular)
    }
}

fn at(x: &str, y: &str) -> Formula {
    Formula::eq(Term::param(x), Term::param(y))
}

/// `(x = a) sup (x = b)` with `x` a term.
fn sup_at(x: Term, a: &str, b: &str) -> Formula {
    Formula::sup(Formula::eq(x.clone(), Term::param(a)), Formula::eq(x, Term::param(b)))
}

/// `exists! v. ((v = a) sup (v = b))`, spelled out.
pub fn unique_sentence(a: &str, b: &str) -> Formula {
    let phi = |x: &str| sup_at(Term::var(x), a, b);
    Formula::exists(
        "v",
        Formula::and(
            phi("v"),
            Formula::forall("u", Formula::implies(phi("u"), Formula::eq(Term::var("u"), Term::var("v")))),
        ),
    )
}

/// Runs all four tables on the two relevant pairs. Pairs `{x = a, x = b}` for
/// other elements `x` are both false and get an arbitrary fixed choice.
pub fn object_superposition_report(
    m: &Structure,
    a: &str,
    b: &str,
    oracle_bound: usize,
) -> Result<ObjectReport, ObjectError> {
    for x in [a, b] {
        if m.element(x).is_none() {
            return Err(ObjectError::UnknownElement(x.to_string()));
        }
    }
    if a == b {
        return Err(ObjectError::SameObject);
    }
    let oracle = EquivOracle::bounded_fo(oracle_bound, Signature::new());
    let spec = ClassSpec::new(ChoiceClass::Reg, Some(oracle.clone()));
    let sentence = unique_sentence(a, b);
    let (aa, ab, ba, bb) = (at(a, a), at(a, b), at(b, a), at(b, b));
    let mut rows = Vec::new();
    for pick_a in [&aa, &ab] {
        for pick_b in [&ba, &bb] {
            let mut f = ChoiceTable::new(Mode::Sentence);
            f.insert(&aa, &ab, pick_a)?;
            f.insert(&ba, &bb, pick_b)?;
            for x in m.domain() {
                if x != a && x != b {
                    let (xa, xb) = (at(x, a), at(x, b));
                    f.insert(&xa, &xb, &xa)?;
                }
            }
            let mut witnesses = Vec::new();
            for x in m.domain() {
                if eval_scs(m, &f, &sup_at(Term::param(x), a, b))? {
                    witnesses.push(x.clone());
                }
            }
            let unique = eval_scs(m, &f, &sentence)?;
            let regular = extendable(&f, &spec)?;
            rows.push(ObjectRow { table: f, at_a: pick_a.clone(), at_b: pick_b.clone(), witnesses, unique, regular });
        }
    }
    Ok(ObjectReport { a: a.to_string(), b: b.to_string(), sentence, oracle: oracle.describe(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_elements() {
        let m = Structure::new(["a", "b"]).unwrap();
        let r = object_superposition_report(&m, "a", "b", 3).unwrap();
        assert_eq!(r.rows.len(), 4);
        let unique: Vec<_> = r.rows.iter().filter(|x| x.unique).collect();
        let regular: Vec<_> = r.rows.iter().filter(|x| x.regular).collect();
        assert_eq!(unique.len(), 2);
        assert_eq!(regular.len(), 2);
        assert!(r.some_unique() && r.no_regular_unique());
        for row in &r.rows {
            assert_eq!(row.unique, row.witnesses.len() == 1);
        }
        assert_eq!(r.rows[0].witnesses, vec!["a".to_string()]);
        assert!(!r.rows[0].regular);
        assert_eq!(r.rows[1].witnesses, vec!["a".to_string(), "b".to_string()]);
        assert!(r.rows[1].regular);
        assert!(r.rows[2].witnesses.is_empty());
        assert!(r.rows[2].regular);
        assert_eq!(r.rows[3].witnesses, vec!["b".to_string()]);
    }

    #[test]
    fn same_object_is_refused() {
        let m = Structure::new(["a", "b"]).unwrap();
        assert_eq!(object_superposition_report(&m, "a", "a", 3).unwrap_err(), ObjectError::SameObject);
    }
}
