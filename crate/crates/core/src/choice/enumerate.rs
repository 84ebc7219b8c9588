//! Lazy enumeration of the tables a task actually consults.

use super::{extendable, ChoiceError, ChoiceTable, ClassSpec, Pair, Side};
use crate::semantics::EvalError;

/// Errors that may report an undefined pair.
pub trait Branching: From<ChoiceError> {
    fn missing_pair(&self) -> Option<&Pair>;
}

impl Branching for ChoiceError {
    fn missing_pair(&self) -> Option<&Pair> {
        match self {
            ChoiceError::MissingEntry(p) => Some(p),
            _ => None,
        }
    }
}

impl Branching for EvalError {
    fn missing_pair(&self) -> Option<&Pair> {
        EvalError::missing_pair(self)
    }
}

/// Depth-first search over partial tables. Each time the task stops on an
/// undefined pair, both choices for it are tried, keeping only tables that
/// still extend to a member of the class.
pub struct TableEnumerator<'a, F> {
    spec: &'a ClassSpec,
    task: F,
    stack: Vec<ChoiceTable>,
    seed_checked: bool,
}

/// Every table, minimal for `task`, on which the task runs to completion,
/// together with the task's result. Tables extend `seed`.
pub fn enumerate_tables<T, E, F>(seed: ChoiceTable, spec: &ClassSpec, task: F) -> TableEnumerator<'_, F>
where
    E: Branching,
    F: FnMut(&ChoiceTable) -> Result<T, E>,
{
    TableEnumerator { spec, task, stack: vec![seed], seed_checked: false }
}

impl<T, E, F> Iterator for TableEnumerator<'_, F>
where
    E: Branching,
    F: FnMut(&ChoiceTable) -> Result<T, E>,
{
    type Item = Result<(ChoiceTable, T), E>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.seed_checked {
            self.seed_checked = true;
            match self.stack.last().map(|seed| extendable(seed, self.spec)) {
                Some(Ok(false)) => self.stack.clear(),
                Some(Err(e)) => {
                    self.stack.clear();
                    return Some(Err(e.into()));
                }
                _ => {}
            }
        }
        while let Some(table) = self.stack.pop() {
            match (self.task)(&table) {
                Ok(v) => return Some(Ok((table, v))),
                Err(e) => {
                    let Some(pair) = e.missing_pair().cloned() else {
                        return Some(Err(e));
                    };
                    for side in [Side::Second, Side::First] {
                        let next = table.with(pair.clone(), side);
                        match extendable(&next, self.spec) {
                            Ok(true) => self.stack.push(next),
                            Ok(false) => {}
                            Err(e) => return Some(Err(e.into())),
                        }
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::{ChoiceClass, Mode};
    use crate::semantics::{eval_scs, Valuation};
    use crate::syntax::{parse_lenient, Formula};

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn leaves(phi: &str, spec: &ClassSpec) -> Vec<ChoiceTable> {
        let phi = p(phi);
        let m = Valuation::new().set("p0", true).set("p1", false).set("p2", true).to_structure();
        enumerate_tables(ChoiceTable::new(Mode::Sentence), spec, |t| eval_scs(&m, t, &phi))
            .map(|r| r.unwrap().0)
            .collect()
    }

    #[test]
    fn single_pair() {
        let ts = leaves("p0 sup p1", &ClassSpec::all());
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].winner(&Pair::new(&p("p0"), &p("p1")).unwrap()), Some(&p("p0")));
    }

    #[test]
    fn nested_pairs_branch() {
        assert_eq!(leaves("(p0 sup p1) sup p2", &ClassSpec::all()).len(), 4);
        for t in leaves("(p0 sup p1) sup p2", &ClassSpec::new(ChoiceClass::Asso, None)) {
            assert!(crate::choice::PreferenceGraph::from_table(&t).is_acyclic());
        }
    }

    #[test]
    fn seed_is_respected() {
        let mut seed = ChoiceTable::new(Mode::Sentence);
        seed.insert(&p("p0"), &p("p1"), &p("p1")).unwrap();
        let phi = p("p0 sup p1");
        let m = Valuation::new().set("p0", true).set("p1", false).to_structure();
        let all: Vec<_> = enumerate_tables(seed, &ClassSpec::all(), |t| eval_scs(&m, t, &phi)).collect();
        assert_eq!(all.len(), 1);
        assert!(!all[0].as_ref().unwrap().1);
    }
}
