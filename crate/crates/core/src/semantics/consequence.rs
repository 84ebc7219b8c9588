//! Bounded consequence and tautology checking by exhaustive enumeration of
//! worlds and choice tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::{enumerate_tables, ChoiceClass, ChoiceError, ChoiceTable, ClassSpec, EquivOracle, Mode};
use crate::syntax::{Formula, Signature, SyntaxClass};

use super::{count_structures, eval_classical, eval_fcs, eval_scs, structures, EvalError, Structure, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Choice on sentences; quantifiers instantiate parameters.
    Scs,
    /// Choice on formulas; collapse commutes with quantifiers.
    Fcs,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Scs => "scs",
            Semantics::Fcs => "fcs",
        })
    }
}

/// Bounds of a search. Verdicts are claims about this space only.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub semantics: Semantics,
    /// Largest domain tried for first-order tasks.
    pub max_domain: usize,
    /// Bound used when a regularity oracle has to be built.
    pub oracle_bound: usize,
    /// Abort once this many (world, table) points have been visited.
    pub max_tables: u64,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace { semantics: Semantics::Scs, max_domain: 3, oracle_bound: 3, max_tables: 20_000_000, jobs: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpaceReport {
    pub semantics: Semantics,
    pub class: ChoiceClass,
    pub oracle: Option<String>,
    pub kind: &'static str,
    pub vocabulary: Signature,
    pub domain_sizes: Vec<usize>,
    pub worlds: u64,
    /// Total (world, table) points visited; absent when the search stopped early.
    pub tables: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Valuation(Valuation),
    Structure(Structure),
}

impl Model {
    pub fn structure(&self) -> Structure {
        match self {
            Model::Valuation(v) => v.to_structure(),
            Model::Structure(m) => m.clone(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Valuation(v) => write!(f, "{v}"),
            Model::Structure(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Countermodel {
    pub model: Model,
    pub table: ChoiceTable,
    pub reverified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub space: SpaceReport,
    pub result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub countermodel: Option<Countermodel>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.countermodel.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConsequenceError {
    #[error("`{0}` is not a sentence")]
    NotSentence(String),
    #[error("`{0}` is not a restricted formula, which sentence choice semantics requires")]
    NotRestricted(String),
    #[error("`{0}` mentions parameters; consequence is checked over the base language")]
    Parameters(String),
    #[error("search limit exceeded: more than {0} (world, table) points")]
    ResourceLimit(u64),
    #[error("the world space is too large to enumerate")]
    TooManyWorlds,
    #[error("inconsistent vocabulary: {0}")]
    Vocabulary(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
}

const MAX_WORLDS: u128 = 2_000_000;

fn evaluate(sem: Semantics, m: &Structure, f: &ChoiceTable, phi: &Formula) -> Result<bool, EvalError> {
    match sem {
        Semantics::Scs => eval_scs(m, f, phi),
        Semantics::Fcs => eval_fcs(m, f, phi),
    }
}

/// Does every (world, admissible table) satisfying `premises` satisfy `phi`?
pub fn check_consequence(
    premises: &[Formula],
    phi: &Formula,
    spec: &ClassSpec,
    space: &SearchSpace,
) -> Result<Verdict, ConsequenceError> {
    let mut all: Vec<Formula> = premises.to_vec();
    all.push(phi.clone());
    for f in &all {
        if !f.is_sentence() {
            return Err(ConsequenceError::NotSentence(f.to_string()));
        }
        if !f.params().is_empty() {
            return Err(ConsequenceError::Parameters(f.to_string()));
        }
        if space.semantics == Semantics::Scs && f.classify() > SyntaxClass::Restricted {
            return Err(ConsequenceError::NotRestricted(f.to_string()));
        }
    }
    let vocab = crate::syntax::vocabulary_of(all.iter()).map_err(|e| ConsequenceError::Vocabulary(e.to_string()))?;
    let propositional = all.iter().all(Formula::is_propositional);

    let (worlds, sizes): (Vec<Model>, Vec<usize>) = if propositional {
        let atoms: Vec<String> = vocab.prop_atoms.iter().cloned().collect();
        (Valuation::all(&atoms).map(Model::Valuation).collect(), vec![1])
    } else {
        let sizes: Vec<usize> = (1..=space.max_domain.max(1)).collect();
        let mut total: u128 = 0;
        for &n in &sizes {
            total = total.saturating_add(count_structures(&vocab, n).unwrap_or(u128::MAX));
        }
        if total > MAX_WORLDS {
            return Err(ConsequenceError::TooManyWorlds);
        }
        let mut ws = Vec::new();
        for &n in &sizes {
            let domain = Structure::standard_domain(n);
            ws.extend(
                structures(&vocab, &domain)
                    .map_err(|e| ConsequenceError::Vocabulary(e.to_string()))?
                    .map(Model::Structure),
            );
        }
        (ws, sizes)
    };

    let spec = effective_spec(spec, &vocab, propositional, space);
    let mode = match space.semantics {
        Semantics::Scs => Mode::Sentence,
        Semantics::Fcs => Mode::Formula,
    };
    let visited = AtomicU64::new(0);

    let search = |model: &Model| -> Result<Option<ChoiceTable>, ConsequenceError> {
        let m = model.structure();
        let task = |t: &ChoiceTable| -> Result<Vec<bool>, EvalError> {
            // Every formula is evaluated so that the touched pairs do not
            // depend on earlier truth values.
            all.iter().map(|f| evaluate(space.semantics, &m, t, f)).collect()
        };
        for leaf in enumerate_tables(ChoiceTable::new(mode), &spec, task) {
            let (table, values) = leaf?;
            if visited.fetch_add(1, Ordering::Relaxed) >= space.max_tables {
                return Err(ConsequenceError::ResourceLimit(space.max_tables));
            }
            let (last, prem) = values.split_last().expect("conclusion present");
            if prem.iter().all(|&b| b) && !last {
                return Ok(Some(table));
            }
        }
        Ok(None)
    };

    let run = || -> Result<Option<(usize, ChoiceTable)>, ConsequenceError> {
        worlds
            .par_iter()
            .enumerate()
            .map(|(i, w)| search(w).map(|r| r.map(|t| (i, t))))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None))
    };
    let found = if space.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(space.jobs)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run())
    } else {
        run()
    }?;

    let mut report = SpaceReport {
        semantics: space.semantics,
        class: spec.class,
        oracle: spec.oracle.as_ref().map(EquivOracle::describe),
        kind: if propositional { "propositional" } else { "first-order" },
        vocabulary: vocab,
        domain_sizes: sizes,
        worlds: worlds.len() as u64,
        tables: None,
    };
    Ok(match found {
        None => {
            report.tables = Some(visited.load(Ordering::Relaxed));
            Verdict { space: report, result: "valid", countermodel: None }
        }
        Some((i, table)) => {
            let model = worlds[i].clone();
            let m = model.structure();
            let reverified = premises
                .iter()
                .map(|f| evaluate(space.semantics, &m, &table, f))
                .collect::<Result<Vec<bool>, _>>()?
                .into_iter()
                .all(|b| b)
                && !evaluate(space.semantics, &m, &table, phi)?;
            Verdict {
                space: report,
                result: "countermodel",
                countermodel: Some(Countermodel { model, table, reverified }),
            }
        }
    })
}

/// An oracle that knows the parameters `@e0..` a sentence-mode search may
/// introduce.
fn effective_spec(spec: &ClassSpec, vocab: &Signature, propositional: bool, space: &SearchSpace) -> ClassSpec {
    if !spec.class.needs_oracle() {
        return ClassSpec::new(spec.class, None);
    }
    if propositional {
        return ClassSpec::new(spec.class, Some(spec.oracle.clone().unwrap_or_else(EquivOracle::prop)));
    }
    let params: Vec<String> = (0..space.max_domain).map(|i| format!("@e{i}")).collect();
    let extra = vocab.union(&Signature::new().with_constants(params));
    let oracle = match &spec.oracle {
        Some(o) if o.max_domain().is_some() => o.with_signature(&extra),
        _ => EquivOracle::bounded_fo(space.oracle_bound, extra),
    };
    ClassSpec::new(spec.class, Some(oracle))
}

pub fn is_tautology(phi: &Formula, spec: &ClassSpec, space: &SearchSpace) -> Result<Verdict, ConsequenceError> {
    check_consequence(&[], phi, spec, space)
}

/// A structure of size at most `max_domain` satisfying every classical
/// sentence in `formulas`.
pub fn find_model(formulas: &[Formula], sig: &Signature, max_domain: usize) -> Option<Structure> {
    let vocab = formulas.iter().fold(sig.clone(), |acc, f| acc.union(&f.vocabulary()));
    let none = BTreeMap::new();
    for n in 1..=max_domain {
        let domain = Structure::standard_domain(n);
        let found = structures(&vocab, &domain)
            .ok()?
            .find(|m| formulas.iter().all(|f| eval_classical(m, f, &none).unwrap_or(false)));
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    #[test]
    fn interpolation_examples() {
        let space = SearchSpace::default();
        let all = ClassSpec::all();
        assert!(check_consequence(&[p("p0 /\\ p1")], &p("p0 sup p1"), &all, &space).unwrap().is_valid());
        assert!(check_consequence(&[p("p0 sup p1")], &p("p0 \\/ p1"), &all, &space).unwrap().is_valid());
        let v = check_consequence(&[p("p0 \\/ p1")], &p("p0 sup p1"), &all, &space).unwrap();
        let cm = v.countermodel.unwrap();
        assert!(cm.reverified);
        assert_eq!(cm.model, Model::Valuation(Valuation::new().set("p0", true).set("p1", false)));
        assert_eq!(cm.table.choose(&p("p0"), &p("p1")).unwrap(), p("p1"));
        let v = check_consequence(&[p("p0 sup p1")], &p("p0 /\\ p1"), &all, &space).unwrap();
        let cm = v.countermodel.unwrap();
        assert_eq!(cm.model, Model::Valuation(Valuation::new().set("p0", true).set("p1", false)));
        assert_eq!(cm.table.choose(&p("p0"), &p("p1")).unwrap(), p("p0"));
    }

    #[test]
    fn first_order_search() {
        let space = SearchSpace::default();
        let v = is_tautology(&p("forall v. (P(v) sup Q(v)) -> exists v. (P(v) \\/ Q(v))"), &ClassSpec::all(), &space)
            .unwrap();
        assert!(v.is_valid());
        assert_eq!(v.space.domain_sizes, vec![1, 2, 3]);
        let v = is_tautology(&p("exists v. (P(v) sup Q(v)) -> exists v. P(v)"), &ClassSpec::all(), &space).unwrap();
        assert!(!v.is_valid());
        assert!(v.countermodel.unwrap().reverified);
    }

    #[test]
    fn rejects_open_and_unrestricted() {
        let space = SearchSpace::default();
        assert!(matches!(is_tautology(&p("P(v)"), &ClassSpec::all(), &space), Err(ConsequenceError::NotSentence(_))));
        assert!(matches!(
            is_tautology(&p("(forall v. (P(v) sup Q(v))) sup p0"), &ClassSpec::all(), &space),
            Err(ConsequenceError::NotRestricted(_))
        ));
    }
}
