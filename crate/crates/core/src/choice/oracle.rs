//! Classical logical equivalence, decided by truth tables or by exhaustive
//! search over small structures.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::semantics::{count_structures, eval_classical, structures, Structure, Valuation};
use crate::syntax::{Formula, Signature};

/// Upper bound on the number of (structure, assignment) points in one fingerprint.
const MAX_POINTS: u128 = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the truth-table oracle cannot decide the first-order formula `{0}`")]
    NotPropositional(String),
    #[error("`{0}` contains a superposition")]
    NotClassical(String),
    #[error("the search space for `{formula}` is too large ({points} points)")]
    TooLarge { formula: String, points: String },
    #[error("evaluation failed: {0}")]
    Eval(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleKind {
    PropTruthTable,
    BoundedFo { max_domain: usize, sig: Signature },
}

type Cache = HashMap<(Formula, Vec<String>), Arc<Vec<bool>>>;

/// Decides `a ~ b`. The bounded first-order kind is exact only up to the
/// domain bound; reports state the bound through [`EquivOracle::describe`].
#[derive(Clone, Debug)]
pub struct EquivOracle {
    kind: OracleKind,
    cache: Arc<Mutex<Cache>>,
}

impl PartialEq for EquivOracle {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for EquivOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl EquivOracle {
    pub fn prop() -> Self {
        EquivOracle { kind: OracleKind::PropTruthTable, cache: Arc::default() }
    }

    pub fn bounded_fo(max_domain: usize, sig: Signature) -> Self {
        EquivOracle { kind: OracleKind::BoundedFo { max_domain: max_domain.max(1), sig }, cache: Arc::default() }
    }

    pub fn kind(&self) -> &OracleKind {
        &self.kind
    }

    pub fn max_domain(&self) -> Option<usize> {
        match self.kind {
            OracleKind::PropTruthTable => None,
            OracleKind::BoundedFo { max_domain, .. } => Some(max_domain),
        }
    }

    /// Same bound, larger signature, fresh cache.
    pub fn with_signature(&self, extra: &Signature) -> Self {
        match &self.kind {
            OracleKind::PropTruthTable => EquivOracle::prop(),
            OracleKind::BoundedFo { max_domain, sig } => EquivOracle::bounded_fo(*max_domain, sig.union(extra)),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            OracleKind::PropTruthTable => "truth-table".to_string(),
            OracleKind::BoundedFo { max_domain, .. } => format!("bounded-fo(max_domain={max_domain})"),
        }
    }

    pub fn equivalent(&self, a: &Formula, b: &Formula) -> Result<bool, OracleError> {
        let c = self.classes(&[a.clone(), b.clone()])?;
        Ok(c[0] == c[1])
    }

    /// Partition of `formulas` into equivalence classes: entry `i` is the
    /// class index of `formulas[i]`, numbered by first occurrence.
    pub fn classes(&self, formulas: &[Formula]) -> Result<Vec<usize>, OracleError> {
        let prints = self.fingerprints(formulas)?;
        let mut seen: HashMap<&[bool], usize> = HashMap::new();
        Ok(prints
            .iter()
            .map(|p| {
                let next = seen.len();
                *seen.entry(p.as_slice()).or_insert(next)
            })
            .collect())
    }

    fn fingerprints(&self, formulas: &[Formula]) -> Result<Vec<Arc<Vec<bool>>>, OracleError> {
        let formulas: Vec<Formula> = formulas.iter().map(|f| f.params_as_constants()).collect();
        if let Some(f) = formulas.iter().find(|f| !f.is_classical()) {
            return Err(OracleError::NotClassical(f.to_string()));
        }
        match &self.kind {
            OracleKind::PropTruthTable => {
                if let Some(f) = formulas.iter().find(|f| !f.is_propositional()) {
                    return Err(OracleError::NotPropositional(f.to_string()));
                }
                let atoms: Vec<String> =
                    formulas.iter().flat_map(|f| f.prop_atoms()).collect::<BTreeSet<_>>().into_iter().collect();
                let vals: Vec<Structure> = Valuation::all(&atoms).map(|v| v.to_structure()).collect();
                let none = Default::default();
                formulas
                    .iter()
                    .map(|f| {
                        vals.iter()
                            .map(|m| eval_classical(m, f, &none).map_err(|e| OracleError::Eval(e.to_string())))
                            .collect::<Result<Vec<bool>, _>>()
                            .map(Arc::new)
                    })
                    .collect()
            }
            OracleKind::BoundedFo { max_domain, sig } => {
                let vars: Vec<String> =
                    formulas.iter().flat_map(|f| f.free_vars()).collect::<BTreeSet<_>>().into_iter().collect();
                let vocab = formulas.iter().fold(Signature::new(), |acc, f| acc.union(&f.vocabulary()));
                let cached = sig.contains(&vocab);
                let sig = if cached { sig.clone() } else { sig.union(&vocab) };
                let mut out = Vec::with_capacity(formulas.len());
                let mut missing = Vec::new();
                {
                    let cache = self.cache.lock().expect("oracle cache");
                    for (i, f) in formulas.iter().enumerate() {
                        match cached.then(|| cache.get(&(f.clone(), vars.clone()))).flatten() {
                            Some(p) => out.push(Some(p.clone())),
                            None => {
                                out.push(None);
                                missing.push(i);
                            }
                        }
                    }
                }
                if !missing.is_empty() {
                    let todo: Vec<&Formula> = missing.iter().map(|&i| &formulas[i]).collect();
                    let prints = bounded_prints(&todo, &vars, &sig, *max_domain)?;
                    let mut cache = self.cache.lock().expect("oracle cache");
                    for (&i, p) in missing.iter().zip(prints) {
                        let p = Arc::new(p);
                        if cached {
                            cache.insert((formulas[i].clone(), vars.clone()), p.clone());
                        }
                        out[i] = Some(p);
                    }
                }
                Ok(out.into_iter().map(|p| p.expect("filled")).collect())
            }
        }
    }
}

fn bounded_prints(
    formulas: &[&Formula],
    vars: &[String],
    sig: &Signature,
    max_domain: usize,
) -> Result<Vec<Vec<bool>>, OracleError> {
    let mut points: u128 = 0;
    for n in 1..=max_domain {
        let c = count_structures(sig, n).and_then(|c| c.checked_mul((n as u128).checked_pow(vars.len() as u32)?));
        points = c.and_then(|c| points.checked_add(c)).unwrap_or(u128::MAX);
    }
    if points > MAX_POINTS {
        return Err(OracleError::TooLarge {
            formula: formulas.first().map(|f| f.to_string()).unwrap_or_default(),
            points: if points == u128::MAX { "overflow".into() } else { points.to_string() },
        });
    }
    let mut prints = vec![Vec::new(); formulas.len()];
    for n in 1..=max_domain {
        let domain = Structure::standard_domain(n);
        let all = structures(sig, &domain).map_err(|e| OracleError::Eval(e.to_string()))?;
        for m in all {
            let total = n.pow(vars.len() as u32);
            for code in 0..total {
                let mut env = std::collections::BTreeMap::new();
                let mut c = code;
                for v in vars {
                    env.insert(v.clone(), c % n);
                    c /= n;
                }
                for (f, out) in formulas.iter().zip(prints.iter_mut()) {
                    out.push(eval_classical(&m, f, &env).map_err(|e| OracleError::Eval(e.to_string()))?);
                }
            }
        }
    }
    Ok(prints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    #[test]
    fn truth_table_sanity() {
        let o = EquivOracle::prop();
        assert!(o.equivalent(&p("p0"), &p("p0 /\\ p0")).unwrap());
        assert!(o.equivalent(&p("~~p0"), &p("p0")).unwrap());
        assert!(!o.equivalent(&p("p0"), &p("p1")).unwrap());
        assert!(o.equivalent(&p("p0 -> p1"), &p("~p1 -> ~p0")).unwrap());
        assert_eq!(o.classes(&[p("p0"), p("p1"), p("~~p0"), p("p1 \\/ p1")]).unwrap(), vec![0, 1, 0, 1]);
        assert!(matches!(o.equivalent(&p("P(c)"), &p("p0")), Err(OracleError::NotPropositional(_))));
    }

    #[test]
    fn bounded_first_order() {
        let sig = Signature::new().with_constants(["a", "b"]);
        let o = EquivOracle::bounded_fo(3, sig);
        assert!(o.equivalent(&p("a = a"), &p("b = b")).unwrap());
        assert!(!o.equivalent(&p("a = a"), &p("a = b")).unwrap());
        assert!(o.equivalent(&p("a = b"), &p("b = a")).unwrap());
        assert!(o.equivalent(&p("forall v. P(v)"), &p("~exists v. ~P(v)")).unwrap());
        assert!(!o.equivalent(&p("P(v1)"), &p("P(v2)")).unwrap());
        assert!(o.equivalent(&p("P(@e0) \\/ ~P(@e0)"), &p("a = a")).unwrap());
        assert!(!o.equivalent(&p("P(@e0)"), &p("P(@e1)")).unwrap());
    }
}
