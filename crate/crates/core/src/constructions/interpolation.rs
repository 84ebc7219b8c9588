//! `a /\ b` implies `a sup b`, which implies `a \/ b`, checked exhaustively
//! over a small universe of sentences, every valuation and every table.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::choice::{enumerate_tables, ChoiceTable, ClassSpec, Mode};
use crate::semantics::{check_consequence, eval_scs, ConsequenceError, EvalError, SearchSpace, Valuation, Verdict};
use crate::syntax::Formula;

const KEEP: usize = 8;

/// Sentences over `p0`, `p1` built with `~`, `/\` and `sup`, of depth at
/// most `depth`, without duplicates.
pub fn interpolation_universe(depth: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![vec![Formula::prop("p0"), Formula::prop("p1")]];
    for d in 1..=depth {
        let below: Vec<Formula> = levels.iter().flatten().cloned().collect();
        let prev = &levels[d - 1];
        let mut next = Vec::new();
        for a in prev {
            next.push(Formula::not(a.clone()));
        }
        for a in &below {
            for b in &below {
                if a.depth() == d - 1 || b.depth() == d - 1 {
                    next.push(Formula::and(a.clone(), b.clone()));
                    next.push(Formula::sup(a.clone(), b.clone()));
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationViolation {
    pub left: Formula,
    pub right: Formula,
    pub valuation: Valuation,
    pub table: ChoiceTable,
    /// Truth of the conjunction, the superposition and the disjunction.
    pub values: [bool; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationReport {
    pub sentences: usize,
    pub pairs: u64,
    /// Number of (pair, valuation, table) cases evaluated.
    pub cases: u64,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<InterpolationViolation>,
    /// `p0 \/ p1` does not entail `p0 sup p1`.
    pub or_to_sup: Verdict,
    /// `p0 sup p1` does not entail `p0 /\ p1`.
    pub sup_to_and: Verdict,
}

impl InterpolationReport {
    pub fn holds(&self) -> bool {
        self.violation_count == 0
            && self.or_to_sup.countermodel.as_ref().is_some_and(|c| c.reverified)
            && self.sup_to_and.countermodel.as_ref().is_some_and(|c| c.reverified)
    }
}

/// Runs the check over every ordered pair of `universe`. `jobs = 0` uses the
/// global thread pool.
pub fn interpolation_report(universe: &[Formula], jobs: usize) -> Result<InterpolationReport, ConsequenceError> {
    let atoms = vec!["p0".to_string(), "p1".to_string()];
    let worlds: Vec<Valuation> = Valuation::all(&atoms).collect();
    let structures: Vec<_> = worlds.iter().map(Valuation::to_structure).collect();
    let spec = ClassSpec::all();
    let cases = AtomicU64::new(0);
    let count = AtomicU64::new(0);
    let kept: Mutex<Vec<(usize, usize, InterpolationViolation)>> = Mutex::new(Vec::new());

    let run = || -> Result<(), EvalError> {
        (0..universe.len()).into_par_iter().try_for_each(|i| {
            for (j, b) in universe.iter().enumerate() {
                let a = &universe[i];
                let trio = [
                    Formula::and(a.clone(), b.clone()),
                    Formula::sup(a.clone(), b.clone()),
                    Formula::or(a.clone(), b.clone()),
                ];
                for (w, m) in worlds.iter().zip(&structures) {
                    let task = |t: &ChoiceTable| -> Result<[bool; 3], EvalError> {
                        Ok([eval_scs(m, t, &trio[0])?, eval_scs(m, t, &trio[1])?, eval_scs(m, t, &trio[2])?])
                    };
                    for leaf in enumerate_tables(ChoiceTable::new(Mode::Sentence), &spec, task) {
                        let (table, v) = leaf?;
                        cases.fetch_add(1, Ordering::Relaxed);
                        if (v[0] && !v[1]) || (v[1] && !v[2]) {
                            count.fetch_add(1, Ordering::Relaxed);
                            let mut k = kept.lock().expect("unpoisoned");
                            k.push((
                                i,
                                j,
                                InterpolationViolation {
                                    left: a.clone(),
                                    right: b.clone(),
                                    valuation: w.clone(),
                                    table,
                                    values: v,
                                },
                            ));
                        }
                    }
                }
            }
            Ok(())
        })
    };
    if jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(run)?,
            Err(_) => run()?,
        }
    } else {
        run()?;
    }
    let mut kept = kept.into_inner().expect("unpoisoned");
    kept.sort_by_key(|(i, j, _)| (*i, *j));
    let violations = kept.into_iter().take(KEEP).map(|(_, _, v)| v).collect();

    let space = SearchSpace::default();
    let (p0, p1) = (Formula::prop("p0"), Formula::prop("p1"));
    let or_to_sup = check_consequence(
        &[Formula::or(p0.clone(), p1.clone())],
        &Formula::sup(p0.clone(), p1.clone()),
        &spec,
        &space,
    )?;
    let sup_to_and = check_consequence(&[Formula::sup(p0.clone(), p1.clone())], &Formula::and(p0, p1), &spec, &space)?;
    Ok(InterpolationReport {
        sentences: universe.len(),
        pairs: (universe.len() * universe.len()) as u64,
        cases: cases.into_inner(),
        violation_count: count.into_inner(),
        violations,
        or_to_sup,
        sup_to_and,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_sizes() {
        assert_eq!(interpolation_universe(0).len(), 2);
        assert_eq!(interpolation_universe(1).len(), 12);
        assert_eq!(interpolation_universe(2).len(), 302);
    }

    #[test]
    fn depth_one_holds() {
        let r = interpolation_report(&interpolation_universe(1), 0).unwrap();
        assert_eq!(r.pairs, 144);
        assert!(r.holds());
    }
}
