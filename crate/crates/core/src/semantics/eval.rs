//! Tarskian truth and the two superposition truth relations.

use std::collections::BTreeMap;

use crate::choice::{ChoiceTable, Mode};
use crate::syntax::{Formula, SyntaxClass, Term};

use super::{EvalError, Structure};

type Env = Vec<(String, usize)>;

fn term(m: &Structure, t: &Term, env: &Env) -> Result<usize, EvalError> {
    match t {
        Term::Var(v) => {
            env.iter().rev().find(|(n, _)| n == v).map(|(_, e)| *e).ok_or_else(|| EvalError::Unbound(v.clone()))
        }
        Term::Const(c) => m.constant(c).ok_or_else(|| EvalError::Uninterpreted(c.clone())),
        Term::Param(p) => m.element(p).ok_or_else(|| EvalError::UnknownElement(p.clone())),
        Term::App(f, args) => {
            let vals = args.iter().map(|a| term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            m.apply(f, &vals).ok_or_else(|| EvalError::Uninterpreted(f.clone()))
        }
    }
}

fn classical(m: &Structure, phi: &Formula, env: &mut Env) -> Result<bool, EvalError> {
    Ok(match phi {
        Formula::Prop(p) => m.prop(p).ok_or_else(|| EvalError::Uninterpreted(p.clone()))?,
        Formula::Pred(p, args) => {
            let vals = args.iter().map(|a| term(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            m.holds(p, &vals).ok_or_else(|| EvalError::Uninterpreted(p.clone()))?
        }
        Formula::Eq(l, r) => term(m, l, env)? == term(m, r, env)?,
        Formula::Not(a) => !classical(m, a, env)?,
        Formula::And(a, b) => classical(m, a, env)? && classical(m, b, env)?,
        Formula::Or(a, b) => classical(m, a, env)? || classical(m, b, env)?,
        Formula::Implies(a, b) => !classical(m, a, env)? || classical(m, b, env)?,
        Formula::Iff(a, b) => classical(m, a, env)? == classical(m, b, env)?,
        Formula::Sup(..) => return Err(EvalError::NotClassical(phi.to_string())),
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let universal = matches!(phi, Formula::Forall(..));
            for x in 0..m.size() {
                env.push((v.clone(), x));
                let r = classical(m, a, env);
                env.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Standard truth of a classical formula under an assignment of its free variables.
pub fn eval_classical(m: &Structure, phi: &Formula, env: &BTreeMap<String, usize>) -> Result<bool, EvalError> {
    if !phi.is_classical() {
        return Err(EvalError::NotClassical(phi.to_string()));
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| !env.contains_key(v)) {
        return Err(EvalError::Unbound(v));
    }
    let mut stack: Env = env.iter().map(|(k, v)| (k.clone(), *v)).collect();
    classical(m, phi, &mut stack)
}

pub(crate) fn eval_closed(m: &Structure, phi: &Formula) -> Result<bool, EvalError> {
    classical(m, phi, &mut Vec::new())
}

/// Truth in the sentence choice semantics: classical parts are evaluated in
/// the structure, a superposition by collapsing both operands and evaluating
/// the chosen one, and a quantifier by instantiating every element as a
/// parameter.
pub fn eval_scs(m: &Structure, f: &ChoiceTable, phi: &Formula) -> Result<bool, EvalError> {
    if f.mode() != Mode::Sentence {
        return Err(EvalError::ModeMismatch { expected: Mode::Sentence, found: f.mode() });
    }
    if phi.classify() > SyntaxClass::Restricted {
        return Err(EvalError::NotRestricted(phi.to_string()));
    }
    if !phi.is_sentence() {
        return Err(EvalError::NotSentence(phi.to_string()));
    }
    scs(m, f, phi)
}

fn scs(m: &Structure, f: &ChoiceTable, phi: &Formula) -> Result<bool, EvalError> {
    if phi.is_classical() {
        return eval_closed(m, phi);
    }
    // Both operands are always evaluated so that the pairs a task touches do
    // not depend on truth values.
    Ok(match phi {
        Formula::Not(a) => !scs(m, f, a)?,
        Formula::And(a, b) => {
            let (x, y) = (scs(m, f, a)?, scs(m, f, b)?);
            x && y
        }
        Formula::Or(a, b) => {
            let (x, y) = (scs(m, f, a)?, scs(m, f, b)?);
            x || y
        }
        Formula::Implies(a, b) => {
            let (x, y) = (scs(m, f, a)?, scs(m, f, b)?);
            !x || y
        }
        Formula::Iff(a, b) => scs(m, f, a)? == scs(m, f, b)?,
        Formula::Sup(a, b) => {
            let chosen = f.choose(&f.collapse(a)?, &f.collapse(b)?)?;
            eval_closed(m, &chosen)?
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let mut results = Vec::with_capacity(m.size());
            for x in m.domain() {
                let inst = a.substitute(v, &Term::Param(x.clone()))?;
                results.push(scs(m, f, &inst)?);
            }
            if matches!(phi, Formula::Forall(..)) {
                results.iter().all(|&r| r)
            } else {
                results.iter().any(|&r| r)
            }
        }
        Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => unreachable!("atoms are classical"),
    })
}

/// Truth in the formula choice semantics: collapse with quantifiers
/// commuting, then evaluate classically.
pub fn eval_fcs(m: &Structure, f: &ChoiceTable, phi: &Formula) -> Result<bool, EvalError> {
    if f.mode() != Mode::Formula {
        return Err(EvalError::ModeMismatch { expected: Mode::Formula, found: f.mode() });
    }
    if !phi.is_sentence() {
        return Err(EvalError::NotSentence(phi.to_string()));
    }
    let collapsed = f.collapse(phi)?;
    eval_closed(m, &collapsed)
}
