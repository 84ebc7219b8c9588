//! Axiom-scheme recognition on primitive forms.

use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{Formula, Term};

use super::{LineErrorKind, Scheme};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Formula(Formula),
    Term(Term),
    Var(String),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Formula(x) => write!(f, "{x}"),
            Binding::Term(t) => write!(f, "{t}"),
            Binding::Var(v) => f.write_str(v),
        }
    }
}

/// Metavariable assignment of a matched instance.
pub type Bindings = BTreeMap<String, Binding>;

fn meta(name: &str) -> Formula {
    Formula::prop(&format!("?{name}"))
}

fn pattern(s: Scheme) -> Option<Formula> {
    let (a, b, c) = (meta("phi"), meta("psi"), meta("sigma"));
    let imp = Formula::implies;
    let not = Formula::not;
    let sup = Formula::sup;
    let p = match s {
        Scheme::P1 => imp(a.clone(), imp(b, a)),
        Scheme::P2 => imp(imp(a.clone(), imp(b.clone(), c.clone())), imp(imp(a.clone(), b), imp(a, c))),
        Scheme::P3 => imp(imp(not(a.clone()), not(b.clone())), imp(imp(not(a.clone()), b), a)),
        Scheme::S1 => imp(Formula::and(a.clone(), b.clone()), sup(a, b)),
        Scheme::S2 => imp(sup(a.clone(), b.clone()), Formula::or(a, b)),
        Scheme::S3 => imp(sup(a.clone(), b.clone()), sup(b, a)),
        Scheme::S4 => imp(sup(sup(a.clone(), b.clone()), c.clone()), sup(a, sup(b, c))),
        Scheme::S5 => {
            imp(Formula::and(a.clone(), not(b.clone())), Formula::iff(sup(a.clone(), b.clone()), sup(not(a), not(b))))
        }
        _ => return None,
    };
    Some(p.primitive())
}

fn pmatch(pat: &Formula, target: &Formula, b: &mut BTreeMap<String, Formula>) -> bool {
    use Formula::*;
    match (pat, target) {
        (Prop(name), _) if name.starts_with('?') => {
            let key = name[1..].to_string();
            match b.get(&key) {
                Some(bound) => bound == target,
                None => {
                    b.insert(key, target.clone());
                    true
                }
            }
        }
        (Not(x), Not(y)) => pmatch(x, y, b),
        (Implies(x1, x2), Implies(y1, y2)) | (Sup(x1, x2), Sup(y1, y2)) => pmatch(x1, y1, b) && pmatch(x2, y2, b),
        (Forall(v, x), Forall(w, y)) => v == w && pmatch(x, y, b),
        _ => pat == target,
    }
}

/// Bindings of `phi` as an instance of `scheme`, or `None`.
pub fn match_axiom(phi: &Formula, scheme: Scheme) -> Option<Bindings> {
    try_match(phi, scheme).ok()
}

pub(crate) fn try_match(phi: &Formula, scheme: Scheme) -> Result<Bindings, LineErrorKind> {
    let target = phi.primitive();
    if let Some(pat) = pattern(scheme) {
        let mut b = BTreeMap::new();
        return if pmatch(&pat, &target, &mut b) {
            Ok(b.into_iter().map(|(k, v)| (k, Binding::Formula(v))).collect())
        } else {
            Err(LineErrorKind::NoMatch(scheme))
        };
    }
    let no = || LineErrorKind::NoMatch(scheme);
    let side = |reason: String| LineErrorKind::SideCondition { scheme, reason };
    let mut out = Bindings::new();
    use Formula::*;
    match scheme {
        Scheme::UI => {
            let Implies(lhs, inst) = &target else { return Err(no()) };
            let Forall(v, body) = lhs.as_ref() else { return Err(no()) };
            let t = match candidate_term(body, v, inst, &mut Vec::new()) {
                Some(t) => t,
                None if body.as_ref() == inst.as_ref() && !body.has_free(v) => Term::var(v),
                None => return Err(no()),
            };
            if body.has_free(v) && !t.is_closed() {
                return Err(side(format!("the term {t} is not closed")));
            }
            match body.substitute(v, &t) {
                Ok(s) if &s == inst.as_ref() => {}
                Ok(_) => return Err(no()),
                Err(e) => return Err(side(e.to_string())),
            }
            out.insert("v".into(), Binding::Var(v.clone()));
            out.insert("phi".into(), Binding::Formula((**body).clone()));
            out.insert("t".into(), Binding::Term(t));
        }
        Scheme::D => {
            let Implies(lhs, rhs) = &target else { return Err(no()) };
            let Forall(v, inner) = lhs.as_ref() else { return Err(no()) };
            let Implies(a, b) = inner.as_ref() else { return Err(no()) };
            let Implies(a2, rest) = rhs.as_ref() else { return Err(no()) };
            let Forall(v2, b2) = rest.as_ref() else { return Err(no()) };
            if v != v2 || a != a2 || b != b2 {
                return Err(no());
            }
            if a.has_free(v) {
                return Err(side(format!("{v} is free in {a}")));
            }
            out.insert("v".into(), Binding::Var(v.clone()));
            out.insert("phi".into(), Binding::Formula((**a).clone()));
            out.insert("psi".into(), Binding::Formula((**b).clone()));
        }
        Scheme::I1 => {
            let Eq(l, r) = &target else { return Err(no()) };
            if l != r {
                return Err(no());
            }
            out.insert("t".into(), Binding::Term(l.clone()));
        }
        Scheme::I2 => {
            let Implies(x, y) = &target else { return Err(no()) };
            let (Eq(a, b), Eq(b2, a2)) = (x.as_ref(), y.as_ref()) else { return Err(no()) };
            if a != a2 || b != b2 {
                return Err(no());
            }
            out.insert("s".into(), Binding::Term(a.clone()));
            out.insert("t".into(), Binding::Term(b.clone()));
        }
        Scheme::I3 => {
            let Implies(x, rest) = &target else { return Err(no()) };
            let Implies(y, z) = rest.as_ref() else { return Err(no()) };
            let (Eq(a, b), Eq(b2, c), Eq(a2, c2)) = (x.as_ref(), y.as_ref(), z.as_ref()) else {
                return Err(no());
            };
            if a != a2 || b != b2 || c != c2 {
                return Err(no());
            }
            out.insert("r".into(), Binding::Term(a.clone()));
            out.insert("s".into(), Binding::Term(b.clone()));
            out.insert("t".into(), Binding::Term(c.clone()));
        }
        Scheme::I4 | Scheme::I5 => {
            let Forall(v, rest) = &target else { return Err(no()) };
            let Forall(u, rest) = rest.as_ref() else { return Err(no()) };
            let Implies(eq, body) = rest.as_ref() else { return Err(no()) };
            if *eq.as_ref() != Formula::eq(Term::var(v), Term::var(u)) || v == u {
                return Err(no());
            }
            out.insert("v".into(), Binding::Var(v.clone()));
            out.insert("u".into(), Binding::Var(u.clone()));
            let swap: BTreeMap<String, Term> = [(v.clone(), Term::var(u))].into_iter().collect();
            if scheme == Scheme::I4 {
                let Eq(s, r) = body.as_ref() else { return Err(no()) };
                if s.substitute_all(&swap) != *r {
                    return Err(no());
                }
                out.insert("t".into(), Binding::Term(s.clone()));
            } else {
                let Implies(a, b) = body.as_ref() else { return Err(no()) };
                match a.substitute(v, &Term::var(u)) {
                    Ok(s) if s == **b => {}
                    Ok(_) => return Err(no()),
                    Err(e) => return Err(side(e.to_string())),
                }
                out.insert("phi".into(), Binding::Formula((**a).clone()));
            }
        }
        _ => unreachable!("pattern schemes handled above"),
    }
    Ok(out)
}

/// The term standing, in `inst`, where `body` has a free `v`.
fn candidate_term(body: &Formula, v: &str, inst: &Formula, bound: &mut Vec<String>) -> Option<Term> {
    use Formula::*;
    match (body, inst) {
        (Pred(p, xs), Pred(q, ys)) if p == q && xs.len() == ys.len() => {
            xs.iter().zip(ys).find_map(|(x, y)| term_candidate(x, v, y, bound))
        }
        (Eq(a, b), Eq(c, d)) => term_candidate(a, v, c, bound).or_else(|| term_candidate(b, v, d, bound)),
        (Not(a), Not(b)) => candidate_term(a, v, b, bound),
        (Implies(a1, a2), Implies(b1, b2))
        | (Sup(a1, a2), Sup(b1, b2))
        | (And(a1, a2), And(b1, b2))
        | (Or(a1, a2), Or(b1, b2))
        | (Iff(a1, a2), Iff(b1, b2)) => candidate_term(a1, v, b1, bound).or_else(|| candidate_term(a2, v, b2, bound)),
        (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) if x == y => {
            bound.push(x.clone());
            let r = candidate_term(a, v, b, bound);
            bound.pop();
            r
        }
        _ => None,
    }
}

fn term_candidate(a: &Term, v: &str, b: &Term, bound: &[String]) -> Option<Term> {
    match (a, b) {
        (Term::Var(x), _) if x == v && !bound.iter().any(|y| y == v) => Some(b.clone()),
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            xs.iter().zip(ys).find_map(|(x, y)| term_candidate(x, v, y, bound))
        }
        _ => None,
    }
}
