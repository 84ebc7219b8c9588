//! Terms, formulas, signatures and the classical / basic / restricted hierarchy.

mod parse;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse, parse_extending, parse_lenient, ParseError, ParseErrorKind};

/// A term. Parameters name domain elements of a structure and print with a
/// leading `@`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
    Param(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(String),
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Sup(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntaxClass {
    Classical,
    Basic,
    Restricted,
    Unrestricted,
}

impl fmt::Display for SyntaxClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SyntaxClass::Classical => "classical",
            SyntaxClass::Basic => "basic",
            SyntaxClass::Restricted => "restricted",
            SyntaxClass::Unrestricted => "unrestricted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituting {term} for {var} would capture a variable under the binder {binder}")]
    Capture { var: String, term: String, binder: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is declared in more than one category")]
    Clash(String),
    #[error("symbol `{0}` uses the reserved parameter prefix `@`")]
    Reserved(String),
    #[error("symbol `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("symbol `{name}` declared with arities {left} and {right}")]
    ArityConflict { name: String, left: usize, right: usize },
}

/// The non-logical vocabulary of a language.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub constants: BTreeSet<String>,
    #[serde(default)]
    pub functions: BTreeMap<String, usize>,
    #[serde(default)]
    pub predicates: BTreeMap<String, usize>,
    #[serde(default)]
    pub prop_atoms: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_constants<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.constants.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.insert(name.to_string(), arity);
        self
    }

    pub fn with_props<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.prop_atoms.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
            && self.functions.is_empty()
            && self.predicates.is_empty()
            && self.prop_atoms.is_empty()
    }

    /// True when only propositional atoms are declared.
    pub fn is_propositional(&self) -> bool {
        self.constants.is_empty() && self.functions.is_empty() && self.predicates.is_empty()
    }

    pub fn validate(&self) -> Result<(), SignatureError> {
        let mut seen = BTreeSet::new();
        let names = self
            .constants
            .iter()
            .chain(self.functions.keys())
            .chain(self.predicates.keys())
            .chain(self.prop_atoms.iter());
        for name in names {
            if name.starts_with('@') {
                return Err(SignatureError::Reserved(name.clone()));
            }
            if !seen.insert(name) {
                return Err(SignatureError::Clash(name.clone()));
            }
        }
        for (name, &arity) in self.functions.iter().chain(self.predicates.iter()) {
            if arity == 0 {
                return Err(SignatureError::ZeroArity(name.clone()));
            }
        }
        Ok(())
    }

    pub fn merge(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut out = self.clone();
        out.constants.extend(other.constants.iter().cloned());
        out.prop_atoms.extend(other.prop_atoms.iter().cloned());
        for (table, theirs) in [(&mut out.functions, &other.functions), (&mut out.predicates, &other.predicates)] {
            for (name, &arity) in theirs {
                match table.get(name) {
                    Some(&a) if a != arity => {
                        return Err(SignatureError::ArityConflict { name: name.clone(), left: a, right: arity })
                    }
                    _ => {
                        table.insert(name.clone(), arity);
                    }
                }
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Union without validation; arities already present win. Used for
    /// internal vocabularies that carry `@` constants.
    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        out.constants.extend(other.constants.iter().cloned());
        out.prop_atoms.extend(other.prop_atoms.iter().cloned());
        for (n, a) in &other.functions {
            out.functions.entry(n.clone()).or_insert(*a);
        }
        for (n, a) in &other.predicates {
            out.predicates.entry(n.clone()).or_insert(*a);
        }
        out
    }

    pub fn contains(&self, other: &Signature) -> bool {
        other.constants.is_subset(&self.constants)
            && other.prop_atoms.is_subset(&self.prop_atoms)
            && other.functions.iter().all(|(n, a)| self.functions.get(n) == Some(a))
            && other.predicates.iter().all(|(n, a)| self.predicates.get(n) == Some(a))
    }
}

/// Variables are written `u`..`z` optionally followed by digits, `_` or `'`.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some('u'..='z') => chars.all(|c| c.is_ascii_digit() || c == '_' || c == '\''),
        _ => false,
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn param(element: &str) -> Term {
        Term::Param(element.to_string())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Param(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) | Term::Param(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Const(_) | Term::Param(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(var)),
        }
    }

    pub fn substitute_all(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) | Term::Param(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute_all(map)).collect()),
        }
    }

    fn collect_vocabulary(&self, sig: &mut Signature, params: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                sig.constants.insert(c.clone());
            }
            Term::Param(p) => {
                params.insert(p.clone());
            }
            Term::App(f, args) => {
                sig.functions.insert(f.clone(), args.len());
                args.iter().for_each(|a| a.collect_vocabulary(sig, params));
            }
        }
    }

    /// Replaces every parameter by a constant carrying the `@` name, so that
    /// parameters can be interpreted freely.
    pub fn params_as_constants(&self) -> Term {
        match self {
            Term::Param(p) => Term::Const(format!("@{p}")),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(Term::params_as_constants).collect()),
        }
    }
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(name.to_string(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(bx(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(bx(a), bx(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(bx(a), bx(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(bx(a), bx(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(bx(a), bx(b))
    }

    pub fn sup(a: Formula, b: Formula) -> Formula {
        Formula::Sup(bx(a), bx(b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), bx(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), bx(body))
    }

    /// Conjunction of a nonempty list, associated to the left.
    pub fn conjunction(mut parts: Vec<Formula>) -> Option<Formula> {
        if parts.is_empty() {
            return None;
        }
        let first = parts.remove(0);
        Some(parts.into_iter().fold(first, Formula::and))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => vec![],
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b)
            | Formula::Sup(a, b) => vec![a, b],
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..))
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    /// All subformulas in preorder, the formula itself first.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let kids = out[i].children();
            out.extend(kids);
            i += 1;
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn has_sup(&self) -> bool {
        match self {
            Formula::Sup(..) => true,
            _ => self.children().iter().any(|c| c.has_sup()),
        }
    }

    pub fn is_classical(&self) -> bool {
        !self.has_sup()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when the formula mentions only propositional atoms.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Prop(_) => true,
            Formula::Pred(..) | Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => false,
            _ => self.children().iter().all(|c| c.is_propositional()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        fn add(t: &Term, bound: &[String], out: &mut BTreeSet<String>) {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        }
        match self {
            Formula::Prop(_) => {}
            Formula::Pred(_, args) => args.iter().for_each(|t| add(t, bound, out)),
            Formula::Eq(l, r) => {
                add(l, bound, out);
                add(r, bound, out);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => self.children().iter().for_each(|c| c.collect_free(bound, out)),
        }
    }

    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Formula::Prop(_) => false,
            Formula::Pred(_, args) => args.iter().any(|t| t.contains_var(var)),
            Formula::Eq(l, r) => l.contains_var(var) || r.contains_var(var),
            Formula::Forall(v, a) | Formula::Exists(v, a) => v != var && a.has_free(var),
            _ => self.children().iter().any(|c| c.has_free(var)),
        }
    }

    /// Replaces the free occurrences of `var` by `t`.
    pub fn substitute(&self, var: &str, t: &Term) -> Result<Formula, SubstError> {
        let mut map = BTreeMap::new();
        map.insert(var.to_string(), t.clone());
        self.substitute_all(&map)
    }

    /// Simultaneous capture-avoiding substitution. Fails instead of renaming
    /// when a binder would capture a variable of an inserted term.
    pub fn substitute_all(&self, map: &BTreeMap<String, Term>) -> Result<Formula, SubstError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        Ok(match self {
            Formula::Prop(_) => self.clone(),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| t.substitute_all(map)).collect()),
            Formula::Eq(l, r) => Formula::Eq(l.substitute_all(map), r.substitute_all(map)),
            Formula::Not(a) => Formula::not(a.substitute_all(map)?),
            Formula::And(a, b) => Formula::and(a.substitute_all(map)?, b.substitute_all(map)?),
            Formula::Or(a, b) => Formula::or(a.substitute_all(map)?, b.substitute_all(map)?),
            Formula::Implies(a, b) => Formula::implies(a.substitute_all(map)?, b.substitute_all(map)?),
            Formula::Iff(a, b) => Formula::iff(a.substitute_all(map)?, b.substitute_all(map)?),
            Formula::Sup(a, b) => Formula::sup(a.substitute_all(map)?, b.substitute_all(map)?),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let mut inner = map.clone();
                inner.remove(v);
                inner.retain(|x, _| a.has_free(x));
                for (x, t) in &inner {
                    if t.contains_var(v) {
                        return Err(SubstError::Capture { var: x.clone(), term: t.to_string(), binder: v.clone() });
                    }
                }
                let body = bx(a.substitute_all(&inner)?);
                match self {
                    Formula::Forall(..) => Formula::Forall(v.clone(), body),
                    _ => Formula::Exists(v.clone(), body),
                }
            }
        })
    }

    /// The tightest syntax class containing the formula.
    pub fn classify(&self) -> SyntaxClass {
        use SyntaxClass::*;
        match self {
            Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => Classical,
            Formula::Not(a) => a.classify(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.classify().max(b.classify())
            }
            Formula::Sup(a, b) => {
                if a.classify() <= Basic && b.classify() <= Basic {
                    Basic
                } else {
                    Unrestricted
                }
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => match a.classify() {
                Classical => Classical,
                Basic | Restricted => Restricted,
                Unrestricted => Unrestricted,
            },
        }
    }

    /// Injective textual key; equal keys mean structurally equal formulas.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }

    /// Rewrites the defined connectives into `~`, `->`, `sup` and `forall`:
    /// `a /\ b` is `~(a -> ~b)`, `a \/ b` is `~a -> b`, `a <-> b` is
    /// `(a -> b) /\ (b -> a)` and `exists v. a` is `~forall v. ~a`.
    pub fn primitive(&self) -> Formula {
        match self {
            Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.primitive()),
            Formula::Implies(a, b) => Formula::implies(a.primitive(), b.primitive()),
            Formula::Sup(a, b) => Formula::sup(a.primitive(), b.primitive()),
            Formula::Forall(v, a) => Formula::forall(v, a.primitive()),
            Formula::And(a, b) => prim_and(a.primitive(), b.primitive()),
            Formula::Or(a, b) => Formula::implies(Formula::not(a.primitive()), b.primitive()),
            Formula::Iff(a, b) => {
                let (a, b) = (a.primitive(), b.primitive());
                prim_and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
            }
            Formula::Exists(v, a) => Formula::not(Formula::forall(v, Formula::not(a.primitive()))),
        }
    }

    pub fn is_primitive(&self) -> bool {
        match self {
            Formula::And(..) | Formula::Or(..) | Formula::Iff(..) | Formula::Exists(..) => false,
            _ => self.children().iter().all(|c| c.is_primitive()),
        }
    }

    pub fn prop_atoms(&self) -> BTreeSet<String> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Prop(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    /// The symbols occurring in the formula, parameters excluded.
    pub fn vocabulary(&self) -> Signature {
        let mut sig = Signature::new();
        let mut params = BTreeSet::new();
        self.collect_vocabulary(&mut sig, &mut params);
        sig
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut sig = Signature::new();
        let mut params = BTreeSet::new();
        self.collect_vocabulary(&mut sig, &mut params);
        params
    }

    fn collect_vocabulary(&self, sig: &mut Signature, params: &mut BTreeSet<String>) {
        match self {
            Formula::Prop(p) => {
                sig.prop_atoms.insert(p.clone());
            }
            Formula::Pred(p, args) => {
                sig.predicates.insert(p.clone(), args.len());
                args.iter().for_each(|t| t.collect_vocabulary(sig, params));
            }
            Formula::Eq(l, r) => {
                l.collect_vocabulary(sig, params);
                r.collect_vocabulary(sig, params);
            }
            _ => self.children().iter().for_each(|c| c.collect_vocabulary(sig, params)),
        }
    }

    pub fn params_as_constants(&self) -> Formula {
        self.map_terms(&|t| t.params_as_constants())
    }

    pub(crate) fn map_terms(&self, g: &dyn Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Prop(_) => self.clone(),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(g).collect()),
            Formula::Eq(l, r) => Formula::Eq(g(l), g(r)),
            Formula::Not(a) => Formula::not(a.map_terms(g)),
            Formula::And(a, b) => Formula::and(a.map_terms(g), b.map_terms(g)),
            Formula::Or(a, b) => Formula::or(a.map_terms(g), b.map_terms(g)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(g), b.map_terms(g)),
            Formula::Iff(a, b) => Formula::iff(a.map_terms(g), b.map_terms(g)),
            Formula::Sup(a, b) => Formula::sup(a.map_terms(g), b.map_terms(g)),
            Formula::Forall(v, a) => Formula::forall(v, a.map_terms(g)),
            Formula::Exists(v, a) => Formula::exists(v, a.map_terms(g)),
        }
    }

    /// Universal closure over the free variables in sorted order.
    pub fn universal_closure(&self) -> Formula {
        self.free_vars().into_iter().rev().fold(self.clone(), |acc, v| Formula::forall(&v, acc))
    }
}

fn prim_and(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::implies(a, Formula::not(b)))
}

/// Vocabulary of a set of formulas.
pub fn vocabulary_of<'a, I>(formulas: I) -> Result<Signature, SignatureError>
where
    I: IntoIterator<Item = &'a Formula>,
{
    formulas.into_iter().try_fold(Signature::new(), |acc, f| acc.merge(&f.vocabulary()))
}

/// Formulas serialize as their printed form and deserialize leniently.
impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_lenient(&text).map(|(f, _)| f).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    #[test]
    fn free_vars_examples() {
        assert!(p("p0").free_vars().is_empty());
        let f = p("A(v1) sup B(v2)");
        assert_eq!(f.free_vars(), ["v1", "v2"].iter().map(|s| s.to_string()).collect());
        assert!(p("forall v. (A(v) sup B(v))").free_vars().is_empty());
    }

    #[test]
    fn substitution_examples() {
        let a = p("A(v)");
        assert_eq!(a.substitute("v", &Term::constant("c1")).unwrap(), p("A(c1)"));
        let q = p("forall v. A(v)");
        assert_eq!(q.substitute("v", &Term::constant("c1")).unwrap(), q);
        let mut swap = BTreeMap::new();
        swap.insert("v1".to_string(), Term::var("v2"));
        swap.insert("v2".to_string(), Term::var("v1"));
        assert_eq!(p("A(v1) sup A(v2)").substitute_all(&swap).unwrap(), p("A(v2) sup A(v1)"));
    }

    #[test]
    fn substitution_detects_capture() {
        let f = p("forall u. R(v, u)");
        let err = f.substitute("v", &Term::var("u")).unwrap_err();
        assert!(matches!(err, SubstError::Capture { .. }));
        // no free occurrence, so no capture
        let g = p("forall u. R(u, u)");
        assert_eq!(g.substitute("v", &Term::var("u")).unwrap(), g);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(p("A(c) /\\ ~B(c)").classify(), SyntaxClass::Classical);
        assert_eq!(p("forall v. (A(v) sup B(v))").classify(), SyntaxClass::Restricted);
        assert_eq!(p("(forall v. (A(v) sup B(v))) sup (exists u. C(u))").classify(), SyntaxClass::Unrestricted);
        assert_eq!(p("(forall v. A(v)) sup p0").classify(), SyntaxClass::Basic);
        assert_eq!(p("~(p0 sup p1) /\\ p2").classify(), SyntaxClass::Basic);
    }

    #[test]
    fn keys_distinguish_atoms() {
        assert_ne!(p("p0").canonical_key(), p("p1").canonical_key());
        assert_ne!(p("p0 sup p1").canonical_key(), p("p1 sup p0").canonical_key());
    }

    #[test]
    fn primitive_form() {
        assert_eq!(p("p0 /\\ p1").primitive(), p("~(p0 -> ~p1)"));
        assert_eq!(p("p0 \\/ p1").primitive(), p("~p0 -> p1"));
        assert_eq!(p("exists v. A(v)").primitive(), p("~(forall v. ~A(v))"));
        assert!(p("p0 <-> p1 sup p2").primitive().is_primitive());
    }

    #[test]
    fn signature_validation() {
        let sig = Signature::new().with_constants(["c"]).with_predicate("c", 1);
        assert_eq!(sig.validate(), Err(SignatureError::Clash("c".into())));
        let sig = Signature::new().with_constants(["@e0"]);
        assert!(matches!(sig.validate(), Err(SignatureError::Reserved(_))));
    }

    #[test]
    fn variable_names() {
        for ok in ["v", "u", "v0", "x12", "w'"] {
            assert!(is_variable_name(ok), "{ok}");
        }
        for bad in ["c1", "p0", "val", "A", ""] {
            assert!(!is_variable_name(bad), "{bad}");
        }
    }
}
