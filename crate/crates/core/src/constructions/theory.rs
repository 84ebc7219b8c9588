//! Model building from complete finite theory fragments.
//!
//! A fragment is a subformula-closed set of restricted sentences, closed
//! under instantiation with its constants, together with a marking: marked
//! sentences belong to the theory, unmarked ones have their negation in it.
//! A coherent fragment determines a classical model of its classical part
//! and a choice function `g` such that the pair satisfies the whole fragment
//! under the sentence choice semantics.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::{
    check_class, ChoiceClass, ChoiceError, ChoiceTable, ClassSpec, EquivOracle, Mode, OracleError, Pair, Side,
};
use crate::semantics::{eval_scs, find_model, EvalError, Structure};
use crate::syntax::{is_variable_name, Formula, SubstError, SyntaxClass, Term};

/// Hard cap on the number of sentences for exhaustive marking enumeration.
pub const MAX_ENUMERABLE: usize = 20;
const MAX_CANDIDATES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("`{0}` is not a restricted sentence")]
    NotRestricted(String),
    #[error("`{0}` is not a constant name")]
    BadConstant(String),
    #[error("the fragment has quantifiers but no constants to instantiate them")]
    NoConstants,
    #[error("`{0}` is not in the closure of the fragment")]
    NotInClosure(String),
    #[error("{marks} marks for {sentences} sentences")]
    Arity { sentences: usize, marks: usize },
    #[error("the closure has {0} sentences, too many to enumerate markings")]
    TooLarge(usize),
    #[error("marking of `{0}` disagrees with its immediate subformulas")]
    Boolean(String),
    #[error("marking of `{0}` disagrees with its instances")]
    Quantifier(String),
    #[error("case a7: `{sup}` is in but `{left}` and `{right}` are both out")]
    A7 { sup: String, left: String, right: String },
    #[error("case a8: `{sup}` is out but `{left}` and `{right}` are both in")]
    A8 { sup: String, left: String, right: String },
    #[error("no classical model of the classical part with at most {0} elements")]
    NoModel(usize),
    #[error("`{0}` and `{1}` have equivalent operands but opposite markings")]
    SvClosure(String, String),
    #[error("the superpositions `{0}` and `{1}` demand different choices on one pair")]
    Conflict(String, String),
    #[error("model building supports the classes all and reg, not {0}")]
    UnsupportedClass(ChoiceClass),
    #[error("element `{0}` is not named by a constant")]
    Unnamed(String),
    #[error(transparent)]
    Subst(#[from] SubstError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoryFragment {
    constants: Vec<String>,
    sentences: Vec<Formula>,
    marks: Vec<bool>,
}

/// On-disk form: the seed sentences, the Henkin constants and the closure
/// members that belong to the theory. Closure members not listed are out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FragmentJson {
    #[serde(default)]
    pub constants: Vec<String>,
    pub sentences: Vec<Formula>,
    pub members: Vec<Formula>,
}

/// The subformula closure of `seeds`, with every quantified sentence also
/// contributing its instances at each constant. Duplicates up to primitive
/// form are dropped; the order is breadth-first from the seeds.
pub fn closure(seeds: &[Formula], constants: &[String]) -> Result<Vec<Formula>, TheoryError> {
    for c in constants {
        if c.is_empty() || is_variable_name(c) || !c.chars().next().is_some_and(char::is_alphabetic) {
            return Err(TheoryError::BadConstant(c.clone()));
        }
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue: std::collections::VecDeque<Formula> = seeds.iter().cloned().collect();
    while let Some(f) = queue.pop_front() {
        if !f.is_sentence() || f.classify() > SyntaxClass::Restricted {
            return Err(TheoryError::NotRestricted(f.to_string()));
        }
        if !seen.insert(f.primitive()) {
            continue;
        }
        match &f {
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                if constants.is_empty() {
                    return Err(TheoryError::NoConstants);
                }
                for c in constants {
                    queue.push_back(body.substitute(v, &Term::constant(c))?);
                }
            }
            _ => queue.extend(f.children().into_iter().cloned()),
        }
        out.push(f);
    }
    Ok(out)
}

impl TheoryFragment {
    pub fn new(constants: Vec<String>, sentences: Vec<Formula>, marks: Vec<bool>) -> Result<Self, TheoryError> {
        if sentences.len() != marks.len() {
            return Err(TheoryError::Arity { sentences: sentences.len(), marks: marks.len() });
        }
        let closed = closure(&sentences, &constants)?;
        let have: BTreeSet<Formula> = sentences.iter().map(Formula::primitive).collect();
        if let Some(f) = closed.iter().find(|f| !have.contains(&f.primitive())) {
            return Err(TheoryError::NotInClosure(f.to_string()));
        }
        Ok(TheoryFragment { constants, sentences, marks })
    }

    /// The closure of `seeds` with exactly `members` marked in.
    pub fn from_members(constants: Vec<String>, seeds: &[Formula], members: &[Formula]) -> Result<Self, TheoryError> {
        let sentences = closure(seeds, &constants)?;
        let prims: Vec<Formula> = sentences.iter().map(Formula::primitive).collect();
        let mut marks = vec![false; sentences.len()];
        for m in members {
            let p = m.primitive();
            let i = prims.iter().position(|x| *x == p).ok_or_else(|| TheoryError::NotInClosure(m.to_string()))?;
            marks[i] = true;
        }
        Ok(TheoryFragment { constants, sentences, marks })
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let j: FragmentJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Self::from_members(j.constants, &j.sentences, &j.members).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> FragmentJson {
        FragmentJson { constants: self.constants.clone(), sentences: self.sentences.clone(), members: self.members() }
    }

    /// Every marking of the closure of `seeds`.
    pub fn markings(
        constants: Vec<String>,
        seeds: &[Formula],
    ) -> Result<impl Iterator<Item = TheoryFragment>, TheoryError> {
        let sentences = closure(seeds, &constants)?;
        let n = sentences.len();
        if n > MAX_ENUMERABLE {
            return Err(TheoryError::TooLarge(n));
        }
        Ok((0u64..1 << n).map(move |bits| TheoryFragment {
            constants: constants.clone(),
            sentences: sentences.clone(),
            marks: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }))
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }

    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    pub fn members(&self) -> Vec<Formula> {
        self.sentences.iter().zip(&self.marks).filter(|(_, m)| **m).map(|(f, _)| f.clone()).collect()
    }

    /// The theory as a set of sentences: members, and negations of the rest.
    pub fn theory(&self) -> Vec<Formula> {
        self.sentences
            .iter()
            .zip(&self.marks)
            .map(|(f, &m)| if m { f.clone() } else { Formula::not(f.clone()) })
            .collect()
    }

    /// Marking of a closure member, looked up by primitive form.
    pub fn mark(&self, f: &Formula) -> Option<bool> {
        let p = f.primitive();
        self.sentences.iter().position(|x| x.primitive() == p).map(|i| self.marks[i])
    }

    fn has_quantifiers(&self) -> bool {
        self.sentences.iter().any(Formula::is_quantifier)
    }

    fn get(&self, f: &Formula) -> bool {
        self.mark(f).expect("closure is subformula closed")
    }
}

/// The case of a superposition node, from the markings of `phi sup psi`,
/// `phi` and `psi`.
pub fn sup_case(node: bool, left: bool, right: bool) -> u8 {
    match (node, left, right) {
        (true, true, true) => 1,
        (true, true, false) => 2,
        (true, false, true) => 3,
        (false, false, false) => 4,
        (false, true, false) => 5,
        (false, false, true) => 6,
        (true, false, false) => 7,
        (false, true, true) => 8,
    }
}

fn sup_error(case: u8, node: &Formula, a: &Formula, b: &Formula) -> TheoryError {
    let (sup, left, right) = (node.to_string(), a.to_string(), b.to_string());
    if case == 7 {
        TheoryError::A7 { sup, left, right }
    } else {
        TheoryError::A8 { sup, left, right }
    }
}

/// Coherence of the marking and a classical model of the classical part.
/// When the fragment has quantifiers the model is required to name every
/// element by one of the fragment's constants.
pub fn check_theory_fragment(t: &TheoryFragment, max_domain: usize) -> Result<Structure, TheoryError> {
    for (f, &m) in t.sentences.iter().zip(&t.marks) {
        let ok = match f {
            Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::Not(a) => m != t.get(a),
            Formula::And(a, b) => m == (t.get(a) && t.get(b)),
            Formula::Or(a, b) => m == (t.get(a) || t.get(b)),
            Formula::Implies(a, b) => m == (!t.get(a) || t.get(b)),
            Formula::Iff(a, b) => m == (t.get(a) == t.get(b)),
            Formula::Sup(a, b) => {
                let case = sup_case(m, t.get(a), t.get(b));
                if case >= 7 {
                    return Err(sup_error(case, f, a, b));
                }
                true
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inst = Vec::new();
                for c in &t.constants {
                    inst.push(t.get(&body.substitute(v, &Term::constant(c))?));
                }
                let all = inst.iter().all(|&x| x);
                let any = inst.iter().any(|&x| x);
                if matches!(f, Formula::Forall(..)) {
                    m == all
                } else {
                    m == any
                }
            }
        };
        if !ok {
            return Err(if f.is_quantifier() {
                TheoryError::Quantifier(f.to_string())
            } else {
                TheoryError::Boolean(f.to_string())
            });
        }
    }
    let mut sigma1: Vec<Formula> =
        t.theory().into_iter().zip(&t.sentences).filter(|(_, f)| f.is_classical()).map(|(x, _)| x).collect();
    if t.has_quantifiers() {
        let named = t
            .constants
            .iter()
            .map(|c| Formula::eq(Term::var("v"), Term::constant(c)))
            .reduce(Formula::or)
            .ok_or(TheoryError::NoConstants)?;
        sigma1.push(Formula::forall("v", named));
    }
    let sig = t.sentences.iter().fold(crate::syntax::Signature::new(), |acc, f| acc.union(&f.vocabulary()));
    let sig = t.constants.iter().fold(sig, |acc, c| acc.with_constants([c.as_str()]));
    // Constants the fragment says nothing about are kept apart, as in a term
    // model.
    let mut apart = sigma1.clone();
    for (i, c) in t.constants.iter().enumerate() {
        for d in &t.constants[i + 1..] {
            let eq = Formula::eq(Term::constant(c), Term::constant(d));
            let flipped = Formula::eq(Term::constant(d), Term::constant(c));
            if t.mark(&eq).is_none() && t.mark(&flipped).is_none() {
                apart.push(Formula::not(eq));
            }
        }
    }
    find_model(&apart, &sig, max_domain)
        .or_else(|| find_model(&sigma1, &sig, max_domain))
        .ok_or(TheoryError::NoModel(max_domain))
}

/// Closure of the marking under the superposition-substitution rule: two
/// superpositions of classical sentences whose operands are pairwise
/// equivalent, in either order, must be marked alike.
pub fn check_sv_closure(t: &TheoryFragment, oracle: &EquivOracle) -> Result<(), TheoryError> {
    let sups: Vec<(&Formula, &Formula, &Formula, bool)> = t
        .sentences
        .iter()
        .zip(&t.marks)
        .filter_map(|(f, &m)| match f {
            Formula::Sup(a, b) if a.is_classical() && b.is_classical() => Some((f, &**a, &**b, m)),
            _ => None,
        })
        .collect();
    for (i, (f, a, b, m)) in sups.iter().enumerate() {
        for (g, c, d, n) in &sups[i + 1..] {
            if m == n {
                continue;
            }
            let straight = oracle.equivalent(a, c)? && oracle.equivalent(b, d)?;
            let crossed = !straight && oracle.equivalent(a, d)? && oracle.equivalent(b, c)?;
            if straight || crossed {
                return Err(TheoryError::SvClosure(f.to_string(), g.to_string()));
            }
        }
    }
    Ok(())
}

/// How one superposition node of the fragment fixed an entry of `g`.
#[derive(Clone, Debug, Serialize)]
pub struct SupStep {
    pub sup: Formula,
    /// Collapse of the left operand.
    pub alpha: Formula,
    /// Collapse of the right operand.
    pub beta: Formula,
    /// Case `a1`..`a6`.
    pub case: u8,
    /// Defining clause: 1 picks `alpha`, 2 picks `beta`, 3 is free.
    pub clause: u8,
    pub chosen: Formula,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoryModel {
    pub class: ChoiceClass,
    pub structure: Structure,
    pub table: ChoiceTable,
    pub steps: Vec<SupStep>,
    /// The classical sentences the table is built over.
    pub universe: Vec<Formula>,
}

/// Verdicts on a built model.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TheoryCheck {
    /// For every basic member, marking agrees with truth of its collapse.
    pub lemma: bool,
    /// Sentence choice truth agrees with the marking on every member.
    pub satisfies: bool,
    /// Regularity over the universe; only checked for `reg`.
    pub regular: Option<bool>,
}

impl TheoryCheck {
    pub fn passed(&self) -> bool {
        self.lemma && self.satisfies && self.regular.unwrap_or(true)
    }
}

/// Every collapse `phi` can have under some table.
fn candidates(phi: &Formula, out: &mut Vec<Formula>) -> Result<(), TheoryError> {
    fn go(phi: &Formula) -> Vec<Formula> {
        if phi.is_classical() {
            return vec![phi.clone()];
        }
        let bin = |a: &Formula, b: &Formula, k: fn(Formula, Formula) -> Formula| {
            let (xs, ys) = (go(a), go(b));
            let mut v = Vec::new();
            for x in &xs {
                for y in &ys {
                    v.push(k(x.clone(), y.clone()));
                }
            }
            v
        };
        match phi {
            Formula::Not(a) => go(a).into_iter().map(Formula::not).collect(),
            Formula::And(a, b) => bin(a, b, Formula::and),
            Formula::Or(a, b) => bin(a, b, Formula::or),
            Formula::Implies(a, b) => bin(a, b, Formula::implies),
            Formula::Iff(a, b) => bin(a, b, Formula::iff),
            Formula::Sup(a, b) => {
                let mut v = go(a);
                v.extend(go(b));
                v
            }
            _ => vec![phi.clone()],
        }
    }
    let c = go(phi);
    if out.len() + c.len() > MAX_CANDIDATES {
        return Err(TheoryError::TooLarge(out.len() + c.len()));
    }
    out.extend(c);
    Ok(())
}

fn dedup(v: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    v.into_iter().filter(|f| seen.insert(f.primitive())).collect()
}

/// Representative chooser on equivalence classes: the member with the least
/// canonical key represents its class, and of two representatives the
/// smaller key wins.
struct Classes {
    index: HashMap<Formula, usize>,
    rep: Vec<Formula>,
}

impl Classes {
    fn new(universe: &[Formula], oracle: &EquivOracle) -> Result<Self, TheoryError> {
        let ids = oracle.classes(universe)?;
        let n = ids.iter().max().map_or(0, |m| m + 1);
        let mut rep: Vec<Option<Formula>> = vec![None; n];
        let mut index = HashMap::new();
        for (f, &i) in universe.iter().zip(&ids) {
            let p = f.primitive();
            if rep[i].as_ref().is_none_or(|r| p.canonical_key() < r.canonical_key()) {
                rep[i] = Some(p.clone());
            }
            index.insert(p, i);
        }
        Ok(Classes { index, rep: rep.into_iter().map(|r| r.expect("class has a member")).collect() })
    }

    fn of(&self, f: &Formula) -> usize {
        self.index[&f.primitive()]
    }

    /// Winner class of `g0` on two distinct classes.
    fn g0(&self, a: usize, b: usize) -> usize {
        if self.rep[a].canonical_key() <= self.rep[b].canonical_key() {
            a
        } else {
            b
        }
    }
}

/// Builds a choice function for the fragment. `all` resolves free choices
/// by the canonically smaller sentence; `reg` resolves them through the
/// representative chooser and extends the table to a regular total table on
/// the universe of candidate collapses.
pub fn build_choice_from_theory(
    t: &TheoryFragment,
    spec: &ClassSpec,
    max_domain: usize,
) -> Result<TheoryModel, TheoryError> {
    let regular = match spec.class {
        ChoiceClass::AllF => false,
        ChoiceClass::Reg => true,
        c => return Err(TheoryError::UnsupportedClass(c)),
    };
    let structure = check_theory_fragment(t, max_domain)?;
    let basic_sups: Vec<(usize, &Formula, &Formula, &Formula)> = {
        let mut v: Vec<_> = t
            .sentences
            .iter()
            .enumerate()
            .filter_map(|(i, f)| match f {
                Formula::Sup(a, b) => Some((i, f, &**a, &**b)),
                _ => None,
            })
            .collect();
        v.sort_by_key(|(_, f, _, _)| f.size());
        v
    };
    let mut raw = Vec::new();
    for (_, _, a, b) in &basic_sups {
        candidates(a, &mut raw)?;
        candidates(b, &mut raw)?;
    }
    let universe = dedup(raw);
    let classes = if regular {
        let oracle = spec.oracle()?;
        check_sv_closure(t, oracle)?;
        Some(Classes::new(&universe, oracle)?)
    } else {
        None
    };

    let mut g = ChoiceTable::new(Mode::Sentence);
    let mut origin: BTreeMap<Pair, Formula> = BTreeMap::new();
    // Winner class per ordered class pair (smaller id first), with the node
    // that fixed it.
    let mut class_winner: BTreeMap<(usize, usize), (usize, Formula)> = BTreeMap::new();
    let mut steps = Vec::new();
    for &(i, node, a, b) in &basic_sups {
        let alpha = g.collapse(a)?;
        let beta = g.collapse(b)?;
        let case = sup_case(t.marks[i], t.get(a), t.get(b));
        let Some(pair) = Pair::new(&alpha, &beta) else {
            steps.push(SupStep { sup: node.clone(), alpha: alpha.clone(), beta, case, clause: 3, chosen: alpha });
            continue;
        };
        let (clause, chosen) = match case {
            2 | 6 => (1, alpha.clone()),
            3 | 5 => (2, beta.clone()),
            _ => {
                let pick = match &classes {
                    None => pair.first().clone(),
                    Some(cl) => {
                        let (ca, cb) = (cl.of(&alpha), cl.of(&beta));
                        if ca == cb {
                            pair.first().clone()
                        } else if cl.g0(ca, cb) == ca {
                            alpha.clone()
                        } else {
                            beta.clone()
                        }
                    }
                };
                (3, pick)
            }
        };
        if let Some(cl) = &classes {
            let (ca, cb) = (cl.of(&alpha), cl.of(&beta));
            if ca != cb {
                let key = (ca.min(cb), ca.max(cb));
                let won = cl.of(&chosen);
                match class_winner.get(&key) {
                    Some((w, other)) if *w != won => {
                        return Err(TheoryError::Conflict(other.to_string(), node.to_string()));
                    }
                    _ => {
                        class_winner.insert(key, (won, node.clone()));
                    }
                }
            }
        }
        let side = pair.side_of(&chosen).expect("chosen is a member");
        if let Some(s) = g.get(&pair) {
            if s != side {
                return Err(TheoryError::Conflict(origin[&pair].to_string(), node.to_string()));
            }
        }
        g.set(pair.clone(), side)?;
        origin.entry(pair).or_insert_with(|| node.clone());
        steps.push(SupStep { sup: node.clone(), alpha, beta, case, clause, chosen });
    }

    if let Some(cl) = &classes {
        for (i, x) in universe.iter().enumerate() {
            for y in &universe[i + 1..] {
                let Some(pair) = Pair::new(x, y) else { continue };
                if g.get(&pair).is_some() {
                    continue;
                }
                let (cx, cy) = (cl.of(x), cl.of(y));
                let side = if cx == cy {
                    Side::First
                } else {
                    let key = (cx.min(cy), cx.max(cy));
                    let won = class_winner.get(&key).map_or_else(|| cl.g0(cx, cy), |(w, _)| *w);
                    if won == cx {
                        pair.side_of(x).expect("member")
                    } else {
                        pair.side_of(y).expect("member")
                    }
                };
                g.set(pair, side)?;
            }
        }
    }

    if t.has_quantifiers() {
        extend_to_parameters(t, &structure, &mut g)?;
    }
    Ok(TheoryModel { class: spec.class, structure, table: g, steps, universe })
}

fn rename_term(t: &Term, names: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Param(p) => names.get(p).map_or_else(|| t.clone(), |c| Term::constant(c)),
        Term::App(f, args) => Term::app(f, args.iter().map(|a| rename_term(a, names)).collect()),
        _ => t.clone(),
    }
}

/// Adds entries for the parameter instances the sentence choice semantics
/// visits under quantifiers, copying the choice made on the same pair with
/// each parameter replaced by a constant naming it.
fn extend_to_parameters(t: &TheoryFragment, m: &Structure, g: &mut ChoiceTable) -> Result<(), TheoryError> {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    for c in &t.constants {
        if let Some(e) = m.constant(c) {
            names.entry(m.element_name(e).to_string()).or_insert_with(|| c.clone());
        }
    }
    if let Some(e) = m.domain().iter().find(|e| !names.contains_key(*e)) {
        return Err(TheoryError::Unnamed(e.clone()));
    }
    fn visit(
        phi: &Formula,
        m: &Structure,
        g: &mut ChoiceTable,
        names: &BTreeMap<String, String>,
    ) -> Result<(), TheoryError> {
        if phi.is_classical() {
            return Ok(());
        }
        match phi {
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                for x in m.domain() {
                    visit(&body.substitute(v, &Term::param(x))?, m, g, names)?;
                }
            }
            Formula::Sup(a, b) => {
                visit(a, m, g, names)?;
                visit(b, m, g, names)?;
                if phi.params().is_empty() {
                    return Ok(());
                }
                let (alpha, beta) = (g.collapse(a)?, g.collapse(b)?);
                let Some(pair) = Pair::new(&alpha, &beta) else { return Ok(()) };
                let rename = |f: &Formula| f.map_terms(&|x| rename_term(x, names));
                let (ra, rb) = (rename(&alpha), rename(&beta));
                let winner = if Pair::new(&ra, &rb).is_none() || g.choose(&ra, &rb)?.primitive() == ra.primitive() {
                    alpha
                } else {
                    beta
                };
                let side = pair.side_of(&winner).expect("member");
                g.set(pair, side)?;
            }
            _ => {
                for c in phi.children() {
                    visit(c, m, g, names)?;
                }
            }
        }
        Ok(())
    }
    for f in &t.sentences {
        visit(f, m, g, &names)?;
    }
    Ok(())
}

/// For every basic member, the marking agrees with truth of its collapse.
pub fn lemma_criterion(t: &TheoryFragment, m: &Structure, g: &ChoiceTable) -> Result<bool, TheoryError> {
    for (f, &mark) in t.sentences.iter().zip(&t.marks) {
        if f.classify() <= SyntaxClass::Basic {
            let c = g.collapse(f)?;
            if crate::semantics::eval_classical(m, &c, &BTreeMap::new())? != mark {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl TheoryModel {
    /// Re-checks the model against the fragment. `oracle` is needed for the
    /// regularity verdict in `reg`.
    pub fn verify(&self, t: &TheoryFragment, oracle: Option<&EquivOracle>) -> Result<TheoryCheck, TheoryError> {
        let lemma = lemma_criterion(t, &self.structure, &self.table)?;
        let mut satisfies = true;
        for (f, &mark) in t.sentences.iter().zip(&t.marks) {
            if eval_scs(&self.structure, &self.table, f)? != mark {
                satisfies = false;
            }
        }
        let regular = match (self.class, oracle) {
            (ChoiceClass::Reg, Some(o)) => {
                let spec = ClassSpec::new(ChoiceClass::Reg, Some(o.clone()));
                let base = self.table.restricted(|f| f.params().is_empty());
                Some(check_class(&base, &spec, &self.universe)?.is_member())
            }
            _ => None,
        };
        Ok(TheoryCheck { lemma, satisfies, regular })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_lenient, Signature};

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn ps(xs: &[&str]) -> Vec<Formula> {
        xs.iter().map(|s| p(s)).collect()
    }

    fn prop_oracle() -> EquivOracle {
        EquivOracle::prop()
    }

    #[test]
    fn closure_of_a_superposition() {
        let c = closure(&ps(&["p0 sup p1"]), &[]).unwrap();
        assert_eq!(c, ps(&["p0 sup p1", "p0", "p1"]));
        let c = closure(&ps(&["exists v. P(v) sup Q(v)"]), &["c".into(), "d".into()]).unwrap();
        assert_eq!(c.len(), 7);
        assert!(closure(&ps(&["exists v. P(v)"]), &[]).is_err());
        assert!(matches!(
            closure(&ps(&["(forall v. P(v) sup Q(v)) sup p0"]), &["c".into()]),
            Err(TheoryError::NotRestricted(_))
        ));
    }

    #[test]
    fn forbidden_cases() {
        let seeds = ps(&["p0 sup p1"]);
        let t = TheoryFragment::from_members(vec![], &seeds, &ps(&["p0 sup p1"])).unwrap();
        assert!(matches!(check_theory_fragment(&t, 1), Err(TheoryError::A7 { .. })));
        let t = TheoryFragment::from_members(vec![], &seeds, &ps(&["p0", "p1"])).unwrap();
        assert!(matches!(check_theory_fragment(&t, 1), Err(TheoryError::A8 { .. })));
        let t = TheoryFragment::from_members(vec![], &seeds, &ps(&["p0 sup p1", "p0"])).unwrap();
        assert!(check_theory_fragment(&t, 1).is_ok());
    }

    #[test]
    fn case_a2_picks_the_true_operand() {
        let t = TheoryFragment::from_members(vec![], &ps(&["p0 sup p1"]), &ps(&["p0 sup p1", "p0"])).unwrap();
        let model = build_choice_from_theory(&t, &ClassSpec::all(), 1).unwrap();
        assert_eq!(model.table.choose(&p("p0"), &p("p1")).unwrap(), p("p0"));
        assert_eq!(model.steps[0].case, 2);
        assert!(model.verify(&t, None).unwrap().passed());
    }

    #[test]
    fn case_a1_either_choice() {
        let t = TheoryFragment::from_members(vec![], &ps(&["p0 sup p1"]), &ps(&["p0 sup p1", "p0", "p1"])).unwrap();
        let model = build_choice_from_theory(&t, &ClassSpec::all(), 1).unwrap();
        assert_eq!(model.steps[0].clause, 3);
        for pick in ["p0", "p1"] {
            let mut g = ChoiceTable::new(Mode::Sentence);
            g.insert(&p("p0"), &p("p1"), &p(pick)).unwrap();
            assert!(eval_scs(&model.structure, &g, &p("p0 sup p1")).unwrap());
        }
    }

    #[test]
    fn representatives_make_the_choice_regular() {
        let seeds = ps(&["~~p0 sup p1", "p0 sup p1"]);
        let members = ps(&["~~p0 sup p1", "p0 sup p1", "~~p0", "~p0", "p0", "p1"]);
        let members: Vec<Formula> = members.into_iter().filter(|f| *f != p("~p0")).collect();
        let t = TheoryFragment::from_members(vec![], &seeds, &members).unwrap();
        let oracle = prop_oracle();
        let free = build_choice_from_theory(&t, &ClassSpec::all(), 1).unwrap();
        let c = free.verify(&t, None).unwrap();
        assert!(c.lemma && c.satisfies);
        let spec = ClassSpec::new(ChoiceClass::Reg, Some(oracle.clone()));
        assert!(!crate::choice::extendable(&free.table, &spec).unwrap());
        let reg = build_choice_from_theory(&t, &spec, 1).unwrap();
        assert_eq!(
            reg.verify(&t, Some(&oracle)).unwrap(),
            TheoryCheck { lemma: true, satisfies: true, regular: Some(true) }
        );
        assert_eq!(reg.table.choose(&p("~~p0"), &p("p1")).unwrap(), p("~~p0"));
    }

    #[test]
    fn sv_closure_is_required_for_reg() {
        let seeds = ps(&["~~p0 sup p1", "p0 sup p1"]);
        let t = TheoryFragment::from_members(vec![], &seeds, &ps(&["p0 sup p1", "~~p0", "p0"])).unwrap();
        assert!(build_choice_from_theory(&t, &ClassSpec::all(), 1).is_ok());
        let spec = ClassSpec::new(ChoiceClass::Reg, Some(prop_oracle()));
        assert!(matches!(build_choice_from_theory(&t, &spec, 1), Err(TheoryError::SvClosure(..))));
    }

    #[test]
    fn quantified_fragment_with_witnesses() {
        let seeds = ps(&["exists v. P(v) sup Q(v)", "forall v. P(v) \\/ Q(v)", "P(c) sup Q(d)"]);
        let members = ps(&[
            "exists v. P(v) sup Q(v)",
            "forall v. P(v) \\/ Q(v)",
            "P(c) sup Q(c)",
            "P(c)",
            "Q(d)",
            "P(c) \\/ Q(c)",
            "P(d) \\/ Q(d)",
            "P(c) sup Q(d)",
        ]);
        let t = TheoryFragment::from_members(vec!["c".into(), "d".into()], &seeds, &members).unwrap();
        let model = build_choice_from_theory(&t, &ClassSpec::all(), 2).unwrap();
        assert!(model.verify(&t, None).unwrap().passed());
        let oracle = EquivOracle::bounded_fo(2, Signature::new());
        let spec = ClassSpec::new(ChoiceClass::Reg, Some(oracle.clone()));
        let model = build_choice_from_theory(&t, &spec, 2).unwrap();
        assert!(model.verify(&t, Some(&oracle)).unwrap().passed());
    }

    #[test]
    fn incoherent_quantifier_marking() {
        let seeds = ps(&["forall v. P(v)"]);
        let t = TheoryFragment::from_members(vec!["c".into()], &seeds, &ps(&["forall v. P(v)"])).unwrap();
        assert!(matches!(check_theory_fragment(&t, 2), Err(TheoryError::Quantifier(_))));
    }

    #[test]
    fn json_round_trip() {
        let t = TheoryFragment::from_members(vec![], &ps(&["p0 sup p1"]), &ps(&["p0 sup p1", "p0"])).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(TheoryFragment::from_json(&text).unwrap(), t);
    }
}
