//! Membership and extendability for the classes of choice functions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::syntax::Formula;

use super::graph::is_acyclic;
use super::{ChoiceError, ChoiceTable, EquivOracle, PreferenceGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiceClass {
    #[serde(rename = "all")]
    AllF,
    Reg,
    Asso,
    #[serde(rename = "regstar")]
    RegStar,
    Dec,
}

impl ChoiceClass {
    pub const ALL: [ChoiceClass; 5] =
        [ChoiceClass::AllF, ChoiceClass::Reg, ChoiceClass::Asso, ChoiceClass::RegStar, ChoiceClass::Dec];

    pub fn name(self) -> &'static str {
        match self {
            ChoiceClass::AllF => "all",
            ChoiceClass::Reg => "reg",
            ChoiceClass::Asso => "asso",
            ChoiceClass::RegStar => "regstar",
            ChoiceClass::Dec => "dec",
        }
    }

    pub fn needs_oracle(self) -> bool {
        matches!(self, ChoiceClass::Reg | ChoiceClass::RegStar | ChoiceClass::Dec)
    }

    /// Inclusion between classes as sets of choice functions.
    pub fn is_subclass_of(self, other: ChoiceClass) -> bool {
        use ChoiceClass::*;
        match (self, other) {
            (a, b) if a == b => true,
            (_, AllF) => true,
            (RegStar | Dec, Reg | Asso) => true,
            (Dec, RegStar) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ChoiceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChoiceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "all" | "f" | "allf" => Ok(ChoiceClass::AllF),
            "reg" => Ok(ChoiceClass::Reg),
            "asso" => Ok(ChoiceClass::Asso),
            "regstar" | "reg*" => Ok(ChoiceClass::RegStar),
            "dec" => Ok(ChoiceClass::Dec),
            other => Err(format!("unknown class `{other}` (expected all, reg, asso, regstar or dec)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpec {
    pub class: ChoiceClass,
    pub oracle: Option<EquivOracle>,
}

impl ClassSpec {
    pub fn new(class: ChoiceClass, oracle: Option<EquivOracle>) -> Self {
        ClassSpec { class, oracle }
    }

    pub fn all() -> Self {
        ClassSpec { class: ChoiceClass::AllF, oracle: None }
    }

    /// The class with a truth-table oracle.
    pub fn propositional(class: ChoiceClass) -> Self {
        ClassSpec { class, oracle: Some(EquivOracle::prop()) }
    }

    pub fn oracle(&self) -> Result<&EquivOracle, ChoiceError> {
        self.oracle.as_ref().ok_or(ChoiceError::OracleRequired)
    }

    fn require_oracle(&self) -> Result<Option<&EquivOracle>, ChoiceError> {
        if self.class.needs_oracle() {
            self.oracle().map(Some)
        } else {
            Ok(None)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `f(f(a, b), c) != f(a, f(b, c))`.
    Associativity { a: Formula, b: Formula, c: Formula, left: Formula, right: Formula },
    /// `a ~ a2` but `f(a, b)` and `f(a2, b)` are inequivalent.
    Regularity { a: Formula, a2: Formula, b: Formula, chose: Formula, chose2: Formula },
    /// No total order of the required kind has the table as its minimum.
    NoOrder { class: ChoiceClass },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { a, b, c, left, right } => {
                write!(f, "associativity fails on ({a}, {b}, {c}): f(f(a, b), c) = {left} but f(a, f(b, c)) = {right}")
            }
            Violation::Regularity { a, a2, b, chose, chose2 } => write!(
                f,
                "regularity fails: {a} ~ {a2} but f({a}, {b}) = {chose} and f({a2}, {b}) = {chose2} are inequivalent"
            ),
            Violation::NoOrder { class } => write!(f, "no total order of class {class} induces the table"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ClassVerdict {
    Member,
    Violation(Violation),
}

impl ClassVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, ClassVerdict::Member)
    }
}

fn dedup(universe: &[Formula]) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    universe.iter().filter(|f| seen.insert(f.primitive())).cloned().collect()
}

fn choose(f: &ChoiceTable, a: &Formula, b: &Formula) -> Result<Formula, ChoiceError> {
    f.choose(a, b)
}

/// Membership of `f` restricted to `universe`. The table must be total on
/// the pairs drawn from the universe.
pub fn check_class(f: &ChoiceTable, spec: &ClassSpec, universe: &[Formula]) -> Result<ClassVerdict, ChoiceError> {
    let u = dedup(universe);
    spec.require_oracle()?;
    for (i, a) in u.iter().enumerate() {
        for b in &u[i + 1..] {
            choose(f, a, b)?;
        }
    }
    let verdict = match spec.class {
        ChoiceClass::AllF => ClassVerdict::Member,
        ChoiceClass::Asso => associativity(f, &u)?,
        ChoiceClass::Reg => regularity(f, spec.oracle()?, &u)?,
        ChoiceClass::RegStar => match regularity(f, spec.oracle()?, &u)? {
            ClassVerdict::Member => associativity(f, &u)?,
            v => v,
        },
        ChoiceClass::Dec => {
            let star = ClassSpec { class: ChoiceClass::RegStar, oracle: spec.oracle.clone() };
            match check_class(f, &star, &u)? {
                ClassVerdict::Member => {
                    let keep: BTreeSet<Formula> =
                        u.iter().flat_map(|a| [a.primitive(), Formula::not(a.clone()).primitive()]).collect();
                    let local = f.restricted(|x| keep.contains(x));
                    if extendable(&local, spec)? {
                        ClassVerdict::Member
                    } else {
                        ClassVerdict::Violation(Violation::NoOrder { class: ChoiceClass::Dec })
                    }
                }
                v => v,
            }
        }
    };
    Ok(verdict)
}

fn associativity(f: &ChoiceTable, u: &[Formula]) -> Result<ClassVerdict, ChoiceError> {
    for a in u {
        for b in u {
            for c in u {
                if a == b || b == c || a == c {
                    continue;
                }
                let left = choose(f, &choose(f, a, b)?, c)?;
                let right = choose(f, a, &choose(f, b, c)?)?;
                if left.primitive() != right.primitive() {
                    return Ok(ClassVerdict::Violation(Violation::Associativity {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        left,
                        right,
                    }));
                }
            }
        }
    }
    Ok(ClassVerdict::Member)
}

fn regularity(f: &ChoiceTable, oracle: &EquivOracle, u: &[Formula]) -> Result<ClassVerdict, ChoiceError> {
    let class = oracle.classes(u)?;
    let class_of = |x: &Formula| -> usize {
        let p = x.primitive();
        class[u.iter().position(|y| y.primitive() == p).expect("choice is a member")]
    };
    for (i, a) in u.iter().enumerate() {
        for (j, a2) in u.iter().enumerate() {
            if i == j || class[i] != class[j] {
                continue;
            }
            for (k, b) in u.iter().enumerate() {
                if k == i || k == j || class[k] == class[i] {
                    continue;
                }
                let chose = choose(f, a, b)?;
                let chose2 = choose(f, a2, b)?;
                if class_of(&chose) != class_of(&chose2) {
                    return Ok(ClassVerdict::Violation(Violation::Regularity {
                        a: a.clone(),
                        a2: a2.clone(),
                        b: b.clone(),
                        chose,
                        chose2,
                    }));
                }
            }
        }
    }
    Ok(ClassVerdict::Member)
}

/// Whether some total choice function of the class agrees with `partial`.
pub fn extendable(partial: &ChoiceTable, spec: &ClassSpec) -> Result<bool, ChoiceError> {
    let oracle = spec.require_oracle()?;
    if partial.is_empty() {
        return Ok(true);
    }
    match spec.class {
        ChoiceClass::AllF => Ok(true),
        ChoiceClass::Asso => Ok(PreferenceGraph::from_table(partial).is_acyclic()),
        ChoiceClass::Reg => {
            let g = ClassGraph::new(partial, oracle.expect("checked"), false)?;
            Ok(g.winners_consistent())
        }
        ChoiceClass::RegStar => {
            let g = ClassGraph::new(partial, oracle.expect("checked"), false)?;
            Ok(g.classes_acyclic() && g.members_acyclic())
        }
        ChoiceClass::Dec => {
            let g = ClassGraph::new(partial, oracle.expect("checked"), true)?;
            Ok(g.classes_acyclic() && g.members_acyclic())
        }
    }
}

/// The table's entries lifted to equivalence classes.
struct ClassGraph {
    nodes: Vec<Formula>,
    class: Vec<usize>,
    classes: usize,
    /// (winner, loser) node indices.
    entries: Vec<(usize, usize)>,
    /// Class-level edges, including the dual edges when requested.
    class_edges: BTreeSet<(usize, usize)>,
}

impl ClassGraph {
    fn new(t: &ChoiceTable, oracle: &EquivOracle, dual: bool) -> Result<Self, ChoiceError> {
        let mut nodes = Vec::new();
        let mut index: HashMap<Formula, usize> = HashMap::new();
        let mut node = |f: &Formula, nodes: &mut Vec<Formula>| -> usize {
            *index.entry(f.clone()).or_insert_with(|| {
                nodes.push(f.clone());
                nodes.len() - 1
            })
        };
        let mut entries = Vec::new();
        let mut negs = Vec::new();
        for (pair, side) in t.entries() {
            let w = node(pair.member(side), &mut nodes);
            let l = node(pair.member(side.other()), &mut nodes);
            entries.push((w, l));
            if dual {
                let nw = node(&Formula::not(pair.member(side).clone()), &mut nodes);
                let nl = node(&Formula::not(pair.member(side.other()).clone()), &mut nodes);
                negs.push((nl, nw));
            }
        }
        let class = oracle.classes(&nodes)?;
        let classes = class.iter().copied().max().map_or(0, |m| m + 1);
        let mut class_edges = BTreeSet::new();
        for &(w, l) in entries.iter().chain(&negs) {
            if class[w] != class[l] {
                class_edges.insert((class[w], class[l]));
            }
        }
        Ok(ClassGraph { nodes, class, classes, entries, class_edges })
    }

    fn winners_consistent(&self) -> bool {
        let mut winner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(w, l) in &self.entries {
            let (cw, cl) = (self.class[w], self.class[l]);
            if cw == cl {
                continue;
            }
            let key = (cw.min(cl), cw.max(cl));
            if *winner.entry(key).or_insert(cw) != cw {
                return false;
            }
        }
        true
    }

    fn classes_acyclic(&self) -> bool {
        is_acyclic(self.classes, &self.class_edges)
    }

    fn members_acyclic(&self) -> bool {
        let edges: BTreeSet<(usize, usize)> =
            self.entries.iter().copied().filter(|&(w, l)| self.class[w] == self.class[l]).collect();
        is_acyclic(self.nodes.len(), &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::{Mode, Pair, Side};
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn table(entries: &[(&str, &str, &str)]) -> ChoiceTable {
        let mut t = ChoiceTable::new(Mode::Sentence);
        for (a, b, c) in entries {
            t.insert(&p(a), &p(b), &p(c)).unwrap();
        }
        t
    }

    #[test]
    fn cyclic_tournament_is_not_associative() {
        let t = table(&[("p0", "p1", "p0"), ("p1", "p2", "p1"), ("p2", "p0", "p2")]);
        let u = [p("p0"), p("p1"), p("p2")];
        let v = check_class(&t, &ClassSpec::new(ChoiceClass::Asso, None), &u).unwrap();
        match v {
            ClassVerdict::Violation(Violation::Associativity { a, b, c, .. }) => {
                assert_eq!((a, b, c), (p("p0"), p("p1"), p("p2")));
            }
            other => panic!("{other:?}"),
        }
        assert!(!extendable(&t, &ClassSpec::new(ChoiceClass::Asso, None)).unwrap());
    }

    #[test]
    fn regularity_witness_for_identity_pairs() {
        let sig = crate::syntax::Signature::new().with_constants(["a", "b"]);
        let spec = ClassSpec::new(ChoiceClass::Reg, Some(EquivOracle::bounded_fo(3, sig)));
        let t = table(&[("a = a", "a = b", "a = a"), ("b = b", "a = b", "a = b")]);
        let u = [p("a = a"), p("a = b"), p("b = b")];
        let v = check_class(&t, &spec, &u);
        assert!(matches!(v, Err(ChoiceError::MissingEntry(_))));
        let t = t.with(Pair::new(&p("a = a"), &p("b = b")).unwrap(), Side::First);
        match check_class(&t, &spec, &u).unwrap() {
            ClassVerdict::Violation(Violation::Regularity { .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(!extendable(&t, &spec).unwrap());
    }

    #[test]
    fn oracle_required() {
        let t = table(&[("p0", "p1", "p0")]);
        let spec = ClassSpec::new(ChoiceClass::Reg, None);
        assert_eq!(check_class(&t, &spec, &[p("p0"), p("p1")]), Err(ChoiceError::OracleRequired));
        assert_eq!(extendable(&t, &spec), Err(ChoiceError::OracleRequired));
    }

    #[test]
    fn empty_table_extends_in_every_class() {
        let t = ChoiceTable::new(Mode::Sentence);
        for c in ChoiceClass::ALL {
            assert!(extendable(&t, &ClassSpec::propositional(c)).unwrap());
        }
    }

    #[test]
    fn duality_constraint() {
        // p0 over p1 forces ~p1 over ~p0 in a decreasing order.
        let t = table(&[("p0", "p1", "p0"), ("~p0", "~p1", "~p0")]);
        assert!(extendable(&t, &ClassSpec::propositional(ChoiceClass::RegStar)).unwrap());
        assert!(!extendable(&t, &ClassSpec::propositional(ChoiceClass::Dec)).unwrap());
        let t = table(&[("p0", "p1", "p0"), ("~p0", "~p1", "~p1")]);
        assert!(extendable(&t, &ClassSpec::propositional(ChoiceClass::Dec)).unwrap());
    }

    #[test]
    fn class_names_parse() {
        for c in ChoiceClass::ALL {
            assert_eq!(c.name().parse::<ChoiceClass>().unwrap(), c);
        }
        assert!("bogus".parse::<ChoiceClass>().is_err());
    }
}
