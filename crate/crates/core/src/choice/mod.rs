//! Choice tables and the collapsing map they induce.
//!
//! A table is a finite partial choice function on unordered pairs of
//! classical formulas. Pairs are keyed on the primitive form of their
//! members (see [`Formula::primitive`]), so a formula and its unabbreviated
//! spelling denote the same sentence to every table.

mod class;
mod enumerate;
mod graph;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_lenient, Formula};

pub use class::{check_class, extendable, ChoiceClass, ClassSpec, ClassVerdict, Violation};
pub use enumerate::{enumerate_tables, Branching, TableEnumerator};
pub use graph::{is_acyclic, PreferenceGraph};
pub use oracle::{EquivOracle, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Pairs of sentences, possibly with parameters.
    Sentence,
    /// Pairs of arbitrary classical formulas; quantifiers commute with collapse.
    Formula,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sentence => "sentence",
            Mode::Formula => "formula",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// Two distinct primitive classical formulas, ordered by canonical key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    first: Formula,
    second: Formula,
}

impl Pair {
    /// Returns `None` when both members denote the same formula.
    pub fn new(a: &Formula, b: &Formula) -> Option<Pair> {
        let (a, b) = (a.primitive(), b.primitive());
        if a == b {
            return None;
        }
        let (ka, kb) = (a.canonical_key(), b.canonical_key());
        Some(if ka <= kb { Pair { first: a, second: b } } else { Pair { first: b, second: a } })
    }

    pub fn first(&self) -> &Formula {
        &self.first
    }

    pub fn second(&self) -> &Formula {
        &self.second
    }

    pub fn member(&self, side: Side) -> &Formula {
        match side {
            Side::First => &self.first,
            Side::Second => &self.second,
        }
    }

    pub fn side_of(&self, f: &Formula) -> Option<Side> {
        let f = f.primitive();
        if f == self.first {
            Some(Side::First)
        } else if f == self.second {
            Some(Side::Second)
        } else {
            None
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.first, self.second)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ChoiceError {
    #[error("no entry for the pair {0}")]
    MissingEntry(Box<Pair>),
    #[error("collapse is undefined on `{0}`: a quantifier governs a superposition")]
    NotBasic(String),
    #[error("`{0}` is not a sentence")]
    NotSentence(String),
    #[error("`{0}` contains a superposition")]
    NotClassical(String),
    #[error("`{choice}` is not a member of the pair {pair}")]
    NotAMember { choice: String, pair: String },
    #[error("conflicting choices for the pair {0}")]
    Conflict(Box<Pair>),
    #[error("a pair needs two distinct members, `{0}` was given twice")]
    Degenerate(String),
    #[error("the class needs an equivalence oracle")]
    OracleRequired,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid table: {0}")]
    Invalid(String),
}

/// A finite partial choice function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceTable {
    mode: Mode,
    entries: BTreeMap<Pair, Side>,
}

impl ChoiceTable {
    pub fn new(mode: Mode) -> Self {
        ChoiceTable { mode, entries: BTreeMap::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Pair, Side)> {
        self.entries.iter().map(|(p, s)| (p, *s))
    }

    pub fn get(&self, pair: &Pair) -> Option<Side> {
        self.entries.get(pair).copied()
    }

    fn admit(&self, f: &Formula) -> Result<(), ChoiceError> {
        if !f.is_classical() {
            return Err(ChoiceError::NotClassical(f.to_string()));
        }
        if self.mode == Mode::Sentence && !f.is_sentence() {
            return Err(ChoiceError::NotSentence(f.to_string()));
        }
        Ok(())
    }

    /// Records that `chosen` is picked from `{a, b}`.
    pub fn insert(&mut self, a: &Formula, b: &Formula, chosen: &Formula) -> Result<(), ChoiceError> {
        self.admit(a)?;
        self.admit(b)?;
        let pair = Pair::new(a, b).ok_or_else(|| ChoiceError::Degenerate(a.to_string()))?;
        let side = pair
            .side_of(chosen)
            .ok_or_else(|| ChoiceError::NotAMember { choice: chosen.to_string(), pair: pair.to_string() })?;
        self.set(pair, side)
    }

    pub fn set(&mut self, pair: Pair, side: Side) -> Result<(), ChoiceError> {
        self.admit(&pair.first)?;
        self.admit(&pair.second)?;
        match self.entries.get(&pair) {
            Some(&s) if s != side => Err(ChoiceError::Conflict(Box::new(pair))),
            _ => {
                self.entries.insert(pair, side);
                Ok(())
            }
        }
    }

    /// Copy of the table with one more entry; the pair must be new.
    pub fn with(&self, pair: Pair, side: Side) -> ChoiceTable {
        let mut t = self.clone();
        t.entries.insert(pair, side);
        t
    }

    /// The table restricted to pairs whose members both satisfy `keep`.
    pub fn restricted(&self, keep: impl Fn(&Formula) -> bool) -> ChoiceTable {
        ChoiceTable {
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| keep(&p.first) && keep(&p.second))
                .map(|(p, s)| (p.clone(), *s))
                .collect(),
        }
    }

    /// Every formula occurring in some entry.
    pub fn touched(&self) -> BTreeSet<Formula> {
        self.entries.keys().flat_map(|p| [p.first.clone(), p.second.clone()]).collect()
    }

    pub fn winner<'p>(&self, pair: &'p Pair) -> Option<&'p Formula> {
        self.get(pair).map(|s| pair.member(s))
    }

    /// `f(a, b)`. Returns `a` itself when both arguments denote one formula.
    pub fn choose(&self, a: &Formula, b: &Formula) -> Result<Formula, ChoiceError> {
        self.admit(a)?;
        self.admit(b)?;
        let Some(pair) = Pair::new(a, b) else {
            return Ok(a.clone());
        };
        match self.entries.get(&pair) {
            None => Err(ChoiceError::MissingEntry(Box::new(pair))),
            Some(&side) => {
                if pair.member(side) == &a.primitive() {
                    Ok(a.clone())
                } else {
                    Ok(b.clone())
                }
            }
        }
    }

    /// The collapse of `phi`: every superposition is replaced by the choice
    /// among the collapses of its operands. Connectives are kept as written.
    pub fn collapse(&self, phi: &Formula) -> Result<Formula, ChoiceError> {
        if self.mode == Mode::Sentence && !phi.is_sentence() {
            return Err(ChoiceError::NotSentence(phi.to_string()));
        }
        self.collapse_inner(phi)
    }

    fn collapse_inner(&self, phi: &Formula) -> Result<Formula, ChoiceError> {
        if phi.is_classical() {
            return Ok(phi.clone());
        }
        Ok(match phi {
            Formula::Not(a) => Formula::not(self.collapse_inner(a)?),
            Formula::And(a, b) => Formula::and(self.collapse_inner(a)?, self.collapse_inner(b)?),
            Formula::Or(a, b) => Formula::or(self.collapse_inner(a)?, self.collapse_inner(b)?),
            Formula::Implies(a, b) => Formula::implies(self.collapse_inner(a)?, self.collapse_inner(b)?),
            Formula::Iff(a, b) => Formula::iff(self.collapse_inner(a)?, self.collapse_inner(b)?),
            Formula::Sup(a, b) => {
                let a = self.collapse_inner(a)?;
                let b = self.collapse_inner(b)?;
                self.choose(&a, &b)?
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                if self.mode == Mode::Sentence {
                    return Err(ChoiceError::NotBasic(phi.to_string()));
                }
                let body = self.collapse_inner(a)?;
                if matches!(phi, Formula::Forall(..)) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            Formula::Prop(_) | Formula::Pred(..) | Formula::Eq(..) => unreachable!("atoms are classical"),
        })
    }
}

impl fmt::Display for ChoiceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("(empty table)");
        }
        for (i, (pair, side)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{pair} -> {}", pair.member(*side))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    mode: Mode,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    pair: [String; 2],
    choice: String,
}

impl Serialize for ChoiceTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableJson {
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(|(p, side)| EntryJson {
                    pair: [p.first.to_string(), p.second.to_string()],
                    choice: p.member(*side).to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChoiceTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = TableJson::deserialize(d)?;
        let parse = |s: &str| parse_lenient(s).map(|(f, _)| f).map_err(D::Error::custom);
        let mut table = ChoiceTable::new(raw.mode);
        for e in raw.entries {
            let a = parse(&e.pair[0])?;
            let b = parse(&e.pair[1])?;
            let c = parse(&e.choice)?;
            table.insert(&a, &b, &c).map_err(D::Error::custom)?;
        }
        Ok(table)
    }
}
