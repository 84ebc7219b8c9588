//! Finite first-order structures and propositional valuations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("domain element `{0}` is listed twice")]
    DuplicateElement(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("`{name}`: expected {expected} argument(s), found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("function `{name}` is undefined on ({args})")]
    Partial { name: String, args: String },
    #[error("symbol `{0}` has inconsistent arities")]
    InconsistentArity(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct FuncTable {
    arity: usize,
    values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    arity: usize,
    holds: Vec<bool>,
}

/// A finite structure. Elements are indices into `domain`; equality is identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    domain: Vec<String>,
    constants: BTreeMap<String, usize>,
    functions: BTreeMap<String, FuncTable>,
    predicates: BTreeMap<String, Relation>,
    props: BTreeMap<String, bool>,
}

fn tuple_index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

fn tuple_at(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

impl Structure {
    pub fn new<I, S>(domain: I) -> Result<Structure, StructureError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(StructureError::EmptyDomain);
        }
        let mut seen = BTreeSet::new();
        for d in &domain {
            if !seen.insert(d) {
                return Err(StructureError::DuplicateElement(d.clone()));
            }
        }
        Ok(Structure {
            domain,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
            props: BTreeMap::new(),
        })
    }

    /// Domain `e0, e1, ...` of the given size.
    pub fn standard_domain(size: usize) -> Vec<String> {
        (0..size).map(|i| format!("e{i}")).collect()
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn element_name(&self, i: usize) -> &str {
        &self.domain[i]
    }

    fn elem(&self, name: &str) -> Result<usize, StructureError> {
        self.element(name).ok_or_else(|| StructureError::UnknownElement(name.to_string()))
    }

    pub fn set_constant(&mut self, name: &str, element: &str) -> Result<(), StructureError> {
        let e = self.elem(element)?;
        self.constants.insert(name.to_string(), e);
        Ok(())
    }

    /// Interprets a function symbol by a closure on element indices.
    pub fn set_function(&mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> usize) {
        let n = self.size();
        let values = (0..n.pow(arity as u32)).map(|i| f(&tuple_at(i, arity, n)) % n).collect();
        self.functions.insert(name.to_string(), FuncTable { arity, values });
    }

    /// Interprets a predicate by the set of tuples (element names) where it holds.
    pub fn set_relation(&mut self, name: &str, arity: usize, tuples: &[Vec<&str>]) -> Result<(), StructureError> {
        let n = self.size();
        let mut holds = vec![false; n.pow(arity as u32)];
        for t in tuples {
            if t.len() != arity {
                return Err(StructureError::Arity { name: name.to_string(), expected: arity, found: t.len() });
            }
            let idx: Vec<usize> = t.iter().map(|e| self.elem(e)).collect::<Result<_, _>>()?;
            holds[tuple_index(&idx, n)] = true;
        }
        self.predicates.insert(name.to_string(), Relation { arity, holds });
        Ok(())
    }

    pub fn set_prop(&mut self, name: &str, value: bool) {
        self.props.insert(name.to_string(), value);
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.constants.get(name).copied()
    }

    pub fn apply(&self, name: &str, args: &[usize]) -> Option<usize> {
        let t = self.functions.get(name)?;
        (t.arity == args.len()).then(|| t.values[tuple_index(args, self.size())])
    }

    pub fn holds(&self, name: &str, args: &[usize]) -> Option<bool> {
        let r = self.predicates.get(name)?;
        (r.arity == args.len()).then(|| r.holds[tuple_index(args, self.size())])
    }

    pub fn prop(&self, name: &str) -> Option<bool> {
        self.props.get(name).copied()
    }

    /// The symbols this structure interprets.
    pub fn signature(&self) -> Signature {
        Signature {
            constants: self.constants.keys().cloned().collect(),
            functions: self.functions.iter().map(|(n, t)| (n.clone(), t.arity)).collect(),
            predicates: self.predicates.iter().map(|(n, r)| (n.clone(), r.arity)).collect(),
            prop_atoms: self.props.keys().cloned().collect(),
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        write!(f, "domain {{{}}}", self.domain.join(", "))?;
        for (c, &e) in &self.constants {
            write!(f, "; {c} = {}", self.domain[e])?;
        }
        for (name, t) in &self.functions {
            let cells: Vec<String> = (0..t.values.len())
                .map(|i| {
                    let args: Vec<&str> = tuple_at(i, t.arity, n).iter().map(|&a| self.domain[a].as_str()).collect();
                    format!("{}->{}", args.join(","), self.domain[t.values[i]])
                })
                .collect();
            write!(f, "; {name}: {}", cells.join(" "))?;
        }
        for (name, r) in &self.predicates {
            let cells: Vec<String> = (0..r.holds.len())
                .filter(|&i| r.holds[i])
                .map(|i| {
                    let args: Vec<&str> = tuple_at(i, r.arity, n).iter().map(|&a| self.domain[a].as_str()).collect();
                    format!("({})", args.join(","))
                })
                .collect();
            write!(f, "; {name} = {{{}}}", cells.join(" "))?;
        }
        for (p, v) in &self.props {
            write!(f, "; {p} = {}", u8::from(*v))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    domain: Vec<String>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
    #[serde(default)]
    functions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    predicates: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    props: BTreeMap<String, bool>,
}

impl Structure {
    fn to_json(&self) -> StructureJson {
        let n = self.size();
        let name = |i: usize| self.domain[i].clone();
        StructureJson {
            domain: self.domain.clone(),
            constants: self.constants.iter().map(|(c, &e)| (c.clone(), name(e))).collect(),
            functions: self
                .functions
                .iter()
                .map(|(f, t)| {
                    let cells = (0..t.values.len())
                        .map(|i| {
                            let args: Vec<String> = tuple_at(i, t.arity, n).into_iter().map(name).collect();
                            (args.join(","), name(t.values[i]))
                        })
                        .collect();
                    (f.clone(), cells)
                })
                .collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(p, r)| {
                    let tuples = (0..r.holds.len())
                        .filter(|&i| r.holds[i])
                        .map(|i| tuple_at(i, r.arity, n).into_iter().map(name).collect())
                        .collect();
                    (p.clone(), tuples)
                })
                .collect(),
            props: self.props.clone(),
        }
    }

    fn from_json(raw: StructureJson) -> Result<Structure, StructureError> {
        let mut m = Structure::new(raw.domain)?;
        let n = m.size();
        for (c, e) in &raw.constants {
            m.set_constant(c, e)?;
        }
        for (f, cells) in &raw.functions {
            let mut arity = None;
            let mut values = BTreeMap::new();
            for (args, v) in cells {
                let idx: Vec<usize> = args.split(',').map(|a| m.elem(a.trim())).collect::<Result<_, _>>()?;
                if *arity.get_or_insert(idx.len()) != idx.len() {
                    return Err(StructureError::InconsistentArity(f.clone()));
                }
                values.insert(tuple_index(&idx, n), m.elem(v)?);
            }
            let arity = arity.unwrap_or(1);
            let total = n.pow(arity as u32);
            let mut table = Vec::with_capacity(total);
            for i in 0..total {
                match values.get(&i) {
                    Some(&v) => table.push(v),
                    None => {
                        let args: Vec<&str> = tuple_at(i, arity, n).iter().map(|&a| m.domain[a].as_str()).collect();
                        return Err(StructureError::Partial { name: f.clone(), args: args.join(",") });
                    }
                }
            }
            m.functions.insert(f.clone(), FuncTable { arity, values: table });
        }
        for (p, tuples) in &raw.predicates {
            let arity = tuples.first().map_or(1, Vec::len);
            let refs: Vec<Vec<&str>> = tuples.iter().map(|t| t.iter().map(String::as_str).collect()).collect();
            m.set_relation(p, arity, &refs)?;
        }
        m.props = raw.props;
        Ok(m)
    }
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = StructureJson::deserialize(d)?;
        Structure::from_json(raw).map_err(serde::de::Error::custom)
    }
}

/// A truth assignment to propositional atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, atom: &str, value: bool) -> Self {
        self.0.insert(atom.to_string(), value);
        self
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }

    /// A one-element structure interpreting exactly these atoms.
    pub fn to_structure(&self) -> Structure {
        let mut m = Structure::new(["e0"]).expect("nonempty domain");
        m.props = self.0.clone();
        m
    }

    /// All valuations of the atoms; the first atom is the fastest-changing bit.
    pub fn all(atoms: &[String]) -> impl Iterator<Item = Valuation> + '_ {
        (0u64..1 << atoms.len()).map(move |bits| {
            Valuation(atoms.iter().enumerate().map(|(j, a)| (a.clone(), bits >> j & 1 == 1)).collect())
        })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(a, v)| format!("{a}={}", u8::from(*v))).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Every structure over `sig` with the given domain, in a fixed order.
pub struct Structures {
    template: Structure,
    slots: Vec<Slot>,
    digits: Vec<usize>,
    done: bool,
}

enum Slot {
    Constant(String),
    Function(String, usize),
    Relation(String, usize),
    Prop(String),
}

impl Slot {
    fn radix(&self, n: usize) -> usize {
        match self {
            Slot::Constant(_) | Slot::Function(..) => n,
            Slot::Relation(..) | Slot::Prop(_) => 2,
        }
    }
}

/// Number of structures over `sig` on a domain of `size` elements, or
/// `None` on overflow.
pub fn count_structures(sig: &Signature, size: usize) -> Option<u128> {
    let n = size as u128;
    let mut total: u128 = 1;
    for _ in &sig.constants {
        total = total.checked_mul(n)?;
    }
    for &a in sig.functions.values() {
        let cells = n.checked_pow(a as u32)?;
        total = total.checked_mul(n.checked_pow(u32::try_from(cells).ok()?)?)?;
    }
    for &a in sig.predicates.values() {
        let cells = n.checked_pow(a as u32)?;
        total = total.checked_mul(2u128.checked_pow(u32::try_from(cells).ok()?)?)?;
    }
    total.checked_mul(2u128.checked_pow(sig.prop_atoms.len() as u32)?)
}

pub fn structures(sig: &Signature, domain: &[String]) -> Result<Structures, StructureError> {
    let template = Structure::new(domain.iter().cloned())?;
    let n = template.size();
    let mut slots = Vec::new();
    for c in &sig.constants {
        slots.push(Slot::Constant(c.clone()));
    }
    for (f, &a) in &sig.functions {
        for cell in 0..n.pow(a as u32) {
            slots.push(Slot::Function(f.clone(), cell));
        }
    }
    for (p, &a) in &sig.predicates {
        for cell in 0..n.pow(a as u32) {
            slots.push(Slot::Relation(p.clone(), cell));
        }
    }
    for p in &sig.prop_atoms {
        slots.push(Slot::Prop(p.clone()));
    }
    let mut template = template;
    for (f, &a) in &sig.functions {
        template.functions.insert(f.clone(), FuncTable { arity: a, values: vec![0; n.pow(a as u32)] });
    }
    for (p, &a) in &sig.predicates {
        template.predicates.insert(p.clone(), Relation { arity: a, holds: vec![false; n.pow(a as u32)] });
    }
    let digits = vec![0; slots.len()];
    Ok(Structures { template, slots, digits, done: false })
}

impl Iterator for Structures {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.done {
            return None;
        }
        let mut m = self.template.clone();
        for (slot, &d) in self.slots.iter().zip(&self.digits) {
            match slot {
                Slot::Constant(c) => {
                    m.constants.insert(c.clone(), d);
                }
                Slot::Function(f, cell) => m.functions.get_mut(f).expect("template").values[*cell] = d,
                Slot::Relation(p, cell) => m.predicates.get_mut(p).expect("template").holds[*cell] = d == 1,
                Slot::Prop(p) => {
                    m.props.insert(p.clone(), d == 1);
                }
            }
        }
        let n = m.size();
        let mut i = 0;
        loop {
            if i == self.slots.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.slots[i].radix(n) {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let sig = Signature::new().with_constants(["c"]).with_predicate("P", 1).with_function("g", 1);
        for size in 1..=3 {
            let d = Structure::standard_domain(size);
            let n = structures(&sig, &d).unwrap().count() as u128;
            assert_eq!(Some(n), count_structures(&sig, size));
        }
        assert_eq!(count_structures(&sig, 2), Some(2 * 4 * 4));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"domain":["e0","e1"],"constants":{"c1":"e0"},"functions":{"g":{"e0":"e1","e1":"e0"}},"predicates":{"P":[["e0"]],"R":[["e0","e1"]]}}"#;
        let m: Structure = serde_json::from_str(text).unwrap();
        assert_eq!(m.apply("g", &[0]), Some(1));
        assert_eq!(m.holds("R", &[0, 1]), Some(true));
        assert_eq!(m.holds("R", &[1, 0]), Some(false));
        let back: Structure = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn partial_function_rejected() {
        let text = r#"{"domain":["e0","e1"],"functions":{"g":{"e0":"e1"}}}"#;
        assert!(serde_json::from_str::<Structure>(text).is_err());
    }

    #[test]
    fn valuation_order() {
        let atoms = vec!["p0".to_string(), "p1".to_string()];
        let vs: Vec<Valuation> = Valuation::all(&atoms).collect();
        assert_eq!(vs.len(), 4);
        assert_eq!(vs[1], Valuation::new().set("p0", true).set("p1", false));
    }
}
