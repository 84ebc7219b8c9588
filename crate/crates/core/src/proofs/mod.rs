//! Hilbert-style derivations in the propositional systems K0..K3 and the
//! first-order systems L0..L3, and a checker for them.
//!
//! Formulas are compared through their primitive form, so a line may use
//! `/\`, `\/`, `<->` and `exists` freely: an axiom instance or a modus
//! ponens premise is recognised whatever abbreviations it is spelled with.

pub mod build;
mod check;
pub mod corpus;
mod schemes;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse, parse_lenient, Formula, Signature};

pub use check::{check_proof, derives, CheckOptions};
pub use schemes::{match_axiom, Bindings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SystemId {
    K0,
    K1,
    K2,
    K3,
    L0,
    L1,
    L2,
    L3,
}

impl SystemId {
    pub const ALL: [SystemId; 8] = [
        SystemId::K0,
        SystemId::K1,
        SystemId::K2,
        SystemId::K3,
        SystemId::L0,
        SystemId::L1,
        SystemId::L2,
        SystemId::L3,
    ];

    pub fn is_first_order(self) -> bool {
        matches!(self, SystemId::L0 | SystemId::L1 | SystemId::L2 | SystemId::L3)
    }

    pub fn level(self) -> u8 {
        match self {
            SystemId::K0 | SystemId::L0 => 0,
            SystemId::K1 | SystemId::L1 => 1,
            SystemId::K2 | SystemId::L2 => 2,
            SystemId::K3 | SystemId::L3 => 3,
        }
    }

    /// The system without SV in which certificates are written.
    pub fn base(self) -> SystemId {
        if self.is_first_order() {
            SystemId::L0
        } else {
            SystemId::K0
        }
    }

    pub fn has_scheme(self, s: Scheme) -> bool {
        match s {
            Scheme::P1 | Scheme::P2 | Scheme::P3 | Scheme::S1 | Scheme::S2 | Scheme::S3 => true,
            Scheme::S4 => self.level() >= 2,
            Scheme::S5 => self.level() >= 3,
            Scheme::UI | Scheme::D | Scheme::I1 | Scheme::I2 | Scheme::I3 | Scheme::I4 | Scheme::I5 => {
                self.is_first_order()
            }
        }
    }

    pub fn has_rule(self, r: Rule) -> bool {
        match r {
            Rule::MP => true,
            Rule::GR => self.is_first_order(),
            Rule::SV => self.level() >= 1,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown system `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    P1,
    P2,
    P3,
    S1,
    S2,
    S3,
    S4,
    S5,
    UI,
    D,
    I1,
    I2,
    I3,
    I4,
    I5,
}

impl Scheme {
    pub const ALL: [Scheme; 15] = [
        Scheme::P1,
        Scheme::P2,
        Scheme::P3,
        Scheme::S1,
        Scheme::S2,
        Scheme::S3,
        Scheme::S4,
        Scheme::S5,
        Scheme::UI,
        Scheme::D,
        Scheme::I1,
        Scheme::I2,
        Scheme::I3,
        Scheme::I4,
        Scheme::I5,
    ];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    MP,
    GR,
    SV,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Line references are 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum Justification {
    Hypothesis,
    Axiom { scheme: Scheme, bindings: Option<BTreeMap<String, String>> },
    MP { from: [usize; 2] },
    GR { from: usize, var: String },
    SV { from: usize, cert: Box<Proof> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofLine {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub system: SystemId,
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(system: SystemId) -> Self {
        Proof { system, hypotheses: Vec::new(), lines: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn from_json(text: &str) -> Result<Proof, ProofFormatError> {
        let raw: ProofJson = serde_json::from_str(text).map_err(|e| ProofFormatError::Json(e.to_string()))?;
        raw.into_proof(None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProofJson::from_proof(self)).expect("proof serializes")
    }

    /// Every justification in the proof, certificates included.
    pub fn schemes_used(&self) -> Vec<Scheme> {
        let mut out = Vec::new();
        for l in &self.lines {
            match &l.just {
                Justification::Axiom { scheme, .. } => out.push(*scheme),
                Justification::SV { cert, .. } => out.extend(cert.schemes_used()),
                _ => {}
            }
        }
        out
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}", self.system)?;
        for h in &self.hypotheses {
            writeln!(f, "  hypothesis {h}")?;
        }
        for (i, l) in self.lines.iter().enumerate() {
            let why = match &l.just {
                Justification::Hypothesis => "hyp".to_string(),
                Justification::Axiom { scheme, .. } => scheme.to_string(),
                Justification::MP { from } => format!("MP {}, {}", from[0], from[1]),
                Justification::GR { from, var } => format!("GR {from} on {var}"),
                Justification::SV { from, cert } => format!("SV {from} (certificate of {} lines)", cert.lines.len()),
            };
            writeln!(f, "{:>4}. {}    [{why}]", i + 1, l.formula)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("malformed proof JSON: {0}")]
    Json(String),
    #[error("line {line}: {message}")]
    Formula { line: usize, message: String },
    #[error("hypothesis {index}: {message}")]
    Hypothesis { index: usize, message: String },
}

#[derive(Serialize, Deserialize)]
struct ProofJson {
    system: SystemId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<Signature>,
    #[serde(default)]
    hypotheses: Vec<String>,
    lines: Vec<LineJson>,
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    formula: String,
    just: JustJson,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum JustJson {
    Hyp,
    Axiom {
        scheme: Scheme,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bindings: Option<BTreeMap<String, String>>,
    },
    Mp {
        from: [usize; 2],
    },
    Gr {
        from: usize,
        var: String,
    },
    Sv {
        from: usize,
        cert: Box<ProofJson>,
    },
}

fn read_formula(text: &str, sig: Option<&Signature>) -> Result<Formula, String> {
    match sig {
        Some(s) => parse(text, s).map_err(|e| e.to_string()),
        None => parse_lenient(text).map(|(f, _)| f).map_err(|e| e.to_string()),
    }
}

impl ProofJson {
    fn into_proof(self, sig: Option<&Signature>) -> Result<Proof, ProofFormatError> {
        let sig = self.signature.as_ref().or(sig);
        let hypotheses = self
            .hypotheses
            .iter()
            .enumerate()
            .map(|(i, h)| {
                read_formula(h, sig).map_err(|message| ProofFormatError::Hypothesis { index: i + 1, message })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut lines = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.into_iter().enumerate() {
            let formula =
                read_formula(&l.formula, sig).map_err(|message| ProofFormatError::Formula { line: i + 1, message })?;
            let just = match l.just {
                JustJson::Hyp => Justification::Hypothesis,
                JustJson::Axiom { scheme, bindings } => Justification::Axiom { scheme, bindings },
                JustJson::Mp { from } => Justification::MP { from },
                JustJson::Gr { from, var } => Justification::GR { from, var },
                JustJson::Sv { from, cert } => Justification::SV { from, cert: Box::new((*cert).into_proof(sig)?) },
            };
            lines.push(ProofLine { formula, just });
        }
        Ok(Proof { system: self.system, hypotheses, lines })
    }

    fn from_proof(p: &Proof) -> ProofJson {
        ProofJson {
            system: p.system,
            signature: None,
            hypotheses: p.hypotheses.iter().map(|h| h.to_string()).collect(),
            lines: p
                .lines
                .iter()
                .map(|l| LineJson {
                    formula: l.formula.to_string(),
                    just: match &l.just {
                        Justification::Hypothesis => JustJson::Hyp,
                        Justification::Axiom { scheme, bindings } => {
                            JustJson::Axiom { scheme: *scheme, bindings: bindings.clone() }
                        }
                        Justification::MP { from } => JustJson::Mp { from: *from },
                        Justification::GR { from, var } => JustJson::Gr { from: *from, var: var.clone() },
                        Justification::SV { from, cert } => {
                            JustJson::Sv { from: *from, cert: Box::new(ProofJson::from_proof(cert)) }
                        }
                    },
                })
                .collect(),
        }
    }
}

/// Why a proof was rejected. `line` is 1-based; certificate failures nest.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    pub line: usize,
    pub kind: LineErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LineErrorKind {
    #[error("`{0}` is not among the hypotheses")]
    NotHypothesis(String),
    #[error("axiom scheme {scheme} is not available in {system}")]
    SchemeNotInSystem { scheme: Scheme, system: SystemId },
    #[error("rule {rule} is not available in {system}")]
    RuleNotInSystem { rule: Rule, system: SystemId },
    #[error("the formula is not an instance of {0}")]
    NoMatch(Scheme),
    #[error("instance of {scheme} violates its side condition: {reason}")]
    SideCondition { scheme: Scheme, reason: String },
    #[error("binding `{name}` does not match the instance")]
    Binding { name: String },
    #[error("reference to line {0}, which does not precede this line")]
    BadReference(usize),
    #[error("modus ponens does not apply to lines {0} and {1}")]
    MpMismatch(usize, usize),
    #[error("the formula is not the generalization of line {from} on `{var}`")]
    GrMismatch { from: usize, var: String },
    #[error("`{var}` occurs free in the hypothesis `{hypothesis}`")]
    Eigenvariable { var: String, hypothesis: String },
    #[error("generalization needs sentence hypotheses, `{0}` is open")]
    OpenHypothesis(String),
    #[error("line {0} is not a biconditional")]
    SvPremise(usize),
    #[error("the formula is not (A sup S) <-> (B sup S) for the biconditional A <-> B of line {0}")]
    SvShape(usize),
    #[error("`{0}` is not a basic formula, as SV requires")]
    SvNotBasic(String),
    #[error("certificate is written in {found}, expected {expected}")]
    CertSystem { found: SystemId, expected: String },
    #[error("certificate uses hypotheses")]
    CertHypotheses,
    #[error("certificate proves `{found}`, not the premise of SV")]
    CertConclusion { found: String },
    #[error("certificate is empty")]
    CertEmpty,
    #[error("certificate rejected: {0}")]
    Cert(Box<ProofError>),
    #[error("`{0}` is not a restricted formula")]
    NotRestricted(String),
    #[error("`{0}` is not a propositional formula")]
    NotPropositional(String),
    #[error("the proof has no lines")]
    Empty,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_contents() {
        assert!(!SystemId::K1.has_scheme(Scheme::S4));
        assert!(SystemId::K2.has_scheme(Scheme::S4));
        assert!(!SystemId::L2.has_scheme(Scheme::S5));
        assert!(SystemId::L3.has_scheme(Scheme::S5));
        assert!(!SystemId::K3.has_scheme(Scheme::UI));
        assert!(!SystemId::K0.has_rule(Rule::SV));
        assert!(SystemId::K1.has_rule(Rule::SV));
        assert!(!SystemId::K3.has_rule(Rule::GR));
        assert_eq!("l2".parse::<SystemId>().unwrap(), SystemId::L2);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"system":"K0","hypotheses":["p0 /\\ p1"],"lines":[
            {"formula":"p0 /\\ p1","just":{"kind":"hyp"}},
            {"formula":"p0 /\\ p1 -> p0 sup p1","just":{"kind":"axiom","scheme":"S1"}},
            {"formula":"p0 sup p1","just":{"kind":"mp","from":[1,2]}}]}"#;
        let p = Proof::from_json(text).unwrap();
        assert_eq!(p.lines.len(), 3);
        assert_eq!(p.lines[2].just, Justification::MP { from: [1, 2] });
        let back = Proof::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }
}
