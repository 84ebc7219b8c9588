//! A fixed set of checked derivations covering every scheme and rule, and
//! mutations of them that the checker must reject.

use std::mem::discriminant;

use crate::syntax::{parse_lenient, Formula};

use super::build::{self, BuildError, Derivation};
use super::{check_proof, derives, CheckOptions, Justification, LineErrorKind, Proof, ProofError, Scheme, SystemId};

pub struct Entry {
    pub name: &'static str,
    pub sigma: Vec<Formula>,
    pub goal: Formula,
    pub proof: Proof,
}

impl Entry {
    pub fn verify(&self) -> Result<bool, ProofError> {
        derives(&self.sigma, &self.goal, &self.proof, &CheckOptions::default())
    }
}

pub struct Mutation {
    pub name: &'static str,
    pub proof: Proof,
    pub line: usize,
    pub expected: LineErrorKind,
}

impl Mutation {
    /// Rejected at the expected line for the expected kind of reason.
    pub fn caught(&self) -> bool {
        match check_proof(&self.proof, &CheckOptions::default()) {
            Ok(()) => false,
            Err(e) => e.line == self.line && discriminant(&e.kind) == discriminant(&self.expected),
        }
    }
}

fn f(s: &str) -> Formula {
    parse_lenient(s).expect("corpus formulas parse").0
}

fn entry(name: &'static str, sigma: &[&str], goal: &str, d: Derivation) -> Entry {
    Entry { name, sigma: sigma.iter().map(|s| f(s)).collect(), goal: f(goal), proof: d.into_proof() }
}

fn hyps(system: SystemId, list: &[&str]) -> (Derivation, Vec<usize>) {
    let mut d = Derivation::new(system);
    let lines = list.iter().map(|s| d.hyp(f(s))).collect();
    (d, lines)
}

/// `~~a <-> a` in `system`.
fn dn_iff(system: SystemId, a: &Formula) -> Result<Derivation, BuildError> {
    Ok(build::biconditional(&build::double_negation_elim(a), &build::double_negation_intro(a))?.retarget(system))
}

fn make() -> Result<Vec<Entry>, BuildError> {
    use SystemId::*;
    let mut out = Vec::new();

    let c = build::conjunction(&build::assume(K0, f("p0")), &build::assume(K0, f("p1")))?;
    let mut d = Derivation::new(K0);
    let a = d.inline(&c);
    let s = d.axiom(f("p0 /\\ p1 -> p0 sup p1"), Scheme::S1)?;
    d.mp(a, s)?;
    out.push(entry("k0-s1-superposition-of-truths", &["p0", "p1"], "p0 sup p1", d));

    let (mut d, h) = hyps(K0, &["p0 sup p1"]);
    let s = d.axiom(f("p0 sup p1 -> p0 \\/ p1"), Scheme::S2)?;
    d.mp(h[0], s)?;
    out.push(entry("k0-s2-superposition-to-disjunction", &["p0 sup p1"], "p0 \\/ p1", d));

    let (mut d, h) = hyps(K0, &["p0 sup p1"]);
    let s = d.axiom(f("p0 sup p1 -> p1 sup p0"), Scheme::S3)?;
    d.mp(h[0], s)?;
    out.push(entry("k0-s3-commutation", &["p0 sup p1"], "p1 sup p0", d));

    out.push(entry("k0-identity", &[], "p0 -> p0", build::identity(&f("p0"))));
    out.push(entry("k0-double-negation", &[], "~~p0 -> p0", build::double_negation_elim(&f("p0"))));

    let cert = dn_iff(K0, &f("p0"))?;
    let mut d = Derivation::new(K1);
    let l = d.inline(&cert);
    d.sv(l, f("p1"), cert.into_proof())?;
    out.push(entry("k1-sv-double-negation", &[], "(~~p0 sup p1) <-> (p0 sup p1)", d));

    let (mut d, h) = hyps(K2, &["(p0 sup p1) sup p2"]);
    let s = d.axiom(f("(p0 sup p1) sup p2 -> p0 sup (p1 sup p2)"), Scheme::S4)?;
    d.mp(h[0], s)?;
    out.push(entry("k2-s4-association", &["(p0 sup p1) sup p2"], "p0 sup (p1 sup p2)", d));

    let c = build::conjunction(&build::assume(K3, f("p0")), &build::assume(K3, f("~p1")))?;
    let mut d = Derivation::new(K3);
    let a = d.inline(&c);
    let s = d.axiom(f("p0 /\\ ~p1 -> ((p0 sup p1) <-> (~p0 sup ~p1))"), Scheme::S5)?;
    d.mp(a, s)?;
    out.push(entry("k3-s5-negation-swap", &["p0", "~p1"], "(p0 sup p1) <-> (~p0 sup ~p1)", d));

    let (mut d, h) = hyps(L0, &["forall v. (P(v) -> Q(v))", "P(c)"]);
    let s = d.axiom(f("(forall v. (P(v) -> Q(v))) -> (P(c) -> Q(c))"), Scheme::UI)?;
    let s = d.mp(h[0], s)?;
    d.mp(h[1], s)?;
    out.push(entry("l0-ui-classical-body", &["forall v. (P(v) -> Q(v))", "P(c)"], "Q(c)", d));

    let (mut d, h) = hyps(L0, &["forall v. (p0 -> P(v))", "p0"]);
    let s = d.axiom(f("(forall v. (p0 -> P(v))) -> (p0 -> forall v. P(v))"), Scheme::D)?;
    let s = d.mp(h[0], s)?;
    d.mp(h[1], s)?;
    out.push(entry("l0-d-distribution", &["forall v. (p0 -> P(v))", "p0"], "forall v. P(v)", d));

    let (mut d, h) = hyps(L0, &["c = d", "d = e"]);
    let s = d.axiom(f("c = d -> (d = e -> c = e)"), Scheme::I3)?;
    let s = d.mp(h[0], s)?;
    let s = d.mp(h[1], s)?;
    let t = d.axiom(f("c = e -> e = c"), Scheme::I2)?;
    d.mp(s, t)?;
    out.push(entry("l0-identity-symmetry-transitivity", &["c = d", "d = e"], "e = c", d));

    let mut d = Derivation::new(L0);
    let s = d.axiom(f("v = v"), Scheme::I1)?;
    d.gr(s, "v")?;
    out.push(entry("l0-gr-reflexivity", &[], "forall v. v = v", d));

    let mut d = build::identity(&f("P(v) sup p0")).retarget(L0);
    let l = d.last();
    d.gr(l, "v")?;
    out.push(entry("l0-gr-restricted", &[], "forall v. ((P(v) sup p0) -> (P(v) sup p0))", d));

    let (mut d, h) = hyps(L0, &["c = d"]);
    let s = d.axiom(f("forall v. forall u. (v = u -> g(v) = g(u))"), Scheme::I4)?;
    let t =
        d.axiom(f("(forall v. forall u. (v = u -> g(v) = g(u))) -> forall u. (c = u -> g(c) = g(u))"), Scheme::UI)?;
    let s = d.mp(s, t)?;
    let t = d.axiom(f("(forall u. (c = u -> g(c) = g(u))) -> (c = d -> g(c) = g(d))"), Scheme::UI)?;
    let s = d.mp(s, t)?;
    d.mp(h[0], s)?;
    out.push(entry("l0-i4-congruence", &["c = d"], "g(c) = g(d)", d));

    let mut d = Derivation::new(L0);
    d.axiom(f("forall v. forall u. (v = u -> ((P(v) sup p0) -> (P(u) sup p0)))"), Scheme::I5)?;
    out.push(entry("l0-i5-superposed-body", &[], "forall v. forall u. (v = u -> ((P(v) sup p0) -> (P(u) sup p0)))", d));

    let cert = dn_iff(L0, &f("P(c)"))?;
    let mut d = Derivation::new(L1);
    let l = d.inline(&cert);
    d.sv(l, f("Q(c)"), cert.into_proof())?;
    out.push(entry("l1-sv-first-order", &[], "(~~P(c) sup Q(c)) <-> (P(c) sup Q(c))", d));

    Ok(out)
}

/// The positive corpus.
pub fn entries() -> Vec<Entry> {
    make().expect("corpus builds")
}

fn find(name: &str) -> Proof {
    entries().into_iter().find(|e| e.name == name).expect("corpus entry").proof
}

fn last_just(p: &mut Proof) -> &mut Justification {
    &mut p.lines.last_mut().expect("nonempty").just
}

/// Proofs that must be rejected, with the line and reason of rejection.
pub fn mutations() -> Vec<Mutation> {
    use LineErrorKind as K;
    let mut out = Vec::new();

    let mut p = find("k0-s3-commutation");
    *last_just(&mut p) = Justification::MP { from: [1, 1] };
    out.push(Mutation { name: "mp-wrong-reference", proof: p, line: 3, expected: K::MpMismatch(1, 1) });

    let mut p = find("k0-s3-commutation");
    *last_just(&mut p) = Justification::MP { from: [1, 3] };
    out.push(Mutation { name: "mp-forward-reference", proof: p, line: 3, expected: K::BadReference(3) });

    let mut p = find("k2-s4-association");
    p.system = SystemId::K1;
    out.push(Mutation {
        name: "s4-outside-k2",
        proof: p,
        line: 2,
        expected: K::SchemeNotInSystem { scheme: Scheme::S4, system: SystemId::K1 },
    });

    let mut p = find("k3-s5-negation-swap");
    p.system = SystemId::K2;
    let line = p.lines.len() - 1;
    out.push(Mutation {
        name: "s5-outside-k3",
        proof: p,
        line,
        expected: K::SchemeNotInSystem { scheme: Scheme::S5, system: SystemId::K2 },
    });

    let mut p = find("k1-sv-double-negation");
    p.system = SystemId::K0;
    let line = p.lines.len();
    out.push(Mutation {
        name: "sv-in-k0",
        proof: p,
        line,
        expected: K::RuleNotInSystem { rule: super::Rule::SV, system: SystemId::K0 },
    });

    let mut p = find("k1-sv-double-negation");
    if let Justification::SV { cert, .. } = last_just(&mut p) {
        cert.lines.pop();
    }
    let line = p.lines.len();
    out.push(Mutation {
        name: "sv-certificate-proves-something-else",
        proof: p,
        line,
        expected: K::CertConclusion { found: String::new() },
    });

    let mut p = find("k1-sv-double-negation");
    if let Justification::SV { cert, .. } = last_just(&mut p) {
        cert.lines[0].just = Justification::Axiom { scheme: Scheme::P3, bindings: None };
    }
    let line = p.lines.len();
    out.push(Mutation {
        name: "sv-certificate-invalid",
        proof: p,
        line,
        expected: K::Cert(Box::new(ProofError { line: 1, kind: K::Empty })),
    });

    let mut p = find("k1-sv-double-negation");
    let last = p.lines.len() - 1;
    p.lines[last].formula = f("(~~p0 sup p1) <-> (p0 sup p2)");
    out.push(Mutation { name: "sv-wrong-shape", proof: p, line: last + 1, expected: K::SvShape(0) });

    let mut p = Proof::new(SystemId::L0);
    p.lines.push(super::ProofLine {
        formula: f("(forall v. P(v)) -> P(w)"),
        just: Justification::Axiom { scheme: Scheme::UI, bindings: None },
    });
    out.push(Mutation {
        name: "ui-open-term",
        proof: p,
        line: 1,
        expected: K::SideCondition { scheme: Scheme::UI, reason: String::new() },
    });

    let mut p = find("l0-d-distribution");
    p.hypotheses = vec![f("forall v. (P(v) -> Q(v))"), f("P(v)")];
    p.lines[0].formula = p.hypotheses[0].clone();
    p.lines[1].formula = p.hypotheses[1].clone();
    p.lines[2].formula = f("(forall v. (P(v) -> Q(v))) -> (P(v) -> forall v. Q(v))");
    out.push(Mutation {
        name: "d-variable-free-in-antecedent",
        proof: p,
        line: 3,
        expected: K::SideCondition { scheme: Scheme::D, reason: String::new() },
    });

    let mut p = Proof::new(SystemId::L0);
    p.hypotheses = vec![f("forall v. P(v)")];
    p.lines.push(super::ProofLine { formula: f("forall v. P(v)"), just: Justification::Hypothesis });
    p.lines.push(super::ProofLine {
        formula: f("(forall v. P(v)) -> P(v)"),
        just: Justification::Axiom { scheme: Scheme::UI, bindings: None },
    });
    out.push(Mutation {
        name: "ui-variable-instance",
        proof: p,
        line: 2,
        expected: K::SideCondition { scheme: Scheme::UI, reason: String::new() },
    });

    let mut p = Proof::new(SystemId::L0);
    p.hypotheses = vec![f("P(c)")];
    p.lines.push(super::ProofLine { formula: f("P(c)"), just: Justification::Hypothesis });
    p.lines
        .push(super::ProofLine { formula: f("forall u. P(c)"), just: Justification::GR { from: 1, var: "v".into() } });
    out.push(Mutation {
        name: "gr-wrong-formula",
        proof: p,
        line: 2,
        expected: K::GrMismatch { from: 0, var: String::new() },
    });

    let mut p = Proof::new(SystemId::L0);
    p.hypotheses = vec![f("P(v)")];
    p.lines.push(super::ProofLine { formula: f("P(v)"), just: Justification::Hypothesis });
    p.lines
        .push(super::ProofLine { formula: f("forall v. P(v)"), just: Justification::GR { from: 1, var: "v".into() } });
    out.push(Mutation { name: "gr-open-hypothesis", proof: p, line: 2, expected: K::OpenHypothesis(String::new()) });

    let mut p = find("k0-s3-commutation");
    p.hypotheses = vec![f("p1 sup p0")];
    out.push(Mutation {
        name: "hypothesis-not-in-sigma",
        proof: p,
        line: 1,
        expected: K::NotHypothesis(String::new()),
    });

    let mut p = find("l0-gr-restricted");
    p.hypotheses = vec![f("(forall v. (P(v) sup p0)) sup p1")];
    p.lines.insert(0, super::ProofLine { formula: p.hypotheses[0].clone(), just: Justification::Hypothesis });
    out.push(Mutation { name: "unrestricted-line", proof: p, line: 0, expected: K::NotRestricted(String::new()) });

    let mut p = find("k0-identity");
    p.lines[0].formula = f("p0 -> p0 -> p0");
    out.push(Mutation { name: "axiom-misquoted", proof: p, line: 1, expected: K::NoMatch(Scheme::P2) });

    out
}
