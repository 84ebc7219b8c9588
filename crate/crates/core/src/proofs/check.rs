use crate::syntax::{parse_lenient, Formula, SyntaxClass};

use super::schemes::{try_match, Binding};
use super::{Justification, LineErrorKind, Proof, ProofError, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Every line of a first-order proof must be a restricted formula and
    /// SV may only superpose basic formulas.
    pub restricted: bool,
    /// Allow GR under open hypotheses, subject to the eigenvariable condition.
    pub open_hypotheses: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { restricted: true, open_hypotheses: false }
    }
}

fn err(line: usize, kind: LineErrorKind) -> ProofError {
    ProofError { line, kind }
}

/// Checks every line; the first failure is reported.
pub fn check_proof(p: &Proof, opts: &CheckOptions) -> Result<(), ProofError> {
    if p.lines.is_empty() {
        return Err(err(0, LineErrorKind::Empty));
    }
    let first_order = p.system.is_first_order();
    for h in &p.hypotheses {
        if let Some(kind) = shape_error(h, first_order, opts) {
            return Err(err(0, kind));
        }
    }
    let hyps: Vec<Formula> = p.hypotheses.iter().map(Formula::primitive).collect();
    let mut prims: Vec<Formula> = Vec::with_capacity(p.lines.len());
    for (idx, line) in p.lines.iter().enumerate() {
        let n = idx + 1;
        if let Some(kind) = shape_error(&line.formula, first_order, opts) {
            return Err(err(n, kind));
        }
        let here = line.formula.primitive();
        let earlier = |k: usize| -> Result<&Formula, ProofError> {
            if k == 0 || k >= n {
                Err(err(n, LineErrorKind::BadReference(k)))
            } else {
                Ok(&prims[k - 1])
            }
        };
        match &line.just {
            Justification::Hypothesis => {
                if !hyps.contains(&here) {
                    return Err(err(n, LineErrorKind::NotHypothesis(line.formula.to_string())));
                }
            }
            Justification::Axiom { scheme, bindings } => {
                if !p.system.has_scheme(*scheme) {
                    return Err(err(n, LineErrorKind::SchemeNotInSystem { scheme: *scheme, system: p.system }));
                }
                let found = try_match(&line.formula, *scheme).map_err(|k| err(n, k))?;
                if let Some(given) = bindings {
                    for (name, text) in given {
                        if !binding_agrees(found.get(name), text) {
                            return Err(err(n, LineErrorKind::Binding { name: name.clone() }));
                        }
                    }
                }
            }
            Justification::MP { from } => {
                let (a, b) = (earlier(from[0])?, earlier(from[1])?);
                let fits = |minor: &Formula, major: &Formula| matches!(major, Formula::Implies(x, y) if x.as_ref() == minor && y.as_ref() == &here);
                if !fits(a, b) && !fits(b, a) {
                    return Err(err(n, LineErrorKind::MpMismatch(from[0], from[1])));
                }
            }
            Justification::GR { from, var } => {
                if !p.system.has_rule(Rule::GR) {
                    return Err(err(n, LineErrorKind::RuleNotInSystem { rule: Rule::GR, system: p.system }));
                }
                let prev = earlier(*from)?;
                if here != Formula::forall(var, prev.clone()) {
                    return Err(err(n, LineErrorKind::GrMismatch { from: *from, var: var.clone() }));
                }
                for h in &p.hypotheses {
                    if !h.is_sentence() && !opts.open_hypotheses {
                        return Err(err(n, LineErrorKind::OpenHypothesis(h.to_string())));
                    }
                    if h.has_free(var) {
                        return Err(err(
                            n,
                            LineErrorKind::Eigenvariable { var: var.clone(), hypothesis: h.to_string() },
                        ));
                    }
                }
            }
            Justification::SV { from, cert } => {
                if !p.system.has_rule(Rule::SV) {
                    return Err(err(n, LineErrorKind::RuleNotInSystem { rule: Rule::SV, system: p.system }));
                }
                let prev = earlier(*from)?;
                check_sv(n, *from, prev, &line.formula, cert, p, opts)?;
            }
        }
        prims.push(here);
    }
    Ok(())
}

fn shape_error(f: &Formula, first_order: bool, opts: &CheckOptions) -> Option<LineErrorKind> {
    if !first_order {
        if !f.is_propositional() {
            return Some(LineErrorKind::NotPropositional(f.to_string()));
        }
        return None;
    }
    if opts.restricted && f.classify() > SyntaxClass::Restricted {
        return Some(LineErrorKind::NotRestricted(f.to_string()));
    }
    None
}

fn binding_agrees(found: Option<&Binding>, text: &str) -> bool {
    match found {
        None => false,
        Some(Binding::Var(v)) => v == text.trim(),
        Some(Binding::Formula(f)) => parse_lenient(text).map(|(g, _)| g.primitive() == *f).unwrap_or(false),
        Some(Binding::Term(t)) => parse_lenient(&format!("{text} = {text}"))
            .map(|(g, _)| matches!(g, Formula::Eq(l, _) if l.to_string() == t.to_string()))
            .unwrap_or(false),
    }
}

fn split_iff(f: &Formula) -> Option<(Formula, Formula)> {
    // Primitive biconditional: ~((a -> b) -> ~(b -> a)).
    let Formula::Not(inner) = f else { return None };
    let Formula::Implies(l, r) = inner.as_ref() else { return None };
    let Formula::Implies(a, b) = l.as_ref() else { return None };
    let Formula::Not(r) = r.as_ref() else { return None };
    let Formula::Implies(b2, a2) = r.as_ref() else { return None };
    (a == a2 && b == b2).then(|| ((**a).clone(), (**b).clone()))
}

fn check_sv(
    n: usize,
    from: usize,
    premise: &Formula,
    written: &Formula,
    cert: &Proof,
    outer: &Proof,
    opts: &CheckOptions,
) -> Result<(), ProofError> {
    let (a, b) = split_iff(premise).ok_or_else(|| err(n, LineErrorKind::SvPremise(from)))?;
    let (left, right) = split_iff(&written.primitive()).ok_or_else(|| err(n, LineErrorKind::SvShape(from)))?;
    let (Formula::Sup(a2, s1), Formula::Sup(b2, s2)) = (&left, &right) else {
        return Err(err(n, LineErrorKind::SvShape(from)));
    };
    if **a2 != a || **b2 != b || s1 != s2 {
        return Err(err(n, LineErrorKind::SvShape(from)));
    }
    if opts.restricted && outer.system.is_first_order() {
        for x in [&a, &b, s1.as_ref()] {
            if x.classify() > SyntaxClass::Basic {
                return Err(err(n, LineErrorKind::SvNotBasic(x.to_string())));
            }
        }
    }
    let allowed = if outer.system.is_first_order() {
        vec![super::SystemId::K0, super::SystemId::L0]
    } else {
        vec![super::SystemId::K0]
    };
    if !allowed.contains(&cert.system) {
        let expected = allowed.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" or ");
        return Err(err(n, LineErrorKind::CertSystem { found: cert.system, expected }));
    }
    if !cert.hypotheses.is_empty() || cert.lines.iter().any(|l| l.just == Justification::Hypothesis) {
        return Err(err(n, LineErrorKind::CertHypotheses));
    }
    check_proof(cert, opts).map_err(|e| err(n, LineErrorKind::Cert(Box::new(e))))?;
    let last = cert.conclusion().ok_or_else(|| err(n, LineErrorKind::CertEmpty))?;
    if last.primitive() != *premise {
        return Err(err(n, LineErrorKind::CertConclusion { found: last.to_string() }));
    }
    Ok(())
}

/// `sigma` derives `phi` by `p`: the proof checks, uses only hypotheses
/// from `sigma`, and ends in `phi`.
pub fn derives(sigma: &[Formula], phi: &Formula, p: &Proof, opts: &CheckOptions) -> Result<bool, ProofError> {
    check_proof(p, opts)?;
    let sigma: Vec<Formula> = sigma.iter().map(Formula::primitive).collect();
    if !p.hypotheses.iter().all(|h| sigma.contains(&h.primitive())) {
        return Ok(false);
    }
    Ok(p.conclusion().map(|c| c.primitive() == phi.primitive()).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{ProofLine, Scheme, SystemId};

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn line(f: &str, just: Justification) -> ProofLine {
        ProofLine { formula: p(f), just }
    }

    fn ax(s: Scheme) -> Justification {
        Justification::Axiom { scheme: s, bindings: None }
    }

    fn three_line(system: SystemId) -> Proof {
        Proof {
            system,
            hypotheses: vec![p("p0 /\\ p1")],
            lines: vec![
                line("p0 /\\ p1", Justification::Hypothesis),
                line("p0 /\\ p1 -> p0 sup p1", ax(Scheme::S1)),
                line("p0 sup p1", Justification::MP { from: [1, 2] }),
            ],
        }
    }

    #[test]
    fn accepts_the_basic_derivation() {
        let pr = three_line(SystemId::K0);
        check_proof(&pr, &CheckOptions::default()).unwrap();
        assert!(derives(&[p("p0 /\\ p1")], &p("p0 sup p1"), &pr, &CheckOptions::default()).unwrap());
        assert!(!derives(&[p("p0 /\\ p1")], &p("p1 sup p0"), &pr, &CheckOptions::default()).unwrap());
        assert!(!derives(&[], &p("p0 sup p1"), &pr, &CheckOptions::default()).unwrap());
    }

    #[test]
    fn mp_reference_errors() {
        let mut pr = three_line(SystemId::K0);
        pr.lines[2].just = Justification::MP { from: [1, 3] };
        assert_eq!(check_proof(&pr, &CheckOptions::default()).unwrap_err().kind, LineErrorKind::BadReference(3));
        pr.lines[2].just = Justification::MP { from: [1, 1] };
        assert_eq!(check_proof(&pr, &CheckOptions::default()).unwrap_err().line, 3);
    }

    #[test]
    fn scheme_availability() {
        let pr = Proof {
            system: SystemId::K1,
            hypotheses: vec![],
            lines: vec![line("(p0 sup p1) sup p2 -> p0 sup (p1 sup p2)", ax(Scheme::S4))],
        };
        let e = check_proof(&pr, &CheckOptions::default()).unwrap_err();
        assert_eq!(e.kind, LineErrorKind::SchemeNotInSystem { scheme: Scheme::S4, system: SystemId::K1 });
        let pr = Proof { system: SystemId::K2, ..pr };
        check_proof(&pr, &CheckOptions::default()).unwrap();
    }

    #[test]
    fn restricted_lines() {
        let pr = Proof {
            system: SystemId::L0,
            hypotheses: vec![p("(forall v. (P(v) sup Q(v))) sup p0")],
            lines: vec![line("(forall v. (P(v) sup Q(v))) sup p0", Justification::Hypothesis)],
        };
        let e = check_proof(&pr, &CheckOptions::default()).unwrap_err();
        assert!(matches!(e.kind, LineErrorKind::NotRestricted(_)));
        let loose = CheckOptions { restricted: false, ..CheckOptions::default() };
        check_proof(&pr, &loose).unwrap();
    }

    #[test]
    fn bindings_are_checked() {
        let mut b = std::collections::BTreeMap::new();
        b.insert("phi".to_string(), "p0".to_string());
        let pr = Proof {
            system: SystemId::K0,
            hypotheses: vec![],
            lines: vec![line(
                "p0 /\\ p1 -> p0 sup p1",
                Justification::Axiom { scheme: Scheme::S1, bindings: Some(b.clone()) },
            )],
        };
        check_proof(&pr, &CheckOptions::default()).unwrap();
        b.insert("psi".to_string(), "p2".to_string());
        let pr = Proof {
            lines: vec![line("p0 /\\ p1 -> p0 sup p1", Justification::Axiom { scheme: Scheme::S1, bindings: Some(b) })],
            ..pr
        };
        assert!(matches!(check_proof(&pr, &CheckOptions::default()).unwrap_err().kind, LineErrorKind::Binding { .. }));
    }
}
