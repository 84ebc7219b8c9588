//! Programmatic proof construction: a line-by-line builder, the deduction
//! theorem as a proof transformation, and a handful of propositional lemmas
//! over P1–P3.

use thiserror::Error;

use crate::syntax::Formula;

use super::{Justification, Proof, ProofLine, Scheme, SystemId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("line {0} does not exist")]
    NoLine(usize),
    #[error("line {major} is not an implication with antecedent line {minor}")]
    Mp { minor: usize, major: usize },
    #[error("`{formula}` is not an instance of {scheme}")]
    Axiom { formula: String, scheme: Scheme },
    #[error("line {0} uses {1} on a formula depending on the discharged hypothesis")]
    Discharge(usize, &'static str),
}

/// A proof under construction. Line numbers are 1-based, as in [`Proof`].
#[derive(Clone, Debug)]
pub struct Derivation {
    system: SystemId,
    hypotheses: Vec<Formula>,
    lines: Vec<ProofLine>,
}

impl Derivation {
    pub fn new(system: SystemId) -> Self {
        Derivation { system, hypotheses: Vec::new(), lines: Vec::new() }
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn hypotheses(&self) -> &[Formula] {
        &self.hypotheses
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn last(&self) -> usize {
        self.lines.len()
    }

    pub fn formula(&self, line: usize) -> Result<&Formula, BuildError> {
        line.checked_sub(1).and_then(|i| self.lines.get(i)).map(|l| &l.formula).ok_or(BuildError::NoLine(line))
    }

    pub fn retarget(mut self, system: SystemId) -> Self {
        self.system = system;
        self
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(ProofLine { formula, just });
        self.lines.len()
    }

    pub fn hyp(&mut self, f: Formula) -> usize {
        if !self.hypotheses.iter().any(|h| h.primitive() == f.primitive()) {
            self.hypotheses.push(f.clone());
        }
        self.push(f, Justification::Hypothesis)
    }

    pub fn axiom(&mut self, f: Formula, scheme: Scheme) -> Result<usize, BuildError> {
        if super::match_axiom(&f, scheme).is_none() {
            return Err(BuildError::Axiom { formula: f.to_string(), scheme });
        }
        Ok(self.push(f, Justification::Axiom { scheme, bindings: None }))
    }

    pub fn mp(&mut self, minor: usize, major: usize) -> Result<usize, BuildError> {
        let m = self.formula(minor)?.primitive();
        let maj = self.formula(major)?;
        let concl = match maj {
            Formula::Implies(x, y) if x.primitive() == m => (**y).clone(),
            _ => match maj.primitive() {
                Formula::Implies(x, y) if *x == m => *y,
                _ => return Err(BuildError::Mp { minor, major }),
            },
        };
        Ok(self.push(concl, Justification::MP { from: [minor, major] }))
    }

    pub fn gr(&mut self, from: usize, var: &str) -> Result<usize, BuildError> {
        let f = Formula::forall(var, self.formula(from)?.clone());
        Ok(self.push(f, Justification::GR { from, var: var.to_string() }))
    }

    /// `(A sup s) <-> (B sup s)` from line `from`, which reads `A <-> B` and
    /// is the conclusion of `cert`.
    pub fn sv(&mut self, from: usize, s: Formula, cert: Proof) -> Result<usize, BuildError> {
        let (a, b) = match self.formula(from)? {
            Formula::Iff(a, b) => ((**a).clone(), (**b).clone()),
            _ => return Err(BuildError::NoLine(from)),
        };
        let f = Formula::iff(Formula::sup(a, s.clone()), Formula::sup(b, s));
        Ok(self.push(f, Justification::SV { from, cert: Box::new(cert) }))
    }

    /// Appends the lines of `other`, adopting its hypotheses. Returns the
    /// number of the line holding its conclusion.
    pub fn inline(&mut self, other: &Derivation) -> usize {
        let offset = self.lines.len();
        for h in &other.hypotheses {
            if !self.hypotheses.iter().any(|x| x.primitive() == h.primitive()) {
                self.hypotheses.push(h.clone());
            }
        }
        for l in &other.lines {
            let just = match &l.just {
                Justification::MP { from } => Justification::MP { from: [from[0] + offset, from[1] + offset] },
                Justification::GR { from, var } => Justification::GR { from: from + offset, var: var.clone() },
                Justification::SV { from, cert } => Justification::SV { from: from + offset, cert: cert.clone() },
                other => other.clone(),
            };
            self.lines.push(ProofLine { formula: l.formula.clone(), just });
        }
        self.lines.len()
    }

    /// Deduction theorem: turns a derivation of `C` from `H, a` into one of
    /// `a -> C` from `H`. GR and SV may only act on lines not depending on `a`.
    pub fn discharge(self, a: &Formula) -> Result<Derivation, BuildError> {
        let key = a.primitive();
        let mut out = Derivation::new(self.system);
        out.hypotheses = self.hypotheses.iter().filter(|h| h.primitive() != key).cloned().collect();
        // plain[i]: line proving C_i in `out`; lifted[i]: line proving a -> C_i.
        let mut plain: Vec<Option<usize>> = Vec::with_capacity(self.lines.len());
        let mut lifted: Vec<Option<usize>> = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            let c = l.formula.clone();
            match &l.just {
                Justification::Hypothesis if c.primitive() == key => {
                    let id = identity(a);
                    let at = out.inline(&id);
                    plain.push(None);
                    lifted.push(Some(at));
                }
                Justification::Hypothesis | Justification::Axiom { .. } => {
                    let at = out.push(c, l.just.clone());
                    plain.push(Some(at));
                    lifted.push(None);
                }
                Justification::MP { from } => {
                    let (j, k) = (from[0] - 1, from[1] - 1);
                    if let (Some(pj), Some(pk)) = (plain[j], plain[k]) {
                        let at = out.push(c, Justification::MP { from: [pj, pk] });
                        plain.push(Some(at));
                        lifted.push(None);
                        continue;
                    }
                    // Decide which premise is the major one.
                    let (minor, major) = match self.lines[k].formula.primitive() {
                        Formula::Implies(x, _) if *x == self.lines[j].formula.primitive() => (j, k),
                        _ => (k, j),
                    };
                    let lm = lift(&mut out, a, &self.lines, &plain, &mut lifted, minor)?;
                    let lk = lift(&mut out, a, &self.lines, &plain, &mut lifted, major)?;
                    let d = self.lines[minor].formula.clone();
                    let p2 = Formula::implies(
                        Formula::implies(a.clone(), Formula::implies(d.clone(), c.clone())),
                        Formula::implies(Formula::implies(a.clone(), d), Formula::implies(a.clone(), c)),
                    );
                    let s = out.axiom(p2, Scheme::P2)?;
                    let s = out.mp(lk, s)?;
                    let s = out.mp(lm, s)?;
                    plain.push(None);
                    lifted.push(Some(s));
                }
                Justification::GR { from, var } => match plain[from - 1] {
                    Some(p) => {
                        let at = out.push(c, Justification::GR { from: p, var: var.clone() });
                        plain.push(Some(at));
                        lifted.push(None);
                    }
                    None => return Err(BuildError::Discharge(i + 1, "GR")),
                },
                Justification::SV { from, cert } => match plain[from - 1] {
                    Some(p) => {
                        let at = out.push(c, Justification::SV { from: p, cert: cert.clone() });
                        plain.push(Some(at));
                        lifted.push(None);
                    }
                    None => return Err(BuildError::Discharge(i + 1, "SV")),
                },
            }
        }
        if let Some(last) = self.lines.len().checked_sub(1) {
            lift(&mut out, a, &self.lines, &plain, &mut lifted, last)?;
        } else {
            out.inline(&identity(a));
        }
        Ok(out)
    }

    pub fn into_proof(self) -> Proof {
        Proof { system: self.system, hypotheses: self.hypotheses, lines: self.lines }
    }
}

fn lift(
    out: &mut Derivation,
    a: &Formula,
    lines: &[ProofLine],
    plain: &[Option<usize>],
    lifted: &mut [Option<usize>],
    i: usize,
) -> Result<usize, BuildError> {
    if let Some(l) = lifted[i] {
        return Ok(l);
    }
    let p = plain[i].expect("line is proved plainly or lifted");
    let c = lines[i].formula.clone();
    let ax = out.axiom(Formula::implies(c.clone(), Formula::implies(a.clone(), c)), Scheme::P1)?;
    let l = out.mp(p, ax)?;
    lifted[i] = Some(l);
    Ok(l)
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

fn built(r: Result<Derivation, BuildError>) -> Derivation {
    r.expect("lemma construction uses only well-formed instances")
}

/// `a -> a`.
pub fn identity(a: &Formula) -> Derivation {
    let mut d = Derivation::new(SystemId::K0);
    let r: Result<(), BuildError> = (|| {
        let aa = imp(a, a);
        let s1 = d.axiom(imp(&imp(a, &imp(&aa, a)), &imp(&imp(a, &aa), &aa)), Scheme::P2)?;
        let s2 = d.axiom(imp(a, &imp(&aa, a)), Scheme::P1)?;
        let s3 = d.mp(s2, s1)?;
        let s4 = d.axiom(imp(a, &aa), Scheme::P1)?;
        d.mp(s4, s3)?;
        Ok(())
    })();
    r.expect("identity");
    d
}

/// `~~b -> b`.
pub fn double_negation_elim(b: &Formula) -> Derivation {
    built((|| {
        let mut d = Derivation::new(SystemId::K0);
        let nb = not(b);
        let nnb = not(&nb);
        let h = d.hyp(nnb.clone());
        let p1 = d.axiom(imp(&nnb, &imp(&nb, &nnb)), Scheme::P1)?;
        let s = d.mp(h, p1)?;
        let p3 = d.axiom(imp(&imp(&nb, &nnb), &imp(&imp(&nb, &nb), b)), Scheme::P3)?;
        let s = d.mp(s, p3)?;
        let id = d.inline(&identity(&nb));
        d.mp(id, s)?;
        d.discharge(&nnb)
    })())
}

/// `b -> ~~b`.
pub fn double_negation_intro(b: &Formula) -> Derivation {
    built((|| {
        let mut d = Derivation::new(SystemId::K0);
        let nb = not(b);
        let nnb = not(&nb);
        let nnnb = not(&nnb);
        let h = d.hyp(b.clone());
        let p1 = d.axiom(imp(b, &imp(&nnnb, b)), Scheme::P1)?;
        let s = d.mp(h, p1)?;
        let dn = d.inline(&double_negation_elim(&nb));
        let p3 = d.axiom(imp(&imp(&nnnb, &nb), &imp(&imp(&nnnb, b), &nnb)), Scheme::P3)?;
        let t = d.mp(dn, p3)?;
        d.mp(s, t)?;
        d.discharge(b)
    })())
}

/// `(x -> y) -> (~y -> ~x)`.
pub fn contraposition(x: &Formula, y: &Formula) -> Derivation {
    built((|| {
        let (nx, ny) = (not(x), not(y));
        let (nnx, nny) = (not(&nx), not(&ny));
        // From x -> y and ~~x, get ~~y.
        let mut inner = Derivation::new(SystemId::K0);
        let hxy = inner.hyp(imp(x, y));
        let hnnx = inner.hyp(nnx.clone());
        let dn = inner.inline(&double_negation_elim(x));
        let gx = inner.mp(hnnx, dn)?;
        let gy = inner.mp(gx, hxy)?;
        let di = inner.inline(&double_negation_intro(y));
        inner.mp(gy, di)?;
        let inner = inner.discharge(&nnx)?;

        let mut d = Derivation::new(SystemId::K0);
        let step = d.inline(&inner);
        let hny = d.hyp(ny.clone());
        let p1 = d.axiom(imp(&ny, &imp(&nnx, &ny)), Scheme::P1)?;
        let t = d.mp(hny, p1)?;
        let p3 = d.axiom(imp(&imp(&nnx, &nny), &imp(&imp(&nnx, &ny), &nx)), Scheme::P3)?;
        let u = d.mp(step, p3)?;
        d.mp(t, u)?;
        d.discharge(&ny)?.discharge(&imp(x, y))
    })())
}

/// `b -> (~c -> ~(b -> c))`.
pub fn negated_implication(b: &Formula, c: &Formula) -> Derivation {
    built((|| {
        let mut d = Derivation::new(SystemId::K0);
        let hb = d.hyp(b.clone());
        let hbc = d.hyp(imp(b, c));
        d.mp(hb, hbc)?;
        let d = d.discharge(&imp(b, c))?;
        let mut e = Derivation::new(SystemId::K0);
        let bc_c = e.inline(&d);
        let cp = e.inline(&contraposition(&imp(b, c), c));
        e.mp(bc_c, cp)?;
        e.discharge(b)
    })())
}

/// `a /\ b` from derivations of `a` and of `b`.
pub fn conjunction(da: &Derivation, db: &Derivation) -> Result<Derivation, BuildError> {
    let mut d = Derivation::new(da.system());
    let la = d.inline(da);
    let lb = d.inline(db);
    let a = d.formula(la)?.clone();
    let b = d.formula(lb)?.clone();
    let nb = not(&b);
    let dni = d.inline(&double_negation_intro(&b));
    let nnb = d.mp(lb, dni)?;
    let ni = d.inline(&negated_implication(&a, &nb));
    let s = d.mp(la, ni)?;
    let s = d.mp(nnb, s)?;
    let f = d.formula(s)?.clone();
    let conj = Formula::and(a, b);
    debug_assert_eq!(f.primitive(), conj.primitive());
    d.lines[s - 1].formula = conj;
    Ok(d)
}

/// `a <-> b` from derivations of `a -> b` and `b -> a`.
pub fn biconditional(ab: &Derivation, ba: &Derivation) -> Result<Derivation, BuildError> {
    let mut d = conjunction(ab, ba)?;
    let last = d.last();
    let (a, b) = match d.formula(last)? {
        Formula::And(l, _) => match l.as_ref() {
            Formula::Implies(a, b) => ((**a).clone(), (**b).clone()),
            _ => return Err(BuildError::NoLine(last)),
        },
        _ => return Err(BuildError::NoLine(last)),
    };
    d.lines[last - 1].formula = Formula::iff(a, b);
    Ok(d)
}

/// A single-line derivation of the hypothesis `f`.
pub fn assume(system: SystemId, f: Formula) -> Derivation {
    let mut d = Derivation::new(system);
    d.hyp(f);
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check_proof, CheckOptions};
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    fn closed_theorem(d: Derivation, goal: &str) {
        assert!(d.hypotheses().is_empty());
        let proof = d.into_proof();
        check_proof(&proof, &CheckOptions::default()).unwrap();
        assert_eq!(proof.conclusion().unwrap().primitive(), p(goal).primitive());
    }

    #[test]
    fn lemmas_check() {
        closed_theorem(identity(&p("p0")), "p0 -> p0");
        closed_theorem(double_negation_elim(&p("p0 sup p1")), "~~(p0 sup p1) -> (p0 sup p1)");
        closed_theorem(double_negation_intro(&p("p0")), "p0 -> ~~p0");
        closed_theorem(contraposition(&p("p0"), &p("p1")), "(p0 -> p1) -> (~p1 -> ~p0)");
        closed_theorem(negated_implication(&p("p0"), &p("p1")), "p0 -> (~p1 -> ~(p0 -> p1))");
        let iff = biconditional(&double_negation_elim(&p("p0")), &double_negation_intro(&p("p0"))).unwrap();
        closed_theorem(iff, "~~p0 <-> p0");
    }

    #[test]
    fn discharge_keeps_other_hypotheses() {
        let mut d = Derivation::new(SystemId::K0);
        let a = d.hyp(p("p0"));
        let b = d.hyp(p("p0 -> p1"));
        d.mp(a, b).unwrap();
        let d = d.discharge(&p("p0")).unwrap();
        assert_eq!(d.hypotheses(), &[p("p0 -> p1")]);
        let proof = d.into_proof();
        check_proof(&proof, &CheckOptions::default()).unwrap();
        assert_eq!(proof.conclusion().unwrap(), &p("p0 -> p1"));
    }

    #[test]
    fn discharge_refuses_gr_on_dependent_lines() {
        let mut d = Derivation::new(SystemId::L0);
        let h = d.hyp(p("P(v)"));
        d.gr(h, "v").unwrap();
        assert_eq!(d.discharge(&p("P(v)")).unwrap_err(), BuildError::Discharge(2, "GR"));
    }

    #[test]
    fn conjunction_intro() {
        let c = conjunction(&assume(SystemId::K0, p("p0")), &assume(SystemId::K0, p("p1"))).unwrap();
        let proof = c.into_proof();
        check_proof(&proof, &CheckOptions::default()).unwrap();
        assert_eq!(proof.conclusion().unwrap(), &p("p0 /\\ p1"));
    }
}
