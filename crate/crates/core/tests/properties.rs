//! Property tests. Formulas come from the crate's generator driven by a
//! proptest-chosen seed; the expected values are recomputed here by brute
//! force wherever the library offers a shortcut.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supkit::choice::{
    check_class, extendable, ChoiceClass, ChoiceError, ChoiceTable, ClassSpec, EquivOracle, Mode, Pair,
};
use supkit::gen::{random_formula, random_sentence, GenConfig};
use supkit::proofs::{check_proof, corpus, CheckOptions, SystemId};
use supkit::semantics::{
    eval_classical, eval_fcs, eval_scs, is_tautology, EvalError, SearchSpace, Structure, Valuation,
};
use supkit::syntax::{parse_lenient, Formula, SyntaxClass, Term};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Truth vector of a classical propositional formula over `atoms`, by
/// direct recursion on the syntax tree.
fn truth_vector(f: &Formula, atoms: &[&str]) -> Vec<bool> {
    fn val(f: &Formula, v: &BTreeMap<&str, bool>) -> bool {
        match f {
            Formula::Prop(p) => v[p.as_str()],
            Formula::Not(a) => !val(a, v),
            Formula::And(a, b) => val(a, v) && val(b, v),
            Formula::Or(a, b) => val(a, v) || val(b, v),
            Formula::Implies(a, b) => !val(a, v) || val(b, v),
            Formula::Iff(a, b) => val(a, v) == val(b, v),
            other => panic!("not classical propositional: {other}"),
        }
    }
    (0..1u32 << atoms.len())
        .map(|bits| {
            let v: BTreeMap<&str, bool> = atoms.iter().enumerate().map(|(i, a)| (*a, bits >> i & 1 == 1)).collect();
            val(f, &v)
        })
        .collect()
}

/// Fills `f` until `task` stops asking for pairs, deciding each new pair by
/// `pick`.
fn fill<T>(
    f: &mut ChoiceTable,
    mut pick: impl FnMut(&Formula, &Formula) -> bool,
    mut task: impl FnMut(&ChoiceTable) -> Result<T, Option<Box<Pair>>>,
) -> T {
    for _ in 0..10_000 {
        match task(f) {
            Ok(t) => return t,
            Err(Some(pair)) => {
                let (a, b) = (pair.first(), pair.second());
                let chosen = if pick(a, b) { a.clone() } else { b.clone() };
                f.insert(a, b, &chosen).unwrap();
            }
            Err(None) => panic!("task failed for a reason other than a missing pair"),
        }
    }
    panic!("table did not saturate");
}

fn missing(e: &ChoiceError) -> Option<Box<Pair>> {
    match e {
        ChoiceError::MissingEntry(p) => Some(p.clone()),
        _ => None,
    }
}

fn missing_eval(e: &EvalError) -> Option<Box<Pair>> {
    e.missing_pair().map(|p| Box::new(p.clone()))
}

fn random_structure(r: &mut ChaCha8Rng, size: usize) -> Structure {
    let dom = Structure::standard_domain(size);
    let mut m = Structure::new(dom.clone()).unwrap();
    for c in ["c", "d"] {
        m.set_constant(c, &dom[r.gen_range(0..size)]).unwrap();
    }
    let g: Vec<usize> = (0..size).map(|_| r.gen_range(0..size)).collect();
    m.set_function("g", 1, |a| g[a[0]]);
    for p in ["P", "Q"] {
        let tuples: Vec<Vec<&str>> = dom.iter().filter(|_| r.gen_bool(0.5)).map(|e| vec![e.as_str()]).collect();
        m.set_relation(p, 1, &tuples).unwrap();
    }
    let mut pairs = Vec::new();
    for a in &dom {
        for b in &dom {
            if r.gen_bool(0.5) {
                pairs.push(vec![a.as_str(), b.as_str()]);
            }
        }
    }
    m.set_relation("R", 2, &pairs).unwrap();
    m.set_prop("p0", r.gen_bool(0.5));
    m
}

fn classical_cfg(depth: usize) -> GenConfig {
    GenConfig { sup: false, ..GenConfig::first_order(depth) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &GenConfig::first_order(5));
        let text = f.to_string();
        let (back, _) = parse_lenient(&text).unwrap();
        prop_assert_eq!(&back, &f);
        let spaced = text.replace(' ', "   ");
        prop_assert_eq!(parse_lenient(&spaced).unwrap().0.to_string(), text);
    }

    #[test]
    fn substitution_of_a_variable_for_itself(seed in any::<u64>(), var in 0usize..3) {
        let cfg = GenConfig::first_order(5);
        let f = random_formula(&mut rng(seed), &cfg);
        let v = &cfg.vars[var];
        prop_assert_eq!(f.substitute(v, &Term::var(v)).unwrap(), f);
    }

    #[test]
    fn closed_substitution_removes_exactly_the_variable(seed in any::<u64>(), var in 0usize..3) {
        let cfg = GenConfig::first_order(5);
        let mut r = rng(seed);
        let f = random_formula(&mut r, &cfg);
        let closed = GenConfig { vars: Vec::new(), ..cfg.clone() };
        let t = supkit::gen::random_term(&mut r, &closed, 2);
        let v = &cfg.vars[var];
        let mut expected = f.free_vars();
        expected.remove(v);
        prop_assert_eq!(f.substitute(v, &t).unwrap().free_vars(), expected);
    }

    #[test]
    fn classes_are_closed_under_subformulas(seed in any::<u64>()) {
        let f = random_formula(&mut rng(seed), &GenConfig::first_order(6));
        let c = f.classify();
        for s in f.subformulas() {
            let sc = s.classify();
            match c {
                SyntaxClass::Classical => prop_assert_eq!(sc, SyntaxClass::Classical),
                SyntaxClass::Basic => prop_assert!(sc <= SyntaxClass::Basic),
                SyntaxClass::Restricted => prop_assert!(sc <= SyntaxClass::Restricted),
                SyntaxClass::Unrestricted => {}
            }
        }
        prop_assert_eq!(c == SyntaxClass::Classical, !f.has_sup());
    }

    #[test]
    fn formula_collapse_keeps_free_variables(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, &GenConfig::first_order(5));
        let mut table = ChoiceTable::new(Mode::Formula);
        let mut coin = rng(seed ^ 0x5eed);
        let c = fill(&mut table, |_, _| coin.gen_bool(0.5), |t| t.collapse(&f).map_err(|e| missing(&e)));
        prop_assert!(!c.has_sup());
        prop_assert!(c.free_vars().is_subset(&f.free_vars()));
    }

    #[test]
    fn sentence_collapse_is_a_classical_sentence(seed in any::<u64>()) {
        let f = random_sentence(&mut rng(seed), &GenConfig::propositional(3, 5));
        let mut table = ChoiceTable::new(Mode::Sentence);
        let mut coin = rng(!seed);
        let c = fill(&mut table, |_, _| coin.gen_bool(0.5), |t| t.collapse(&f).map_err(|e| missing(&e)));
        prop_assert!(c.is_classical() && c.is_sentence());
    }

    #[test]
    fn prop_oracle_matches_truth_tables(seed in any::<u64>()) {
        let cfg = GenConfig { sup: false, ..GenConfig::propositional(2, 3) };
        let mut r = rng(seed);
        let (a, b) = (random_formula(&mut r, &cfg), random_formula(&mut r, &cfg));
        let o = EquivOracle::prop();
        let atoms = ["p0", "p1"];
        prop_assert_eq!(o.equivalent(&a, &b).unwrap(), truth_vector(&a, &atoms) == truth_vector(&b, &atoms));
        prop_assert!(o.equivalent(&a, &a).unwrap());
        prop_assert!(o.equivalent(&a, &Formula::and(a.clone(), a.clone())).unwrap());
        prop_assert!(o.equivalent(&a, &Formula::not(Formula::not(a.clone()))).unwrap());
        prop_assert_eq!(o.equivalent(&a, &b).unwrap(), o.equivalent(&b, &a).unwrap());
        if o.equivalent(&a, &b).unwrap() {
            prop_assert!(o.equivalent(&Formula::not(a.clone()), &Formula::not(b.clone())).unwrap());
        }
        prop_assert!(!o.equivalent(&Formula::prop("p0"), &Formula::prop("p1")).unwrap());
    }

    #[test]
    fn classical_sentences_agree_across_semantics(seed in any::<u64>(), size in 1usize..4) {
        let mut r = rng(seed);
        let f = random_sentence(&mut r, &classical_cfg(5));
        let m = random_structure(&mut r, size);
        let expected = eval_classical(&m, &f, &BTreeMap::new()).unwrap();
        let mut sen = ChoiceTable::new(Mode::Sentence);
        let mut form = ChoiceTable::new(Mode::Formula);
        for _ in 0..3 {
            prop_assert_eq!(eval_scs(&m, &sen, &f).unwrap(), expected);
            prop_assert_eq!(eval_fcs(&m, &form, &f).unwrap(), expected);
            let (x, y) = (random_sentence(&mut r, &classical_cfg(2)), random_sentence(&mut r, &classical_cfg(2)));
            if x != y {
                let _ = sen.insert(&x, &y, &x);
                let _ = form.insert(&x, &y, &y);
            }
        }
    }

    #[test]
    fn negation_is_dual(seed in any::<u64>(), size in 1usize..3) {
        let mut r = rng(seed);
        let cfg = GenConfig::first_order(4);
        let f = random_sentence(&mut r, &cfg);
        let m = random_structure(&mut r, size);
        let mut coin = rng(seed.rotate_left(7));
        let mut form = ChoiceTable::new(Mode::Formula);
        let v = fill(&mut form, |_, _| coin.gen_bool(0.5), |t| {
            eval_fcs(&m, t, &f).map_err(|e| missing_eval(&e))
        });
        prop_assert_eq!(eval_fcs(&m, &form, &Formula::not(f.clone())).unwrap(), !v);
        if f.classify() <= SyntaxClass::Restricted {
            let mut sen = ChoiceTable::new(Mode::Sentence);
            let v = fill(&mut sen, |_, _| coin.gen_bool(0.5), |t| {
                eval_scs(&m, t, &f).map_err(|e| missing_eval(&e))
            });
            prop_assert_eq!(eval_scs(&m, &sen, &Formula::not(f.clone())).unwrap(), !v);
        }
    }

    #[test]
    fn sup_is_the_chosen_collapse(seed in any::<u64>()) {
        let cfg = GenConfig::propositional(3, 3);
        let mut r = rng(seed);
        let (a, b) = (random_formula(&mut r, &cfg), random_formula(&mut r, &cfg));
        let s = Formula::sup(a.clone(), b.clone());
        let atoms = ["p0", "p1", "p2"];
        let w = atoms.iter().fold(Valuation::new(), |v, p| v.set(p, r.gen_bool(0.5))).to_structure();
        let mut table = ChoiceTable::new(Mode::Sentence);
        let mut coin = rng(seed ^ 1);
        let v = fill(&mut table, |_, _| coin.gen_bool(0.5), |t| {
            eval_scs(&w, t, &s).map_err(|e| missing_eval(&e))
        });
        let chosen = table.choose(&table.collapse(&a).unwrap(), &table.collapse(&b).unwrap()).unwrap();
        prop_assert_eq!(v, eval_classical(&w, &chosen, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn sv_semantic_core(seed in any::<u64>(), shape in 0u8..3) {
        let cfg = GenConfig::propositional(2, 3);
        let mut r = rng(seed);
        let atoms = ["p0", "p1"];
        let sigma = random_formula(&mut r, &cfg);
        let rho = match shape {
            0 => Formula::not(Formula::not(sigma.clone())),
            1 => Formula::and(sigma.clone(), sigma.clone()),
            _ => random_formula(&mut r, &cfg),
        };
        let tau = random_formula(&mut r, &cfg);
        // A regular table: a random ranking of the 16 truth functions decides
        // between classes, the canonical key inside a class.
        let mut rank: Vec<u32> = (0..16).collect();
        rank.shuffle(&mut r);
        let key = |f: &Formula| truth_vector(f, &atoms).iter().enumerate().fold(0usize, |k, (i, &b)| k | (usize::from(b) << i));
        let pick = |a: &Formula, b: &Formula| {
            let (ka, kb) = (key(a), key(b));
            if ka == kb { a.canonical_key() < b.canonical_key() } else { rank[ka] < rank[kb] }
        };
        let mut table = ChoiceTable::new(Mode::Sentence);
        let targets = [sigma.clone(), rho.clone(), Formula::sup(sigma.clone(), tau.clone()), Formula::sup(rho.clone(), tau.clone())];
        let collapsed: Vec<Formula> = fill(&mut table, pick, |t| {
            targets.iter().map(|x| t.collapse(x)).collect::<Result<Vec<_>, _>>().map_err(|e| missing(&e))
        });
        if key(&collapsed[0]) == key(&collapsed[1]) {
            prop_assert_eq!(key(&collapsed[2]), key(&collapsed[3]));
        }
        // The table is regular by construction; the library must agree.
        let universe: Vec<Formula> = table.touched().into_iter().collect();
        let total = fill(&mut table.clone(), pick, |t| {
            for (i, a) in universe.iter().enumerate() {
                for b in &universe[i + 1..] {
                    t.choose(a, b).map_err(|e| missing(&e))?;
                }
            }
            Ok(t.clone())
        });
        let spec = ClassSpec::new(ChoiceClass::Reg, Some(EquivOracle::prop()));
        prop_assert!(check_class(&total, &spec, &universe).unwrap().is_member());
    }

    #[test]
    fn class_inclusions(seed in any::<u64>(), n in 3usize..5) {
        let cfg = GenConfig { sup: false, ..GenConfig::propositional(2, 2) };
        let mut r = rng(seed);
        let mut universe: Vec<Formula> = Vec::new();
        let mut seen = BTreeSet::new();
        while universe.len() < n {
            let f = random_formula(&mut r, &cfg);
            if seen.insert(f.primitive()) {
                universe.push(f);
            }
        }
        let mut table = ChoiceTable::new(Mode::Sentence);
        for (i, a) in universe.iter().enumerate() {
            for b in &universe[i + 1..] {
                let c = if r.gen_bool(0.5) { a } else { b };
                table.insert(a, b, c).unwrap();
            }
        }
        let member = |c: ChoiceClass| {
            check_class(&table, &ClassSpec::new(c, Some(EquivOracle::prop())), &universe).unwrap().is_member()
        };
        let [all, reg, asso, star, dec] = ChoiceClass::ALL.map(member);
        prop_assert!(all);
        prop_assert!(!dec || star);
        prop_assert!(!star || reg);
        prop_assert!(!star || asso);
        prop_assert_eq!(star, reg && asso);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tautology_countermodels_reverify(seed in any::<u64>(), class in 0usize..3) {
        let cfg = GenConfig::propositional(2, 3);
        let f = random_sentence(&mut rng(seed), &cfg);
        let c = [ChoiceClass::AllF, ChoiceClass::Asso, ChoiceClass::Reg][class];
        let spec = ClassSpec::new(c, Some(EquivOracle::prop()));
        let v = is_tautology(&f, &spec, &SearchSpace::default()).unwrap();
        if let Some(cm) = &v.countermodel {
            let m = cm.model.structure();
            prop_assert!(!eval_scs(&m, &cm.table, &f).unwrap());
            let atoms: BTreeSet<String> = f.prop_atoms();
            prop_assert!(extendable(&cm.table, &spec).unwrap());
            prop_assert!(atoms.iter().all(|a| m.prop(a).is_some()));
        }
    }
}

#[test]
fn proofs_survive_moving_up_the_hierarchy() {
    for e in corpus::entries() {
        let from = e.proof.system;
        for to in SystemId::ALL {
            if to.is_first_order() != from.is_first_order() || to.level() < from.level() {
                continue;
            }
            let mut p = e.proof.clone();
            p.system = to;
            assert_eq!(check_proof(&p, &CheckOptions::default()), Ok(()), "{} in {to}", e.name);
        }
    }
}
