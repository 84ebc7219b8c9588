//! Random formulas for property tests and the round-trip suite.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Formula, Term};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub props: Vec<String>,
    /// Predicate symbols with arities.
    pub preds: Vec<(String, usize)>,
    /// Function symbols with arities.
    pub funcs: Vec<(String, usize)>,
    pub constants: Vec<String>,
    pub vars: Vec<String>,
    pub max_depth: usize,
    pub quantifiers: bool,
    pub sup: bool,
    pub equality: bool,
    /// Use `\/`, `->`, `<->` and `exists` as well as the primitives.
    pub defined: bool,
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl GenConfig {
    pub fn propositional(atoms: usize, max_depth: usize) -> Self {
        GenConfig {
            props: (0..atoms).map(|i| format!("p{i}")).collect(),
            preds: Vec::new(),
            funcs: Vec::new(),
            constants: Vec::new(),
            vars: Vec::new(),
            max_depth,
            quantifiers: false,
            sup: true,
            equality: false,
            defined: true,
        }
    }

    pub fn first_order(max_depth: usize) -> Self {
        GenConfig {
            props: names(&["p0"]),
            preds: vec![("P".into(), 1), ("Q".into(), 1), ("R".into(), 2)],
            funcs: vec![("g".into(), 1)],
            constants: names(&["c", "d"]),
            vars: names(&["u", "v", "w"]),
            max_depth,
            quantifiers: true,
            sup: true,
            equality: true,
            defined: true,
        }
    }
}

pub fn random_term<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Term {
    let mut options: Vec<u8> = Vec::new();
    if !cfg.vars.is_empty() {
        options.push(0);
    }
    if !cfg.constants.is_empty() {
        options.push(1);
    }
    if depth > 0 && !cfg.funcs.is_empty() {
        options.push(2);
    }
    match options.choose(rng) {
        Some(0) => Term::var(cfg.vars.choose(rng).expect("nonempty")),
        Some(2) => {
            let (f, n) = cfg.funcs.choose(rng).expect("nonempty");
            Term::app(f, (0..*n).map(|_| random_term(rng, cfg, depth - 1)).collect())
        }
        _ => Term::constant(cfg.constants.choose(rng).map_or("c", String::as_str)),
    }
}

fn random_atom<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    let mut options: Vec<u8> = Vec::new();
    if !cfg.props.is_empty() {
        options.push(0);
    }
    if !cfg.preds.is_empty() {
        options.push(1);
    }
    if cfg.equality {
        options.push(2);
    }
    match options.choose(rng) {
        Some(1) => {
            let (p, n) = cfg.preds.choose(rng).expect("nonempty");
            Formula::pred(p, (0..*n).map(|_| random_term(rng, cfg, 1)).collect())
        }
        Some(2) => Formula::eq(random_term(rng, cfg, 1), random_term(rng, cfg, 1)),
        _ => Formula::prop(cfg.props.choose(rng).map_or("p0", String::as_str)),
    }
}

/// A formula of depth at most `cfg.max_depth`.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    gen(rng, cfg, cfg.max_depth)
}

fn gen<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return random_atom(rng, cfg);
    }
    let mut ops: Vec<u8> = vec![0, 1];
    if cfg.sup {
        ops.push(2);
    }
    if cfg.quantifiers && !cfg.vars.is_empty() {
        ops.push(3);
    }
    if cfg.defined {
        ops.extend([4, 5, 6]);
        if cfg.quantifiers && !cfg.vars.is_empty() {
            ops.push(7);
        }
    }
    let d = depth - 1;
    match *ops.choose(rng).expect("nonempty") {
        0 => Formula::not(gen(rng, cfg, d)),
        1 => Formula::and(gen(rng, cfg, d), gen(rng, cfg, d)),
        2 => Formula::sup(gen(rng, cfg, d), gen(rng, cfg, d)),
        3 => Formula::forall(cfg.vars.choose(rng).expect("nonempty"), gen(rng, cfg, d)),
        4 => Formula::or(gen(rng, cfg, d), gen(rng, cfg, d)),
        5 => Formula::implies(gen(rng, cfg, d), gen(rng, cfg, d)),
        6 => Formula::iff(gen(rng, cfg, d), gen(rng, cfg, d)),
        _ => Formula::exists(cfg.vars.choose(rng).expect("nonempty"), gen(rng, cfg, d)),
    }
}

/// The universal closure of a random formula.
pub fn random_sentence<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula {
    random_formula(rng, cfg).universal_closure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn depth_is_bounded() {
        let mut rng = StdRng::seed_from_u64(7);
        let cfg = GenConfig::first_order(4);
        for _ in 0..200 {
            assert!(random_formula(&mut rng, &cfg).depth() <= 4);
            assert!(random_sentence(&mut rng, &cfg).is_sentence());
        }
    }

    #[test]
    fn propositional_stays_propositional() {
        let mut rng = StdRng::seed_from_u64(1);
        let cfg = GenConfig::propositional(3, 5);
        for _ in 0..200 {
            assert!(random_formula(&mut rng, &cfg).is_propositional());
        }
    }
}
