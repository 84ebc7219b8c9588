//! The `supkit` command line. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use supkit::choice::{ChoiceClass, ChoiceTable, ClassSpec, EquivOracle};
use supkit::constructions::interpolation::{interpolation_report, interpolation_universe};
use supkit::constructions::theory::{build_choice_from_theory, TheoryFragment};
use supkit::constructions::ui::{tables_on, ui_failure_general, ui_failure_witness, ui_pairs, UiWitness};
use supkit::constructions::{object_superposition_report, refute_uniformity};
use supkit::proofs::{check_proof, derives, CheckOptions, Proof};
use supkit::semantics::{check_consequence, eval_fcs, eval_scs, SearchSpace, Semantics, Structure, Verdict};
use supkit::syntax::{parse_lenient, Formula, Signature, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_ORACLE_BOUND: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "supkit", version, about = "Superposition logic toolkit")]
struct Cli {
    /// Emit JSON reports instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for searches (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for sampled runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Domain bound of the equivalence oracle
    #[arg(long, global = true, env = "SUPKIT_ORACLE_BOUND", default_value_t = DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
    /// Largest domain tried for first-order searches
    #[arg(long, global = true, default_value_t = 3)]
    max_domain: usize,
    /// Abort a search after this many (world, table) points
    #[arg(long, global = true, default_value_t = 20_000_000)]
    max_tables: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its primitive form
    Parse { formula: String },
    /// Print the syntax class of a formula
    Classify { formula: String },
    /// Collapse a formula with a choice table
    Collapse {
        formula: String,
        #[arg(long)]
        table: PathBuf,
    },
    /// Evaluate a sentence in a structure under a choice table
    Eval(EvalArgs),
    /// Check that the premises entail the formula
    Consequence {
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check that a formula is valid in a class
    Taut {
        #[arg(long)]
        formula: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a proof in JSON form
    CheckProof {
        proof: PathBuf,
        /// Allow unrestricted formulas in first-order systems
        #[arg(long)]
        unrestricted: bool,
        /// Allow generalization under open hypotheses
        #[arg(long)]
        open_hypotheses: bool,
        /// Also require the proof to end in this formula
        #[arg(long)]
        goal: Option<String>,
    },
    /// Executable constructions
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Args, Debug)]
struct EvalArgs {
    formula: String,
    /// Sentence choice semantics
    #[arg(long, conflicts_with = "fcs", required_unless_present = "fcs")]
    scs: bool,
    /// Formula choice semantics
    #[arg(long)]
    fcs: bool,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    table: PathBuf,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// all, reg, asso, regstar or dec
    #[arg(long, default_value = "all")]
    class: String,
    /// Use formula choice semantics
    #[arg(long)]
    fcs: bool,
    /// Write the countermodel's structure here
    #[arg(long)]
    model_out: Option<PathBuf>,
    /// Write the countermodel's table here
    #[arg(long)]
    table_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// UI failure for `v = c3` at `c1`, `c2`, all four cases
    UiFailure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        case: Option<u8>,
    },
    /// UI failure for a binary relation and its converse
    UiFailureGeneral,
    /// No choice function is uniform
    NoUniform {
        #[arg(long, default_value = "P(v)")]
        alpha: String,
        #[arg(long, default_value = "v")]
        var: String,
    },
    /// Does `(v = a) sup (v = b)` pick out one object?
    ObjectSuperposition {
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// Build a model and choice function from a theory fragment
    BuildModel {
        #[arg(long)]
        theory: PathBuf,
        /// all or reg
        #[arg(long, default_value = "all")]
        class: String,
    },
    /// `a /\ b` implies `a sup b` implies `a \/ b`, exhaustively
    Interpolation {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Check this many randomly chosen sentences instead of all
        #[arg(long)]
        sample: Option<usize>,
    },
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit<T: Serialize>(&mut self, report: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
        if self.cli.json {
            writeln!(self.out, "{}", serde_json::to_string_pretty(report)?)?;
        } else {
            write!(self.out, "{}", text())?;
        }
        Ok(())
    }

    fn space(&self, fcs: bool) -> SearchSpace {
        SearchSpace {
            semantics: if fcs { Semantics::Fcs } else { Semantics::Scs },
            max_domain: self.cli.max_domain,
            oracle_bound: self.cli.oracle_bound,
            max_tables: self.cli.max_tables,
            jobs: self.cli.jobs,
        }
    }

    fn oracle(&self) -> EquivOracle {
        EquivOracle::bounded_fo(self.cli.oracle_bound, Signature::new())
    }
}

/// Usage and input problems, reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn formula(text: &str) -> anyhow::Result<Formula> {
    parse_lenient(text).map(|(f, _)| f).map_err(|e| usage(format!("cannot parse `{text}`: {e}")))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn class(text: &str) -> anyhow::Result<ChoiceClass> {
    text.parse::<ChoiceClass>().map_err(usage)
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, out };
    match dispatch(&mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> anyhow::Result<i32> {
    match &ctx.cli.command {
        Command::Parse { formula: text } => {
            let f = formula(text)?;
            let free: Vec<String> = f.free_vars().into_iter().collect();
            let report = json!({
                "formula": f,
                "primitive": f.primitive(),
                "class": f.classify(),
                "free_vars": free,
                "sentence": f.is_sentence(),
            });
            ctx.emit(&report, || {
                format!(
                    "formula:   {f}\nprimitive: {}\nclass:     {}\nfree:      {}\n",
                    f.primitive(),
                    f.classify(),
                    if free.is_empty() { "-".to_string() } else { free.join(", ") }
                )
            })?;
            Ok(EXIT_OK)
        }
        Command::Classify { formula: text } => {
            let f = formula(text)?;
            let c = f.classify();
            ctx.emit(&json!({ "formula": f, "class": c }), || format!("{c}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Collapse { formula: text, table } => {
            let f = formula(text)?;
            let t: ChoiceTable = read_json(table)?;
            let c = t.collapse(&f).map_err(|e| anyhow!(e))?;
            ctx.emit(&json!({ "formula": f, "collapse": c }), || format!("{c}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Eval(a) => {
            let f = formula(&a.formula)?;
            let m: Structure = read_json(&a.model)?;
            let t: ChoiceTable = read_json(&a.table)?;
            let value =
                if a.fcs { eval_fcs(&m, &t, &f) } else { eval_scs(&m, &t, &f) }.map_err(|e| usage(e.to_string()))?;
            let sem = if a.fcs { "fcs" } else { "scs" };
            ctx.emit(&json!({ "formula": f, "semantics": sem, "value": value }), || format!("{value}\n"))?;
            Ok(if value { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::Consequence { premises, formula: text, search } => {
            let ps = premises.iter().map(|p| formula(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let f = formula(text)?;
            consequence(ctx, &ps, &f, search)
        }
        Command::Taut { formula: text, search } => {
            let f = formula(text)?;
            consequence(ctx, &[], &f, search)
        }
        Command::CheckProof { proof, unrestricted, open_hypotheses, goal } => {
            let p = Proof::from_json(&read(proof)?).map_err(|e| usage(e.to_string()))?;
            let opts = CheckOptions { restricted: !unrestricted, open_hypotheses: *open_hypotheses };
            let result = match goal {
                Some(g) => {
                    let g = formula(g)?;
                    derives(&p.hypotheses, &g, &p, &opts).map(|ok| (ok, Some(g)))
                }
                None => check_proof(&p, &opts).map(|()| (true, None)),
            };
            match result {
                Ok((true, _)) => {
                    let concl = p.conclusion().cloned();
                    let report =
                        json!({ "accepted": true, "system": p.system, "lines": p.lines.len(), "conclusion": concl });
                    ctx.emit(&report, || {
                        format!(
                            "accepted: {} lines in {}, concluding {}\n",
                            p.lines.len(),
                            p.system,
                            concl.map(|c| c.to_string()).unwrap_or_default()
                        )
                    })?;
                    Ok(EXIT_OK)
                }
                Ok((false, g)) => {
                    let g = g.expect("goal given");
                    let report = json!({ "accepted": false, "reason": format!("the proof does not end in {g}") });
                    ctx.emit(&report, || format!("rejected: the proof does not end in {g}\n"))?;
                    Ok(EXIT_REJECTED)
                }
                Err(e) => {
                    let report = json!({ "accepted": false, "line": e.line, "reason": e.kind.to_string() });
                    ctx.emit(&report, || format!("rejected: {e}\n"))?;
                    Ok(EXIT_REJECTED)
                }
            }
        }
        Command::Demo(d) => demo(ctx, d),
    }
}

fn consequence(ctx: &mut Ctx, premises: &[Formula], f: &Formula, search: &SearchArgs) -> anyhow::Result<i32> {
    let c = class(&search.class)?;
    let spec = ClassSpec::new(c, None);
    let space = ctx.space(search.fcs);
    let v: Verdict = check_consequence(premises, f, &spec, &space).map_err(|e| usage(e.to_string()))?;
    if let Some(cm) = &v.countermodel {
        if let Some(path) = &search.model_out {
            fs::write(path, serde_json::to_string_pretty(&cm.model.structure())?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        if let Some(path) = &search.table_out {
            fs::write(path, serde_json::to_string_pretty(&cm.table)?)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let report = json!({ "premises": premises, "formula": f, "verdict": v });
    ctx.emit(&report, || {
        let mut s = format!(
            "{}: class {}, {} worlds, domain sizes {:?}\n",
            v.result, v.space.class, v.space.worlds, v.space.domain_sizes
        );
        if let Some(cm) = &v.countermodel {
            s += &format!("model: {}\ntable: {}\n", cm.model, cm.table);
        }
        s
    })?;
    Ok(if v.is_valid() { EXIT_OK } else { EXIT_REJECTED })
}

fn witness_text(w: &UiWitness) -> String {
    format!(
        "case {} in {:?}\n  psi:      {}\n  closure:  {} = {}\n  instance: {} = {}\n  model:    {}\n",
        w.case_id, w.model, w.psi, w.closure, w.closure_holds, w.instance, w.instance_holds, w.structure
    )
}

fn demo(ctx: &mut Ctx, d: &Demo) -> anyhow::Result<i32> {
    match d {
        Demo::UiFailure { case } => {
            let sig = Signature::new().with_constants(["c1", "c2", "c3"]);
            let alpha = formula("v = c3")?;
            let (t1, t2) = (Term::constant("c1"), Term::constant("c2"));
            let mut ws = Vec::new();
            for f in tables_on(&ui_pairs(&alpha, "v", &t1, &t2)?) {
                let w = ui_failure_witness(&sig, &alpha, "v", &t1, &t2, &f, ctx.cli.max_domain)?;
                if case.is_none_or(|c| c == w.case_id) {
                    ws.push((f, w));
                }
            }
            let ok = ws.iter().all(|(_, w)| w.closure_holds && !w.instance_holds);
            let rows: Vec<_> = ws.iter().map(|(f, w)| json!({ "table": f, "witness": w })).collect();
            ctx.emit(&json!({ "alpha": alpha, "cases": rows, "refuted": ok }), || {
                ws.iter().map(|(f, w)| format!("table: {f}\n{}", witness_text(w))).collect()
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Demo::UiFailureGeneral => {
            let sig = Signature::new().with_constants(["c1", "c2"]);
            let (a, b) = (formula("R(v1, v2)")?, formula("R(v2, v1)")?);
            let vars = ["v1".to_string(), "v2".to_string()];
            let t = [Term::constant("c1"), Term::constant("c2")];
            let s = [Term::constant("c2"), Term::constant("c1")];
            let tables = tables_on(&[(a.clone(), b.clone()), (formula("R(c1, c2)")?, formula("R(c2, c1)")?)]);
            let mut ws = Vec::new();
            for f in &tables {
                ws.push((f.clone(), ui_failure_general(&sig, &a, &b, &vars, &t, &s, f, ctx.cli.max_domain)?));
            }
            let ok = ws.iter().all(|(_, w)| w.closure_holds && !w.instance_holds);
            let rows: Vec<_> = ws.iter().map(|(f, w)| json!({ "table": f, "witness": w })).collect();
            ctx.emit(&json!({ "alpha": a, "beta": b, "cases": rows, "refuted": ok }), || {
                ws.iter().map(|(f, w)| format!("table: {f}\n{}", witness_text(w))).collect()
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Demo::NoUniform { alpha, var } => {
            let a = formula(alpha)?;
            let r = refute_uniformity(&a, var, "v1", "v2", &ctx.oracle()).map_err(|e| usage(e.to_string()))?;
            let ok = r.refutes();
            ctx.emit(&json!({ "refutation": r, "refutes": ok }), || {
                let mut s = format!("pair {{{}, {}}}, swap {:?}\n", r.pair[0], r.pair[1], r.substitution);
                for b in &r.branches {
                    s += &format!(
                        "  f picks {}: swapped choice {}, choice on the image {}, equivalent: {}\n",
                        b.chosen, b.chosen_swapped, b.image_choice, b.demand_holds
                    );
                }
                s += if ok { "no uniform choice on this pair\n" } else { "not refuted\n" };
                s
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Demo::ObjectSuperposition { size } => {
            if *size < 2 {
                return Err(usage("the structure needs at least two elements"));
            }
            let m = Structure::new(Structure::standard_domain(*size)).map_err(|e| usage(e.to_string()))?;
            let (a, b) = (m.domain()[0].clone(), m.domain()[1].clone());
            let r = object_superposition_report(&m, &a, &b, ctx.cli.oracle_bound)?;
            let ok = r.some_unique() && r.no_regular_unique();
            ctx.emit(&json!({ "report": r, "dichotomy": ok }), || {
                let mut s = format!("{}\n", r.sentence);
                for row in &r.rows {
                    s += &format!(
                        "  f picks {} and {}: witnesses {{{}}}, unique {}, regular {}\n",
                        row.at_a,
                        row.at_b,
                        row.witnesses.join(", "),
                        row.unique,
                        row.regular
                    );
                }
                s
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Demo::BuildModel { theory, class: c } => {
            let t = TheoryFragment::from_json(&read(theory)?).map_err(usage)?;
            let c = class(c)?;
            let oracle =
                if t.sentences().iter().all(Formula::is_propositional) { EquivOracle::prop() } else { ctx.oracle() };
            let spec = ClassSpec::new(c, Some(oracle.clone()));
            let model = match build_choice_from_theory(&t, &spec, ctx.cli.max_domain) {
                Ok(m) => m,
                Err(e) => {
                    ctx.emit(&json!({ "built": false, "reason": e.to_string() }), || format!("not built: {e}\n"))?;
                    return Ok(EXIT_REJECTED);
                }
            };
            let check = model.verify(&t, Some(&oracle))?;
            let ok = check.passed();
            ctx.emit(&json!({ "built": true, "model": model, "check": check }), || {
                let mut s = format!("model: {}\n", model.structure);
                for st in &model.steps {
                    s += &format!("  {}: case a{}, g({}, {}) = {}\n", st.sup, st.case, st.alpha, st.beta, st.chosen);
                }
                s += &format!("table: {}\n", model.table);
                s += &format!(
                    "criterion {}, satisfies {}, regular {}\n",
                    check.lemma,
                    check.satisfies,
                    check.regular.map_or("-".to_string(), |r| r.to_string())
                );
                s
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Demo::Interpolation { depth, sample } => {
            let mut universe = interpolation_universe(*depth);
            if let Some(n) = sample {
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.seed);
                universe.shuffle(&mut rng);
                universe.truncate(*n);
            }
            let r = interpolation_report(&universe, ctx.cli.jobs)?;
            let ok = r.holds();
            ctx.emit(&json!({ "seed": ctx.cli.seed, "report": r, "holds": ok }), || {
                format!(
                    "{} sentences, {} pairs, {} cases, {} violations\nor does not entail sup: {}\nsup does not entail and: {}\n",
                    r.sentences,
                    r.pairs,
                    r.cases,
                    r.violation_count,
                    r.or_to_sup.countermodel.as_ref().map_or("no countermodel".into(), |c| format!("{}; {}", c.model, c.table)),
                    r.sup_to_and.countermodel.as_ref().map_or("no countermodel".into(), |c| format!("{}; {}", c.model, c.table)),
                )
            })?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
    }
}
