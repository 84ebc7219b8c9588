use std::fmt;

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(n) | Term::Const(n) => f.write_str(n),
            Term::Param(p) => write!(f, "@{p}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const SUP: u8 = 5;
const NOT: u8 = 6;

impl Formula {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, b: &Formula, op: &str, prec: u8, right: bool| {
            let open = prec < ctx;
            if open {
                f.write_str("(")?;
            }
            let (l, r) = if right { (prec + 1, prec) } else { (prec, prec + 1) };
            a.write_prec(f, l)?;
            write!(f, " {op} ")?;
            b.write_prec(f, r)?;
            if open {
                f.write_str(")")?;
            }
            Ok(())
        };
        match self {
            Formula::Prop(p) => f.write_str(p),
            Formula::Pred(p, args) => {
                write!(f, "{p}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(a) => {
                f.write_str("~")?;
                a.write_prec(f, NOT)
            }
            Formula::Iff(a, b) => binary(f, a, b, "<->", IFF, false),
            Formula::Implies(a, b) => binary(f, a, b, "->", IMP, true),
            Formula::Or(a, b) => binary(f, a, b, "\\/", OR, false),
            Formula::And(a, b) => binary(f, a, b, "/\\", AND, false),
            Formula::Sup(a, b) => binary(f, a, b, "sup", SUP, false),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let q = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                if ctx > 0 {
                    f.write_str("(")?;
                }
                write!(f, "{q} {v}. ")?;
                a.write_prec(f, 0)?;
                if ctx > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}
