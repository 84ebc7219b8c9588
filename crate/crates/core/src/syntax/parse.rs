//! Recursive-descent parser for the text grammar.
//!
//! Precedence from loosest to tightest: `<->`, `->` (right associative),
//! `\/`, `/\`, `sup` (or `|`), `~`. Quantifiers extend as far right as
//! possible. The other binary connectives associate to the left.

use std::fmt;

use thiserror::Error;

use super::{is_variable_name, Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(char),
    Unexpected { found: String, expected: String },
    Arity { name: String, expected: usize, found: usize },
    UnknownSymbol(String),
    BadBinder(String),
    Misuse { name: String, declared: &'static str },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Lexical(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "`{name}` takes {expected} argument(s), given {found}")
            }
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::BadBinder(s) => write!(f, "`{s}` cannot be bound by a quantifier"),
            ParseErrorKind::Misuse { name, declared } => write!(f, "`{name}` is declared as a {declared}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Param(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Sup,
    Eq,
    Forall,
    Exists,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Param(s) => write!(f, "`@{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::Imp => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Sup => f.write_str("`sup`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Exists => f.write_str("`exists`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                '~' => (Tok::Not, 1),
                '|' => (Tok::Sup, 1),
                '=' => (Tok::Eq, 1),
                '@' => {
                    let len = rest[1..].find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len() - 1);
                    if len == 0 {
                        return Err(ParseError { pos: start, kind: ParseErrorKind::Lexical('@') });
                    }
                    (Tok::Param(rest[1..1 + len].to_string()), 1 + len)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
                    let word = &rest[..len];
                    let tok = match word {
                        "sup" => Tok::Sup,
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        _ => Tok::Ident(word.to_string()),
                    };
                    (tok, len)
                }
                other => return Err(ParseError { pos: start, kind: ParseErrorKind::Lexical(other) }),
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: Signature,
    lenient: bool,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { pos: self.pos(), kind })
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        self.err(ParseErrorKind::Unexpected { found: self.peek().to_string(), expected: expected.to_string() })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantified(),
            _ => self.iff(),
        }
    }

    fn quantified(&mut self) -> PResult<Formula> {
        let universal = self.bump() == Tok::Forall;
        let var = match self.peek().clone() {
            Tok::Ident(name) => {
                if !is_variable_name(&name) || self.sig.constants.contains(&name) {
                    return self.err(ParseErrorKind::BadBinder(name));
                }
                self.bump();
                name
            }
            _ => return self.unexpected("a variable"),
        };
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(if universal { Formula::forall(&var, body) } else { Formula::exists(&var, body) })
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut lhs = self.sup()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.sup()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn sup(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Sup {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::sup(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Forall | Tok::Exists => self.quantified(),
            Tok::Param(_) => self.equation(),
            Tok::Ident(name) => {
                if *self.peek2() == Tok::LParen {
                    if self.sig.predicates.contains_key(&name) {
                        return self.predication(name);
                    }
                    if self.sig.functions.contains_key(&name) {
                        return self.equation();
                    }
                    if self.lenient && self.undeclared(&name) {
                        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                            return self.predication(name);
                        }
                        return self.equation();
                    }
                    return self.err(ParseErrorKind::UnknownSymbol(name));
                }
                if *self.peek2() == Tok::Eq {
                    return self.equation();
                }
                if self.sig.prop_atoms.contains(&name) {
                    self.bump();
                    return Ok(Formula::Prop(name));
                }
                if self.lenient && self.undeclared(&name) && !is_variable_name(&name) {
                    self.bump();
                    self.sig.prop_atoms.insert(name.clone());
                    return Ok(Formula::Prop(name));
                }
                if self.sig.constants.contains(&name) || is_variable_name(&name) {
                    self.bump();
                    return self.unexpected("`=`");
                }
                self.err(ParseErrorKind::UnknownSymbol(name))
            }
            _ => self.unexpected("a formula"),
        }
    }

    fn undeclared(&self, name: &str) -> bool {
        !self.sig.constants.contains(name)
            && !self.sig.functions.contains_key(name)
            && !self.sig.predicates.contains_key(name)
            && !self.sig.prop_atoms.contains(name)
    }

    fn predication(&mut self, name: String) -> PResult<Formula> {
        let pos = self.pos();
        self.bump();
        let args = self.arguments()?;
        match self.sig.predicates.get(&name) {
            Some(&n) if n != args.len() => {
                Err(ParseError { pos, kind: ParseErrorKind::Arity { name, expected: n, found: args.len() } })
            }
            Some(_) => Ok(Formula::Pred(name, args)),
            None => {
                self.sig.predicates.insert(name.clone(), args.len());
                Ok(Formula::Pred(name, args))
            }
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Param(p) => {
                self.bump();
                Ok(Term::Param(p))
            }
            Tok::Ident(name) => {
                if *self.peek2() == Tok::LParen {
                    if self.sig.predicates.contains_key(&name) {
                        return self.err(ParseErrorKind::Misuse { name, declared: "predicate" });
                    }
                    let known = self.sig.functions.get(&name).copied();
                    if known.is_none() && !(self.lenient && self.undeclared(&name)) {
                        return self.err(ParseErrorKind::UnknownSymbol(name));
                    }
                    if known.is_none() && name.starts_with(|c: char| c.is_ascii_uppercase()) {
                        return self.err(ParseErrorKind::Misuse { name, declared: "predicate" });
                    }
                    self.bump();
                    let args = self.arguments()?;
                    match known {
                        Some(n) if n != args.len() => Err(ParseError {
                            pos,
                            kind: ParseErrorKind::Arity { name, expected: n, found: args.len() },
                        }),
                        Some(_) => Ok(Term::App(name, args)),
                        None => {
                            self.sig.functions.insert(name.clone(), args.len());
                            Ok(Term::App(name, args))
                        }
                    }
                } else {
                    self.bump();
                    if self.sig.constants.contains(&name) {
                        return Ok(Term::Const(name));
                    }
                    if is_variable_name(&name) {
                        return Ok(Term::Var(name));
                    }
                    if self.sig.functions.contains_key(&name) {
                        return Err(ParseError { pos, kind: ParseErrorKind::Misuse { name, declared: "function" } });
                    }
                    if self.sig.predicates.contains_key(&name) || self.sig.prop_atoms.contains(&name) {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::Misuse { name, declared: "relation symbol" },
                        });
                    }
                    if self.lenient {
                        self.sig.constants.insert(name.clone());
                        return Ok(Term::Const(name));
                    }
                    Err(ParseError { pos, kind: ParseErrorKind::UnknownSymbol(name) })
                }
            }
            _ => self.unexpected("a term"),
        }
    }
}

fn run(text: &str, sig: Signature, lenient: bool) -> Result<(Formula, Signature), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig, lenient };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.unexpected("end of input");
    }
    Ok((f, p.sig))
}

/// Parses against a fixed signature; every symbol must be declared.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    run(text, sig.clone(), false).map(|(f, _)| f)
}

/// Parses while inferring undeclared symbols: capitalised names applied to
/// arguments are predicates, other applied names are functions, bare names
/// in term position are constants unless they look like variables, and bare
/// names in formula position are propositional atoms.
pub fn parse_lenient(text: &str) -> Result<(Formula, Signature), ParseError> {
    run(text, Signature::new(), true)
}

/// Lenient parsing on top of an existing signature, which is extended.
pub fn parse_extending(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    let (f, s) = run(text, sig.clone(), true)?;
    *sig = s;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .with_constants(["c1", "c2", "t1", "t2"])
            .with_function("g", 1)
            .with_predicate("P", 1)
            .with_predicate("Q", 1)
            .with_predicate("A", 1)
            .with_props(["p0", "p1", "p2"])
    }

    #[test]
    fn grammar_cases() {
        let s = sig();
        assert_eq!(parse("p0 \\/ p1", &s).unwrap(), Formula::or(Formula::prop("p0"), Formula::prop("p1")));
        let v = || Term::var("v");
        assert_eq!(
            parse("forall v. (P(v) sup Q(v))", &s).unwrap(),
            Formula::forall("v", Formula::sup(Formula::pred("P", vec![v()]), Formula::pred("Q", vec![v()])))
        );
        let psi = parse("(v1 = t2 /\\ v2 = t1) -> (A(v1) sup A(v2))", &s).unwrap();
        let expected = Formula::implies(
            Formula::and(
                Formula::eq(Term::var("v1"), Term::constant("t2")),
                Formula::eq(Term::var("v2"), Term::constant("t1")),
            ),
            Formula::sup(Formula::pred("A", vec![Term::var("v1")]), Formula::pred("A", vec![Term::var("v2")])),
        );
        assert_eq!(psi, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        let f = parse("p0 -> p1 -> p2", &s).unwrap();
        assert_eq!(f, parse("p0 -> (p1 -> p2)", &s).unwrap());
        let f = parse("p0 \\/ p1 /\\ p2 sup p0", &s).unwrap();
        assert_eq!(f, parse("p0 \\/ (p1 /\\ (p2 sup p0))", &s).unwrap());
        let f = parse("~p0 | p1", &s).unwrap();
        assert_eq!(f, parse("(~p0) sup p1", &s).unwrap());
        let f = parse("p0 <-> p1 <-> p2", &s).unwrap();
        assert_eq!(f, parse("(p0 <-> p1) <-> p2", &s).unwrap());
        let f = parse("p0 /\\ forall v. P(v) \\/ p1", &s).unwrap();
        assert_eq!(f, parse("p0 /\\ (forall v. (P(v) \\/ p1))", &s).unwrap());
        let f = parse("~g(c1) = c2", &s).unwrap();
        assert_eq!(f, Formula::not(Formula::eq(Term::app("g", vec![Term::constant("c1")]), Term::constant("c2"))));
    }

    #[test]
    fn errors_carry_positions() {
        let s = sig();
        let e = parse("p0 /\\ R(c1)", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("R".into()));
        assert_eq!(e.pos, 6);
        let e = parse("P(c1, c2)", &s).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 1, found: 2, .. }));
        let e = parse("p0 # p1", &s).unwrap_err();
        assert_eq!(e, ParseError { pos: 3, kind: ParseErrorKind::Lexical('#') });
        let e = parse("(p0", &s).unwrap_err();
        assert_eq!(e.pos, 3);
        assert!(parse("forall c1. P(c1)", &s).is_err());
        assert!(parse("p0 p1", &s).is_err());
    }

    #[test]
    fn lenient_inference() {
        let (f, s) = parse_lenient("forall v. (R(v, c) sup f(v) = d) -> q").unwrap();
        assert_eq!(s.predicates.get("R"), Some(&2));
        assert_eq!(s.functions.get("f"), Some(&1));
        assert!(s.constants.contains("c") && s.constants.contains("d"));
        assert!(s.prop_atoms.contains("q"));
        assert_eq!(f.free_vars().len(), 0);
        assert!(parse_lenient("R(c) /\\ R(c, c)").is_err());
    }

    #[test]
    fn parameters() {
        let (f, _) = parse_lenient("@e0 = @e1 | P(@e0)").unwrap();
        assert_eq!(f.params().len(), 2);
        assert!(f.vocabulary().constants.is_empty());
    }
}
