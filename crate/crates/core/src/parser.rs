//! Reader and printer for the symbolic problem grammar.
//!
//! | level | connective      | spellings                | associativity |
//! |-------|-----------------|--------------------------|---------------|
//! | 1     | biconditional   | `↔` `<->` `⇔` `<=>`      | left          |
//! | 2     | implication     | `→` `->` `⇒` `=>`        | right         |
//! | 3     | exclusive or    | `⊕` `xor`                | left          |
//! | 4     | disjunction     | `∨` `\|`                 | left          |
//! | 5     | conjunction     | `∧` `&`                  | left          |
//! | 6     | negation        | `¬` `~` `!`              | prefix        |
//! | 6     | quantifiers     | `∀` `forall` `∃` `exists`| prefix        |
//!
//! Quantifiers bind as tightly as negation, so `∀x P(x) ∧ Q(x)` reads as
//! `(∀x P(x)) ∧ Q(x)`; write `∀x (P(x) ∧ Q(x))` for the wider scope. Text
//! after `:::` on a line is a gloss and is ignored.

use std::fmt;

use thiserror::Error;

use crate::ast::{canonicalize_literal, AstError, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { line: pos.line, column: pos.column, message: message.into() }
    }
}

/// Error raised while reading a whole problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("premise {index}: {error}")]
    Premise { index: usize, error: ParseError },
    #[error("query: {0}")]
    Query(ParseError),
    #[error("problem has no query line")]
    MissingQuery,
    #[error("problem has more than one query line (line {line})")]
    DuplicateQuery { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremiseLine {
    pub text: String,
    pub gloss: Option<String>,
}

/// Textual form of a problem before parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSource {
    pub id: String,
    pub premises: Vec<PremiseLine>,
    pub query: String,
}

impl ProblemSource {
    pub fn new(id: impl Into<String>, premises: impl IntoIterator<Item = impl Into<String>>, query: impl Into<String>) -> Self {
        ProblemSource {
            id: id.into(),
            premises: premises
                .into_iter()
                .map(|p| {
                    let text: String = p.into();
                    let (body, gloss) = split_gloss(&text);
                    PremiseLine { text: body.to_string(), gloss: gloss.map(str::to_string) }
                })
                .collect(),
            query: query.into(),
        }
    }

    /// Reads the line-oriented problem format: one premise per line, the query on a
    /// line starting with `?` (or `query:`), `#` comments and blank lines skipped.
    pub fn from_text(id: impl Into<String>, text: &str) -> Result<Self, ProblemError> {
        let mut premises = Vec::new();
        let mut query = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let rest = line
                .strip_prefix('?')
                .or_else(|| line.strip_prefix("query:"))
                .or_else(|| line.strip_prefix("Query:"));
            match rest {
                Some(q) => {
                    if query.is_some() {
                        return Err(ProblemError::DuplicateQuery { line: n + 1 });
                    }
                    query = Some(q.trim().to_string());
                }
                None => {
                    let (body, gloss) = split_gloss(line);
                    premises.push(PremiseLine { text: body.trim().to_string(), gloss: gloss.map(str::to_string) });
                }
            }
        }
        let query = query.ok_or(ProblemError::MissingQuery)?;
        Ok(ProblemSource { id: id.into(), premises, query })
    }
}

/// Splits `formula ::: gloss` into its two halves.
pub fn split_gloss(line: &str) -> (&str, Option<&str>) {
    match line.find(":::") {
        Some(i) => (&line[..i], Some(line[i + 3..].trim())),
        None => (line, None),
    }
}

/// Parsed premises (in source order) and query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedProblem {
    pub premises: Vec<Formula>,
    pub query: Formula,
}

pub fn parse_problem(src: &ProblemSource) -> Result<ParsedProblem, ProblemError> {
    let premises = src
        .premises
        .iter()
        .enumerate()
        .map(|(i, p)| parse_formula(&p.text).map_err(|error| ProblemError::Premise { index: i + 1, error }))
        .collect::<Result<Vec<_>, _>>()?;
    let query = parse_formula(&src.query).map_err(ProblemError::Query)?;
    Ok(ParsedProblem { premises, query })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    ForAll,
    Exists,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Not => f.write_str("`¬`"),
            Tok::And => f.write_str("`∧`"),
            Tok::Or => f.write_str("`∨`"),
            Tok::Xor => f.write_str("`⊕`"),
            Tok::Implies => f.write_str("`→`"),
            Tok::Iff => f.write_str("`↔`"),
            Tok::ForAll => f.write_str("`∀`"),
            Tok::Exists => f.write_str("`∃`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (line_no, raw_line) in text.lines().enumerate() {
        let (line, _) = split_gloss(raw_line);
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let pos = Pos { line: line_no + 1, column: i + 1 };
            let next = chars.get(i + 1).copied();
            let next2 = chars.get(i + 2).copied();
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            if ch.is_alphanumeric() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::ForAll,
                    "exists" => Tok::Exists,
                    "xor" => Tok::Xor,
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
                continue;
            }
            let (tok, width) = match (ch, next, next2) {
                ('(', _, _) => (Tok::LParen, 1),
                (')', _, _) => (Tok::RParen, 1),
                (',', _, _) => (Tok::Comma, 1),
                ('¬' | '~' | '!', _, _) => (Tok::Not, 1),
                ('∧', _, _) => (Tok::And, 1),
                ('&', Some('&'), _) => (Tok::And, 2),
                ('&', _, _) => (Tok::And, 1),
                ('∨', _, _) => (Tok::Or, 1),
                ('|', Some('|'), _) => (Tok::Or, 2),
                ('|', _, _) => (Tok::Or, 1),
                ('⊕', _, _) => (Tok::Xor, 1),
                ('→' | '⇒', _, _) => (Tok::Implies, 1),
                ('-', Some('>'), _) => (Tok::Implies, 2),
                ('=', Some('>'), _) => (Tok::Implies, 2),
                ('↔' | '⇔', _, _) => (Tok::Iff, 1),
                ('<', Some('-'), Some('>')) => (Tok::Iff, 3),
                ('<', Some('='), Some('>')) => (Tok::Iff, 3),
                ('∀', _, _) => (Tok::ForAll, 1),
                ('∃', _, _) => (Tok::Exists, 1),
                _ => return Err(ParseError::at(pos, format!("unknown token `{ch}`"))),
            };
            out.push((tok, pos));
            i += width;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, context: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(ParseError::at(pos, format!("expected {tok} {context}, found {t}"))),
            None if tok == Tok::RParen => Err(ParseError::at(pos, "unbalanced parentheses: missing `)`")),
            None => Err(ParseError::at(pos, format!("expected {tok} {context}, found end of input"))),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.xor()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.eat(&Tok::Xor) {
            let rhs = self.or()?;
            lhs = Formula::xor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::ForAll) | Some(Tok::Exists) => {
                let universal = self.bump() == Some(Tok::ForAll);
                let mut vars = vec![self.quantified_var()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                    vars.push(self.quantified_var()?);
                }
                let mut body = self.unary()?;
                for v in vars.into_iter().rev() {
                    body = if universal { Formula::forall(v, body) } else { Formula::exists(v, body) };
                }
                Ok(body)
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.iff()?;
                self.expect(Tok::RParen, "to close `(`")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => self.atom(),
            Some(t) => Err(ParseError::at(self.pos(), format!("unexpected {t}"))),
            None => Err(ParseError::at(self.pos(), "unexpected end of input")),
        }
    }

    fn quantified_var(&mut self) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(name)) if is_variable_name(&name) => Ok(name),
            Some(Tok::Ident(name)) => {
                Err(ParseError::at(pos, format!("quantified variable `{name}` must start with a lowercase letter")))
            }
            Some(t) => Err(ParseError::at(pos, format!("expected a variable after quantifier, found {t}"))),
            None => Err(ParseError::at(pos, "expected a variable after quantifier, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        let Some(Tok::Ident(pred)) = self.bump() else { unreachable!("atom called on identifier") };
        let args = if self.eat(&Tok::LParen) { self.term_list()? } else { Vec::new() };
        canonicalize_literal(&pred, args, 0).map(Formula::Atom).map_err(|e| match e {
            AstError::MalformedLiteral { .. } => ParseError::at(pos, e.to_string()),
        })
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "to close argument list")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(name)) => {
                if self.eat(&Tok::LParen) {
                    Ok(Term::Func(name, self.term_list()?))
                } else if is_variable_name(&name) {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::Const(name))
                }
            }
            Some(t) => Err(ParseError::at(pos, format!("expected a term, found {t}"))),
            None => Err(ParseError::at(pos, "expected a term, found end of input")),
        }
    }
}

/// Lowercase-initial identifiers are variables; everything else is a constant.
pub fn is_variable_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_lowercase())
}

/// Parses one formula. Free variables are universally quantified.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let end = end_pos(text);
    if toks.is_empty() {
        return Err(ParseError::at(end, "empty input"));
    }
    let mut parser = Parser { toks, at: 0, end };
    let f = parser.iff()?;
    if let Some((tok, pos)) = parser.toks.get(parser.at) {
        let msg = match tok {
            Tok::RParen => "unbalanced parentheses: unexpected `)`".to_string(),
            t => format!("unexpected {t} after complete formula"),
        };
        return Err(ParseError::at(*pos, msg));
    }
    Ok(close_universally(f))
}

fn end_pos(text: &str) -> Pos {
    let lines: Vec<&str> = text.lines().collect();
    match lines.last() {
        Some(last) => Pos { line: lines.len(), column: split_gloss(last).0.chars().count() + 1 },
        None => Pos { line: 1, column: 1 },
    }
}

/// Wraps free variables in universal quantifiers, placed just inside any
/// leading `∀` prefix so `∀x (R(x, y))` becomes `∀x ∀y (R(x, y))`.
pub fn close_universally(f: Formula) -> Formula {
    let free = f.free_vars();
    if free.is_empty() {
        return f;
    }
    fn insert(f: Formula, free: &[String]) -> Formula {
        match f {
            Formula::ForAll(v, body) => Formula::ForAll(v, Box::new(insert(*body, free))),
            other => free.iter().rev().fold(other, |acc, v| Formula::forall(v.clone(), acc)),
        }
    }
    insert(f, &free)
}

const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_XOR: u8 = 3;
const PREC_OR: u8 = 4;
const PREC_AND: u8 = 5;
const PREC_UNARY: u8 = 6;
const PREC_ATOM: u8 = 7;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Atom(_) => PREC_ATOM,
        Formula::Not(_) | Formula::ForAll(..) | Formula::Exists(..) => PREC_UNARY,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Xor(..) => PREC_XOR,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Iff(..) => PREC_IFF,
    }
}

/// Renders a formula in the grammar above using Unicode connectives.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(lit) => out.push_str(&lit.to_string()),
        Formula::Not(a) => {
            out.push('¬');
            write_child(a, precedence(a) < PREC_UNARY, out);
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            out.push(if matches!(f, Formula::ForAll(..)) { '∀' } else { '∃' });
            out.push_str(v);
            out.push(' ');
            write_child(body, true, out);
        }
        Formula::And(a, b) => write_binary(a, b, PREC_AND, "∧", false, out),
        Formula::Or(a, b) => write_binary(a, b, PREC_OR, "∨", false, out),
        Formula::Xor(a, b) => write_binary(a, b, PREC_XOR, "⊕", false, out),
        Formula::Implies(a, b) => write_binary(a, b, PREC_IMPLIES, "→", true, out),
        Formula::Iff(a, b) => write_binary(a, b, PREC_IFF, "↔", false, out),
    }
}

fn write_binary(a: &Formula, b: &Formula, prec: u8, op: &str, right_assoc: bool, out: &mut String) {
    let (pa, pb) = (precedence(a), precedence(b));
    write_child(a, pa < prec || (pa == prec && right_assoc), out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_child(b, pb < prec || (pb == prec && !right_assoc), out);
}

fn write_child(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}
