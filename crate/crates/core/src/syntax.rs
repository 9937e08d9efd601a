//! Concrete ASCII syntax.
//!
//! ```text
//! process  := "0" | species ("|" species)*
//! species  := (caps ".")? inner
//! inner    := IDENT | "(" species ":" species ")" | "[" "'" IDENT species "]" | "[" species species "]"
//! caps     := "{}" | "{" sum "}" | "rec" IDENT "." caps | IDENT
//! sum      := gamma ("+" gamma)*
//! gamma    := ("[" "+" namelist? ";" "-" namelist? "]")? op
//! op       := "bind" "(" name ")" caps | "cbind" "(" name ")" caps | "mod" "(" "'" IDENT ")" caps
//!           | "cleave" "(" name ")" | "conv" "(" process ")" | "prod" "(" process ")"
//! name     := IDENT | "(" name ":" name ")" | "[" "'" IDENT name "]" | "[" name name "]"
//! ```
//!
//! `#` starts a comment running to the end of the line. A species without
//! capabilities is sugar for `{}.inner`. Inside names the
//! parentheses around a top-level `:` chain may be dropped (`bind(A:B)`), and
//! chains associate to the left.

use std::fmt;

use thiserror::Error;

use crate::congruence::canonicalize;
use crate::semantics::Action;
use crate::terms::{BasicCap, CapOp, Capability, Ident, Inner, Name, NameSet, Process, Species};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    /// 1-based line and column of the start of the span.
    pub fn line_col(&self, input: &str) -> (usize, usize) {
        let upto = &input[..self.span.start.min(input.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

pub fn parse_process(input: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(input)?;
    let out = p.process()?;
    p.finish()?;
    Ok(out)
}

pub fn parse_name(input: &str) -> Result<Name, ParseError> {
    let mut p = Parser::new(input)?;
    let out = p.name()?;
    p.finish()?;
    Ok(out)
}

/// Parses a capability; it must be closed.
pub fn parse_capability(input: &str) -> Result<Capability, ParseError> {
    let mut p = Parser::new(input)?;
    let out = p.caps()?;
    p.finish()?;
    Ok(out)
}

/// Parses the ASCII form of a transition label, e.g. `ncb(E2F1,DP1)`.
pub fn parse_action(input: &str) -> Result<Action, ParseError> {
    let mut p = Parser::new(input)?;
    let out = p.action()?;
    p.finish()?;
    Ok(out)
}

/// Deterministic rendering of the canonical form of `p`.
pub fn print_process(p: &Process) -> String {
    canonicalize(p).to_string()
}

pub fn print_action(a: &Action) -> String {
    a.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Dot,
    Colon,
    Bar,
    Plus,
    Minus,
    Comma,
    Semi,
    Quote,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Quote => "`'`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'.' => Tok::Dot,
            b':' => Tok::Colon,
            b'|' => Tok::Bar,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'\'' => Tok::Quote,
            b'0' if !bytes.get(i + 1).is_some_and(u8::is_ascii_alphanumeric) => Tok::Zero,
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(input[start..=i].to_string())
            }
            _ => {
                let ch = input[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    span: SourceSpan {
                        start,
                        end: start + ch.len_utf8(),
                    },
                    message: format!("unexpected character `{ch}`"),
                    expected: Vec::new(),
                });
            }
        };
        i += 1;
        out.push((tok, SourceSpan { start, end: i }));
    }
    out.push((
        Tok::Eof,
        SourceSpan {
            start: input.len(),
            end: input.len(),
        },
    ));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    scope: Vec<Ident>,
}

impl Parser {
    fn new(input: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        self.peek_at(0)
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos.min(self.toks.len() - 1)].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        ParseError {
            span: self.span(),
            message: format!("expected {}, found {found}", expected.join(" or ")),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error_here(&[&tok.describe()]))
        }
    }

    fn ident(&mut self) -> Result<(Ident, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().1;
                Ok((s, span))
            }
            _ => Err(self.error_here(&["identifier"])),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error_here(&["end of input"]))
        }
    }

    fn process(&mut self) -> Result<Process, ParseError> {
        let mut molecules = Vec::new();
        loop {
            if *self.peek() == Tok::Zero {
                self.bump();
            } else {
                molecules.push(self.species()?);
            }
            if *self.peek() == Tok::Bar {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Process::new(molecules))
    }

    fn starts_caps(&self) -> bool {
        match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::LBrace, _, _) => true,
            (Tok::Ident(kw), Tok::Ident(_), Tok::Dot) if kw == "rec" => true,
            (Tok::Ident(_), Tok::Dot, _) => true,
            _ => false,
        }
    }

    fn species(&mut self) -> Result<Species, ParseError> {
        let caps = if self.starts_caps() {
            let c = self.caps()?;
            self.expect(Tok::Dot)?;
            c
        } else {
            Capability::empty()
        };
        let body = self.inner()?;
        Ok(Species::new(caps, body))
    }

    fn inner(&mut self) -> Result<Inner, ParseError> {
        match self.peek().clone() {
            Tok::Ident(a) => {
                self.bump();
                Ok(Inner::Elementary(a))
            }
            Tok::LParen => {
                self.bump();
                let mut acc = self.species()?;
                self.expect(Tok::Colon)?;
                loop {
                    let rhs = self.species()?;
                    acc = Species::non_covalent(Capability::empty(), acc, rhs);
                    if *self.peek() == Tok::Colon {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
                // the chain's outermost compound is this inner species
                Ok(acc.body)
            }
            Tok::LBracket => {
                self.bump();
                let inner = if *self.peek() == Tok::Quote {
                    self.bump();
                    let (q, _) = self.ident()?;
                    Inner::CovalentMod(q, Box::new(self.species()?))
                } else {
                    let a = self.species()?;
                    let b = self.species()?;
                    Inner::CovalentBond(Box::new(a), Box::new(b))
                };
                self.expect(Tok::RBracket)?;
                Ok(inner)
            }
            _ => Err(self.error_here(&["identifier", "`(`", "`[`"])),
        }
    }

    fn caps(&mut self) -> Result<Capability, ParseError> {
        match self.peek().clone() {
            Tok::LBrace => {
                self.bump();
                if *self.peek() == Tok::RBrace {
                    self.bump();
                    return Ok(Capability::empty());
                }
                let mut summands = vec![self.gamma()?];
                while *self.peek() == Tok::Plus {
                    self.bump();
                    summands.push(self.gamma()?);
                }
                self.expect(Tok::RBrace)?;
                Ok(Capability::Sum(summands))
            }
            Tok::Ident(kw) if kw == "rec" && matches!(self.peek_at(1), Tok::Ident(_)) => {
                let start = self.bump().1;
                let (x, _) = self.ident()?;
                self.expect(Tok::Dot)?;
                self.scope.push(x.clone());
                let body = self.caps();
                self.scope.pop();
                let body = body?;
                let rec = Capability::rec(x.clone(), body);
                if !contractive(&rec) {
                    return Err(ParseError {
                        span: SourceSpan {
                            start: start.start,
                            end: self.toks[self.pos.saturating_sub(1)].1.end,
                        },
                        message: format!("non-contractive recursion `rec {x}`"),
                        expected: Vec::new(),
                    });
                }
                Ok(rec)
            }
            Tok::Ident(x) => {
                let span = self.bump().1;
                if self.scope.contains(&x) {
                    Ok(Capability::Var(x))
                } else {
                    Err(ParseError {
                        span,
                        message: format!("unbound capability variable `{x}`"),
                        expected: Vec::new(),
                    })
                }
            }
            _ => Err(self.error_here(&["`{`", "`rec`", "variable"])),
        }
    }

    fn gamma(&mut self) -> Result<BasicCap, ParseError> {
        let (promoters, inhibitors) = if *self.peek() == Tok::LBracket {
            self.bump();
            self.expect(Tok::Plus)?;
            let promoters = self.namelist()?;
            self.expect(Tok::Semi)?;
            self.expect(Tok::Minus)?;
            let inhibitors = self.namelist()?;
            self.expect(Tok::RBracket)?;
            (promoters, inhibitors)
        } else {
            (NameSet::new(), NameSet::new())
        };
        let op = self.op()?;
        Ok(BasicCap::with_contingencies(op, promoters, inhibitors))
    }

    fn namelist(&mut self) -> Result<NameSet, ParseError> {
        let mut out = NameSet::new();
        if matches!(self.peek(), Tok::Semi | Tok::RBracket) {
            return Ok(out);
        }
        out.insert(self.name()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.insert(self.name()?);
        }
        Ok(out)
    }

    fn op(&mut self) -> Result<CapOp, ParseError> {
        const OPS: [&str; 6] = ["`bind`", "`cbind`", "`mod`", "`cleave`", "`conv`", "`prod`"];
        let kw = match self.peek() {
            Tok::Ident(kw) => kw.clone(),
            _ => return Err(self.error_here(&OPS)),
        };
        let op = match kw.as_str() {
            "bind" | "cbind" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let partner = self.name()?;
                self.expect(Tok::RParen)?;
                let cont = self.caps()?;
                if kw == "bind" {
                    CapOp::NonCovBind { partner, cont }
                } else {
                    CapOp::CovBind { partner, cont }
                }
            }
            "mod" => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.expect(Tok::Quote)?;
                let (modtype, _) = self.ident()?;
                self.expect(Tok::RParen)?;
                let cont = self.caps()?;
                CapOp::CovMod { modtype, cont }
            }
            "cleave" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let start = self.span().start;
                let target = self.name()?;
                let end = self.toks[self.pos - 1].1.end;
                if !target.is_cleavable() {
                    return Err(ParseError {
                        span: SourceSpan { start, end },
                        message: "cleave target must be a covalent bond or modification".into(),
                        expected: vec!["`[N N]`".into(), "`['q N]`".into()],
                    });
                }
                self.expect(Tok::RParen)?;
                CapOp::Cleave { target }
            }
            "conv" | "prod" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let p = self.process()?;
                self.expect(Tok::RParen)?;
                if kw == "conv" {
                    CapOp::Convert(p)
                } else {
                    CapOp::Produce(p)
                }
            }
            _ => return Err(self.error_here(&OPS)),
        };
        Ok(op)
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let mut acc = self.name_atom()?;
        while *self.peek() == Tok::Colon {
            self.bump();
            let rhs = self.name_atom()?;
            acc = Name::non_covalent(acc, rhs);
        }
        Ok(acc)
    }

    fn name_atom(&mut self) -> Result<Name, ParseError> {
        match self.peek().clone() {
            Tok::Ident(a) => {
                self.bump();
                Ok(Name::elementary(a))
            }
            Tok::LParen => {
                self.bump();
                let n = self.name()?;
                self.expect(Tok::RParen)?;
                Ok(n)
            }
            Tok::LBracket => {
                self.bump();
                let n = if *self.peek() == Tok::Quote {
                    self.bump();
                    let (q, _) = self.ident()?;
                    Name::covalent_mod(q, self.name()?)
                } else {
                    let a = self.name_atom()?;
                    let b = self.name_atom()?;
                    Name::covalent_bond(a, b)
                };
                self.expect(Tok::RBracket)?;
                Ok(n)
            }
            _ => Err(self.error_here(&["identifier", "`(`", "`[`"])),
        }
    }

    fn action(&mut self) -> Result<Action, ParseError> {
        let (kw, kw_span) = self.ident()?;
        self.expect(Tok::LParen)?;
        let action = match kw.as_str() {
            "ncb" | "ncu" | "cb" => {
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                let b = self.name()?;
                match kw.as_str() {
                    "ncb" => Action::nc_bond(a, b),
                    "ncu" => Action::nc_unbond(a, b),
                    _ => Action::cov_bond(a, b),
                }
            }
            "conv" | "prod" => {
                let n = self.name()?;
                self.expect(Tok::Comma)?;
                self.expect(Tok::LBrace)?;
                let mut set = NameSet::new();
                if *self.peek() != Tok::RBrace {
                    set.insert(self.name()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        set.insert(self.name()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                if kw == "conv" {
                    Action::Conversion(n, set)
                } else {
                    Action::Production(n, set)
                }
            }
            "mod" => {
                self.expect(Tok::Quote)?;
                let (q, _) = self.ident()?;
                self.expect(Tok::Comma)?;
                Action::Modification(q, self.name()?)
            }
            "clvb" | "clvm" => {
                let n = self.name()?;
                self.expect(Tok::Comma)?;
                let start = self.span().start;
                let bond = self.name()?;
                let ok = matches!(
                    (kw.as_str(), bond.inner()),
                    ("clvb", Inner::CovalentBond(..)) | ("clvm", Inner::CovalentMod(..))
                );
                if !ok {
                    return Err(ParseError {
                        span: SourceSpan {
                            start,
                            end: self.toks[self.pos - 1].1.end,
                        },
                        message: format!("`{kw}` needs a matching covalent compound"),
                        expected: Vec::new(),
                    });
                }
                if kw == "clvb" {
                    Action::CleaveBond(n, bond)
                } else {
                    Action::CleaveMod(n, bond)
                }
            }
            _ => {
                return Err(ParseError {
                    span: kw_span,
                    message: format!("unknown action `{kw}`"),
                    expected: ["ncb", "ncu", "conv", "prod", "cb", "clvb", "mod", "clvm"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                })
            }
        };
        self.expect(Tok::RParen)?;
        Ok(action)
    }
}

/// `rec x1. ... rec xn. y` with `y` among the `xi` has no denotation.
fn contractive(c: &Capability) -> bool {
    let mut chain = Vec::new();
    let mut head = c;
    while let Capability::Rec(x, b) = head {
        chain.push(x);
        head = b;
    }
    !matches!(head, Capability::Var(y) if chain.contains(&y))
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.molecules().iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.caps, self.body)
    }
}

impl fmt::Display for Inner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inner::Elementary(a) => f.write_str(a),
            Inner::NonCovalent(a, b) => write!(f, "({a}:{b})"),
            Inner::CovalentMod(q, s) => write!(f, "['{q} {s}]"),
            Inner::CovalentBond(a, b) => write!(f, "[{a} {b}]"),
        }
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capability::Var(x) => f.write_str(x),
            Capability::Rec(x, b) => write!(f, "rec {x}.{b}"),
            Capability::Sum(s) => {
                f.write_str("{")?;
                for (i, g) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Display for BasicCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.promoters.is_empty() || !self.inhibitors.is_empty() {
            write!(
                f,
                "[+{};-{}]",
                join(&self.promoters, ","),
                join(&self.inhibitors, ",")
            )?;
        }
        match &self.op {
            CapOp::NonCovBind { partner, cont } => write!(f, "bind({partner}){cont}"),
            CapOp::CovBind { partner, cont } => write!(f, "cbind({partner}){cont}"),
            CapOp::CovMod { modtype, cont } => write!(f, "mod('{modtype}){cont}"),
            CapOp::Cleave { target } => write!(f, "cleave({target})"),
            CapOp::Convert(p) => write!(f, "conv({p})"),
            CapOp::Produce(p) => write!(f, "prod({p})"),
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner() {
            Inner::Elementary(a) => f.write_str(a),
            Inner::NonCovalent(a, b) => write!(f, "({}:{})", a.name(), b.name()),
            Inner::CovalentMod(q, s) => write!(f, "['{q} {}]", s.name()),
            Inner::CovalentBond(a, b) => write!(f, "[{} {}]", a.name(), b.name()),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::NcBond(a, b) => write!(f, "ncb({a},{b})"),
            Action::NcUnbond(a, b) => write!(f, "ncu({a},{b})"),
            Action::Conversion(n, set) => write!(f, "conv({n},{{{}}})", join(set, ",")),
            Action::Production(n, set) => write!(f, "prod({n},{{{}}})", join(set, ",")),
            Action::CovBond(a, b) => write!(f, "cb({a},{b})"),
            Action::CleaveBond(n, bond) => write!(f, "clvb({n},{bond})"),
            Action::Modification(q, n) => write!(f, "mod('{q},{n})"),
            Action::CleaveMod(n, m) => write!(f, "clvm({n},{m})"),
        }
    }
}

fn join<'a, T: fmt::Display + 'a>(items: impl IntoIterator<Item = &'a T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}
