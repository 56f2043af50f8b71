//! Reads traversal text in either dialect back into the IR.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{IdLit, Predicate, Start, Step, Traversal};
use crate::synth::CompareOp;
use crate::value::{OrderDirection, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("traversal parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    Float(f64),
    Punct(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |message: &str, offset| ParseError { message: message.to_string(), offset };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'\\' if matches!(bytes.get(i + 1), Some(b'\n' | b'\r')) => i += 1,
            b'.' | b',' | b'(' | b')' => {
                out.push((Tok::Punct(c as char), start));
                i += 1;
            }
            b'\'' | b'"' => {
                let quote = c;
                i += 1;
                let mut s = String::new();
                loop {
                    let Some(ch) = src[i..].chars().next() else {
                        return Err(err("unterminated string", start));
                    };
                    i += ch.len_utf8();
                    match ch {
                        '\\' => {
                            let Some(e) = src[i..].chars().next() else {
                                return Err(err("unterminated string", start));
                            };
                            i += e.len_utf8();
                            s.push(match e {
                                'n' => '\n',
                                'r' => '\r',
                                't' => '\t',
                                other => other,
                            });
                        }
                        ch if ch as u32 == quote as u32 => break,
                        ch => s.push(ch),
                    }
                }
                out.push((Tok::Str(s), start));
            }
            b'-' | b'0'..=b'9' => {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || matches!(bytes[i], b'.' | b'e' | b'E' | b'+' | b'-')) {
                    // a '.' followed by a letter is a step call, not a fraction
                    if bytes[i] == b'.' && !bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                        break;
                    }
                    if matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                        break;
                    }
                    i += 1;
                }
                let text = &src[start..i];
                let is_float = text.contains(['.', 'e', 'E']);
                let suffix = bytes.get(i).copied();
                let tok = match suffix {
                    Some(b'd' | b'D' | b'f' | b'F') => {
                        i += 1;
                        Tok::Float(text.parse().map_err(|_| err("bad number", start))?)
                    }
                    Some(b'L' | b'l') if !is_float => {
                        i += 1;
                        Tok::Int(text.parse().map_err(|_| err("bad number", start))?)
                    }
                    _ if is_float => Tok::Float(text.parse().map_err(|_| err("bad number", start))?),
                    _ => Tok::Int(text.parse().map_err(|_| err("bad number", start))?),
                };
                out.push((tok, start));
            }
            c if c == b'_' || c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i] == b'_' || bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].into()), start));
            }
            _ => return Err(err("unexpected character", start)),
        }
    }
    Ok(out)
}

/// Raw argument before steps are assembled.
#[derive(Debug, Clone)]
enum Arg {
    Scalar(Scalar),
    Pred(Predicate),
    Order(OrderDirection),
    Trav(Traversal),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    len: usize,
}

/// Parses a traversal written in either the Python or the Groovy dialect.
pub fn parse_traversal(src: &str) -> Result<Traversal, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, len: src.len() };
    let t = p.traversal()?;
    if p.at != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

fn is_step_name(s: &str) -> bool {
    step_kind(s).is_some()
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    V,
    E,
    AddV,
    AddE,
    To,
    HasLabel,
    Has,
    Where,
    And,
    Or,
    OutE,
    InE,
    InV,
    OutV,
    Values,
    Id,
    Label,
    Constant,
    Coalesce,
    Project,
    Order,
    By,
    Skip,
    Limit,
    Fold,
    Property,
    Drop,
    ToList,
    Next,
    Iterate,
}

fn step_kind(name: &str) -> Option<Kind> {
    Some(match name {
        "V" => Kind::V,
        "E" => Kind::E,
        "add_v" | "addV" => Kind::AddV,
        "add_e" | "addE" => Kind::AddE,
        "to" => Kind::To,
        "has_label" | "hasLabel" => Kind::HasLabel,
        "has" => Kind::Has,
        "where" => Kind::Where,
        "and_" | "and" => Kind::And,
        "or_" | "or" => Kind::Or,
        "out_e" | "outE" => Kind::OutE,
        "in_e" | "inE" => Kind::InE,
        "in_v" | "inV" => Kind::InV,
        "out_v" | "outV" => Kind::OutV,
        "values" => Kind::Values,
        "id_" | "id" => Kind::Id,
        "label" => Kind::Label,
        "constant" => Kind::Constant,
        "coalesce" => Kind::Coalesce,
        "project" => Kind::Project,
        "order" => Kind::Order,
        "by" => Kind::By,
        "skip" => Kind::Skip,
        "limit" => Kind::Limit,
        "fold" => Kind::Fold,
        "property" => Kind::Property,
        "drop" => Kind::Drop,
        "to_list" | "toList" => Kind::ToList,
        "next" => Kind::Next,
        "iterate" => Kind::Iterate,
        _ => return None,
    })
}

impl Parser {
    fn err(&self, message: impl Into<String>) -> ParseError {
        let offset = self.toks.get(self.at).map_or(self.len, |t| t.1);
        ParseError { message: message.into(), offset }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.at + k).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn traversal(&mut self) -> Result<Traversal, ParseError> {
        let start = match self.peek() {
            Some(Tok::Ident(s)) if s == "g" => {
                self.at += 1;
                self.expect('.')?;
                Start::Graph
            }
            Some(Tok::Ident(s)) if s == "__" => {
                self.at += 1;
                self.expect('.')?;
                Start::Anonymous
            }
            Some(Tok::Ident(s)) if is_step_name(s) => Start::Anonymous,
            _ => return Err(self.err("expected a traversal")),
        };
        let mut raw: Vec<(Kind, Vec<Arg>, usize)> = Vec::new();
        loop {
            let offset = self.toks.get(self.at).map_or(self.len, |t| t.1);
            let name = self.ident()?;
            let kind = step_kind(&name).ok_or_else(|| ParseError { message: format!("unknown step {name}"), offset })?;
            self.expect('(')?;
            let mut args = Vec::new();
            if !self.eat(')') {
                loop {
                    args.push(self.arg()?);
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            raw.push((kind, args, offset));
            if !self.eat('.') {
                break;
            }
        }
        assemble(start, raw)
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("expected an argument"))?;
        match tok {
            Tok::Str(s) => {
                self.at += 1;
                Ok(Arg::Scalar(Scalar::String(s)))
            }
            Tok::Int(n) => {
                self.at += 1;
                Ok(Arg::Scalar(Scalar::Int(n)))
            }
            Tok::Float(f) => {
                self.at += 1;
                Ok(Arg::Scalar(Scalar::Float(f)))
            }
            Tok::Ident(name) => {
                let lit = match name.as_str() {
                    "None" | "null" => Some(Scalar::Null),
                    "True" | "true" => Some(Scalar::Bool(true)),
                    "False" | "false" => Some(Scalar::Bool(false)),
                    _ => None,
                };
                if let Some(v) = lit {
                    self.at += 1;
                    return Ok(Arg::Scalar(v));
                }
                if name == "P" || name == "Order" {
                    self.at += 1;
                    self.expect('.')?;
                    return self.qualified(&name);
                }
                if matches!(name.as_str(), "asc" | "desc") && self.peek_at(1) != Some(&Tok::Punct('(')) {
                    self.at += 1;
                    return Ok(Arg::Order(if name == "asc" { OrderDirection::Asc } else { OrderDirection::Desc }));
                }
                if let Some(op) = predicate_op(&name) {
                    if self.peek_at(1) == Some(&Tok::Punct('(')) {
                        self.at += 1;
                        return self.predicate_call(op);
                    }
                }
                self.traversal().map(Arg::Trav)
            }
            Tok::Punct(_) => Err(self.err("expected an argument")),
        }
    }

    fn qualified(&mut self, class: &str) -> Result<Arg, ParseError> {
        let name = self.ident()?;
        if class == "Order" {
            return match name.as_str() {
                "asc" => Ok(Arg::Order(OrderDirection::Asc)),
                "desc" => Ok(Arg::Order(OrderDirection::Desc)),
                _ => Err(self.err(format!("unknown order Order.{name}"))),
            };
        }
        let op = predicate_op(&name).ok_or_else(|| self.err(format!("unknown predicate P.{name}")))?;
        self.predicate_call(op)
    }

    fn predicate_call(&mut self, op: CompareOp) -> Result<Arg, ParseError> {
        self.expect('(')?;
        let value = match self.arg()? {
            Arg::Scalar(v) => v,
            _ => return Err(self.err("predicate operand must be a literal")),
        };
        self.expect(')')?;
        Ok(Arg::Pred(Predicate { op, value }))
    }
}

fn predicate_op(name: &str) -> Option<CompareOp> {
    CompareOp::ALL.into_iter().find(|op| super::text::predicate_name(*op) == name)
}

fn assemble(start: Start, raw: Vec<(Kind, Vec<Arg>, usize)>) -> Result<Traversal, ParseError> {
    let mut t = Traversal { start, steps: Vec::new() };
    let mut it = raw.into_iter().peekable();
    while let Some((kind, args, offset)) = it.next() {
        let bad = |what: &str| ParseError { message: format!("bad arguments to {what}"), offset };
        let mut args = args.into_iter();
        let string = |args: &mut alloc::vec::IntoIter<Arg>, what: &str| match args.next() {
            Some(Arg::Scalar(Scalar::String(s))) => Ok(s),
            _ => Err(bad(what)),
        };
        let step = match kind {
            Kind::V | Kind::E => {
                let id = match args.next() {
                    None => None,
                    Some(Arg::Scalar(Scalar::Int(n))) if n >= 0 => Some(IdLit::Int(n as u64)),
                    Some(Arg::Scalar(Scalar::String(s))) => Some(IdLit::Str(s)),
                    _ => return Err(bad("V/E")),
                };
                if kind == Kind::V {
                    Step::V(id)
                } else {
                    Step::E(id)
                }
            }
            Kind::AddV => Step::AddV(string(&mut args, "add_v")?),
            Kind::AddE => Step::AddE(string(&mut args, "add_e")?),
            Kind::HasLabel => Step::HasLabel(string(&mut args, "has_label")?),
            Kind::OutE => Step::OutE(string(&mut args, "out_e")?),
            Kind::InE => Step::InE(string(&mut args, "in_e")?),
            Kind::Values => Step::Values(string(&mut args, "values")?),
            Kind::Has => {
                let key = string(&mut args, "has")?;
                match args.next() {
                    Some(Arg::Pred(p)) => Step::Has(key, p),
                    Some(Arg::Scalar(v)) => Step::Has(key, Predicate { op: CompareOp::Eq, value: v }),
                    _ => return Err(bad("has")),
                }
            }
            Kind::Property => {
                let key = string(&mut args, "property")?;
                match args.next() {
                    Some(Arg::Scalar(v)) => Step::Property(key, v),
                    _ => return Err(bad("property")),
                }
            }
            Kind::Constant => match args.next() {
                Some(Arg::Scalar(v)) => Step::Constant(v),
                _ => return Err(bad("constant")),
            },
            Kind::Skip | Kind::Limit => match args.next() {
                Some(Arg::Scalar(Scalar::Int(n))) if n >= 0 => {
                    if kind == Kind::Skip {
                        Step::Skip(n as u64)
                    } else {
                        Step::Limit(n as u64)
                    }
                }
                _ => return Err(bad("skip/limit")),
            },
            Kind::To | Kind::Where => match args.next() {
                Some(Arg::Trav(x)) => {
                    if kind == Kind::To {
                        Step::To(x)
                    } else {
                        Step::Where(x)
                    }
                }
                _ => return Err(bad("to/where")),
            },
            Kind::And | Kind::Or | Kind::Coalesce => {
                let mut ts = Vec::new();
                for a in args.by_ref() {
                    match a {
                        Arg::Trav(x) => ts.push(x),
                        _ => return Err(bad("and/or/coalesce")),
                    }
                }
                match kind {
                    Kind::And => Step::And(ts),
                    Kind::Or => Step::Or(ts),
                    _ => Step::Coalesce(ts),
                }
            }
            Kind::Project => {
                let mut keys = Vec::new();
                for a in args.by_ref() {
                    match a {
                        Arg::Scalar(Scalar::String(s)) => keys.push(s),
                        _ => return Err(bad("project")),
                    }
                }
                let mut entries = Vec::new();
                for k in keys {
                    match it.next() {
                        Some((Kind::By, by, _)) => match <[Arg; 1]>::try_from(by) {
                            Ok([Arg::Trav(x)]) => entries.push((k, x)),
                            _ => return Err(bad("by")),
                        },
                        _ => return Err(ParseError { message: format!("project key {k:?} has no by()"), offset }),
                    }
                }
                Step::Project(entries)
            }
            Kind::Order => {
                let mut terms = Vec::new();
                while matches!(it.peek(), Some((Kind::By, ..))) {
                    let (_, by, _) = it.next().expect("peeked");
                    match <[Arg; 2]>::try_from(by) {
                        Ok([Arg::Trav(x), Arg::Order(d)]) => terms.push((x, d)),
                        _ => return Err(bad("by")),
                    }
                }
                Step::OrderBy(terms)
            }
            Kind::By => return Err(ParseError { message: "by() without project() or order()".into(), offset }),
            Kind::InV => Step::InV,
            Kind::OutV => Step::OutV,
            Kind::Id => Step::Id,
            Kind::Label => Step::Label,
            Kind::Fold => Step::Fold,
            Kind::Drop => Step::Drop,
            Kind::ToList => Step::ToList,
            Kind::Next => Step::Next,
            Kind::Iterate => Step::Iterate,
        };
        if args.next().is_some() {
            return Err(bad("step"));
        }
        t.steps.push(step);
    }
    Ok(t)
}
