use alloc::string::String;
use alloc::vec::Vec;

use super::ast::Pos;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Punct(char),
    Spread,
    Name(String),
    Int(i64),
    Float(f64),
    Str(String),
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer { chars: src.chars().collect(), i: 0, line: 1, col: 1 }.run()
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.i + n).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' || (c == '\r' && self.peek() != Some('\n')) {
            self.line += 1;
            self.col = 1;
        } else if c != '\r' {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.col }
    }

    fn err(&self, pos: Pos, message: impl Into<String>) -> SyntaxError {
        SyntaxError { message: message.into(), pos }
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            self.skip_ignored();
            let pos = self.pos();
            let Some(c) = self.peek() else {
                out.push(Token { tok: Tok::Eof, pos });
                return Ok(out);
            };
            let tok = match c {
                '!' | '$' | '&' | '(' | ')' | ':' | '=' | '@' | '[' | ']' | '{' | '|' | '}' => {
                    self.bump();
                    Tok::Punct(c)
                }
                '.' => {
                    if self.peek_at(1) == Some('.') && self.peek_at(2) == Some('.') {
                        self.bump();
                        self.bump();
                        self.bump();
                        Tok::Spread
                    } else {
                        return Err(self.err(pos, "unexpected '.'; did you mean '...'?"));
                    }
                }
                '"' => self.string(pos)?,
                '-' | '0'..='9' => self.number(pos)?,
                c if c == '_' || c.is_ascii_alphabetic() => {
                    let mut name = String::new();
                    while let Some(c) = self.peek() {
                        if c == '_' || c.is_ascii_alphanumeric() {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Name(name)
                }
                other => return Err(self.err(pos, alloc::format!("unexpected character {other:?}"))),
            };
            out.push(Token { tok, pos });
        }
    }

    fn skip_ignored(&mut self) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\n' | '\r' | ',' | '\u{feff}' => {
                    self.bump();
                }
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' || c == '\r' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, pos: Pos) -> Result<Tok, SyntaxError> {
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.bump();
        }
        let digits_start = text.len();
        while let Some(c @ '0'..='9') = self.peek() {
            text.push(c);
            self.bump();
        }
        let int_part = &text[digits_start..];
        if int_part.is_empty() {
            return Err(self.err(pos, "expected digit after '-'"));
        }
        if int_part.len() > 1 && int_part.starts_with('0') {
            return Err(self.err(pos, "invalid number: leading zero"));
        }
        let mut is_float = false;
        if self.peek() == Some('.') {
            is_float = true;
            text.push('.');
            self.bump();
            if !matches!(self.peek(), Some('0'..='9')) {
                return Err(self.err(self.pos(), "expected digit after '.'"));
            }
            while let Some(c @ '0'..='9') = self.peek() {
                text.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            is_float = true;
            text.push('e');
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                text.push(c);
                self.bump();
            }
            if !matches!(self.peek(), Some('0'..='9')) {
                return Err(self.err(self.pos(), "expected digit in exponent"));
            }
            while let Some(c @ '0'..='9') = self.peek() {
                text.push(c);
                self.bump();
            }
        }
        if let Some(c) = self.peek() {
            if c == '.' || c == '_' || c.is_ascii_alphabetic() {
                return Err(self.err(self.pos(), alloc::format!("invalid number: unexpected {c:?}")));
            }
        }
        if is_float {
            text.parse::<f64>().map(Tok::Float).map_err(|_| self.err(pos, "invalid float literal"))
        } else {
            text.parse::<i64>().map(Tok::Int).map_err(|_| self.err(pos, "integer literal out of range"))
        }
    }

    fn string(&mut self, pos: Pos) -> Result<Tok, SyntaxError> {
        if self.peek_at(1) == Some('"') && self.peek_at(2) == Some('"') {
            return self.block_string(pos);
        }
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') | Some('\r') => return Err(self.err(pos, "unterminated string")),
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => {
                    let esc_pos = self.pos();
                    match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('/') => s.push('/'),
                        Some('b') => s.push('\u{8}'),
                        Some('f') => s.push('\u{c}'),
                        Some('n') => s.push('\n'),
                        Some('r') => s.push('\r'),
                        Some('t') => s.push('\t'),
                        Some('u') => {
                            let mut code = 0u32;
                            for _ in 0..4 {
                                let d = self.bump().and_then(|c| c.to_digit(16)).ok_or_else(|| self.err(esc_pos, "invalid unicode escape"))?;
                                code = code * 16 + d;
                            }
                            s.push(char::from_u32(code).ok_or_else(|| self.err(esc_pos, "invalid unicode escape"))?);
                        }
                        _ => return Err(self.err(esc_pos, "invalid escape sequence")),
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn block_string(&mut self, pos: Pos) -> Result<Tok, SyntaxError> {
        for _ in 0..3 {
            self.bump();
        }
        let mut raw = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err(pos, "unterminated block string")),
                Some('"') if self.peek_at(1) == Some('"') && self.peek_at(2) == Some('"') => {
                    for _ in 0..3 {
                        self.bump();
                    }
                    return Ok(Tok::Str(block_value(&raw)));
                }
                Some('\\') if self.peek_at(1) == Some('"') && self.peek_at(2) == Some('"') && self.peek_at(3) == Some('"') => {
                    self.bump();
                    for _ in 0..3 {
                        self.bump();
                    }
                    raw.push_str("\"\"\"");
                }
                Some(c) => {
                    raw.push(c);
                    self.bump();
                }
            }
        }
    }
}

/// Common-indent removal and blank-line trimming for block strings.
fn block_value(raw: &str) -> String {
    let lines: Vec<&str> = raw.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    let indent = lines
        .iter()
        .skip(1)
        .filter(|l| l.chars().any(|c| c != ' ' && c != '\t'))
        .map(|l| l.chars().take_while(|&c| c == ' ' || c == '\t').count())
        .min()
        .unwrap_or(0);
    let mut out: Vec<String> = lines.iter().enumerate().map(|(i, l)| if i == 0 { String::from(*l) } else { l.chars().skip(indent).collect() }).collect();
    while out.first().is_some_and(|l| l.trim().is_empty()) {
        out.remove(0);
    }
    while out.last().is_some_and(|l| l.trim().is_empty()) {
        out.pop();
    }
    out.join("\n")
}
