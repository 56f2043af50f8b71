use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;
use crate::synth::TypeRef;

/// Parses an executable document (operations and fragments).
pub fn parse_executable(src: &str) -> Result<Document, SyntaxError> {
    let mut p = Parser::new(src)?;
    let mut doc = Document::default();
    if p.at_eof() {
        return Err(p.err_here("document contains no operations"));
    }
    while !p.at_eof() {
        let pos = p.pos();
        match p.peek().clone() {
            Tok::Punct('{') => {
                let selection_set = p.selection_set()?;
                doc.operations.push(OperationDefinition {
                    kind: OperationKind::Query,
                    name: None,
                    variables: Vec::new(),
                    directives: Vec::new(),
                    selection_set,
                    pos,
                });
            }
            Tok::Name(n) if n == "query" || n == "mutation" || n == "subscription" => {
                p.advance();
                let kind = match n.as_str() {
                    "query" => OperationKind::Query,
                    "mutation" => OperationKind::Mutation,
                    _ => OperationKind::Subscription,
                };
                let name = if matches!(p.peek(), Tok::Name(_)) { Some(p.name()?) } else { None };
                let variables = if p.eat('(') { p.variable_definitions()? } else { Vec::new() };
                let directives = p.directives(false)?;
                let selection_set = p.selection_set()?;
                doc.operations.push(OperationDefinition { kind, name, variables, directives, selection_set, pos });
            }
            Tok::Name(n) if n == "fragment" => {
                p.advance();
                let name = p.name()?;
                if name == "on" {
                    return Err(SyntaxError { message: "fragment cannot be named 'on'".into(), pos });
                }
                p.keyword("on")?;
                let type_condition = p.name()?;
                let directives = p.directives(false)?;
                let selection_set = p.selection_set()?;
                doc.fragments.push(FragmentDefinition { name, type_condition, directives, selection_set, pos });
            }
            Tok::Name(n) => {
                return Err(SyntaxError { message: format!("unexpected {n:?}: executable documents contain only operations and fragments"), pos });
            }
            _ => return Err(p.unexpected()),
        }
    }
    Ok(doc)
}

/// Parses a type system document (SDL).
pub fn parse_sdl(src: &str) -> Result<SdlDocument, SyntaxError> {
    let mut p = Parser::new(src)?;
    let mut doc = SdlDocument::default();
    while !p.at_eof() {
        if matches!(p.peek(), Tok::Str(_)) {
            p.advance();
        }
        let pos = p.pos();
        let kw = p.name()?;
        match kw.as_str() {
            "schema" => {
                p.directives(true)?;
                p.expect('{')?;
                while !p.eat('}') {
                    let op = match p.name()?.as_str() {
                        "query" => OperationKind::Query,
                        "mutation" => OperationKind::Mutation,
                        "subscription" => OperationKind::Subscription,
                        other => return Err(SyntaxError { message: format!("unknown operation type {other:?}"), pos }),
                    };
                    p.expect(':')?;
                    doc.schema_ops.push((op, p.name()?));
                }
            }
            "scalar" => {
                let name = p.name()?;
                p.directives(true)?;
                doc.types.push(SdlType::empty(TypeKind::Scalar, name, pos));
            }
            "type" | "interface" => {
                let kind = if kw == "type" { TypeKind::Object } else { TypeKind::Interface };
                let mut t = SdlType::empty(kind, p.name()?, pos);
                if p.peek_name("implements") {
                    p.advance();
                    p.eat('&');
                    t.implements.push(p.name()?);
                    while p.eat('&') {
                        t.implements.push(p.name()?);
                    }
                }
                p.directives(true)?;
                if p.eat('{') {
                    while !p.eat('}') {
                        t.fields.push(p.sdl_field()?);
                    }
                }
                doc.types.push(t);
            }
            "input" => {
                let mut t = SdlType::empty(TypeKind::Input, p.name()?, pos);
                p.directives(true)?;
                if p.eat('{') {
                    while !p.eat('}') {
                        t.input_fields.push(p.input_value()?);
                    }
                }
                doc.types.push(t);
            }
            "enum" => {
                let mut t = SdlType::empty(TypeKind::Enum, p.name()?, pos);
                p.directives(true)?;
                if p.eat('{') {
                    while !p.eat('}') {
                        if matches!(p.peek(), Tok::Str(_)) {
                            p.advance();
                        }
                        t.values.push(p.name()?);
                        p.directives(true)?;
                    }
                }
                doc.types.push(t);
            }
            "union" => {
                let mut t = SdlType::empty(TypeKind::Union, p.name()?, pos);
                p.directives(true)?;
                if p.eat('=') {
                    p.eat('|');
                    t.values.push(p.name()?);
                    while p.eat('|') {
                        t.values.push(p.name()?);
                    }
                }
                doc.types.push(t);
            }
            other => return Err(SyntaxError { message: format!("unexpected {other:?} in schema document"), pos }),
        }
    }
    Ok(doc)
}

impl SdlType {
    fn empty(kind: TypeKind, name: String, pos: Pos) -> Self {
        SdlType { kind, name, implements: Vec::new(), fields: Vec::new(), input_fields: Vec::new(), values: Vec::new(), pos }
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Parser { toks: tokenize(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn advance(&mut self) {
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
    }

    fn err_here(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { message: message.into(), pos: self.pos() }
    }

    fn unexpected(&self) -> SyntaxError {
        let what = match self.peek() {
            Tok::Punct(c) => format!("'{c}'"),
            Tok::Spread => "'...'".to_string(),
            Tok::Name(n) => format!("name {n:?}"),
            Tok::Int(i) => format!("number {i}"),
            Tok::Float(x) => format!("number {x}"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Eof => "end of document".to_string(),
        };
        self.err_here(format!("unexpected {what}"))
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            let mut e = self.unexpected();
            e.message = format!("expected '{c}', found {}", e.message.trim_start_matches("unexpected "));
            Err(e)
        }
    }

    fn peek_name(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == kw)
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.advance();
                Ok(n)
            }
            _ => {
                let mut e = self.unexpected();
                e.message = format!("expected a name, found {}", e.message.trim_start_matches("unexpected "));
                Err(e)
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.peek_name(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.err_here(format!("expected '{kw}'")))
        }
    }

    fn selection_set(&mut self) -> Result<Vec<Selection>, SyntaxError> {
        self.expect('{')?;
        if *self.peek() == Tok::Punct('}') {
            return Err(self.err_here("selection set must not be empty"));
        }
        let mut out = Vec::new();
        while !self.eat('}') {
            out.push(self.selection()?);
        }
        Ok(out)
    }

    fn selection(&mut self) -> Result<Selection, SyntaxError> {
        let pos = self.pos();
        if *self.peek() == Tok::Spread {
            self.advance();
            if self.peek_name("on") {
                self.advance();
                let tc = self.name()?;
                let directives = self.directives(false)?;
                let selection_set = self.selection_set()?;
                return Ok(Selection::InlineFragment { type_condition: Some(tc), directives, selection_set, pos });
            }
            if let Tok::Name(_) = self.peek() {
                let name = self.name()?;
                let directives = self.directives(false)?;
                return Ok(Selection::FragmentSpread { name, directives, pos });
            }
            let directives = self.directives(false)?;
            let selection_set = self.selection_set()?;
            return Ok(Selection::InlineFragment { type_condition: None, directives, selection_set, pos });
        }
        let first = self.name()?;
        let (alias, name) = if self.eat(':') { (Some(first), self.name()?) } else { (None, first) };
        let arguments = if self.eat('(') { self.arguments(false)? } else { Vec::new() };
        let directives = self.directives(false)?;
        let selection_set = if *self.peek() == Tok::Punct('{') { self.selection_set()? } else { Vec::new() };
        Ok(Selection::Field(Field { alias, name, arguments, directives, selection_set, pos }))
    }

    /// After the opening parenthesis.
    fn arguments(&mut self, constant: bool) -> Result<Vec<Argument>, SyntaxError> {
        if *self.peek() == Tok::Punct(')') {
            return Err(self.err_here("argument list must not be empty"));
        }
        let mut out = Vec::new();
        while !self.eat(')') {
            let pos = self.pos();
            let name = self.name()?;
            self.expect(':')?;
            let value = self.value(constant)?;
            out.push(Argument { name, value, pos });
        }
        Ok(out)
    }

    fn directives(&mut self, constant: bool) -> Result<Vec<Directive>, SyntaxError> {
        let mut out = Vec::new();
        while *self.peek() == Tok::Punct('@') {
            let pos = self.pos();
            self.advance();
            let name = self.name()?;
            let arguments = if self.eat('(') { self.arguments(constant)? } else { Vec::new() };
            out.push(Directive { name, arguments, pos });
        }
        Ok(out)
    }

    fn variable_definitions(&mut self) -> Result<Vec<VariableDefinition>, SyntaxError> {
        if *self.peek() == Tok::Punct(')') {
            return Err(self.err_here("variable definition list must not be empty"));
        }
        let mut out = Vec::new();
        while !self.eat(')') {
            let pos = self.pos();
            self.expect('$')?;
            let name = self.name()?;
            self.expect(':')?;
            let ty = self.type_ref()?;
            let default = if self.eat('=') { Some(self.value(true)?) } else { None };
            let directives = self.directives(true)?;
            out.push(VariableDefinition { name, ty, default, directives, pos });
        }
        Ok(out)
    }

    fn type_ref(&mut self) -> Result<TypeRef, SyntaxError> {
        let inner = if self.eat('[') {
            let t = self.type_ref()?;
            self.expect(']')?;
            t.list()
        } else {
            TypeRef::named(self.name()?)
        };
        Ok(if self.eat('!') { inner.non_null() } else { inner })
    }

    fn value(&mut self, constant: bool) -> Result<Value, SyntaxError> {
        let pos = self.pos();
        let v = match self.peek().clone() {
            Tok::Punct('$') => {
                if constant {
                    return Err(self.err_here("variables are not allowed in constant values"));
                }
                self.advance();
                return Ok(Value::Variable(self.name()?));
            }
            Tok::Punct('[') => {
                self.advance();
                let mut items = Vec::new();
                while !self.eat(']') {
                    items.push(self.value(constant)?);
                }
                return Ok(Value::List(items));
            }
            Tok::Punct('{') => {
                self.advance();
                let mut fields: Vec<(String, Value)> = Vec::new();
                while !self.eat('}') {
                    let fpos = self.pos();
                    let name = self.name()?;
                    if fields.iter().any(|(n, _)| *n == name) {
                        return Err(SyntaxError { message: format!("duplicate input field {name:?}"), pos: fpos });
                    }
                    self.expect(':')?;
                    fields.push((name, self.value(constant)?));
                }
                return Ok(Value::Object(fields));
            }
            Tok::Int(i) => Value::Int(i),
            Tok::Float(x) => Value::Float(x),
            Tok::Str(s) => Value::String(s),
            Tok::Name(n) => match n.as_str() {
                "true" => Value::Boolean(true),
                "false" => Value::Boolean(false),
                "null" => Value::Null,
                _ => Value::Enum(n),
            },
            _ => {
                let mut e = self.unexpected();
                e.message = format!("expected a value, found {}", e.message.trim_start_matches("unexpected "));
                e.pos = pos;
                return Err(e);
            }
        };
        self.advance();
        Ok(v)
    }

    fn sdl_field(&mut self) -> Result<SdlField, SyntaxError> {
        if matches!(self.peek(), Tok::Str(_)) {
            self.advance();
        }
        let pos = self.pos();
        let name = self.name()?;
        let mut args = Vec::new();
        if self.eat('(') {
            while !self.eat(')') {
                args.push(self.input_value()?);
            }
        }
        self.expect(':')?;
        let ty = self.type_ref()?;
        self.directives(true)?;
        Ok(SdlField { name, args, ty, pos })
    }

    fn input_value(&mut self) -> Result<SdlInputValue, SyntaxError> {
        if matches!(self.peek(), Tok::Str(_)) {
            self.advance();
        }
        let pos = self.pos();
        let name = self.name()?;
        self.expect(':')?;
        let ty = self.type_ref()?;
        let default = if self.eat('=') { Some(self.value(true)?) } else { None };
        self.directives(true)?;
        Ok(SdlInputValue { name, ty, default, pos })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_fixture_queries() {
        for (name, text) in fixtures::MOVIELENS_QUERIES {
            let doc = parse_executable(text).unwrap();
            assert_eq!(doc.operations[0].name.as_deref(), Some(name));
        }
        let doc = parse_executable(fixtures::TODO_USER_LIKES).unwrap();
        let Selection::Field(root) = &doc.operations[0].selection_set[0] else { panic!() };
        assert_eq!(root.name, "userList");
        let Selection::Field(likes) = &root.selection_set[1] else { panic!() };
        assert_eq!(likes.name, "likesOut");
        let Selection::Field(user) = &likes.selection_set[1] else { panic!() };
        assert_eq!(user.name, "user");
    }

    #[test]
    fn empty_selection_is_error() {
        let e = parse_executable("query { }").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, column: 9 });
    }

    #[test]
    fn shorthand_aliases_fragments() {
        let doc = parse_executable("{ a: userList { ...F ... on UserVertex { id } } } fragment F on UserVertex { name }").unwrap();
        assert_eq!(doc.operations.len(), 1);
        assert_eq!(doc.fragments[0].type_condition, "UserVertex");
        let Selection::Field(f) = &doc.operations[0].selection_set[0] else { panic!() };
        assert_eq!(f.response_key(), "a");
        assert!(matches!(f.selection_set[0], Selection::FragmentSpread { .. }));
        assert!(matches!(f.selection_set[1], Selection::InlineFragment { .. }));
    }

    #[test]
    fn variables() {
        let doc = parse_executable("query Q($w: UserVertexLogicInput, $n: Int! = 3) { userList(where: $w) { id } }").unwrap();
        let vars = &doc.operations[0].variables;
        assert_eq!(vars[1].ty.to_string(), "Int!");
        assert_eq!(vars[1].default, Some(Value::Int(3)));
        assert!(parse_executable("query Q($n: Int = $m) { a }").is_err());
    }

    #[test]
    fn rejects_type_definitions() {
        assert!(parse_executable("type A { a: Int }").is_err());
        assert!(parse_executable("").is_err());
        assert!(parse_executable("{ a(x: {b: 1, b: 2}) }").is_err());
    }

    #[test]
    fn sdl_document() {
        let doc = parse_sdl(
            "# note\ntype Query {\n  user(id: ID!): UserVertex\n  userList(\n    where: W\n  ): [UserVertex!]!\n}\ninterface G { id: ID!  label: String! }\ntype UserVertex implements G { id: ID! label: String! }\ninput W { a_EQ: Int  OR: [W!] }\nenum E { ASC  DESC }",
        )
        .unwrap();
        assert_eq!(doc.types.len(), 5);
        let q = doc.get("Query").unwrap();
        assert_eq!(q.fields[1].ty.to_string(), "[UserVertex!]!");
        assert_eq!(doc.get("UserVertex").unwrap().implements, ["G"]);
        assert_eq!(doc.get("W").unwrap().input_fields[1].ty.to_string(), "[W!]");
        assert_eq!(doc.get("E").unwrap().values, ["ASC", "DESC"]);
    }
}
