use alloc::string::String;
use core::fmt::Write;

use super::{FieldDef, GraphQLSchemaDoc, InputValueDef, ObjectType, TypeDef};

/// Fields with more arguments than this are printed one argument per line.
const INLINE_ARGS: usize = 2;

/// Note placed at the top of the SDL of a schema without vertices.
pub const EMPTY_SCHEMA_NOTE: &str = "# The graph schema has no vertices: no Query or Mutation root is generated.";

/// Renders the canonical SDL text. Output depends only on the type list, so
/// repeated calls produce identical bytes.
pub fn emit_sdl(doc: &GraphQLSchemaDoc) -> String {
    let mut out = String::new();
    if doc.graph_schema().vertices().is_empty() {
        out.push_str(EMPTY_SCHEMA_NOTE);
        out.push_str("\n\n");
    }
    for (i, t) in doc.types().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match t {
            TypeDef::Object(o) => object(&mut out, "type", o),
            TypeDef::Interface(o) => object(&mut out, "interface", o),
            TypeDef::Input(input) => {
                let _ = writeln!(out, "input {} {{", input.name);
                for f in &input.fields {
                    let _ = writeln!(out, "  {}: {}", f.name, f.ty);
                }
                out.push_str("}\n");
            }
            TypeDef::Enum(e) => {
                let _ = writeln!(out, "enum {} {{", e.name);
                for v in &e.values {
                    let _ = writeln!(out, "  {v}");
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

fn object(out: &mut String, keyword: &str, o: &ObjectType) {
    let _ = write!(out, "{keyword} {}", o.name);
    if !o.implements.is_empty() {
        let _ = write!(out, " implements {}", o.implements.join(" & "));
    }
    out.push_str(" {\n");
    for f in &o.fields {
        field(out, f);
    }
    out.push_str("}\n");
}

fn field(out: &mut String, f: &FieldDef) {
    let _ = write!(out, "  {}", f.name);
    if f.args.len() > INLINE_ARGS {
        out.push_str("(\n");
        for a in &f.args {
            let _ = writeln!(out, "    {}: {}", a.name, a.ty);
        }
        out.push_str("  )");
    } else if !f.args.is_empty() {
        out.push('(');
        out.push_str(&inline(&f.args));
        out.push(')');
    }
    let _ = writeln!(out, ": {}", f.ty);
}

fn inline(args: &[InputValueDef]) -> String {
    let mut s = String::new();
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}: {}", a.name, a.ty);
    }
    s
}
