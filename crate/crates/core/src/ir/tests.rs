use alloc::string::String;
use alloc::vec;

use super::*;

fn anon(steps: alloc::vec::Vec<Step>) -> Traversal {
    Traversal { start: Start::Anonymous, steps }
}

fn sample() -> Traversal {
    Traversal::g()
        .step(Step::V(None))
        .step(Step::HasLabel("User".into()))
        .step(Step::Has("age".into(), Predicate { op: CompareOp::Gt, value: Scalar::Int(18) }))
        .step(Step::OrderBy(vec![(anon(vec![Step::Values("name".into())]), OrderDirection::Desc)]))
        .step(Step::Project(vec![
            ("id".into(), anon(vec![Step::Id])),
            ("score".into(), anon(vec![Step::Coalesce(vec![anon(vec![Step::Values("score".into())]), anon(vec![Step::Constant(Scalar::Null)])])])),
        ]))
        .step(Step::Skip(0))
        .step(Step::Limit(3))
        .step(Step::ToList)
}

#[test]
fn python_text() {
    assert_eq!(
        sample().to_text(Flavor::Python),
        "g.V().has_label('User').has('age', P.gt(18)).order().by(__.values('name'), Order.desc)\
         .project('id', 'score').by(__.id_()).by(__.coalesce(__.values('score'), __.constant(None)))\
         .skip(0).limit(3).to_list()"
    );
}

#[test]
fn groovy_text() {
    assert_eq!(
        sample().to_text(Flavor::Groovy),
        "g.V().hasLabel('User').has('age', gt(18)).order().by(values('name'), desc)\
         .project('id', 'score').by(id()).by(coalesce(values('score'), constant(null)))\
         .skip(0).limit(3).toList()"
    );
}

#[test]
fn ids_and_literals() {
    let t = Traversal::g()
        .step(Step::V(Some(IdLit::parse("42"))))
        .step(Step::AddE("likes".into()))
        .step(Step::To(anon(vec![Step::V(Some(IdLit::parse("a'b")))])))
        .step(Step::Property("w".into(), Scalar::Float(0.5)))
        .step(Step::Property("ok".into(), Scalar::Bool(true)))
        .step(Step::Next);
    assert_eq!(t.to_text(Flavor::Python), "g.V(42).add_e('likes').to(__.V('a\\'b')).property('w', 0.5).property('ok', True).next()");
    assert_eq!(t.to_text(Flavor::Groovy), "g.V(42L).addE('likes').to(__.V('a\\'b')).property('w', 0.5d).property('ok', true).next()");
}

#[test]
fn id_literal_classification() {
    assert_eq!(IdLit::parse("7"), IdLit::Int(7));
    assert_eq!(IdLit::parse("007"), IdLit::Str("007".into()));
    assert_eq!(IdLit::parse("x1"), IdLit::Str("x1".into()));
    assert_eq!(IdLit::parse(""), IdLit::Str(String::new()));
    assert_eq!(IdLit::parse("99999999999999999999"), IdLit::Str("99999999999999999999".into()));
}

#[test]
fn both_dialects_parse_back() {
    let t = sample();
    for flavor in [Flavor::Python, Flavor::Groovy] {
        assert_eq!(parse_traversal(&t.to_text(flavor)).unwrap(), t, "{flavor:?}");
    }
}

#[test]
fn logic_steps_round_trip() {
    let leaf = |k: &str, v: i64| anon(vec![Step::Has(k.into(), Predicate { op: CompareOp::Lte, value: Scalar::Int(v) })]);
    let t = Traversal::g()
        .step(Step::E(None))
        .step(Step::Or(vec![leaf("a", -1), anon(vec![Step::And(vec![leaf("b", 2), leaf("c", 3)])])]))
        .step(Step::Where(anon(vec![Step::InV, Step::HasLabel("X".into())])))
        .step(Step::Drop)
        .step(Step::Iterate);
    for flavor in [Flavor::Python, Flavor::Groovy] {
        let text = t.to_text(flavor);
        assert_eq!(parse_traversal(&text).unwrap(), t, "{text}");
    }
}

#[test]
fn parse_errors() {
    assert!(parse_traversal("g.V().by(__.id_())").is_err());
    assert!(parse_traversal("g.V().project('a')").is_err());
    assert!(parse_traversal("g.V().frobnicate()").is_err());
    assert!(parse_traversal("g.V(").is_err());
    assert!(parse_traversal("g.V() extra").is_err());
}

#[test]
fn whitespace_normalization() {
    let multi = "g.V().has_label('User') \\\n  .project('a')\n  .by(\n    __.id_()\n  ).to_list()";
    assert_eq!(normalize_whitespace(multi), "g.V().has_label('User').project('a').by(__.id_()).to_list()");
    assert_eq!(normalize_whitespace("has('a',  P.gt(1))"), "has('a', P.gt(1))");
}
