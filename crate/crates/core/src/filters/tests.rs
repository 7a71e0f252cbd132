use std::sync::Arc;

use super::*;
use crate::parser::{parse_statement, parse_value, PathStep, Query, Statement};
use crate::storage::ObjectStore;

fn v(text: &str) -> Value {
    parse_value(text).unwrap()
}

fn where_of(text: &str) -> FilterExpr {
    match parse_statement(text).unwrap() {
        Statement::Query(Query::Select(s)) => s.filter,
        Statement::Delete { filter, .. } => filter,
        _ => panic!(),
    }
}

fn row(name: &str, value: Value) -> Vec<Binding> {
    vec![Binding::derived(name, value)]
}

#[test]
fn truth_tables() {
    use TriBool::*;
    let all = [True, False, Unknown];
    for a in all {
        for b in all {
            let and = match (a, b) {
                (False, _) | (_, False) => False,
                (True, True) => True,
                _ => Unknown,
            };
            assert_eq!(a.and(b), and);
            assert_eq!(a.or(b), a.not().and(b.not()).not());
        }
    }
    assert_eq!(True.xor(True), False);
    assert_eq!(True.xor(False), True);
    assert_eq!(Unknown.xor(False), Unknown);
}

#[test]
fn basic_comparisons() {
    let r = row("R1", v(r#"{studentid: "S1", name: "x", class: 3}"#));
    assert_eq!(
        eval_basic(&where_of("DELETE R1 WHERE R1.class = 3"), &r),
        Ok(TriBool::True)
    );
    assert_eq!(eval_basic(&FilterExpr::Null, &r), Ok(TriBool::True));
    assert_eq!(
        eval_basic(&where_of("DELETE R1 WHERE R1.missing = NULL"), &r),
        Ok(TriBool::True)
    );
    assert_eq!(
        eval_basic(&where_of("DELETE R1 WHERE R1.missing < 3"), &r),
        Ok(TriBool::Unknown)
    );
    assert_eq!(
        eval_basic(&where_of("DELETE R1 WHERE R1.class IN [1, 3]"), &r),
        Ok(TriBool::True)
    );
    assert_eq!(
        eval_basic(&where_of("DELETE X WHERE X.class = 3"), &r),
        Err(FilterError::UnresolvableObject("X".into()))
    );
}

#[test]
fn xor_brute_force() {
    let f = where_of("DELETE T WHERE T.a < 5 XOR T.a > 2");
    for a in 0..=10 {
        let expected = TriBool::from((a < 5) != (a > 2));
        assert_eq!(eval_basic(&f, &row("T", v(&format!("{{a: {a}}}")))), Ok(expected));
    }
    assert_eq!(eval_basic(&f, &row("T", v("{a: NULL}"))), Ok(TriBool::Unknown));
}

#[test]
fn match_bn0024_example() {
    let f = where_of(
        r#"SELECT Blog FROM Blog WHERE MATCH(Blog, {id:{=, "BN0024"}, keyword: list<{kid:{IN, [01,02]}}>})"#,
    );
    let FilterExpr::Match { pattern, .. } = &f else {
        panic!()
    };
    let doc = v(r#"{id: "BN0024", keyword: [{kid: 5, word: "a"}, {kid: 1, word: "b"}]}"#);
    assert!(eval_match(pattern, &doc));
    let doc = v(r#"{id: "BN0024", keyword: [{kid: 5, word: "a"}]}"#);
    assert!(!eval_match(pattern, &doc));
    assert!(eval_match(&MatchPattern::wildcard(), &v("{}")));
    assert!(!eval_match(&MatchPattern::wildcard(), &v("3")));
}

#[test]
fn registry() {
    let mut fam = FilterFamily::new();
    let haskey: Evaluator = Arc::new(|item: &Value, args: &[Value]| {
        let Some(Value::Str(k)) = args.first() else {
            return TriBool::Unknown;
        };
        TriBool::from(item.as_map().is_some_and(|m| m.contains_key(k)))
    });
    fam.register_filter(ModelType::Document, "HASKEY", haskey.clone())
        .unwrap();
    assert_eq!(
        fam.register_filter(ModelType::Document, "MATCH", haskey.clone())
            .unwrap_err(),
        FilterError::DuplicateFilterName("MATCH".into())
    );
    assert_eq!(
        fam.register_filter(ModelType::Document, "select", haskey)
            .unwrap_err(),
        FilterError::ReservedName("select".into())
    );
    let mut b = Binding::derived("Blog", v(r#"{title: "t"}"#));
    b.model = Some(ModelType::Document);
    let f = where_of(r#"DELETE Blog WHERE HASKEY(Blog, "title")"#);
    assert_eq!(eval_where(&f, &[b.clone()], &fam), Ok(TriBool::True));
    let f = where_of(r#"DELETE Blog WHERE NOPE(Blog, "title")"#);
    assert!(matches!(
        eval_where(&f, &[b], &fam),
        Err(FilterError::UnknownFilter { .. })
    ));
}

fn graph() -> ObjectStore {
    let Statement::InitObject { scheme, .. } = parse_statement(
        "INIT GRAPH G WITH [Person {(id, string, PRIMARY), (name, string)}, Relation {FROM: Person, TO: Person, (type, string)}]",
    )
    .unwrap() else {
        panic!()
    };
    let mut g = ObjectStore::new("G", scheme);
    let mut items = Vec::new();
    for (id, name) in [("P1", "Amy"), ("P2", "Bob"), ("P3", "Cid"), ("P4", "Dee")] {
        items.push((
            Some("Person".to_string()),
            v(&format!("{{id: \"{id}\", name: \"{name}\"}}")),
        ));
    }
    for (a, b) in [("P1", "P2"), ("P2", "P3"), ("P4", "P2")] {
        items.push((
            Some("Relation".to_string()),
            v(&format!("{{from: \"{a}\", to: \"{b}\", type: \"like\"}}")),
        ));
    }
    g.insert_items(items).unwrap();
    g
}

fn steps(text: &str) -> Vec<PathStep> {
    match where_of(&format!("SELECT G FROM G WHERE PATH(G, {text})")) {
        FilterExpr::Path { steps, .. } => steps,
        _ => panic!(),
    }
}

fn ends(bs: &[PathBinding]) -> Vec<Value> {
    bs.iter()
        .map(|b| b.items.last().unwrap().1.get_path(&["name"]).unwrap().clone())
        .collect()
}

#[test]
fn path_directions() {
    let g = graph();
    let fwd = steps(r#"Person:{name:{=,"Amy"}} -> Relation -> Person -> Relation -> Person"#);
    let back = steps(r#"Person:{name:{=,"Amy"}} -> Relation -> Person <- Relation <- Person"#);
    for mode in [PathMode::Adjacency, PathMode::Scan] {
        assert_eq!(ends(&eval_path(&fwd, &g, mode).unwrap()), vec![v("\"Cid\"")]);
        assert_eq!(
            ends(&eval_path(&back, &g, mode).unwrap()),
            vec![v("\"Amy\""), v("\"Dee\"")]
        );
    }
    assert_eq!(
        eval_path(&steps("Person -> Nope -> Person"), &g, PathMode::Adjacency),
        Err(FilterError::UnknownScheme("Nope".into()))
    );
    let single = eval_path(&steps("Person"), &g, PathMode::Adjacency).unwrap();
    assert_eq!(single.len(), 4);
}
