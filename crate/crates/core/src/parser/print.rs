//! Canonical text rendering. `parse_statement(print_statement(s)) == s`.

use std::fmt::Write;

use super::ast::*;
use crate::scheme::{Constraint, NestedTriple, ObjectScheme, Triple};
use crate::value::{write_key, Value};

pub fn print_statement(s: &Statement) -> String {
    let mut out = String::new();
    match s {
        Statement::CreateObject { model, name } => {
            let _ = write!(out, "CREATE {model} {name}");
        }
        Statement::InitObject { model, name, scheme } => {
            let _ = write!(out, "INIT {model} {name} WITH {}", print_scheme(scheme));
        }
        Statement::CreateView { vtype, name, query } => {
            let vt = match vtype {
                ViewType::Multi => "MULTI",
                ViewType::Single => "SINGLE",
            };
            let _ = write!(out, "CREATE VIEW {vt} {name} AS {}", print_query(query));
        }
        Statement::Query(q) => out.push_str(&print_query(q)),
        Statement::Insert { object, source } => {
            let _ = write!(out, "INSERT {object} ");
            match source {
                InsertSource::Values(items) => {
                    out.push_str("MULTIVAL ");
                    let parts: Vec<String> = items.iter().map(print_insert_item).collect();
                    out.push_str(&parts.join(", "));
                }
                InsertSource::Query(q) => out.push_str(&print_query(q)),
            }
        }
        Statement::Update {
            objects,
            assignments,
            filter,
        } => {
            let _ = write!(out, "UPDATE {} SET ", objects.join(", "));
            let parts: Vec<String> = assignments
                .iter()
                .map(|a| format!("{} = {}", a.path, a.value))
                .collect();
            out.push_str(&parts.join(", "));
            push_where(&mut out, filter);
        }
        Statement::Delete { objects, filter } => {
            let _ = write!(out, "DELETE {}", objects.join(", "));
            push_where(&mut out, filter);
        }
        Statement::Transfer {
            source,
            target,
            pairs,
        } => {
            let src = match source {
                TransferSource::Object(o) => o.clone(),
                TransferSource::Query(q) => format!("({})", print_query(q)),
            };
            let parts: Vec<String> = pairs.iter().map(|(s, t)| format!("{s} : {t}")).collect();
            let _ = write!(out, "TRANSFER {src} INTO {target} WITH {}", parts.join(", "));
        }
    }
    out
}

fn print_insert_item(item: &InsertItem) -> String {
    let mut s = String::new();
    if let Some(e) = &item.element {
        s.push_str(e);
        s.push(' ');
    }
    match &item.row {
        InsertRow::Tuple(vals) => {
            let parts: Vec<String> = vals.iter().map(Value::to_string).collect();
            let _ = write!(s, "({})", parts.join(", "));
        }
        InsertRow::Value(v) => {
            let _ = write!(s, "{v}");
        }
    }
    s
}

fn push_where(out: &mut String, filter: &FilterExpr) {
    if *filter != FilterExpr::Null {
        out.push_str(" WHERE ");
        out.push_str(&print_filter(filter));
    }
}

pub fn print_query(q: &Query) -> String {
    match q {
        Query::Select(s) => print_select(s),
        Query::Join(j) => print_join(j),
    }
}

fn print_select(s: &Select) -> String {
    let mut out = String::from("SELECT ");
    if s.distinct {
        out.push_str("DISTINCT ");
    }
    let outputs: Vec<String> = s.outputs.iter().map(|o| print_attr_list(o)).collect();
    out.push_str(&outputs.join(" & "));
    if !s.from.is_empty() {
        out.push_str(" FROM ");
        let parts: Vec<String> = s
            .from
            .iter()
            .map(|src| match src {
                Source::Object(o) => o.clone(),
                Source::Join(j) => print_join(j),
            })
            .collect();
        out.push_str(&parts.join(", "));
    }
    push_where(&mut out, &s.filter);
    if !s.order.is_empty() {
        out.push_str(" ORDER BY ");
        let parts: Vec<String> = s
            .order
            .iter()
            .map(|k| {
                if k.descending {
                    format!("{} DESC", k.path)
                } else {
                    k.path.to_string()
                }
            })
            .collect();
        out.push_str(&parts.join(", "));
    }
    out
}

fn print_join(j: &JoinExpr) -> String {
    let kw = match j.kind {
        JoinKind::OneToOne => "JOIN",
        JoinKind::OneToMany => "OM JOIN",
        JoinKind::Left => "LEFT JOIN",
        JoinKind::Right => "RIGHT JOIN",
    };
    let conds: Vec<String> = j
        .conds
        .iter()
        .map(|c| format!("{} {} {}", c.left, c.op.symbol(), c.right))
        .collect();
    format!(
        "{kw} {}, {} RULE {} WITH {}",
        print_operand(&j.left),
        print_operand(&j.right),
        print_attr_list(&j.rule),
        conds.join(" AND ")
    )
}

fn print_operand(o: &JoinOperand) -> String {
    match o {
        JoinOperand::Object(n) => n.clone(),
        JoinOperand::Join(j) => format!("({})", print_join(j)),
        JoinOperand::Select(s) => format!("({})", print_select(s)),
    }
}

fn print_attr_list(list: &[Attribution]) -> String {
    let parts: Vec<String> = list.iter().map(print_attribution).collect();
    parts.join(", ")
}

pub fn print_attribution(a: &Attribution) -> String {
    match a {
        Attribution::Attr(p) => p.to_string(),
        Attribution::Labeled { label, value } => {
            format!("{label} : {}", print_attribution(value))
        }
        Attribution::Map(c) => format!("{{{}}}", print_attr_list(c)),
        Attribution::List(c) => format!("[{}]", print_attr_list(c)),
    }
}

fn precedence(op: LogicOp) -> u8 {
    match op {
        LogicOp::Or => 1,
        LogicOp::And => 2,
        LogicOp::Xor => 3,
        LogicOp::Not => 4,
    }
}

pub fn print_filter(f: &FilterExpr) -> String {
    match f {
        FilterExpr::Null => "NULL".to_string(),
        FilterExpr::Cmp { left, op, right } => {
            let r = match right {
                Operand::Value(v) => v.to_string(),
                Operand::Path(p) => p.to_string(),
            };
            format!("{left} {} {r}", op.symbol())
        }
        FilterExpr::Logical { op, children } => {
            let wrap = |c: &FilterExpr| -> String {
                let text = print_filter(c);
                match c {
                    FilterExpr::Logical { op: inner, .. }
                        if *inner != LogicOp::Not && precedence(*inner) <= precedence(*op) =>
                    {
                        format!("({text})")
                    }
                    _ => text,
                }
            };
            if *op == LogicOp::Not {
                return format!("NOT {}", wrap(&children[0]));
            }
            let kw = match op {
                LogicOp::And => " AND ",
                LogicOp::Or => " OR ",
                _ => " XOR ",
            };
            let parts: Vec<String> = children.iter().map(wrap).collect();
            parts.join(kw)
        }
        FilterExpr::Match {
            object,
            element,
            pattern,
        } => {
            let el = element.as_ref().map(|e| format!("{e}:")).unwrap_or_default();
            format!("MATCH({object}, {el}{})", print_pattern(pattern))
        }
        FilterExpr::Path { object, steps } => {
            let mut s = format!("PATH({object}, ");
            for step in steps {
                match step {
                    PathStep::Node { scheme, pattern } => {
                        let _ = write!(s, "{scheme}:{}", print_pattern(pattern));
                    }
                    PathStep::Edge {
                        scheme,
                        pattern,
                        direction,
                    } => {
                        let arrow = match direction {
                            Direction::Forward => "->",
                            Direction::Backward => "<-",
                        };
                        let _ = write!(s, " {arrow} {scheme}:{} {arrow} ", print_pattern(pattern));
                    }
                }
            }
            s.push(')');
            s
        }
        FilterExpr::Call { name, object, args } => {
            let mut s = format!("{name}({object}");
            for a in args {
                let _ = write!(s, ", {a}");
            }
            s.push(')');
            s
        }
    }
}

fn print_pattern(p: &MatchPattern) -> String {
    let mut s = String::from("{");
    for (i, (k, e)) in p.0.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write_key(&mut s, k);
        s.push_str(": ");
        match e {
            PatternEntry::Pred(op, v) => {
                let _ = write!(s, "{{{}, {v}}}", op.symbol());
            }
            PatternEntry::Sub(sub) => s.push_str(&print_pattern(sub)),
            PatternEntry::List(sub) => {
                let _ = write!(s, "LIST<{}>", print_pattern(sub));
            }
        }
    }
    s.push('}');
    s
}

fn print_triple(t: &Triple) -> String {
    let c = match &t.constraint {
        Constraint::None => String::new(),
        Constraint::Primary => ", PRIMARY".into(),
        Constraint::NotNull => ", NOT NULL".into(),
        Constraint::Foreign(None) => ", FOREIGN".into(),
        Constraint::Foreign(Some(target)) => format!(", FOREIGN {}", target.join(".")),
    };
    format!("({}, {}{c})", t.name, t.ty)
}

fn print_nested(n: &NestedTriple) -> String {
    match n {
        NestedTriple::Leaf(t) => print_triple(t),
        NestedTriple::MapNode { name, children } => {
            format!("{name}: {}", print_nested_block(children))
        }
        NestedTriple::ListNode { name, element } => {
            format!("{name}: LIST OF {}", print_nested_block(element))
        }
    }
}

fn print_nested_block(fields: &[NestedTriple]) -> String {
    let parts: Vec<String> = fields.iter().map(print_nested).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn print_scheme(s: &ObjectScheme) -> String {
    match s {
        ObjectScheme::Relational { columns } => {
            let parts: Vec<String> = columns.iter().map(print_triple).collect();
            parts.join(", ")
        }
        ObjectScheme::KeyValue { key, value } => {
            format!("{{{}, {}}}", print_triple(key), print_triple(value))
        }
        ObjectScheme::Document { root } => print_nested_block(root),
        ObjectScheme::Graph { nodes, edges } => {
            let mut parts: Vec<String> = nodes
                .iter()
                .map(|n| format!("{} {}", n.name, print_nested_block(&n.properties)))
                .collect();
            for e in edges {
                let mut body = format!("FROM: {}, TO: {}", e.from, e.to);
                for p in &e.properties {
                    body.push_str(", ");
                    body.push_str(&print_nested(p));
                }
                parts.push(format!("{} {{{body}}}", e.name));
            }
            format!("[{}]", parts.join(", "))
        }
    }
}
