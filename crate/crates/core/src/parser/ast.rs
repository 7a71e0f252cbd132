//! Syntax tree for every statement form of the language.

use std::fmt;

use crate::scheme::{ModelType, ObjectScheme};
use crate::value::Value;

/// Dotted attribute chain rooted at an object name, e.g. `Blog.keyword`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrPath(pub Vec<String>);

impl AttrPath {
    pub fn new<S: Into<String>>(segments: impl IntoIterator<Item = S>) -> Self {
        AttrPath(segments.into_iter().map(Into::into).collect())
    }

    /// Parses `"a.b.c"` without validation; for tests and programmatic use.
    pub fn dotted(s: &str) -> Self {
        AttrPath(s.split('.').map(str::to_string).collect())
    }

    pub fn root(&self) -> &str {
        &self.0[0]
    }

    pub fn rest(&self) -> &[String] {
        &self.0[1..]
    }

    pub fn last(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or("")
    }
}

impl fmt::Display for AttrPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
    In,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
            CmpOp::In => "IN",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Or,
    Xor,
    Not,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Value(Value),
    Path(AttrPath),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternEntry {
    Pred(CmpOp, Value),
    Sub(MatchPattern),
    /// Existential: some list element matches.
    List(MatchPattern),
}

/// Structural pattern; the empty pattern matches any map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchPattern(pub Vec<(String, PatternEntry)>);

impl MatchPattern {
    pub fn wildcard() -> Self {
        MatchPattern(Vec::new())
    }

    pub fn is_wildcard(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathStep {
    Node {
        scheme: String,
        pattern: MatchPattern,
    },
    Edge {
        scheme: String,
        pattern: MatchPattern,
        direction: Direction,
    },
}

impl PathStep {
    pub fn scheme(&self) -> &str {
        match self {
            PathStep::Node { scheme, .. } | PathStep::Edge { scheme, .. } => scheme,
        }
    }

    pub fn pattern(&self) -> &MatchPattern {
        match self {
            PathStep::Node { pattern, .. } | PathStep::Edge { pattern, .. } => pattern,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterExpr {
    /// No condition.
    Null,
    Cmp {
        left: AttrPath,
        op: CmpOp,
        right: Operand,
    },
    Logical {
        op: LogicOp,
        children: Vec<FilterExpr>,
    },
    Match {
        object: String,
        element: Option<String>,
        pattern: MatchPattern,
    },
    Path {
        object: String,
        steps: Vec<PathStep>,
    },
    /// A filter from the extensible registry, e.g. `HASKEY(Blog, "title")`.
    Call {
        name: String,
        object: String,
        args: Vec<Value>,
    },
}

impl FilterExpr {
    pub fn and(children: Vec<FilterExpr>) -> FilterExpr {
        let mut children: Vec<FilterExpr> = children.into_iter().filter(|c| *c != FilterExpr::Null).collect();
        match children.len() {
            0 => FilterExpr::Null,
            1 => children.pop().unwrap(),
            _ => FilterExpr::Logical {
                op: LogicOp::And,
                children,
            },
        }
    }

    /// Top-level AND terms (a non-AND expression is its own single term).
    pub fn conjuncts(&self) -> Vec<&FilterExpr> {
        match self {
            FilterExpr::Null => Vec::new(),
            FilterExpr::Logical {
                op: LogicOp::And,
                children,
            } => children.iter().flat_map(|c| c.conjuncts()).collect(),
            other => vec![other],
        }
    }

    /// Object names this expression refers to, in first-seen order.
    pub fn roots(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_roots(&mut out);
        out
    }

    fn collect_roots(&self, out: &mut Vec<String>) {
        let mut push = |s: &str| {
            if !out.iter().any(|x| x == s) {
                out.push(s.to_string());
            }
        };
        match self {
            FilterExpr::Null => {}
            FilterExpr::Cmp { left, right, .. } => {
                push(left.root());
                if let Operand::Path(p) = right {
                    push(p.root());
                }
            }
            FilterExpr::Logical { children, .. } => {
                for c in children {
                    c.collect_roots(out);
                }
            }
            FilterExpr::Match { object, .. }
            | FilterExpr::Path { object, .. }
            | FilterExpr::Call { object, .. } => push(object),
        }
    }

    pub fn contains_path(&self) -> bool {
        match self {
            FilterExpr::Path { .. } => true,
            FilterExpr::Logical { children, .. } => children.iter().any(|c| c.contains_path()),
            _ => false,
        }
    }
}

/// One element of a result scheme or join rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Attribution {
    Attr(AttrPath),
    /// `label : value`; the output key is the label's last segment.
    Labeled {
        label: AttrPath,
        value: Box<Attribution>,
    },
    Map(Vec<Attribution>),
    List(Vec<Attribution>),
}

impl Attribution {
    pub fn collect_paths<'a>(&'a self, out: &mut Vec<&'a AttrPath>) {
        match self {
            Attribution::Attr(p) => out.push(p),
            Attribution::Labeled { value, .. } => value.collect_paths(out),
            Attribution::Map(c) | Attribution::List(c) => c.iter().for_each(|a| a.collect_paths(out)),
        }
    }
}

pub fn attribution_paths(list: &[Attribution]) -> Vec<&AttrPath> {
    let mut out = Vec::new();
    for a in list {
        a.collect_paths(&mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderKey {
    pub path: AttrPath,
    pub descending: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JoinKind {
    OneToOne,
    OneToMany,
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinCond {
    pub left: AttrPath,
    pub op: CmpOp,
    pub right: AttrPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinOperand {
    Object(String),
    Join(Box<JoinExpr>),
    Select(Box<Select>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinExpr {
    pub kind: JoinKind,
    pub left: JoinOperand,
    pub right: JoinOperand,
    pub rule: Vec<Attribution>,
    pub conds: Vec<JoinCond>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Object(String),
    Join(JoinExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Select {
    pub distinct: bool,
    /// `&`-separated output objects.
    pub outputs: Vec<Vec<Attribution>>,
    /// Empty when the FROM clause is omitted.
    pub from: Vec<Source>,
    pub filter: FilterExpr,
    pub order: Vec<OrderKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Select(Select),
    Join(JoinExpr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViewType {
    Multi,
    Single,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InsertRow {
    /// Positional `(v1, v2, ...)`.
    Tuple(Vec<Value>),
    Value(Value),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertItem {
    /// Node or edge scheme for graph objects.
    pub element: Option<String>,
    pub row: InsertRow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InsertSource {
    Values(Vec<InsertItem>),
    Query(Box<Query>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub path: AttrPath,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransferSource {
    Object(String),
    Query(Box<Query>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    CreateObject {
        model: ModelType,
        name: String,
    },
    InitObject {
        model: ModelType,
        name: String,
        scheme: ObjectScheme,
    },
    CreateView {
        vtype: ViewType,
        name: String,
        query: Query,
    },
    Query(Query),
    Insert {
        object: String,
        source: InsertSource,
    },
    Update {
        objects: Vec<String>,
        assignments: Vec<Assignment>,
        filter: FilterExpr,
    },
    Delete {
        objects: Vec<String>,
        filter: FilterExpr,
    },
    Transfer {
        source: TransferSource,
        target: String,
        pairs: Vec<(AttrPath, AttrPath)>,
    },
}
