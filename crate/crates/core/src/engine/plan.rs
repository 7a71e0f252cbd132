use std::fmt::{self, Write};

use super::project::{check_output, paths_reference};
use super::Database;
use crate::error::{Error, PlanError};
use crate::filters::{FilterError, FilterImpl, PathMode};
use crate::parser::{
    attribution_paths, print_attribution, print_filter, AttrPath, Attribution, CmpOp, FilterExpr, JoinCond,
    JoinExpr, JoinKind, JoinOperand, Operand, OrderKey, PathStep, Query, Select, Source,
};
use crate::scheme::{ModelType, ObjectScheme};
use crate::value::Value;

/// Which rewrites the planner may apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanOptions {
    /// Move single-object WHERE terms below joins.
    pub pushdown: bool,
    /// Use key lookups for key equality on key-value objects.
    pub kv_lookup: bool,
    /// Restrict graph scans to the element named by a MATCH term.
    pub element_scan: bool,
    /// Hash the smaller join input.
    pub reorder: bool,
    /// Evaluate PATH by walking adjacency lists.
    pub adjacency: bool,
    /// Hash equality joins instead of nested loops.
    pub hash_join: bool,
}

impl PlanOptions {
    pub fn optimized() -> Self {
        PlanOptions {
            pushdown: true,
            kv_lookup: true,
            element_scan: true,
            reorder: true,
            adjacency: true,
            hash_join: true,
        }
    }

    /// Scan, filter and nested-loop join in written order.
    pub fn naive() -> Self {
        PlanOptions {
            pushdown: false,
            kv_lookup: false,
            element_scan: false,
            reorder: false,
            adjacency: false,
            hash_join: false,
        }
    }
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self::optimized()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinAlgo {
    NestedLoop,
    /// Hash the `build` side on the equality conditions.
    Hash {
        build: Side,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JoinPlan {
    pub kind: JoinKind,
    pub left: Plan,
    pub right: Plan,
    pub left_names: Vec<String>,
    pub right_names: Vec<String>,
    pub rule: Vec<Attribution>,
    /// Conditions with the left-side path first.
    pub conds: Vec<JoinCond>,
    /// The rule gathers matches of the non-driving side into lists.
    pub aggregate: bool,
    pub algo: JoinAlgo,
}

impl JoinPlan {
    pub fn driving(&self) -> Side {
        if self.kind == JoinKind::Right {
            Side::Right
        } else {
            Side::Left
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Plan {
    Scan {
        object: String,
        element: Option<String>,
    },
    KvLookup {
        object: String,
        key: Value,
    },
    PathScan {
        object: String,
        steps: Vec<PathStep>,
        mode: PathMode,
    },
    /// Items of a view or subquery, bound under `bind`.
    Derived {
        bind: String,
        query: Box<QueryPlan>,
    },
    Filter {
        pred: FilterExpr,
        child: Box<Plan>,
    },
    Join(Box<JoinPlan>),
    Order {
        keys: Vec<OrderKey>,
        child: Box<Plan>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    Attrs(Vec<Attribution>),
    /// The join rule's value computed by the join itself.
    RowValue,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputPlan {
    pub label: String,
    pub source: Plan,
    pub projection: Projection,
    pub distinct: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryPlan {
    pub outputs: Vec<OutputPlan>,
}

impl Plan {
    fn explain_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match self {
            Plan::Scan { object, element } => {
                let _ = match element {
                    Some(e) => writeln!(out, "{pad}Scan {object}.{e}"),
                    None => writeln!(out, "{pad}Scan {object}"),
                };
            }
            Plan::KvLookup { object, key } => {
                let _ = writeln!(out, "{pad}KvLookup {object} [{key}]");
            }
            Plan::PathScan { object, steps, mode } => {
                let f = FilterExpr::Path {
                    object: object.clone(),
                    steps: steps.clone(),
                };
                let _ = writeln!(out, "{pad}PathScan({mode:?}) {}", print_filter(&f));
            }
            Plan::Derived { bind, query } => {
                let _ = writeln!(out, "{pad}Derived {bind}");
                query.explain_into(depth + 1, out);
            }
            Plan::Filter { pred, child } => {
                let _ = writeln!(out, "{pad}Filter {}", print_filter(pred));
                child.explain_into(depth + 1, out);
            }
            Plan::Join(j) => {
                let conds: Vec<String> = j
                    .conds
                    .iter()
                    .map(|c| format!("{} {} {}", c.left, c.op.symbol(), c.right))
                    .collect();
                let _ = writeln!(
                    out,
                    "{pad}Join {:?} {:?}{} on {}",
                    j.kind,
                    j.algo,
                    if j.aggregate { " aggregate" } else { "" },
                    conds.join(" AND ")
                );
                j.left.explain_into(depth + 1, out);
                j.right.explain_into(depth + 1, out);
            }
            Plan::Order { keys, child } => {
                let keys: Vec<String> = keys
                    .iter()
                    .map(|k| format!("{}{}", k.path, if k.descending { " DESC" } else { "" }))
                    .collect();
                let _ = writeln!(out, "{pad}Order {}", keys.join(", "));
                child.explain_into(depth + 1, out);
            }
        }
    }

    /// Exact item count when the plan is a scan of a stored object.
    fn exact_rows(&self, db: &Database) -> Option<usize> {
        match self {
            Plan::Scan {
                object,
                element: None,
            } => db.storage.store(object).ok().map(|s| s.len()),
            Plan::KvLookup { .. } => Some(1),
            Plan::Filter { child, .. } => child.exact_rows(db),
            _ => None,
        }
    }
}

impl QueryPlan {
    fn explain_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        for o in &self.outputs {
            let proj = match &o.projection {
                Projection::Attrs(a) => a.iter().map(print_attribution).collect::<Vec<_>>().join(", "),
                Projection::RowValue => "RULE".to_string(),
            };
            let _ = writeln!(
                out,
                "{pad}Output {}{}: {proj}",
                o.label,
                if o.distinct { " DISTINCT" } else { "" }
            );
            o.source.explain_into(depth + 1, out);
        }
    }
}

impl fmt::Display for QueryPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.explain_into(0, &mut s);
        f.write_str(&s)
    }
}

/// What a bound name refers to, for attribute checks.
#[derive(Clone, Debug)]
pub(crate) enum ScopeKind {
    Stored(ObjectScheme),
    /// Path bindings with their step aliases.
    Path(Vec<String>),
    Derived,
}

pub(crate) type Scope = Vec<(String, ScopeKind)>;

fn scope_names(s: &Scope) -> Vec<String> {
    s.iter().map(|(n, _)| n.clone()).collect()
}

pub(crate) fn path_aliases(steps: usize) -> Vec<String> {
    (0..steps)
        .map(|i| {
            if i % 2 == 0 {
                format!("n{}", i / 2)
            } else {
                format!("e{}", i / 2)
            }
        })
        .collect()
}

pub(crate) fn check_path(scope: &[(String, ScopeKind)], path: &AttrPath) -> Result<(), PlanError> {
    let unresolved = || PlanError::UnresolvableAttribute(path.to_string());
    let (_, kind) = scope
        .iter()
        .find(|(n, _)| n == path.root())
        .ok_or_else(unresolved)?;
    let Some(first) = path.rest().first() else {
        return Ok(());
    };
    let ok = match kind {
        ScopeKind::Stored(scheme) => {
            scheme.top_level_names().iter().any(|n| n == first)
                || (scheme.model() == ModelType::Graph
                    && (scheme.node(first).is_some() || scheme.edge(first).is_some()))
        }
        ScopeKind::Path(aliases) => aliases.iter().any(|a| a == first),
        ScopeKind::Derived => true,
    };
    if ok {
        Ok(())
    } else {
        Err(unresolved())
    }
}

fn flip(op: CmpOp) -> CmpOp {
    match op {
        CmpOp::Lt => CmpOp::Gt,
        CmpOp::Gt => CmpOp::Lt,
        CmpOp::Le => CmpOp::Ge,
        CmpOp::Ge => CmpOp::Le,
        other => other,
    }
}

fn all_in(roots: &[String], names: &[String]) -> bool {
    !roots.is_empty() && roots.iter().all(|r| names.contains(r))
}

pub(crate) struct Planner<'a> {
    db: &'a Database,
    opts: PlanOptions,
}

impl<'a> Planner<'a> {
    pub fn new(db: &'a Database, opts: PlanOptions) -> Self {
        Planner { db, opts }
    }

    pub fn query(&self, q: &Query) -> Result<QueryPlan, Error> {
        match q {
            Query::Select(s) => self.select(s),
            Query::Join(j) => {
                let (source, _) = self.join(j, Vec::new())?;
                Ok(QueryPlan {
                    outputs: vec![OutputPlan {
                        label: join_label(j),
                        source,
                        projection: Projection::RowValue,
                        distinct: false,
                    }],
                })
            }
        }
    }

    fn check_known(&self, name: &str) -> Result<(), Error> {
        if self.db.catalog.view(name).is_some() {
            return Ok(());
        }
        self.db.catalog.scheme(name)?;
        Ok(())
    }

    /// Names a source binds for its rows.
    fn source_names(&self, src: &Source) -> Result<Vec<String>, Error> {
        match src {
            Source::Object(n) => {
                self.check_known(n)?;
                Ok(vec![n.clone()])
            }
            Source::Join(j) => self.join_visible_names(j),
        }
    }

    fn operand_names(&self, op: &JoinOperand) -> Result<Vec<String>, Error> {
        match op {
            JoinOperand::Object(n) => {
                self.check_known(n)?;
                Ok(vec![n.clone()])
            }
            JoinOperand::Join(j) => self.join_visible_names(j),
            JoinOperand::Select(s) => Ok(vec![subquery_bind(s)?]),
        }
    }

    fn join_visible_names(&self, j: &JoinExpr) -> Result<Vec<String>, Error> {
        let mut l = self.operand_names(&j.left)?;
        let r = self.operand_names(&j.right)?;
        let driving_right = j.kind == JoinKind::Right;
        if paths_reference(&j.rule, if driving_right { &l } else { &r }) {
            return Ok(if driving_right { r } else { l });
        }
        l.extend(r);
        Ok(l)
    }

    fn select(&self, s: &Select) -> Result<QueryPlan, Error> {
        let sources: Vec<Source> = if s.from.is_empty() {
            let mut roots: Vec<String> = Vec::new();
            for o in &s.outputs {
                for p in attribution_paths(o) {
                    if !roots.iter().any(|r| r == p.root()) {
                        roots.push(p.root().to_string());
                    }
                }
            }
            roots.into_iter().map(Source::Object).collect()
        } else {
            s.from.clone()
        };
        let mut names: Vec<Vec<String>> = Vec::new();
        for src in &sources {
            let n = self.source_names(src)?;
            for x in &n {
                if names.iter().flatten().any(|y| y == x) {
                    return Err(PlanError::AmbiguousAttribute(x.clone()).into());
                }
            }
            names.push(n);
        }
        let source_of = |roots: &[String]| -> Option<usize> { names.iter().position(|n| all_in(roots, n)) };

        let mut conjuncts: Vec<Vec<FilterExpr>> = vec![Vec::new(); sources.len()];
        for c in s.filter.conjuncts() {
            let roots = c.roots();
            if roots.is_empty() {
                continue;
            }
            match source_of(&roots) {
                Some(i) => conjuncts[i].push(c.clone()),
                None => {
                    for r in &roots {
                        if !names.iter().flatten().any(|n| n == r) {
                            return Err(PlanError::UnresolvableAttribute(r.clone()).into());
                        }
                    }
                    return Err(PlanError::CrossObjectPredicateInSelect(print_filter(c)).into());
                }
            }
        }
        let mut order: Vec<Vec<OrderKey>> = vec![Vec::new(); sources.len()];
        for k in &s.order {
            let i = source_of(&[k.path.root().to_string()])
                .ok_or_else(|| PlanError::UnresolvableAttribute(k.path.to_string()))?;
            order[i].push(k.clone());
        }

        let mut built: Vec<Option<(Plan, Scope)>> = vec![None; sources.len()];
        let mut outputs = Vec::new();
        for attrs in &s.outputs {
            let roots: Vec<String> = attribution_paths(attrs)
                .iter()
                .map(|p| p.root().to_string())
                .collect();
            let text = attrs.iter().map(print_attribution).collect::<Vec<_>>().join(", ");
            let i = match source_of(&roots) {
                Some(i) => i,
                None => {
                    for r in &roots {
                        if !names.iter().flatten().any(|n| n == r) {
                            return Err(PlanError::UnresolvableAttribute(r.clone()).into());
                        }
                    }
                    return Err(PlanError::OutputSpansSources(text).into());
                }
            };
            if built[i].is_none() {
                built[i] = Some(self.source_plan(&sources[i], &conjuncts[i], &order[i])?);
            }
            let (plan, scope) = built[i].as_ref().unwrap();
            check_output(attrs, scope)?;
            outputs.push(OutputPlan {
                label: source_label(&sources[i]),
                source: plan.clone(),
                projection: Projection::Attrs(attrs.clone()),
                distinct: s.distinct,
            });
        }
        // sources without outputs still validate their terms
        for (i, b) in built.iter().enumerate() {
            if b.is_none() && (!conjuncts[i].is_empty() || !order[i].is_empty()) {
                self.source_plan(&sources[i], &conjuncts[i], &order[i])?;
            }
        }
        Ok(QueryPlan { outputs })
    }

    fn source_plan(
        &self,
        src: &Source,
        conjuncts: &[FilterExpr],
        order: &[OrderKey],
    ) -> Result<(Plan, Scope), Error> {
        let (mut plan, scope, rest) = match src {
            Source::Object(n) => self.named(n, conjuncts.to_vec(), true)?,
            Source::Join(j) => {
                for c in conjuncts {
                    if c.contains_path() {
                        return Err(FilterError::PathNotTopLevel.into());
                    }
                }
                let names = self.join_visible_names(j)?;
                let (plan, scope) = self.join(j, conjuncts.to_vec())?;
                debug_assert_eq!(scope_names(&scope), names);
                (plan, scope, Vec::new())
            }
        };
        for c in conjuncts {
            if !matches!(c, FilterExpr::Path { .. }) {
                self.check_filter(c, &scope)?;
            }
        }
        if !rest.is_empty() {
            plan = Plan::Filter {
                pred: FilterExpr::and(rest),
                child: Box::new(plan),
            };
        }
        for k in order {
            check_path(&scope, &k.path)?;
        }
        if !order.is_empty() {
            plan = Plan::Order {
                keys: order.to_vec(),
                child: Box::new(plan),
            };
        }
        Ok((plan, scope))
    }

    /// Leaf plan for a stored object or view. Returns the plan, its scope and
    /// the terms still to be applied above it. With `allow_path`, a
    /// top-level PATH term turns the leaf into a path scan.
    fn named(
        &self,
        name: &str,
        conjuncts: Vec<FilterExpr>,
        allow_path: bool,
    ) -> Result<(Plan, Scope, Vec<FilterExpr>), Error> {
        if let Some(view) = self.db.catalog.view(name) {
            let query = self.query(&view.query)?;
            if query.outputs.len() != 1 {
                return Err(PlanError::Unsupported(format!(
                    "view {name} has several output objects and cannot be used as a source"
                ))
                .into());
            }
            for c in &conjuncts {
                if c.contains_path() {
                    return Err(FilterError::PathNotTopLevel.into());
                }
            }
            let plan = Plan::Derived {
                bind: name.to_string(),
                query: Box::new(query),
            };
            return Ok((plan, vec![(name.to_string(), ScopeKind::Derived)], conjuncts));
        }
        let scheme = self.db.catalog.scheme(name)?.clone();
        let model = scheme.model();

        let mut path = None;
        let mut rest = Vec::new();
        for c in conjuncts {
            match c {
                FilterExpr::Path { object, steps } if allow_path => {
                    if !matches!(self.db.filters.lookup(model, "PATH"), Some(FilterImpl::Path)) {
                        return Err(FilterError::UnknownFilter {
                            name: "PATH".into(),
                            model: model.to_string(),
                        }
                        .into());
                    }
                    if path.is_some() {
                        return Err(PlanError::MultiplePaths(object).into());
                    }
                    for s in &steps {
                        let ok = match s {
                            PathStep::Node { scheme: n, .. } => scheme.node(n).is_some(),
                            PathStep::Edge { scheme: e, .. } => scheme.edge(e).is_some(),
                        };
                        if !ok {
                            return Err(FilterError::UnknownScheme(s.scheme().to_string()).into());
                        }
                    }
                    path = Some(steps);
                }
                c if c.contains_path() => return Err(FilterError::PathNotTopLevel.into()),
                c => rest.push(c),
            }
        }
        if let Some(steps) = path {
            let aliases = path_aliases(steps.len());
            let mode = if self.opts.adjacency {
                PathMode::Adjacency
            } else {
                PathMode::Scan
            };
            let plan = Plan::PathScan {
                object: name.to_string(),
                steps,
                mode,
            };
            return Ok((plan, vec![(name.to_string(), ScopeKind::Path(aliases))], rest));
        }

        let mut plan = Plan::Scan {
            object: name.to_string(),
            element: None,
        };
        if let ObjectScheme::KeyValue { key, .. } = &scheme {
            if self.opts.kv_lookup {
                let hit = rest.iter().find_map(|c| match c {
                    FilterExpr::Cmp {
                        left,
                        op: CmpOp::Eq,
                        right: Operand::Value(v),
                    } if left.0.len() == 2 && left.0[1] == key.name => Some(v.clone()),
                    _ => None,
                });
                if let Some(k) = hit {
                    plan = Plan::KvLookup {
                        object: name.to_string(),
                        key: k,
                    };
                }
            }
        }
        if model == ModelType::Graph && self.opts.element_scan {
            let el = rest.iter().find_map(|c| match c {
                FilterExpr::Match { element: Some(e), .. } => Some(e.clone()),
                _ => None,
            });
            if el.is_some() {
                plan = Plan::Scan {
                    object: name.to_string(),
                    element: el,
                };
            }
        }
        Ok((plan, vec![(name.to_string(), ScopeKind::Stored(scheme))], rest))
    }

    fn operand(&self, op: &JoinOperand, pushed: Vec<FilterExpr>) -> Result<(Plan, Scope), Error> {
        match op {
            JoinOperand::Object(n) => {
                let (mut plan, scope, rest) = self.named(n, pushed, false)?;
                if !rest.is_empty() {
                    plan = Plan::Filter {
                        pred: FilterExpr::and(rest),
                        child: Box::new(plan),
                    };
                }
                Ok((plan, scope))
            }
            JoinOperand::Join(j) => self.join(j, pushed),
            JoinOperand::Select(s) => {
                let bind = subquery_bind(s)?;
                let query = self.select(s)?;
                let mut plan = Plan::Derived {
                    bind: bind.clone(),
                    query: Box::new(query),
                };
                if !pushed.is_empty() {
                    plan = Plan::Filter {
                        pred: FilterExpr::and(pushed),
                        child: Box::new(plan),
                    };
                }
                Ok((plan, vec![(bind, ScopeKind::Derived)]))
            }
        }
    }

    /// Plans a join. `pushed` are WHERE terms over the join's visible names;
    /// terms that cannot safely move into an input stay above the join.
    pub fn join(&self, j: &JoinExpr, pushed: Vec<FilterExpr>) -> Result<(Plan, Scope), Error> {
        let left_names = self.operand_names(&j.left)?;
        let right_names = self.operand_names(&j.right)?;
        for n in &left_names {
            if right_names.contains(n) {
                return Err(PlanError::AmbiguousAttribute(n.clone()).into());
            }
        }
        let driving_right = j.kind == JoinKind::Right;
        let other_names = if driving_right { &left_names } else { &right_names };
        let aggregate = paths_reference(&j.rule, other_names);
        let flat_many = j.kind == JoinKind::OneToMany && !aggregate;

        let mut to_left = Vec::new();
        let mut to_right = Vec::new();
        let mut above = Vec::new();
        for c in pushed {
            let roots = c.roots();
            if self.opts.pushdown && all_in(&roots, &left_names) && (!driving_right || flat_many) {
                to_left.push(c);
            } else if self.opts.pushdown && all_in(&roots, &right_names) && (driving_right || flat_many) {
                to_right.push(c);
            } else {
                above.push(c);
            }
        }
        let (left, left_scope) = self.operand(&j.left, to_left)?;
        let (right, right_scope) = self.operand(&j.right, to_right)?;
        let mut full: Scope = left_scope.clone();
        full.extend(right_scope.clone());

        let mut conds = Vec::new();
        for c in &j.conds {
            check_path(&full, &c.left)?;
            check_path(&full, &c.right)?;
            let l = c.left.root().to_string();
            let r = c.right.root().to_string();
            let text = format!("{} {} {}", c.left, c.op.symbol(), c.right);
            if left_names.contains(&l) && right_names.contains(&r) {
                conds.push(c.clone());
            } else if right_names.contains(&l) && left_names.contains(&r) {
                conds.push(JoinCond {
                    left: c.right.clone(),
                    op: flip(c.op),
                    right: c.left.clone(),
                });
            } else {
                return Err(PlanError::InvalidJoinCondition(text).into());
            }
        }
        check_output(&j.rule, &full)?;

        let has_eq = conds.iter().any(|c| c.op == CmpOp::Eq);
        let algo = if self.opts.hash_join && has_eq {
            let build = match (left.exact_rows(self.db), right.exact_rows(self.db)) {
                (Some(l), Some(r)) if self.opts.reorder && l < r => Side::Left,
                _ => Side::Right,
            };
            JoinAlgo::Hash { build }
        } else {
            JoinAlgo::NestedLoop
        };
        let visible = if aggregate {
            if driving_right {
                right_scope
            } else {
                left_scope
            }
        } else {
            full
        };
        let mut plan = Plan::Join(Box::new(JoinPlan {
            kind: j.kind,
            left,
            right,
            left_names,
            right_names,
            rule: j.rule.clone(),
            conds,
            aggregate,
            algo,
        }));
        if !above.is_empty() {
            plan = Plan::Filter {
                pred: FilterExpr::and(above),
                child: Box::new(plan),
            };
        }
        Ok((plan, visible))
    }

    fn check_filter(&self, f: &FilterExpr, scope: &Scope) -> Result<(), Error> {
        match f {
            FilterExpr::Null => Ok(()),
            FilterExpr::Cmp { left, right, .. } => {
                check_path(scope, left)?;
                if let Operand::Path(p) = right {
                    check_path(scope, p)?;
                }
                Ok(())
            }
            FilterExpr::Logical { children, .. } => {
                children.iter().try_for_each(|c| self.check_filter(c, scope))
            }
            FilterExpr::Path { .. } => Err(FilterError::PathNotTopLevel.into()),
            FilterExpr::Match { object, element, .. } => {
                let kind = lookup_scope(scope, object)?;
                if let ScopeKind::Stored(s) = kind {
                    if !matches!(
                        self.db.filters.lookup(s.model(), "MATCH"),
                        Some(FilterImpl::Match)
                    ) {
                        return Err(FilterError::UnknownFilter {
                            name: "MATCH".into(),
                            model: s.model().to_string(),
                        }
                        .into());
                    }
                    if let Some(e) = element {
                        if s.node(e).is_none() && s.edge(e).is_none() {
                            return Err(FilterError::UnknownScheme(e.clone()).into());
                        }
                    }
                }
                Ok(())
            }
            FilterExpr::Call { name, object, .. } => {
                let kind = lookup_scope(scope, object)?;
                let model = match kind {
                    ScopeKind::Stored(s) => Some(s.model()),
                    _ => None,
                };
                match model.and_then(|m| self.db.filters.lookup(m, name)) {
                    Some(FilterImpl::Custom(_)) => Ok(()),
                    _ => Err(FilterError::UnknownFilter {
                        name: name.clone(),
                        model: model.map(|m| m.to_string()).unwrap_or_else(|| "derived".into()),
                    }
                    .into()),
                }
            }
        }
    }
}

fn lookup_scope<'s>(scope: &'s Scope, name: &str) -> Result<&'s ScopeKind, PlanError> {
    scope
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, k)| k)
        .ok_or_else(|| PlanError::UnresolvableAttribute(name.to_string()))
}

/// The name a subquery's items are bound under: its single source.
fn subquery_bind(s: &Select) -> Result<String, Error> {
    let unsupported = || {
        Error::from(PlanError::Unsupported(
            "a subquery used as a join input must read exactly one object and produce one output".into(),
        ))
    };
    if s.outputs.len() != 1 {
        return Err(unsupported());
    }
    match s.from.as_slice() {
        [Source::Object(n)] => Ok(n.clone()),
        [] => {
            let mut roots: Vec<&str> = attribution_paths(&s.outputs[0])
                .iter()
                .map(|p| p.root())
                .collect();
            roots.dedup();
            match roots.as_slice() {
                [one] => Ok(one.to_string()),
                _ => Err(unsupported()),
            }
        }
        _ => Err(unsupported()),
    }
}

fn operand_label(op: &JoinOperand) -> String {
    match op {
        JoinOperand::Object(n) => n.clone(),
        JoinOperand::Join(j) => join_label(j),
        JoinOperand::Select(s) => subquery_bind(s).unwrap_or_else(|_| "query".into()),
    }
}

fn join_label(j: &JoinExpr) -> String {
    format!("JOIN({}, {})", operand_label(&j.left), operand_label(&j.right))
}

fn source_label(src: &Source) -> String {
    match src {
        Source::Object(n) => n.clone(),
        Source::Join(j) => join_label(j),
    }
}
