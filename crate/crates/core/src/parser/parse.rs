use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, ParseErrorKind};
use crate::scheme::{
    Constraint, EdgeScheme, ModelType, NestedTriple, NodeScheme, ObjectScheme, Triple, TypeTag,
};
use crate::value::{Value, ValueMap};

type PResult<T> = Result<T, ParseError>;

/// A statement together with the position of its first token.
#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub line: usize,
    pub column: usize,
    pub statement: Statement,
}

/// Parses exactly one statement, with an optional trailing `;`.
pub fn parse_statement(text: &str) -> PResult<Statement> {
    let mut p = Parser::new(tokenize(text)?);
    let stmt = p.statement()?;
    p.eat_punct(";");
    p.expect_eof()?;
    Ok(stmt)
}

/// Parses a `;`-separated script. The first error aborts the whole parse.
pub fn parse_script(text: &str) -> PResult<Vec<Statement>> {
    Ok(parse_script_spanned(text)?
        .into_iter()
        .map(|s| s.statement)
        .collect())
}

pub fn parse_script_spanned(text: &str) -> PResult<Vec<Spanned>> {
    let mut p = Parser::new(tokenize(text)?);
    let mut out = Vec::new();
    loop {
        while p.eat_punct(";") {}
        if p.peek().kind == TokenKind::Eof {
            return Ok(out);
        }
        let (line, column) = (p.peek().line, p.peek().column);
        let statement = p.statement()?;
        out.push(Spanned {
            line,
            column,
            statement,
        });
        if !p.eat_punct(";") {
            p.expect_eof()?;
        }
    }
}

/// Parses a single literal value in canonical syntax.
pub fn parse_value(text: &str) -> PResult<Value> {
    let mut p = Parser::new(tokenize(text)?);
    let v = p.value()?;
    p.expect_eof()?;
    Ok(v)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

fn ctx_ident(tok: &Token, word: &str) -> bool {
    tok.kind == TokenKind::Ident && tok.text.eq_ignore_ascii_case(word)
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Token {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            line: t.line,
            column: t.column,
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: t.to_string(),
            },
        })
    }

    fn invalid<T>(&self, tok: &Token, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: tok.line,
            column: tok.column,
            kind: ParseErrorKind::Invalid(msg.into()),
        })
    }

    fn is_kw(&self, kw: &str) -> bool {
        self.peek().is_keyword(kw)
    }

    fn is_punct(&self, p: &str) -> bool {
        self.peek().is_punct(p)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.error(&[kw])
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(&[&format!("'{p}'")])
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.peek().kind == TokenKind::Eof {
            Ok(())
        } else {
            self.error(&["end of statement"])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        if self.peek().kind == TokenKind::Ident {
            Ok(self.advance().text)
        } else {
            self.error(&["identifier"])
        }
    }

    /// Map keys and pattern attribute names: identifiers, quoted strings, or
    /// reserved words read in lowercase.
    fn key(&mut self) -> PResult<String> {
        match self.peek().kind {
            TokenKind::Ident | TokenKind::StrLit => Ok(self.advance().text),
            TokenKind::Keyword => Ok(self.advance().text.to_ascii_lowercase()),
            _ => self.error(&["key"]),
        }
    }

    fn path(&mut self) -> PResult<AttrPath> {
        let mut segs = vec![self.ident()?];
        while self.is_punct(".") {
            self.advance();
            match self.peek().kind {
                TokenKind::Ident => segs.push(self.advance().text),
                TokenKind::Keyword => segs.push(self.advance().text.to_ascii_lowercase()),
                _ => return self.error(&["attribute name"]),
            }
        }
        Ok(AttrPath(segs))
    }

    fn ident_list(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.ident()?];
        while self.eat_punct(",") {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    // ---- statements ----

    fn statement(&mut self) -> PResult<Statement> {
        let t = self.peek().clone();
        if t.kind == TokenKind::Keyword {
            match t.text.as_str() {
                "CREATE" => return self.create(),
                "INIT" => return self.init(),
                "INSERT" => return self.insert(),
                "UPDATE" => return self.update(),
                "DELETE" => return self.delete(),
                "TRANSFER" => return self.transfer(),
                "SELECT" | "JOIN" | "OM" | "LEFT" | "RIGHT" => {
                    return Ok(Statement::Query(self.query(false)?))
                }
                _ => {}
            }
        }
        self.error(&[
            "CREATE", "INIT", "INSERT", "UPDATE", "DELETE", "TRANSFER", "SELECT", "JOIN",
        ])
    }

    fn model_type(&mut self) -> PResult<ModelType> {
        let t = self.peek();
        let m = if ctx_ident(t, "RELATION") {
            ModelType::Relation
        } else if ctx_ident(t, "KV") {
            ModelType::KeyValue
        } else if ctx_ident(t, "DOCUMENT") {
            ModelType::Document
        } else if ctx_ident(t, "GRAPH") {
            ModelType::Graph
        } else {
            return self.error(&["RELATION", "KV", "DOCUMENT", "GRAPH"]);
        };
        self.advance();
        Ok(m)
    }

    fn create(&mut self) -> PResult<Statement> {
        self.expect_kw("CREATE")?;
        if self.eat_kw("VIEW") {
            let vtype = if ctx_ident(self.peek(), "MULTI") {
                ViewType::Multi
            } else if ctx_ident(self.peek(), "SINGLE") {
                ViewType::Single
            } else {
                return self.error(&["MULTI", "SINGLE"]);
            };
            self.advance();
            let name = self.ident()?;
            self.expect_kw("AS")?;
            let query = self.query(false)?;
            return Ok(Statement::CreateView { vtype, name, query });
        }
        let model = self.model_type()?;
        let name = self.ident()?;
        Ok(Statement::CreateObject { model, name })
    }

    fn init(&mut self) -> PResult<Statement> {
        self.expect_kw("INIT")?;
        let model = self.model_type()?;
        let name = self.ident()?;
        self.expect_kw("WITH")?;
        let scheme = match model {
            ModelType::Relation => self.relational_scheme()?,
            ModelType::KeyValue => self.kv_scheme()?,
            ModelType::Document => ObjectScheme::Document {
                root: self.nested_block()?,
            },
            ModelType::Graph => self.graph_scheme()?,
        };
        Ok(Statement::InitObject { model, name, scheme })
    }

    fn insert(&mut self) -> PResult<Statement> {
        self.expect_kw("INSERT")?;
        self.eat_kw("INTO");
        let object = self.ident()?;
        if self.eat_kw("MULTIVAL") {
            let mut items = vec![self.insert_item()?];
            while self.eat_punct(",") {
                items.push(self.insert_item()?);
            }
            return Ok(Statement::Insert {
                object,
                source: InsertSource::Values(items),
            });
        }
        if self.starts_query() {
            let q = self.query(false)?;
            return Ok(Statement::Insert {
                object,
                source: InsertSource::Query(Box::new(q)),
            });
        }
        self.error(&["MULTIVAL", "SELECT", "JOIN"])
    }

    fn insert_item(&mut self) -> PResult<InsertItem> {
        let element = if self.peek().kind == TokenKind::Ident {
            Some(self.ident()?)
        } else {
            None
        };
        let row = if self.eat_punct("(") {
            let mut vals = Vec::new();
            if !self.is_punct(")") {
                vals.push(self.value()?);
                while self.eat_punct(",") {
                    vals.push(self.value()?);
                }
            }
            self.expect_punct(")")?;
            InsertRow::Tuple(vals)
        } else {
            InsertRow::Value(self.value()?)
        };
        Ok(InsertItem { element, row })
    }

    fn update(&mut self) -> PResult<Statement> {
        self.expect_kw("UPDATE")?;
        let objects = self.ident_list()?;
        self.expect_kw("SET")?;
        let mut assignments = vec![self.assignment()?];
        while self.eat_punct(",") {
            assignments.push(self.assignment()?);
        }
        let filter = self.where_clause()?;
        Ok(Statement::Update {
            objects,
            assignments,
            filter,
        })
    }

    fn assignment(&mut self) -> PResult<Assignment> {
        let path = self.path()?;
        // both `=` and `:=` assign
        self.eat_punct(":");
        self.expect_punct("=")?;
        let value = self.value()?;
        Ok(Assignment { path, value })
    }

    fn delete(&mut self) -> PResult<Statement> {
        self.expect_kw("DELETE")?;
        self.eat_kw("FROM");
        let objects = self.ident_list()?;
        let filter = self.where_clause()?;
        Ok(Statement::Delete { objects, filter })
    }

    fn transfer(&mut self) -> PResult<Statement> {
        self.expect_kw("TRANSFER")?;
        let source = if self.eat_punct("(") {
            let q = self.query(false)?;
            self.expect_punct(")")?;
            TransferSource::Query(Box::new(q))
        } else {
            TransferSource::Object(self.ident()?)
        };
        self.expect_kw("INTO")?;
        let target = self.ident()?;
        self.expect_kw("WITH")?;
        let mut pairs = Vec::new();
        loop {
            let s = self.path()?;
            self.expect_punct(":")?;
            let t = self.path()?;
            pairs.push((s, t));
            if !self.eat_punct(",") {
                break;
            }
        }
        Ok(Statement::Transfer {
            source,
            target,
            pairs,
        })
    }

    fn where_clause(&mut self) -> PResult<FilterExpr> {
        if self.eat_kw("WHERE") {
            self.filter()
        } else {
            Ok(FilterExpr::Null)
        }
    }

    // ---- queries ----

    fn starts_query(&self) -> bool {
        let t = self.peek();
        t.is_keyword("SELECT") || self.starts_join()
    }

    /// OM, LEFT and RIGHT are reserved, so they always open a join; a
    /// missing JOIN after them is reported at the following token.
    fn starts_join(&self) -> bool {
        let t = self.peek();
        ["JOIN", "OM", "LEFT", "RIGHT"].iter().any(|k| t.is_keyword(k))
    }

    /// `nested` marks an unparenthesized query used as a join operand, whose
    /// comma-separated clauses are limited to one element.
    fn query(&mut self, nested: bool) -> PResult<Query> {
        if self.is_kw("SELECT") {
            Ok(Query::Select(self.select(nested)?))
        } else if self.starts_join() {
            Ok(Query::Join(self.join_expr()?))
        } else {
            self.error(&["SELECT", "JOIN"])
        }
    }

    fn select(&mut self, nested: bool) -> PResult<Select> {
        self.expect_kw("SELECT")?;
        let distinct = self.eat_kw("DISTINCT");
        let mut outputs = vec![self.attr_list()?];
        while self.eat_punct("&") {
            outputs.push(self.attr_list()?);
        }
        let mut from = Vec::new();
        if self.eat_kw("FROM") {
            from.push(self.source()?);
            while !nested && self.eat_punct(",") {
                from.push(self.source()?);
            }
        }
        let filter = self.where_clause()?;
        let mut order = Vec::new();
        if self.eat_kw("ORDER") {
            self.expect_kw("BY")?;
            order.push(self.order_key()?);
            while !nested && self.eat_punct(",") {
                order.push(self.order_key()?);
            }
        }
        Ok(Select {
            distinct,
            outputs,
            from,
            filter,
            order,
        })
    }

    fn order_key(&mut self) -> PResult<OrderKey> {
        let path = self.path()?;
        let descending = if self.eat_kw("DESC") {
            true
        } else {
            self.eat_kw("ASC");
            false
        };
        Ok(OrderKey { path, descending })
    }

    fn source(&mut self) -> PResult<Source> {
        if self.starts_join() {
            Ok(Source::Join(self.join_expr()?))
        } else if self.peek().kind == TokenKind::Ident {
            Ok(Source::Object(self.ident()?))
        } else {
            self.error(&["object name", "JOIN"])
        }
    }

    fn join_expr(&mut self) -> PResult<JoinExpr> {
        let kind = if self.eat_kw("OM") {
            JoinKind::OneToMany
        } else if self.eat_kw("LEFT") {
            JoinKind::Left
        } else if self.eat_kw("RIGHT") {
            JoinKind::Right
        } else {
            JoinKind::OneToOne
        };
        self.expect_kw("JOIN")?;
        let left = self.join_operand()?;
        self.expect_punct(",")?;
        let right = self.join_operand()?;
        self.expect_kw("RULE")?;
        let rule = self.attr_list()?;
        self.expect_kw("WITH")?;
        let mut conds = vec![self.join_cond()?];
        while self.eat_kw("AND") {
            conds.push(self.join_cond()?);
        }
        Ok(JoinExpr {
            kind,
            left,
            right,
            rule,
            conds,
        })
    }

    fn join_operand(&mut self) -> PResult<JoinOperand> {
        if self.eat_punct("(") {
            let q = self.query(false)?;
            self.expect_punct(")")?;
            return Ok(match q {
                Query::Select(s) => JoinOperand::Select(Box::new(s)),
                Query::Join(j) => JoinOperand::Join(Box::new(j)),
            });
        }
        if self.is_kw("SELECT") {
            return Ok(JoinOperand::Select(Box::new(self.select(true)?)));
        }
        if self.starts_join() {
            return Ok(JoinOperand::Join(Box::new(self.join_expr()?)));
        }
        if self.peek().kind == TokenKind::Ident {
            return Ok(JoinOperand::Object(self.ident()?));
        }
        self.error(&["object name", "JOIN", "SELECT", "'('"])
    }

    fn join_cond(&mut self) -> PResult<JoinCond> {
        let left = self.path()?;
        let at = self.peek().clone();
        let op = self.cmp_op()?;
        if op == CmpOp::In {
            return self.invalid(&at, "IN is not allowed in join conditions");
        }
        let right = self.path()?;
        Ok(JoinCond { left, op, right })
    }

    fn attr_list(&mut self) -> PResult<Vec<Attribution>> {
        let mut out = vec![self.attribution()?];
        while self.eat_punct(",") {
            out.push(self.attribution()?);
        }
        Ok(out)
    }

    fn bracketed_attrs(&mut self, close: &str) -> PResult<Vec<Attribution>> {
        if self.eat_punct(close) {
            return Ok(Vec::new());
        }
        let list = self.attr_list()?;
        self.expect_punct(close)?;
        Ok(list)
    }

    fn attribution(&mut self) -> PResult<Attribution> {
        if self.eat_punct("{") {
            return Ok(Attribution::Map(self.bracketed_attrs("}")?));
        }
        if self.eat_punct("[") {
            return Ok(Attribution::List(self.bracketed_attrs("]")?));
        }
        if self.peek().kind != TokenKind::Ident {
            return self.error(&["attribute", "'{'", "'['"]);
        }
        let path = self.path()?;
        if self.eat_punct(":") {
            let value = self.attribution()?;
            return Ok(Attribution::Labeled {
                label: path,
                value: Box::new(value),
            });
        }
        Ok(Attribution::Attr(path))
    }

    // ---- filters ----

    fn filter(&mut self) -> PResult<FilterExpr> {
        self.binary_level(0)
    }

    fn binary_level(&mut self, level: usize) -> PResult<FilterExpr> {
        const LEVELS: [(&str, LogicOp); 3] =
            [("OR", LogicOp::Or), ("AND", LogicOp::And), ("XOR", LogicOp::Xor)];
        if level == LEVELS.len() {
            return self.not_expr();
        }
        let (kw, op) = LEVELS[level];
        let first = self.binary_level(level + 1)?;
        if !self.is_kw(kw) {
            return Ok(first);
        }
        let mut children = vec![first];
        while self.eat_kw(kw) {
            children.push(self.binary_level(level + 1)?);
        }
        Ok(FilterExpr::Logical { op, children })
    }

    fn not_expr(&mut self) -> PResult<FilterExpr> {
        if self.eat_kw("NOT") {
            let child = self.not_expr()?;
            return Ok(FilterExpr::Logical {
                op: LogicOp::Not,
                children: vec![child],
            });
        }
        self.primary_filter()
    }

    fn primary_filter(&mut self) -> PResult<FilterExpr> {
        if self.eat_punct("(") {
            let f = self.filter()?;
            self.expect_punct(")")?;
            return Ok(f);
        }
        if self.eat_kw("NULL") {
            return Ok(FilterExpr::Null);
        }
        if self.eat_kw("MATCH") {
            self.expect_punct("(")?;
            let object = self.ident()?;
            self.expect_punct(",")?;
            let element = if self.peek().kind == TokenKind::Ident {
                let e = self.ident()?;
                self.expect_punct(":")?;
                Some(e)
            } else {
                None
            };
            let pattern = self.pattern()?;
            self.expect_punct(")")?;
            return Ok(FilterExpr::Match {
                object,
                element,
                pattern,
            });
        }
        if self.eat_kw("PATH") {
            self.expect_punct("(")?;
            let object = self.ident()?;
            self.expect_punct(",")?;
            let steps = self.path_steps()?;
            self.expect_punct(")")?;
            return Ok(FilterExpr::Path { object, steps });
        }
        if self.peek().kind == TokenKind::Ident && self.peek_at(1).is_punct("(") {
            let name = self.ident()?;
            self.expect_punct("(")?;
            let object = self.ident()?;
            let mut args = Vec::new();
            while self.eat_punct(",") {
                args.push(self.value()?);
            }
            self.expect_punct(")")?;
            return Ok(FilterExpr::Call { name, object, args });
        }
        if self.peek().kind != TokenKind::Ident {
            return self.error(&["filter"]);
        }
        let left = self.path()?;
        let op = self.cmp_op()?;
        let right = if self.peek().kind == TokenKind::Ident {
            Operand::Path(self.path()?)
        } else {
            let at = self.peek().clone();
            let v = self.value()?;
            if op == CmpOp::In && !matches!(v, Value::List(_)) {
                return self.invalid(&at, "IN requires a list literal");
            }
            Operand::Value(v)
        };
        if op == CmpOp::In && matches!(right, Operand::Path(_)) {
            let t = self.tokens[self.pos - 1].clone();
            return self.invalid(&t, "IN requires a list literal");
        }
        Ok(FilterExpr::Cmp { left, op, right })
    }

    fn cmp_op(&mut self) -> PResult<CmpOp> {
        let t = self.peek();
        let op = if t.is_keyword("IN") {
            CmpOp::In
        } else if t.kind == TokenKind::Punct {
            match t.text.as_str() {
                "=" => CmpOp::Eq,
                "<" => CmpOp::Lt,
                ">" => CmpOp::Gt,
                "<=" => CmpOp::Le,
                ">=" => CmpOp::Ge,
                _ => return self.error(&["comparison operator"]),
            }
        } else {
            return self.error(&["comparison operator"]);
        };
        self.advance();
        Ok(op)
    }

    fn is_cmp_op(&self) -> bool {
        let t = self.peek();
        t.is_keyword("IN")
            || (t.kind == TokenKind::Punct && matches!(t.text.as_str(), "=" | "<" | ">" | "<=" | ">="))
    }

    fn pattern(&mut self) -> PResult<MatchPattern> {
        self.expect_punct("{")?;
        let mut entries: Vec<(String, PatternEntry)> = Vec::new();
        if !self.eat_punct("}") {
            loop {
                let at = self.peek().clone();
                let key = self.key()?;
                if entries.iter().any(|(k, _)| *k == key) {
                    return self.invalid(&at, format!("duplicate pattern attribute {key}"));
                }
                self.expect_punct(":")?;
                let entry = self.pattern_entry()?;
                entries.push((key, entry));
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct("}")?;
        }
        Ok(MatchPattern(entries))
    }

    fn pattern_entry(&mut self) -> PResult<PatternEntry> {
        if self.eat_kw("LIST") {
            self.expect_punct("<")?;
            let p = self.pattern()?;
            self.expect_punct(">")?;
            return Ok(PatternEntry::List(p));
        }
        if self.is_cmp_op() {
            // legacy spelling `attr: ={, value}`
            let op = self.cmp_op()?;
            self.expect_punct("{")?;
            self.expect_punct(",")?;
            let v = self.pred_value(op)?;
            self.expect_punct("}")?;
            return Ok(PatternEntry::Pred(op, v));
        }
        if self.is_punct("{") {
            let next = self.peek_at(1).clone();
            let is_pred = next.is_keyword("IN")
                || (next.kind == TokenKind::Punct
                    && matches!(next.text.as_str(), "=" | "<" | ">" | "<=" | ">="));
            if is_pred {
                self.advance();
                let op = self.cmp_op()?;
                self.expect_punct(",")?;
                let v = self.pred_value(op)?;
                self.expect_punct("}")?;
                return Ok(PatternEntry::Pred(op, v));
            }
            return Ok(PatternEntry::Sub(self.pattern()?));
        }
        self.error(&["'{'", "LIST"])
    }

    fn pred_value(&mut self, op: CmpOp) -> PResult<Value> {
        let at = self.peek().clone();
        let v = self.value()?;
        if op == CmpOp::In && !matches!(v, Value::List(_)) {
            return self.invalid(&at, "IN requires a list literal");
        }
        Ok(v)
    }

    fn path_step_parts(&mut self) -> PResult<(String, MatchPattern)> {
        let scheme = self.ident()?;
        let pattern = if self.eat_punct(":") {
            self.pattern()?
        } else {
            MatchPattern::wildcard()
        };
        Ok((scheme, pattern))
    }

    fn arrow(&mut self) -> Option<Direction> {
        match self.peek().kind {
            TokenKind::ArrowRight => {
                self.advance();
                Some(Direction::Forward)
            }
            TokenKind::ArrowLeft => {
                self.advance();
                Some(Direction::Backward)
            }
            _ => None,
        }
    }

    fn path_steps(&mut self) -> PResult<Vec<PathStep>> {
        let (scheme, pattern) = self.path_step_parts()?;
        let mut steps = vec![PathStep::Node { scheme, pattern }];
        while let Some(dir) = self.arrow() {
            let (scheme, pattern) = self.path_step_parts()?;
            let at = self.peek().clone();
            let Some(dir2) = self.arrow() else {
                return self.error(&["'->'", "'<-'"]);
            };
            if dir != dir2 {
                return self.invalid(&at, "arrows around an edge must point the same way");
            }
            steps.push(PathStep::Edge {
                scheme,
                pattern,
                direction: dir,
            });
            let (scheme, pattern) = self.path_step_parts()?;
            steps.push(PathStep::Node { scheme, pattern });
        }
        Ok(steps)
    }

    // ---- values ----

    fn value(&mut self) -> PResult<Value> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::IntLit => {
                self.advance();
                t.text
                    .parse::<i64>()
                    .map(Value::Int)
                    .or_else(|_| self.invalid(&t, "integer out of range"))
            }
            TokenKind::StrLit => {
                self.advance();
                Ok(Value::Str(t.text))
            }
            TokenKind::Keyword if t.text == "NULL" => {
                self.advance();
                Ok(Value::Null)
            }
            TokenKind::Keyword if t.text == "TRUE" => {
                self.advance();
                Ok(Value::Bool(true))
            }
            TokenKind::Keyword if t.text == "FALSE" => {
                self.advance();
                Ok(Value::Bool(false))
            }
            TokenKind::Punct if t.text == "[" => {
                self.advance();
                let mut items = Vec::new();
                if !self.eat_punct("]") {
                    items.push(self.value()?);
                    while self.eat_punct(",") {
                        items.push(self.value()?);
                    }
                    self.expect_punct("]")?;
                }
                Ok(Value::List(items))
            }
            TokenKind::Punct if t.text == "{" => {
                self.advance();
                let mut m = ValueMap::new();
                if !self.eat_punct("}") {
                    loop {
                        let at = self.peek().clone();
                        let k = self.key()?;
                        self.expect_punct(":")?;
                        let v = self.value()?;
                        if m.insert(k.clone(), v).is_some() {
                            return self.invalid(&at, format!("duplicate map key {k}"));
                        }
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                    self.expect_punct("}")?;
                }
                Ok(Value::Map(m))
            }
            _ => self.error(&["value"]),
        }
    }

    // ---- schemes ----

    fn type_tag(&mut self) -> PResult<TypeTag> {
        if self.eat_kw("LIST") {
            self.expect_punct("<")?;
            let inner = self.type_tag()?;
            self.expect_punct(">")?;
            return Ok(TypeTag::List(Box::new(inner)));
        }
        let t = self.peek();
        if t.kind == TokenKind::Ident {
            let tag = match t.text.to_ascii_uppercase().as_str() {
                "INT" | "INTEGER" => Some(TypeTag::Int),
                "STRING" => Some(TypeTag::Str),
                "BOOL" | "BOOLEAN" => Some(TypeTag::Bool),
                "MAP" => Some(TypeTag::Map),
                "ANY" => Some(TypeTag::Any),
                _ => None,
            };
            if let Some(tag) = tag {
                self.advance();
                return Ok(tag);
            }
        }
        self.error(&["INT", "STRING", "BOOL", "LIST", "MAP", "ANY"])
    }

    fn constraint(&mut self) -> PResult<Constraint> {
        if self.eat_kw("PRIMARY") {
            return Ok(Constraint::Primary);
        }
        if self.eat_kw("FOREIGN") {
            if self.peek().kind == TokenKind::Ident {
                return Ok(Constraint::Foreign(Some(self.path()?.0)));
            }
            return Ok(Constraint::Foreign(None));
        }
        if self.eat_kw("NOT") {
            self.expect_kw("NULL")?;
            return Ok(Constraint::NotNull);
        }
        if ctx_ident(self.peek(), "NOT_NULL") {
            self.advance();
            return Ok(Constraint::NotNull);
        }
        Ok(Constraint::None)
    }

    fn triple(&mut self) -> PResult<Triple> {
        self.expect_punct("(")?;
        let name = self.ident()?;
        self.expect_punct(",")?;
        let ty = self.type_tag()?;
        let constraint = if self.eat_punct(",") {
            self.constraint()?
        } else {
            Constraint::None
        };
        self.expect_punct(")")?;
        Ok(Triple { name, ty, constraint })
    }

    fn relational_scheme(&mut self) -> PResult<ObjectScheme> {
        let braced = self.eat_punct("{");
        let mut columns = vec![self.triple()?];
        while self.eat_punct(",") {
            columns.push(self.triple()?);
        }
        if braced {
            self.expect_punct("}")?;
        }
        Ok(ObjectScheme::Relational { columns })
    }

    fn kv_scheme(&mut self) -> PResult<ObjectScheme> {
        let braced = self.eat_punct("{");
        let key = self.triple()?;
        self.expect_punct(",")?;
        let value = self.triple()?;
        if braced {
            self.expect_punct("}")?;
        }
        Ok(ObjectScheme::KeyValue { key, value })
    }

    fn nested_block(&mut self) -> PResult<Vec<NestedTriple>> {
        self.expect_punct("{")?;
        let mut out = Vec::new();
        if !self.eat_punct("}") {
            out.push(self.nested()?);
            while self.eat_punct(",") {
                out.push(self.nested()?);
            }
            self.expect_punct("}")?;
        }
        Ok(out)
    }

    fn nested(&mut self) -> PResult<NestedTriple> {
        if self.is_punct("(") {
            return Ok(NestedTriple::Leaf(self.triple()?));
        }
        if self.peek().kind != TokenKind::Ident {
            return self.error(&["'('", "attribute name"]);
        }
        let name = self.ident()?;
        self.expect_punct(":")?;
        if self.eat_kw("LIST") {
            self.expect_kw("OF")?;
            let element = self.nested_block()?;
            return Ok(NestedTriple::ListNode { name, element });
        }
        let children = self.nested_block()?;
        Ok(NestedTriple::MapNode { name, children })
    }

    fn graph_scheme(&mut self) -> PResult<ObjectScheme> {
        if self.eat_kw("LIST") {
            self.expect_kw("OF")?;
        }
        self.expect_punct("[")?;
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        if !self.eat_punct("]") {
            loop {
                let name = self.ident()?;
                self.expect_punct("{")?;
                if self.eat_kw("FROM") {
                    self.expect_punct(":")?;
                    let from = self.ident()?;
                    self.expect_punct(",")?;
                    if !ctx_ident(self.peek(), "TO") {
                        return self.error(&["TO"]);
                    }
                    self.advance();
                    self.expect_punct(":")?;
                    let to = self.ident()?;
                    let mut properties = Vec::new();
                    while self.eat_punct(",") {
                        properties.push(self.nested()?);
                    }
                    self.expect_punct("}")?;
                    edges.push(EdgeScheme {
                        name,
                        from,
                        to,
                        properties,
                    });
                } else {
                    let mut properties = Vec::new();
                    if !self.eat_punct("}") {
                        properties.push(self.nested()?);
                        while self.eat_punct(",") {
                            properties.push(self.nested()?);
                        }
                        self.expect_punct("}")?;
                    }
                    nodes.push(NodeScheme { name, properties });
                }
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct("]")?;
        }
        Ok(ObjectScheme::Graph { nodes, edges })
    }
}
