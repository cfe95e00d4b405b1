//! Boolean lexical queries in two database dialects.
//!
//! `TITLE-ABS-KEY(...)` with `AND NOT` (scopus-like) and `TS=...` with a
//! binary `NOT` (wos-like). Precedence is NOT > AND > OR. Terms are
//! wildcard patterns where `*` matches any run of characters inside one
//! token; several tokens form a phrase that must appear contiguously in a
//! single field value.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    tokenize_title, Corpus, DocType, FieldIndex, JournalId, JournalRegistry, JournalStatus, PubId, SearchField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dialect {
    #[serde(rename = "scopus-like")]
    ScopusLike,
    #[serde(rename = "wos-like")]
    WosLike,
}

impl Dialect {
    pub fn scope_fields(self) -> FieldSet {
        match self {
            Dialect::ScopusLike => FieldSet::TITLE_ABS_KEY,
            Dialect::WosLike => FieldSet::TOPIC,
        }
    }
}

impl From<crate::corpus::Origin> for Dialect {
    fn from(o: crate::corpus::Origin) -> Self {
        match o {
            crate::corpus::Origin::ScopusLike => Dialect::ScopusLike,
            crate::corpus::Origin::WosLike => Dialect::WosLike,
        }
    }
}

/// Set of searchable fields as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSet(u8);

impl FieldSet {
    pub const TITLE_ABS_KEY: FieldSet = FieldSet(0b0111);
    pub const TOPIC: FieldSet = FieldSet(0b1111);

    pub fn of(fields: &[SearchField]) -> Self {
        FieldSet(fields.iter().fold(0, |m, f| m | (1 << f.slot())))
    }

    pub fn contains(self, f: SearchField) -> bool {
        self.0 & (1 << f.slot()) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = SearchField> {
        SearchField::ALL.into_iter().filter(move |f| self.contains(*f))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Scope { fields: FieldSet, child: Box<Query> },
    Term(String),
    Phrase(Vec<String>),
    And(Vec<Query>),
    Or(Vec<Query>),
    Not(Box<Query>, Box<Query>),
    Ref { label: String, target: Arc<Query> },
}

impl Query {
    pub fn term(p: &str) -> Query {
        Query::Term(p.to_lowercase())
    }

    pub fn scoped(fields: FieldSet, child: Query) -> Query {
        Query::Scope {
            fields,
            child: Box::new(child),
        }
    }

    pub fn not(pos: Query, neg: Query) -> Query {
        Query::Not(Box::new(pos), Box::new(neg))
    }

    /// Canonical text: every compound node is parenthesized so that
    /// parsing the output returns the same tree.
    pub fn to_text(&self, dialect: Dialect) -> String {
        let mut s = String::new();
        self.write(dialect, &mut s);
        s
    }

    fn write(&self, d: Dialect, out: &mut String) {
        match self {
            Query::Scope { child, .. } => {
                out.push_str(match d {
                    Dialect::ScopusLike => "TITLE-ABS-KEY(",
                    Dialect::WosLike => "TS=(",
                });
                child.write(d, out);
                out.push(')');
            }
            Query::Term(p) => out.push_str(p),
            Query::Phrase(ts) => {
                out.push('"');
                out.push_str(&ts.join(" "));
                out.push('"');
            }
            Query::And(cs) | Query::Or(cs) => {
                let op = if matches!(self, Query::And(_)) { " AND " } else { " OR " };
                out.push('(');
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(op);
                    }
                    c.write(d, out);
                }
                out.push(')');
            }
            Query::Not(p, n) => {
                out.push('(');
                p.write(d, out);
                out.push_str(match d {
                    Dialect::ScopusLike => " AND NOT ",
                    Dialect::WosLike => " NOT ",
                });
                n.write(d, out);
                out.push(')');
            }
            Query::Ref { label, .. } => out.push_str(label),
        }
    }

    /// Labels referenced directly or transitively.
    pub fn references(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut BTreeSet<String>) {
        match self {
            Query::Scope { child, .. } => child.collect_refs(out),
            Query::Term(_) | Query::Phrase(_) => {}
            Query::And(cs) | Query::Or(cs) => cs.iter().for_each(|c| c.collect_refs(out)),
            Query::Not(p, n) => {
                p.collect_refs(out);
                n.collect_refs(out);
            }
            Query::Ref { label, target } => {
                out.insert(label.clone());
                target.collect_refs(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("unknown sub-query `{label}` at byte {offset}")]
    UnknownLabel { label: String, offset: usize },
    #[error("search term outside a field scope at byte {offset}")]
    TermOutsideScope { offset: usize },
    #[error("field scope nested inside another scope at byte {offset}")]
    NestedScope { offset: usize },
    #[error("sub-query reference inside a field scope at byte {offset}")]
    RefInsideScope { offset: usize },
    #[error("empty query")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseWarning {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept known irregularities (stray `)`, `TS(` without `=`, the other
    /// dialect's NOT spelling) and report them as warnings.
    pub lenient: bool,
}

pub type QueryEnv = BTreeMap<String, Arc<Query>>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Eq,
    And,
    Or,
    Not,
    Label(String),
    Word(String),
    Quoted(String),
    Eof,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    start: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Eq => "'='".into(),
        Tok::And => "AND".into(),
        Tok::Or => "OR".into(),
        Tok::Not => "NOT".into(),
        Tok::Label(l) => format!("label {l}"),
        Tok::Word(w) => format!("word {w:?}"),
        Tok::Quoted(q) => format!("phrase \"{q}\""),
        Tok::Eof => "end of input".into(),
    }
}

fn is_quote(c: char) -> bool {
    matches!(c, '"' | '\u{201C}' | '\u{201D}')
}

fn lex(src: &str) -> Result<Vec<Lexed>, QueryError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let tok = match c {
            '(' => {
                it.next();
                Tok::LParen
            }
            ')' => {
                it.next();
                Tok::RParen
            }
            '=' => {
                it.next();
                Tok::Eq
            }
            c if is_quote(c) => {
                it.next();
                let mut body = String::new();
                let mut closed = false;
                for (_, c) in it.by_ref() {
                    if is_quote(c) {
                        closed = true;
                        break;
                    }
                    body.push(c);
                }
                if !closed {
                    return Err(QueryError::Syntax {
                        offset: src.len(),
                        expected: "closing '\"'".into(),
                        found: "end of input".into(),
                    });
                }
                Tok::Quoted(body)
            }
            _ => {
                let mut word = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '=') || is_quote(c) {
                        break;
                    }
                    word.push(c);
                    it.next();
                }
                match word.as_str() {
                    "AND" => Tok::And,
                    "OR" => Tok::Or,
                    "NOT" => Tok::Not,
                    w if w.len() > 1 && w.starts_with('#') && w[1..].chars().all(|c| c.is_ascii_digit()) => {
                        Tok::Label(word)
                    }
                    _ => Tok::Word(word),
                }
            }
        };
        out.push(Lexed { tok, start: i });
    }
    out.push(Lexed {
        tok: Tok::Eof,
        start: src.len(),
    });
    Ok(out)
}

/// Pattern tokens of a query word: split on anything other than
/// alphanumerics and `*`, lower-cased.
pub fn pattern_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '*'))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    dialect: Dialect,
    env: &'a QueryEnv,
    opts: ParseOptions,
    scope_depth: usize,
    warnings: Vec<ParseWarning>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].start
    }

    fn bump(&mut self) -> Lexed {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> QueryError {
        QueryError::Syntax {
            offset: self.offset(),
            expected: expected.into(),
            found: describe(self.peek()),
        }
    }

    fn warn(&mut self, offset: usize, message: impl Into<String>) {
        self.warnings.push(ParseWarning {
            offset,
            message: message.into(),
        });
    }

    fn parse_or(&mut self) -> Result<Query, QueryError> {
        let mut items = vec![self.parse_and()?];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.parse_and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Query::Or(items)
        })
    }

    fn parse_and(&mut self) -> Result<Query, QueryError> {
        let mut items = vec![self.parse_not()?];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.parse_not()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Query::And(items)
        })
    }

    fn parse_not(&mut self) -> Result<Query, QueryError> {
        let mut left = self.parse_primary()?;
        loop {
            let at = self.offset();
            let and_not = *self.peek() == Tok::And && *self.peek2() == Tok::Not;
            let bare_not = *self.peek() == Tok::Not;
            if !(and_not || bare_not) {
                break;
            }
            let native = match self.dialect {
                Dialect::ScopusLike => and_not,
                Dialect::WosLike => bare_not,
            };
            if !native {
                if !self.opts.lenient {
                    return Err(self.err(match self.dialect {
                        Dialect::ScopusLike => "AND NOT (bare NOT is not scopus-like syntax)",
                        Dialect::WosLike => "NOT without AND (AND NOT is not wos-like syntax)",
                    }));
                }
                self.warn(at, "negation spelled in the other dialect's form");
            }
            if and_not {
                self.bump();
            }
            self.bump();
            let right = self.parse_primary()?;
            left = Query::not(left, right);
        }
        Ok(left)
    }

    fn enter_scope(&mut self, at: usize, fields: FieldSet) -> Result<Query, QueryError> {
        if self.scope_depth > 0 {
            return Err(QueryError::NestedScope { offset: at });
        }
        self.scope_depth += 1;
        let child = self.parse_primary();
        self.scope_depth -= 1;
        Ok(Query::scoped(fields, child?))
    }

    fn parse_primary(&mut self) -> Result<Query, QueryError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.parse_or()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.err("')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Label(label) => {
                if self.scope_depth > 0 {
                    return Err(QueryError::RefInsideScope { offset: at });
                }
                self.bump();
                match self.env.get(&label) {
                    Some(t) => Ok(Query::Ref {
                        label,
                        target: Arc::clone(t),
                    }),
                    None => Err(QueryError::UnknownLabel { label, offset: at }),
                }
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("TITLE-ABS-KEY") => {
                if self.dialect != Dialect::ScopusLike {
                    return Err(self.err("TS= (TITLE-ABS-KEY is scopus-like syntax)"));
                }
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.err("'(' after TITLE-ABS-KEY"));
                }
                self.enter_scope(at, FieldSet::TITLE_ABS_KEY)
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("TS") && matches!(self.peek2(), Tok::Eq | Tok::LParen) => {
                if self.dialect != Dialect::WosLike {
                    return Err(self.err("TITLE-ABS-KEY( (TS= is wos-like syntax)"));
                }
                self.bump();
                if *self.peek() == Tok::Eq {
                    self.bump();
                } else if self.opts.lenient {
                    self.warn(at, "TS( without '='");
                } else {
                    return Err(self.err("'=' after TS"));
                }
                self.enter_scope(at, FieldSet::TOPIC)
            }
            Tok::Word(w) | Tok::Quoted(w) => {
                if self.scope_depth == 0 {
                    return Err(QueryError::TermOutsideScope { offset: at });
                }
                self.bump();
                let mut toks = pattern_tokens(&w);
                match toks.len() {
                    0 => Err(QueryError::Syntax {
                        offset: at,
                        expected: "a term with at least one letter, digit or '*'".into(),
                        found: format!("{w:?}"),
                    }),
                    1 => Ok(Query::Term(toks.pop().unwrap())),
                    _ => Ok(Query::Phrase(toks)),
                }
            }
            _ => Err(self.err("term, phrase, '(' or sub-query label")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub query: Query,
    pub warnings: Vec<ParseWarning>,
}

/// Parse one query expression. A leading `#n =` definition prefix is skipped.
pub fn parse_query(text: &str, dialect: Dialect, env: &QueryEnv) -> Result<Query, QueryError> {
    parse_query_with(text, dialect, env, ParseOptions::default()).map(|p| p.query)
}

pub fn parse_query_with(
    text: &str,
    dialect: Dialect,
    env: &QueryEnv,
    opts: ParseOptions,
) -> Result<Parsed, QueryError> {
    let mut toks = lex(text)?;
    if toks.len() >= 3 && matches!(toks[0].tok, Tok::Label(_)) && toks[1].tok == Tok::Eq {
        toks.drain(..2);
    }
    if toks.len() == 1 {
        return Err(QueryError::Empty);
    }
    let mut warnings = Vec::new();
    // A `)` with no open group closes an implicit group that starts at the
    // beginning of the expression.
    let mut depth = 0usize;
    let mut stray = 0usize;
    for t in &toks {
        match t.tok {
            Tok::LParen => depth += 1,
            Tok::RParen if depth == 0 => {
                if !opts.lenient {
                    return Err(QueryError::Syntax {
                        offset: t.start,
                        expected: "operator or end of input".into(),
                        found: "unmatched ')'".into(),
                    });
                }
                stray += 1;
                warnings.push(ParseWarning {
                    offset: t.start,
                    message: "unmatched ')' closes a group opened at the start".into(),
                });
            }
            Tok::RParen => depth -= 1,
            _ => {}
        }
    }
    let first = toks[0].start;
    for _ in 0..stray {
        toks.insert(
            0,
            Lexed {
                tok: Tok::LParen,
                start: first,
            },
        );
    }
    let mut p = Parser {
        toks,
        pos: 0,
        dialect,
        env,
        opts,
        scope_depth: 0,
        warnings,
    };
    let query = p.parse_or()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("operator or end of input"));
    }
    Ok(Parsed {
        query,
        warnings: p.warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryFileError {
    #[error("line {line}: text before the first label")]
    Orphan { line: usize },
    #[error("line {line}: label {label} defined twice")]
    Duplicate { line: usize, label: String },
    #[error("line {line} ({label}): {source}")]
    Query {
        line: usize,
        label: String,
        #[source]
        source: QueryError,
    },
}

#[derive(Debug, Clone)]
pub struct QueryFile {
    pub dialect: Dialect,
    pub definitions: Vec<(String, Arc<Query>)>,
    pub final_query: Option<Arc<Query>>,
    pub warnings: Vec<(String, ParseWarning)>,
}

impl QueryFile {
    pub fn get(&self, label: &str) -> Option<&Arc<Query>> {
        if label.eq_ignore_ascii_case("FINAL QUERY") || label.eq_ignore_ascii_case("final") {
            return self.final_query.as_ref();
        }
        self.definitions.iter().find(|(l, _)| l == label).map(|(_, q)| q)
    }

    /// The FINAL QUERY, or the last definition when there is none.
    pub fn root(&self) -> Option<&Arc<Query>> {
        self.final_query
            .as_ref()
            .or_else(|| self.definitions.last().map(|(_, q)| q))
    }

    pub fn env(&self) -> QueryEnv {
        self.definitions.iter().cloned().collect()
    }
}

const FINAL: &str = "FINAL QUERY";

fn split_label(line: &str) -> Option<(&str, &str)> {
    let rest = line.strip_prefix('#')?;
    let n = rest.chars().take_while(char::is_ascii_digit).count();
    if n == 0 {
        return None;
    }
    Some((&line[..n + 1], &line[n + 1..]))
}

fn starts_with_operator(s: &str) -> bool {
    ["AND", "OR", "NOT"].iter().any(|op| {
        s.strip_prefix(op)
            .is_some_and(|r| r.is_empty() || r.starts_with(|c: char| c.is_whitespace() || c == '('))
    })
}

/// Parse a query file: statements labelled `#n` (body inline, after `=`,
/// or on the following lines) and an optional `FINAL QUERY` root. Lines
/// that start with a label followed by an operator continue the previous
/// statement. `//` starts a comment.
pub fn parse_query_file(text: &str, dialect: Dialect, opts: ParseOptions) -> Result<QueryFile, QueryFileError> {
    let mut stmts: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix(FINAL) {
            stmts.push((lineno, FINAL.to_string(), body.trim().to_string()));
            continue;
        }
        if let Some((label, rest)) = split_label(line) {
            let rest = rest.trim_start();
            if let Some(body) = rest.strip_prefix('=') {
                stmts.push((lineno, label.to_string(), body.trim().to_string()));
                continue;
            }
            if !starts_with_operator(rest) {
                stmts.push((lineno, label.to_string(), rest.to_string()));
                continue;
            }
        }
        match stmts.last_mut() {
            Some((_, _, body)) => {
                if !body.is_empty() {
                    body.push('\n');
                }
                body.push_str(line);
            }
            None => return Err(QueryFileError::Orphan { line: lineno }),
        }
    }
    let mut file = QueryFile {
        dialect,
        definitions: Vec::new(),
        final_query: None,
        warnings: Vec::new(),
    };
    let mut env = QueryEnv::new();
    for (line, label, body) in stmts {
        if env.contains_key(&label) || (label == FINAL && file.final_query.is_some()) {
            return Err(QueryFileError::Duplicate { line, label });
        }
        let parsed = parse_query_with(&body, dialect, &env, opts).map_err(|source| QueryFileError::Query {
            line,
            label: label.clone(),
            source,
        })?;
        for w in parsed.warnings {
            log::warn!("{label} (line {line}): {} at byte {}", w.message, w.offset);
            file.warnings.push((label.clone(), w));
        }
        let q = Arc::new(parsed.query);
        if label == FINAL {
            file.final_query = Some(q);
        } else {
            env.insert(label.clone(), Arc::clone(&q));
            file.definitions.push((label, q));
        }
    }
    Ok(file)
}

/// `*` matches any run of characters (possibly empty); everything else is literal.
pub fn wildcard_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if pi < p.len() && p[pi] == t[ti] {
            pi += 1;
            ti += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

fn matching_tokens<'i>(
    index: &'i FieldIndex,
    pattern: &'i str,
) -> Box<dyn Iterator<Item = &'i Vec<crate::corpus::Posting>> + 'i> {
    match pattern.find('*') {
        None => Box::new(index.tokens.get(pattern).into_iter()),
        Some(0) => Box::new(
            index
                .tokens
                .iter()
                .filter(move |(t, _)| wildcard_match(pattern, t))
                .map(|(_, v)| v),
        ),
        Some(n) => {
            let prefix = &pattern[..n];
            Box::new(
                index
                    .tokens
                    .range::<str, _>((std::ops::Bound::Included(prefix), std::ops::Bound::Unbounded))
                    .take_while(move |(t, _)| t.starts_with(prefix))
                    .filter(move |(t, _)| wildcard_match(pattern, t))
                    .map(|(_, v)| v),
            )
        }
    }
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalFilters {
    /// Inclusive publication-year range.
    #[serde(default)]
    pub years: Option<(i32, i32)>,
    #[serde(default)]
    pub doc_types: Option<BTreeSet<DocType>>,
}

impl EvalFilters {
    pub fn admits(&self, year: i32, doc_type: DocType) -> bool {
        self.years.is_none_or(|(a, b)| year >= a && year <= b)
            && self.doc_types.as_ref().is_none_or(|d| d.contains(&doc_type))
    }
}

struct Evaluator<'c> {
    corpus: &'c Corpus,
    memo: HashMap<(*const Query, FieldSet), Arc<Vec<u32>>>,
}

impl<'c> Evaluator<'c> {
    fn eval(&mut self, q: &Query, scope: FieldSet) -> Arc<Vec<u32>> {
        match q {
            Query::Scope { fields, child } => self.eval(child, *fields),
            Query::Term(p) => Arc::new(self.term_docs(p, scope)),
            Query::Phrase(ps) => Arc::new(self.phrase_docs(ps, scope)),
            Query::And(cs) => {
                let mut acc: Option<Vec<u32>> = None;
                for c in cs {
                    let r = self.eval(c, scope);
                    acc = Some(match acc {
                        None => r.as_ref().clone(),
                        Some(a) => intersect(&a, &r),
                    });
                    if acc.as_ref().is_some_and(Vec::is_empty) {
                        break;
                    }
                }
                Arc::new(acc.unwrap_or_default())
            }
            Query::Or(cs) => {
                let mut acc = Vec::new();
                for c in cs {
                    acc = union(&acc, &self.eval(c, scope));
                }
                Arc::new(acc)
            }
            Query::Not(p, n) => {
                let a = self.eval(p, scope);
                if a.is_empty() {
                    return a;
                }
                Arc::new(difference(&a, &self.eval(n, scope)))
            }
            Query::Ref { target, .. } => {
                let key = (Arc::as_ptr(target), scope);
                if let Some(r) = self.memo.get(&key) {
                    return Arc::clone(r);
                }
                let r = self.eval(target, scope);
                self.memo.insert(key, Arc::clone(&r));
                r
            }
        }
    }

    fn term_docs(&self, pattern: &str, scope: FieldSet) -> Vec<u32> {
        let mut docs = Vec::new();
        for f in scope.iter() {
            for postings in matching_tokens(self.corpus.index().field(f), pattern) {
                docs.extend(postings.iter().map(|p| p.doc));
            }
        }
        docs.sort_unstable();
        docs.dedup();
        docs
    }

    fn phrase_docs(&self, parts: &[String], scope: FieldSet) -> Vec<u32> {
        let mut docs = Vec::new();
        for f in scope.iter() {
            let index = self.corpus.index().field(f);
            let mut starts: HashSet<(u32, u32, u32)> = matching_tokens(index, &parts[0])
                .flatten()
                .map(|p| (p.doc, p.value, p.pos))
                .collect();
            for (i, part) in parts.iter().enumerate().skip(1) {
                if starts.is_empty() {
                    break;
                }
                let i = i as u32;
                let next: HashSet<(u32, u32, u32)> = matching_tokens(index, part)
                    .flatten()
                    .filter(|p| p.pos >= i)
                    .map(|p| (p.doc, p.value, p.pos - i))
                    .collect();
                starts.retain(|s| next.contains(s));
            }
            docs.extend(starts.into_iter().map(|(d, _, _)| d));
        }
        docs.sort_unstable();
        docs.dedup();
        docs
    }
}

/// Matching documents as sorted corpus positions.
pub fn evaluate_docs(q: &Query, corpus: &Corpus, filters: &EvalFilters) -> Vec<u32> {
    let mut ev = Evaluator {
        corpus,
        memo: HashMap::new(),
    };
    let docs = ev.eval(q, FieldSet::TOPIC);
    let recs = corpus.records();
    docs.iter()
        .copied()
        .filter(|&d| {
            let r = &recs[d as usize];
            filters.admits(r.year, r.doc_type)
        })
        .collect()
}

pub fn evaluate(q: &Query, corpus: &Corpus, filters: &EvalFilters) -> BTreeSet<PubId> {
    let recs = corpus.records();
    evaluate_docs(q, corpus, filters)
        .into_iter()
        .map(|d| recs[d as usize].pub_id.clone())
        .collect()
}

/// Journals whose canonical title or an alias has a token matching `pattern`.
pub fn title_prefix_search(
    registry: &JournalRegistry,
    pattern: &str,
    statuses: &BTreeSet<JournalStatus>,
) -> BTreeSet<JournalId> {
    let pattern = pattern.to_lowercase();
    registry
        .iter()
        .filter(|j| statuses.contains(&j.status))
        .filter(|j| {
            j.titles()
                .any(|t| tokenize_title(t).iter().any(|tok| wildcard_match(&pattern, tok)))
        })
        .map(|j| j.journal_id.clone())
        .collect()
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(Dialect::WosLike))
    }
}
