//! The line-oriented spec format: sections in brackets followed by
//! `key = value` entries. See `docs/spec-format.md` for the grammar.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use graded_core::superalg::{integer, rational, Parity, Rational, SuperPolynomial, Variable};

/// 1-based line and column of a token.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("{pos}: syntax error: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: unknown variable `{name}`")]
    UnknownVariable { pos: Pos, name: String },
    #[error("{pos}: weight arity mismatch: expected {expected} components, found {found}")]
    WeightArityMismatch { pos: Pos, expected: usize, found: usize },
}

impl SpecError {
    pub fn pos(&self) -> Pos {
        match self {
            SpecError::Syntax { pos, .. }
            | SpecError::UnknownVariable { pos, .. }
            | SpecError::WeightArityMismatch { pos, .. } => *pos,
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        pos,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Var { name: String, pos: Pos },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(n) if !n.is_integer() => 2,
            Expr::Num(_) | Expr::Var { .. } => 5,
        }
    }

    /// Names and positions of every variable occurrence, left to right.
    pub fn variables(&self) -> Vec<(&str, Pos)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<(&'a str, Pos)>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var { name, pos } => out.push((name, *pos)),
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Evaluates with `lookup` resolving variable names.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Variable>) -> Result<SuperPolynomial, SpecError> {
        Ok(match self {
            Expr::Num(n) => SuperPolynomial::constant(n.clone()),
            Expr::Var { name, pos } => match lookup(name) {
                Some(v) => SuperPolynomial::var(&v),
                None => {
                    return Err(SpecError::UnknownVariable {
                        pos: *pos,
                        name: name.clone(),
                    })
                }
            },
            Expr::Neg(e) => e.eval(lookup)?.scale(&integer(-1)),
            Expr::Add(a, b) => &a.eval(lookup)? + &b.eval(lookup)?,
            Expr::Sub(a, b) => &a.eval(lookup)? - &b.eval(lookup)?,
            Expr::Mul(a, b) => &a.eval(lookup)? * &b.eval(lookup)?,
            Expr::Pow(e, n) => e.eval(lookup)?.pow(*n),
        })
    }

    /// The value of a constant integer expression.
    pub fn as_integer(&self) -> Option<i64> {
        let p = self.eval(&|_| None).ok()?;
        let c = p.constant_term();
        if !p.is_constant() || !c.is_integer() {
            return None;
        }
        c.to_integer().try_into().ok()
    }

    fn clear_positions(&mut self) {
        match self {
            Expr::Num(_) => {}
            Expr::Var { pos, .. } => *pos = Pos::default(),
            Expr::Neg(e) | Expr::Pow(e, _) => e.clear_positions(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.clear_positions();
                b.clear_positions();
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, tight: bool| {
            if tight {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        let p = self.precedence();
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < p)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                wrap(f, a, a.precedence() < p)?;
                f.write_str(match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    _ => "*",
                })?;
                wrap(f, b, b.precedence() <= p)
            }
            Expr::Pow(e, n) => {
                wrap(f, e, e.precedence() <= p)?;
                write!(f, "^{n}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Index {
    Int(i64),
    Name(String),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Int(n) => write!(f, "{n}"),
            Index::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Key {
    pub name: String,
    pub indices: Vec<Index>,
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.indices.is_empty() {
            let parts: Vec<String> = self.indices.iter().map(Index::to_string).collect();
            write!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Coordinate { weight: Vec<u32>, parity: Parity },
    Expr(Expr),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Coordinate { weight, parity } => {
                if weight.len() == 1 {
                    write!(f, "{}", weight[0])?;
                } else {
                    let parts: Vec<String> = weight.iter().map(u32::to_string).collect();
                    write!(f, "({})", parts.join(", "))?;
                }
                if parity.is_odd() {
                    f.write_str(" odd")?;
                }
                Ok(())
            }
            Value::Expr(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: Key,
    pub value: Value,
    pub pos: Pos,
}

impl Entry {
    pub fn expr(&self) -> &Expr {
        match &self.value {
            Value::Expr(e) => e,
            Value::Coordinate { .. } => unreachable!("chart entries only appear in chart sections"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionKind {
    Chart(String),
    Transition(String, String),
    Inverse(String, String),
    Field,
    Structure,
    Section(String),
    Task,
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionKind::Chart(n) => write!(f, "[chart {n}]"),
            SectionKind::Transition(a, b) => write!(f, "[transition {a} -> {b}]"),
            SectionKind::Inverse(a, b) => write!(f, "[inverse {a} -> {b}]"),
            SectionKind::Field => f.write_str("[field]"),
            SectionKind::Structure => f.write_str("[structure]"),
            SectionKind::Section(n) => write!(f, "[section {n}]"),
            SectionKind::Task => f.write_str("[task]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub kind: SectionKind,
    pub pos: Pos,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub sections: Vec<Section>,
}

impl Document {
    pub fn charts(&self) -> impl Iterator<Item = &Section> {
        self.sections.iter().filter(|s| matches!(s.kind, SectionKind::Chart(_)))
    }

    pub fn find(&self, kind: &SectionKind) -> Option<&Section> {
        self.sections.iter().find(|s| &s.kind == kind)
    }

    pub fn sections_named(&self) -> impl Iterator<Item = (&str, &Section)> {
        self.sections.iter().filter_map(|s| match &s.kind {
            SectionKind::Section(n) => Some((n.as_str(), s)),
            _ => None,
        })
    }

    /// Grading arity of the declared coordinates, 1 when there are none.
    pub fn arity(&self) -> usize {
        self.charts()
            .flat_map(|s| &s.entries)
            .find_map(|e| match &e.value {
                Value::Coordinate { weight, .. } => Some(weight.len()),
                Value::Expr(_) => None,
            })
            .unwrap_or(1)
    }

    /// Canonical text form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", s.kind);
            for e in &s.entries {
                let _ = writeln!(out, "{} = {}", e.key, e.value);
            }
        }
        out
    }

    /// The same document with every position reset, for structural
    /// comparison of documents parsed from different texts.
    pub fn without_positions(&self) -> Document {
        let mut d = self.clone();
        for s in &mut d.sections {
            s.pos = Pos::default();
            for e in &mut s.entries {
                e.pos = Pos::default();
                if let Value::Expr(x) = &mut e.value {
                    x.clear_positions();
                }
            }
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    Arrow,
}

fn tokenize(text: &str, line: usize, offset: usize) -> Result<Vec<(Tok, Pos)>, SpecError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line,
            column: offset + i + 1,
        };
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse().map_err(|_| syntax(pos, format!("integer literal {digits} is too large")))?;
            out.push((Tok::Int(n), pos));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, pos));
            i += 2;
        } else if "+-*^/()[],=".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SpecError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), SpecError> {
        match self.next() {
            Some((Tok::Ident(s), p)) => Ok((s, p)),
            _ => {
                self.at -= 1;
                Err(syntax(self.pos(), format!("expected {what}")))
            }
        }
    }

    fn int(&mut self) -> Result<i64, SpecError> {
        match self.next() {
            Some((Tok::Int(n), _)) => Ok(n),
            _ => {
                self.at -= 1;
                Err(syntax(self.pos(), "expected an integer"))
            }
        }
    }

    fn finish(&self) -> Result<(), SpecError> {
        if self.at < self.toks.len() {
            Err(syntax(self.pos(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Expr, SpecError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SpecError> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, SpecError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let pos = self.pos();
            let n = self.int()?;
            let n = u32::try_from(n).map_err(|_| syntax(pos, "exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SpecError> {
        let pos = self.pos();
        match self.next() {
            Some((Tok::Int(n), _)) => {
                if self.eat('/') {
                    let dpos = self.pos();
                    let d = self.int()?;
                    if d == 0 {
                        return Err(syntax(dpos, "zero denominator"));
                    }
                    Ok(Expr::Num(rational(n, d)))
                } else {
                    Ok(Expr::Num(integer(n)))
                }
            }
            Some((Tok::Ident(name), p)) => Ok(Expr::Var { name, pos: p }),
            Some((Tok::Sym('('), _)) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(syntax(pos, "expected a number, a variable or `(`")),
        }
    }

    fn key(&mut self) -> Result<Key, SpecError> {
        let (name, _) = self.ident("a key")?;
        let mut indices = Vec::new();
        if self.eat('[') {
            loop {
                match self.next() {
                    Some((Tok::Int(n), _)) => indices.push(Index::Int(n)),
                    Some((Tok::Ident(s), _)) => indices.push(Index::Name(s)),
                    _ => {
                        self.at -= 1;
                        return Err(syntax(self.pos(), "expected an index"));
                    }
                }
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(']')?;
        }
        Ok(Key { name, indices })
    }

    fn coordinate(&mut self) -> Result<Value, SpecError> {
        let mut weight = Vec::new();
        if self.eat('(') {
            loop {
                weight.push(self.weight_component()?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect(')')?;
        } else {
            weight.push(self.weight_component()?);
        }
        let parity = match self.peek() {
            None => Parity::Even,
            Some(Tok::Ident(s)) if s == "even" || s == "odd" => {
                let odd = s == "odd";
                self.at += 1;
                if odd {
                    Parity::Odd
                } else {
                    Parity::Even
                }
            }
            _ => return Err(syntax(self.pos(), "expected `even` or `odd`")),
        };
        Ok(Value::Coordinate { weight, parity })
    }

    fn weight_component(&mut self) -> Result<u32, SpecError> {
        let pos = self.pos();
        let n = self.int()?;
        u32::try_from(n).map_err(|_| syntax(pos, "weight out of range"))
    }
}

fn header(body: &str, pos: Pos) -> Result<SectionKind, SpecError> {
    let mut c = Cursor {
        toks: tokenize(body, pos.line, pos.column)?,
        at: 0,
        end: pos,
    };
    let (kind, kpos) = c.ident("a section name")?;
    let out = match kind.as_str() {
        "chart" => SectionKind::Chart(c.ident("a chart name")?.0),
        "section" => SectionKind::Section(c.ident("a section name")?.0),
        "transition" | "inverse" => {
            let (a, _) = c.ident("a chart name")?;
            if c.next().map(|t| t.0) != Some(Tok::Arrow) {
                c.at -= 1;
                return Err(syntax(c.pos(), "expected `->`"));
            }
            let (b, _) = c.ident("a chart name")?;
            if kind == "transition" {
                SectionKind::Transition(a, b)
            } else {
                SectionKind::Inverse(a, b)
            }
        }
        "field" => SectionKind::Field,
        "structure" => SectionKind::Structure,
        "task" => SectionKind::Task,
        other => return Err(syntax(kpos, format!("unknown section `{other}`"))),
    };
    c.finish()?;
    Ok(out)
}

/// Parses a spec document, stopping at the first error.
pub fn parse(text: &str) -> Result<Document, SpecError> {
    let mut doc = Document::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let lead = content.len() - content.trim_start().len();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let pos = Pos {
            line,
            column: content[..lead].chars().count() + 1,
        };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let body = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(pos, "section header must end with `]`"))?;
            let kind = header(
                body,
                Pos {
                    line,
                    column: pos.column,
                },
            )?;
            doc.sections.push(Section {
                kind,
                pos,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(section) = doc.sections.last_mut() else {
            return Err(syntax(pos, "entry before the first section header"));
        };
        let mut c = Cursor {
            toks: tokenize(content, line, 0)?,
            at: 0,
            end: Pos {
                line,
                column: content.chars().count() + 1,
            },
        };
        let key = c.key()?;
        c.expect('=')?;
        let value = if matches!(section.kind, SectionKind::Chart(_)) {
            c.coordinate()?
        } else {
            Value::Expr(c.expr()?)
        };
        c.finish()?;
        section.entries.push(Entry { key, value, pos });
    }
    check(&doc)?;
    Ok(doc)
}

const STRUCTURE_KEYS: [(&str, &str); 6] = [
    ("dim", ""),
    ("c", "iii"),
    ("rank", ""),
    ("anchor", "in"),
    ("bracket", "iii"),
    ("bivector", ""),
];
const TASK_KEYS: [(&str, &str); 1] = [("degree", "")];

fn check_key(e: &Entry, allowed: &[(&str, &str)], section: &SectionKind) -> Result<(), SpecError> {
    let Some((_, shape)) = allowed.iter().find(|(k, _)| *k == e.key.name) else {
        return Err(syntax(e.pos, format!("unknown key `{}` in {section}", e.key.name)));
    };
    let ok = shape.len() == e.key.indices.len()
        && shape.chars().zip(&e.key.indices).all(|(s, i)| match (s, i) {
            ('i', Index::Int(n)) => *n >= 1,
            ('n', Index::Name(_)) => true,
            _ => false,
        });
    if !ok {
        let want: Vec<&str> = shape.chars().map(|s| if s == 'i' { "positive integer" } else { "name" }).collect();
        return Err(syntax(
            e.pos,
            format!("key `{}` takes indices [{}]", e.key.name, want.join(", ")),
        ));
    }
    Ok(())
}

fn check(doc: &Document) -> Result<(), SpecError> {
    let mut charts: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut arity: Option<usize> = None;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for s in &doc.sections {
        let label = s.kind.to_string();
        let unique = matches!(
            s.kind,
            SectionKind::Field | SectionKind::Structure | SectionKind::Task | SectionKind::Section(_) | SectionKind::Chart(_)
        ) || matches!(s.kind, SectionKind::Transition(..) | SectionKind::Inverse(..));
        if unique && !seen.insert(label.clone()) {
            return Err(syntax(s.pos, format!("duplicate section {label}")));
        }
        let mut keys = BTreeSet::new();
        for e in &s.entries {
            if !keys.insert(&e.key) {
                return Err(syntax(e.pos, format!("duplicate key `{}`", e.key)));
            }
        }
        if let SectionKind::Chart(name) = &s.kind {
            let coords = charts.entry(name).or_default();
            for e in &s.entries {
                if !e.key.indices.is_empty() {
                    return Err(syntax(e.pos, "coordinate names take no indices"));
                }
                if let Value::Coordinate { weight, .. } = &e.value {
                    match arity {
                        None => arity = Some(weight.len()),
                        Some(n) if n != weight.len() => {
                            return Err(SpecError::WeightArityMismatch {
                                pos: e.pos,
                                expected: n,
                                found: weight.len(),
                            })
                        }
                        Some(_) => {}
                    }
                }
                coords.insert(&e.key.name);
            }
        }
    }
    for s in &doc.sections {
        match &s.kind {
            SectionKind::Transition(a, b) | SectionKind::Inverse(a, b) => {
                let (Some(src), Some(tgt)) = (charts.get(a.as_str()), charts.get(b.as_str())) else {
                    let missing = if charts.contains_key(a.as_str()) { b } else { a };
                    return Err(syntax(s.pos, format!("unknown chart `{missing}`")));
                };
                for e in &s.entries {
                    if !e.key.indices.is_empty() || !tgt.contains(e.key.name.as_str()) {
                        return Err(SpecError::UnknownVariable {
                            pos: e.pos,
                            name: e.key.to_string(),
                        });
                    }
                    if let Some((name, pos)) = e.expr().variables().into_iter().find(|(n, _)| !src.contains(n)) {
                        return Err(SpecError::UnknownVariable {
                            pos,
                            name: name.to_string(),
                        });
                    }
                }
            }
            SectionKind::Structure => {
                for e in &s.entries {
                    check_key(e, &STRUCTURE_KEYS, &s.kind)?;
                }
            }
            SectionKind::Task => {
                for e in &s.entries {
                    check_key(e, &TASK_KEYS, &s.kind)?;
                    if e.expr().as_integer().is_none() {
                        return Err(syntax(e.pos, format!("`{}` must be an integer", e.key)));
                    }
                }
            }
            SectionKind::Field | SectionKind::Section(_) => {
                for e in &s.entries {
                    if !e.key.indices.is_empty() {
                        return Err(syntax(e.pos, "coordinate names take no indices"));
                    }
                }
            }
            SectionKind::Chart(_) => {}
        }
    }
    Ok(())
}
