//! Turtle reader.
//!
//! Covers the plain Turtle constructs used by process models: `@prefix` and
//! `@base` directives, IRIs and prefixed names, string/numeric/boolean
//! literals, the `a` keyword, predicate and object lists, blank node property
//! lists and collections. SPARQL-style `PREFIX`/`BASE` and TriG are rejected.
//!
//! Every blank node in a document (labelled or anonymous) gets a fresh
//! `b{n}` label, so labels are unique within one parse.

use std::collections::{BTreeMap, HashMap};

use super::term::*;
use super::{vocab_rdf, RdfError};
use crate::rdf::Graph;

/// Result of parsing one document: the graph plus the prefixes it declared.
#[derive(Debug, Clone)]
pub struct TurtleDocument {
    pub graph: Graph,
    pub prefixes: BTreeMap<String, String>,
}

/// Parses a Turtle document into a graph.
pub fn parse_turtle(source: &str, base_iri: Option<&str>) -> Result<Graph, RdfError> {
    TurtleParser::new(source).with_base(base_iri).parse().map(|d| d.graph)
}

pub struct TurtleParser<'a> {
    src: &'a str,
    base: Option<String>,
    prefixes: BTreeMap<String, String>,
}

impl<'a> TurtleParser<'a> {
    pub fn new(src: &'a str) -> Self {
        TurtleParser { src, base: None, prefixes: BTreeMap::new() }
    }

    pub fn with_base(mut self, base: Option<&str>) -> Self {
        self.base = base.map(str::to_owned);
        self
    }

    /// Prefixes that are in scope before the document's own directives.
    pub fn with_prefixes(mut self, prefixes: &BTreeMap<String, String>) -> Self {
        self.prefixes.extend(prefixes.iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }

    pub fn parse(self) -> Result<TurtleDocument, RdfError> {
        let mut st = State {
            chars: self.src.chars().collect(),
            pos: 0,
            base: self.base,
            prefixes: self.prefixes,
            declared: BTreeMap::new(),
            labels: HashMap::new(),
            next_blank: 0,
            triples: Vec::new(),
        };
        st.document()?;
        Ok(TurtleDocument { graph: st.triples.into_iter().collect(), prefixes: st.declared })
    }
}

struct State {
    chars: Vec<char>,
    pos: usize,
    base: Option<String>,
    prefixes: BTreeMap<String, String>,
    declared: BTreeMap<String, String>,
    labels: HashMap<String, Term>,
    next_blank: usize,
    triples: Vec<Triple>,
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(c,
            '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{2FF}' | '\u{370}'..='\u{37D}'
            | '\u{37F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}' | '\u{2070}'..='\u{218F}'
            | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}' | '\u{F900}'..='\u{FDCF}'
            | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || matches!(c, '\u{B7}' | '\u{300}'..='\u{36F}' | '\u{203F}'..='\u{2040}')
}

fn has_scheme(iri: &str) -> bool {
    let mut chars = iri.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    for c in chars {
        if c == ':' {
            return true;
        }
        if !(c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return false;
        }
    }
    false
}

impl State {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn syntax(&self, message: impl Into<String>) -> RdfError {
        self.syntax_at(self.pos, message)
    }

    fn syntax_at(&self, pos: usize, message: impl Into<String>) -> RdfError {
        let (line, column) = self.location(pos);
        RdfError::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), RdfError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.syntax(format!("expected '{want}', found '{c}'"))),
            None => Err(self.syntax(format!("expected '{want}', found end of input"))),
        }
    }

    fn fresh_blank(&mut self) -> Term {
        let t = Term::BlankNode(format!("b{}", self.next_blank));
        self.next_blank += 1;
        t
    }

    fn emit(&mut self, s: Term, p: Term, o: Term) {
        self.triples.push(Triple { subject: s, predicate: p, object: o });
    }

    fn document(&mut self) -> Result<(), RdfError> {
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(()),
                Some('@') => self.directive()?,
                Some(_) => {
                    self.triples_statement()?;
                    self.expect('.')?;
                }
            }
        }
    }

    fn directive(&mut self) -> Result<(), RdfError> {
        let start = self.pos;
        self.pos += 1;
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            word.push(c);
            self.pos += 1;
        }
        match word.as_str() {
            "prefix" => {
                self.skip_ws();
                let prefix = self.pn_prefix();
                if self.bump() != Some(':') {
                    return Err(self.syntax("expected ':' after prefix name"));
                }
                self.skip_ws();
                let iri = self.iriref()?;
                self.prefixes.insert(prefix.clone(), iri.clone());
                self.declared.insert(prefix, iri);
            }
            "base" => {
                self.skip_ws();
                let iri = self.iriref()?;
                self.base = Some(iri);
            }
            _ => return Err(self.syntax_at(start, format!("unknown directive '@{word}'"))),
        }
        self.expect('.')
    }

    fn triples_statement(&mut self) -> Result<(), RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                let subject = self.blank_node_property_list()?;
                self.skip_ws();
                if self.peek() != Some('.') {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)
            }
        }
    }

    fn subject(&mut self) -> Result<Term, RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('(') => self.collection(),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some(c) if is_pn_chars_base(c) || c == ':' => {
                let start = self.pos;
                match self.name_or_keyword()? {
                    Name::Iri(iri) => Ok(Term::Iri(iri)),
                    Name::Keyword(k) => Err(self.keyword_error(start, &k, "subject")),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected '{c}' in subject position"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn keyword_error(&self, start: usize, keyword: &str, position: &str) -> RdfError {
        if keyword.eq_ignore_ascii_case("prefix") || keyword.eq_ignore_ascii_case("base") {
            self.syntax_at(start, format!("SPARQL-style '{keyword}' directive is not supported"))
        } else {
            self.syntax_at(start, format!("unexpected keyword '{keyword}' in {position} position"))
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.pos += 1;
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Term, RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some(c) if is_pn_chars_base(c) || c == ':' => {
                let start = self.pos;
                match self.name_or_keyword()? {
                    Name::Iri(iri) => Ok(Term::Iri(iri)),
                    Name::Keyword(k) if k == "a" => Ok(Term::iri(vocab_rdf::TYPE)),
                    Name::Keyword(k) => Err(self.keyword_error(start, &k, "predicate")),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected '{c}' in predicate position"))),
            None => Err(self.syntax("unexpected end of input, expected predicate")),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Term) -> Result<(), RdfError> {
        loop {
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object);
            self.skip_ws();
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('(') => self.collection(),
            Some('[') => self.blank_node_property_list(),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.numeric_literal(),
            Some(c) if is_pn_chars_base(c) || c == ':' => {
                let start = self.pos;
                match self.name_or_keyword()? {
                    Name::Iri(iri) => Ok(Term::Iri(iri)),
                    Name::Keyword(k) if k == "true" || k == "false" => {
                        Ok(Term::Literal(Literal::typed(k, XSD_BOOLEAN)))
                    }
                    Name::Keyword(k) => Err(self.keyword_error(start, &k, "object")),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected '{c}' in object position"))),
            None => Err(self.syntax("unexpected end of input, expected object")),
        }
    }

    fn blank_node_property_list(&mut self) -> Result<Term, RdfError> {
        self.expect('[')?;
        let node = self.fresh_blank();
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term, RdfError> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.syntax("unterminated collection")),
                _ => items.push(self.object()?),
            }
        }
        let mut head = Term::iri(vocab_rdf::NIL);
        let cells: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        for (i, item) in items.into_iter().enumerate().rev() {
            let cell = cells[i].clone();
            self.emit(cell.clone(), Term::iri(vocab_rdf::FIRST), item);
            self.emit(cell.clone(), Term::iri(vocab_rdf::REST), head);
            head = cell;
        }
        Ok(head)
    }

    fn blank_label(&mut self) -> Result<Term, RdfError> {
        self.pos += 2;
        let start = self.pos;
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {}
            _ => return Err(self.syntax("invalid blank node label")),
        }
        while let Some(c) = self.peek().filter(|&c| is_pn_chars(c) || c == '.') {
            label.push(c);
            self.pos += 1;
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
        }
        if label.is_empty() {
            return Err(self.syntax_at(start, "empty blank node label"));
        }
        if let Some(t) = self.labels.get(&label) {
            return Ok(t.clone());
        }
        let t = self.fresh_blank();
        self.labels.insert(label, t.clone());
        Ok(t)
    }

    fn pn_prefix(&mut self) -> String {
        let mut out = String::new();
        if let Some(c) = self.peek().filter(|&c| is_pn_chars_base(c)) {
            out.push(c);
            self.pos += 1;
            while let Some(c) = self.peek().filter(|&c| is_pn_chars(c) || c == '.') {
                out.push(c);
                self.pos += 1;
            }
            while out.ends_with('.') {
                out.pop();
                self.pos -= 1;
            }
        }
        out
    }

    fn name_or_keyword(&mut self) -> Result<Name, RdfError> {
        let start = self.pos;
        let prefix = self.pn_prefix();
        if self.peek() != Some(':') {
            if prefix.is_empty() {
                return Err(self.syntax("expected a name"));
            }
            return Ok(Name::Keyword(prefix));
        }
        self.pos += 1;
        let local = self.pn_local()?;
        match self.prefixes.get(&prefix) {
            Some(ns) => Ok(Name::Iri(format!("{ns}{local}"))),
            None => {
                let (line, column) = self.location(start);
                Err(RdfError::UndefinedPrefix { prefix, line, column })
            }
        }
    }

    fn pn_local(&mut self) -> Result<String, RdfError> {
        let mut out = String::new();
        let first = match self.peek() {
            Some(c) => c,
            None => return Ok(out),
        };
        if !(is_pn_chars_u(first) || first == ':' || first.is_ascii_digit() || first == '%' || first == '\\') {
            return Ok(out);
        }
        loop {
            match self.peek() {
                Some('%') => {
                    let h1 = self.peek_at(1).filter(char::is_ascii_hexdigit);
                    let h2 = self.peek_at(2).filter(char::is_ascii_hexdigit);
                    match (h1, h2) {
                        (Some(a), Some(b)) => {
                            out.push('%');
                            out.push(a);
                            out.push(b);
                            self.pos += 3;
                        }
                        _ => return Err(self.syntax("invalid percent escape in local name")),
                    }
                }
                Some('\\') => match self.peek_at(1) {
                    Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => {
                        out.push(c);
                        self.pos += 2;
                    }
                    _ => return Err(self.syntax("invalid escape in local name")),
                },
                Some(c) if is_pn_chars(c) || c == ':' || c == '.' => {
                    out.push(c);
                    self.pos += 1;
                }
                _ => break,
            }
        }
        // A trailing '.' terminates the statement, it is not part of the name.
        while out.ends_with('.') && self.chars[self.pos - 1] == '.' {
            out.pop();
            self.pos -= 1;
        }
        Ok(out)
    }

    fn iriref(&mut self) -> Result<String, RdfError> {
        let start = self.pos;
        if self.bump() != Some('<') {
            return Err(self.syntax_at(start, "expected '<'"));
        }
        let mut raw = String::new();
        loop {
            match self.bump() {
                None => return Err(self.syntax_at(start, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => raw.push(self.hex_escape(4)?),
                    Some('U') => raw.push(self.hex_escape(8)?),
                    _ => return Err(self.syntax("invalid escape in IRI")),
                },
                Some(c) if c <= ' ' || "<\"{}|^`".contains(c) => {
                    return Err(self.syntax(format!("invalid character {c:?} in IRI")))
                }
                Some(c) => raw.push(c),
            }
        }
        self.resolve(raw, start)
    }

    fn resolve(&self, raw: String, start: usize) -> Result<String, RdfError> {
        if has_scheme(&raw) {
            return Ok(raw);
        }
        let (line, column) = self.location(start);
        let base = self.base.as_deref().ok_or_else(|| RdfError::RelativeIri { iri: raw.clone(), line, column })?;
        let base = url::Url::parse(base).map_err(|e| RdfError::Syntax {
            line,
            column,
            message: format!("invalid base IRI <{base}>: {e}"),
        })?;
        base.join(&raw).map(String::from).map_err(|e| RdfError::Syntax {
            line,
            column,
            message: format!("cannot resolve <{raw}>: {e}"),
        })
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, RdfError> {
        let mut v = 0u32;
        for _ in 0..digits {
            let d = self.bump().and_then(|c| c.to_digit(16)).ok_or_else(|| self.syntax("invalid unicode escape"))?;
            v = v * 16 + d;
        }
        char::from_u32(v).ok_or_else(|| self.syntax("escape is not a valid code point"))
    }

    fn rdf_literal(&mut self) -> Result<Term, RdfError> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.pos += 1;
                let mut lang = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '-') {
                    lang.push(c);
                    self.pos += 1;
                }
                if lang.is_empty() {
                    return Err(self.syntax("empty language tag"));
                }
                Ok(Term::Literal(Literal::lang(lexical, lang)))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.pos += 2;
                let datatype = match self.peek() {
                    Some('<') => self.iriref()?,
                    _ => {
                        let start = self.pos;
                        match self.name_or_keyword()? {
                            Name::Iri(iri) => iri,
                            Name::Keyword(k) => return Err(self.keyword_error(start, &k, "datatype")),
                        }
                    }
                };
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::simple(lexical))),
        }
    }

    fn string(&mut self) -> Result<String, RdfError> {
        let start = self.pos;
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.pos += 2;
        }
        let mut out = String::new();
        loop {
            let c = self.bump().ok_or_else(|| self.syntax_at(start, "unterminated string"))?;
            match c {
                '\\' => {
                    let e = self.bump().ok_or_else(|| self.syntax_at(start, "unterminated string"))?;
                    out.push(match e {
                        't' => '\t',
                        'b' => '\u{8}',
                        'n' => '\n',
                        'r' => '\r',
                        'f' => '\u{c}',
                        '"' => '"',
                        '\'' => '\'',
                        '\\' => '\\',
                        'u' => self.hex_escape(4)?,
                        'U' => self.hex_escape(8)?,
                        other => return Err(self.syntax(format!("invalid string escape '\\{other}'"))),
                    });
                }
                c if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        // Quotes right before the closing delimiter belong to the content.
                        while self.peek_at(2) == Some(quote) {
                            out.push(quote);
                            self.pos += 1;
                        }
                        self.pos += 2;
                        return Ok(out);
                    }
                    out.push(c);
                }
                '\n' | '\r' if !long => return Err(self.syntax("newline in short string")),
                c => out.push(c),
            }
        }
    }

    fn numeric_literal(&mut self) -> Result<Term, RdfError> {
        let start = self.pos;
        let mut text = String::new();
        if let Some(c) = self.peek().filter(|c| matches!(c, '+' | '-')) {
            text.push(c);
            self.pos += 1;
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.pos += 1;
            int_digits += 1;
        }
        let mut datatype = XSD_INTEGER;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.pos += 1;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.pos += 1;
            }
            datatype = XSD_DECIMAL;
        } else if int_digits == 0 {
            return Err(self.syntax_at(start, "invalid numeric literal"));
        }
        if let Some(e) = self.peek().filter(|c| matches!(c, 'e' | 'E')) {
            text.push(e);
            self.pos += 1;
            if let Some(c) = self.peek().filter(|c| matches!(c, '+' | '-')) {
                text.push(c);
                self.pos += 1;
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.pos += 1;
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return Err(self.syntax_at(start, "exponent without digits"));
            }
            datatype = XSD_DOUBLE;
        }
        Ok(Term::Literal(Literal::typed(text, datatype)))
    }
}

enum Name {
    Iri(String),
    Keyword(String),
}
