//! Parser for the `deps` language.
//!
//! ```text
//! deps       ::= { dep_line | iface_line | prop_line }*
//! dep_line   ::= id "->" id { "&" id }*
//! iface_line ::= id ":" id { "|" id }*
//! prop_line  ::= id "." key "=" value*
//! id         ::= [a-z][a-z0-9_]* "?"?
//! ```
//!
//! Statements end at a newline or `;`. `#` starts a comment that runs to the
//! end of the physical line. An id ending in `?` implicitly declares the
//! interface `foo? : foo_yes | foo_no`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{question_base, DepsModel, OptionId, Statement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The same id is the left side of two interface statements.
    DuplicateInterface { line: usize, name: String },
    /// An id is listed as an implementation of two interfaces.
    MultiInterfaceMembership {
        line: usize,
        name: String,
        first: String,
        second: String,
    },
    /// An interface lists itself among its implementations.
    SelfReference { line: usize, name: String },
    EmptyImplList { line: usize, name: String },
    DuplicateImplementation {
        line: usize,
        iface: String,
        name: String,
    },
    /// An explicit interface for `foo?` whose implementations are not
    /// exactly `foo_yes | foo_no`.
    QuestionInterface { line: usize, name: String },
    /// Both `foo` and `foo?` are declared; they would share `CONFIG_FOO`.
    AliasCollision { line: usize, name: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::DuplicateInterface { line, .. }
            | ParseError::MultiInterfaceMembership { line, .. }
            | ParseError::SelfReference { line, .. }
            | ParseError::EmptyImplList { line, .. }
            | ParseError::DuplicateImplementation { line, .. }
            | ParseError::QuestionInterface { line, .. }
            | ParseError::AliasCollision { line, .. } => *line,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                line,
                column,
                message,
            } => write!(f, "{}:{}: syntax error: {}", line, column, message),
            ParseError::DuplicateInterface { line, name } => {
                write!(f, "{}: interface `{}` is declared twice", line, name)
            }
            ParseError::MultiInterfaceMembership {
                line,
                name,
                first,
                second,
            } => write!(
                f,
                "{}: `{}` implements both `{}` and `{}`",
                line, name, first, second
            ),
            ParseError::SelfReference { line, name } => {
                write!(f, "{}: interface `{}` lists itself as an implementation", line, name)
            }
            ParseError::EmptyImplList { line, name } => {
                write!(f, "{}: interface `{}` has no implementations", line, name)
            }
            ParseError::DuplicateImplementation { line, iface, name } => write!(
                f,
                "{}: `{}` is listed twice as an implementation of `{}`",
                line, name, iface
            ),
            ParseError::QuestionInterface { line, name } => {
                let base = question_base(name).unwrap_or(name);
                write!(
                    f,
                    "{}: `{}` must be declared as `{} : {}_yes | {}_no`",
                    line, name, name, base, base
                )
            }
            ParseError::AliasCollision { line, name } => {
                let base = question_base(name).unwrap_or(name);
                write!(f, "{}: `{}` and `{}?` cannot both be declared", line, base, base)
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// A property line before interning: `owner.key = values...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyLine {
    pub owner: String,
    pub key: String,
    pub values: Vec<String>,
}

/// Parses a single `owner.key = v1 v2 ...` line.
pub fn parse_property_line(line: &str) -> Result<PropertyLine, ParseError> {
    let line = strip_comment(line);
    let mut cursor = Cursor::new(line, 1, 0, line.len());
    cursor.skip_ws();
    let owner = cursor.ident()?;
    cursor.skip_ws();
    if !cursor.eat('.') {
        return Err(cursor.error("expected `.` after property owner"));
    }
    match cursor.prop_tail(owner)? {
        Raw::Prop { owner, key, values } => Ok(PropertyLine {
            owner: owner.to_string(),
            key: key.to_string(),
            values: values.into_iter().map(String::from).collect(),
        }),
        _ => unreachable!(),
    }
}

/// Parses `deps` source text into a validated model.
pub fn parse_deps(source: &str) -> Result<DepsModel, ParseError> {
    let mut builder = Builder::default();
    for (line_index, physical) in source.split('\n').enumerate() {
        let line_no = line_index + 1;
        let physical = physical.strip_suffix('\r').unwrap_or(physical);
        let content = strip_comment(physical);
        let mut start = 0;
        for segment in content.split(';') {
            let end = start + segment.len();
            if !segment.trim().is_empty() {
                let raw = Cursor::new(physical, line_no, start, end).statement()?;
                builder.add(raw, line_no)?;
            }
            start = end + 1;
        }
    }
    Ok(builder.model)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

enum Raw<'a> {
    Dep {
        head: &'a str,
        body: Vec<&'a str>,
    },
    Iface {
        iface: &'a str,
        impls: Vec<&'a str>,
    },
    Prop {
        owner: &'a str,
        key: &'a str,
        values: Vec<&'a str>,
    },
}

struct Cursor<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a str, line_no: usize, pos: usize, end: usize) -> Self {
        Cursor {
            line,
            line_no,
            pos,
            end,
        }
    }

    fn rest(&self) -> &'a str {
        &self.line[self.pos..self.end]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.end
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            line: self.line_no,
            column: self.line[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.bump();
            }
            Some(c) => return Err(self.error(&format!("expected {}, found `{}`", what, c))),
            None => return Err(self.error(&format!("expected {}", what))),
        }
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        {
            self.bump();
        }
        Ok(&self.line[start..self.pos])
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        self.word("identifier")?;
        if self.eat('?')
            && self
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '?')
        {
            return Err(self.error("`?` is only allowed at the end of an identifier"));
        }
        Ok(&self.line[start..self.pos])
    }

    fn statement(mut self) -> Result<Raw<'a>, ParseError> {
        self.skip_ws();
        let head = self.ident()?;
        self.skip_ws();
        let raw = match self.peek() {
            Some('-') => {
                self.bump();
                if !self.eat('>') {
                    return Err(self.error("expected `->`"));
                }
                let body = self.list('&')?;
                Raw::Dep { head, body }
            }
            Some(':') => {
                self.bump();
                self.skip_ws();
                let impls = if self.at_end() {
                    Vec::new()
                } else {
                    self.list('|')?
                };
                Raw::Iface { iface: head, impls }
            }
            Some('.') => {
                self.bump();
                return self.prop_tail(head);
            }
            Some(c) => {
                return Err(self.error(&format!("expected `->`, `:` or `.`, found `{}`", c)))
            }
            None => return Err(self.error("expected `->`, `:` or `.`")),
        };
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(raw)
    }

    fn list(&mut self, sep: char) -> Result<Vec<&'a str>, ParseError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            items.push(self.ident()?);
            self.skip_ws();
            if !self.eat(sep) {
                return Ok(items);
            }
        }
    }

    fn prop_tail(mut self, owner: &'a str) -> Result<Raw<'a>, ParseError> {
        self.skip_ws();
        let key = self.word("property key")?;
        self.skip_ws();
        if !self.eat('=') {
            return Err(self.error("expected `=` in property line"));
        }
        let values = self.rest().split_whitespace().collect();
        Ok(Raw::Prop { owner, key, values })
    }
}

#[derive(Default)]
struct Builder {
    model: DepsModel,
    deps_seen: BTreeSet<(OptionId, Vec<OptionId>)>,
    props: BTreeMap<(OptionId, String), usize>,
}

impl Builder {
    fn intern(&mut self, name: &str, line: usize) -> Result<OptionId, ParseError> {
        if self.model.lookup(name).is_none() {
            let twin = match question_base(name) {
                Some(base) => self.model.lookup(base),
                None => self.model.lookup(&format!("{}?", name)),
            };
            if twin.is_some() {
                let name = match question_base(name) {
                    Some(_) => name.to_string(),
                    None => format!("{}?", name),
                };
                return Err(ParseError::AliasCollision { line, name });
            }
        }
        Ok(self.model.intern(name))
    }

    fn add(&mut self, raw: Raw<'_>, line: usize) -> Result<(), ParseError> {
        let mut mentioned = Vec::new();
        match raw {
            Raw::Dep { head, body } => {
                let head = self.intern(head, line)?;
                let body = body
                    .into_iter()
                    .map(|b| self.intern(b, line))
                    .collect::<Result<Vec<_>, _>>()?;
                mentioned.push(head);
                mentioned.extend(body.iter().copied());
                if self.deps_seen.insert((head, body.clone())) {
                    self.model.statements.push(Statement::Dep { head, body });
                }
            }
            Raw::Iface { iface, impls } => {
                let iface = self.intern(iface, line)?;
                let impls = impls
                    .into_iter()
                    .map(|i| self.intern(i, line))
                    .collect::<Result<Vec<_>, _>>()?;
                mentioned.push(iface);
                mentioned.extend(impls.iter().copied());
                self.add_iface(iface, impls, false, line)?;
            }
            Raw::Prop { owner, key, values } => {
                let owner = self.intern(owner, line)?;
                mentioned.push(owner);
                let values = values.into_iter().map(String::from);
                match self.props.get(&(owner, key.to_string())) {
                    Some(&at) => {
                        if let Statement::Prop { values: existing, .. } =
                            &mut self.model.statements[at]
                        {
                            existing.extend(values);
                        }
                    }
                    None => {
                        self.props
                            .insert((owner, key.to_string()), self.model.statements.len());
                        self.model.statements.push(Statement::Prop {
                            owner,
                            key: key.to_string(),
                            values: values.collect(),
                        });
                    }
                }
            }
        }
        for id in mentioned {
            let name = self.model.name(id);
            if let Some(base) = question_base(name) {
                if !self.model.is_interface(id) {
                    let yes = format!("{}_yes", base);
                    let no = format!("{}_no", base);
                    let impls = alloc::vec![self.intern(&yes, line)?, self.intern(&no, line)?];
                    self.add_iface(id, impls, true, line)?;
                }
            }
        }
        Ok(())
    }

    fn add_iface(
        &mut self,
        iface: OptionId,
        impls: Vec<OptionId>,
        auto: bool,
        line: usize,
    ) -> Result<(), ParseError> {
        let name = |b: &Builder, id: OptionId| b.model.name(id).to_string();
        if impls.is_empty() {
            return Err(ParseError::EmptyImplList {
                line,
                name: name(self, iface),
            });
        }
        if impls.contains(&iface) {
            return Err(ParseError::SelfReference {
                line,
                name: name(self, iface),
            });
        }
        for (i, a) in impls.iter().enumerate() {
            if impls[..i].contains(a) {
                return Err(ParseError::DuplicateImplementation {
                    line,
                    iface: name(self, iface),
                    name: name(self, *a),
                });
            }
        }
        if let Some(base) = question_base(self.model.name(iface)) {
            let expected = [format!("{}_yes", base), format!("{}_no", base)];
            let actual: Vec<&str> = impls.iter().map(|i| self.model.name(*i)).collect();
            if actual != expected {
                return Err(ParseError::QuestionInterface {
                    line,
                    name: name(self, iface),
                });
            }
            if self.model.is_interface(iface) {
                // Restating the generated yes/no interface is a no-op.
                return Ok(());
            }
        }
        if self.model.is_interface(iface) {
            return Err(ParseError::DuplicateInterface {
                line,
                name: name(self, iface),
            });
        }
        for &i in &impls {
            if let Some(other) = self.model.interface_of(i) {
                return Err(ParseError::MultiInterfaceMembership {
                    line,
                    name: name(self, i),
                    first: name(self, other),
                    second: name(self, iface),
                });
            }
        }
        for &i in &impls {
            self.model.interface_of.insert(i, iface);
        }
        self.model
            .statements
            .push(Statement::Iface { iface, impls, auto });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn names(model: &DepsModel) -> Vec<&str> {
        model.options().map(|id| model.name(id)).collect()
    }

    #[test]
    fn single_dependency() {
        let m = parse_deps("sched -> clock & ctxlist").unwrap();
        assert_eq!(names(&m), ["sched", "clock", "ctxlist"]);
        let id = |n| m.lookup(n).unwrap();
        assert_eq!(
            m.statements(),
            [Statement::Dep {
                head: id("sched"),
                body: vec![id("clock"), id("ctxlist")],
            }]
        );
    }

    #[test]
    fn empty_source() {
        let m = parse_deps("").unwrap();
        assert!(m.is_empty());
        assert!(m.statements().is_empty());
        assert!(parse_deps("\n  \n# only a comment\n;;").unwrap().is_empty());
    }

    #[test]
    fn question_mark_expands_to_yes_no_interface() {
        let m = parse_deps("sched -> optimize_send_ipi?").unwrap();
        assert_eq!(
            names(&m),
            [
                "sched",
                "optimize_send_ipi?",
                "optimize_send_ipi_yes",
                "optimize_send_ipi_no"
            ]
        );
        let id = |n| m.lookup(n).unwrap();
        assert_eq!(
            m.statements()[1],
            Statement::Iface {
                iface: id("optimize_send_ipi?"),
                impls: vec![id("optimize_send_ipi_yes"), id("optimize_send_ipi_no")],
                auto: true,
            }
        );
        assert_eq!(m.statements().len(), 2);
    }

    #[test]
    fn restating_auto_interface_is_idempotent() {
        let text = "a -> b?\nb? : b_yes | b_no\nc -> b?";
        let m = parse_deps(text).unwrap();
        assert_eq!(m.statements().len(), 3);
        assert_eq!(m.interfaces().count(), 1);
    }

    #[test]
    fn explicit_question_interface_must_be_yes_no() {
        let err = parse_deps("b? : b_yes | b_maybe").unwrap_err();
        assert!(matches!(err, ParseError::QuestionInterface { line: 1, .. }));
    }

    #[test]
    fn multi_interface_membership_is_rejected() {
        let err = parse_deps("a : b | c\nd : b | e").unwrap_err();
        assert_eq!(
            err,
            ParseError::MultiInterfaceMembership {
                line: 2,
                name: "b".into(),
                first: "a".into(),
                second: "d".into(),
            }
        );
    }

    #[test]
    fn interface_errors() {
        assert!(matches!(
            parse_deps("a : b\na : c").unwrap_err(),
            ParseError::DuplicateInterface { line: 2, .. }
        ));
        assert!(matches!(
            parse_deps("a : b | a").unwrap_err(),
            ParseError::SelfReference { .. }
        ));
        assert!(matches!(
            parse_deps("a :").unwrap_err(),
            ParseError::EmptyImplList { .. }
        ));
        assert!(matches!(
            parse_deps("a : b | b").unwrap_err(),
            ParseError::DuplicateImplementation { .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse_deps("a -> b\n  a -x b").unwrap_err(),
            ParseError::Syntax {
                line: 2,
                column: 6,
                message: "expected `->`".into()
            }
        );
        assert!(matches!(
            parse_deps("Sched -> a").unwrap_err(),
            ParseError::Syntax { line: 1, column: 1, .. }
        ));
        assert!(matches!(
            parse_deps("a -> b c").unwrap_err(),
            ParseError::Syntax { column: 8, .. }
        ));
        assert!(matches!(
            parse_deps("a -> ").unwrap_err(),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            parse_deps("a? b -> c").unwrap_err(),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            parse_deps("a?x -> c").unwrap_err(),
            ParseError::Syntax { column: 3, .. }
        ));
    }

    #[test]
    fn semicolons_and_comments() {
        let m = parse_deps("a -> b; c -> d # trailing; e -> f\n# g -> h").unwrap();
        assert_eq!(names(&m), ["a", "b", "c", "d"]);
    }

    #[test]
    fn duplicate_dependencies_are_merged() {
        let m = parse_deps("a -> b\na -> b\na -> b & c").unwrap();
        assert_eq!(m.statements().len(), 2);
    }

    #[test]
    fn alias_collision() {
        assert!(matches!(
            parse_deps("a -> foo\nb -> foo?").unwrap_err(),
            ParseError::AliasCollision { line: 2, .. }
        ));
        assert!(matches!(
            parse_deps("a -> foo?\nb -> foo").unwrap_err(),
            ParseError::AliasCollision { line: 2, .. }
        ));
    }

    #[test]
    fn property_lines() {
        assert_eq!(
            parse_property_line("microkernel.targets = microkernel").unwrap(),
            PropertyLine {
                owner: "microkernel".into(),
                key: "targets".into(),
                values: vec!["microkernel".into()],
            }
        );
        assert_eq!(
            parse_property_line("x.objs =").unwrap().values,
            Vec::<String>::new()
        );
        assert!(parse_property_line("x.objs a.o").is_err());
        assert!(parse_property_line("x.Objs = a").is_err());
        assert!(parse_property_line("X.objs = a").is_err());
    }

    #[test]
    fn repeated_property_appends() {
        let m = parse_deps(
            "ctxlist_spinlock.objs = a.o b.o\nctxlist_spinlock.objs = c.o",
        )
        .unwrap();
        let owner = m.lookup("ctxlist_spinlock").unwrap();
        assert_eq!(m.property(owner, "objs").unwrap(), ["a.o", "b.o", "c.o"]);
        assert_eq!(m.statements().len(), 1);
    }

    #[test]
    fn interface_may_also_be_dependency_target() {
        let m = parse_deps("a -> s\ns : x | y").unwrap();
        let s = m.lookup("s").unwrap();
        assert!(m.is_interface(s));
        assert_eq!(m.interface_of(m.lookup("x").unwrap()), Some(s));
    }

    #[test]
    fn pretty_print_round_trip() {
        let text = "date -> date_size & date_overflows?\n\
                    date_size: date16 | date32 | date64\n\
                    date16 -> date_overflows_yes; date32 -> date_overflows_yes\n\
                    date64 -> date_overflows_no\n\
                    date.objs = date.o\n";
        let m = parse_deps(text).unwrap();
        let printed = alloc::string::ToString::to_string(&m);
        let again = parse_deps(&printed).unwrap();
        assert_eq!(m, again);
        assert_eq!(printed, alloc::string::ToString::to_string(&again));
    }
}
