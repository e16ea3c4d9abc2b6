//! Finite models for the satisfaction relation.
//!
//! ```text
//! world  ::= item*
//! item   ::= "instances" IDENT ("," IDENT)* ";"
//!          | "situations" IDENT ("," IDENT)* ";"
//!          | ("rel" | "fun") IDENT ":" (tuple ("," tuple)*)? ";"
//! tuple  ::= "(" IDENT ("," IDENT)* ")"
//! ```
//!
//! The first listed situation plays the role of `s0`. In a `rel` tuple the
//! last component is the situation in which the fluent holds. `#` starts a
//! comment, as in `.sitc` files.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ast::Span;
use crate::parser::{tokenize, ParseError, Token, TokenKind};

type Tuple = Vec<(String, Span)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("`{name}` is neither an instance nor a situation")]
    Unknown { name: String, span: Span },
    #[error("`{name}` is not a situation")]
    NotSituation { name: String, span: Span },
    #[error("`{name}` is listed twice")]
    Duplicate { name: String, span: Span },
    #[error("a world needs at least one situation")]
    NoSituations,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct World {
    pub instances: BTreeSet<String>,
    /// Ordered; the first entry is the initial situation.
    pub situations: Vec<String>,
    pub rel_tables: BTreeMap<String, BTreeSet<(Vec<String>, String)>>,
    pub fun_tables: BTreeMap<String, BTreeSet<Vec<String>>>,
}

impl World {
    pub fn new<'a>(
        instances: impl IntoIterator<Item = &'a str>,
        situations: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, WorldError> {
        let mut w = World::default();
        for i in instances {
            if !w.instances.insert(i.to_string()) {
                return Err(WorldError::Duplicate {
                    name: i.to_string(),
                    span: Span::default(),
                });
            }
        }
        for s in situations {
            if w.situations.iter().any(|x| x == s) {
                return Err(WorldError::Duplicate {
                    name: s.to_string(),
                    span: Span::default(),
                });
            }
            w.situations.push(s.to_string());
        }
        if w.situations.is_empty() {
            return Err(WorldError::NoSituations);
        }
        Ok(w)
    }

    pub fn initial(&self) -> &str {
        &self.situations[0]
    }

    /// Membership in `L(w)`: instances and situation names.
    pub fn contains(&self, name: &str) -> bool {
        self.instances.contains(name) || self.is_situation(name)
    }

    pub fn is_situation(&self, name: &str) -> bool {
        self.situations.iter().any(|s| s == name)
    }

    /// Registers `name` with an empty table if it has none yet.
    pub fn declare_rel(&mut self, name: &str) {
        self.rel_tables.entry(name.to_string()).or_default();
    }

    pub fn declare_fun(&mut self, name: &str) {
        self.fun_tables.entry(name.to_string()).or_default();
    }

    pub fn add_rel(&mut self, name: &str, args: &[&str], sit: &str) -> Result<(), WorldError> {
        for a in args {
            self.check_member(a)?;
        }
        if !self.is_situation(sit) {
            return Err(WorldError::NotSituation {
                name: sit.to_string(),
                span: Span::default(),
            });
        }
        self.rel_tables
            .entry(name.to_string())
            .or_default()
            .insert((
                args.iter().map(|a| a.to_string()).collect(),
                sit.to_string(),
            ));
        Ok(())
    }

    pub fn add_fun(&mut self, name: &str, args: &[&str]) -> Result<(), WorldError> {
        for a in args {
            self.check_member(a)?;
        }
        self.fun_tables
            .entry(name.to_string())
            .or_default()
            .insert(args.iter().map(|a| a.to_string()).collect());
        Ok(())
    }

    pub fn rel_holds(&self, name: &str, args: &[String], sit: &str) -> Option<bool> {
        let table = self.rel_tables.get(name)?;
        Some(table.iter().any(|(a, s)| a == args && s == sit))
    }

    pub fn fun_holds(&self, name: &str, args: &[String]) -> Option<bool> {
        Some(self.fun_tables.get(name)?.contains(args))
    }

    fn check_member(&self, name: &str) -> Result<(), WorldError> {
        if self.contains(name) {
            Ok(())
        } else {
            Err(WorldError::Unknown {
                name: name.to_string(),
                span: Span::default(),
            })
        }
    }

    pub fn parse(source: &str) -> Result<World, WorldError> {
        WorldParser {
            tokens: tokenize(source)?,
            pos: 0,
            end: Span::default(),
        }
        .world()
    }
}

struct WorldParser {
    tokens: Vec<Token>,
    pos: usize,
    end: Span,
}

enum Table {
    Rel,
    Fun,
}

impl WorldParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, expected: &[&str]) -> WorldError {
        let (found, span) = match self.peek() {
            Some(t) => (t.kind.describe(), t.span),
            None => ("end of input".to_string(), self.end),
        };
        WorldError::Syntax(ParseError {
            message: format!("expected {}, found {found}", expected.join(" or ")),
            span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.peek().is_some_and(|t| t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), WorldError> {
        if self.eat(kind.clone()) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kind}`")]))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), WorldError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(name),
                span,
            }) => {
                let out = (name.clone(), *span);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, Span)>, WorldError> {
        let mut out = vec![self.ident()?];
        while self.eat(TokenKind::Comma) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn world(mut self) -> Result<World, WorldError> {
        self.end = self.tokens.last().map(|t| t.span).unwrap_or_default();
        let mut instances: Vec<(String, Span)> = Vec::new();
        let mut situations: Vec<(String, Span)> = Vec::new();
        let mut tables: Vec<(Table, String, Vec<Tuple>)> = Vec::new();
        while let Some(tok) = self.peek() {
            match &tok.kind {
                TokenKind::Ident(word) if word == "instances" || word == "situations" => {
                    let is_inst = word == "instances";
                    self.pos += 1;
                    let names = self.ident_list()?;
                    self.expect(TokenKind::Semi)?;
                    if is_inst {
                        instances.extend(names);
                    } else {
                        situations.extend(names);
                    }
                }
                TokenKind::Rel | TokenKind::Fun => {
                    let kind = if tok.kind == TokenKind::Rel {
                        Table::Rel
                    } else {
                        Table::Fun
                    };
                    self.pos += 1;
                    let (name, _) = self.ident()?;
                    self.expect(TokenKind::Colon)?;
                    let mut tuples = Vec::new();
                    if !self.eat(TokenKind::Semi) {
                        loop {
                            self.expect(TokenKind::LParen)?;
                            tuples.push(self.ident_list()?);
                            self.expect(TokenKind::RParen)?;
                            if !self.eat(TokenKind::Comma) {
                                break;
                            }
                        }
                        self.expect(TokenKind::Semi)?;
                    }
                    tables.push((kind, name, tuples));
                }
                _ => return Err(self.error(&["`instances`", "`situations`", "`rel`", "`fun`"])),
            }
        }

        let mut w = World::default();
        for (name, span) in instances {
            if !w.instances.insert(name.clone()) {
                return Err(WorldError::Duplicate { name, span });
            }
        }
        for (name, span) in situations {
            if w.contains(&name) {
                return Err(WorldError::Duplicate { name, span });
            }
            w.situations.push(name);
        }
        if w.situations.is_empty() {
            return Err(WorldError::NoSituations);
        }
        for (kind, name, tuples) in tables {
            match kind {
                Table::Rel => w.declare_rel(&name),
                Table::Fun => w.declare_fun(&name),
            }
            for tuple in tuples {
                for (item, span) in &tuple {
                    if !w.contains(item) {
                        return Err(WorldError::Unknown {
                            name: item.clone(),
                            span: *span,
                        });
                    }
                }
                let names: Vec<&str> = tuple.iter().map(|(n, _)| n.as_str()).collect();
                match kind {
                    Table::Rel => {
                        let (sit, args) = names.split_last().expect("non-empty tuple");
                        if !w.is_situation(sit) {
                            let (name, span) = tuple.last().expect("non-empty").clone();
                            return Err(WorldError::NotSituation { name, span });
                        }
                        w.add_rel(&name, args, sit)?;
                    }
                    Table::Fun => w.add_fun(&name, &names)?,
                }
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_world_file() {
        let w = World::parse(
            "# robot world\ninstances r, x;\nsituations s0, s1;\nrel fragile: (x, s0);\nrel broken: ;\nfun drop: (r, x);\n",
        )
        .unwrap();
        assert_eq!(w.initial(), "s0");
        assert_eq!(w.rel_holds("fragile", &["x".into()], "s0"), Some(true));
        assert_eq!(w.rel_holds("fragile", &["x".into()], "s1"), Some(false));
        assert_eq!(w.rel_holds("broken", &["x".into()], "s0"), Some(false));
        assert_eq!(w.rel_holds("heavy", &["x".into()], "s0"), None);
        assert_eq!(w.fun_holds("drop", &["r".into(), "x".into()]), Some(true));
        assert!(w.contains("s1") && w.contains("r") && !w.contains("q"));
    }

    #[test]
    fn rejects_bad_worlds() {
        assert!(matches!(
            World::parse("instances a;"),
            Err(WorldError::NoSituations)
        ));
        assert!(matches!(
            World::parse("situations s0; rel p: (q, s0);"),
            Err(WorldError::Unknown { .. })
        ));
        assert!(matches!(
            World::parse("instances a; situations s0; rel p: (a, a);"),
            Err(WorldError::NotSituation { .. })
        ));
        assert!(matches!(
            World::parse("instances a, a; situations s0;"),
            Err(WorldError::Duplicate { .. })
        ));
        assert!(matches!(
            World::parse("situations s0 s1;"),
            Err(WorldError::Syntax(_))
        ));
    }
}
