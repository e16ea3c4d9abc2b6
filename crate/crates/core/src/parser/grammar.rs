use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{
    BehavioralTerm, BinOp, Declaration, Formula, Ident, Quantifier, SituationValue, SourceProgram,
    Span, Statement, Term, Value,
};
use crate::types::{FluentKind, Type};

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

/// Surface expression before layer resolution.
#[derive(Debug)]
enum Raw {
    Ident(Ident),
    Lit(Value, Span),
    App {
        name: Ident,
        args: Vec<Raw>,
        span: Span,
    },
    Do {
        poss: bool,
        action: Box<Raw>,
        sit: Box<Raw>,
        span: Span,
    },
    Neg(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    Eq(Box<Raw>, Box<Raw>),
    Quant {
        kind: Quantifier,
        var: Ident,
        types: Vec<Type>,
        body: Box<Raw>,
        span: Span,
    },
    Seq(Vec<Raw>, Span),
}

impl Raw {
    fn has_behavioral(&self) -> bool {
        match self {
            Raw::Ident(_) | Raw::Lit(..) => false,
            Raw::App { .. } | Raw::Do { .. } => true,
            Raw::Neg(r) => r.has_behavioral(),
            Raw::Quant { body, .. } => body.has_behavioral(),
            Raw::Bin(_, a, b) | Raw::Eq(a, b) => a.has_behavioral() || b.has_behavioral(),
            Raw::Seq(items, _) => items.iter().any(Raw::has_behavioral),
        }
    }

    fn span(&self) -> Span {
        match self {
            Raw::Ident(id) => id.span,
            Raw::Lit(_, span)
            | Raw::App { span, .. }
            | Raw::Do { span, .. }
            | Raw::Seq(_, span) => *span,
            Raw::Quant { span, body, .. } => span.join(body.span()),
            Raw::Neg(r) => r.span(),
            Raw::Bin(_, a, b) | Raw::Eq(a, b) => a.span().join(b.span()),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof: Span,
}

impl Parser {
    fn new(source: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(source)?;
        let (line, column) = source.lines().enumerate().last().map_or((1, 1), |(i, l)| {
            if source.ends_with('\n') {
                (i + 2, 1)
            } else {
                (i + 1, l.chars().count() + 1)
            }
        });
        let eof = Span {
            start: source.len(),
            end: source.len(),
            line,
            column,
            end_line: line,
            end_column: column,
        };
        Ok(Parser {
            tokens,
            pos: 0,
            eof,
        })
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn here(&self) -> Span {
        self.tokens.get(self.pos).map_or(self.eof, |t| t.span)
    }

    fn prev_span(&self) -> Span {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map_or(self.eof, |t| t.span)
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = self
            .peek()
            .map_or("end of input".to_string(), TokenKind::describe);
        ParseError {
            message: format!("expected {}, found {found}", expected.join(" or ")),
            span: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Span, ParseError> {
        if self.at(&kind) {
            self.pos += 1;
            Ok(self.prev_span())
        } else {
            Err(self.error(&[&format!("`{kind}`")]))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let id = Ident::spanned(name.clone(), self.here());
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let span = self.here();
        match self.peek() {
            Some(TokenKind::Ident(name)) => {
                let ty = Type::from_name(name).ok_or_else(|| ParseError {
                    message: format!("unknown type `{name}`"),
                    span,
                    expected: vec!["type".into()],
                })?;
                self.pos += 1;
                Ok(ty)
            }
            _ => Err(self.error(&["type"])),
        }
    }

    fn type_alternatives(&mut self) -> Result<Vec<Type>, ParseError> {
        let mut types = vec![self.ty()?];
        while self.eat(&TokenKind::Bar) {
            let ty = self.ty()?;
            if !types.contains(&ty) {
                types.push(ty);
            }
        }
        Ok(types)
    }

    // --- declarations and statements ------------------------------------

    fn declaration(&mut self) -> Result<Declaration, ParseError> {
        let start = self.here();
        match self.peek() {
            Some(TokenKind::Var) => {
                self.pos += 1;
                let name = self.ident()?;
                if name.name == "s0" {
                    return Err(ParseError::new(
                        "`s0` is reserved for the initial situation",
                        name.span,
                    ));
                }
                self.expect(TokenKind::Colon)?;
                let types = self.type_alternatives()?;
                let end = self.expect(TokenKind::Semi)?;
                Ok(Declaration::Var {
                    name,
                    types,
                    span: start.join(end),
                })
            }
            Some(TokenKind::Rel) | Some(TokenKind::Fun) => {
                let kind = if self.at(&TokenKind::Rel) {
                    FluentKind::Relational
                } else {
                    FluentKind::Functional
                };
                self.pos += 1;
                let name = self.ident()?;
                self.expect(TokenKind::LParen)?;
                let mut params = vec![self.ty()?];
                while self.eat(&TokenKind::Comma) {
                    params.push(self.ty()?);
                }
                self.expect(TokenKind::RParen)?;
                let end = self.expect(TokenKind::Semi)?;
                Ok(Declaration::Fluent {
                    kind,
                    name,
                    params,
                    span: start.join(end),
                })
            }
            _ => Err(self.error(&["`var`", "`rel`", "`fun`"])),
        }
    }

    fn statement_raw(&mut self) -> Result<(Ident, Raw, Span), ParseError> {
        let start = self.expect(TokenKind::Stmt)?;
        let name = self.ident()?;
        self.expect(TokenKind::Colon)?;
        let lhs = self.expr()?;
        let body = if self.eat(&TokenKind::Equals) {
            let rhs = self.expr()?;
            Raw::Eq(Box::new(lhs), Box::new(rhs))
        } else {
            lhs
        };
        if !self.at(&TokenKind::Semi) {
            return Err(self.error(&["`;`", "`=>`", "`/\\`", "`\\/`", "`=`"]));
        }
        let end = self.expect(TokenKind::Semi)?;
        Ok((name, body, start.join(end)))
    }

    // --- expressions ----------------------------------------------------

    fn expr(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.disj()?;
        if self.eat(&TokenKind::Implies) {
            let rhs = self.expr()?;
            return Ok(Raw::Bin(BinOp::Supset, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.conj()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.conj()?;
            lhs = Raw::Bin(BinOp::Disj, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Raw, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.unary()?;
            lhs = Raw::Bin(BinOp::Conj, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        if self.eat(&TokenKind::Tilde) {
            let inner = self.unary()?;
            return Ok(Raw::Neg(Box::new(inner)));
        }
        if self.at(&TokenKind::LParen)
            && matches!(self.peek_at(1), Some(TokenKind::Forall | TokenKind::Exists))
        {
            let start = self.here();
            self.pos += 1;
            let kind = if self.eat(&TokenKind::Forall) {
                Quantifier::Forall
            } else {
                self.pos += 1;
                Quantifier::Exists
            };
            let var = self.ident()?;
            self.expect(TokenKind::Colon)?;
            let types = self.type_alternatives()?;
            let end = self.expect(TokenKind::RParen)?;
            // The body extends as far right as possible, stopping before `=`.
            let body = self.expr()?;
            return Ok(Raw::Quant {
                kind,
                var,
                types,
                body: Box::new(body),
                span: start.join(end),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(TokenKind::Ident(name)) => {
                let id = Ident::spanned(name, start);
                self.pos += 1;
                if !self.eat(&TokenKind::LParen) {
                    if id.name == "s0" {
                        return Ok(Raw::Lit(Value::Situation(SituationValue::initial()), start));
                    }
                    return Ok(Raw::Ident(id));
                }
                let mut args = vec![self.expr()?];
                while self.eat(&TokenKind::Comma) {
                    args.push(self.expr()?);
                }
                let end = self.expect_close(&["`,`", "`)`"])?;
                Ok(Raw::App {
                    name: id,
                    args,
                    span: start.join(end),
                })
            }
            Some(kw @ (TokenKind::Do | TokenKind::Poss)) => {
                self.pos += 1;
                self.expect(TokenKind::LParen)?;
                let action = self.expr()?;
                if !self.at(&TokenKind::Comma) {
                    return Err(self.error(&["`,`"]));
                }
                self.pos += 1;
                let sit = self.expr()?;
                let end = self.expect_close(&["`)`"])?;
                Ok(Raw::Do {
                    poss: kw == TokenKind::Poss,
                    action: Box::new(action),
                    sit: Box::new(sit),
                    span: start.join(end),
                })
            }
            Some(TokenKind::True) => {
                self.pos += 1;
                Ok(Raw::Lit(Value::True, start))
            }
            Some(TokenKind::False) => {
                self.pos += 1;
                Ok(Raw::Lit(Value::False, start))
            }
            Some(TokenKind::Unit) => {
                self.pos += 1;
                Ok(Raw::Lit(Value::Unit, start))
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let first = self.expr()?;
                if !self.eat(&TokenKind::Comma) {
                    self.expect_close(&["`)`", "`,`"])?;
                    return Ok(first);
                }
                let mut items = vec![first];
                while !self.at(&TokenKind::RParen) {
                    items.push(self.expr()?);
                    if !self.eat(&TokenKind::Comma) {
                        break;
                    }
                }
                let end = self.expect_close(&["`,`", "`)`"])?;
                Ok(Raw::Seq(items, start.join(end)))
            }
            _ => Err(self.error(&["expression"])),
        }
    }

    fn expect_close(&mut self, expected: &[&str]) -> Result<Span, ParseError> {
        if self.eat(&TokenKind::RParen) {
            Ok(self.prev_span())
        } else {
            Err(self.error(expected))
        }
    }
}

// --- layer resolution ---------------------------------------------------

struct Resolver<'a> {
    fluents: &'a BTreeMap<String, FluentKind>,
}

impl Resolver<'_> {
    fn formula(&self, raw: Raw) -> Result<Formula, ParseError> {
        if let Raw::Eq(a, b) = raw {
            return Ok(Formula::Eq(
                Box::new(self.formula(*a)?),
                Box::new(self.formula(*b)?),
            ));
        }
        if !raw.has_behavioral() {
            return Ok(Formula::Term(self.term(raw)?));
        }
        Ok(match raw {
            Raw::App { .. } | Raw::Do { .. } => Formula::Atom(self.behavioral(raw)?),
            Raw::Neg(inner) => Formula::Neg(Box::new(self.formula(*inner)?)),
            Raw::Bin(op, a, b) => Formula::binary(op, self.formula(*a)?, self.formula(*b)?),
            Raw::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => Formula::Quant {
                kind,
                var,
                types,
                body: Box::new(self.formula(*body)?),
                span,
            },
            seq @ Raw::Seq(..) => Formula::Term(self.term(seq)?),
            Raw::Ident(_) | Raw::Lit(..) | Raw::Eq(..) => unreachable!("handled above"),
        })
    }

    fn term(&self, raw: Raw) -> Result<Term, ParseError> {
        Ok(match raw {
            Raw::Ident(id) => Term::Var(id),
            Raw::Lit(v, span) => Term::Lit(v, span),
            Raw::App { .. } | Raw::Do { .. } => Term::Behavioral(Box::new(self.behavioral(raw)?)),
            Raw::Neg(inner) => Term::Neg(Box::new(self.term(*inner)?)),
            Raw::Bin(op, a, b) => Term::binary(op, self.term(*a)?, self.term(*b)?),
            Raw::Quant {
                kind,
                var,
                types,
                body,
                span,
            } => Term::Quant {
                kind,
                var,
                types,
                body: Box::new(self.term(*body)?),
                span,
            },
            Raw::Seq(items, span) => Term::Seq(
                items
                    .into_iter()
                    .map(|r| self.term(r))
                    .collect::<Result<_, _>>()?,
                span,
            ),
            Raw::Eq(a, b) => {
                return Err(ParseError::new(
                    "`=` is only allowed at the top level of a statement",
                    a.span().join(b.span()),
                ))
            }
        })
    }

    fn behavioral(&self, raw: Raw) -> Result<BehavioralTerm, ParseError> {
        match raw {
            Raw::App { name, args, span } => {
                let relational = self.fluents.get(&name.name) == Some(&FluentKind::Relational);
                let mut args = args
                    .into_iter()
                    .map(|r| self.term(r))
                    .collect::<Result<Vec<_>, _>>()?;
                if relational && args.len() >= 2 {
                    let sit = args.pop().expect("at least two arguments");
                    Ok(BehavioralTerm::RelFluent {
                        name,
                        args,
                        sit: Box::new(sit),
                        span,
                    })
                } else {
                    Ok(BehavioralTerm::FunFluent { name, args, span })
                }
            }
            Raw::Do {
                poss,
                action,
                sit,
                span,
            } => {
                let action = Box::new(self.behavioral(*action)?);
                let sit = Box::new(self.term(*sit)?);
                Ok(if poss {
                    BehavioralTerm::Poss { action, sit, span }
                } else {
                    BehavioralTerm::Do { action, sit, span }
                })
            }
            Raw::Neg(inner) => Ok(BehavioralTerm::Neg(Box::new(self.behavioral(*inner)?))),
            other => Err(ParseError {
                message: "expected a behavioral term (fluent, `do` or `poss`)".into(),
                span: other.span(),
                expected: vec!["behavioral term".into()],
            }),
        }
    }
}

fn fluent_kinds(decls: &[Declaration]) -> BTreeMap<String, FluentKind> {
    decls
        .iter()
        .filter_map(|d| match d {
            Declaration::Fluent { kind, name, .. } => Some((name.name.clone(), *kind)),
            Declaration::Var { .. } => None,
        })
        .collect()
}

/// Parses a whole `.sitc` source.
pub fn parse_program(source: &str) -> Result<SourceProgram, ParseError> {
    let mut parser = Parser::new(source)?;
    let mut declarations = Vec::new();
    let mut var_names = BTreeSet::new();
    let mut fluent_names = BTreeSet::new();
    while matches!(
        parser.peek(),
        Some(TokenKind::Var | TokenKind::Rel | TokenKind::Fun)
    ) {
        let decl = parser.declaration()?;
        let (names, what) = match &decl {
            Declaration::Var { .. } => (&mut var_names, "variable"),
            Declaration::Fluent { .. } => (&mut fluent_names, "fluent"),
        };
        if !names.insert(decl.name().to_string()) {
            let span = match &decl {
                Declaration::Var { name, .. } | Declaration::Fluent { name, .. } => name.span,
            };
            return Err(ParseError::new(
                format!("{what} `{}` is declared twice", decl.name()),
                span,
            ));
        }
        declarations.push(decl);
    }
    let kinds = fluent_kinds(&declarations);
    let resolver = Resolver { fluents: &kinds };
    let mut statements = Vec::new();
    let mut stmt_names = BTreeSet::new();
    while parser.peek().is_some() {
        if matches!(
            parser.peek(),
            Some(TokenKind::Var | TokenKind::Rel | TokenKind::Fun)
        ) {
            return Err(ParseError::new(
                "declarations must precede statements",
                parser.here(),
            ));
        }
        if !parser.at(&TokenKind::Stmt) {
            return Err(parser.error(&["`stmt`", "`var`", "`rel`", "`fun`"]));
        }
        let (name, raw, span) = parser.statement_raw()?;
        if !stmt_names.insert(name.name.clone()) {
            return Err(ParseError::new(
                format!("statement `{}` is defined twice", name.name),
                name.span,
            ));
        }
        let formula = resolver.formula(raw)?;
        statements.push(Statement {
            name,
            formula,
            span,
        });
    }
    Ok(SourceProgram {
        declarations,
        statements,
    })
}

/// Parses a single statement body against the given declarations.
pub fn parse_formula(source: &str, declarations: &[Declaration]) -> Result<Formula, ParseError> {
    let mut parser = Parser::new(source)?;
    let lhs = parser.expr()?;
    let raw = if parser.eat(&TokenKind::Equals) {
        Raw::Eq(Box::new(lhs), Box::new(parser.expr()?))
    } else {
        lhs
    };
    if parser.peek().is_some() {
        return Err(parser.error(&["end of input"]));
    }
    let kinds = fluent_kinds(declarations);
    Resolver { fluents: &kinds }.formula(raw)
}
