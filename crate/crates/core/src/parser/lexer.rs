use std::fmt;

use crate::ast::Span;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    // keywords
    Forall,
    Exists,
    Do,
    Poss,
    True,
    False,
    Unit,
    Var,
    Rel,
    Fun,
    Stmt,
    // operators
    Tilde,
    And,
    Or,
    Implies,
    Equals,
    Colon,
    LParen,
    RParen,
    Comma,
    Semi,
    Bar,
    Ident(String),
}

impl TokenKind {
    fn keyword(word: &str) -> Option<TokenKind> {
        Some(match word {
            "forall" => TokenKind::Forall,
            "exists" => TokenKind::Exists,
            "do" => TokenKind::Do,
            "poss" => TokenKind::Poss,
            "true" => TokenKind::True,
            "false" => TokenKind::False,
            "unit" => TokenKind::Unit,
            "var" => TokenKind::Var,
            "rel" => TokenKind::Rel,
            "fun" => TokenKind::Fun,
            "stmt" => TokenKind::Stmt,
            _ => return None,
        })
    }

    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            other => format!("`{other}`"),
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Forall => "forall",
            TokenKind::Exists => "exists",
            TokenKind::Do => "do",
            TokenKind::Poss => "poss",
            TokenKind::True => "true",
            TokenKind::False => "false",
            TokenKind::Unit => "unit",
            TokenKind::Var => "var",
            TokenKind::Rel => "rel",
            TokenKind::Fun => "fun",
            TokenKind::Stmt => "stmt",
            TokenKind::Tilde => "~",
            TokenKind::And => "/\\",
            TokenKind::Or => "\\/",
            TokenKind::Implies => "=>",
            TokenKind::Equals => "=",
            TokenKind::Colon => ":",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Bar => "|",
            TokenKind::Ident(name) => name,
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.pos, self.line, self.column)
    }

    fn span_from(&self, (start, line, column): (usize, usize, usize)) -> Span {
        Span {
            start,
            end: self.pos,
            line,
            column,
            end_line: self.line,
            end_column: self.column,
        }
    }
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        let start = cur.mark();
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            {
                cur.bump();
            }
            let word = &source[start.0..cur.pos];
            TokenKind::keyword(word).unwrap_or_else(|| TokenKind::Ident(word.to_string()))
        } else {
            let two = (c, cur.peek2());
            let (kind, len) = match two {
                ('/', Some('\\')) => (TokenKind::And, 2),
                ('\\', Some('/')) => (TokenKind::Or, 2),
                ('=', Some('>')) => (TokenKind::Implies, 2),
                ('=', _) => (TokenKind::Equals, 1),
                ('~', _) => (TokenKind::Tilde, 1),
                (':', _) => (TokenKind::Colon, 1),
                ('(', _) => (TokenKind::LParen, 1),
                (')', _) => (TokenKind::RParen, 1),
                (',', _) => (TokenKind::Comma, 1),
                (';', _) => (TokenKind::Semi, 1),
                ('|', _) => (TokenKind::Bar, 1),
                _ => {
                    cur.bump();
                    return Err(ParseError::lex(c, cur.span_from(start)));
                }
            };
            for _ in 0..len {
                cur.bump();
            }
            kind
        };
        tokens.push(Token {
            kind,
            span: cur.span_from(start),
        });
    }
    Ok(tokens)
}
