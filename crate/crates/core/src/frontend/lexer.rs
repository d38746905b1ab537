use std::fmt;

use num::BigInt;
use thiserror::Error;

/// One-based line/column of a token's first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    // keywords
    Machine,
    End,
    Variables,
    Constants,
    Values,
    Operations,
    If,
    Then,
    Else,
    While,
    Do,
    Begin,
    Or,
    True,
    False,
    Ident(String),
    Int(BigInt),
    // symbols
    Assign,
    EqEq,
    Wedge,
    Vee,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Leq,
    Eq,
    Semi,
    Comma,
    LParen,
    RParen,
    Tilde,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TokenKind::*;
        let s = match self {
            Machine => "MACHINE",
            End => "END",
            Variables => "VARIABLES",
            Constants => "CONSTANTS",
            Values => "VALUES",
            Operations => "OPERATIONS",
            If => "IF",
            Then => "THEN",
            Else => "ELSE",
            While => "WHILE",
            Do => "DO",
            Begin => "BEGIN",
            Or => "OR",
            True => "true",
            False => "false",
            Ident(name) => return write!(f, "identifier `{name}`"),
            Int(n) => return write!(f, "integer `{n}`"),
            Assign => ":=",
            EqEq => "==",
            Wedge => "/\\",
            Vee => "\\/",
            Plus => "+",
            Minus => "-",
            Star => "*",
            Slash => "/",
            Lt => "<",
            Leq => "<=",
            Eq => "=",
            Semi => ";",
            Comma => ",",
            LParen => "(",
            RParen => ")",
            Tilde => "~",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexical error at {pos}: unexpected character {found:?}")]
pub struct LexError {
    pub pos: Pos,
    pub found: char,
}

fn keyword(word: &str) -> Option<TokenKind> {
    use TokenKind::*;
    Some(match word {
        "MACHINE" => Machine,
        "END" => End,
        "VARIABLES" => Variables,
        "CONSTANTS" => Constants,
        "VALUES" => Values,
        "OPERATIONS" => Operations,
        "IF" => If,
        "THEN" => Then,
        "ELSE" => Else,
        "WHILE" => While,
        "DO" => Do,
        "BEGIN" => Begin,
        "OR" => Or,
        "true" => True,
        "false" => False,
        _ => return None,
    })
}

/// Splits AMN source text into tokens. `//` starts a comment running to the
/// end of the line.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    let mut tokens = Vec::new();
    let mut chars = source.char_indices().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    while let Some(&(start, c)) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let word = &source[start..end];
            let kind = keyword(word).unwrap_or_else(|| TokenKind::Ident(word.to_string()));
            tokens.push(Token { kind, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let n: BigInt = source[start..end].parse().expect("ascii digits");
            tokens.push(Token { kind: TokenKind::Int(n), pos });
            continue;
        }

        chars.next();
        col += 1;
        let next = chars.peek().map(|&(_, d)| d);
        let (kind, two) = match (c, next) {
            ('/', Some('/')) => {
                // comment: skip to end of line, leave the newline for the main loop
                while let Some(&(_, d)) = chars.peek() {
                    if d == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
                continue;
            }
            (':', Some('=')) => (TokenKind::Assign, true),
            ('=', Some('=')) => (TokenKind::EqEq, true),
            ('/', Some('\\')) => (TokenKind::Wedge, true),
            ('\\', Some('/')) => (TokenKind::Vee, true),
            ('<', Some('=')) => (TokenKind::Leq, true),
            ('=', _) => (TokenKind::Eq, false),
            ('<', _) => (TokenKind::Lt, false),
            ('+', _) => (TokenKind::Plus, false),
            ('-', _) => (TokenKind::Minus, false),
            ('*', _) => (TokenKind::Star, false),
            ('/', _) => (TokenKind::Slash, false),
            (';', _) => (TokenKind::Semi, false),
            (',', _) => (TokenKind::Comma, false),
            ('(', _) => (TokenKind::LParen, false),
            (')', _) => (TokenKind::RParen, false),
            ('~', _) => (TokenKind::Tilde, false),
            _ => return Err(LexError { pos, found: c }),
        };
        if two {
            chars.next();
            col += 1;
        }
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}
