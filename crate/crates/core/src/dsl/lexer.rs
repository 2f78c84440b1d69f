//! Tokenizer. Newlines are significant at brace depth, ignored inside
//! parentheses and brackets.

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Str(String),
    Comment(String),
    Newline,
    Semi,
    Comma,
    Colon,
    Arrow,
    Eq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Comment(_) => "comment".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let start = i;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                if depth == 0 {
                    out.push(Token { tok: Tok::Newline, span });
                }
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                Tok::Comment(chars[start + 1..i].iter().collect::<String>().trim().to_string())
            }
            '"' => {
                i += 1;
                while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                    i += 1;
                }
                if i >= chars.len() || chars[i] != '"' {
                    return Err(ParseError::new(span, vec!["closing `\"`".into()], "end of line".into()));
                }
                i += 1;
                Tok::Str(chars[start + 1..i - 1].iter().collect())
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(chars[start..i].iter().collect())
            }
            c if ident_start(c) => {
                // `:` continues a name when a letter follows (`d:x1`)
                loop {
                    while i < chars.len() && ident_char(chars[i]) {
                        i += 1;
                    }
                    if i + 1 < chars.len() && chars[i] == ':' && ident_start(chars[i + 1]) {
                        i += 1;
                    } else {
                        break;
                    }
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            _ => {
                i += 1;
                match c {
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    '=' => Tok::Eq,
                    '+' => Tok::Plus,
                    '-' if chars.get(i) == Some(&'>') => {
                        i += 1;
                        Tok::Arrow
                    }
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' | '[' => {
                        depth += 1;
                        if c == '(' {
                            Tok::LParen
                        } else {
                            Tok::LBracket
                        }
                    }
                    ')' | ']' => {
                        depth = depth.saturating_sub(1);
                        if c == ')' {
                            Tok::RParen
                        } else {
                            Tok::RBracket
                        }
                    }
                    other => {
                        return Err(ParseError::new(span, vec!["a token".into()], format!("character `{other}`")));
                    }
                }
            }
        };
        col += i - start;
        out.push(Token { tok, span });
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}
