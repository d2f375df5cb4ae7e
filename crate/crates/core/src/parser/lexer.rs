use std::sync::Arc;

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Int(u64),
    Str(String),
    /// `#int`, `#succ`
    Builtin(String),
    If,
    Comma,
    Dot,
    LParen,
    RParen,
    Bar,
    Question,
    LBrace,
    RBrace,
    Minus,
    Plus,
    Star,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Str(s) | Tok::Builtin(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::If => "`:-`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Question => "`?`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(file: &Arc<str>, src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut line_start = 0usize;
    let span_at = |line: u32, line_start: usize, pos: usize| SourceSpan {
        file: file.clone(),
        line,
        column: (pos - line_start + 1) as u32,
    };

    while i < bytes.len() {
        let c = bytes[i];
        let span = span_at(line, line_start, i);
        match c {
            b'\n' => {
                i += 1;
                line += 1;
                line_start = i;
            }
            b' ' | b'\t' | b'\r' | 0x0c => i += 1,
            b'%' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = src[start..i].to_string();
                let tok = if c.is_ascii_lowercase() {
                    Tok::Ident(word)
                } else {
                    Tok::Var(word)
                };
                out.push(Token { tok, span });
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i].parse::<u64>().map_err(|_| ParseError {
                    span: span.clone(),
                    message: format!("integer `{}` out of range", &src[start..i]),
                })?;
                out.push(Token { tok: Tok::Int(n), span });
            }
            b'"' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' && bytes[i] != b'\n' {
                    i += 1;
                }
                if i >= bytes.len() || bytes[i] != b'"' {
                    return Err(ParseError {
                        span,
                        message: "unterminated string constant".into(),
                    });
                }
                i += 1;
                out.push(Token {
                    tok: Tok::Str(src[start..i].to_string()),
                    span,
                });
            }
            b'#' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &src[start..i];
                if word != "#int" && word != "#succ" {
                    return Err(ParseError {
                        span,
                        message: format!("unknown built-in `{word}`"),
                    });
                }
                out.push(Token {
                    tok: Tok::Builtin(word.to_string()),
                    span,
                });
            }
            _ => {
                let next = bytes.get(i + 1).copied();
                let (tok, len) = match (c, next) {
                    (b':', Some(b'-')) => (Tok::If, 2),
                    (b'<', Some(b'=')) => (Tok::Le, 2),
                    (b'<', Some(b'>')) => (Tok::Ne, 2),
                    (b'>', Some(b'=')) => (Tok::Ge, 2),
                    (b'!', Some(b'=')) => (Tok::Ne, 2),
                    (b'<', _) => (Tok::Lt, 1),
                    (b'>', _) => (Tok::Gt, 1),
                    (b'=', _) => (Tok::Eq, 1),
                    (b',', _) => (Tok::Comma, 1),
                    (b'.', _) => (Tok::Dot, 1),
                    (b'(', _) => (Tok::LParen, 1),
                    (b')', _) => (Tok::RParen, 1),
                    (b'|', _) => (Tok::Bar, 1),
                    (b'?', _) => (Tok::Question, 1),
                    (b'{', _) => (Tok::LBrace, 1),
                    (b'}', _) => (Tok::RBrace, 1),
                    (b'-', _) => (Tok::Minus, 1),
                    (b'+', _) => (Tok::Plus, 1),
                    (b'*', _) => (Tok::Star, 1),
                    _ => {
                        let ch = src[i..].chars().next().unwrap_or('?');
                        return Err(ParseError {
                            span,
                            message: format!("unexpected character `{}`", ch.escape_default()),
                        });
                    }
                };
                i += len;
                out.push(Token { tok, span });
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span_at(line, line_start, bytes.len()),
    });
    Ok(out)
}
