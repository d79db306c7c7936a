use std::fmt;

use super::diag::{ParseDiagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    Arrow,
    Ge,
    Question,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{}'", s),
            Tok::Number(n) => write!(f, "number {}", n),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Colon => f.write_str("':'"),
            Tok::Eq => f.write_str("'='"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Ge => f.write_str("'>='"),
            Tok::Question => f.write_str("'?'"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits `text` into tokens. `#` starts a comment running to end of line.
///
/// `first_line` offsets line numbers so line-oriented formats can lex one line at a time.
pub(crate) fn lex(file: &str, text: &str, first_line: usize) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut out = Vec::new();
    let mut line = first_line;
    let mut column = 1;
    let mut chars = text.chars().peekable();

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Eq),
            '?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(tok) = single {
            bump(&mut chars);
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c == '>' {
            bump(&mut chars);
            if chars.peek() == Some(&'=') {
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Ge,
                    line: start_line,
                    column: start_col,
                });
                continue;
            }
            return Err(ParseDiagnostic::error(
                SourceSpan::new(file, start_line, start_col),
                "expected '>='",
            ));
        }
        if c == '-' {
            bump(&mut chars);
            if chars.peek() == Some(&'>') {
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Arrow,
                    line: start_line,
                    column: start_col,
                });
                continue;
            }
            let mut text = String::from("-");
            while let Some(&c) = chars.peek() {
                if !is_number_char(c, &text) {
                    break;
                }
                text.push(c);
                bump(&mut chars);
            }
            out.push(number(file, &text, start_line, start_col)?);
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut text = String::new();
            while let Some(&c) = chars.peek() {
                if !is_number_char(c, &text) {
                    break;
                }
                text.push(c);
                bump(&mut chars);
            }
            out.push(number(file, &text, start_line, start_col)?);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_') {
                    break;
                }
                text.push(c);
                bump(&mut chars);
            }
            out.push(Token {
                tok: Tok::Ident(text),
                line: start_line,
                column: start_col,
            });
            continue;
        }
        return Err(ParseDiagnostic::error(
            SourceSpan::new(file, start_line, start_col),
            format!("unexpected character {:?}", c),
        ));
    }
    Ok(out)
}

fn is_number_char(c: char, so_far: &str) -> bool {
    c.is_ascii_digit()
        || c == '.'
        || c == 'e'
        || c == 'E'
        || ((c == '+' || c == '-') && (so_far.ends_with('e') || so_far.ends_with('E')))
}

fn number(file: &str, text: &str, line: usize, column: usize) -> Result<Token, ParseDiagnostic> {
    match text.parse::<f64>() {
        Ok(n) if n.is_finite() => Ok(Token {
            tok: Tok::Number(n),
            line,
            column,
        }),
        _ => Err(ParseDiagnostic::error(
            SourceSpan::new(file, line, column),
            format!("invalid number '{}'", text),
        )),
    }
}
