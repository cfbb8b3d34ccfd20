use num_bigint::BigInt;

use super::{Diagnostic, Pos};
use crate::ErrorCode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    Hash,
    Eq,
    Comma,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Newline => "end of line".to_string(),
            Tok::Eof => "end of input".to_string(),
            other => format!("'{}'", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Wedge => "^^",
            Tok::Hash => "#",
            Tok::Eq => "=",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits source text into tokens. Newlines are significant only outside
/// brackets; `//` starts a comment.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut depth: Vec<Tok> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                let t = depth.is_empty().then_some(Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                if let Some(t) = t {
                    out.push(Token { tok: t, pos });
                }
                continue;
            }
            ' ' | '\t' | '\r' => None,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Int(text.parse().expect("digits")), pos });
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Ident(text), pos });
                continue;
            }
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' if chars.get(i + 1) == Some(&'^') => {
                advance = 2;
                Some(Tok::Wedge)
            }
            '^' => Some(Tok::Caret),
            '∧' => Some(Tok::Wedge),
            '#' => Some(Tok::Hash),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '(' | '[' | '{' => {
                let t = match c {
                    '(' => Tok::LParen,
                    '[' => Tok::LBracket,
                    _ => Tok::LBrace,
                };
                depth.push(t.clone());
                Some(t)
            }
            ')' | ']' | '}' => {
                let t = match c {
                    ')' => Tok::RParen,
                    ']' => Tok::RBracket,
                    _ => Tok::RBrace,
                };
                depth.pop();
                Some(t)
            }
            other => {
                return Err(Diagnostic::new(ErrorCode::Syntax, format!("unexpected character '{other}'"), Some(pos)));
            }
        };
        if let Some(tok) = tok {
            out.push(Token { tok, pos });
        }
        i += advance;
        col += advance;
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn wedge_and_power() {
        assert_eq!(
            kinds("dx1^^dy1 ∧ x1^2"),
            vec![
                Tok::Ident("dx1".into()),
                Tok::Wedge,
                Tok::Ident("dy1".into()),
                Tok::Wedge,
                Tok::Ident("x1".into()),
                Tok::Caret,
                Tok::Int(2.into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn newlines_inside_brackets_are_ignored() {
        let toks = kinds("f(1,\n2)\n// note\nx'1");
        assert_eq!(toks.iter().filter(|t| **t == Tok::Newline).count(), 2);
        assert!(toks.contains(&Tok::Ident("x'1".into())));
    }

    #[test]
    fn positions() {
        let toks = lex("a\n  $").unwrap_err();
        assert_eq!(toks.pos, Some(Pos { line: 2, col: 3 }));
    }
}
