// Copyright 2026 The qexp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use super::{ParseError, QasmError};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow,
    Star,
    Slash,
    Minus,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Real(v) => format!("real `{v}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn lex_error(line: usize, column: usize, message: impl Into<String>, expected: &str) -> QasmError {
    QasmError::Syntax(ParseError { line, column, message: message.into(), expected: expected.into() })
}

/// Split source into tokens; CRLF and LF line endings are both accepted.
pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok| tokens.push(Token { tok, line: start_line, column: start_col });
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            ';' => push(Tok::Semi),
            ',' => push(Tok::Comma),
            '[' => push(Tok::LBracket),
            ']' => push(Tok::RBracket),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '*' => push(Tok::Star),
            '/' => push(Tok::Slash),
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow);
                i += 2;
                col += 2;
                continue;
            }
            '-' => push(Tok::Minus),
            '"' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '"' {
                    return Err(lex_error(line, col, "unterminated string literal", "closing `\"`"));
                }
                let s: String = chars[i + 1..j].iter().collect();
                push(Tok::Str(s));
                col += j + 1 - i;
                i = j + 1;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                push(Tok::Ident(chars[i..j].iter().collect()));
                col += j - i;
                i = j;
                continue;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let mut is_real = false;
                if j < chars.len() && chars[j] == '.' {
                    is_real = true;
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        is_real = true;
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    } else {
                        return Err(lex_error(line, col, "malformed exponent in number", "digits"));
                    }
                }
                let text: String = chars[i..j].iter().collect();
                if text == "." {
                    return Err(lex_error(line, col, "stray `.`", "number"));
                }
                let tok = if is_real {
                    Tok::Real(text.parse().map_err(|_| lex_error(line, col, "malformed number", "number"))?)
                } else {
                    Tok::Int(text.parse().map_err(|_| lex_error(line, col, "integer too large", "integer"))?)
                };
                push(tok);
                col += j - i;
                i = j;
                continue;
            }
            other => {
                return Err(lex_error(line, col, format!("unexpected character `{other}`"), "token"));
            }
        }
        i += 1;
        col += 1;
    }
    tokens.push(Token { tok: Tok::Eof, line, column: col });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("OPENQASM 2.0;\r\n  h q[0];").unwrap();
        assert_eq!((t[0].line, t[0].column), (1, 1));
        assert_eq!(t[1].tok, Tok::Real(2.0));
        assert_eq!((t[1].line, t[1].column), (1, 10));
        assert_eq!(t[3].tok, Tok::Ident("h".into()));
        assert_eq!((t[3].line, t[3].column), (2, 3));
    }

    #[test]
    fn numbers_and_arrow() {
        let t = tokenize("1.5e-3 7 -> - .5").unwrap();
        assert_eq!(t[0].tok, Tok::Real(1.5e-3));
        assert_eq!(t[1].tok, Tok::Int(7));
        assert_eq!(t[2].tok, Tok::Arrow);
        assert_eq!(t[3].tok, Tok::Minus);
        assert_eq!(t[4].tok, Tok::Real(0.5));
    }

    #[test]
    fn bad_character() {
        let e = tokenize("h q[0];\n  $").unwrap_err();
        assert_eq!(e.position(), Some((2, 3)));
    }
}
