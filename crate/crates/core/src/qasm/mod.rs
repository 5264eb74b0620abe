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

//! Strict OpenQASM 2.0 subset: parsing and canonical emission.
//!
//! Grammar (after the lexer strips `//` comments and whitespace):
//!
//! ```text
//! program   := "OPENQASM" REAL ";" include? statement*
//! include   := "include" STRING ";"            (only "qelib1.inc")
//! statement := "qreg" ID "[" INT "]" ";"
//!            | "creg" ID "[" INT "]" ";"
//!            | ID ( "(" expr ("," expr)* ")" )? arg ("," arg)* ";"
//!            | "measure" arg "->" arg ";"
//!            | "barrier" arg ("," arg)* ";"
//! arg       := ID ( "[" INT "]" )?
//! expr      := unary (("*" | "/") unary)*
//! unary     := "-" unary | REAL | INT | "pi"
//! ```
//!
//! Supported gates: h, x, ry, cx, ccx, swap, u1, u2, u3. A bare register
//! argument broadcasts over the register. There are no gate definitions,
//! `if`, `reset` or `opaque`.

mod emit;
mod lexer;
mod parser;

pub use emit::emit;
pub use parser::parse;

use std::fmt;

use thiserror::Error;

/// Lexical or syntactic failure at a source position (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Token class the parser was looking for.
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QasmError {
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error("semantic error at {line}:{column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
    #[error("cannot emit: {0}")]
    Emit(String),
}

impl QasmError {
    /// (line, column) of the offending token, when the error has one.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            QasmError::Syntax(e) => Some((e.line, e.column)),
            QasmError::Semantic { line, column, .. } => Some((*line, *column)),
            QasmError::Emit(_) => None,
        }
    }

    /// Message without the position prefix.
    pub fn detail(&self) -> String {
        match self {
            QasmError::Syntax(e) if e.expected.is_empty() => e.message.clone(),
            QasmError::Syntax(e) => format!("{} (expected {})", e.message, e.expected),
            QasmError::Semantic { message, .. } | QasmError::Emit(message) => message.clone(),
        }
    }
}
