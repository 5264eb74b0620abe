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

use std::collections::HashMap;
use std::f64::consts::PI;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, QasmError};
use crate::circuit::{Circuit, Instruction};
use crate::gates::Gate;
use crate::state::MAX_QUBITS;

const SUPPORTED_GATES: [&str; 9] = ["h", "x", "ry", "cx", "ccx", "swap", "u1", "u2", "u3"];

#[derive(Debug, Clone, Copy)]
struct Register {
    offset: usize,
    size: usize,
}

/// Operand reference: whole register or a single element.
#[derive(Debug, Clone, Copy)]
struct Arg {
    offset: usize,
    size: usize,
    index: Option<usize>,
    line: usize,
    column: usize,
}

impl Arg {
    fn width(&self) -> usize {
        if self.index.is_some() {
            1
        } else {
            self.size
        }
    }

    fn at(&self, k: usize) -> usize {
        match self.index {
            Some(i) => self.offset + i,
            None => self.offset + k,
        }
    }
}

enum Pending {
    Gate { gate: Gate, qubits: Vec<usize> },
    Measure { qubit: usize, clbit: usize },
    Barrier { qubits: Vec<usize> },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qregs: HashMap<String, Register>,
    cregs: HashMap<String, Register>,
    num_qubits: usize,
    num_clbits: usize,
    body: Vec<(Pending, usize, usize)>,
}

fn semantic(line: usize, column: usize, message: impl Into<String>) -> QasmError {
    QasmError::Semantic { line, column, message: message.into() }
}

/// Parse OpenQASM 2.0 source into a circuit.
///
/// Registers are flattened in declaration order, so the first qubit of the
/// first `qreg` is qubit 0.
pub fn parse(source: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        tokens: tokenize(source)?,
        pos: 0,
        qregs: HashMap::new(),
        cregs: HashMap::new(),
        num_qubits: 0,
        num_clbits: 0,
        body: Vec::new(),
    };
    p.header()?;
    while p.peek().tok != Tok::Eof {
        p.statement()?;
    }
    p.finish()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> QasmError {
        let t = self.peek();
        QasmError::Syntax(ParseError {
            line: t.line,
            column: t.column,
            message: format!("unexpected {}", t.tok.describe()),
            expected: expected.into(),
        })
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, QasmError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.advance()))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "OPENQASM" => {
                self.advance();
            }
            _ => return Err(self.unexpected("`OPENQASM 2.0;` header")),
        }
        let version = self.peek().clone();
        match version.tok {
            Tok::Real(2.0) => {
                self.advance();
            }
            Tok::Real(_) | Tok::Int(_) => {
                return Err(semantic(version.line, version.column, "only OPENQASM 2.0 is supported"));
            }
            _ => return Err(self.unexpected("version number")),
        }
        self.expect(Tok::Semi, "`;`")?;
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "include") {
            self.advance();
            let t = self.peek().clone();
            match &t.tok {
                Tok::Str(s) if s == "qelib1.inc" => {
                    self.advance();
                }
                Tok::Str(s) => {
                    return Err(semantic(t.line, t.column, format!("unsupported include \"{s}\"")));
                }
                _ => return Err(self.unexpected("string literal")),
            }
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (name, tok) = self.ident()?;
        match name.as_str() {
            "qreg" | "creg" => self.declaration(name == "qreg"),
            "measure" => self.measure(&tok),
            "barrier" => self.barrier(&tok),
            "OPENQASM" | "include" => {
                Err(semantic(tok.line, tok.column, format!("`{name}` must appear at the top of the program")))
            }
            _ => self.gate(name, &tok),
        }
    }

    fn declaration(&mut self, quantum: bool) -> Result<(), QasmError> {
        let (name, tok) = self.ident()?;
        self.expect(Tok::LBracket, "`[`")?;
        let size_tok = self.peek().clone();
        let size = match size_tok.tok {
            Tok::Int(v) => {
                self.advance();
                v as usize
            }
            _ => return Err(self.unexpected("register size")),
        };
        self.expect(Tok::RBracket, "`]`")?;
        self.expect(Tok::Semi, "`;`")?;
        if self.qregs.contains_key(&name) || self.cregs.contains_key(&name) {
            return Err(semantic(tok.line, tok.column, format!("register `{name}` redeclared")));
        }
        if size == 0 {
            return Err(semantic(size_tok.line, size_tok.column, "register size must be positive"));
        }
        if quantum {
            if self.num_qubits + size > MAX_QUBITS {
                return Err(semantic(
                    size_tok.line,
                    size_tok.column,
                    format!("total qubit count exceeds {MAX_QUBITS}"),
                ));
            }
            self.qregs.insert(name, Register { offset: self.num_qubits, size });
            self.num_qubits += size;
        } else {
            self.cregs.insert(name, Register { offset: self.num_clbits, size });
            self.num_clbits += size;
        }
        Ok(())
    }

    fn arg(&mut self, quantum: bool) -> Result<Arg, QasmError> {
        let (name, tok) = self.ident()?;
        let table = if quantum { &self.qregs } else { &self.cregs };
        let reg = match table.get(&name) {
            Some(r) => *r,
            None => {
                let kind = if quantum { "quantum" } else { "classical" };
                return Err(semantic(tok.line, tok.column, format!("undeclared {kind} register `{name}`")));
            }
        };
        let mut index = None;
        if self.peek().tok == Tok::LBracket {
            self.advance();
            let it = self.peek().clone();
            let i = match it.tok {
                Tok::Int(v) => {
                    self.advance();
                    v as usize
                }
                _ => return Err(self.unexpected("index")),
            };
            self.expect(Tok::RBracket, "`]`")?;
            if i >= reg.size {
                return Err(semantic(
                    it.line,
                    it.column,
                    format!("index {i} out of range for register `{name}` of size {}", reg.size),
                ));
            }
            index = Some(i);
        }
        Ok(Arg { offset: reg.offset, size: reg.size, index, line: tok.line, column: tok.column })
    }

    fn arg_list(&mut self) -> Result<Vec<Arg>, QasmError> {
        let mut args = vec![self.arg(true)?];
        while self.peek().tok == Tok::Comma {
            self.advance();
            args.push(self.arg(true)?);
        }
        Ok(args)
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut value = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.advance();
                    value *= self.unary()?;
                }
                Tok::Slash => {
                    let t = self.advance();
                    let d = self.unary()?;
                    if d == 0.0 {
                        return Err(semantic(t.line, t.column, "division by zero in angle expression"));
                    }
                    value /= d;
                }
                _ => return Ok(value),
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Minus => {
                self.advance();
                Ok(-self.unary()?)
            }
            Tok::Real(v) => {
                self.advance();
                Ok(v)
            }
            Tok::Int(v) => {
                self.advance();
                Ok(v as f64)
            }
            Tok::Ident(ref s) if s == "pi" => {
                self.advance();
                Ok(PI)
            }
            _ => Err(self.unexpected("angle expression")),
        }
    }

    fn gate(&mut self, name: String, tok: &Token) -> Result<(), QasmError> {
        let mut params = Vec::new();
        if self.peek().tok == Tok::LParen {
            self.advance();
            if self.peek().tok != Tok::RParen {
                params.push(self.expr()?);
                while self.peek().tok == Tok::Comma {
                    self.advance();
                    params.push(self.expr()?);
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        let lower = name.to_ascii_lowercase();
        if !SUPPORTED_GATES.contains(&name.as_str()) {
            let msg = if SUPPORTED_GATES.contains(&lower.as_str()) {
                format!("gate names are case-sensitive; use `{lower}`")
            } else {
                format!("unsupported gate `{name}`")
            };
            return Err(semantic(tok.line, tok.column, msg));
        }
        let gate =
            Gate::from_name(&name, &params).map_err(|e| semantic(tok.line, tok.column, e.to_string()))?;
        let args = self.arg_list()?;
        self.expect(Tok::Semi, "`;`")?;
        if args.len() != gate.arity() {
            return Err(semantic(
                tok.line,
                tok.column,
                format!("gate `{name}` takes {} qubit argument(s), got {}", gate.arity(), args.len()),
            ));
        }
        let width = broadcast_width(&args)?;
        for k in 0..width {
            let qubits: Vec<usize> = args.iter().map(|a| a.at(k)).collect();
            self.body.push((Pending::Gate { gate, qubits }, tok.line, tok.column));
        }
        Ok(())
    }

    fn measure(&mut self, tok: &Token) -> Result<(), QasmError> {
        let q = self.arg(true)?;
        self.expect(Tok::Arrow, "`->`")?;
        let c = self.arg(false)?;
        self.expect(Tok::Semi, "`;`")?;
        if q.width() != c.width() {
            return Err(semantic(
                c.line,
                c.column,
                format!("measure width mismatch: {} qubit(s) into {} bit(s)", q.width(), c.width()),
            ));
        }
        for k in 0..q.width() {
            self.body.push((Pending::Measure { qubit: q.at(k), clbit: c.at(k) }, tok.line, tok.column));
        }
        Ok(())
    }

    fn barrier(&mut self, tok: &Token) -> Result<(), QasmError> {
        let args = self.arg_list()?;
        self.expect(Tok::Semi, "`;`")?;
        let mut qubits = Vec::new();
        for a in &args {
            for k in 0..a.width() {
                let q = a.at(k);
                if !qubits.contains(&q) {
                    qubits.push(q);
                }
            }
        }
        self.body.push((Pending::Barrier { qubits }, tok.line, tok.column));
        Ok(())
    }

    fn finish(self) -> Result<Circuit, QasmError> {
        if self.num_qubits == 0 {
            let t = self.peek();
            return Err(semantic(t.line, t.column, "program declares no qubits"));
        }
        let mut circuit = Circuit::new("qasm", self.num_qubits, self.num_clbits);
        for (pending, line, column) in self.body {
            let inst = match pending {
                Pending::Gate { gate, qubits } => Instruction::Gate { gate, qubits },
                Pending::Measure { qubit, clbit } => Instruction::Measure { qubit, clbit },
                Pending::Barrier { qubits } => Instruction::Barrier { qubits },
            };
            circuit.append(inst).map_err(|e| semantic(line, column, e.to_string()))?;
        }
        Ok(circuit)
    }
}

fn broadcast_width(args: &[Arg]) -> Result<usize, QasmError> {
    let mut width = 1;
    for a in args.iter().filter(|a| a.index.is_none()) {
        if width != 1 && a.size != width {
            return Err(semantic(a.line, a.column, "broadcast registers differ in size"));
        }
        width = a.size;
    }
    Ok(width)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";

    #[test]
    fn parses_bell() {
        let c = parse(BELL).unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.num_clbits(), 2);
        assert_eq!(c.instructions().len(), 4);
        assert_eq!(c.instructions()[3], Instruction::Measure { qubit: 1, clbit: 1 });
    }

    #[test]
    fn angle_expressions() {
        let c = parse("OPENQASM 2.0;\nqreg q[1];\nry(-pi/2) q[0];\nu3(2*pi/3, 0.5, -1.5e-1) q[0];").unwrap();
        let gates: Vec<_> = c.gates().map(|(g, _)| *g).collect();
        assert_eq!(gates[0], Gate::Ry(-PI / 2.0));
        assert_eq!(gates[1], Gate::U3(2.0 * PI / 3.0, 0.5, -0.15));
    }

    #[test]
    fn registers_flatten_in_order() {
        let c = parse("OPENQASM 2.0;\nqreg a[1];\nqreg b[2];\ncx a[0], b[1];").unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.instructions()[0], Instruction::gate(Gate::CX, &[0, 2]));
    }

    #[test]
    fn broadcast_single_qubit_gate() {
        let c = parse("OPENQASM 2.0;\nqreg q[3];\nh q;").unwrap();
        assert_eq!(c.instructions().len(), 3);
    }

    #[test]
    fn missing_header() {
        let e = parse("qreg q[1];").unwrap_err();
        assert_eq!(e.position(), Some((1, 1)));
        assert!(matches!(e, QasmError::Syntax(_)));
    }

    #[test]
    fn out_of_range_index_is_positioned() {
        let e = parse("OPENQASM 2.0;\nqreg q[2];\nh q[2];").unwrap_err();
        assert_eq!(e.position(), Some((3, 5)));
        assert!(matches!(e, QasmError::Semantic { .. }));
    }

    #[test]
    fn unsupported_gate() {
        let e = parse("OPENQASM 2.0;\nqreg q[1];\nrz(0.1) q[0];").unwrap_err();
        assert_eq!(e.position(), Some((3, 1)));
    }

    #[test]
    fn missing_semicolon() {
        let e = parse("OPENQASM 2.0;\nqreg q[1];\nh q[0]\nx q[0];").unwrap_err();
        match e {
            QasmError::Syntax(p) => {
                assert_eq!((p.line, p.column), (4, 1));
                assert_eq!(p.expected, "`;`");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gate_after_measure_rejected() {
        let e = parse("OPENQASM 2.0;\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\nx q[0];").unwrap_err();
        assert_eq!(e.position(), Some((5, 1)));
    }

    #[test]
    fn pi_product_angle() {
        let c = parse("OPENQASM 2.0;\nqreg q[1];\nry(0.575*pi) q[0];").unwrap();
        match c.instructions()[0] {
            Instruction::Gate { gate: Gate::Ry(t), .. } => assert!((t - 0.575 * PI).abs() < 1e-15),
            ref other => panic!("{other:?}"),
        }
    }
}
