// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Line-oriented circuit text.
//!
//! ```text
//! # comment
//! qubits 3
//! label q[0] I
//! label q[2] D
//! y(0.5) q[0]
//! ytilde(0.6666666666666666) q[1] ctrl q[2] nctrl q[0]
//! swap q[0] q[1]
//! rot2(0,3,-0.5) q[0] q[1]
//! ```
//!
//! Unlabelled qubits default to `I`. Parameters are written with the
//! shortest decimal form that parses back to the same `f64`.

use std::fmt::Write as _;

use super::Circuit;
use crate::error::{Error, Result};
use crate::sim::{Control, GateKind, GateSpec, Polarity, Register};

pub(super) fn emit(c: &Circuit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "qubits {}", c.n_qubits());
    for (q, r) in c.labels().iter().enumerate() {
        let _ = writeln!(s, "label q[{q}] {r}");
    }
    for g in c.gates() {
        s.push_str(&gate_line(g));
        s.push('\n');
    }
    s
}

fn gate_line(g: &GateSpec) -> String {
    let mut s = String::from(g.kind().name());
    match *g.kind() {
        GateKind::Ry(x) | GateKind::Y(x) | GateKind::YTilde(x) | GateKind::Phase(x) => {
            let _ = write!(s, "({x})");
        }
        GateKind::TwoLevel { a, b, theta } => {
            let _ = write!(s, "({a},{b},{theta})");
        }
        GateKind::X | GateKind::H | GateKind::Swap => {}
    }
    for t in g.targets() {
        let _ = write!(s, " q[{t}]");
    }
    for (word, pol) in [("ctrl", Polarity::One), ("nctrl", Polarity::Zero)] {
        let qs: Vec<usize> = g
            .controls()
            .iter()
            .filter(|c| c.polarity == pol)
            .map(|c| c.qubit)
            .collect();
        if !qs.is_empty() {
            s.push(' ');
            s.push_str(word);
            for q in qs {
                let _ = write!(s, " q[{q}]");
            }
        }
    }
    s
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    tok.strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| err(line, format!("expected a qubit like q[3], found `{tok}`")))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| err(line, format!("bad number `{tok}`")))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

fn parse_u64(tok: &str, line: usize) -> Result<u64> {
    tok.trim()
        .parse()
        .map_err(|_| err(line, format!("bad basis index `{tok}`")))
}

/// Parse circuit text. Errors carry 1-based line numbers.
pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = split_head(content);
        match head {
            "qubits" => {
                if circuit.is_some() {
                    return Err(err(line, "duplicate `qubits` header"));
                }
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(line, format!("bad qubit count `{}`", rest.trim())))?;
                circuit = Some(Circuit::new(n));
            }
            "label" => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err(line, "`label` before `qubits`"))?;
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(err(line, "expected `label q[i] <I|D|A|S>`"));
                }
                let q = parse_qubit(toks[0], line)?;
                let mut chars = toks[1].chars();
                let reg = match (chars.next(), chars.next()) {
                    (Some(ch), None) => Register::from_char(ch),
                    _ => None,
                }
                .ok_or_else(|| err(line, format!("unknown register `{}`", toks[1])))?;
                c.set_label(q, reg).map_err(|e| err(line, e.to_string()))?;
            }
            _ => {
                let c = circuit
                    .as_mut()
                    .ok_or_else(|| err(line, "gate before `qubits` header"))?;
                let gate = parse_gate(content, line)?;
                c.push(gate).map_err(|e| err(line, e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| err(0, "missing `qubits` header"))
}

/// Split off the first word, keeping a parenthesised parameter list attached.
fn split_head(content: &str) -> (&str, &str) {
    let end = match (content.find('('), content.find(char::is_whitespace)) {
        (Some(p), Some(w)) if p < w => content[p..]
            .find(')')
            .map(|c| p + c + 1)
            .unwrap_or(content.len()),
        (Some(p), None) => content[p..]
            .find(')')
            .map(|c| p + c + 1)
            .unwrap_or(content.len()),
        (_, Some(w)) => w,
        (None, None) => content.len(),
    };
    (&content[..end], &content[end..])
}

fn parse_gate(content: &str, line: usize) -> Result<GateSpec> {
    let (head, rest) = split_head(content);
    let (name, params): (&str, Vec<&str>) = match head.find('(') {
        Some(p) => {
            let inner = head[p + 1..]
                .strip_suffix(')')
                .ok_or_else(|| err(line, "unterminated parameter list"))?;
            (&head[..p], inner.split(',').collect())
        }
        None => (head, Vec::new()),
    };
    let want = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(err(
                line,
                format!("`{name}` takes {n} parameter(s), got {}", params.len()),
            ));
        }
        Ok(())
    };
    let kind = match name {
        "x" | "h" | "swap" => {
            if !params.is_empty() {
                return Err(err(line, format!("`{name}` takes no parameters")));
            }
            match name {
                "x" => GateKind::X,
                "h" => GateKind::H,
                _ => GateKind::Swap,
            }
        }
        "ry" => {
            want(1)?;
            GateKind::Ry(parse_f64(params[0], line)?)
        }
        "y" => {
            want(1)?;
            GateKind::Y(parse_f64(params[0], line)?)
        }
        "ytilde" => {
            want(1)?;
            GateKind::YTilde(parse_f64(params[0], line)?)
        }
        "phase" => {
            want(1)?;
            GateKind::Phase(parse_f64(params[0], line)?)
        }
        "rot2" => {
            want(3)?;
            GateKind::TwoLevel {
                a: parse_u64(params[0], line)?,
                b: parse_u64(params[1], line)?,
                theta: parse_f64(params[2], line)?,
            }
        }
        other => return Err(err(line, format!("unknown gate `{other}`"))),
    };
    let mut targets = Vec::new();
    let mut controls = Vec::new();
    let mut mode: Option<Polarity> = None;
    for tok in rest.split_whitespace() {
        match tok {
            "ctrl" => mode = Some(Polarity::One),
            "nctrl" => mode = Some(Polarity::Zero),
            _ => {
                let q = parse_qubit(tok, line)?;
                match mode {
                    None => targets.push(q),
                    Some(polarity) => controls.push(Control { qubit: q, polarity }),
                }
            }
        }
    }
    GateSpec::from_parts(kind, targets, controls).map_err(|e| err(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_h_line() {
        let mut c = Circuit::new(1);
        c.push(GateSpec::h(0)).unwrap();
        let text = c.emit_text();
        assert!(text.lines().any(|l| l == "h q[0]"));
        assert_eq!(parse_text(&text).unwrap(), c);
    }

    #[test]
    fn round_trip_all_kinds() {
        let mut c = Circuit::new(4);
        c.set_label(3, Register::D).unwrap();
        c.push(GateSpec::y(0, 16.0 / 22.0).unwrap()).unwrap();
        c.push(GateSpec::ytilde(1, 2.0 / 3.0).unwrap().ctrl(0).nctrl(3))
            .unwrap();
        c.push(GateSpec::ry(2, -1e-300).unwrap()).unwrap();
        c.push(GateSpec::phase(2, std::f64::consts::PI).unwrap().nctrl(0))
            .unwrap();
        c.push(GateSpec::swap(1, 3).ctrl(2)).unwrap();
        c.push(GateSpec::two_level(vec![0, 1, 3], 0, 5, 0.1 + 0.2).unwrap())
            .unwrap();
        c.push(GateSpec::x(0).ctrl(1).ctrl(2).nctrl(3)).unwrap();
        let back = parse_text(&c.emit_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_errors_have_line_numbers() {
        let e = parse_text("qubits 2\n\nfoo q[0]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_text("qubits 2\nx q[2]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_text("y(1.5) q[0]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_text("qubits 2\ny(2) q[0]").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_text("# header\nqubits 2 # two\n\nx q[1] ctrl q[0]  # cnot\n").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.gates()[0], GateSpec::x(1).ctrl(0));
    }
}
