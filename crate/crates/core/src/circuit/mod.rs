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

//! Gate-level circuits.

mod decompose;
mod metrics;
mod text;

pub use decompose::{AncillaPolicy, DecompositionConfig, DecompositionMode};
pub use metrics::CircuitMetrics;
pub use text::parse_text;

use crate::error::{Error, Result};
use crate::sim::{Control, GateSpec, Polarity, Register, StateVector};

/// Ordered gate list over a fixed number of labelled qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateSpec>,
    labels: Vec<Register>,
}

impl Circuit {
    /// Empty circuit; every qubit labelled as index register.
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
            labels: vec![Register::I; n_qubits],
        }
    }

    pub fn with_labels(labels: Vec<Register>) -> Self {
        Circuit {
            n_qubits: labels.len(),
            gates: Vec::new(),
            labels,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn labels(&self) -> &[Register] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn set_label(&mut self, qubit: usize, reg: Register) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        self.labels[qubit] = reg;
        Ok(())
    }

    /// Append a gate after checking it against the qubit count.
    pub fn push(&mut self, gate: GateSpec) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Builder form of [`push`](Self::push).
    pub fn append(mut self, gate: GateSpec) -> Result<Self> {
        self.push(gate)?;
        Ok(self)
    }

    /// Append every gate of `other`, which may act on fewer qubits.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Add qubits above the current ones.
    pub fn widen(&mut self, extra: &[Register]) {
        self.labels.extend_from_slice(extra);
        self.n_qubits += extra.len();
    }

    /// Adjoint circuit.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(GateSpec::inverse).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Copy with every qubit `q` sent to `map[q]` inside an `n_qubits`-wide
    /// circuit labelled by `labels`.
    pub fn remap(&self, map: &[usize], labels: Vec<Register>) -> Result<Circuit> {
        if map.len() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: map.len(),
            });
        }
        let mut out = Circuit::with_labels(labels);
        for g in &self.gates {
            out.push(g.remap(|q| map[q]))?;
        }
        Ok(out)
    }

    /// Same circuit with extra controls attached to every gate.
    pub fn controlled_by(&self, controls: &[Control]) -> Result<Circuit> {
        let mut out = Circuit::with_labels(self.labels.clone());
        for g in &self.gates {
            out.push(g.clone().with_controls(controls.iter().copied()))?;
        }
        Ok(out)
    }

    /// Apply every gate to `state` in order.
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: state.n_qubits(),
            });
        }
        for g in &self.gates {
            state.apply_gate(g)?;
        }
        Ok(())
    }

    pub fn simulate(&self, initial: &StateVector) -> Result<StateVector> {
        let mut s = initial.clone();
        self.apply_to(&mut s)?;
        Ok(s)
    }

    /// Output on `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits)?;
        self.apply_to(&mut s)?;
        Ok(s)
    }

    pub fn metrics(&self) -> CircuitMetrics {
        metrics::compute(self)
    }

    pub fn emit_text(&self) -> String {
        text::emit(self)
    }

    pub fn decompose_mcx(&self, config: &DecompositionConfig) -> Result<Circuit> {
        decompose::decompose(self, config)
    }
}

/// `n` controls firing on zero at the given qubits.
pub fn zero_controls(qubits: &[usize]) -> Vec<Control> {
    qubits
        .iter()
        .map(|&q| Control {
            qubit: q,
            polarity: Polarity::Zero,
        })
        .collect()
}

/// Controls matching `value` on `qubits` (bit i of `value` for `qubits[i]`).
pub fn value_controls(qubits: &[usize], value: u64) -> Vec<Control> {
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| Control {
            qubit: q,
            polarity: if (value >> i) & 1 == 1 {
                Polarity::One
            } else {
                Polarity::Zero
            },
        })
        .collect()
}
