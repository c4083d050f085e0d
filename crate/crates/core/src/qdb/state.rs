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

use super::prepare::synthesize_preparation;
use super::shape::QdbShape;
use crate::circuit::{value_controls, Circuit};
use crate::error::{Error, Result};
use crate::sim::{
    dump_records, AmplitudeRecord, Control, EntanglementReport, Register, StateVector,
};

/// One unitary step recorded for later cross-checking: `after` must equal
/// `circuit` applied to `before`.
#[derive(Clone, Debug)]
pub struct TraceSegment {
    pub op: String,
    pub before: StateVector,
    pub circuit: Circuit,
    pub after: StateVector,
}

/// A simulated database: its shape, the amplitudes and the circuit that
/// produced them from `|0…0⟩`.
///
/// `history` may be wider than the current state: qubits that were borrowed
/// and released stay in it, and return to `|0⟩` when it is replayed.
#[derive(Clone, Debug)]
pub struct QdbState {
    pub(crate) shape: QdbShape,
    pub(crate) state: StateVector,
    pub(crate) history: Circuit,
    pub(crate) trace: Option<Vec<TraceSegment>>,
}

impl QdbState {
    /// Build a state directly from a shape by synthesizing and running its
    /// preparation circuit.
    pub fn synthesize(shape: QdbShape) -> Result<Self> {
        let circuit = synthesize_preparation(&shape)?;
        let state = circuit.run_from_zero()?;
        Ok(QdbState {
            shape,
            state,
            history: circuit,
            trace: None,
        })
    }

    pub fn shape(&self) -> &QdbShape {
        &self.shape
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn history(&self) -> &Circuit {
        &self.history
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    pub fn n_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    pub fn labels(&self) -> Vec<Register> {
        self.shape.layout.labels()
    }

    /// Start recording every unitary step.
    pub fn enable_trace(&mut self) {
        if self.trace.is_none() {
            self.trace = Some(Vec::new());
        }
    }

    pub fn trace(&self) -> &[TraceSegment] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn take_trace(&mut self) -> Vec<TraceSegment> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn dump(&self) -> Result<Vec<AmplitudeRecord>> {
        dump_records(&self.state, &self.labels())
    }

    /// Largest deviation from the amplitudes the shape predicts, up to a
    /// global phase.
    pub fn deviation_from_shape(&self) -> Result<f64> {
        self.state
            .distance_up_to_phase(&self.shape.expected_state()?)
    }

    /// Norm of the branch of logical entry `j`, whatever its register
    /// contents.
    pub fn entry_amplitude(&self, j: usize) -> Result<f64> {
        self.shape.check_index(j)?;
        let lay = &self.shape.layout;
        let base = crate::sim::scatter_bits(self.shape.physical(j), &lay.index);
        let p = self.state.probability(|i| i & mask(&lay.index) == base);
        Ok(p.sqrt())
    }

    /// Entanglement between the qubits of `role` and everything else.
    pub fn entanglement_of(&self, role: Register) -> Result<EntanglementReport> {
        let qubits: Vec<usize> = self
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == role)
            .map(|(q, _)| q)
            .collect();
        self.state.schmidt(&qubits)
    }

    /// Probability that some data qubit reads 1 given the index register
    /// holds logical entry `j`.
    pub fn data_excitation_given(&self, j: usize) -> Result<f64> {
        self.shape.check_index(j)?;
        let lay = &self.shape.layout;
        let base = crate::sim::scatter_bits(self.shape.physical(j), &lay.index);
        let imask = mask(&lay.index);
        let dmask = mask(&lay.data);
        let total = self.state.probability(|i| i & imask == base);
        if total == 0.0 {
            return Err(Error::ZeroProbability(0.0));
        }
        let excited = self
            .state
            .probability(|i| i & imask == base && i & dmask != 0);
        Ok(excited / total)
    }

    /// Run a unitary on the current qubits and record it.
    pub(crate) fn run(&mut self, op: &str, circuit: &Circuit) -> Result<()> {
        let before = self.trace.as_ref().map(|_| self.state.clone());
        circuit.apply_to(&mut self.state)?;
        if let (Some(before), Some(trace)) = (before, self.trace.as_mut()) {
            trace.push(TraceSegment {
                op: op.to_string(),
                before,
                circuit: circuit.clone(),
                after: self.state.clone(),
            });
        }
        self.history.extend_from(circuit)
    }

    /// Add `|0⟩` qubits on top and return their positions.
    pub(crate) fn allocate(&mut self, roles: &[Register]) -> Result<Vec<usize>> {
        let first = self.state.n_qubits();
        self.state.add_ancillas(roles.len(), 0)?;
        let n = self.state.n_qubits();
        if self.history.n_qubits() < n {
            let missing = &roles[roles.len() - (n - self.history.n_qubits())..];
            self.history.widen(missing);
        }
        for (i, r) in roles.iter().enumerate() {
            self.history.set_label(first + i, *r)?;
        }
        Ok((first..n).collect())
    }

    /// Drop the `count` top qubits, which must be back in `|0⟩`.
    pub(crate) fn release(&mut self, count: usize) -> Result<()> {
        self.state.release_qubits(count)
    }

    /// Install a new shape and refresh the history labels.
    pub(crate) fn set_shape(&mut self, shape: QdbShape) -> Result<()> {
        for (q, r) in shape.layout.labels().into_iter().enumerate() {
            self.history.set_label(q, r)?;
        }
        self.shape = shape;
        Ok(())
    }

    /// Scratch circuit over the current qubits with current labels.
    pub(crate) fn scratch(&self) -> Circuit {
        Circuit::with_labels(self.history.labels()[..self.state.n_qubits()].to_vec())
    }

    /// Append the data basis transform (or its inverse) acting on `qubits`.
    pub(crate) fn push_basis_transform(
        &self,
        c: &mut Circuit,
        qubits: &[usize],
        inverse: bool,
    ) -> Result<()> {
        if let Some(u) = &self.shape.u_d {
            let u = if inverse { u.inverse() } else { u.clone() };
            c.extend_from(&u.remap(qubits, c.labels().to_vec())?)?;
        }
        Ok(())
    }

    /// Controls selecting the branch of logical entry `j`.
    pub(crate) fn entry_controls(&self, j: usize) -> Vec<Control> {
        value_controls(&self.shape.layout.index, self.shape.physical(j))
    }

    /// Replace state and shape after a non-unitary step; the history is
    /// rebuilt from the shape.
    pub(crate) fn reset_after_measurement(
        &mut self,
        shape: QdbShape,
        state: StateVector,
    ) -> Result<()> {
        self.history = synthesize_preparation(&shape)?;
        self.shape = shape;
        self.state = state;
        Ok(())
    }
}

pub(crate) fn mask(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, &q| m | (1 << q))
}
