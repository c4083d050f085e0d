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

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::state::{mask, QdbState};
use crate::error::Result;
use crate::sim::{scatter_bits, EntanglementReport, GateSpec, Register, StateVector};

/// Outcome of reading one entry by projecting the index register.
#[derive(Clone, Debug)]
pub struct ProjectiveRead {
    pub probability: f64,
    /// State of the data register on the selected branch.
    pub data_state: StateVector,
}

/// Serializable summary of a projective read.
#[derive(Clone, Debug, Serialize)]
pub struct ReadReport {
    pub entry: usize,
    pub probability: f64,
    pub data: Vec<(usize, f64, f64)>,
}

impl ProjectiveRead {
    pub fn report(&self, entry: usize) -> ReadReport {
        ReadReport {
            entry,
            probability: self.probability,
            data: self
                .data_state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > crate::sim::DUMP_CUTOFF)
                .map(|(x, a)| (x, a.re, a.im))
                .collect(),
        }
    }
}

impl QdbState {
    /// Copy entry `f` into the copy register with CNOT fan-out, allocating
    /// the register on first use. Returns the entanglement between the copy
    /// register and the rest.
    pub fn read_copy(&mut self, f: usize) -> Result<EntanglementReport> {
        let next = self.shape.after_read_copy(f)?;
        let copy = match self.shape.layout.copy_register() {
            Some(reg) => reg.qubits.clone(),
            None => self.allocate(&vec![Register::A; self.shape.data_width()])?,
        };
        let data = self.shape.layout.data.clone();
        let select = self.entry_controls(f);
        let mut c = self.scratch();
        self.push_basis_transform(&mut c, &data, true)?;
        self.push_basis_transform(&mut c, &copy, true)?;
        for (b, &q) in data.iter().enumerate() {
            c.push(
                GateSpec::x(copy[b])
                    .with_controls(select.iter().copied())
                    .ctrl(q),
            )?;
        }
        self.push_basis_transform(&mut c, &data, false)?;
        self.push_basis_transform(&mut c, &copy, false)?;
        self.run("read-copy", &c)?;
        self.set_shape(next)?;
        self.state.schmidt(&copy)
    }

    /// Project the index register onto entry `f`. The database is consumed;
    /// what remains is the data register state of that branch.
    pub fn read_projective(self, f: usize) -> Result<ProjectiveRead> {
        self.shape.check_index(f)?;
        let lay = &self.shape.layout;
        let imask = mask(&lay.index);
        let base = scatter_bits(self.shape.physical(f), &lay.index);
        let (projected, probability) = self.state.project(|i| i & imask == base)?;
        let data_state = projected.factor(&lay.data)?;
        Ok(ProjectiveRead {
            probability,
            data_state,
        })
    }

    /// Probability that a projective read of entry `f` succeeds.
    pub fn read_probability(&self, f: usize) -> Result<f64> {
        self.shape.check_index(f)?;
        let lay = &self.shape.layout;
        let imask = mask(&lay.index);
        let base = scatter_bits(self.shape.physical(f), &lay.index);
        Ok(self.state.probability(|i| i & imask == base))
    }

    /// Measure the index register `shots` times without disturbing the
    /// stored state; counts are keyed by logical entry.
    pub fn sample_index_counts<R: Rng>(
        &self,
        shots: usize,
        rng: &mut R,
    ) -> Result<BTreeMap<usize, usize>> {
        let lay = &self.shape.layout;
        let raw = self.state.sample_counts(&lay.index, shots, rng)?;
        let mut out = BTreeMap::new();
        for (phys, n) in raw {
            if let Some(j) = lay.logical.iter().position(|&p| p == phys) {
                *out.entry(j).or_insert(0) += n;
            }
        }
        Ok(out)
    }
}
