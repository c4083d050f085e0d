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

use super::state::{mask, QdbState};
use crate::error::Result;
use crate::sim::{scatter_bits, GateSpec, Register, StateVector, ZERO_PROBABILITY};

/// Both branches of a projective removal.
#[derive(Clone, Debug)]
pub struct ProjectiveRemoval {
    /// Probability that the index is found outside the removed entry.
    pub success_probability: f64,
    pub failure_probability: f64,
    /// Renormalized database over the remaining entries.
    pub survivor: Option<QdbState>,
    /// Collapsed state when the removed entry was found instead.
    pub removed: Option<StateVector>,
}

impl QdbState {
    /// Reset the data of entry `f` and rotate its amplitude into the
    /// reservoir entry. Later entries shift down by one.
    pub fn remove_reservoir(&mut self, f: usize) -> Result<()> {
        let next = self.shape.after_remove_reservoir(f)?;
        let d = self.shape.entry(f);
        let data = self.shape.layout.data.clone();
        let select = self.entry_controls(f);
        if !d.is_zero() {
            let sensor = self.allocate(&vec![Register::S; d.len()])?;
            let mut c = self.scratch();
            for b in d.ones() {
                c.push(GateSpec::x(sensor[b]))?;
            }
            self.push_basis_transform(&mut c, &data, true)?;
            for b in d.ones() {
                c.push(
                    GateSpec::x(data[b])
                        .with_controls(select.iter().copied())
                        .ctrl(sensor[b]),
                )?;
            }
            self.push_basis_transform(&mut c, &data, false)?;
            for b in d.ones() {
                c.push(GateSpec::x(sensor[b]))?;
            }
            self.run("remove: reset data", &c)?;
            self.release(sensor.len())?;
        }
        let lay = &self.shape.layout;
        let w = &self.shape.weights;
        let theta = -w[f].atan2(w[0]);
        let mut c = self.scratch();
        c.push(GateSpec::two_level(
            lay.core_qubits(),
            0,
            self.shape.physical(f),
            theta,
        )?)?;
        self.run("remove: merge", &c)?;
        self.set_shape(next)
    }

    /// Measure whether the index differs from entry `f`. Both outcomes are
    /// returned with their probabilities.
    pub fn remove_projective(&self, f: usize) -> Result<ProjectiveRemoval> {
        let next = self.shape.after_remove_projective(f)?;
        let lay = &self.shape.layout;
        let imask = mask(&lay.index);
        let base = scatter_bits(self.shape.physical(f), &lay.index);
        let failure_probability = self.state.probability(|i| i & imask == base);
        let success_probability = self.state.probability(|i| i & imask != base);
        let survivor = match next {
            Some(shape) if success_probability > ZERO_PROBABILITY => {
                let (st, _) = self.state.project(|i| i & imask != base)?;
                let mut s = self.clone();
                s.reset_after_measurement(shape, st)?;
                Some(s)
            }
            _ => None,
        };
        let removed = if failure_probability > ZERO_PROBABILITY {
            Some(self.state.project(|i| i & imask == base)?.0)
        } else {
            None
        };
        Ok(ProjectiveRemoval {
            success_probability,
            failure_probability,
            survivor,
            removed,
        })
    }
}
