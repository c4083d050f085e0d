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

use serde::{Deserialize, Serialize};

use super::Circuit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CircuitMetrics {
    /// Layers under as-soon-as-possible scheduling of qubit-disjoint gates.
    pub depth: usize,
    pub gate_count: usize,
    /// X gates with at least two controls.
    pub mcx_count: usize,
    /// X gates with exactly two controls.
    pub toffoli_count: usize,
    pub max_controls: usize,
}

pub(super) fn compute(c: &Circuit) -> CircuitMetrics {
    let mut level = vec![0usize; c.n_qubits()];
    let mut m = CircuitMetrics {
        gate_count: c.len(),
        ..Default::default()
    };
    for g in c.gates() {
        let layer = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            level[q] = layer;
        }
        m.depth = m.depth.max(layer);
        if g.is_mcx() {
            m.mcx_count += 1;
            if g.num_controls() == 2 {
                m.toffoli_count += 1;
            }
        }
        m.max_controls = m.max_controls.max(g.num_controls());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateSpec;

    #[test]
    fn empty_depth_zero() {
        assert_eq!(Circuit::new(3).metrics().depth, 0);
    }

    #[test]
    fn parallel_and_serial_layers() {
        let mut c = Circuit::new(3);
        c.push(GateSpec::h(0)).unwrap();
        c.push(GateSpec::h(1)).unwrap();
        c.push(GateSpec::h(2)).unwrap();
        assert_eq!(c.metrics().depth, 1);
        c.push(GateSpec::x(0).ctrl(1).ctrl(2)).unwrap();
        c.push(GateSpec::x(2)).unwrap();
        let m = c.metrics();
        assert_eq!(m.depth, 3);
        assert_eq!(m.mcx_count, 1);
        assert_eq!(m.toffoli_count, 1);
        assert_eq!(m.max_controls, 2);
    }
}
