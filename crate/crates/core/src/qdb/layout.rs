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

use serde::Serialize;

use super::bits::BitString;
use crate::sim::Register;

/// Extra register attached to a database: copy targets (`A`) or a sensor
/// left behind by a swap write (`S`). `contents[j]` is the string held on
/// the branch of logical entry `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxRegister {
    pub role: Register,
    pub qubits: Vec<usize>,
    pub contents: Vec<BitString>,
}

/// Physical placement of a database.
///
/// Bit `i` of a physical index value lives on `index[i]`. The index register
/// starts as the lowest qubits, the data register sits right above it, and
/// every qubit added later goes on top. Extensions append their new index
/// qubits to `index`, so the register need not be contiguous.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QdbLayout {
    pub index: Vec<usize>,
    pub data: Vec<usize>,
    pub aux: Vec<AuxRegister>,
    /// Physical index value of each logical entry.
    pub logical: Vec<u64>,
}

impl QdbLayout {
    /// Fresh layout: `index_width` index qubits, then `data_width` data
    /// qubits, logical entry `j` at physical value `j`.
    pub fn fresh(k: usize, index_width: usize, data_width: usize) -> Self {
        QdbLayout {
            index: (0..index_width).collect(),
            data: (index_width..index_width + data_width).collect(),
            aux: Vec::new(),
            logical: (0..k as u64).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.index.len() + self.data.len() + self.aux.iter().map(|a| a.qubits.len()).sum::<usize>()
    }

    pub fn index_width(&self) -> usize {
        self.index.len()
    }

    pub fn data_width(&self) -> usize {
        self.data.len()
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.aux_count(Register::A)
    }

    pub fn sensor_qubits(&self) -> usize {
        self.aux_count(Register::S)
    }

    fn aux_count(&self, role: Register) -> usize {
        self.aux
            .iter()
            .filter(|a| a.role == role)
            .map(|a| a.qubits.len())
            .sum()
    }

    /// Register of every qubit.
    pub fn labels(&self) -> Vec<Register> {
        let mut labels = vec![Register::A; self.n_qubits()];
        for &q in &self.index {
            labels[q] = Register::I;
        }
        for &q in &self.data {
            labels[q] = Register::D;
        }
        for a in &self.aux {
            for &q in &a.qubits {
                labels[q] = a.role;
            }
        }
        labels
    }

    /// Index and data qubits together: index bits first, then data bits.
    pub fn core_qubits(&self) -> Vec<usize> {
        self.index.iter().chain(&self.data).copied().collect()
    }

    /// True while logical entry `j` sits at physical value `j` on qubits
    /// `0..w` with the data register right above.
    pub fn is_fresh(&self) -> bool {
        let w = self.index.len();
        self.index.iter().enumerate().all(|(i, &q)| i == q)
            && self.data.iter().enumerate().all(|(i, &q)| q == w + i)
            && self.logical.iter().enumerate().all(|(j, &p)| p == j as u64)
    }

    pub fn copy_register(&self) -> Option<&AuxRegister> {
        self.aux.iter().find(|a| a.role == Register::A)
    }
}
