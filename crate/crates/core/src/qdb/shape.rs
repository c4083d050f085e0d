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

use std::collections::{BTreeMap, BTreeSet};

use super::bits::BitString;
use super::descriptor::{ceil_log2, QdbDescriptor};
use super::layout::{AuxRegister, QdbLayout};
use super::permute::Permutation;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::{max_qubits, Register, StateVector, C64};

/// Everything known about a database without its amplitudes: which entries
/// exist, where they live, what they hold and with which weight.
///
/// Operations first compute the successor shape, which performs every
/// semantic check, and only then touch the state. Running the transitions
/// alone is therefore a complete dry run.
#[derive(Clone, Debug, PartialEq)]
pub struct QdbShape {
    pub(crate) layout: QdbLayout,
    pub(crate) data: BTreeMap<usize, BitString>,
    /// Real, non-negative amplitude of each logical entry.
    pub(crate) weights: Vec<f64>,
    /// `Some(l)` while the weights follow `√((l+1)/(k+l))` on entry 0 and
    /// `√(1/(k+l))` elsewhere.
    pub(crate) reservoir: Option<usize>,
    pub(crate) u_d: Option<Circuit>,
    pub(crate) copied: BTreeSet<usize>,
}

/// Weights of the reservoir pattern for `k` entries and reservoir `l`.
pub fn reservoir_weights(k: usize, l: usize) -> Vec<f64> {
    let total = (k + l) as f64;
    (0..k)
        .map(|j| {
            if j == 0 {
                ((l as f64 + 1.0) / total).sqrt()
            } else {
                (1.0 / total).sqrt()
            }
        })
        .collect()
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    let cap = max_qubits();
    if n > cap {
        return Err(Error::TooManyQubits { n, cap });
    }
    Ok(())
}

impl QdbShape {
    /// Empty database with `k` entries and reservoir `l`.
    pub fn prepared(k: usize, l: usize, data_width: usize, u_d: Option<Circuit>) -> Result<Self> {
        let mut desc = QdbDescriptor::empty(k, l, data_width)?;
        desc.u_d = u_d;
        Self::from_descriptor(&desc)
    }

    /// Shape of a database prepared from a descriptor, data included.
    pub fn from_descriptor(desc: &QdbDescriptor) -> Result<Self> {
        desc.validate()?;
        let w = ceil_log2(desc.k);
        check_capacity(w + desc.data_width)?;
        Ok(QdbShape {
            layout: QdbLayout::fresh(desc.k, w, desc.data_width),
            data: desc.data.clone(),
            weights: reservoir_weights(desc.k, desc.l),
            reservoir: Some(desc.l),
            u_d: desc.u_d.clone(),
            copied: BTreeSet::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn reservoir(&self) -> Option<usize> {
        self.reservoir
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn data(&self) -> &BTreeMap<usize, BitString> {
        &self.data
    }

    pub fn data_width(&self) -> usize {
        self.layout.data.len()
    }

    pub fn entry(&self, j: usize) -> BitString {
        self.data
            .get(&j)
            .copied()
            .unwrap_or(BitString::zeros(self.data_width()))
    }

    pub fn layout(&self) -> &QdbLayout {
        &self.layout
    }

    pub fn u_d(&self) -> Option<&Circuit> {
        self.u_d.as_ref()
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.n_qubits()
    }

    pub fn copied(&self) -> &BTreeSet<usize> {
        &self.copied
    }

    /// Physical index value of logical entry `j`.
    pub fn physical(&self, j: usize) -> u64 {
        self.layout.logical[j]
    }

    /// Descriptor view, available while the layout is fresh, the weights
    /// follow the reservoir pattern and nothing is attached.
    pub fn descriptor(&self) -> Option<QdbDescriptor> {
        if !self.layout.is_fresh() || !self.layout.aux.is_empty() {
            return None;
        }
        Some(QdbDescriptor {
            k: self.k(),
            l: self.reservoir?,
            data_width: self.data_width(),
            data: self.data.clone(),
            u_d: self.u_d.clone(),
        })
    }

    pub(crate) fn check_index(&self, f: usize) -> Result<()> {
        if f >= self.k() {
            return Err(Error::IndexOutOfRange {
                index: f,
                k: self.k(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_no_aux(&self) -> Result<()> {
        if !self.layout.aux.is_empty() {
            return Err(Error::AuxiliaryAttached);
        }
        Ok(())
    }

    fn check_data(&self, d: &BitString) -> Result<()> {
        if d.len() != self.data_width() {
            return Err(Error::DataWidth {
                expected: self.data_width(),
                got: d.len(),
            });
        }
        Ok(())
    }

    fn check_writable(&self, f: usize, d: &BitString) -> Result<()> {
        self.require_no_aux()?;
        self.check_index(f)?;
        if f == 0 {
            return Err(Error::ReservoirIndex("written"));
        }
        self.check_data(d)?;
        if self.data.contains_key(&f) {
            return Err(Error::EntryNotEmpty(f));
        }
        check_capacity(self.n_qubits() + self.data_width())
    }

    /// Shape after writing `d` into the empty entry `f`.
    pub fn after_write(&self, f: usize, d: &BitString) -> Result<Self> {
        self.check_writable(f, d)?;
        let mut next = self.clone();
        if !d.is_zero() {
            next.data.insert(f, *d);
        }
        Ok(next)
    }

    /// Shape after the conditional-swap write; the sensor stays attached.
    pub fn after_write_swap(&self, f: usize, d: &BitString) -> Result<Self> {
        self.check_writable(f, d)?;
        let mut next = self.after_write(f, d)?;
        let first = self.n_qubits();
        let mut contents = vec![*d; self.k()];
        contents[f] = BitString::zeros(self.data_width());
        next.layout.aux.push(AuxRegister {
            role: Register::S,
            qubits: (first..first + self.data_width()).collect(),
            contents,
        });
        Ok(next)
    }

    /// Shape after copying entry `f` into the copy register.
    pub fn after_read_copy(&self, f: usize) -> Result<Self> {
        self.check_index(f)?;
        if self.layout.aux.iter().any(|a| a.role != Register::A) {
            return Err(Error::AuxiliaryAttached);
        }
        if self.copied.contains(&f) {
            return Err(Error::AlreadyCopied(f));
        }
        let mut next = self.clone();
        if next.layout.copy_register().is_none() {
            check_capacity(self.n_qubits() + self.data_width())?;
            let first = self.n_qubits();
            next.layout.aux.push(AuxRegister {
                role: Register::A,
                qubits: (first..first + self.data_width()).collect(),
                contents: vec![BitString::zeros(self.data_width()); self.k()],
            });
        }
        let reg = next
            .layout
            .aux
            .iter_mut()
            .find(|a| a.role == Register::A)
            .expect("copy register present");
        reg.contents[f] = self.entry(f);
        next.copied.insert(f);
        Ok(next)
    }

    /// Probability of finding the index register at entry `f`.
    pub fn read_probability(&self, f: usize) -> Result<f64> {
        self.check_index(f)?;
        Ok(self.weights[f] * self.weights[f])
    }

    fn without_entry(&self, f: usize) -> Self {
        let mut next = self.clone();
        next.weights.remove(f);
        next.layout.logical.remove(f);
        next.data = self
            .data
            .iter()
            .filter(|(&j, _)| j != f)
            .map(|(&j, &b)| (if j > f { j - 1 } else { j }, b))
            .collect();
        next
    }

    /// Shape after resetting entry `f` and folding its weight into the
    /// reservoir.
    pub fn after_remove_reservoir(&self, f: usize) -> Result<Self> {
        self.require_no_aux()?;
        self.check_index(f)?;
        if f == 0 {
            return Err(Error::ReservoirIndex("removed"));
        }
        if !self.entry(f).is_zero() {
            check_capacity(self.n_qubits() + self.data_width())?;
        }
        let mut next = self.without_entry(f);
        next.weights[0] = (self.weights[0].powi(2) + self.weights[f].powi(2)).sqrt();
        next.reservoir = self.reservoir.map(|l| l + 1);
        Ok(next)
    }

    /// Surviving shape after measuring "index ≠ f" with success. `None` when
    /// nothing survives.
    pub fn after_remove_projective(&self, f: usize) -> Result<Option<Self>> {
        self.require_no_aux()?;
        self.check_index(f)?;
        if f == 0 && self.k() > 1 {
            return Err(Error::ReservoirIndex("removed"));
        }
        if self.k() == 1 {
            return Ok(None);
        }
        let keep = 1.0 - self.weights[f].powi(2);
        let mut next = self.without_entry(f);
        let scale = 1.0 / keep.sqrt();
        next.weights.iter_mut().for_each(|w| *w *= scale);
        Ok(Some(next))
    }

    /// Shape after moving entry `j` to `π(j)`.
    pub fn after_permute(&self, pi: &Permutation) -> Result<Self> {
        self.require_no_aux()?;
        if pi.len() != self.k() {
            return Err(Error::NotPermutation(self.k()));
        }
        if pi.apply(0) != 0 {
            return Err(Error::MovesReservoir);
        }
        let mut next = self.clone();
        next.data = self.data.iter().map(|(&j, &b)| (pi.apply(j), b)).collect();
        for j in 0..self.k() {
            next.weights[pi.apply(j)] = self.weights[j];
        }
        Ok(next)
    }

    /// Amplitudes implied by the shape, as a full statevector.
    pub fn expected_state(&self) -> Result<StateVector> {
        let n = self.n_qubits();
        check_capacity(n)?;
        let data_states = |bits: &BitString| -> Result<StateVector> {
            let mut s = StateVector::basis(bits.len(), bits.value())?;
            if let Some(u) = &self.u_d {
                u.apply_to(&mut s)?;
            }
            Ok(s)
        };
        // registers whose content is a data string: D plus every aux register
        let mut regs: Vec<(&[usize], Vec<BitString>)> = vec![(
            &self.layout.data,
            (0..self.k()).map(|j| self.entry(j)).collect(),
        )];
        for a in &self.layout.aux {
            regs.push((&a.qubits, a.contents.clone()));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        for j in 0..self.k() {
            let base = crate::sim::scatter_bits(self.physical(j), &self.layout.index);
            // product over registers, expanded term by term
            let mut terms = vec![(base, C64::new(self.weights[j], 0.0))];
            for (qubits, contents) in &regs {
                let s = data_states(&contents[j])?;
                let mut next = Vec::new();
                for (idx, a) in &terms {
                    for (x, b) in s.amplitudes().iter().enumerate() {
                        if b.norm() > 0.0 {
                            next.push((idx | crate::sim::scatter_bits(x as u64, qubits), a * b));
                        }
                    }
                }
                terms = next;
            }
            for (idx, a) in terms {
                amps[idx] += a;
            }
        }
        StateVector::from_amplitudes(amps)
    }
}
