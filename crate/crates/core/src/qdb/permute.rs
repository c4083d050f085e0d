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

use super::state::QdbState;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::{Control, GateSpec, Polarity};

/// Bijection on `0..k`: entry `j` moves to `mapping[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(mapping: Vec<usize>) -> Result<Self> {
        Permutation::new(mapping)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.mapping
    }
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let k = mapping.len();
        let mut seen = vec![false; k];
        for &m in &mapping {
            if m >= k || std::mem::replace(&mut seen[m], true) {
                return Err(Error::NotPermutation(k));
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            mapping: (0..k).collect(),
        }
    }

    /// Exchange of `i` and `j` on `0..k`.
    pub fn transposition(k: usize, i: usize, j: usize) -> Result<Self> {
        if i >= k || j >= k {
            return Err(Error::IndexOutOfRange { index: i.max(j), k });
        }
        let mut mapping: Vec<usize> = (0..k).collect();
        mapping.swap(i, j);
        Ok(Permutation { mapping })
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &m) in self.mapping.iter().enumerate() {
            inv[m] = j;
        }
        Permutation { mapping: inv }
    }

    /// `self` followed by `next`, i.e. `j ↦ next(self(j))`.
    pub fn then(&self, next: &Permutation) -> Result<Self> {
        if next.len() != self.len() {
            return Err(Error::NotPermutation(self.len()));
        }
        Ok(Permutation {
            mapping: self.mapping.iter().map(|&m| next.apply(m)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(j, &m)| j == m)
    }

    /// Exchanges of positions which, carried out in order, move the content
    /// of every position `j` to `self(j)`. At most `k-1` of them.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        let k = self.len();
        let inv = self.inverse();
        // occupant[p] = original position of the content now at p
        let mut occupant: Vec<usize> = (0..k).collect();
        let mut location: Vec<usize> = (0..k).collect();
        let mut out = Vec::new();
        for p in 0..k {
            let want = inv.apply(p);
            if occupant[p] != want {
                let r = location[want];
                out.push((p, r));
                let moved = occupant[p];
                occupant.swap(p, r);
                location[want] = p;
                location[moved] = r;
            }
        }
        out
    }
}

/// Gates exchanging basis values `a` and `b` of the register `index` (bit
/// `i` on `index[i]`) and fixing every other value.
///
/// The differing bits other than the lowest one are first folded onto it
/// with CNOTs conditioned on the lowest bit matching `b`; a single
/// multi-controlled X on that bit then swaps the two neighbouring values,
/// and the fold is undone.
pub fn transposition_gates(index: &[usize], a: u64, b: u64) -> Result<Vec<GateSpec>> {
    if a == b {
        return Ok(Vec::new());
    }
    let w = index.len();
    if (a | b) >> w != 0 {
        return Err(Error::BasisOutOfRange {
            index: a.max(b),
            width: w,
        });
    }
    let diff = a ^ b;
    let pivot = diff.trailing_zeros() as usize;
    let pivot_ctl = Control {
        qubit: index[pivot],
        polarity: if (b >> pivot) & 1 == 1 {
            Polarity::One
        } else {
            Polarity::Zero
        },
    };
    let fold: Vec<GateSpec> = (0..w)
        .filter(|&q| q != pivot && (diff >> q) & 1 == 1)
        .map(|q| GateSpec::x(index[q]).with_controls([pivot_ctl]))
        .collect();
    let others: Vec<Control> = (0..w)
        .filter(|&q| q != pivot)
        .map(|q| Control {
            qubit: index[q],
            polarity: if (a >> q) & 1 == 1 {
                Polarity::One
            } else {
                Polarity::Zero
            },
        })
        .collect();
    let mut gates = fold.clone();
    gates.push(GateSpec::x(index[pivot]).with_controls(others));
    gates.extend(fold.into_iter().rev());
    Ok(gates)
}

/// Circuit moving the branch at physical value `physical[j]` to
/// `physical[π(j)]` for every `j`, on a register of `n_qubits` qubits.
pub fn permutation_circuit(
    pi: &Permutation,
    index: &[usize],
    physical: &[u64],
    n_qubits: usize,
) -> Result<Circuit> {
    if physical.len() != pi.len() {
        return Err(Error::NotPermutation(physical.len()));
    }
    let mut c = Circuit::new(n_qubits);
    for (p, r) in pi.transpositions() {
        for g in transposition_gates(index, physical[p], physical[r])? {
            c.push(g)?;
        }
    }
    Ok(c)
}

impl QdbState {
    /// Move entry `j` to `π(j)`. The reservoir entry must stay in place.
    pub fn permute(&mut self, pi: &Permutation) -> Result<()> {
        let next = self.shape.after_permute(pi)?;
        let lay = &self.shape.layout;
        let mut c = self.scratch();
        c.extend_from(&permutation_circuit(
            pi,
            &lay.index,
            &lay.logical,
            lay.n_qubits(),
        )?)?;
        self.run("permute", &c)?;
        self.set_shape(next)
    }

    /// Exchange entries `i` and `j`.
    pub fn transpose(&mut self, i: usize, j: usize) -> Result<()> {
        self.permute(&Permutation::transposition(self.k(), i, j)?)
    }
}
