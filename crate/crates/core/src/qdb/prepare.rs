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

use super::bits::BitString;
use super::descriptor::{ceil_log2, QdbDescriptor};
use super::shape::QdbShape;
use super::state::QdbState;
use crate::circuit::{value_controls, zero_controls, Circuit};
use crate::error::{Error, Result};
use crate::sim::GateSpec;

/// Gates preparing `√((l+1)/(k+l))|0⟩ + √(1/(k+l)) Σ_{j=1}^{k-1} |j⟩` on
/// `qubits` (least significant first) from `|0…0⟩`.
///
/// The top qubit splits the weight between the lower and upper half. Every
/// lower qubit then gets `Y(1/2)`, and only the two subtrees that are not
/// uniform receive a correction: the one on the path of `k-1` (which may be
/// cut short) and the one on the path of `0` (which carries the reservoir).
pub fn reservoir_prepare_gates(qubits: &[usize], k: usize, l: usize) -> Result<Vec<GateSpec>> {
    let t = ceil_log2(k);
    if qubits.len() < t {
        return Err(Error::InvalidArgument(format!(
            "{k} entries need {t} index qubits, got {}",
            qubits.len()
        )));
    }
    let mut gates = Vec::new();
    if k <= 1 {
        return Ok(gates);
    }
    let q = &qubits[..t];
    let s = (k - 1) as u64;
    let lf = l as f64;
    let half = (1u64 << (t - 1)) as f64;
    gates.push(GateSpec::y(q[t - 1], (half + lf) / (k as f64 + lf))?);
    for j in (0..t - 1).rev() {
        gates.push(GateSpec::y(q[j], 0.5)?);
        let upper = &q[j + 1..t];
        let pow = (1u64 << j) as f64;
        // subtree on the path of k-1
        let prefix = value_controls(upper, s >> (j + 1));
        if (s >> j) & 1 == 0 {
            gates.push(GateSpec::ytilde(q[j], 1.0)?.with_controls(prefix));
        } else {
            let count = (s % (1u64 << (j + 1))) + 1;
            if count != 1u64 << (j + 1) {
                gates.push(GateSpec::ytilde(q[j], pow / count as f64)?.with_controls(prefix));
            }
        }
        // subtree on the path of 0
        if l > 0 {
            gates.push(
                GateSpec::ytilde(q[j], (pow + lf) / (2.0 * pow + lf))?
                    .with_controls(zero_controls(upper)),
            );
        }
    }
    Ok(gates)
}

/// Gates preparing `Σ_x amplitudes[x] |x⟩` on `qubits` for real,
/// non-negative amplitudes, by a binary tree of controlled `Y` rotations.
pub fn tree_prepare_gates(qubits: &[usize], amplitudes: &[f64]) -> Result<Vec<GateSpec>> {
    let t = qubits.len();
    if amplitudes.len() > 1usize << t {
        return Err(Error::BadDimension(amplitudes.len()));
    }
    let weight = |lo: usize, hi: usize| -> f64 {
        amplitudes[lo.min(amplitudes.len())..hi.min(amplitudes.len())]
            .iter()
            .map(|a| a * a)
            .sum()
    };
    let mut gates = Vec::new();
    for b in (0..t).rev() {
        let span = 1usize << (b + 1);
        for prefix in 0..(1usize << (t - b - 1)) {
            let lo = prefix * span;
            if lo >= amplitudes.len() {
                break;
            }
            let total = weight(lo, lo + span);
            if total <= 1e-300 {
                continue;
            }
            let left = weight(lo, lo + span / 2);
            if left >= total {
                continue;
            }
            let p = (left / total).clamp(0.0, 1.0);
            gates.push(
                GateSpec::y(qubits[b], p)?
                    .with_controls(value_controls(&qubits[b + 1..], prefix as u64)),
            );
        }
    }
    Ok(gates)
}

/// Circuit that builds the state described by `shape` from `|0…0⟩`.
pub fn synthesize_preparation(shape: &QdbShape) -> Result<Circuit> {
    let lay = &shape.layout;
    let mut c = Circuit::with_labels(lay.labels());
    let fresh = lay.is_fresh() && lay.index.len() >= ceil_log2(shape.k());
    match shape.reservoir {
        Some(l) if fresh => {
            for g in reservoir_prepare_gates(&lay.index, shape.k(), l)? {
                c.push(g)?;
            }
        }
        _ => {
            let mut amps = vec![0.0; 1usize << lay.index.len()];
            for j in 0..shape.k() {
                amps[shape.physical(j) as usize] = shape.weights[j];
            }
            for g in tree_prepare_gates(&lay.index, &amps)? {
                c.push(g)?;
            }
        }
    }
    let mut registers: Vec<(&[usize], Vec<BitString>)> =
        vec![(&lay.data, (0..shape.k()).map(|j| shape.entry(j)).collect())];
    for a in &lay.aux {
        registers.push((&a.qubits, a.contents.clone()));
    }
    for (qubits, contents) in &registers {
        for (j, bits) in contents.iter().enumerate() {
            for b in bits.ones() {
                c.push(
                    GateSpec::x(qubits[b])
                        .with_controls(value_controls(&lay.index, shape.physical(j))),
                )?;
            }
        }
    }
    if let Some(u) = &shape.u_d {
        for (qubits, _) in &registers {
            c.extend_from(&place(u, qubits, &c)?)?;
        }
    }
    Ok(c)
}

/// `u` moved onto `qubits` inside a circuit shaped like `like`.
pub(crate) fn place(u: &Circuit, qubits: &[usize], like: &Circuit) -> Result<Circuit> {
    u.remap(qubits, like.labels().to_vec())
}

impl QdbState {
    /// Balanced empty database over `k = 2^t` entries: a Hadamard on every
    /// index qubit.
    pub fn prepare_balanced(k: usize, data_width: usize) -> Result<Self> {
        if !k.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(k));
        }
        let shape = QdbShape::prepared(k, 0, data_width, None)?;
        let mut c = Circuit::with_labels(shape.layout.labels());
        for &q in &shape.layout.index {
            c.push(GateSpec::h(q))?;
        }
        let state = c.run_from_zero()?;
        Ok(QdbState {
            shape,
            state,
            history: c,
            trace: None,
        })
    }

    /// Empty database with `k ≥ 2` entries and reservoir `l`.
    pub fn prepare_general(k: usize, l: usize, data_width: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "general preparation needs k ≥ 2, got {k}"
            )));
        }
        QdbState::synthesize(QdbShape::prepared(k, l, data_width, None)?)
    }

    /// Database holding the descriptor's data.
    pub fn prepare(desc: &QdbDescriptor) -> Result<Self> {
        QdbState::synthesize(QdbShape::from_descriptor(desc)?)
    }
}
