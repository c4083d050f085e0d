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

//! Brute-force reference implementations.
//!
//! Nothing here calls into the simulator kernels: gates are expanded from
//! their own matrices basis state by basis state, so agreement between the
//! two paths is an independent check.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::qdb::{ceil_log2, QdbDescriptor};
use crate::sim::{GateKind, GateSpec, Polarity, StateVector, C64};

/// Largest register a dense operator may cover.
pub const MAX_ORACLE_QUBITS: usize = 12;
/// Registers at most this wide get a full unitarity check when validated.
pub const SMALL_OPERATOR_QUBITS: usize = 8;

/// Row-major `2^n × 2^n` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    n_qubits: usize,
    dim: usize,
    entries: Vec<C64>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::Capacity(format!(
            "dense operators are limited to {MAX_ORACLE_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

impl DenseOperator {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c(1.0);
        }
        Ok(DenseOperator {
            n_qubits,
            dim,
            entries,
        })
    }

    fn from_columns(n_qubits: usize, cols: Vec<Vec<C64>>) -> Self {
        let dim = 1usize << n_qubits;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                entries[i * dim + j] = *v;
            }
        }
        DenseOperator {
            n_qubits,
            dim,
            entries,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::QubitCountMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok((0..self.dim)
            .into_par_iter()
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    pub fn apply_state(&self, s: &StateVector) -> Result<StateVector> {
        StateVector::from_amplitudes(self.apply(s.amplitudes())?)
    }

    /// `self · other`.
    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim != other.dim {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        let d = self.dim;
        let entries = (0..d * d)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / d, idx % d);
                (0..d)
                    .map(|k| self.entries[i * d + k] * other.entries[k * d + j])
                    .sum()
            })
            .collect();
        Ok(DenseOperator {
            n_qubits: self.n_qubits,
            dim: d,
            entries,
        })
    }

    pub fn adjoint(&self) -> DenseOperator {
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        DenseOperator {
            n_qubits: self.n_qubits,
            dim: d,
            entries,
        }
    }

    pub fn transpose(&self) -> DenseOperator {
        let mut t = self.adjoint();
        t.entries.iter_mut().for_each(|z| *z = z.conj());
        t
    }

    /// `U†U = I` within `tol`, element-wise.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d * d).into_par_iter().all(|idx| {
            let (i, j) = (idx / d, idx % d);
            let v: C64 = (0..d)
                .map(|k| self.entries[k * d + i].conj() * self.entries[k * d + j])
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            (v - want).norm() <= tol
        })
    }

    /// Largest element-wise difference.
    pub fn max_diff(&self, other: &DenseOperator) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest element-wise difference after removing a global phase.
    pub fn max_diff_up_to_phase(&self, other: &DenseOperator) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        let inner: C64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let phase = if inner.norm() > 0.0 {
            inner.conj() / inner.norm()
        } else {
            c(1.0)
        };
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }

    /// Block acting on the states where every qubit in `ancillas` is `|0⟩`,
    /// on input and output. The remaining qubits keep their relative order.
    pub fn restrict_to_zero(&self, ancillas: &[usize]) -> Result<DenseOperator> {
        for &q in ancillas {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let keep: Vec<usize> = (0..self.n_qubits)
            .filter(|q| !ancillas.contains(q))
            .collect();
        let n = keep.len();
        let d = 1usize << n;
        let embed = |x: usize| -> usize {
            keep.iter()
                .enumerate()
                .filter(|(i, _)| (x >> i) & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | (1 << q))
        };
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = self.get(embed(i), embed(j));
            }
        }
        Ok(DenseOperator {
            n_qubits: n,
            dim: d,
            entries,
        })
    }
}

/// Matrix of a circuit, built column by column from each gate's action on
/// basis states.
pub fn dense_operator(circuit: &Circuit) -> Result<DenseOperator> {
    let n = circuit.n_qubits();
    check_size(n)?;
    let dim = 1usize << n;
    let actions: Vec<GateAction> = circuit.gates().iter().map(GateAction::new).collect();
    let cols: Vec<Vec<C64>> = (0..dim)
        .into_par_iter()
        .map(|j| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[j] = c(1.0);
            let mut next = vec![C64::new(0.0, 0.0); dim];
            for a in &actions {
                next.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                for (x, amp) in v.iter().enumerate() {
                    if amp.re == 0.0 && amp.im == 0.0 {
                        continue;
                    }
                    a.scatter(x, *amp, &mut next);
                }
                std::mem::swap(&mut v, &mut next);
            }
            v
        })
        .collect();
    Ok(DenseOperator::from_columns(n, cols))
}

/// Apply a circuit to a state through the dense operator.
pub fn apply_dense(circuit: &Circuit, state: &StateVector) -> Result<StateVector> {
    dense_operator(circuit)?.apply_state(state)
}

enum Action {
    Single {
        target: usize,
        m: [[C64; 2]; 2],
    },
    Swap(usize, usize),
    TwoLevel {
        targets: Vec<usize>,
        a: u64,
        b: u64,
        cos: f64,
        sin: f64,
    },
}

struct GateAction {
    action: Action,
    ones: Vec<usize>,
    zeros: Vec<usize>,
}

impl GateAction {
    fn new(g: &GateSpec) -> Self {
        let ones = g
            .controls()
            .iter()
            .filter(|c| c.polarity == Polarity::One)
            .map(|c| c.qubit)
            .collect();
        let zeros = g
            .controls()
            .iter()
            .filter(|c| c.polarity == Polarity::Zero)
            .map(|c| c.qubit)
            .collect();
        let t = g.targets();
        let action = match *g.kind() {
            GateKind::Swap => Action::Swap(t[0], t[1]),
            GateKind::TwoLevel { a, b, theta } => Action::TwoLevel {
                targets: t.to_vec(),
                a,
                b,
                cos: theta.cos(),
                sin: theta.sin(),
            },
            kind => Action::Single {
                target: t[0],
                m: reference_matrix(&kind),
            },
        };
        GateAction {
            action,
            ones,
            zeros,
        }
    }

    fn enabled(&self, x: usize) -> bool {
        self.ones.iter().all(|&q| (x >> q) & 1 == 1)
            && self.zeros.iter().all(|&q| (x >> q) & 1 == 0)
    }

    /// Add `amp · G|x⟩` into `out`.
    fn scatter(&self, x: usize, amp: C64, out: &mut [C64]) {
        if !self.enabled(x) {
            out[x] += amp;
            return;
        }
        match &self.action {
            Action::Single { target, m } => {
                let bit = (x >> target) & 1;
                let base = x & !(1 << target);
                out[base] += m[0][bit] * amp;
                out[base | (1 << target)] += m[1][bit] * amp;
            }
            Action::Swap(p, q) => {
                let (bp, bq) = ((x >> p) & 1, (x >> q) & 1);
                let y = (x & !(1 << p) & !(1 << q)) | (bq << p) | (bp << q);
                out[y] += amp;
            }
            Action::TwoLevel {
                targets,
                a,
                b,
                cos,
                sin,
            } => {
                let mut sub = 0u64;
                let mut rest = x;
                for (i, &q) in targets.iter().enumerate() {
                    sub |= (((x >> q) & 1) as u64) << i;
                    rest &= !(1 << q);
                }
                let place = |v: u64| -> usize {
                    targets
                        .iter()
                        .enumerate()
                        .fold(rest, |acc, (i, &q)| acc | ((((v >> i) & 1) as usize) << q))
                };
                if sub == *a {
                    out[place(*a)] += amp * *cos;
                    out[place(*b)] += amp * *sin;
                } else if sub == *b {
                    out[place(*a)] -= amp * *sin;
                    out[place(*b)] += amp * *cos;
                } else {
                    out[x] += amp;
                }
            }
        }
    }
}

/// Matrices written out from their definitions.
fn reference_matrix(kind: &GateKind) -> [[C64; 2]; 2] {
    let y = |p: f64| {
        [
            [c(p.sqrt()), c(-(1.0 - p).sqrt())],
            [c((1.0 - p).sqrt()), c(p.sqrt())],
        ]
    };
    match *kind {
        GateKind::X => [[c(0.0), c(1.0)], [c(1.0), c(0.0)]],
        GateKind::H => [
            [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)],
            [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)],
        ],
        GateKind::Ry(t) => {
            let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
            [[c(co), c(-s)], [c(s), c(co)]]
        }
        GateKind::Y(p) => y(p),
        GateKind::YTilde(p) => {
            let a = y(p);
            // inverse of Y(1/2) is its transpose
            let h = y(0.5);
            let inv = [[h[0][0], h[1][0]], [h[0][1], h[1][1]]];
            let mut out = [[c(0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = a[i][0] * inv[0][j] + a[i][1] * inv[1][j];
                }
            }
            out
        }
        GateKind::Phase(phi) => [[c(1.0), c(0.0)], [c(0.0), C64::new(phi.cos(), phi.sin())]],
        GateKind::Swap | GateKind::TwoLevel { .. } => unreachable!("not a single-qubit gate"),
    }
}

/// `M_π ⊗ I_D`: index `j < k` goes to `π(j)`, unused index values stay.
pub fn permutation_matrix(
    pi: &[usize],
    index_width: usize,
    data_width: usize,
) -> Result<DenseOperator> {
    let k = pi.len();
    let mut seen = vec![false; k];
    for &p in pi {
        if p >= k || seen[p] {
            return Err(Error::NotPermutation(k));
        }
        seen[p] = true;
    }
    if k > 1usize << index_width {
        return Err(Error::InvalidArgument(format!(
            "{k} indices do not fit in {index_width} index qubits"
        )));
    }
    let n = index_width + data_width;
    check_size(n)?;
    let dim = 1usize << n;
    let mask = (1usize << index_width) - 1;
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for x in 0..dim {
        let i = x & mask;
        let target = if i < k { pi[i] } else { i };
        let y = (x & !mask) | target;
        entries[y * dim + x] = c(1.0);
    }
    Ok(DenseOperator {
        n_qubits: n,
        dim,
        entries,
    })
}

/// Data states `U_D|d⟩` for every computational string, one column each.
fn data_states(desc: &QdbDescriptor) -> Result<Option<DenseOperator>> {
    desc.u_d.as_ref().map(dense_operator).transpose()
}

fn data_vector(u: &Option<DenseOperator>, bits: u64, width: usize) -> Vec<C64> {
    let dim = 1usize << width;
    match u {
        Some(op) => (0..dim).map(|r| op.get(r, bits as usize)).collect(),
        None => {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[bits as usize] = c(1.0);
            v
        }
    }
}

/// Closed-form amplitudes of a freshly prepared database: index register of
/// `⌈log₂ k⌉` qubits at the bottom, data register above it.
pub fn expected_qdb_amplitudes(desc: &QdbDescriptor) -> Result<BTreeMap<u64, C64>> {
    desc.validate()?;
    let w = ceil_log2(desc.k);
    let m = desc.data_width;
    if w + m > crate::sim::max_qubits() {
        return Err(Error::TooManyQubits {
            n: w + m,
            cap: crate::sim::max_qubits(),
        });
    }
    let u = data_states(desc)?;
    let total = (desc.k + desc.l) as f64;
    let mut out = BTreeMap::new();
    for j in 0..desc.k {
        let weight = if j == 0 {
            (desc.l as f64 + 1.0) / total
        } else {
            1.0 / total
        };
        let psi = weight.sqrt();
        let d = data_vector(&u, desc.entry(j).value(), m);
        for (x, a) in d.iter().enumerate() {
            if a.norm() > 0.0 {
                out.insert((j | (x << w)) as u64, a * psi);
            }
        }
    }
    Ok(out)
}

/// Dense vector form of [`expected_qdb_amplitudes`].
pub fn expected_qdb_state(desc: &QdbDescriptor) -> Result<StateVector> {
    let n = ceil_log2(desc.k) + desc.data_width;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (i, a) in expected_qdb_amplitudes(desc)? {
        amps[i as usize] = a;
    }
    StateVector::from_amplitudes(amps)
}

/// `Σ_{j=1}^{k-1} ⟨d'_j|d_j⟩` for two databases of the same shape.
pub fn data_overlap_sum(db1: &QdbDescriptor, db2: &QdbDescriptor) -> Result<C64> {
    if db1.k != db2.k || db1.data_width != db2.data_width {
        return Err(Error::InvalidArgument(
            "databases must have the same number of entries and data width".into(),
        ));
    }
    let (u1, u2) = (data_states(db1)?, data_states(db2)?);
    let m = db1.data_width;
    let mut sum = C64::new(0.0, 0.0);
    for j in 1..db1.k {
        let a = data_vector(&u1, db1.entry(j).value(), m);
        let b = data_vector(&u2, db2.entry(j).value(), m);
        sum += b.iter().zip(&a).map(|(x, y)| x.conj() * y).sum::<C64>();
    }
    Ok(sum)
}

/// Overlap of two balanced `k`-entry databases, before and after a
/// hypothetical extension by `l` empty entries:
/// `(1/k)(1 + Σ)` and `(1/(k+l))(1 + l + Σ)`.
pub fn overlap_lemma_sides(
    db1: &QdbDescriptor,
    db2: &QdbDescriptor,
    l: usize,
) -> Result<(f64, f64)> {
    let sum = data_overlap_sum(db1, db2)?.re;
    let k = db1.k as f64;
    let l = l as f64;
    Ok(((1.0 + sum) / k, (1.0 + l + sum) / (k + l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateSpec;

    #[test]
    fn empty_circuit_is_identity() {
        let op = dense_operator(&Circuit::new(3)).unwrap();
        assert_eq!(op, DenseOperator::identity(3).unwrap());
    }

    #[test]
    fn cnot_matrix() {
        let mut circ = Circuit::new(2);
        circ.push(GateSpec::x(1).ctrl(0)).unwrap();
        let op = dense_operator(&circ).unwrap();
        // |01⟩ (index 1) ↔ |11⟩ (index 3)
        let want = [(0, 0), (3, 1), (2, 2), (1, 3)];
        for (r, col) in want {
            assert_eq!(op.get(r, col), c(1.0));
        }
        assert!(op.is_unitary(1e-15));
    }

    #[test]
    fn y_quarter_equals_ry() {
        let mut a = Circuit::new(1);
        a.push(GateSpec::y(0, 0.25).unwrap()).unwrap();
        let mut b = Circuit::new(1);
        b.push(GateSpec::ry(0, 2.0 * std::f64::consts::PI / 3.0).unwrap())
            .unwrap();
        let d = dense_operator(&a)
            .unwrap()
            .max_diff(&dense_operator(&b).unwrap());
        assert!(d < 1e-15);
    }

    #[test]
    fn transposition_is_cnot() {
        let m = permutation_matrix(&[0, 1, 3, 2], 2, 0).unwrap();
        let mut circ = Circuit::new(2);
        circ.push(GateSpec::x(0).ctrl(1)).unwrap();
        assert_eq!(m.max_diff(&dense_operator(&circ).unwrap()), 0.0);
    }

    #[test]
    fn permutation_inverse_is_transpose() {
        let pi = [0, 2, 3, 1];
        let inv = [0, 3, 1, 2];
        let a = permutation_matrix(&pi, 2, 1).unwrap();
        let b = permutation_matrix(&inv, 2, 1).unwrap();
        assert_eq!(a.transpose(), b);
        assert!(permutation_matrix(&[0, 0], 1, 0).is_err());
    }

    #[test]
    fn restriction_drops_ancilla() {
        let mut circ = Circuit::new(2);
        circ.push(GateSpec::h(0)).unwrap();
        let op = dense_operator(&circ)
            .unwrap()
            .restrict_to_zero(&[1])
            .unwrap();
        let mut one = Circuit::new(1);
        one.push(GateSpec::h(0)).unwrap();
        assert!(op.max_diff(&dense_operator(&one).unwrap()) < 1e-15);
    }

    #[test]
    fn expected_amplitudes_balanced_four() {
        let d = QdbDescriptor::empty(4, 0, 1).unwrap();
        let amps = expected_qdb_amplitudes(&d).unwrap();
        assert_eq!(amps.len(), 4);
        for (i, a) in amps {
            assert!(i < 4);
            assert!((a.re - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn expected_amplitudes_reservoir() {
        let d = QdbDescriptor::empty(14, 2, 1).unwrap();
        let amps = expected_qdb_amplitudes(&d).unwrap();
        assert!((amps[&0].re - (3.0f64 / 16.0).sqrt()).abs() < 1e-15);
        for j in 1..14u64 {
            assert!((amps[&j].re - 0.25).abs() < 1e-15);
        }
        assert!(!amps.contains_key(&14));
    }

    #[test]
    fn lemma_sides() {
        let a = QdbDescriptor::empty(2, 0, 1).unwrap();
        let b = a.clone().with_entry(1, "1".parse().unwrap()).unwrap();
        let (lhs, rhs) = overlap_lemma_sides(&a, &b, 2).unwrap();
        assert!((lhs - 0.5).abs() < 1e-15 && (rhs - 0.75).abs() < 1e-15);
        let (lhs, rhs) = overlap_lemma_sides(&b, &b, 2).unwrap();
        assert!((lhs - 1.0).abs() < 1e-15 && (rhs - 1.0).abs() < 1e-15);
    }
}
