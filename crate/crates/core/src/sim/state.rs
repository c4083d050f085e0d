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
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::entangle::{self, EntanglementReport};
use super::gate::{GateKind, GateSpec, Polarity};
use super::kernel::{self, ControlMask};
use super::{max_qubits, C64, NORM_TOL, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// Normalized amplitude vector over `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

/// Deposit the low bits of `value` at the positions listed in `qubits`.
pub fn scatter_bits(value: u64, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .filter(|(i, _)| (value >> i) & 1 == 1)
        .fold(0usize, |acc, (_, &q)| acc | (1 << q))
}

/// Read the bits at `qubits` out of a basis index (inverse of `scatter_bits`).
pub fn gather_bits(index: usize, qubits: &[usize]) -> u64 {
    qubits.iter().enumerate().fold(0u64, |acc, (i, &q)| {
        acc | ((((index >> q) & 1) as u64) << i)
    })
}

fn check_cap(n: usize) -> Result<()> {
    let cap = max_qubits();
    if n > cap {
        return Err(Error::TooManyQubits { n, cap });
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: u64) -> Result<Self> {
        check_cap(n)?;
        if n < 64 && index >> n != 0 {
            return Err(Error::BasisOutOfRange { index, width: n });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index as usize] = C64::new(1.0, 0.0);
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Wrap an amplitude array. The length must be a power of two and the
    /// vector normalized within `NORM_TOL`.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let state = Self::from_amplitudes_unnormalized(amps)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Wrap and rescale an arbitrary nonzero amplitude array.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut state = Self::from_amplitudes_unnormalized(amps)?;
        let norm = state.norm_sqr();
        if norm < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(norm));
        }
        state.scale(1.0 / norm.sqrt());
        Ok(state)
    }

    fn from_amplitudes_unnormalized(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadDimension(len));
        }
        let n = len.trailing_zeros() as usize;
        check_cap(n)?;
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        kernel::reduce_sum(&self.amps, |_, a| a.norm_sqr())
    }

    fn scale(&mut self, factor: f64) {
        self.amps
            .par_iter_mut()
            .with_min_len(1 << 12)
            .for_each(|a| *a *= factor);
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let mut ctl = ControlMask::default();
        for c in gate.controls() {
            ctl.mask |= 1 << c.qubit;
            if c.polarity == Polarity::One {
                ctl.value |= 1 << c.qubit;
            }
        }
        let targets = gate.targets();
        match *gate.kind() {
            GateKind::Swap => kernel::apply_swap(&mut self.amps, targets[0], targets[1], ctl),
            GateKind::TwoLevel { a, b, theta } => {
                let mask = scatter_bits(u64::MAX >> (64 - targets.len()), targets);
                let off_a = scatter_bits(a, targets);
                let off_b = scatter_bits(b, targets);
                kernel::apply_two_level(&mut self.amps, mask, off_a, off_b, theta, ctl);
            }
            kind => {
                let m = kind.matrix().expect("single-qubit gate");
                kernel::apply_single(&mut self.amps, targets[0], m, ctl);
            }
        }
        Ok(())
    }

    /// Consuming variant of [`apply_gate`](Self::apply_gate).
    pub fn with_gate(mut self, gate: &GateSpec) -> Result<Self> {
        self.apply_gate(gate)?;
        Ok(self)
    }

    /// Givens rotation between full-register basis states `a` and `b`.
    pub fn apply_two_level_rotation(&mut self, a: u64, b: u64, theta: f64) -> Result<()> {
        let targets: Vec<usize> = (0..self.n_qubits).collect();
        let gate = GateSpec::two_level(targets, a, b, theta)?;
        self.apply_gate(&gate)
    }

    /// Probability of the basis states selected by `keep`.
    pub fn probability<F>(&self, keep: F) -> f64
    where
        F: Fn(usize) -> bool + Sync,
    {
        kernel::reduce_sum(&self.amps, |i, a| if keep(i) { a.norm_sqr() } else { 0.0 })
    }

    /// Project onto the span of the basis states selected by `keep`.
    ///
    /// Returns the renormalized state and the probability of the projection.
    pub fn project<F>(&self, keep: F) -> Result<(StateVector, f64)>
    where
        F: Fn(usize) -> bool + Sync,
    {
        let p = self.probability(&keep);
        if p < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(p));
        }
        let scale = 1.0 / p.sqrt();
        let amps = self
            .amps
            .par_iter()
            .with_min_len(1 << 12)
            .enumerate()
            .map(|(i, a)| {
                if keep(i) {
                    a * scale
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            StateVector {
                n_qubits: self.n_qubits,
                amps,
            },
            p,
        ))
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::OverlappingQubits(q));
            }
        }
        Ok(())
    }

    /// Born distribution of the values of `qubits` (bit i of the outcome is
    /// `qubits[i]`).
    pub fn marginal_probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_qubits(qubits)?;
        if qubits.len() > 30 {
            return Err(Error::InvalidArgument("too many measured qubits".into()));
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[gather_bits(i, qubits) as usize] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Measure `qubits` with a PRNG seeded from `seed`.
    pub fn sample_measure(&self, qubits: &[usize], seed: u64) -> Result<(u64, StateVector)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_measure_with(qubits, &mut rng)
    }

    /// Measure `qubits`, drawing from `rng`. Returns the outcome and the
    /// post-measurement state.
    pub fn sample_measure_with<R: Rng>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(u64, StateVector)> {
        let probs = self.marginal_probabilities(qubits)?;
        let outcome = draw(&probs, rng);
        let (post, _) = self.project(|i| gather_bits(i, qubits) == outcome)?;
        Ok((outcome, post))
    }

    /// Draw `shots` independent outcomes of measuring `qubits` without
    /// collapsing this state.
    pub fn sample_counts<R: Rng>(
        &self,
        qubits: &[usize],
        shots: usize,
        rng: &mut R,
    ) -> Result<BTreeMap<u64, usize>> {
        let probs = self.marginal_probabilities(qubits)?;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(draw(&probs, rng)).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Append `count` qubits above the current ones, prepared in the basis
    /// state `value` (bit i goes to the i-th new qubit).
    pub fn add_ancillas(&mut self, count: usize, value: u64) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if count < 64 && value >> count != 0 {
            return Err(Error::BasisOutOfRange {
                index: value,
                width: count,
            });
        }
        let n = self.n_qubits + count;
        check_cap(n)?;
        let old = self.amps.len();
        let offset = (value as usize) << self.n_qubits;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[offset..offset + old].copy_from_slice(&self.amps);
        self.amps = amps;
        self.n_qubits = n;
        Ok(())
    }

    /// Drop the `count` most significant qubits, which must be in `|0⟩`.
    pub fn release_qubits(&mut self, count: usize) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if count > self.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: count,
            });
        }
        let keep = 1usize << (self.n_qubits - count);
        let leftover = kernel::reduce_sum(&self.amps[keep..], |_, a| a.norm_sqr());
        if leftover > NORM_TOL {
            return Err(Error::NotSeparable {
                qubits: (self.n_qubits - count..self.n_qubits).collect(),
                weight: leftover,
            });
        }
        self.amps.truncate(keep);
        self.n_qubits -= count;
        Ok(())
    }

    /// State of `qubits` when the full state is a product between them and
    /// the rest. Fails with `NotSeparable` otherwise.
    pub fn factor(&self, qubits: &[usize]) -> Result<StateVector> {
        self.check_qubits(qubits)?;
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect();
        if rest.is_empty() {
            return Ok(self.clone());
        }
        let part = self.slice(&rest, argmax(&self.marginal_probabilities(&rest)?))?;
        let other = self.slice(qubits, argmax(&self.marginal_probabilities(qubits)?))?;
        let product_overlap = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.conj()
                    * part.amps[gather_bits(i, qubits) as usize]
                    * other.amps[gather_bits(i, &rest) as usize]
            })
            .sum::<C64>()
            .norm();
        let defect = (1.0 - product_overlap).abs();
        if defect > 1e-9 {
            return Err(Error::NotSeparable {
                qubits: qubits.to_vec(),
                weight: defect,
            });
        }
        Ok(part)
    }

    /// Normalized state of the remaining qubits after fixing `qubits` to
    /// `value` (in the order given).
    pub fn slice(&self, qubits: &[usize], value: u64) -> Result<StateVector> {
        self.check_qubits(qubits)?;
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect();
        let fixed = scatter_bits(value, qubits);
        let amps = (0..1usize << rest.len())
            .map(|r| self.amps[fixed | scatter_bits(r as u64, &rest)])
            .collect();
        StateVector::normalized(amps)
    }

    /// Inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        let re = kernel::reduce_sum(&self.amps, |i, a| (a.conj() * other.amps[i]).re);
        let im = kernel::reduce_sum(&self.amps, |i, a| (a.conj() * other.amps[i]).im);
        Ok(C64::new(re, im))
    }

    /// Largest element-wise deviation after aligning the global phase of
    /// `other` to this state.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let ov = self.overlap(other)?;
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest element-wise deviation, phases included.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entanglement between `subset` and the remaining qubits.
    pub fn schmidt(&self, subset: &[usize]) -> Result<EntanglementReport> {
        self.check_qubits(subset)?;
        if subset.is_empty() || subset.len() == self.n_qubits {
            return Err(Error::InvalidBipartition);
        }
        Ok(entangle::schmidt(self, subset))
    }

    /// Purity of the reduced state on `subset`.
    pub fn purity(&self, subset: &[usize]) -> Result<f64> {
        Ok(self.schmidt(subset)?.purity)
    }
}

fn argmax(probs: &[f64]) -> u64 {
    probs
        .iter()
        .enumerate()
        .fold(
            (0, -1.0),
            |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc },
        )
        .0 as u64
}

fn draw<R: Rng>(probs: &[f64], rng: &mut R) -> u64 {
    let total: f64 = probs.iter().sum();
    let mut r = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        last = i;
        if r < p {
            return i as u64;
        }
        r -= p;
    }
    last as u64
}
