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

use super::plan::{check_transfer, plan_transfer_from, AmplificationPlan};
use crate::circuit::{zero_controls, Circuit};
use crate::error::{Error, Result};
use crate::qdb::{
    reservoir_prepare_gates, reservoir_weights, synthesize_preparation, QdbShape, QdbState,
};
use crate::sim::{GateSpec, Register};

/// Tolerance on the amplitudes an extension must reproduce.
pub const TRANSFER_TOL: f64 = 1e-8;

/// Chunks and plans of a full extension.
#[derive(Clone, Debug, Serialize)]
pub struct ExtendReport {
    pub chunks: Vec<usize>,
    pub plans: Vec<AmplificationPlan>,
}

impl QdbShape {
    /// Shape after growing the reservoir to `l`.
    pub fn after_transfer(&self, l: usize) -> Result<Self> {
        self.require_no_aux()?;
        let from = self.reservoir.ok_or_else(|| {
            Error::NotBalanced("weights do not follow the reservoir pattern".into())
        })?;
        check_transfer(self.k(), from, l)?;
        let mut next = self.clone();
        next.weights = reservoir_weights(self.k(), l);
        next.reservoir = Some(l);
        Ok(next)
    }

    /// Shape after spending `l` units of reservoir on `l` new empty entries.
    pub fn after_unfold(&self, l: usize) -> Result<Self> {
        self.require_no_aux()?;
        let have = self.reservoir.unwrap_or(0);
        if self.reservoir.is_none() || have < l {
            return Err(Error::InsufficientReservoir(format!(
                "unfolding {l} entries needs reservoir ≥ {l}, have {}",
                self.reservoir.map_or("none".to_string(), |r| r.to_string())
            )));
        }
        if l == 0 {
            return Err(Error::InvalidArgument("unfold needs l > 0".into()));
        }
        let w = self.layout.index.len();
        if l as u64 > 1u64 << w {
            return Err(Error::Capacity(format!(
                "{l} new entries do not fit a {w}-qubit index register"
            )));
        }
        crate::qdb::check_capacity(self.n_qubits() + 1)?;
        let mut next = self.clone();
        next.layout.index.push(self.n_qubits());
        next.layout
            .logical
            .extend((0..l as u64).map(|i| (1u64 << w) + i));
        let k = self.k() + l;
        next.weights = reservoir_weights(k, have - l);
        next.reservoir = Some(have - l);
        Ok(next)
    }

    /// Shape after extending a balanced database by `l` entries.
    pub fn after_extend(&self, l: usize) -> Result<Self> {
        let mut s = self.clone();
        for chunk in extend_chunks(self, l)? {
            s = s.after_transfer(chunk)?.after_unfold(chunk)?;
        }
        Ok(s)
    }
}

/// Chunk sizes of a full extension: while more than `k` entries are
/// missing, double the database, then add the rest.
fn extend_chunks(shape: &QdbShape, l: usize) -> Result<Vec<usize>> {
    shape.require_no_aux()?;
    if shape.reservoir != Some(0) {
        return Err(Error::NotBalanced(
            "extension starts from a balanced database".into(),
        ));
    }
    if l == 0 {
        return Err(Error::InvalidArgument("extension needs l > 0".into()));
    }
    let (mut k, mut rest) = (shape.k(), l);
    if k < 2 {
        return Err(Error::InvalidArgument("extension needs k ≥ 2".into()));
    }
    let mut chunks = Vec::new();
    while rest > k {
        chunks.push(k);
        rest -= k;
        k *= 2;
    }
    chunks.push(rest);
    Ok(chunks)
}

/// Append a phase `e^{iθ}` on the all-zero state of `qubits`.
pub(crate) fn push_zero_phase(c: &mut Circuit, qubits: &[usize], theta: f64) -> Result<()> {
    let (first, rest) = qubits.split_first().ok_or(Error::BadDimension(0))?;
    c.push(GateSpec::x(*first))?;
    c.push(GateSpec::phase(*first, theta)?.with_controls(zero_controls(rest)))?;
    c.push(GateSpec::x(*first))
}

impl QdbState {
    /// Grow the reservoir entry by exact amplitude amplification.
    ///
    /// `u_qdb` must prepare the current state from `|0…0⟩`; it is checked
    /// first. The result is verified against the plan's target.
    pub fn transfer(&mut self, plan: &AmplificationPlan, u_qdb: &Circuit) -> Result<()> {
        let next = self.shape.after_transfer(plan.l)?;
        if plan.k != self.k() {
            return Err(Error::InvalidArgument(format!(
                "plan is for k = {}, database has {}",
                plan.k,
                self.k()
            )));
        }
        if (plan.initial_amplitude - self.shape.weights[0]).abs() > TRANSFER_TOL {
            return Err(Error::InvalidArgument(
                "plan starts from a different reservoir".into(),
            ));
        }
        if u_qdb.n_qubits() != self.n_qubits() {
            return Err(Error::QubitCountMismatch {
                expected: self.n_qubits(),
                got: u_qdb.n_qubits(),
            });
        }
        let replay = u_qdb.run_from_zero()?;
        let gap = replay.distance_up_to_phase(&self.state)?;
        if gap > TRANSFER_TOL {
            return Err(Error::PreparationMismatch(gap));
        }
        if !plan.is_noop() {
            let core = self.shape.layout.core_qubits();
            let u = u_qdb.remap(
                &(0..u_qdb.n_qubits()).collect::<Vec<_>>(),
                self.history.labels()[..self.n_qubits()].to_vec(),
            )?;
            let u_inv = u.inverse();
            let mut c = self.scratch();
            let step = |c: &mut Circuit, phi: f64, rho: f64| -> Result<()> {
                push_zero_phase(c, &core, rho)?;
                c.extend_from(&u_inv)?;
                push_zero_phase(c, &core, phi)?;
                c.extend_from(&u)
            };
            for _ in 0..plan.m {
                step(&mut c, std::f64::consts::PI, std::f64::consts::PI)?;
            }
            step(&mut c, plan.phi, plan.rho)?;
            push_zero_phase(&mut c, &core, plan.phase_fix)?;
            let q = core[0];
            for g in [
                GateSpec::x(q),
                GateSpec::phase(q, plan.global_phase)?,
                GateSpec::x(q),
                GateSpec::phase(q, plan.global_phase)?,
            ] {
                c.push(g)?;
            }
            self.run("transfer", &c)?;
        }
        let reached = self.state.amplitude(0).norm();
        if (reached - plan.target_amplitude).abs() > TRANSFER_TOL {
            return Err(Error::NonConvergence {
                what: "amplitude transfer",
                residual: (reached - plan.target_amplitude).abs(),
            });
        }
        self.set_shape(next)
    }

    /// Turn `l` units of reservoir into `l` new empty entries with one
    /// extra index qubit.
    pub fn unfold(&mut self, l: usize) -> Result<()> {
        let next = self.shape.after_unfold(l)?;
        let have = self.shape.reservoir.expect("checked by the shape");
        let core = self.shape.layout.core_qubits();
        let index = self.shape.layout.index.clone();
        let a = self.allocate(&[Register::I])?[0];
        let mut c = self.scratch();
        let p = (have + 1 - l) as f64 / (have + 1) as f64;
        c.push(GateSpec::y(a, p)?.with_controls(zero_controls(&core)))?;
        for g in reservoir_prepare_gates(&index, l, 0)? {
            c.push(g.ctrl(a))?;
        }
        self.run("unfold", &c)?;
        self.set_shape(next)
    }

    /// Extend a balanced database by `l` empty entries, alternating
    /// transfers and unfolds. Without `u_qdb` the preparation circuit is
    /// synthesized from the shape, which is also done for every later chunk.
    pub fn extend(&mut self, l: usize, u_qdb: Option<&Circuit>) -> Result<ExtendReport> {
        self.shape.after_extend(l)?;
        let chunks = extend_chunks(&self.shape, l)?;
        let mut plans = Vec::new();
        for (i, &chunk) in chunks.iter().enumerate() {
            let plan = plan_transfer_from(self.k(), 0, chunk)?;
            let u = match (i, u_qdb) {
                (0, Some(u)) => u.clone(),
                _ => synthesize_preparation(&self.shape)?,
            };
            self.transfer(&plan, &u)?;
            self.unfold(chunk)?;
            plans.push(plan);
        }
        Ok(ExtendReport { chunks, plans })
    }

    /// Largest probability of a set data qubit on the branches of entries
    /// `first_new..k`.
    pub fn new_entry_excitation(&self, first_new: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for j in first_new..self.k() {
            worst = worst.max(self.data_excitation_given(j)?);
        }
        Ok(worst)
    }
}
