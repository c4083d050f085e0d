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

use crate::circuit::zero_controls;
use crate::error::{Error, Result};
use crate::qdb::{reservoir_prepare_gates, QdbShape, QdbState};
use crate::sim::{GateSpec, Register};

/// How the second stage restricts the new index rotation to the branches
/// with a nonzero ancilla value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Rotate unconditionally, then undo on the all-zero ancilla branch.
    #[default]
    Direct,
    /// Mark the nonzero ancilla values on an extra qubit and condition on it.
    Marker,
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Route::Direct),
            "marker" => Ok(Route::Marker),
            other => Err(Error::InvalidArgument(format!("unknown route `{other}`"))),
        }
    }
}

/// Parameters of an extension that spends the reservoir of a database
/// prepared with reservoir `l`.
///
/// With `z = 1` all `l` new entries come from a single conditional rotation
/// and `l_prime = l`, `l_dprime = 1`. Otherwise `l_prime ≤ 2^z − 1` ancilla
/// values each open `l_dprime` index values, giving `l_prime·l_dprime` new
/// entries with amplitude `gamma`; the reservoir keeps `alpha` and the old
/// entries keep `beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendPlan {
    pub k: usize,
    pub l: usize,
    pub z: usize,
    pub l_prime: usize,
    pub l_dprime: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub balanced: bool,
    pub route: Route,
}

impl ExtendPlan {
    pub fn new_entries(&self) -> usize {
        self.l_prime * self.l_dprime
    }

    /// `α² + (k−1)β² + l'·l''·γ²`.
    pub fn total_probability(&self) -> f64 {
        self.alpha.powi(2)
            + (self.k - 1) as f64 * self.beta.powi(2)
            + self.new_entries() as f64 * self.gamma.powi(2)
    }
}

/// Plan with the default split: `l' = min(l, 2^z − 1)` and `l'' = l − l'`
/// when that is positive, else 1.
pub fn plan_imbalanced(k: usize, l: usize, z: usize) -> Result<ExtendPlan> {
    if z == 0 || z >= 32 {
        return Err(Error::InvalidArgument(format!(
            "ancilla count z = {z} out of range"
        )));
    }
    let cap = (1usize << z) - 1;
    if l == 0 {
        return Err(Error::InvalidArgument("extension needs l > 0".into()));
    }
    if l > cap * k {
        return Err(Error::Capacity(format!(
            "{l} new entries exceed the capacity (2^{z} − 1)·{k} = {}",
            cap * k
        )));
    }
    if z == 1 {
        let b = 1.0 / ((k + l) as f64).sqrt();
        check_k(k)?;
        return Ok(ExtendPlan {
            k,
            l,
            z,
            l_prime: l,
            l_dprime: 1,
            alpha: b,
            beta: b,
            gamma: b,
            balanced: true,
            route: Route::Direct,
        });
    }
    let l_prime = l.min(cap);
    let l_dprime = if l > l_prime { l - l_prime } else { 1 };
    plan_imbalanced_with(k, l, z, l_prime, l_dprime, Route::Direct)
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "extension needs k ≥ 2, got {k}"
        )));
    }
    Ok(())
}

/// Plan with an explicit two-stage split (`z ≥ 2`).
pub fn plan_imbalanced_with(
    k: usize,
    l: usize,
    z: usize,
    l_prime: usize,
    l_dprime: usize,
    route: Route,
) -> Result<ExtendPlan> {
    check_k(k)?;
    if !(2..32).contains(&z) {
        return Err(Error::InvalidArgument(format!(
            "a two-stage split needs 2 ≤ z < 32, got {z}"
        )));
    }
    if l_prime == 0 || l_prime > (1usize << z) - 1 {
        return Err(Error::Capacity(format!(
            "l' = {l_prime} must lie in 1..=2^{z} − 1"
        )));
    }
    if l_dprime == 0 {
        return Err(Error::InvalidArgument("l'' must be positive".into()));
    }
    let total = (l + k) as f64;
    let r2 = (l as f64 + 1.0) / total;
    Ok(ExtendPlan {
        k,
        l,
        z,
        l_prime,
        l_dprime,
        alpha: (r2 / (l_prime as f64 + 1.0)).sqrt(),
        beta: (1.0 / total).sqrt(),
        gamma: (r2 / ((l_prime as f64 + 1.0) * l_dprime as f64)).sqrt(),
        balanced: l + 1 == (l_prime + 1) * l_dprime,
        route,
    })
}

impl QdbShape {
    /// Shape after an extension that spends the reservoir per `plan`.
    pub fn after_imbalanced(&self, plan: &ExtendPlan) -> Result<Self> {
        self.require_no_aux()?;
        if plan.k != self.k() {
            return Err(Error::InvalidArgument(format!(
                "plan is for k = {}, database has {}",
                plan.k,
                self.k()
            )));
        }
        if self.reservoir != Some(plan.l) {
            return Err(Error::InsufficientReservoir(format!(
                "the plan spends reservoir {}, the database has {}",
                plan.l,
                self.reservoir.map_or("none".to_string(), |r| r.to_string())
            )));
        }
        if plan.z == 1 {
            return self.after_unfold(plan.l);
        }
        let w = self.layout.index.len();
        if plan.l_dprime as u64 > 1u64 << w {
            return Err(Error::Capacity(format!(
                "l'' = {} does not fit a {w}-qubit index register",
                plan.l_dprime
            )));
        }
        let n = self.n_qubits();
        let extra = usize::from(plan.route == Route::Marker && plan.l_dprime > 1);
        crate::qdb::check_capacity(n + plan.z + extra)?;
        let mut next = self.clone();
        next.layout.index.extend(n..n + plan.z);
        next.weights[0] = plan.alpha;
        for j in 1..=plan.l_prime as u64 {
            for h in 0..plan.l_dprime as u64 {
                next.layout.logical.push(h + (j << w));
                next.weights.push(plan.gamma);
            }
        }
        next.reservoir = plan.balanced.then(|| plan.l_dprime - 1);
        Ok(next)
    }
}

impl QdbState {
    /// Extend by up to `l` entries using `z` ancilla qubits, spending the
    /// reservoir this database was prepared with.
    pub fn extend_imbalanced(&mut self, l: usize, z: usize) -> Result<ExtendPlan> {
        let plan = plan_imbalanced(self.k(), l, z)?;
        self.extend_with_plan(&plan)?;
        Ok(plan)
    }

    /// Run an explicit extension plan.
    pub fn extend_with_plan(&mut self, plan: &ExtendPlan) -> Result<()> {
        let next = self.shape.after_imbalanced(plan)?;
        if plan.z == 1 {
            return self.unfold(plan.l);
        }
        let index = self.shape.layout.index.clone();
        let anc = self.allocate(&vec![Register::I; plan.z])?;
        let mut c = self.scratch();
        for g in reservoir_prepare_gates(&anc, plan.l_prime + 1, 0)? {
            c.push(g.with_controls(zero_controls(&index)))?;
        }
        self.run("extend: open ancilla values", &c)?;

        if plan.l_dprime > 1 {
            let mut spread = self.scratch();
            for g in reservoir_prepare_gates(&index, plan.l_dprime, 0)? {
                spread.push(g)?;
            }
            match plan.route {
                Route::Direct => {
                    let mut c = spread.clone();
                    c.extend_from(&spread.inverse().controlled_by(&zero_controls(&anc))?)?;
                    self.run("extend: open index values", &c)?;
                }
                Route::Marker => {
                    let marker = self.allocate(&[Register::A])?[0];
                    let mut mark = self.scratch();
                    mark.push(GateSpec::x(marker))?;
                    mark.push(GateSpec::x(marker).with_controls(zero_controls(&anc)))?;
                    let mut c = mark.clone();
                    let mut wide = self.scratch();
                    wide.extend_from(&spread)?;
                    c.extend_from(&wide.controlled_by(&[crate::sim::Control {
                        qubit: marker,
                        polarity: crate::sim::Polarity::One,
                    }])?)?;
                    c.extend_from(&mark.inverse())?;
                    self.run("extend: open index values", &c)?;
                    self.release(1)?;
                }
            }
        }
        self.set_shape(next)
    }
}
