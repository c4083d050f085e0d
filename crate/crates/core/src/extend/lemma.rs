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

use crate::error::{Error, Result};
use crate::oracle::{data_overlap_sum, overlap_lemma_sides};
use crate::qdb::{QdbDescriptor, QdbState};

/// Overlaps of two databases before and after an ideal extension by `l`
/// empty entries. A unitary extension would have to keep them equal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub k: usize,
    pub l: usize,
    /// `Σ_j ⟨d'_j|d_j⟩` over the non-reservoir entries.
    pub data_overlap_sum: f64,
    /// `⟨db₁|db₂⟩` of the balanced `k`-entry states, by simulation.
    pub before: f64,
    /// The same after extension to `k+l` entries, by simulation.
    pub after: f64,
    pub closed_before: f64,
    pub closed_after: f64,
    pub equal: bool,
    pub identical: bool,
}

const EQUAL_TOL: f64 = 1e-12;

/// Compare overlaps of two `k`-entry databases with those of their
/// `k+l`-entry extensions.
pub fn check_no_unitary_extend(
    db1: &QdbDescriptor,
    db2: &QdbDescriptor,
    l: usize,
) -> Result<LemmaReport> {
    if db1.k != db2.k || db1.data_width != db2.data_width {
        return Err(Error::InvalidDescriptor("databases differ in shape".into()));
    }
    if db1.u_d.is_some() || db2.u_d.is_some() {
        return Err(Error::InvalidDescriptor(
            "the overlap check expects computational-basis data".into(),
        ));
    }
    let balanced = |d: &QdbDescriptor, k: usize| QdbDescriptor {
        k,
        l: 0,
        data_width: d.data_width,
        data: d.data.clone(),
        u_d: None,
    };
    let overlap = |k: usize| -> Result<f64> {
        let a = QdbState::prepare(&balanced(db1, k))?;
        let b = QdbState::prepare(&balanced(db2, k))?;
        Ok(a.state().overlap(b.state())?.re)
    };
    let before = overlap(db1.k)?;
    let after = overlap(db1.k + l)?;
    let (closed_before, closed_after) = overlap_lemma_sides(db1, db2, l)?;
    Ok(LemmaReport {
        k: db1.k,
        l,
        data_overlap_sum: data_overlap_sum(db1, db2)?.re,
        before,
        after,
        closed_before,
        closed_after,
        equal: (before - after).abs() < EQUAL_TOL,
        identical: db1.data == db2.data,
    })
}
