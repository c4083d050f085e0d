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

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::{gather_bits, StateVector};
use super::RANK_TOL;

/// Schmidt data for a bipartition of a pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Descending, non-negative.
    pub schmidt_coefficients: Vec<f64>,
    pub schmidt_rank: usize,
    pub entropy_bits: f64,
    /// `Tr ρ²` of either reduced state.
    pub purity: f64,
}

impl EntanglementReport {
    pub fn is_product(&self) -> bool {
        self.schmidt_rank == 1
    }
}

pub(crate) fn schmidt(state: &StateVector, subset: &[usize]) -> EntanglementReport {
    let n = state.n_qubits();
    let mut part: Vec<usize> = subset.to_vec();
    part.sort_unstable();
    let mut rest: Vec<usize> = (0..n).filter(|q| !part.contains(q)).collect();
    if part.len() > rest.len() {
        std::mem::swap(&mut part, &mut rest);
    }
    let rows = 1usize << part.len();
    let cols = 1usize << rest.len();
    let mut m = DMatrix::zeros(rows, cols);
    for (i, a) in state.amplitudes().iter().enumerate() {
        m[(
            gather_bits(i, &part) as usize,
            gather_bits(i, &rest) as usize,
        )] = *a;
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    report_from(sv)
}

fn report_from(coefficients: Vec<f64>) -> EntanglementReport {
    let schmidt_rank = coefficients.iter().filter(|&&l| l > RANK_TOL).count();
    let mut entropy_bits = 0.0;
    let mut purity = 0.0;
    for &l in &coefficients {
        let p = l * l;
        purity += p * p;
        if p > 0.0 {
            entropy_bits -= p * p.log2();
        }
    }
    EntanglementReport {
        schmidt_coefficients: coefficients,
        schmidt_rank,
        entropy_bits: entropy_bits.max(0.0),
        purity,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{GateSpec, C64};

    #[test]
    fn product_state_has_rank_one() {
        let s = StateVector::basis(2, 2).unwrap();
        let r = s.schmidt(&[0]).unwrap();
        assert_eq!(r.schmidt_rank, 1);
        assert!(r.entropy_bits.abs() < 1e-12);
        assert!((r.purity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&GateSpec::h(0)).unwrap();
        s.apply_gate(&GateSpec::x(1).ctrl(0)).unwrap();
        let r = s.schmidt(&[1]).unwrap();
        assert_eq!(r.schmidt_rank, 2);
        assert!((r.entropy_bits - 1.0).abs() < 1e-12);
        assert!((r.purity - 0.5).abs() < 1e-12);
        let total: f64 = r.schmidt_coefficients.iter().map(|l| l * l).sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_trivial_bipartition() {
        let s = StateVector::zero(2).unwrap();
        assert!(s.schmidt(&[]).is_err());
        assert!(s.schmidt(&[0, 1]).is_err());
    }

    #[test]
    fn larger_side_as_subset() {
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(0.6, 0.0);
        amps[7] = C64::new(0.0, 0.8);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let a = s.schmidt(&[0, 1]).unwrap();
        let b = s.schmidt(&[2]).unwrap();
        assert_eq!(a.schmidt_rank, 2);
        assert!((a.entropy_bits - b.entropy_bits).abs() < 1e-12);
        assert!((a.schmidt_coefficients[0] - 0.8).abs() < 1e-12);
    }
}
