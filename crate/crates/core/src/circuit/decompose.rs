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

use super::Circuit;
use crate::error::{Error, Result};
use crate::sim::{Control, GateKind, GateSpec, Polarity, Register};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DecompositionMode {
    /// Leave multi-controlled gates untouched.
    #[default]
    KeepMulticontrol,
    /// Rewrite X gates with three or more controls as a Toffoli V-chain.
    ToffoliChain,
}

/// Where the work qubits of a V-chain come from.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum AncillaPolicy {
    /// Use these existing qubits; the caller guarantees they are `|0⟩`
    /// whenever a decomposed gate runs.
    CleanBorrowed(Vec<usize>),
    /// Append fresh `|0⟩` qubits above the circuit.
    #[default]
    CleanAllocated,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DecompositionConfig {
    pub mode: DecompositionMode,
    pub ancillas: AncillaPolicy,
}

impl DecompositionConfig {
    pub fn toffoli_chain(ancillas: AncillaPolicy) -> Self {
        DecompositionConfig {
            mode: DecompositionMode::ToffoliChain,
            ancillas,
        }
    }
}

/// Work qubits needed for an X gate with `controls` controls.
pub fn ancillas_needed(controls: usize) -> usize {
    controls.saturating_sub(2)
}

fn needs_chain(g: &GateSpec) -> bool {
    matches!(g.kind(), GateKind::X) && g.num_controls() >= 3
}

pub(super) fn decompose(c: &Circuit, cfg: &DecompositionConfig) -> Result<Circuit> {
    if cfg.mode == DecompositionMode::KeepMulticontrol {
        return Ok(c.clone());
    }
    let mut out = c.clone();
    out.gates.clear();
    let allocated: Vec<usize> = match &cfg.ancillas {
        AncillaPolicy::CleanAllocated => {
            let need = c
                .gates()
                .iter()
                .filter(|g| needs_chain(g))
                .map(|g| ancillas_needed(g.num_controls()))
                .max()
                .unwrap_or(0);
            let first = c.n_qubits();
            out.widen(&vec![Register::A; need]);
            (first..first + need).collect()
        }
        AncillaPolicy::CleanBorrowed(list) => {
            for &q in list {
                if q >= c.n_qubits() {
                    return Err(Error::QubitOutOfRange {
                        qubit: q,
                        n_qubits: c.n_qubits(),
                    });
                }
            }
            list.clone()
        }
    };
    for g in c.gates() {
        if !needs_chain(g) {
            out.push(g.clone())?;
            continue;
        }
        let used: Vec<usize> = g.qubits().collect();
        let work: Vec<usize> = allocated
            .iter()
            .copied()
            .filter(|q| !used.contains(q))
            .collect();
        let need = ancillas_needed(g.num_controls());
        if work.len() < need {
            return Err(Error::InsufficientAncillas {
                controls: g.num_controls(),
                needed: need,
                available: work.len(),
            });
        }
        for gate in v_chain(g.targets()[0], g.controls(), &work[..need]) {
            out.push(gate)?;
        }
    }
    Ok(out)
}

fn toffoli(a: usize, b: usize, t: usize) -> GateSpec {
    GateSpec::x(t).ctrl(a).ctrl(b)
}

/// `2τ − 3` Toffolis plus X conjugation of zero-controls.
fn v_chain(target: usize, controls: &[Control], work: &[usize]) -> Vec<GateSpec> {
    let flips: Vec<GateSpec> = controls
        .iter()
        .filter(|c| c.polarity == Polarity::Zero)
        .map(|c| GateSpec::x(c.qubit))
        .collect();
    let cs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    let tau = cs.len();
    let mut compute = vec![toffoli(cs[0], cs[1], work[0])];
    for i in 2..tau - 1 {
        compute.push(toffoli(cs[i], work[i - 2], work[i - 1]));
    }
    let mut out = flips.clone();
    out.extend(compute.iter().cloned());
    out.push(toffoli(cs[tau - 1], work[tau - 3], target));
    out.extend(compute.into_iter().rev());
    out.extend(flips);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::StateVector;

    #[test]
    fn small_gates_pass_through() {
        let mut c = Circuit::new(3);
        c.push(GateSpec::x(0).ctrl(1)).unwrap();
        c.push(GateSpec::x(0).ctrl(1).nctrl(2)).unwrap();
        let d = c
            .decompose_mcx(&DecompositionConfig::toffoli_chain(
                AncillaPolicy::CleanAllocated,
            ))
            .unwrap();
        assert_eq!(d.gates(), c.gates());
        assert_eq!(d.n_qubits(), 3);
    }

    #[test]
    fn chain_matches_on_basis_states() {
        let mut c = Circuit::new(5);
        c.push(GateSpec::x(4).ctrl(0).nctrl(1).ctrl(2).ctrl(3))
            .unwrap();
        let d = c
            .decompose_mcx(&DecompositionConfig::toffoli_chain(
                AncillaPolicy::CleanAllocated,
            ))
            .unwrap();
        assert_eq!(d.n_qubits(), 7);
        assert_eq!(d.metrics().toffoli_count, 5);
        for x in 0..32u64 {
            let a = c.simulate(&StateVector::basis(5, x).unwrap()).unwrap();
            let b = d.simulate(&StateVector::basis(7, x).unwrap()).unwrap();
            let mut a7 = a.clone();
            a7.add_ancillas(2, 0).unwrap();
            assert!(a7.distance(&b).unwrap() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn borrowed_policy_checks_supply() {
        let mut c = Circuit::new(6);
        c.push(GateSpec::x(0).ctrl(1).ctrl(2).ctrl(3).ctrl(4))
            .unwrap();
        let err = c
            .decompose_mcx(&DecompositionConfig::toffoli_chain(
                AncillaPolicy::CleanBorrowed(vec![5]),
            ))
            .unwrap_err();
        assert!(matches!(
            err,
            Error::InsufficientAncillas {
                needed: 2,
                available: 1,
                ..
            }
        ));
        let mut c = Circuit::new(6);
        c.push(GateSpec::x(0).ctrl(1).ctrl(2).ctrl(3)).unwrap();
        let d = c
            .decompose_mcx(&DecompositionConfig::toffoli_chain(
                AncillaPolicy::CleanBorrowed(vec![5]),
            ))
            .unwrap();
        assert_eq!(d.n_qubits(), 6);
        assert_eq!(d.metrics().max_controls, 2);
    }
}
