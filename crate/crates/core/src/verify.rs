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

//! Self-check suites behind the `verify` command.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{parse_text, AncillaPolicy, Circuit, DecompositionConfig};
use crate::error::{Error, Result};
use crate::extend::{check_no_unitary_extend, plan_imbalanced, plan_transfer};
use crate::oracle::{dense_operator, expected_qdb_state, MAX_ORACLE_QUBITS};
use crate::qdb::{synthesize_preparation, BitString, Permutation, QdbDescriptor, QdbState};
use crate::sim::{GateSpec, StateVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(Error::InvalidArgument(format!(
                "unknown verify level `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub group: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

type Check = fn(VerifyLevel) -> std::result::Result<String, String>;

/// Run every invariant group of the given level.
pub fn verify(level: VerifyLevel) -> VerifyReport {
    let mut groups: Vec<(&str, Check)> = vec![
        ("gate-unitarity", check_gates),
        ("prepare-closed-form", check_prepare),
        ("mcx-decomposition", check_mcx),
        ("text-round-trip", check_text),
        ("schmidt-consistency", check_schmidt),
        ("transfer-plans", check_plans),
        ("cross-oracle", check_cross_oracle),
        ("overlap-lemma", check_lemma),
    ];
    if level == VerifyLevel::Full {
        groups.push(("extend-equivalence", check_extend_equivalence));
    }
    let checks: Vec<CheckResult> = groups
        .into_iter()
        .map(|(group, f)| {
            let (passed, detail) = match f(level) {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                group: group.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    VerifyReport {
        level,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random normalized state on `n` qubits.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> Result<StateVector> {
    let amps = (0..1usize << n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(amps)
}

/// Random gate on `n ≥ 3` qubits with up to two controls.
pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Result<GateSpec> {
    let mut qubits: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        qubits.swap(i, rng.gen_range(0..=i));
    }
    let t = qubits[0];
    let angle = rng.gen_range(-3.0..3.0);
    let p = rng.gen_range(0.0..=1.0);
    let mut g = match rng.gen_range(0..8) {
        0 => GateSpec::x(t),
        1 => GateSpec::h(t),
        2 => GateSpec::ry(t, angle)?,
        3 => GateSpec::y(t, p)?,
        4 => GateSpec::ytilde(t, p)?,
        5 => GateSpec::phase(t, angle)?,
        6 => GateSpec::swap(t, qubits[1]),
        _ => GateSpec::two_level(
            vec![t, qubits[1]],
            rng.gen_range(0..2),
            rng.gen_range(2..4),
            angle,
        )?,
    };
    let busy = g.targets().len();
    for &q in qubits.iter().skip(busy).take(rng.gen_range(0..=2)) {
        g = if rng.gen_bool(0.5) {
            g.ctrl(q)
        } else {
            g.nctrl(q)
        };
    }
    Ok(g)
}

/// Largest gap between each recorded step and the dense-matrix oracle on
/// the same input; steps wider than `max_qubits` are skipped.
pub fn trace_gap(state: &QdbState, max_qubits: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for seg in state.trace() {
        if seg.circuit.n_qubits() > max_qubits.min(MAX_ORACLE_QUBITS) {
            continue;
        }
        let want = dense_operator(&seg.circuit)?.apply_state(&seg.before)?;
        worst = worst.max(want.distance(&seg.after)?);
    }
    Ok(worst)
}

fn check_gates(level: VerifyLevel) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = if level == VerifyLevel::Full { 500 } else { 100 };
    for _ in 0..trials {
        let g = random_gate(5, &mut rng).map_err(fail)?;
        let mut c = Circuit::new(5);
        c.push(g.clone()).map_err(fail)?;
        let op = dense_operator(&c).map_err(fail)?;
        ensure(op.is_unitary(1e-10), || format!("{g:?} is not unitary"))?;
        let s = random_state(5, &mut rng)
            .map_err(fail)?
            .with_gate(&g)
            .map_err(fail)?;
        ensure((s.norm_sqr() - 1.0).abs() < 1e-10, || {
            format!("{g:?} changed the norm")
        })?;
    }
    Ok(format!("{trials} random gates unitary and norm preserving"))
}

fn check_prepare(level: VerifyLevel) -> std::result::Result<String, String> {
    let top = if level == VerifyLevel::Full { 64 } else { 32 };
    for k in 2..=top {
        for l in [0, 1, 5] {
            let s = QdbState::prepare_general(k, l, 1).map_err(fail)?;
            let want =
                expected_qdb_state(&QdbDescriptor::empty(k, l, 1).map_err(fail)?).map_err(fail)?;
            let gap = s.state().distance(&want).map_err(fail)?;
            ensure(gap < 1e-9, || format!("k={k} l={l}: gap {gap:e}"))?;
        }
    }
    Ok(format!("k in 2..={top}, l in {{0,1,5}} within 1e-9"))
}

fn check_mcx(_: VerifyLevel) -> std::result::Result<String, String> {
    let mut counts = Vec::new();
    for tau in 3..=5 {
        let mut c = Circuit::new(tau + 1);
        let mut g = GateSpec::x(tau);
        for q in 0..tau {
            g = if q % 2 == 0 { g.ctrl(q) } else { g.nctrl(q) };
        }
        c.push(g).map_err(fail)?;
        let d = c
            .decompose_mcx(&DecompositionConfig::toffoli_chain(
                AncillaPolicy::CleanAllocated,
            ))
            .map_err(fail)?;
        let anc: Vec<usize> = (tau + 1..d.n_qubits()).collect();
        let got = dense_operator(&d)
            .map_err(fail)?
            .restrict_to_zero(&anc)
            .map_err(fail)?;
        let want = dense_operator(&c).map_err(fail)?;
        let gap = got.max_diff_up_to_phase(&want);
        ensure(gap < 1e-9, || format!("tau={tau}: gap {gap:e}"))?;
        counts.push(d.metrics().toffoli_count);
    }
    ensure(
        counts
            .windows(2)
            .all(|w| w[1] - w[0] == counts[1] - counts[0]),
        || format!("Toffoli counts {counts:?} not linear"),
    )?;
    Ok(format!("tau 3..=5 exact, Toffoli counts {counts:?}"))
}

fn check_text(level: VerifyLevel) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = if level == VerifyLevel::Full { 500 } else { 100 };
    for _ in 0..trials {
        let mut c = Circuit::new(5);
        for _ in 0..rng.gen_range(0..12) {
            c.push(random_gate(5, &mut rng).map_err(fail)?)
                .map_err(fail)?;
        }
        let back = parse_text(&c.emit_text()).map_err(fail)?;
        ensure(back == c, || "emit/parse changed a circuit".into())?;
    }
    Ok(format!("{trials} random circuits round-trip"))
}

fn check_schmidt(level: VerifyLevel) -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = if level == VerifyLevel::Full {
        1000
    } else {
        200
    };
    for i in 0..trials {
        let s = if i % 2 == 0 {
            let a = random_state(2, &mut rng).map_err(fail)?;
            let b = random_state(2, &mut rng).map_err(fail)?;
            let amps = (0..16)
                .map(|x| a.amplitude(x & 3) * b.amplitude(x >> 2))
                .collect();
            StateVector::from_amplitudes(amps).map_err(fail)?
        } else {
            random_state(4, &mut rng).map_err(fail)?
        };
        let r = s.schmidt(&[0, 1]).map_err(fail)?;
        let product = r.schmidt_rank == 1;
        ensure(product == (i % 2 == 0), || {
            format!("trial {i}: rank {}", r.schmidt_rank)
        })?;
        ensure(product == (r.entropy_bits.abs() < 1e-9), || {
            format!("trial {i}: entropy {}", r.entropy_bits)
        })?;
        ensure(product == ((r.purity - 1.0).abs() < 1e-9), || {
            format!("trial {i}: purity {}", r.purity)
        })?;
    }
    Ok(format!("{trials} product and entangled states consistent"))
}

fn check_plans(_: VerifyLevel) -> std::result::Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in 2..=16 {
        for l in 1..=k {
            let p = plan_transfer(k, l).map_err(fail)?;
            worst = worst.max(p.residual);
        }
    }
    ensure(worst < 1e-10, || format!("worst residual {worst:e}"))?;
    Ok(format!("k in 2..=16, worst residual {worst:e}"))
}

/// Every operation on a small database, with each step checked against the
/// dense-matrix oracle.
pub fn cross_oracle_gap() -> Result<f64> {
    let bits = |v: u64, m: usize| BitString::new(v, m);
    let mut u = Circuit::new(2);
    u.push(GateSpec::h(1).ctrl(0))?;
    let desc = QdbDescriptor::empty(4, 0, 2)?.with_u_d(u)?;
    let mut worst: f64 = 0.0;

    let mut s = QdbState::prepare(&desc)?;
    s.enable_trace();
    s.write(1, &bits(3, 2)?)?;
    s.write(3, &bits(1, 2)?)?;
    s.permute(&Permutation::new(vec![0, 3, 1, 2])?)?;
    s.read_copy(1)?;
    worst = worst.max(trace_gap(&s, 10)?);

    let mut s = QdbState::prepare(&desc)?;
    s.enable_trace();
    s.write(2, &bits(2, 2)?)?;
    s.remove_reservoir(2)?;
    s.write_swap_conditional(1, &bits(1, 2)?)?;
    worst = worst.max(trace_gap(&s, 10)?);

    let mut s = QdbState::prepare(&QdbDescriptor::empty(4, 0, 1)?.with_entry(2, bits(1, 1)?)?)?;
    s.enable_trace();
    let u = synthesize_preparation(s.shape())?;
    s.transfer(&plan_transfer(4, 2)?, &u)?;
    s.unfold(2)?;
    worst = worst.max(trace_gap(&s, 10)?);

    let mut s = QdbState::prepare(&QdbDescriptor::empty(3, 0, 1)?.with_entry(1, bits(1, 1)?)?)?;
    s.enable_trace();
    s.extend(4, None)?;
    worst = worst.max(trace_gap(&s, 10)?);

    for z in [1, 2] {
        let mut s = QdbState::prepare(&QdbDescriptor::empty(4, 3, 1)?.with_entry(3, bits(1, 1)?)?)?;
        s.enable_trace();
        s.extend_imbalanced(3, z)?;
        worst = worst.max(trace_gap(&s, 10)?);
    }
    Ok(worst)
}

fn check_cross_oracle(_: VerifyLevel) -> std::result::Result<String, String> {
    let gap = cross_oracle_gap().map_err(fail)?;
    ensure(gap < 1e-12, || format!("gap {gap:e}"))?;
    Ok(format!("largest gap {gap:e}"))
}

fn check_lemma(_: VerifyLevel) -> std::result::Result<String, String> {
    let mut cases = 0;
    for k in 2..=3usize {
        let m = 1;
        let all: Vec<QdbDescriptor> = (0..1u64 << (k - 1))
            .map(|mask| {
                (1..k).try_fold(QdbDescriptor::empty(k, 0, m)?, |d, j| {
                    d.with_entry(j, BitString::new((mask >> (j - 1)) & 1, m)?)
                })
            })
            .collect::<Result<_>>()
            .map_err(fail)?;
        for a in &all {
            for b in &all {
                for l in 1..=k {
                    let r = check_no_unitary_extend(a, b, l).map_err(fail)?;
                    ensure(r.equal == r.identical, || format!("k={k} l={l}: {r:?}"))?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} pairs: equal exactly when identical"))
}

fn check_extend_equivalence(_: VerifyLevel) -> std::result::Result<String, String> {
    for k in [2usize, 4] {
        for l in 1..=k {
            let mut a = QdbState::prepare_general(k, 0, 1).map_err(fail)?;
            a.extend(l, None).map_err(fail)?;
            let mut b = QdbState::prepare_general(k, l, 1).map_err(fail)?;
            let plan = plan_imbalanced(k, l, 1).map_err(fail)?;
            b.extend_with_plan(&plan).map_err(fail)?;
            ensure(a.k() == b.k(), || format!("k={k} l={l}: sizes differ"))?;
            for j in 0..a.k() {
                let (x, y) = (
                    a.entry_amplitude(j).map_err(fail)?,
                    b.entry_amplitude(j).map_err(fail)?,
                );
                ensure((x - y).abs() < 1e-8, || {
                    format!("k={k} l={l} entry {j}: {x} vs {y}")
                })?;
            }
        }
    }
    Ok("k in {2,4}, l in 1..=k agree within 1e-8".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_report_passes_and_round_trips() {
        let r = verify(VerifyLevel::Fast);
        assert!(r.passed, "{}", r.to_json());
        assert_eq!(VerifyReport::from_json(&r.to_json()).unwrap(), r);
    }
}
