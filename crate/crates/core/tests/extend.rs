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

use qdb_core::extend::{
    check_no_unitary_extend, plan_imbalanced, plan_imbalanced_with, plan_transfer, Route,
};
use qdb_core::oracle::dense_operator;
use qdb_core::qdb::{synthesize_preparation, BitString, QdbDescriptor, QdbState};

fn bits(s: &str) -> BitString {
    s.parse().unwrap()
}

fn with_data(k: usize, l: usize, m: usize) -> QdbState {
    let mut d = QdbDescriptor::empty(k, l, m).unwrap();
    for j in 1..k {
        d = d
            .with_entry(j, BitString::new((j as u64) % (1 << m), m).unwrap())
            .unwrap();
    }
    QdbState::prepare(&d).unwrap()
}

fn check_trace(s: &QdbState) {
    for seg in s.trace() {
        if seg.circuit.n_qubits() > 10 {
            continue;
        }
        let op = dense_operator(&seg.circuit).unwrap();
        let want = op.apply_state(&seg.before).unwrap();
        let gap = want.distance(&seg.after).unwrap();
        assert!(gap < 1e-12, "{}: {gap}", seg.op);
    }
}

#[test]
fn transfer_reaches_target() {
    for (k, l) in [(2, 2), (4, 4), (4, 2), (8, 8), (3, 1), (5, 3)] {
        let mut s = with_data(k, 0, 2);
        s.enable_trace();
        let plan = plan_transfer(k, l).unwrap();
        assert!(plan.residual < 1e-10);
        let u = synthesize_preparation(s.shape()).unwrap();
        s.transfer(&plan, &u).unwrap();
        let a0 = s.state().amplitude(0);
        assert!((a0.re - plan.target_amplitude).abs() < 1e-8, "k={k} l={l}");
        assert!(s.deviation_from_shape().unwrap() < 1e-8);
        check_trace(&s);
    }
}

#[test]
fn transfer_rejects_wrong_preparation() {
    let mut s = with_data(4, 0, 1);
    let other = QdbState::prepare_balanced(4, 1).unwrap();
    let plan = plan_transfer(4, 2).unwrap();
    assert!(s.transfer(&plan, other.history()).is_err());
}

#[test]
fn extend_two_by_five() {
    let mut s = with_data(2, 0, 1);
    s.enable_trace();
    let rep = s.extend(5, None).unwrap();
    assert_eq!(rep.chunks, vec![2, 3]);
    assert_eq!(s.k(), 7);
    for j in 0..7 {
        assert!((s.entry_amplitude(j).unwrap() - (1.0f64 / 7.0).sqrt()).abs() < 1e-8);
    }
    assert!(s.new_entry_excitation(2).unwrap() < 1e-12);
    assert!(s.deviation_from_shape().unwrap() < 1e-8);
    check_trace(&s);
}

#[test]
fn imbalanced_walkthrough() {
    let mut s = with_data(4, 3, 1);
    s.enable_trace();
    s.extend_imbalanced(3, 1).unwrap();
    assert_eq!(s.k(), 7);
    for j in 0..7 {
        assert!((s.entry_amplitude(j).unwrap() - (1.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }
    check_trace(&s);
}

#[test]
fn imbalanced_two_stage_matches_formulas() {
    for route in [Route::Direct, Route::Marker] {
        for (k, l, z) in [(3, 3, 2), (4, 5, 2), (3, 6, 2), (5, 9, 3)] {
            let mut plan = plan_imbalanced(k, l, z).unwrap();
            if plan.z > 1 {
                plan = plan_imbalanced_with(k, l, z, plan.l_prime, plan.l_dprime, route).unwrap();
            }
            let mut s = with_data(k, l, 2);
            s.enable_trace();
            s.extend_with_plan(&plan).unwrap();
            assert!((plan.total_probability() - 1.0).abs() < 1e-10);
            assert_eq!(s.k(), k + plan.new_entries());
            assert!((s.entry_amplitude(0).unwrap() - plan.alpha).abs() < 1e-9);
            for j in 1..k {
                assert!((s.entry_amplitude(j).unwrap() - plan.beta).abs() < 1e-9);
            }
            for j in k..s.k() {
                assert!((s.entry_amplitude(j).unwrap() - plan.gamma).abs() < 1e-9);
            }
            assert!(s.deviation_from_shape().unwrap() < 1e-9);
            assert_eq!(s.n_qubits(), s.shape().n_qubits());
            check_trace(&s);
        }
    }
}

#[test]
fn balance_condition() {
    // (l+1) = (l'+1)·l''
    let p = plan_imbalanced_with(4, 5, 2, 2, 2, Route::Direct).unwrap();
    assert!(p.balanced);
    assert!((p.gamma - p.beta).abs() < 1e-15);
    let q = plan_imbalanced_with(4, 5, 2, 3, 2, Route::Direct).unwrap();
    assert!(!q.balanced);
}

#[test]
fn lemma_k2() {
    let a = QdbDescriptor::empty(2, 0, 1).unwrap();
    let b = a.clone().with_entry(1, bits("1")).unwrap();
    let r = check_no_unitary_extend(&a, &b, 2).unwrap();
    assert!((r.before - 0.5).abs() < 1e-12 && (r.after - 0.75).abs() < 1e-12);
    assert!(!r.equal);
    let r = check_no_unitary_extend(&b, &b, 2).unwrap();
    assert!(r.equal && r.identical);
}
