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

//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::fmt::Display;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdb_core::circuit::{AncillaPolicy, Circuit, DecompositionConfig};
use qdb_core::extend::{
    check_no_unitary_extend, plan_imbalanced, plan_imbalanced_with, plan_transfer, Route, Schedule,
};
use qdb_core::oracle::{dense_operator, expected_qdb_state, permutation_matrix};
use qdb_core::qdb::{
    permutation_circuit, synthesize_preparation, BitString, Permutation, QdbDescriptor, QdbState,
};
use qdb_core::sim::{scatter_bits, GateKind, GateSpec};
use qdb_core::verify::{cross_oracle_gap, random_state};

// Tolerances, one per criterion where the criterion names one.
const TOL_PREPARE: f64 = 1e-9;
const TOL_PREPARE_ZERO: f64 = 1e-12;
const PREPARE_BUDGET: Duration = Duration::from_secs(1);
const TOL_TRANSFER: f64 = 1e-8;
const TOL_PLAN_RESIDUAL: f64 = 1e-10;
const TOL_EXTEND_UNIFORM: f64 = 1e-8;
const TOL_NEW_ENTRY_EXCITATION: f64 = 1e-12;
const TOL_IMBALANCED: f64 = 1e-9;
const TOL_PURITY: f64 = 1e-10;
const SWAP_PURITY_GAP: f64 = 1e-6;
const TOL_READ_EXACT: f64 = 1e-12;
const READ_SHOTS: usize = 10_000;
const READ_SIGMAS: f64 = 5.0;
const TOL_REMOVE_PROJECTIVE: f64 = 1e-9;
const TOL_REMOVE_RESERVOIR: f64 = 1e-10;
const TOL_CNOT: f64 = 1e-12;
const TOL_PERMUTE: f64 = 1e-10;
const TOL_MCX: f64 = 1e-9;
const TOL_CROSS_ORACLE: f64 = 1e-12;
const ORACLE_QUBITS: usize = 10;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn s(e: impl Display) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bits(v: u64, m: usize) -> BitString {
    BitString::new(v, m).unwrap()
}

fn random_descriptor(
    rng: &mut ChaCha8Rng,
    k: usize,
    l: usize,
    m: usize,
    fill: f64,
) -> QdbDescriptor {
    let mut d = QdbDescriptor::empty(k, l, m).unwrap();
    for j in 1..k {
        if rng.gen_bool(fill) {
            d = d
                .with_entry(j, bits(rng.gen_range(0..1u64 << m), m))
                .unwrap();
        }
    }
    d
}

/// Index-register amplitude of a database whose data register is all zero.
fn index_amplitudes(db: &QdbState, values: std::ops::Range<u64>) -> Vec<f64> {
    let index = &db.shape().layout().index;
    values
        .map(|x| db.state().amplitude(scatter_bits(x, index)).re)
        .collect()
}

fn c1_prepare_22() -> Check {
    let start = Instant::now();
    let db = QdbState::prepare_general(22, 0, 1).map_err(s)?;
    let elapsed = start.elapsed();
    let a = index_amplitudes(&db, 0..32);
    let want = 1.0 / 22f64.sqrt();
    let on = a[..22].iter().map(|x| (x - want).abs()).fold(0.0, f64::max);
    let off = a[22..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    ensure(on < TOL_PREPARE, || format!("indices 0..22 off by {on:e}"))?;
    ensure(off < TOL_PREPARE_ZERO, || {
        format!("indices 22..32 carry {off:e}")
    })?;
    ensure(elapsed < PREPARE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max error {on:.1e} on 0..22, {off:.1e} on 22..32, {elapsed:.1?}"
    ))
}

fn c2_reservoir_14() -> Check {
    let mut worst: f64 = 0.0;
    for l in [0usize, 1, 2, 18] {
        let db = QdbState::prepare_general(14, l, 1).map_err(s)?;
        let a = index_amplitudes(&db, 0..16);
        let tot = (14 + l) as f64;
        worst = worst.max((a[0] - ((l as f64 + 1.0) / tot).sqrt()).abs());
        for &x in &a[1..14] {
            worst = worst.max((x - (1.0 / tot).sqrt()).abs());
        }
        for &x in &a[14..] {
            worst = worst.max(x.abs());
        }
    }
    ensure(worst < TOL_PREPARE, || format!("max error {worst:e}"))?;
    Ok(format!("l in {{0,1,2,18}}, max error {worst:.1e}"))
}

fn c3_power_of_two() -> Check {
    let general = QdbState::prepare_general(8, 0, 1).map_err(s)?;
    let c = general.history();
    for g in c.gates() {
        let half = matches!(g.kind(), GateKind::Y(p) if *p == 0.5);
        ensure(half && g.num_controls() == 0, || {
            format!("unexpected gate {g:?}")
        })?;
    }
    let depth = c.metrics().depth;
    ensure(c.len() == 3 && depth == 1, || {
        format!("{} gates, depth {depth}", c.len())
    })?;
    let balanced = QdbState::prepare_balanced(8, 1).map_err(s)?;
    ensure(
        general.state().amplitudes() == balanced.state().amplitudes(),
        || {
            let gap = general
                .state()
                .distance(balanced.state())
                .unwrap_or(f64::NAN);
            format!("states differ by {gap:e}")
        },
    )?;
    Ok("3 unconditioned Y(1/2), depth 1, bit-identical to the Hadamard state".into())
}

fn c4_transfer() -> Check {
    let mut out = Vec::new();
    for (k, l) in [(2usize, 2usize), (4, 4), (4, 2), (8, 8)] {
        let mut d = QdbDescriptor::empty(k, 0, 1).map_err(s)?;
        for j in (1..k).step_by(2) {
            d = d.with_entry(j, bits(1, 1)).map_err(s)?;
        }
        let mut db = QdbState::prepare(&d).map_err(s)?;
        let plan = plan_transfer(k, l).map_err(s)?;
        ensure(plan.schedule == Schedule::Floor, || {
            format!("({k},{l}) fell back to {:?}", plan.schedule)
        })?;
        ensure(plan.m as f64 == plan.m_star.floor(), || {
            format!("({k},{l}) m = {} but m* = {}", plan.m, plan.m_star)
        })?;
        ensure(plan.residual < TOL_PLAN_RESIDUAL, || {
            format!("({k},{l}) residual {:e}", plan.residual)
        })?;
        let u = synthesize_preparation(db.shape()).map_err(s)?;
        db.transfer(&plan, &u).map_err(s)?;
        let a0 = db.state().amplitude(0);
        let want = ((l as f64 + 1.0) / (k + l) as f64).sqrt();
        let err = (a0 - want).norm();
        ensure(err < TOL_TRANSFER, || {
            format!("({k},{l}) reservoir amplitude off by {err:e}")
        })?;
        out.push(format!(
            "({k},{l}) m={} m*={:.4} err {err:.1e}",
            plan.m, plan.m_star
        ));
    }
    Ok(out.join("; "))
}

fn c5_extend() -> Check {
    let d = QdbDescriptor::empty(2, 0, 1)
        .map_err(s)?
        .with_entry(1, bits(1, 1))
        .map_err(s)?;
    let mut db = QdbState::prepare(&d).map_err(s)?;
    let rep = db.extend(5, None).map_err(s)?;
    ensure(db.k() == 7, || format!("k = {}", db.k()))?;
    let want = (1.0f64 / 7.0).sqrt();
    let mut worst: f64 = 0.0;
    for j in 0..7 {
        worst = worst.max((db.entry_amplitude(j).map_err(s)? - want).abs());
    }
    ensure(worst < TOL_EXTEND_UNIFORM, || {
        format!("amplitudes off by {worst:e}")
    })?;
    let exc = db.new_entry_excitation(2).map_err(s)?;
    ensure(exc < TOL_NEW_ENTRY_EXCITATION, || {
        format!("new entries carry data weight {exc:e}")
    })?;
    Ok(format!(
        "chunks {:?}, uniform within {worst:.1e}, new-entry data weight {exc:.1e}",
        rep.chunks
    ))
}

fn c6_imbalanced() -> Check {
    let d = QdbDescriptor::empty(4, 3, 1)
        .map_err(s)?
        .with_entry(2, bits(1, 1))
        .map_err(s)?;
    let mut db = QdbState::prepare(&d).map_err(s)?;
    db.extend_imbalanced(3, 1).map_err(s)?;
    let want = (1.0f64 / 7.0).sqrt();
    let mut walk: f64 = 0.0;
    for j in 0..7 {
        walk = walk.max((db.entry_amplitude(j).map_err(s)? - want).abs());
    }
    ensure(db.k() == 7 && walk < TOL_IMBALANCED, || {
        format!("walkthrough off by {walk:e}")
    })?;

    let mut staged: f64 = 0.0;
    let mut cases = 0;
    for route in [Route::Direct, Route::Marker] {
        for (k, l, z) in [
            (3usize, 3usize, 2usize),
            (4, 5, 2),
            (3, 6, 2),
            (5, 9, 3),
            (2, 2, 2),
        ] {
            let base = plan_imbalanced(k, l, z).map_err(s)?;
            let plan =
                plan_imbalanced_with(k, l, z, base.l_prime, base.l_dprime, route).map_err(s)?;
            let mut rng = ChaCha8Rng::seed_from_u64((k * 100 + l) as u64);
            let mut db =
                QdbState::prepare(&random_descriptor(&mut rng, k, l, 1, 0.7)).map_err(s)?;
            db.extend_with_plan(&plan).map_err(s)?;
            let amp = |j| db.entry_amplitude(j).map_err(s);
            staged = staged.max((amp(0)? - plan.alpha).abs());
            for j in 1..k {
                staged = staged.max((amp(j)? - plan.beta).abs());
            }
            for j in k..db.k() {
                staged = staged.max((amp(j)? - plan.gamma).abs());
            }
            cases += 1;
        }
    }
    ensure(staged < TOL_IMBALANCED, || {
        format!("two-stage amplitudes off by {staged:e}")
    })?;

    let mut sweep = 0;
    for k in 2..=6usize {
        for l in 1..=12usize {
            for z in 2..=3usize {
                for lp in 1..=((1usize << z) - 1) {
                    for ld in 1..=4usize {
                        let p = plan_imbalanced_with(k, l, z, lp, ld, Route::Direct).map_err(s)?;
                        let ratio = (l as f64 + 1.0) / ((lp as f64 + 1.0) * ld as f64);
                        let uniform = (p.gamma - p.beta).abs() < 1e-12;
                        ensure(
                            p.balanced == ((ratio - 1.0).abs() < 1e-12) && p.balanced == uniform,
                            || {
                                format!(
                                    "k={k} l={l} z={z} l'={lp} l''={ld}: balanced {} ratio {ratio}",
                                    p.balanced
                                )
                            },
                        )?;
                        sweep += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "z=1 within {walk:.1e}; {cases} two-stage runs within {staged:.1e}; balance rule holds on {sweep} splits"
    ))
}

fn c7_write() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_purity: f64 = 1.0;
    let mut writes = 0;
    for trial in 0..100 {
        let k = rng.gen_range(2..=8);
        let m = rng.gen_range(1..=3);
        let mut target = random_descriptor(&mut rng, k, 0, m, 0.8);
        let mut start = QdbDescriptor::empty(k, 0, m).map_err(s)?;
        if m >= 2 && trial % 2 == 1 {
            let mut u = Circuit::new(m);
            u.push(GateSpec::h(1).ctrl(0)).map_err(s)?;
            target = target.with_u_d(u.clone()).map_err(s)?;
            start = start.with_u_d(u).map_err(s)?;
        }
        let mut db = QdbState::prepare(&start).map_err(s)?;
        for (&j, d) in &target.data {
            let rep = db.write(j, d).map_err(s)?;
            min_purity = min_purity.min(rep.sensor_purity);
            ensure((rep.sensor_purity - 1.0).abs() < TOL_PURITY, || {
                format!("trial {trial}: sensor purity {}", rep.sensor_purity)
            })?;
            writes += 1;
        }
        let gap = db
            .state()
            .distance(&expected_qdb_state(&target).map_err(s)?)
            .map_err(s)?;
        ensure(gap < TOL_PURITY, || {
            format!("trial {trial}: state off by {gap:e}")
        })?;
    }

    let mut max_swap: f64 = 0.0;
    for k in 2..=8usize {
        for m in 1..=2usize {
            let f = rng.gen_range(1..k);
            let d = bits(rng.gen_range(1..1u64 << m), m);
            let mut db = QdbState::prepare_general(k, 0, m).map_err(s)?;
            let rep = db.write_swap_conditional(f, &d).map_err(s)?;
            max_swap = max_swap.max(rep.sensor_purity);
            ensure(
                rep.sensor_purity < 1.0 - SWAP_PURITY_GAP && rep.schmidt_rank >= 2,
                || {
                    format!(
                        "k={k}: swap write purity {} rank {}",
                        rep.sensor_purity, rep.schmidt_rank
                    )
                },
            )?;
        }
    }
    Ok(format!(
        "100 descriptors, {writes} writes, min purity 1-{:.1e}; swap writes purity <= {max_swap:.4}",
        1.0 - min_purity
    ))
}

fn c8_read() -> Check {
    let mut worst: f64 = 0.0;
    for k in 2..=16usize {
        let db = QdbState::prepare_general(k, 0, 1).map_err(s)?;
        for f in 0..k {
            worst = worst.max((db.read_probability(f).map_err(s)? - 1.0 / k as f64).abs());
        }
        let read = db.read_projective(k - 1).map_err(s)?;
        worst = worst.max((read.probability - 1.0 / k as f64).abs());
    }
    ensure(worst < TOL_READ_EXACT, || {
        format!("read probability off by {worst:e}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_z: f64 = 0.0;
    for k in [2usize, 3, 5, 8, 13, 16] {
        let db = QdbState::prepare_general(k, 0, 1).map_err(s)?;
        let counts = db.sample_index_counts(READ_SHOTS, &mut rng).map_err(s)?;
        let p = 1.0 / k as f64;
        let sigma = (READ_SHOTS as f64 * p * (1.0 - p)).sqrt();
        for j in 0..k {
            let n = *counts.get(&j).unwrap_or(&0) as f64;
            worst_z = worst_z.max((n - READ_SHOTS as f64 * p).abs() / sigma);
        }
    }
    ensure(worst_z < READ_SIGMAS, || {
        format!("sampled frequency {worst_z:.2} sigma away")
    })?;

    let mut cases = 0;
    for d1 in 0..4u64 {
        for d2 in 0..4u64 {
            for subset in 1..8u32 {
                let desc = QdbDescriptor::empty(3, 0, 2)
                    .and_then(|d| d.with_entry(1, bits(d1, 2)))
                    .and_then(|d| d.with_entry(2, bits(d2, 2)))
                    .map_err(s)?;
                let data = [0, d1, d2];
                let mut db = QdbState::prepare(&desc).map_err(s)?;
                let mut rep = None;
                for f in (0..3).filter(|f| subset >> f & 1 == 1) {
                    rep = Some(db.read_copy(f).map_err(s)?);
                }
                let rep = rep.expect("subset is nonempty");
                let copied: Vec<u64> = (0..3)
                    .map(|f| if subset >> f & 1 == 1 { data[f] } else { 0 })
                    .collect();
                let differ = copied.iter().any(|&c| c != copied[0]);
                ensure((rep.entropy_bits > 1e-9) == differ, || {
                    format!(
                        "d=({d1},{d2}) copies {subset:03b}: entropy {}",
                        rep.entropy_bits
                    )
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "k 2..=16 exact within {worst:.1e}; sampling max {worst_z:.2} sigma; {cases} copy patterns"
    ))
}

fn c9_remove() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_p: f64 = 0.0;
    for k in 2..=12usize {
        let db = QdbState::prepare_general(k, 0, 1).map_err(s)?;
        let f = rng.gen_range(1..k);
        let r = db.remove_projective(f).map_err(s)?;
        worst_p = worst_p.max((r.success_probability - (k - 1) as f64 / k as f64).abs());
        let survivor = r.survivor.ok_or("no survivor")?;
        for j in 0..k - 1 {
            let a = survivor.entry_amplitude(j).map_err(s)?;
            worst_p = worst_p.max((a - (1.0 / (k - 1) as f64).sqrt()).abs());
        }
    }
    ensure(worst_p < TOL_REMOVE_PROJECTIVE, || {
        format!("projective removal off by {worst_p:e}")
    })?;

    let mut worst_r: f64 = 0.0;
    for trial in 0..60 {
        let k = rng.gen_range(3..=9);
        let l = rng.gen_range(0..=3);
        let m = rng.gen_range(1..=3);
        let desc = random_descriptor(&mut rng, k, l, m, 0.7);
        let mut db = QdbState::prepare(&desc).map_err(s)?;
        let f = rng.gen_range(1..k);
        let before: Vec<f64> = (0..k)
            .map(|j| db.entry_amplitude(j))
            .collect::<Result<_, _>>()
            .map_err(s)?;
        let entries: Vec<BitString> = (0..k).map(|j| db.shape().entry(j)).collect();
        db.remove_reservoir(f).map_err(s)?;
        let moved = db.entry_amplitude(0).map_err(s)?.powi(2) - before[0].powi(2);
        worst_r = worst_r.max((moved - before[f].powi(2)).abs());
        for j in (1..k).filter(|&j| j != f) {
            let now = if j < f { j } else { j - 1 };
            worst_r = worst_r.max((db.entry_amplitude(now).map_err(s)? - before[j]).abs());
            ensure(db.shape().entry(now) == entries[j], || {
                format!("trial {trial}: entry {j} data changed")
            })?;
        }
        worst_r = worst_r.max(db.deviation_from_shape().map_err(s)?);
    }
    ensure(worst_r < TOL_REMOVE_RESERVOIR, || {
        format!("reservoir removal off by {worst_r:e}")
    })?;
    Ok(format!("projective within {worst_p:.1e}; reservoir removal within {worst_r:.1e} over 60 descriptors"))
}

fn c10_permute() -> Check {
    let mut db = QdbState::prepare_balanced(4, 0).map_err(s)?;
    db.enable_trace();
    db.transpose(2, 3).map_err(s)?;
    let op = dense_operator(&db.trace()[0].circuit).map_err(s)?;
    let mut cnot = Circuit::new(2);
    cnot.push(GateSpec::x(0).ctrl(1)).map_err(s)?;
    let cnot_gap = op.max_diff(&dense_operator(&cnot).map_err(s)?);
    ensure(cnot_gap < TOL_CNOT, || {
        format!("P(2,3) differs from CNOT by {cnot_gap:e}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for trial in 0..200 {
        let k = rng.gen_range(2..=8usize);
        let m = rng.gen_range(1..=2usize);
        let mut map: Vec<usize> = (0..k).collect();
        map.shuffle(&mut rng);
        let pi = Permutation::new(map.clone()).map_err(s)?;
        let w = qdb_core::qdb::ceil_log2(k).max(1);
        let index: Vec<usize> = (0..w).collect();
        let physical: Vec<u64> = (0..k as u64).collect();
        let c = permutation_circuit(&pi, &index, &physical, w + m).map_err(s)?;
        let oracle = permutation_matrix(&map, w, m).map_err(s)?;
        let start = random_state(w + m, &mut rng).map_err(s)?;
        let gap = c
            .simulate(&start)
            .map_err(s)?
            .distance(&oracle.apply_state(&start).map_err(s)?)
            .map_err(s)?;
        worst = worst.max(gap);
        if map[0] == 0 {
            // the same permutation acting on a database
            let desc = (1..k).try_fold(QdbDescriptor::empty(k, 0, m).map_err(s)?, |d, j| {
                d.with_entry(j, bits(j as u64 % (1 << m), m)).map_err(s)
            })?;
            let mut db = QdbState::prepare(&desc).map_err(s)?;
            let before = db.state().clone();
            db.permute(&pi).map_err(s)?;
            let dw = db.shape().layout().index.len();
            let mut full = map.clone();
            full.extend(k..1 << dw);
            let want = permutation_matrix(&full, dw, m)
                .map_err(s)?
                .apply_state(&before)
                .map_err(s)?;
            worst = worst.max(db.state().distance(&want).map_err(s)?);
        }
        ensure(worst < TOL_PERMUTE, || {
            format!("trial {trial}: gap {worst:e}")
        })?;
    }

    let mut law: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.gen_range(2..=8usize);
        let draw = |rng: &mut ChaCha8Rng| {
            let mut rest: Vec<usize> = (1..k).collect();
            rest.shuffle(rng);
            Permutation::new(std::iter::once(0).chain(rest).collect())
        };
        let a = draw(&mut rng).map_err(s)?;
        let b = draw(&mut rng).map_err(s)?;
        let desc = random_descriptor(&mut rng, k, 0, 2, 0.8);
        let mut seq = QdbState::prepare(&desc).map_err(s)?;
        seq.permute(&a).map_err(s)?;
        seq.permute(&b).map_err(s)?;
        let mut once = QdbState::prepare(&desc).map_err(s)?;
        once.permute(&a.then(&b).map_err(s)?).map_err(s)?;
        law = law.max(seq.state().distance(once.state()).map_err(s)?);
        once.permute(&a.then(&b).map_err(s)?.inverse()).map_err(s)?;
        law = law.max(
            once.state()
                .distance(QdbState::prepare(&desc).map_err(s)?.state())
                .map_err(s)?,
        );
    }
    ensure(law < TOL_PERMUTE, || {
        format!("composition law off by {law:e}")
    })?;
    Ok(format!("CNOT gap {cnot_gap:.1e}; 200 permutations within {worst:.1e}; composition within {law:.1e}"))
}

fn c11_lemma() -> Check {
    let mut pairs = 0;
    let mut unequal = 0;
    for k in 2..=3usize {
        for m in 1..=2usize {
            let combos = 1u64 << (m * (k - 1));
            let build = |code: u64| {
                (1..k).try_fold(QdbDescriptor::empty(k, 0, m)?, |d, j| {
                    d.with_entry(j, bits((code >> (m * (j - 1))) & ((1 << m) - 1), m))
                })
            };
            for c1 in 0..combos {
                for c2 in 0..combos {
                    let a = build(c1).map_err(s)?;
                    let b = build(c2).map_err(s)?;
                    let identical = (0..k).all(|j| a.entry(j) == b.entry(j));
                    for l in 1..=3usize {
                        let r = check_no_unitary_extend(&a, &b, l).map_err(s)?;
                        ensure(
                            (r.before - r.closed_before).abs() < 1e-12
                                && (r.after - r.closed_after).abs() < 1e-12,
                            || format!("k={k} l={l}: simulation disagrees with closed form"),
                        )?;
                        if r.data_overlap_sum < (k - 1) as f64 - 1e-12 {
                            ensure(!r.equal, || {
                                format!(
                                    "k={k} l={l}: equal overlaps with sum {}",
                                    r.data_overlap_sum
                                )
                            })?;
                            unequal += 1;
                        }
                        ensure(r.equal == identical, || {
                            format!("k={k} l={l}: equal={} identical={identical}", r.equal)
                        })?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} cases, {unequal} with sum < k-1 all unequal, equality only when identical"
    ))
}

fn c12_mcx() -> Check {
    let mut counts = Vec::new();
    let mut worst: f64 = 0.0;
    for tau in 3..=5usize {
        for polarity in 0..1u32 << tau {
            let mut c = Circuit::new(tau + 1);
            let mut g = GateSpec::x(tau);
            for q in 0..tau {
                g = if polarity >> q & 1 == 1 {
                    g.ctrl(q)
                } else {
                    g.nctrl(q)
                };
            }
            c.push(g).map_err(s)?;
            let d = c
                .decompose_mcx(&DecompositionConfig::toffoli_chain(
                    AncillaPolicy::CleanAllocated,
                ))
                .map_err(s)?;
            ensure(d.metrics().max_controls <= 2, || {
                format!("tau={tau}: gate with more than two controls remains")
            })?;
            let anc: Vec<usize> = (tau + 1..d.n_qubits()).collect();
            let got = dense_operator(&d)
                .map_err(s)?
                .restrict_to_zero(&anc)
                .map_err(s)?;
            worst = worst.max(got.max_diff(&dense_operator(&c).map_err(s)?));
            if polarity == 0 {
                counts.push(d.metrics().toffoli_count);
            }
        }
    }
    ensure(worst < TOL_MCX, || {
        format!("decomposition off by {worst:e}")
    })?;
    let step = counts[1] as i64 - counts[0] as i64;
    ensure(
        step > 0 && counts.windows(2).all(|w| w[1] as i64 - w[0] as i64 == step),
        || format!("Toffoli counts {counts:?} not linear"),
    )?;
    Ok(format!(
        "all polarities within {worst:.1e}; Toffoli counts {counts:?} for tau 3,4,5"
    ))
}

/// Steps checked and worst gap between each traced step and its dense operator.
fn traced(db: &QdbState, checked: &mut usize) -> std::result::Result<f64, String> {
    let mut worst: f64 = 0.0;
    for seg in db.trace() {
        if seg.circuit.n_qubits() > ORACLE_QUBITS {
            continue;
        }
        let want = dense_operator(&seg.circuit)
            .map_err(s)?
            .apply_state(&seg.before)
            .map_err(s)?;
        worst = worst.max(want.distance(&seg.after).map_err(s)?);
        *checked += 1;
    }
    Ok(worst)
}

fn c13_cross_oracle() -> Check {
    let mut worst = cross_oracle_gap().map_err(s)?;
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..40 {
        let k = rng.gen_range(2..=4usize);
        let m = rng.gen_range(1..=2usize);
        let mut desc = random_descriptor(&mut rng, k, 0, m, 0.5);
        if m == 2 && trial % 3 == 0 {
            let mut u = Circuit::new(2);
            u.push(GateSpec::h(1).ctrl(0)).map_err(s)?;
            desc = desc.with_u_d(u).map_err(s)?;
        }
        let fresh = QdbState::prepare(&desc).map_err(s)?;
        worst = worst.max(
            fresh
                .state()
                .distance(&expected_qdb_state(&desc).map_err(s)?)
                .map_err(s)?,
        );

        // data operations
        let mut db = fresh.clone();
        db.enable_trace();
        let empty: Vec<usize> = (1..k).filter(|j| !desc.data.contains_key(j)).collect();
        if let Some(&f) = empty.first() {
            db.write(f, &bits(rng.gen_range(1..1u64 << m), m))
                .map_err(s)?;
        }
        let mut rest: Vec<usize> = (1..k).collect();
        rest.shuffle(&mut rng);
        db.permute(&Permutation::new(std::iter::once(0).chain(rest).collect()).map_err(s)?)
            .map_err(s)?;
        db.remove_reservoir(rng.gen_range(1..db.k())).map_err(s)?;
        if db.k() > 1 {
            db.read_copy(db.k() - 1).map_err(s)?;
        }
        worst = worst.max(traced(&db, &mut checked)?);

        let mut db = QdbState::prepare_general(k, 0, m).map_err(s)?;
        db.enable_trace();
        db.write_swap_conditional(1, &bits(1, m)).map_err(s)?;
        worst = worst.max(traced(&db, &mut checked)?);

        // projective operations against the closed-form survivor
        let r = fresh.remove_projective(k - 1).map_err(s)?;
        let index = fresh.shape().layout().index.clone();
        let gone = scatter_bits(fresh.shape().physical(k - 1), &index);
        let mask = scatter_bits((1u64 << index.len()) - 1, &index);
        let (projected, p) = fresh.state().project(|i| i & mask != gone).map_err(s)?;
        worst = worst.max((p - r.success_probability).abs());
        let survivor = r.survivor.ok_or("no survivor")?;
        worst = worst.max(survivor.state().distance(&projected).map_err(s)?);
        worst = worst.max(survivor.deviation_from_shape().map_err(s)?);

        // extension operations
        let l = rng.gen_range(1..=k);
        let mut db = fresh.clone();
        db.enable_trace();
        let u = synthesize_preparation(db.shape()).map_err(s)?;
        db.transfer(&plan_transfer(k, l).map_err(s)?, &u)
            .map_err(s)?;
        db.unfold(l.min(1 << db.shape().layout().index.len()))
            .map_err(s)?;
        worst = worst.max(traced(&db, &mut checked)?);

        let mut db = fresh.clone();
        db.enable_trace();
        db.extend(rng.gen_range(1..=3), None).map_err(s)?;
        worst = worst.max(traced(&db, &mut checked)?);

        let reservoir = rng.gen_range(1..=k.min(3));
        let with_res = QdbDescriptor {
            l: reservoir,
            ..desc.clone()
        };
        for (z, route) in [(1, Route::Direct), (2, Route::Direct), (2, Route::Marker)] {
            let mut db = QdbState::prepare(&with_res).map_err(s)?;
            db.enable_trace();
            let mut plan = plan_imbalanced(k, reservoir, z).map_err(s)?;
            plan.route = route;
            db.extend_with_plan(&plan).map_err(s)?;
            worst = worst.max(traced(&db, &mut checked)?);
        }
    }
    ensure(worst < TOL_CROSS_ORACLE, || format!("oracle gap {worst:e}"))?;
    Ok(format!(
        "{checked} traced steps on <= {ORACLE_QUBITS} qubits, worst gap {worst:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("prepare k=22", c1_prepare_22),
        ("prepare with reservoir k=14", c2_reservoir_14),
        ("power-of-two collapse", c3_power_of_two),
        ("exact transfer", c4_transfer),
        ("extend k=2 by 5", c5_extend),
        ("imbalanced extend", c6_imbalanced),
        ("write contract", c7_write),
        ("read-out", c8_read),
        ("removal", c9_remove),
        ("permute", c10_permute),
        ("no-unitary-extend overlaps", c11_lemma),
        ("MCX decomposition", c12_mcx),
        ("cross-oracle", c13_cross_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
