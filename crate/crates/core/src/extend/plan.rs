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

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::C64;

/// How many standard amplification steps precede the corrective one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// `m = ⌊m*⌋` with `m*` from the branch formula.
    Floor,
    /// `m = ⌊(arcsin t − θ)/(2θ)⌋`, used when the corrective step cannot
    /// reach the target after `⌊m*⌋` steps.
    TargetAngle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

/// Parameters of an exact amplitude transfer onto the all-zero state.
///
/// `m` standard steps `Q(π, π)` are followed by one step `Q(phi, rho)`,
/// a phase `phase_fix` on the all-zero state and a global phase
/// `global_phase`, after which every amplitude is real and non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplificationPlan {
    pub k: usize,
    pub l: usize,
    pub initial_amplitude: f64,
    pub m_star: f64,
    pub n: i64,
    pub sign: Sign,
    pub m: usize,
    pub phi: f64,
    pub rho: f64,
    pub target_amplitude: f64,
    pub residual: f64,
    pub schedule: Schedule,
    pub phase_fix: f64,
    pub global_phase: f64,
}

const RHO_GRID: usize = 4096;

impl AmplificationPlan {
    /// True when nothing has to be applied.
    pub fn is_noop(&self) -> bool {
        self.m == 0
            && self.phi == 0.0
            && self.rho == 0.0
            && self.phase_fix == 0.0
            && self.global_phase == 0.0
    }

    /// Amplitudes on the all-zero state and on the rest after running the
    /// plan, from the two-dimensional model.
    pub fn predicted(&self) -> (C64, C64) {
        let model = Model::new(self.initial_amplitude);
        let mut v = model.start();
        for _ in 0..self.m {
            v = model.step(v, PI, PI);
        }
        v = model.step(v, self.phi, self.rho);
        let g = v.0 * C64::from_polar(1.0, self.phase_fix + self.global_phase);
        let b = v.1 * C64::from_polar(1.0, self.global_phase);
        (g, b)
    }
}

/// Amplitude `√((l+1)/(k+l))` of the reservoir entry.
pub fn target_amplitude(k: usize, l: usize) -> f64 {
    ((l as f64 + 1.0) / (k + l) as f64).sqrt()
}

/// Plan moving a balanced `k`-entry database to reservoir `l`.
pub fn plan_transfer(k: usize, l: usize) -> Result<AmplificationPlan> {
    plan_transfer_from(k, 0, l)
}

/// Plan moving a `k`-entry database from reservoir `from` to reservoir `to`.
pub fn plan_transfer_from(k: usize, from: usize, to: usize) -> Result<AmplificationPlan> {
    check_transfer(k, from, to)?;
    let a = target_amplitude(k, from);
    let t = target_amplitude(k, to);
    let theta = a.asin();
    let (m_star, n, sign) = branch_m_star(k, to, theta);
    let mut plan = AmplificationPlan {
        k,
        l: to,
        initial_amplitude: a,
        m_star,
        n,
        sign,
        m: 0,
        phi: 0.0,
        rho: 0.0,
        target_amplitude: t,
        residual: 0.0,
        schedule: Schedule::Floor,
        phase_fix: 0.0,
        global_phase: 0.0,
    };
    if to == from {
        return Ok(plan);
    }
    let model = Model::new(a);
    let floor_m = m_star.floor().max(0.0) as usize;
    let fallback_m = ((t.asin() - theta) / (2.0 * theta)).floor().max(0.0) as usize;
    for (m, schedule) in [
        (floor_m, Schedule::Floor),
        (fallback_m, Schedule::TargetAngle),
    ] {
        if let Some((phi, rho, residual, fix, global)) = model.solve(m, t) {
            plan.m = m;
            plan.schedule = schedule;
            plan.phi = phi;
            plan.rho = rho;
            plan.residual = residual;
            plan.phase_fix = fix;
            plan.global_phase = global;
            return Ok(plan);
        }
    }
    Err(Error::NonConvergence {
        what: "final amplification step",
        residual: f64::NAN,
    })
}

pub(crate) fn check_transfer(k: usize, from: usize, to: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "transfer needs k ≥ 2, got {k}"
        )));
    }
    if to < from {
        return Err(Error::InvalidArgument(format!(
            "transfer only grows the reservoir ({from} → {to})"
        )));
    }
    if to - from > k {
        return Err(Error::InvalidArgument(format!(
            "transfer of {} exceeds k = {k}",
            to - from
        )));
    }
    Ok(())
}

/// Smallest positive `m*` over `n ∈ {0,1,2}` and both signs of
/// `m* = (∓ arcsin(1/√(k+l)) − θ + πn) / (2θ)`.
fn branch_m_star(k: usize, l: usize, theta: f64) -> (f64, i64, Sign) {
    let s = (1.0 / ((k + l) as f64).sqrt()).asin();
    let mut best = (f64::INFINITY, 0, Sign::Minus);
    for n in 0..=2i64 {
        for (sign, v) in [(Sign::Minus, -s), (Sign::Plus, s)] {
            let m = (v - theta + PI * n as f64) / (2.0 * theta);
            if m > 0.0 && m < best.0 {
                best = (m, n, sign);
            }
        }
    }
    best
}

/// Two-dimensional picture: `g` is the all-zero state, `b` the normalized
/// remainder of the prepared state `ψ = a·g + c·b`.
struct Model {
    a: f64,
    c: f64,
}

type Pair = (C64, C64);

impl Model {
    fn new(a: f64) -> Self {
        Model {
            a,
            c: (1.0 - a * a).max(0.0).sqrt(),
        }
    }

    fn start(&self) -> Pair {
        (C64::new(self.a, 0.0), C64::new(self.c, 0.0))
    }

    /// `U S₀(φ) U† S_χ(ρ)` restricted to the plane.
    fn step(&self, v: Pair, phi: f64, rho: f64) -> Pair {
        let x = v.0 * C64::from_polar(1.0, rho);
        let w = x * self.a + v.1 * self.c;
        let k = (C64::from_polar(1.0, phi) - 1.0) * w;
        (x + k * self.a, v.1 + k * self.c)
    }

    /// Corrective step after `m` standard ones: returns
    /// `(φ, ρ, residual, phase fix, global phase)` or `None` if out of reach.
    fn solve(&self, m: usize, t: f64) -> Option<(f64, f64, f64, f64, f64)> {
        let mut v = self.start();
        for _ in 0..m {
            v = self.step(v, PI, PI);
        }
        let split = |rho: f64| {
            let x = v.0 * C64::from_polar(1.0, rho);
            let w = x * self.a + v.1 * self.c;
            (x - w * self.a, w * self.a)
        };
        let margin = |rho: f64| {
            let (r, s) = split(rho);
            (t - (r.norm() - s.norm()).abs()).min(r.norm() + s.norm() - t)
        };
        let (mut rho, mut best) = (0.0, f64::NEG_INFINITY);
        for i in 0..RHO_GRID {
            let candidate = TAU * i as f64 / RHO_GRID as f64;
            let mg = margin(candidate);
            if mg > best {
                best = mg;
                rho = candidate;
            }
        }
        if best < -1e-12 {
            return None;
        }
        let (r, s) = split(rho);
        let phi = if s.norm() < 1e-15 {
            0.0
        } else {
            let cos = ((t * t - r.norm_sqr() - s.norm_sqr()) / (2.0 * r.norm() * s.norm()))
                .clamp(-1.0, 1.0);
            (cos.acos() - s.arg() + r.arg()).rem_euclid(TAU)
        };
        let out = self.step(v, phi, rho);
        let residual = (out.0.norm() - t).abs();
        let global = (-out.1.arg()).rem_euclid(TAU);
        let fix = (out.1.arg() - out.0.arg()).rem_euclid(TAU);
        Some((phi, rho, residual, fix, global))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_star_for_four_and_four() {
        let p = plan_transfer(4, 4).unwrap();
        assert!((p.m_star - 2.1549).abs() < 1e-4, "{}", p.m_star);
        assert_eq!(p.n, 1);
        assert_eq!(p.sign, Sign::Minus);
        assert_eq!(p.m, 2);
        assert_eq!(p.schedule, Schedule::Floor);
    }

    #[test]
    fn every_small_plan_is_exact() {
        for k in 2..=24 {
            for l in 1..=k {
                let p = plan_transfer(k, l).unwrap();
                assert!(p.residual < 1e-10, "k={k} l={l}: {}", p.residual);
                let (g, b) = p.predicted();
                assert!((g.re - p.target_amplitude).abs() < 1e-10 && g.im.abs() < 1e-10);
                assert!(b.re >= 0.0 && b.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_transfer_is_noop() {
        let p = plan_transfer(5, 0).unwrap();
        assert!(p.is_noop());
        assert!((p.target_amplitude - (0.2f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn target_for_two_and_two() {
        assert!((target_amplitude(2, 2) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn plan_json_round_trip() {
        let p = plan_transfer(4, 2).unwrap();
        let back: AmplificationPlan =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
