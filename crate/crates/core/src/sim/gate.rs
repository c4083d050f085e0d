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

use std::f64::consts::FRAC_PI_2;

use super::C64;
use crate::error::{Error, Result};

/// Which value of a control qubit enables the gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    /// Fires when the control reads |1⟩.
    One,
    /// Fires when the control reads |0⟩.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

/// Gate families understood by the simulator.
///
/// `Y(p)` is the rotation with `cos(θ/2) = √p`, so `Y(1/2)|0⟩ = H|0⟩` and
/// `Y(1) = I`. `YTilde(p)` is `Y(p)·Y(1/2)⁻¹`; in particular `YTilde(1/2) = I`
/// and `YTilde(1) = Y(1/2)⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    H,
    Ry(f64),
    Y(f64),
    YTilde(f64),
    /// `diag(1, e^{iφ})` on the target.
    Phase(f64),
    Swap,
    /// Givens rotation between basis states `a` and `b` of the sub-register
    /// formed by the targets (first target least significant):
    /// `a' = cos θ·a − sin θ·b`, `b' = sin θ·a + cos θ·b`.
    TwoLevel {
        a: u64,
        b: u64,
        theta: f64,
    },
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Ry(_) => "ry",
            GateKind::Y(_) => "y",
            GateKind::YTilde(_) => "ytilde",
            GateKind::Phase(_) => "phase",
            GateKind::Swap => "swap",
            GateKind::TwoLevel { .. } => "rot2",
        }
    }

    /// 2×2 matrix for single-qubit kinds, row-major.
    pub fn matrix(&self) -> Option<[[C64; 2]; 2]> {
        let r = |x: f64| C64::new(x, 0.0);
        match *self {
            GateKind::X => Some([[r(0.0), r(1.0)], [r(1.0), r(0.0)]]),
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Some([[r(s), r(s)], [r(s), r(-s)]])
            }
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                Some([[r(c), r(-s)], [r(s), r(c)]])
            }
            GateKind::Y(p) => Some(y_matrix(p)),
            GateKind::YTilde(p) => {
                let y = y_matrix(p);
                let h = 0.5f64.sqrt();
                // Y(1/2)⁻¹ = Y(1/2)ᵀ
                let inv = [[r(h), r(h)], [r(-h), r(h)]];
                Some(mul2(&y, &inv))
            }
            GateKind::Phase(phi) => Some([[r(1.0), r(0.0)], [r(0.0), C64::from_polar(1.0, phi)]]),
            GateKind::Swap | GateKind::TwoLevel { .. } => None,
        }
    }

    fn inverse(&self) -> GateKind {
        match *self {
            GateKind::X | GateKind::H | GateKind::Swap => *self,
            GateKind::Ry(theta) => GateKind::Ry(-theta),
            GateKind::Y(p) => GateKind::Ry(-y_angle(p)),
            GateKind::YTilde(p) => GateKind::Ry(FRAC_PI_2 - y_angle(p)),
            GateKind::Phase(phi) => GateKind::Phase(-phi),
            GateKind::TwoLevel { a, b, theta } => GateKind::TwoLevel {
                a,
                b,
                theta: -theta,
            },
        }
    }
}

/// Rotation angle with `Y(p) = Ry(θ)`.
pub(crate) fn y_angle(p: f64) -> f64 {
    2.0 * p.sqrt().acos()
}

fn y_matrix(p: f64) -> [[C64; 2]; 2] {
    let a = p.sqrt();
    let b = (1.0 - p).sqrt();
    [
        [C64::new(a, 0.0), C64::new(-b, 0.0)],
        [C64::new(b, 0.0), C64::new(a, 0.0)],
    ]
}

fn mul2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// A gate together with its targets and polarity-aware controls.
///
/// Controls are kept in canonical order (positive before negative, each by
/// ascending qubit) so that structurally equal gates compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<Control>,
}

impl GateSpec {
    fn single(kind: GateKind, q: usize) -> Self {
        GateSpec {
            kind,
            targets: vec![q],
            controls: Vec::new(),
        }
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn ry(q: usize, theta: f64) -> Result<Self> {
        check_finite(theta)?;
        Ok(Self::single(GateKind::Ry(theta), q))
    }

    pub fn y(q: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self::single(GateKind::Y(p), q))
    }

    pub fn ytilde(q: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self::single(GateKind::YTilde(p), q))
    }

    pub fn phase(q: usize, phi: f64) -> Result<Self> {
        check_finite(phi)?;
        Ok(Self::single(GateKind::Phase(phi), q))
    }

    pub fn swap(a: usize, b: usize) -> Self {
        GateSpec {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
        }
    }

    /// Two-level rotation on the sub-register `targets` (first target is the
    /// least significant bit of `a` and `b`).
    pub fn two_level(targets: Vec<usize>, a: u64, b: u64, theta: f64) -> Result<Self> {
        check_finite(theta)?;
        if a == b {
            return Err(Error::DegenerateRotation(a));
        }
        let width = targets.len();
        for index in [a, b] {
            if width < 64 && index >> width != 0 {
                return Err(Error::BasisOutOfRange { index, width });
            }
        }
        Ok(GateSpec {
            kind: GateKind::TwoLevel { a, b, theta },
            targets,
            controls: Vec::new(),
        })
    }

    /// Build from raw parts, checking parameter ranges and target arity.
    pub fn from_parts(kind: GateKind, targets: Vec<usize>, controls: Vec<Control>) -> Result<Self> {
        let expected = match kind {
            GateKind::Swap => Some(2),
            GateKind::TwoLevel { .. } => None,
            _ => Some(1),
        };
        if let Some(expected) = expected {
            if targets.len() != expected {
                return Err(Error::TargetArity {
                    gate: kind.name(),
                    expected,
                    got: targets.len(),
                });
            }
        }
        let gate = match kind {
            GateKind::Y(p) => GateSpec::y(targets[0], p)?,
            GateKind::YTilde(p) => GateSpec::ytilde(targets[0], p)?,
            GateKind::Ry(t) => GateSpec::ry(targets[0], t)?,
            GateKind::Phase(t) => GateSpec::phase(targets[0], t)?,
            GateKind::TwoLevel { a, b, theta } => GateSpec::two_level(targets, a, b, theta)?,
            _ => GateSpec {
                kind,
                targets,
                controls: Vec::new(),
            },
        };
        Ok(gate.with_controls(controls))
    }

    /// Add a control that fires on |1⟩.
    pub fn ctrl(self, q: usize) -> Self {
        self.with_controls([Control {
            qubit: q,
            polarity: Polarity::One,
        }])
    }

    /// Add a control that fires on |0⟩.
    pub fn nctrl(self, q: usize) -> Self {
        self.with_controls([Control {
            qubit: q,
            polarity: Polarity::Zero,
        }])
    }

    /// Condition on `qubits` reading the value `value` (bit i of `value`
    /// belongs to `qubits[i]`).
    pub fn ctrl_value(self, qubits: &[usize], value: u64) -> Self {
        self.with_controls(qubits.iter().enumerate().map(|(i, &q)| Control {
            qubit: q,
            polarity: if (value >> i) & 1 == 1 {
                Polarity::One
            } else {
                Polarity::Zero
            },
        }))
    }

    pub fn with_controls(mut self, controls: impl IntoIterator<Item = Control>) -> Self {
        self.controls.extend(controls);
        self.controls.sort_by_key(|c| (c.polarity, c.qubit));
        self
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    /// Multi-controlled X with at least two controls.
    pub fn is_mcx(&self) -> bool {
        matches!(self.kind, GateKind::X) && self.controls.len() >= 2
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .copied()
            .chain(self.controls.iter().map(|c| c.qubit))
    }

    /// Check that all qubits are in range and no qubit appears twice.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let mut seen = Vec::with_capacity(self.targets.len() + self.controls.len());
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            if seen.contains(&q) {
                return Err(Error::OverlappingQubits(q));
            }
            seen.push(q);
        }
        if let GateKind::TwoLevel { a, b, .. } = self.kind {
            if a == b {
                return Err(Error::DegenerateRotation(a));
            }
        }
        Ok(())
    }

    /// Adjoint gate with the same controls.
    pub fn inverse(&self) -> GateSpec {
        GateSpec {
            kind: self.kind.inverse(),
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Same gate with every qubit sent through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> GateSpec {
        let controls = self
            .controls
            .iter()
            .map(|c| Control {
                qubit: map(c.qubit),
                polarity: c.polarity,
            })
            .collect::<Vec<_>>();
        GateSpec {
            kind: self.kind,
            targets: self.targets.iter().map(|&q| map(q)).collect(),
            controls: Vec::new(),
        }
        .with_controls(controls)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

fn check_finite(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteParameter(x));
    }
    Ok(())
}
