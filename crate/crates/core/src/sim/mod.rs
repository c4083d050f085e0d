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

//! Dense statevector engine.
//!
//! Qubit 0 is the least significant bit of the amplitude index everywhere in
//! this crate: basis state `|x⟩` lives at `amplitudes[x]` and qubit `q` reads
//! `(x >> q) & 1`. Circuit diagrams drawn top-to-bottom map their first wire
//! to the most significant qubit of the register they act on.

mod dump;
mod entangle;
mod gate;
mod kernel;
mod state;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

pub use dump::{dump_records, records_to_csv, records_to_json, AmplitudeRecord, DumpFormat};
pub use entangle::EntanglementReport;
pub use gate::{Control, GateKind, GateSpec, Polarity};
pub use num_complex::Complex64 as C64;
pub use state::{gather_bits, scatter_bits, StateVector};

/// Norm tolerance enforced at public boundaries.
pub const NORM_TOL: f64 = 1e-10;
/// Element-wise tolerance for phase-insensitive state equality.
pub const STATE_TOL: f64 = 1e-9;
/// Singular values at or below this are not counted in the Schmidt rank.
pub const RANK_TOL: f64 = 1e-9;
/// Projections below this probability are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Amplitudes with smaller magnitude are left out of dumps.
pub const DUMP_CUTOFF: f64 = 1e-12;
pub const DEFAULT_MAX_QUBITS: usize = 26;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current cap on the number of simulated qubits.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

/// Change the qubit cap for every state allocated afterwards.
pub fn set_max_qubits(n: usize) {
    MAX_QUBITS.store(n.clamp(1, 40), Ordering::Relaxed);
}

/// Role of a qubit in a database layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Register {
    /// Index register.
    I,
    /// Data register.
    D,
    /// Ancilla: copy targets, markers, decomposition work qubits.
    A,
    /// Sensor holding a datum to be written.
    S,
}

impl Register {
    pub fn as_char(self) -> char {
        match self {
            Register::I => 'I',
            Register::D => 'D',
            Register::A => 'A',
            Register::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Register::I),
            'D' => Some(Register::D),
            'A' => Some(Register::A),
            'S' => Some(Register::S),
            _ => None,
        }
    }
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}
