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

use thiserror::Error;

/// Broad classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Semantic,
    Capacity,
    Numeric,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} appears more than once in a gate")]
    OverlappingQubits(usize),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("non-finite gate parameter {0}")]
    NonFiniteParameter(f64),

    #[error("two-level rotation needs two distinct basis states, got {0} twice")]
    DegenerateRotation(u64),

    #[error("basis index {index} out of range for a {width}-qubit sub-register")]
    BasisOutOfRange { index: u64, width: usize },

    #[error("gate `{gate}` expects {expected} target(s), got {got}")]
    TargetArity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("qubit count mismatch: expected {expected}, got {got}")]
    QubitCountMismatch { expected: usize, got: usize },

    #[error("amplitude vector length {0} is not a power of two")]
    BadDimension(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("projection has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("bipartition must be a proper nonempty subset of the qubits")]
    InvalidBipartition,

    #[error(
        "qubits {qubits:?} are not in the expected product state (leftover weight {weight:e})"
    )]
    NotSeparable { qubits: Vec<usize>, weight: f64 },

    #[error("{n} qubits exceeds the simulation cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index {index} out of range for a database with {k} entries")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("index 0 is the reservoir entry and cannot be {0}")]
    ReservoirIndex(&'static str),

    #[error("entry {0} already holds data")]
    EntryNotEmpty(usize),

    #[error("entry {0} is not occupied")]
    EntryNotOccupied(usize),

    #[error("entry {0} has already been copied into the ancilla register")]
    AlreadyCopied(usize),

    #[error("k = {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid database: {0}")]
    InvalidDescriptor(String),

    #[error("data bitstring has {got} bits, the data register has {expected}")]
    DataWidth { expected: usize, got: usize },

    #[error("database is not balanced: {0}")]
    NotBalanced(String),

    #[error("reservoir too small: {0}")]
    InsufficientReservoir(String),

    #[error("operation requires no sensor or copy registers to be attached")]
    AuxiliaryAttached,

    #[error("mapping is not a permutation of 0..{0}")]
    NotPermutation(usize),

    #[error("permutation must keep the reservoir index 0 fixed")]
    MovesReservoir,

    #[error("gate with {controls} controls needs {needed} clean ancillas, {available} available")]
    InsufficientAncillas {
        controls: usize,
        needed: usize,
        available: usize,
    },

    #[error("supplied preparation circuit does not reproduce the database (distance {0:e})")]
    PreparationMismatch(f64),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} failed (residual {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },

    #[error("database has been consumed by a projective read")]
    Consumed,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Parse { .. } | Json(_) => ErrorKind::Parse,
            TooManyQubits { .. } | Capacity(_) => ErrorKind::Capacity,
            NonConvergence { .. } | NotSeparable { .. } | NotNormalized(_) => ErrorKind::Numeric,
            Io(_) => ErrorKind::Io,
            _ => ErrorKind::Semantic,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
