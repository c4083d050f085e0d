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

//! Databases: descriptors, layouts, and the operations that act on them.

mod bits;
mod descriptor;
mod layout;
mod permute;
mod prepare;
mod read;
mod remove;
mod shape;
mod state;
mod write;

pub use bits::BitString;
pub use descriptor::{ceil_log2, QdbDescriptor};
pub use layout::{AuxRegister, QdbLayout};
pub use permute::{permutation_circuit, transposition_gates, Permutation};
pub use prepare::{reservoir_prepare_gates, synthesize_preparation, tree_prepare_gates};
pub use read::{ProjectiveRead, ReadReport};
pub use remove::ProjectiveRemoval;
pub use shape::{reservoir_weights, QdbShape};
pub use state::{QdbState, TraceSegment};
pub use write::WriteReport;

pub(crate) use shape::check_capacity;
