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

//! Statevector simulation of quantum databases: superpositions that pair
//! quantum index states with cloneable data states, together with the
//! circuits that prepare, extend, write, read, remove and permute them.
//!
//! Qubit 0 is the least significant bit of every basis index.

pub mod circuit;
pub mod error;
pub mod extend;
pub mod oracle;
pub mod qdb;
pub mod sim;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
