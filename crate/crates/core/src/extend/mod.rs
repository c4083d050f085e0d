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

//! Growing a database: exact amplitude transfer into the reservoir entry,
//! unfolding the reservoir into new entries, and the staged extension that
//! spends a reservoir laid out at preparation time.

mod imbalanced;
mod lemma;
mod plan;
mod transfer;

pub use imbalanced::{plan_imbalanced, plan_imbalanced_with, ExtendPlan, Route};
pub use lemma::{check_no_unitary_extend, LemmaReport};
pub use plan::{
    plan_transfer, plan_transfer_from, target_amplitude, AmplificationPlan, Schedule, Sign,
};
pub use transfer::{ExtendReport, TRANSFER_TOL};
