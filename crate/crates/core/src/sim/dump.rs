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

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::StateVector;
use super::{Register, DUMP_CUTOFF};
use crate::error::{Error, Result};

/// One nonzero amplitude of a dumped state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeRecord {
    pub index: u64,
    /// Register-annotated bits, most significant first inside each register,
    /// e.g. `I:0110 D:01`.
    pub bitstring: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DumpFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for DumpFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(DumpFormat::Json),
            "csv" => Ok(DumpFormat::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown dump format `{other}`"
            ))),
        }
    }
}

impl DumpFormat {
    pub fn extension(self) -> &'static str {
        match self {
            DumpFormat::Json => "json",
            DumpFormat::Csv => "csv",
        }
    }
}

/// Records for every amplitude of magnitude at least `DUMP_CUTOFF`.
///
/// `labels[q]` names the register of qubit `q`; registers are printed in
/// the order I, D, A, S.
pub fn dump_records(state: &StateVector, labels: &[Register]) -> Result<Vec<AmplitudeRecord>> {
    if labels.len() != state.n_qubits() {
        return Err(Error::QubitCountMismatch {
            expected: state.n_qubits(),
            got: labels.len(),
        });
    }
    let mut groups: Vec<(Register, Vec<usize>)> = Vec::new();
    for reg in [Register::I, Register::D, Register::A, Register::S] {
        let qs: Vec<usize> = (0..labels.len()).filter(|&q| labels[q] == reg).collect();
        if !qs.is_empty() {
            groups.push((reg, qs));
        }
    }
    let mut out = Vec::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm() < DUMP_CUTOFF {
            continue;
        }
        let mut bits = String::new();
        for (g, (reg, qs)) in groups.iter().enumerate() {
            if g > 0 {
                bits.push(' ');
            }
            bits.push(reg.as_char());
            bits.push(':');
            for &q in qs.iter().rev() {
                bits.push(if (i >> q) & 1 == 1 { '1' } else { '0' });
            }
        }
        out.push(AmplitudeRecord {
            index: i as u64,
            bitstring: bits,
            re: a.re,
            im: a.im,
        });
    }
    Ok(out)
}

pub fn records_to_json(records: &[AmplitudeRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn records_to_csv(records: &[AmplitudeRecord]) -> String {
    let mut s = String::from("index,bitstring,re,im\n");
    for r in records {
        let _ = writeln!(s, "{},{},{:?},{:?}", r.index, r.bitstring, r.re, r.im);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateSpec;

    #[test]
    fn dump_skips_zero_amplitudes() {
        let mut s = StateVector::zero(3).unwrap();
        s.apply_gate(&GateSpec::h(0)).unwrap();
        s.apply_gate(&GateSpec::x(2)).unwrap();
        let labels = [Register::I, Register::I, Register::D];
        let recs = dump_records(&s, &labels).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].index, 4);
        assert_eq!(recs[0].bitstring, "I:00 D:1");
        assert_eq!(recs[1].bitstring, "I:01 D:1");
        let csv = records_to_csv(&recs);
        assert_eq!(csv.lines().count(), 3);
        let back: Vec<AmplitudeRecord> = serde_json::from_str(&records_to_json(&recs)).unwrap();
        assert_eq!(back, recs);
    }
}
