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

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bits::BitString;
use crate::circuit::{parse_text, Circuit};
use crate::error::{Error, Result};
use crate::oracle;
use crate::sim::{StateVector, NORM_TOL};

/// Logical database: entry count, reservoir size, stored data and the data
/// basis transform.
///
/// Entry 0 is the reservoir and always holds the all-zero string. Entries
/// not present in `data` are empty. `u_d` maps a computational basis string
/// `|d⟩` to the stored data state and must leave `|0…0⟩` fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct QdbDescriptor {
    pub k: usize,
    pub l: usize,
    pub data_width: usize,
    pub data: BTreeMap<usize, BitString>,
    pub u_d: Option<Circuit>,
}

#[derive(Serialize, Deserialize)]
struct RawDescriptor {
    k: usize,
    #[serde(default)]
    l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default)]
    data: BTreeMap<String, BitString>,
    #[serde(default)]
    u_d: Option<String>,
}

impl QdbDescriptor {
    /// Empty database with `k` entries, reservoir `l` and `data_width` data
    /// qubits.
    pub fn empty(k: usize, l: usize, data_width: usize) -> Result<Self> {
        let d = QdbDescriptor {
            k,
            l,
            data_width,
            data: BTreeMap::new(),
            u_d: None,
        };
        d.validate()?;
        Ok(d)
    }

    /// Builder: store `bits` at entry `j`.
    pub fn with_entry(mut self, j: usize, bits: BitString) -> Result<Self> {
        self.check_entry(j, &bits)?;
        if bits.is_zero() {
            self.data.remove(&j);
        } else {
            self.data.insert(j, bits);
        }
        Ok(self)
    }

    pub fn with_u_d(mut self, u_d: Circuit) -> Result<Self> {
        self.u_d = Some(u_d);
        self.validate()?;
        Ok(self)
    }

    fn check_entry(&self, j: usize, bits: &BitString) -> Result<()> {
        if j == 0 {
            return Err(Error::ReservoirIndex("written"));
        }
        if j >= self.k {
            return Err(Error::IndexOutOfRange {
                index: j,
                k: self.k,
            });
        }
        if bits.len() != self.data_width {
            return Err(Error::DataWidth {
                expected: self.data_width,
                got: bits.len(),
            });
        }
        Ok(())
    }

    /// Data at entry `j`; all zeros when empty.
    pub fn entry(&self, j: usize) -> BitString {
        self.data
            .get(&j)
            .copied()
            .unwrap_or(BitString::zeros(self.data_width))
    }

    /// Bits of the index register.
    pub fn index_width(&self) -> usize {
        ceil_log2(self.k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidDescriptor("k must be at least 1".into()));
        }
        if self.data_width > BitString::MAX_LEN {
            return Err(Error::InvalidDescriptor("data register too wide".into()));
        }
        for (&j, bits) in &self.data {
            self.check_entry(j, bits)
                .map_err(|e| Error::InvalidDescriptor(format!("entry {j}: {e}")))?;
        }
        if let Some(u) = &self.u_d {
            check_basis_transform(u, self.data_width)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let raw = RawDescriptor {
            k: self.k,
            l: self.l,
            m: Some(self.data_width),
            data: self.data.iter().map(|(j, b)| (j.to_string(), *b)).collect(),
            u_d: self.u_d.as_ref().map(Circuit::emit_text),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("descriptor serializes");
        s.push('\n');
        s
    }

    /// Parse the JSON form. The data width comes from `m`, else from the
    /// stored strings, else from `u_d`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDescriptor = serde_json::from_str(text)?;
        let u_d = raw.u_d.as_deref().map(parse_text).transpose()?;
        let width = raw
            .m
            .or_else(|| raw.data.values().next().map(BitString::len))
            .or_else(|| u_d.as_ref().map(Circuit::n_qubits))
            .ok_or_else(|| {
                Error::InvalidDescriptor("cannot infer the data width; add an `m` field".into())
            })?;
        let mut data = BTreeMap::new();
        for (key, bits) in raw.data {
            let j: usize = key.parse().map_err(|_| {
                Error::InvalidDescriptor(format!("data key `{key}` is not an index"))
            })?;
            if !bits.is_zero() {
                data.insert(j, bits);
            } else if bits.len() != width {
                return Err(Error::DataWidth {
                    expected: width,
                    got: bits.len(),
                });
            }
        }
        let d = QdbDescriptor {
            k: raw.k,
            l: raw.l,
            data_width: width,
            data,
            u_d,
        };
        d.validate()?;
        Ok(d)
    }
}

/// `⌈log₂ n⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// A data basis transform must act on the data register, be unitary and
/// leave the empty string in place.
pub(crate) fn check_basis_transform(u: &Circuit, width: usize) -> Result<()> {
    if u.n_qubits() != width {
        return Err(Error::InvalidDescriptor(format!(
            "u_d acts on {} qubits, the data register has {width}",
            u.n_qubits()
        )));
    }
    if width <= oracle::SMALL_OPERATOR_QUBITS {
        let op = oracle::dense_operator(u)?;
        if !op.is_unitary(1e-10) {
            return Err(Error::InvalidDescriptor("u_d is not unitary".into()));
        }
    }
    let image = u.run_from_zero()?;
    let zero = StateVector::zero(width)?;
    if (image.overlap(&zero)?.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidDescriptor(
            "u_d must map |0…0⟩ to itself".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateSpec;

    #[test]
    fn json_round_trip() {
        let mut u = Circuit::new(2);
        u.push(GateSpec::h(1).ctrl(0)).unwrap();
        let d = QdbDescriptor::empty(5, 2, 2)
            .unwrap()
            .with_entry(3, "10".parse().unwrap())
            .unwrap()
            .with_u_d(u)
            .unwrap();
        let back = QdbDescriptor::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn width_inferred_from_data() {
        let d = QdbDescriptor::from_json(r#"{"k":4,"l":0,"data":{"2":"101"},"u_d":null}"#).unwrap();
        assert_eq!(d.data_width, 3);
        assert_eq!(d.entry(2).value(), 5);
        assert!(d.entry(1).is_zero());
    }

    #[test]
    fn rejects_reservoir_and_range() {
        assert!(QdbDescriptor::from_json(r#"{"k":4,"data":{"0":"1"}}"#).is_err());
        assert!(QdbDescriptor::from_json(r#"{"k":4,"data":{"4":"1"}}"#).is_err());
        assert!(QdbDescriptor::from_json(r#"{"k":4,"data":{"1":"1","2":"10"}}"#).is_err());
    }

    #[test]
    fn u_d_must_fix_zero() {
        let mut u = Circuit::new(1);
        u.push(GateSpec::h(0)).unwrap();
        let d = QdbDescriptor::empty(2, 0, 1).unwrap();
        assert!(d.with_u_d(u).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(22), 5);
    }
}
