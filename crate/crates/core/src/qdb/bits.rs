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

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fixed-width classical bit string, written most significant bit first.
///
/// Bit `i` of `value` is stored on the `i`-th qubit of its register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: usize,
}

impl BitString {
    pub const MAX_LEN: usize = 63;

    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > Self::MAX_LEN || (len < 64 && value >> len != 0) {
            return Err(Error::BasisOutOfRange {
                index: value,
                width: len,
            });
        }
        Ok(BitString { value, len })
    }

    pub fn zeros(len: usize) -> Self {
        BitString { value: 0, len }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.value >> i) & 1 == 1
    }

    /// Positions of the set bits, least significant first.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.bit(i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty bit string".into()));
        }
        if s.len() > Self::MAX_LEN {
            return Err(Error::InvalidArgument(format!(
                "bit string longer than {} bits",
                Self::MAX_LEN
            )));
        }
        let mut value = 0u64;
        for ch in s.chars() {
            value <<= 1;
            match ch {
                '0' => {}
                '1' => value |= 1,
                other => return Err(Error::InvalidArgument(format!("`{other}` is not a bit"))),
            }
        }
        Ok(BitString {
            value,
            len: s.len(),
        })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
