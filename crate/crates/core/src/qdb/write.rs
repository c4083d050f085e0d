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

use serde::Serialize;

use super::bits::BitString;
use super::state::QdbState;
use crate::error::Result;
use crate::sim::{GateSpec, Register};

/// How the sensor register ended up after a write.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WriteReport {
    /// Purity of the sensor's reduced state; 1 for a product state.
    pub sensor_purity: f64,
    pub schmidt_rank: usize,
}

impl QdbState {
    /// Write `d` into the empty entry `f` with multi-controlled X gates
    /// driven by a sensor register holding `d`. The sensor is checked to be
    /// in product with the database, then reset and released.
    pub fn write(&mut self, f: usize, d: &BitString) -> Result<WriteReport> {
        let next = self.shape.after_write(f, d)?;
        let sensor = self.load_sensor(d)?;
        let data = self.shape.layout.data.clone();
        let select = self.entry_controls(f);

        let mut c = self.scratch();
        self.push_basis_transform(&mut c, &data, true)?;
        self.push_basis_transform(&mut c, &sensor, true)?;
        for (b, &q) in data.iter().enumerate() {
            c.push(
                GateSpec::x(q)
                    .with_controls(select.iter().copied())
                    .ctrl(sensor[b]),
            )?;
        }
        self.push_basis_transform(&mut c, &data, false)?;
        self.push_basis_transform(&mut c, &sensor, false)?;
        self.run("write", &c)?;

        let report = self.sensor_report(&sensor)?;
        let mut c = self.scratch();
        self.push_basis_transform(&mut c, &sensor, true)?;
        for b in d.ones() {
            c.push(GateSpec::x(sensor[b]))?;
        }
        self.run("write: unload sensor", &c)?;
        self.release(sensor.len())?;
        self.set_shape(next)?;
        Ok(report)
    }

    /// Write by conditionally swapping data and sensor. Other branches keep
    /// `d` in the sensor, so the sensor stays attached and is entangled with
    /// the database unless every branch agrees.
    pub fn write_swap_conditional(&mut self, f: usize, d: &BitString) -> Result<WriteReport> {
        let next = self.shape.after_write_swap(f, d)?;
        let sensor = self.load_sensor(d)?;
        let data = self.shape.layout.data.clone();
        let select = self.entry_controls(f);

        let mut c = self.scratch();
        self.push_basis_transform(&mut c, &data, true)?;
        self.push_basis_transform(&mut c, &sensor, true)?;
        for (b, &q) in data.iter().enumerate() {
            c.push(GateSpec::swap(q, sensor[b]).with_controls(select.iter().copied()))?;
        }
        self.push_basis_transform(&mut c, &data, false)?;
        self.push_basis_transform(&mut c, &sensor, false)?;
        self.run("write-swap", &c)?;
        self.set_shape(next)?;
        self.sensor_report(&sensor)
    }

    /// Allocate a sensor on top and load `U_D|d⟩` into it.
    fn load_sensor(&mut self, d: &BitString) -> Result<Vec<usize>> {
        let sensor = self.allocate(&vec![Register::S; d.len()])?;
        let mut c = self.scratch();
        for b in d.ones() {
            c.push(GateSpec::x(sensor[b]))?;
        }
        self.push_basis_transform(&mut c, &sensor, false)?;
        self.run("write: load sensor", &c)?;
        Ok(sensor)
    }

    fn sensor_report(&self, sensor: &[usize]) -> Result<WriteReport> {
        if sensor.is_empty() {
            return Ok(WriteReport {
                sensor_purity: 1.0,
                schmidt_rank: 1,
            });
        }
        let r = self.state.schmidt(sensor)?;
        Ok(WriteReport {
            sensor_purity: r.purity,
            schmidt_rank: r.schmidt_rank,
        })
    }
}
