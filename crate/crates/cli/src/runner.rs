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

//! Dry-run validation and execution of operation scripts.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use qdb_core::circuit::{AncillaPolicy, DecompositionConfig};
use qdb_core::extend::{plan_imbalanced, plan_imbalanced_with, ExtendPlan};
use qdb_core::qdb::{Permutation, QdbDescriptor, QdbShape, QdbState};
use qdb_core::sim::{records_to_csv, records_to_json, DumpFormat};
use qdb_core::{Error, Result};

use crate::script::{
    Command, Outcome, PermuteSpec, PrepareMode, PrepareSpec, RemoveMode, Step, WriteMode,
};

pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub format: DumpFormat,
    /// Directory that relative descriptor paths are resolved against.
    pub base_dir: PathBuf,
}

/// Failure of one script command.
#[derive(Debug)]
pub struct StepError {
    /// 1-based position in the script, 0 for errors before any command.
    pub index: usize,
    pub line: usize,
    pub command: &'static str,
    pub error: Error,
}

impl std::fmt::Display for StepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "command {} ({}, line {}): {}",
            self.index, self.command, self.line, self.error
        )
    }
}

fn at(index: usize, step: &Step) -> impl FnOnce(Error) -> StepError + '_ {
    move |error| StepError {
        index,
        line: step.line,
        command: step.command.name(),
        error,
    }
}

enum Dry {
    Empty,
    Live(Box<QdbShape>),
    Consumed,
}

impl Dry {
    fn live(shape: QdbShape) -> Self {
        Dry::Live(Box::new(shape))
    }

    fn shape(&self) -> Result<&QdbShape> {
        match self {
            Dry::Live(s) => Ok(s.as_ref()),
            Dry::Empty => Err(Error::InvalidArgument("no database prepared yet".into())),
            Dry::Consumed => Err(Error::Consumed),
        }
    }
}

fn load_descriptor(base: &Path, path: &Path) -> Result<QdbDescriptor> {
    let full = if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    };
    QdbDescriptor::from_json(&fs::read_to_string(full)?)
}

fn prepared_shape(spec: &PrepareSpec, base: &Path) -> Result<QdbShape> {
    match spec {
        PrepareSpec::Descriptor(path) => QdbShape::from_descriptor(&load_descriptor(base, path)?),
        &PrepareSpec::Params { k, l, m, mode } => {
            match mode {
                PrepareMode::Balanced if !k.is_power_of_two() => {
                    return Err(Error::NotPowerOfTwo(k))
                }
                PrepareMode::Balanced if l != 0 => {
                    return Err(Error::InvalidArgument(
                        "balanced preparation takes no reservoir".into(),
                    ))
                }
                PrepareMode::General if k < 2 => {
                    return Err(Error::InvalidArgument(format!(
                        "general preparation needs k ≥ 2, got {k}"
                    )))
                }
                _ => {}
            }
            QdbShape::prepared(k, l, m, None)
        }
    }
}

fn permutation(spec: &PermuteSpec, k: usize) -> Result<Permutation> {
    match spec {
        PermuteSpec::Map(m) => Permutation::new(m.clone()),
        &PermuteSpec::Swap(i, j) => Permutation::transposition(k, i, j),
    }
}

fn imbalanced_plan(
    k: usize,
    l: usize,
    z: usize,
    split: Option<(usize, usize)>,
    route: qdb_core::extend::Route,
) -> Result<ExtendPlan> {
    match split {
        Some((a, b)) => plan_imbalanced_with(k, l, z, a, b, route),
        None => {
            let mut plan = plan_imbalanced(k, l, z)?;
            if z >= 2 {
                plan.route = route;
            }
            Ok(plan)
        }
    }
}

/// Check every command against the evolving shape without simulating.
pub fn dry_run(steps: &[Step], cfg: &RunConfig) -> std::result::Result<(), StepError> {
    let mut dry = Dry::Empty;
    for (i, step) in steps.iter().enumerate() {
        let err = at(i + 1, step);
        let next = (|| -> Result<Dry> {
            if step.command.needs_seed() && cfg.seed.is_none() {
                return Err(Error::InvalidArgument("sampling needs --seed".into()));
            }
            Ok(match &step.command {
                Command::Prepare(spec) => Dry::live(prepared_shape(spec, &cfg.base_dir)?),
                Command::Write { f, d, mode } => {
                    let s = dry.shape()?;
                    Dry::live(match mode {
                        WriteMode::Cnot => s.after_write(*f, d)?,
                        WriteMode::Swap => s.after_write_swap(*f, d)?,
                    })
                }
                Command::ReadCopy { f } => Dry::live(dry.shape()?.after_read_copy(*f)?),
                Command::ReadProjective { f, .. } => {
                    dry.shape()?.read_probability(*f)?;
                    Dry::Consumed
                }
                Command::Remove { f, mode, outcome } => {
                    let s = dry.shape()?;
                    match (mode, outcome) {
                        (RemoveMode::Reservoir, _) => Dry::live(s.after_remove_reservoir(*f)?),
                        (RemoveMode::Projective, Outcome::Success) => {
                            match s.after_remove_projective(*f)? {
                                Some(next) => Dry::live(next),
                                None => Dry::Consumed,
                            }
                        }
                        (RemoveMode::Projective, Outcome::Sample) => {
                            s.after_remove_projective(*f)?;
                            Dry::Consumed
                        }
                    }
                }
                Command::Permute(spec) => {
                    let s = dry.shape()?;
                    Dry::live(s.after_permute(&permutation(spec, s.k())?)?)
                }
                Command::Extend { l } => Dry::live(dry.shape()?.after_extend(*l)?),
                Command::ExtendImbalanced { l, z, split, route } => {
                    let s = dry.shape()?;
                    let plan = imbalanced_plan(s.k(), *l, *z, *split, *route)?;
                    Dry::live(s.after_imbalanced(&plan)?)
                }
                Command::Emit { .. } | Command::Dump => {
                    dry.shape()?;
                    dry
                }
            })
        })()
        .map_err(err)?;
        dry = next;
    }
    Ok(())
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    rng: ChaCha8Rng,
    state: Option<QdbState>,
    consumed: bool,
}

impl Runner<'_> {
    fn db(&mut self) -> Result<&mut QdbState> {
        if self.consumed {
            return Err(Error::Consumed);
        }
        self.state
            .as_mut()
            .ok_or_else(|| Error::InvalidArgument("no database prepared yet".into()))
    }

    fn artifact(&self, index: usize, name: &str, ext: &str, body: &str) -> Result<()> {
        let path = self.cfg.out.join(format!("{index:03}_{name}.{ext}"));
        fs::write(path, body)?;
        Ok(())
    }

    fn report<T: Serialize>(&self, index: usize, name: &str, value: &T) -> Result<()> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        self.artifact(index, name, "json", &body)
    }

    fn exec(&mut self, index: usize, command: &Command) -> Result<()> {
        let name = command.name();
        match command {
            Command::Prepare(spec) => {
                let shape = prepared_shape(spec, &self.cfg.base_dir)?;
                let db = match spec {
                    PrepareSpec::Params {
                        k,
                        m,
                        mode: PrepareMode::Balanced,
                        ..
                    } => QdbState::prepare_balanced(*k, *m)?,
                    _ => QdbState::synthesize(shape)?,
                };
                self.state = Some(db);
                self.consumed = false;
            }
            Command::Write { f, d, mode } => {
                let db = self.db()?;
                let rep = match mode {
                    WriteMode::Cnot => db.write(*f, d)?,
                    WriteMode::Swap => db.write_swap_conditional(*f, d)?,
                };
                self.report(index, name, &rep)?;
            }
            Command::ReadCopy { f } => {
                let rep = self.db()?.read_copy(*f)?;
                self.report(index, name, &rep)?;
            }
            Command::ReadProjective { f, shots } => {
                let counts = match shots {
                    Some(n) => {
                        let db = self.state.as_ref().ok_or(Error::Consumed)?;
                        Some(db.sample_index_counts(*n, &mut self.rng)?)
                    }
                    None => None,
                };
                self.db()?;
                let db = self.state.take().ok_or(Error::Consumed)?;
                self.consumed = true;
                let read = db.read_projective(*f)?;
                self.report(
                    index,
                    name,
                    &json!({ "read": read.report(*f), "shots": shots, "counts": counts }),
                )?;
            }
            Command::Remove { f, mode, outcome } => match mode {
                RemoveMode::Reservoir => {
                    self.db()?.remove_reservoir(*f)?;
                    let db = self.db()?;
                    let rep = json!({ "entry": f, "reservoir_amplitude": db.entry_amplitude(0)? });
                    self.report(index, name, &rep)?;
                }
                RemoveMode::Projective => {
                    let removal = self.db()?.remove_projective(*f)?;
                    let succeeded = match outcome {
                        Outcome::Success => true,
                        Outcome::Sample => self.rng.gen::<f64>() < removal.success_probability,
                    };
                    self.report(
                        index,
                        name,
                        &json!({
                            "entry": f,
                            "success_probability": removal.success_probability,
                            "failure_probability": removal.failure_probability,
                            "outcome": if succeeded { "success" } else { "failure" },
                        }),
                    )?;
                    match (outcome, removal.survivor) {
                        (Outcome::Success, Some(s)) => self.state = Some(s),
                        _ => {
                            self.state = None;
                            self.consumed = true;
                        }
                    }
                }
            },
            Command::Permute(spec) => {
                let db = self.db()?;
                let pi = permutation(spec, db.k())?;
                db.permute(&pi)?;
            }
            Command::Extend { l } => {
                let rep = self.db()?.extend(*l, None)?;
                self.report(index, name, &rep)?;
            }
            Command::ExtendImbalanced { l, z, split, route } => {
                let db = self.db()?;
                let plan = imbalanced_plan(db.k(), *l, *z, *split, *route)?;
                db.extend_with_plan(&plan)?;
                self.report(index, name, &plan)?;
            }
            Command::Emit { decompose } => {
                let db = self.db()?;
                let circuit = if *decompose {
                    db.history()
                        .decompose_mcx(&DecompositionConfig::toffoli_chain(
                            AncillaPolicy::CleanAllocated,
                        ))?
                } else {
                    db.history().clone()
                };
                let text = circuit.emit_text();
                self.artifact(index, name, "qc", &text)?;
            }
            Command::Dump => {
                let records = self.db()?.dump()?;
                let body = match self.cfg.format {
                    DumpFormat::Json => records_to_json(&records),
                    DumpFormat::Csv => records_to_csv(&records),
                };
                self.artifact(index, name, self.cfg.format.extension(), &body)?;
            }
        }
        Ok(())
    }
}

/// Validate, then execute, writing artifacts into `cfg.out`.
pub fn run(steps: &[Step], cfg: &RunConfig) -> std::result::Result<(), StepError> {
    dry_run(steps, cfg)?;
    let setup = |error| StepError {
        index: 0,
        line: 0,
        command: "setup",
        error,
    };
    fs::create_dir_all(&cfg.out).map_err(|e| setup(e.into()))?;
    let mut runner = Runner {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0)),
        state: None,
        consumed: false,
    };
    for (i, step) in steps.iter().enumerate() {
        runner.exec(i + 1, &step.command).map_err(at(i + 1, step))?;
    }
    if let Some(desc) = runner.state.as_ref().and_then(|db| db.shape().descriptor()) {
        fs::write(cfg.out.join("final_descriptor.json"), desc.to_json())
            .map_err(|e| setup(e.into()))?;
    }
    Ok(())
}
