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

//! Operation scripts: one `cmd key=value ...` command per line (or per
//! `;`-separated segment), `#` starts a comment.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use qdb_core::extend::Route;
use qdb_core::qdb::BitString;
use qdb_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrepareMode {
    /// Reservoir construction for any `k`, data from the descriptor.
    Auto,
    Balanced,
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PrepareSpec {
    Params {
        k: usize,
        l: usize,
        m: usize,
        mode: PrepareMode,
    },
    Descriptor(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WriteMode {
    Cnot,
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemoveMode {
    Reservoir,
    Projective,
}

/// Which branch a projective removal continues with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Sample,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PermuteSpec {
    Map(Vec<usize>),
    Swap(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Prepare(PrepareSpec),
    Write {
        f: usize,
        d: BitString,
        mode: WriteMode,
    },
    ReadCopy {
        f: usize,
    },
    ReadProjective {
        f: usize,
        shots: Option<usize>,
    },
    Remove {
        f: usize,
        mode: RemoveMode,
        outcome: Outcome,
    },
    Permute(PermuteSpec),
    Extend {
        l: usize,
    },
    ExtendImbalanced {
        l: usize,
        z: usize,
        split: Option<(usize, usize)>,
        route: Route,
    },
    Emit {
        decompose: bool,
    },
    Dump,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Prepare(_) => "prepare",
            Command::Write { .. } => "write",
            Command::ReadCopy { .. } => "read-copy",
            Command::ReadProjective { .. } => "read-projective",
            Command::Remove { .. } => "remove",
            Command::Permute(_) => "permute",
            Command::Extend { .. } => "extend",
            Command::ExtendImbalanced { .. } => "extend-imbalanced",
            Command::Emit { .. } => "emit",
            Command::Dump => "dump",
        }
    }

    /// Commands that need `--seed`.
    pub fn needs_seed(&self) -> bool {
        matches!(
            self,
            Command::ReadProjective { shots: Some(_), .. }
                | Command::Remove {
                    outcome: Outcome::Sample,
                    ..
                }
        )
    }
}

/// A command with the script line it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub line: usize,
    pub command: Command,
}

struct Args {
    line: usize,
    map: BTreeMap<String, String>,
}

impl Args {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn parse<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(format!("bad value `{v}` for `{key}`"))),
        }
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.parse(key)?
            .ok_or_else(|| self.err(format!("missing `{key}=`")))
    }

    fn list(&mut self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| self.err(format!("bad list `{v}` for `{key}`"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(k) => Err(self.err(format!("unknown argument `{k}`"))),
        }
    }
}

pub fn parse_script(text: &str) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        for segment in body.split(';') {
            let mut words = segment.split_whitespace();
            let Some(cmd) = words.next() else { continue };
            let mut map = BTreeMap::new();
            for w in words {
                let (k, v) = w.split_once('=').ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("expected key=value, got `{w}`"),
                })?;
                if map.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: format!("`{k}` given twice"),
                    });
                }
            }
            let command = parse_command(cmd, Args { line, map })?;
            steps.push(Step { line, command });
        }
    }
    Ok(steps)
}

fn parse_command(cmd: &str, mut a: Args) -> Result<Command> {
    let command = match cmd {
        "prepare" => {
            if let Some(path) = a.take("descriptor") {
                Command::Prepare(PrepareSpec::Descriptor(path.into()))
            } else {
                let mode = match a.take("mode").as_deref() {
                    None | Some("auto") => PrepareMode::Auto,
                    Some("balanced") => PrepareMode::Balanced,
                    Some("general") => PrepareMode::General,
                    Some(other) => return Err(a.err(format!("unknown prepare mode `{other}`"))),
                };
                Command::Prepare(PrepareSpec::Params {
                    k: a.required("k")?,
                    l: a.parse("l")?.unwrap_or(0),
                    m: a.parse("m")?.unwrap_or(1),
                    mode,
                })
            }
        }
        "write" => {
            let mode = match a.take("mode").as_deref() {
                None | Some("cnot") => WriteMode::Cnot,
                Some("swap") => WriteMode::Swap,
                Some(other) => return Err(a.err(format!("unknown write mode `{other}`"))),
            };
            Command::Write {
                f: a.required("f")?,
                d: a.required("d")?,
                mode,
            }
        }
        "read-copy" => Command::ReadCopy {
            f: a.required("f")?,
        },
        "read-projective" => Command::ReadProjective {
            f: a.required("f")?,
            shots: a.parse("shots")?,
        },
        "remove" => {
            let mode = match a.take("mode").as_deref() {
                None | Some("reservoir") => RemoveMode::Reservoir,
                Some("projective") => RemoveMode::Projective,
                Some(other) => return Err(a.err(format!("unknown remove mode `{other}`"))),
            };
            let outcome = match a.take("outcome").as_deref() {
                None | Some("success") => Outcome::Success,
                Some("sample") => Outcome::Sample,
                Some(other) => return Err(a.err(format!("unknown outcome `{other}`"))),
            };
            if mode == RemoveMode::Reservoir && outcome != Outcome::Success {
                return Err(a.err("`outcome` applies to projective removal only"));
            }
            Command::Remove {
                f: a.required("f")?,
                mode,
                outcome,
            }
        }
        "permute" => match (a.list("map")?, a.list("swap")?) {
            (Some(map), None) => Command::Permute(PermuteSpec::Map(map)),
            (None, Some(pair)) if pair.len() == 2 => {
                Command::Permute(PermuteSpec::Swap(pair[0], pair[1]))
            }
            (None, Some(_)) => return Err(a.err("`swap=` takes two indices")),
            _ => return Err(a.err("permute takes exactly one of `map=` or `swap=`")),
        },
        "extend" => Command::Extend {
            l: a.required("l")?,
        },
        "extend-imbalanced" => {
            let l = a.required("l")?;
            let z = a.required("z")?;
            let split = match (a.parse("l1")?, a.parse("l2")?) {
                (Some(x), Some(y)) => Some((x, y)),
                (None, None) => None,
                _ => return Err(a.err("give both `l1=` and `l2=` or neither")),
            };
            let route = match a.take("route") {
                None => Route::Direct,
                Some(r) => r
                    .parse()
                    .map_err(|_| a.err(format!("unknown route `{r}`")))?,
            };
            Command::ExtendImbalanced { l, z, split, route }
        }
        "emit" => {
            let decompose = match a.take("decompose").as_deref() {
                None | Some("none") => false,
                Some("toffoli") => true,
                Some(other) => return Err(a.err(format!("unknown decomposition `{other}`"))),
            };
            Command::Emit { decompose }
        }
        "dump" => Command::Dump,
        other => return Err(a.err(format!("unknown command `{other}`"))),
    };
    a.finish()?;
    Ok(command)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_and_segments() {
        let s = parse_script("prepare k=4 # comment\n\nwrite f=2 d=01; dump\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].line, 3);
        assert_eq!(s[2].command, Command::Dump);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_script("prepare k=4\nwrite f=x d=1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_script("dump extra=1").is_err());
        assert!(parse_script("frobnicate").is_err());
    }

    #[test]
    fn permute_forms() {
        let s = parse_script("permute swap=1,2\npermute map=0,2,1").unwrap();
        assert_eq!(s[0].command, Command::Permute(PermuteSpec::Swap(1, 2)));
        assert_eq!(
            s[1].command,
            Command::Permute(PermuteSpec::Map(vec![0, 2, 1]))
        );
    }
}
