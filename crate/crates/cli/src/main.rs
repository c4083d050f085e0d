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

//! `qdb`: build, manipulate and verify simulated quantum databases.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdb_core::sim::{set_max_qubits, DumpFormat};
use qdb_core::verify::{verify, VerifyLevel};
use qdb_core::{Error, ErrorKind};

use qdb_cli::runner::{run, RunConfig};
use qdb_cli::script;

#[derive(Parser)]
#[command(name = "qdb", version, about = "Quantum database simulator")]
struct Cli {
    /// Largest statevector the simulator will allocate, in qubits.
    #[arg(long, global = true)]
    max_qubits: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an operation script.
    Run {
        script: PathBuf,
        /// Seed for every sampling command. Required if the script samples.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for dumps, circuits and reports.
        #[arg(long, default_value = "qdb-out")]
        out: PathBuf,
        /// Amplitude dump format: json or csv.
        #[arg(long, default_value = "json")]
        format: DumpFormat,
    },
    /// Run the built-in invariant suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "fast")]
        level: VerifyLevel,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Parse => 2,
        ErrorKind::Semantic => 3,
        ErrorKind::Capacity | ErrorKind::Numeric => 4,
        ErrorKind::Io => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.max_qubits {
        set_max_qubits(n);
    }
    match cli.command {
        Cmd::Run {
            script,
            seed,
            out,
            format,
        } => {
            let text = match fs::read_to_string(&script) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", script.display());
                    return ExitCode::from(1);
                }
            };
            let steps = match script::parse_script(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit_code(&e));
                }
            };
            let cfg = RunConfig {
                seed,
                out,
                format,
                base_dir: script.parent().map(PathBuf::from).unwrap_or_default(),
            };
            match run(&steps, &cfg) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code(&e.error))
                }
            }
        }
        Cmd::Verify { level, out } => {
            let report = verify(level);
            let json = report.to_json();
            println!("{json}");
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(5)
            }
        }
    }
}
