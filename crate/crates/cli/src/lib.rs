// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! Command-line front end: argument parsing, orchestration and report
//! emission. Exit codes: 0 success, 2 configuration, 3 input, 4 analysis,
//! 5 file i/o.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::CliError;

use std::io::Write;

/// Runs the parsed command on a pool of `--threads` workers and emits its
/// output. The report goes to `--output` when given (with the summary on
/// standard output), otherwise to standard output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let threads = commands::threads_of(&cli.command);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {threads} threads: {e}")))?;
    let outcome = pool.install(|| run(&cli.command))?;
    let destination = match &cli.command {
        args::Command::Analyze(a) => &a.output.output,
        args::Command::Generate(a) => &a.output.output,
        args::Command::Regularize(a) => &a.output.output,
        args::Command::Curvature(a) => &a.output.output,
        args::Command::Distortion(a) => &a.output.output,
    };
    let mut stdout = std::io::stdout().lock();
    let shown = match destination {
        Some(path) => {
            commands::write(path, &outcome.body)?;
            format!("{}\n", outcome.summary)
        }
        None => outcome.body,
    };
    stdout.write_all(shown.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    Ok(())
}
