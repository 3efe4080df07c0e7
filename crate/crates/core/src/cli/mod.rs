//! Problem files and the task runner behind the `superpv` binary.

pub mod config;
pub mod run;

pub use config::{ProblemConfig, Problem, TaskConfig};
pub use run::{emit_report, exit_code, inputs_hash, run, run_task, TaskRecord, Verdict};
