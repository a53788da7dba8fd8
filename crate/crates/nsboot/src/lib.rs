pub mod error;
pub mod math;
pub mod problem;
pub mod run;
pub mod sampler;
pub mod special;

pub use error::{Error, Result};
pub use problem::{Estimand, Family, Problem};
pub use run::{combine_runs, split_into_threads, validate_run, DeadPoint, Run, RunMeta, Violation};
pub use sampler::{repeat_runs, run_perfect_ns, SamplerConfig, TerminationRule};
