//! File formats, scenario pipeline and command line around [`abgauge_core`].
//!
//! * [`io`]: angular, sphere, X-ray, sinogram, grid and kernel file formats;
//! * [`scenario`]: the versioned JSON scenario schema and its configurations;
//! * [`pipeline`]: `classify`, `reconstruct` and `kernel-lab` runs;
//! * [`report`]: reports whose numbers carry their tolerance and origin.
pub mod error;
pub mod io;
pub mod pipeline;
pub mod report;
pub mod scenario;

pub use abgauge_core as core;
pub use error::{Error, Result};
pub use pipeline::{
    classify, run, run_classify, run_kernel_lab, run_reconstruct, ClassifyInput, KernelPair,
};
pub use report::{emit_report, Report, ReportFormat, Verdict};
pub use scenario::{Scenario, ScenarioKind};
