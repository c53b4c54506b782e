//! CEC2013-style benchmark functions with reproducible shift and rotation.

pub mod functions;
pub mod rotation;
pub mod suite;

pub use functions::{eval_base, Base};
pub use rotation::{random_rotation, RotationMatrix};
pub use suite::{
    function_index, make_problem, suite, suite_entries, suite_entry, BenchmarkSpec, FunctionInfo,
    ManifestRow, SuiteEntry, SuiteManifest, FUNCTIONS,
};
