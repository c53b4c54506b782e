//! Experiment orchestration: configuration, seeded parallel runs, result
//! files, statistical reports, tables and convergence plots.

pub mod config;
pub mod experiment;
pub mod plot;
pub mod report;
pub mod tables;

pub use config::{load_config, AlgorithmEntry, AlgorithmParams, ExperimentConfig};
pub use experiment::{run_cells, run_experiment, trial_seed, ExperimentResults, RunOptions, RunOutcome};
pub use plot::{aggregate, emit_convergence_plot, load_curves, plot_cell, ConvergenceCurve};
pub use report::{build_report, read_results, read_results_dir, CellReport, ComparisonReport, ResultRow};
pub use tables::{emit_tables, TableFormat};
