//! Batch front-end: sweeps, figure data, verification and the command-line parser.

pub mod app;
pub mod config;
pub mod figures;
pub mod output;
pub mod sweep;
pub mod verify;

pub use app::{run, Cli};
pub use config::{Axis, Format, GridPoint, SweepConfig};
pub use figures::{figure_command, figure_table, FigureId};
pub use output::{Cell, Table};
pub use sweep::{run_sweep, SweepSummary, Tolerances};
pub use verify::{verify_command, VerifyReport};
