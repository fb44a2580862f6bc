//! Scenario setup, the time loop and file output.

pub mod output;
pub mod run;
pub mod scenarios;

pub use output::{read_coefficients, read_table, write_field_snapshot, write_timeseries, CsvSink, Table};
pub use run::{run_simulation, HistorySink, RunContext, RunError, RunResult, Sink};
pub use scenarios::{
    initial_state, init_orszag_tang, init_whistler, init_xmode, preset, Overrides,
};
