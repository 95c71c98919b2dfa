//! Persistence and interchange: scenario configs, CTF datasets, report
//! tables and plot-data grids.

pub mod ctf;
pub mod report;
pub mod scenario_file;

pub use ctf::{
    parse_ctf_binary, parse_ctf_text, read_ctf, write_ctf, write_ctf_binary, write_ctf_text,
    CtfFormat,
};
pub use report::{write_report, ReportInputs};
pub use scenario_file::{load_scenario_file, parse_gain_curve, parse_scenario_str, LoadedScenario};
