//! Configuration, trajectory persistence and command entry points.

pub mod commands;
pub mod config;
pub mod trajectory_io;

pub use commands::{cmd_check, cmd_compare, cmd_convergence, cmd_simulate, exit_code, CommandOptions};
pub use config::{
    load_config, parse_config, save_config, InitialData, Initializer, Method, OutputFormat, OutputSpec,
    SimulationConfig, SCHEMA_VERSION,
};
pub use trajectory_io::{read_trajectory, trajectory_from_csv, trajectory_from_json, trajectory_to_csv, trajectory_to_json, write_trajectory};
