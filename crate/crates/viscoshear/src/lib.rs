//! Command-line front end for `viscoshear-core`: config files, a thread pool
//! and CSV/JSON/SVG output.

pub mod config;
pub mod exec;
pub mod output;
pub mod run;

pub use config::{parse_config, Config, ConfigError, Formats};
pub use exec::Pool;
pub use run::{run, Command, RunError, Status};
