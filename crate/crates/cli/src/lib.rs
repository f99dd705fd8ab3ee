//! Command implementations, output rendering and the Euler-factor cache
//! behind the `symkl` binary.

pub mod cache;
pub mod commands;
pub mod error;
pub mod output;

pub use cache::{Cache, CacheEntry, CACHE_ENV, SCHEMA_VERSION};
pub use error::{CliError, CliResult};
pub use output::{Format, Report};
