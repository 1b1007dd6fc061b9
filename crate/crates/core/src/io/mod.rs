//! Configuration, CSV output, word-table caches and run manifests.

pub mod cache;
pub mod config;
pub mod csv;
pub mod manifest;

pub use self::cache::{cache_roundtrip, load_or_build, load_table, save_table};
pub use self::config::JobConfig;
pub use self::csv::{emit_csv, Cell, CsvTable};
pub use self::manifest::RunManifest;
