//! Library side of the `strutforge` command: result records, the JSON-lines
//! cache, and the command implementations used by the binary.

pub mod cache;
pub mod commands;
pub mod record;

pub use cache::Cache;
pub use record::{ResultRecord, CSV_HEADER};
