//! File formats, example families and the commands behind the binary.

pub mod examples;
pub mod format;
pub mod report;

pub use examples::{fixture_b, make_example, square_zero_unitary, Family};
pub use format::{emit_algebra, parse_algebra, parse_algebra_file, InputError};
pub use report::{cmd_decompose, cmd_table, cmd_verify, to_json, ResultDocument, SCHEMA_VERSION};
