//! Library side of the `hloc` binary: argument definitions, the group file
//! format and the command implementations.

pub mod commands;
pub mod format;

pub use commands::{run, Cli, Command, Outcome};
pub use format::{parse_group, GroupDescription, ParseError};

pub const EXIT_OK: i32 = 0;
/// The computation answered in the negative: a nontrivial group, a
/// hypothesis that fails, or a precondition that does not hold.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;
/// A self-check inside the library failed.
pub const EXIT_INTERNAL: i32 = 4;
