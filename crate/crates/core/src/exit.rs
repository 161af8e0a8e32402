//! Process exit codes of the `polynewton` binary.

pub const SUCCESS: i32 = 0;
/// A requested scheme did not converge, or a verification threshold was missed.
pub const NOT_CONVERGED: i32 = 1;
/// Command-line syntax error (reported by the argument parser).
pub const USAGE: i32 = 2;
pub const UNKNOWN_PROBLEM: i32 = 3;
pub const BAD_PARAM: i32 = 4;
/// The problem file is not valid JSON or describes an invalid system.
pub const INVALID_PROBLEM_FILE: i32 = 5;
pub const READ_FAILURE: i32 = 6;
pub const WRITE_FAILURE: i32 = 7;
