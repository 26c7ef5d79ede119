//! Library surface behind the `quarkcap` binary: the verification battery,
//! the report envelope, and the shared error domain. The test targets link
//! against this so the command line and the suites run the same code.

pub mod battery;
pub mod error;
pub mod report;
