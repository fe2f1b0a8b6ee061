//! File formats, the command-line front end and the differential fuzzer
//! for `convexqe-core`.

pub mod app;
pub mod fixtures;
pub mod format;
pub mod fuzz;
