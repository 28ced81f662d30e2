//! Reference material for checking `spss-core` from the outside.
//!
//! [`oracles`] holds direct transcriptions of the validity index definitions
//! and an exact rational hypergeometric tail, none of which share code with
//! the crate under test. [`fixtures`] locates the bundled UCI datasets. The
//! `acceptance` test target runs the reproduction criteria and prints one
//! PASS/FAIL line for each.

pub mod fixtures;
pub mod oracles;
