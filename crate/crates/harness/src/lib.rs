//! Executable metatheory for lbox-core: corpus enumeration, differential
//! running of the three evaluators, and property suites.

pub mod diff;
pub mod enumerate;
pub mod programs;
pub mod sample;
pub mod suite;

pub use diff::{differential_run, DiffOptions, Verdict};
pub use enumerate::{enumerate_commands, return_types, universe};
