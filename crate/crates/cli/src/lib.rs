//! Command-line front end for the divisor-class calculator: the expression
//! language, the verification suites and their JSON reports.

pub mod expr;
pub mod report;
pub mod suites;
