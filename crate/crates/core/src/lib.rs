//! Exact computations in graded rings: group rings, twisted group rings and
//! the first Weyl algebra, with searches for units, zero-divisors,
//! idempotents and nilpotents over bounded windows.

pub mod coeff;
pub mod group;
pub mod ring;
pub mod report;
pub mod up;
pub mod expr;
pub mod structure;
pub mod search;
pub mod cli;
