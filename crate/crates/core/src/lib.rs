//! Noncommutative Gröbner bases in the free associative algebra over Z,
//! Z/nZ and localizations of Z.

#![allow(clippy::result_large_err)]

pub mod buchberger;
pub mod cli;
pub mod coeff;
pub mod division;
pub mod dynamical;
pub mod oracle;
pub mod ordering;
pub mod par;
pub mod poly;
pub mod problem;
pub mod words;
