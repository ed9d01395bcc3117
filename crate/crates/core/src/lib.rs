//! Static analysis of CommS programs with string-to-code reflection.
//!
//! Strings are abstracted by finite automata, integers by intervals and
//! Booleans by sets. At every `reflect` site the analysis synthesizes an
//! ordinary program that over-approximates all code the string may denote and
//! analyzes it in place.

pub mod alphabet;
pub mod automata;
pub mod concrete;
pub mod domain;
pub mod exe;
pub mod interp;
pub mod lang;
pub mod transducers;
