//! Exact simulation and analysis of 2- and 3-periodic Lyness recurrences
//! `x_{n+2} = (a_n + x_{n+1}) / x_n`.
//!
//! The crate is layered: [`exact`] and [`poly`] hold the number and
//! polynomial substrate, [`lyness`] the maps and their invariants,
//! [`rotation`] certified rotation-number enclosures and [`adherence`] the
//! interval classification of orbit closures.

pub mod adherence;
pub mod exact;
pub mod lyness;
pub mod poly;
pub mod rotation;
