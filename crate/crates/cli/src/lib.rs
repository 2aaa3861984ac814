//! Command-line front end for `lyness-core` and the reproduction suite it
//! runs under `verify`.

pub mod app;
pub mod repro;
