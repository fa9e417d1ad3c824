//! Whittaker dimensions of theta representations of Brylinski–Deligne covers.

pub mod cli;
pub mod exec;
pub mod lattice;
pub mod orbits;
pub mod rootdata;
pub mod symfield;
pub mod theta;
