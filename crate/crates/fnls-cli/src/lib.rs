//! IO, file formats, config parsing and the experiment runner for the
//! `fnls-core` solver.

pub mod config;
pub mod fnls1;
pub mod runner;
pub mod verify;
