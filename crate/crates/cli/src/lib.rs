//! Command-line front end and batch experiments for correlated
//! Erdős–Rényi detection.

pub mod config;
pub mod edgelist;
pub mod experiment;
pub mod runner;
