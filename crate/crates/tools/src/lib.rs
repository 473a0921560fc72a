//! Host-side companion to `iqp-core`: file formats for the
//! challenge/response exchange, OpenQASM export, report rendering, the
//! `iqp` CLI, and the built-in acceptance suite.

pub mod cli;
pub mod formats;
pub mod qasm;
pub mod report;
pub mod selftest;
