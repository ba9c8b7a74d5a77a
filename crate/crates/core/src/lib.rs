//! Monte Carlo simulator for default cascades on interbank networks.
//!
//! Banks hold claims on each other along the edges of a directed network.
//! A single bank fails, its creditors write off their claims on it, and any
//! creditor whose write-offs reach its capital buffer fails in turn. The
//! [`experiment`] module runs large ensembles of such cascades over
//! Erdős–Rényi, scale-free and degree-correlated networks with uniform or
//! power-law balance sheets, and estimates how often a single failure takes
//! down a sizeable share of the system.

pub mod balance;
pub mod cascade;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod netgen;

pub use error::{Error, Result};
