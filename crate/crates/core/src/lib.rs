//! G-mechanisms of exchange.
//!
//! A mechanism is given by a strongly connected digraph of trading
//! opportunities. This crate computes its prices (by two independent exact
//! routes), executes it on trader offers, measures its time and price
//! complexity, and searches the space of all mechanisms on `m` commodities
//! for the Pareto-minimal ones.

pub mod arborescence;
pub mod axioms;
pub mod canon;
pub mod complexity;
pub mod error;
pub mod field;
pub mod graph;
pub mod linalg;
pub mod market;
pub mod price;
pub mod rational;
pub mod sampling;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, Edge};
pub use rational::Rational;
