//! Directed entropy transfer in observation networks.
//!
//! An *observation* is a directed edge from an observer element to the
//! element it observes; the observer splits into two states and gains
//! `T ln 2` of entropy. Networks of two observations over three elements
//! behave as a NAND gate when the output element's entropy is thresholded,
//! and as a NOR gate with a lower threshold.
//!
//! - [`network`]: elements, observations, the entropy ledger and dissipation.
//! - [`units`]: entropy/energy conversions and transition profiles.
//! - [`patterns`]: canonical labels, enumeration and naming of small patterns.
//! - [`gates`]: the two-observation gate and the reachability search.
//! - [`circuits`]: boolean expressions lowered to entropy-NAND netlists.
//! - [`thermo`]: statistical heat-reservoir analog with Monte Carlo scoring.
//! - [`cli`]: the `entropy-nand` command line.

pub mod circuits;
pub mod cli;
pub mod error;
pub mod gates;
pub mod network;
pub mod patterns;
pub mod thermo;
pub mod units;

pub use error::{Error, Result};
pub use gates::{evaluate, GateKind, GateReadout, TruthTable};
pub use network::{DissipationMode, ObservationNetwork, Role};
