//! Learning systems of default implications from observation streams and
//! reasoning over the median-graph model spaces they induce.
//!
//! * [`pcs`], [`pcr`]: literals, selections and pointed complemented relations.
//! * [`geometry`]: dual enumeration, halfspaces, medians, projections.
//! * [`propagation`]: the enumeration-free reasoning kernel.
//! * [`qual`], [`real`]: qualitative and real-valued snapshots.
//! * [`sim`]: environments, observers and binary agents.
//! * [`oracle`]: brute-force reference implementations.
//! * [`verify`]: the verification suites built on the oracles.

pub mod bitset;
pub mod checkpoint;
pub mod error;
pub mod geometry;
pub mod pcr;
pub mod pcs;
pub mod propagation;
pub mod qual;
pub mod oracle;
pub mod real;
pub mod sim;
pub mod verify;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use pcr::{Pcr, PocQuotient};
pub use pcs::{complement, Lit, LitSet, Sigma, FALSE, TRUE};
pub use qual::{QualSnapshot, Rank, Ranking};
pub use real::{RealSnapshot, Schedule};

/// Real-valued snapshot over `f64`.
pub type RealSnapshotF64 = RealSnapshot<f64>;
/// Real-valued snapshot over `f32`.
pub type RealSnapshotF32 = RealSnapshot<f32>;
