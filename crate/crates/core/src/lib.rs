//! Continuous diameter of plane Euclidean networks and the shortcut segments
//! that reduce it.
//!
//! A network is viewed as its locus: every point on every edge. Distances are
//! shortest paths along the locus; the continuous diameter is the largest such
//! distance over all point pairs.

pub mod augment;
pub mod error;
pub mod fixtures;
pub mod gadgets;
pub mod geom;
pub mod metrics;
pub mod network;
pub mod random;
pub mod search;

pub use error::{Error, Result};
pub use geom::{Point, SegmentGeom, TAU};
pub use metrics::{continuous_diameter, DiameterReport, DistanceOracle};
pub use network::{LocusPoint, Network, ShortcutSet};
