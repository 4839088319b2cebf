//! Egocentric network motif profiling over user/video comment networks.
//!
//! The pipeline turns a log of user-to-video comments into a two-colored
//! undirected network (user and video nodes, weighted user-video edges,
//! similarity-based user-user edges), extracts a k-neighbourhood egocentric
//! network for every user, enumerates connected colored subgraphs of sizes
//! 3 to 5, and converts the per-ego motif counts into normalized ratio
//! profiles that can be spatialized with PCA or ranked by information gain
//! to find motifs that discriminate spam-campaign accounts from regular
//! users. A synthetic-log generator and a windowed pipeline driver sit on
//! top so the whole process can be exercised end to end.

pub mod ingest;
pub mod motif;
pub mod netgen;
pub mod num;
pub mod pipeline;
pub mod profile;
pub mod select;
pub mod synth;

pub use num::Real;

/// Scalar used by the command-line pipeline.
pub type Scalar = f64;

/// Ratio/normalized-ratio profiles at the default scalar.
pub type RatioProfiles64 = profile::RatioProfiles<f64>;
/// PCA spatialization at the default scalar.
pub type Spatialization64 = profile::Spatialization<f64>;
/// Labeled training sample at the default scalar.
pub type LabeledSample64 = select::LabeledSample<f64>;
/// Information-gain ranking at the default scalar.
pub type RankedMotifs64 = select::RankedMotifs<f64>;
