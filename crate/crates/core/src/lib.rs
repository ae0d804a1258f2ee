//! Density peaks clustering with a k-d tree and sparse separation search.
//!
//! The pipeline replaces the full pairwise distance matrix of classic density
//! peaks clustering with two accelerations:
//!
//! - local density is the reciprocal of the summed distances to the exact `k`
//!   nearest neighbours, found with a k-d tree ([`kdtree`]);
//! - relative separation is read from the intersection of a point's
//!   neighbourhood with the set of denser points whenever that intersection is
//!   non-empty, and only falls back to extra distance evaluations otherwise
//!   ([`dpc::separation`]).
//!
//! Cluster centres are picked without user input from the second-order
//! differences of the sorted decision values ([`dpc::centers`]).
//!
//! ```
//! use sktdpc::{dataset::{generate_gaussian_blobs, BlobSpec}, run_sktdpc};
//!
//! let data = generate_gaussian_blobs(&BlobSpec {
//!     centers: vec![vec![0.0, 0.0], vec![12.0, 0.0]],
//!     spreads: vec![1.0],
//!     points_per_cluster: 150,
//!     seed: 7,
//! })
//! .unwrap();
//! let result = run_sktdpc(&data, 5).unwrap();
//! assert_eq!(result.centers.len(), 2);
//! ```

pub mod baseline;
pub mod dataset;
pub mod dpc;
mod error;
pub mod kdtree;
pub mod metrics;
pub mod plot;
pub mod sparse;

pub use dataset::Dataset;
pub use dpc::{run_sktdpc, run_sktdpc_with, ClusteringResult, DpcProfile, SktdpcOptions};
pub use error::{Error, Result};
pub use kdtree::{KdTree, Neighbor, NeighborSet};
pub use sparse::SparseDistanceMatrix;
