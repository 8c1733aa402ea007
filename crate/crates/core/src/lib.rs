//! Sampling graphs with a fixed degree sequence.
//!
//! The crate has three layers:
//!
//! * [`graph`]: binary matrices, degree sequences, feasibility checks and
//!   realizations, and canonical forms under degree-preserving relabelling.
//! * [`chains`]: the switch and Curveball Markov chain kernels, the
//!   relabelling preprocessing step, and seeded chain runners.
//! * [`exact`]: exhaustive enumeration of small state spaces, exact
//!   transition matrices, projection onto isomorphism classes, mixing
//!   times and spectral gaps.
//!
//! ```
//! use degchain::graph::{DegreeSequence, GraphKind};
//! use degchain::exact::{enumerate, iso_partition, DEFAULT_STATE_CAP};
//!
//! let k = DegreeSequence::bipartite(vec![2; 4], vec![2; 4]).unwrap();
//! let space = enumerate(&k, DEFAULT_STATE_CAP).unwrap();
//! assert_eq!(space.len(), 90);
//! let classes = iso_partition(&space).unwrap();
//! assert_eq!(classes.class_sizes(), &[18, 72]);
//! # let _ = GraphKind::Bipartite;
//! ```

pub mod chains;
mod error;
pub mod exact;
pub mod graph;

pub use error::{Error, Result};
