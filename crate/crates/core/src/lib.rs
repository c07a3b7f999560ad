//! Steiner minimal trees in Gromov–Hausdorff space for boundary sets of
//! finite metric spaces.
//!
//! The pieces, bottom-up:
//!
//! - [`metric`]: finite (pseudo)metric spaces, validation, quotients.
//! - [`correspondence`]: relations, distortion, exact optimal correspondences.
//! - [`gh`]: exact GH distance, the diameter bound, the GH minimum spanning tree.
//! - [`topology`]: full and degenerate Steiner topologies with canonical forms.
//! - [`lp`]: the linear program placing Steiner spaces for fixed correspondences.
//! - [`solver`]: bounds, alternating minimization, thread pruning, multi-start.
//! - [`io`] and [`cli`]: JSON and DOT formats and the command-line front end.

pub mod cli;
pub mod correspondence;
pub mod error;
pub mod gh;
pub mod io;
pub mod lp;
pub mod metric;
pub mod solver;
pub mod topology;

pub use correspondence::{distortion, optimal_correspondence, Correspondence, CorrespondenceSearch, Relation};
pub use error::{Error, Result, ValidationError, Violation};
pub use gh::{diameter_lower_bound, gh_distance, gh_mst, GhResult};
pub use metric::{diameter, quotient, validate, DistanceMatrix, FiniteMetricSpace, PseudometricSpace};
pub use solver::{compute_bounds, solve, Bounds, SolveConfig, SolveReport, SteinerTree};
pub use topology::{canonical_form, enumerate_topologies, SteinerTopology, TopologyMode};
