//! Hyperspaces of convex polytopes under finite group actions.
//!
//! Bodies are compact convex polytopes in R^d ([`body::ConvexBody`]) with the
//! Euclidean Hausdorff metric and Minkowski algebra. On top of that:
//!
//! - [`group`]: finite groups acting by affine maps, and the induced action on bodies;
//! - [`radstrom`]: formal differences `<A, B>` forming a normed space into which
//!   bodies embed isometrically and equivariantly;
//! - [`extension`]: equivariant extension of maps from an invariant subset of a
//!   finite metric G-space into bodies (Dugundji weights plus group averaging);
//! - [`cantor`]: truncated Cantor groups acting on sup-normed function spaces, where
//!   the induced action on sets has an unbounded modulus;
//! - [`linearize`]: lifting an affine action to a linear block-permutation action;
//! - [`suite`] and [`scenario`]: deterministic verification suites and the
//!   JSON-reporting scenario runner behind the CLI.

pub mod body;
pub mod cantor;
pub mod catalog;
pub mod error;
pub mod extension;
pub mod group;
pub mod io;
pub mod linearize;
pub mod nearest;
pub mod problems;
pub mod radstrom;
pub mod scenario;
pub mod suite;
pub mod vector;

pub use body::{hausdorff, hull, minkowski_sum, ConvexBody, FamilyTag};
pub use error::{Error, Result};
pub use group::{build_group, GroupAction, GroupElement};
