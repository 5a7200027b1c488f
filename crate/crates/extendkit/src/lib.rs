//! Extension of bounded real-valued functions from a finite sample of a
//! closed subset of a metric space to arbitrary query points.
//!
//! The crate implements the classical explicit extension formulas — the
//! Hausdorff infimum, the Tietze/Riesz supremum-of-weights family and its
//! Dieudonné dual, the split into positive and negative parts, Bohr's
//! integral of a step function, and the Pasch inf-convolution — together
//! with property suites that check the operator-level facts (isometry,
//! isotonicity, sublinearity, Lipschitz bounds) and reproduce the known
//! failure modes at desk scale.
//!
//! Organization:
//! - [`metric`]: points, distance oracles, point-cloud samples, the lattice
//!   of bounded functions.
//! - [`vptree`]: the optional acceleration index; behavior-identical to a
//!   linear scan.
//! - [`extenders`]: weight functions on Δ = {s ≥ t > 0} and their axiom
//!   validator.
//! - [`operators`]: the extension operators, each with a brute-force and a
//!   pruned evaluation path.
//! - [`verify`]: property reports, empirical moduli of continuity, and the
//!   counterexample demos.
//! - [`io`] and [`cli`]: the CSV/JSON formats and the batch front end.

pub mod error;
pub mod extenders;
pub mod metric;
pub mod operators;
pub mod vptree;

pub use error::{ExtendError, Result};
