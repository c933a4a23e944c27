//! Minimum-norm points in polytopes by Wolfe's algorithm, and exact
//! minimization of submodular functions through the Fujishige–Wolfe method.
//!
//! The pieces, bottom up:
//!
//! - [`oracle`]: set functions and the normalized, counting evaluation oracle.
//! - [`polytope`]: linear optimization oracles, with the greedy oracle for
//!   base polytopes.
//! - [`affine`]: minimum-norm point of an affine hull, from scratch or
//!   maintained incrementally.
//! - [`wolfe`]: the min-norm-point solver with its iteration trace.
//! - [`sfm`]: rounding, certificates and the minimization driver.
//! - [`functions`], [`graph`], [`instance`]: test and benchmark families and
//!   their file format.
//! - [`verify`], [`maxflow`]: exhaustive and independent ground truth.
//!
//! ```
//! use fwsfm::functions::iwata_oracle;
//! use fwsfm::sfm::{minimize, SfmOptions};
//!
//! let f = iwata_oracle(8).unwrap();
//! let res = minimize(&f, &SfmOptions::default()).unwrap();
//! assert!(res.is_certified_exact());
//! ```

pub mod affine;
pub mod error;
pub mod functions;
pub mod graph;
pub mod instance;
mod linalg;
pub mod maxflow;
pub mod oracle;
pub mod parallel;
pub mod polytope;
pub mod sfm;
pub mod verify;
pub mod wolfe;

pub use error::{Error, Result};
pub use linalg::{dot, norm_sq};
pub use oracle::{SetFunction, SubmodularOracle};
pub use polytope::{LinearOracle, Vertex};
pub use sfm::{minimize, SfmOptions, SfmResult};
