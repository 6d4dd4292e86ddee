//! Multidimensional binary vector assignment.
//!
//! `m` sets of `n` binary vectors of dimension `p` are partitioned into `n`
//! stacks, each holding one vector from every set. A stack is worth the
//! component-wise AND of its vectors, and a solution costs the total number
//! of zeros over all stacks.

pub mod bench;
pub mod bits;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod instance;
pub mod oct;
pub mod preprocess;
pub mod reductions;
pub mod solvers;

pub use bits::BitVec;
pub use error::{Error, Result};
pub use format::{parse_instance, serialize_instance};
pub use instance::{and_fold, cost, derive_params, evaluate, Assignment, CostedSolution, Instance, Params};
