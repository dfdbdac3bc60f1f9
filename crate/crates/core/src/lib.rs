//! Exact-arithmetic toolkit for finite p-group structure, commutator
//! symplectic forms, minimal monomial representations, Clifford 2-groups,
//! essential-dimension bounds, and Witt-ring computations over the
//! rationals.
//!
//! Everything is integer or square-class arithmetic; there is no floating
//! point anywhere in the crate. All values are immutable after construction
//! and safe to share across threads; the bulk sweeps parallelise via the
//! `parallel` feature (on by default).

pub mod exec;
pub mod clifford;
pub mod group;
pub mod repmin;
pub mod symplectic;
pub mod util;
pub mod witt;

pub use group::{FiniteGroup, GroupError, Subgroup};
