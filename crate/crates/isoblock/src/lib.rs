//! Compression of block-constant ("isogenic") matrices.
//!
//! A square matrix whose entries are constant on the blocks of a partition
//! can be collapsed to one entry per block pair, worked on at the compressed
//! scale, and inflated back without loss. This crate provides the partition
//! lattice, detection of the coarsest valid partition (also for orbits of
//! the groups `{±1}`, `S¹` and `ℂˣ` instead of exact constancy), the
//! compression/inflation operators and their weighted variants, and the
//! spectral, positivity and matrix-equation machinery that rides on them.

pub mod detect;
pub mod error;
pub mod matrix;
pub mod partition;
pub mod transform;

pub use detect::{detect_rect, detect_square, detect_symmetric_model, membership, orbit_equal, Group, GroupSpec, StratifiedMatrix};
pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector};
pub use partition::Partition;
pub use transform::{algebra_unit, ccdown_matrix, ccdown_vec, ccup_matrix, ccup_vec, conditional_expectation, down_matrix, down_vec, up_matrix, up_vec, CompressedMatrix};
