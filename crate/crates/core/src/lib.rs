//! Image dataset disguising.
//!
//! Images are cut into blocks, each block is mixed by a secret random matrix
//! after additive noise, and the blocks are shuffled by a secret permutation.
//! Models can still be trained on the disguised images while the pictures
//! themselves become unrecognisable. The crate also carries the tools to
//! measure how well that works: keyspace accounting, a nearest-neighbour
//! examiner for visual re-identification, and a Fano-factor class-membership
//! test.

pub mod attack_eval;
mod codec;
pub mod dataset_io;
pub mod error;
pub mod image;
pub mod keygen;
pub mod keyspace;
pub mod matrix;
mod parallel;
pub mod permutation;
pub mod rng;
pub mod transform;

pub use error::{Error, ErrorClass, Result};
pub use image::{BlockGrid, Geometry, ImageTensor, LabeledDataset, Space};
pub use keygen::{DisguiseKey, KeySpec, MatrixKind};
pub use permutation::Permutation;
