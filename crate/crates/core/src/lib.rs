//! SIC-POVM fiducial vectors from Stark units over real quadratic fields.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod lfun;
pub mod linalg;
pub mod num;
pub mod pipeline;
pub mod poly;
pub mod quadfield;
pub mod rayclass;
pub mod recognition;
pub mod sic;
pub mod signs;
pub mod special;

pub use error::{Error, Result};
