//! Random groves on the cube recurrence, domino tilings of Aztec diamonds,
//! exact edge-probability generating functions and frozen-boundary checks.

pub mod arctic;
pub mod aztec;
pub mod dsu;
pub mod error;
pub mod grove;
pub mod lattice;
pub mod rates;
pub mod recurrence_poly;
pub mod shuffle;
pub mod structures;

pub use error::{Error, Result};
pub use grove::Grove;
pub use lattice::{EdgeLabel, Family, Order, TriangleId, VertexCoord};
pub use shuffle::{Bias, RandomSource};
