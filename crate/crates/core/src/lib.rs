//! Exact computations in the Roger-Yang skein algebra of the twice-punctured
//! annulus, its map onto the skein algebra of the closed torus, bracelet
//! curve bases, and numeric root-of-unity representations.

pub mod coeff;
pub mod curves;
pub mod error;
pub mod expr;
pub mod freealg;
pub mod pts;
pub mod reps;
pub mod torus;

pub use error::{Error, Result};
