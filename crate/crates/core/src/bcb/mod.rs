//! Border-collision bifurcation curves in the constraint plane, diagonal
//! thresholds, and cycles of the 1-D maps with their itineraries.

mod curves;
mod cycles;

pub use curves::*;
pub use cycles::*;
