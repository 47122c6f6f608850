//! Constrained two-population segregation map: evaluation, 1-D restrictions,
//! equilibria, border-collision curves, attractor sweeps and file output.
//!
//! ```
//! use segmap::{step, ModelParams, State};
//!
//! let p = ModelParams::symmetric(1.2);
//! let s = step(&p, State::new(1.2, 1.2));
//! assert!((s.x1 - 0.912).abs() < 1e-12 && s.x1 == s.x2);
//! ```

pub mod bcb;
pub mod equilibria;
pub mod error;
pub mod io;
pub mod map;
pub mod model;
pub mod restrict;
pub mod roots;
pub mod sweep;

pub use error::{Error, Result};
pub use map::{eval_f, orbit, region_of, step, RegionId};
pub use model::{Group, ModelParams, State, Window};
