//! Configuration files, CSV tables and PPM rasters.

mod config;
mod raster;
mod table;

pub use config::*;
pub use raster::*;
pub use table::*;
