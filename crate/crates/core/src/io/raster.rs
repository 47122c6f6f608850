use std::path::Path;

use crate::error::{Error, Result};
use crate::sweep::{AttractorLabel, BasinLabel, BasinRaster, PeriodGrid};

pub type Rgb = [u8; 3];

pub const AXIS1: Rgb = [0, 160, 0];
pub const AXIS2: Rgb = [120, 200, 255];
pub const ORIGIN: Rgb = [128, 128, 128];
pub const INTERIOR: Rgb = [200, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];
pub const UNRESOLVED: Rgb = [0, 0, 0];

/// Colours of further interior attractors in a basin raster, cycled.
pub const EXTRA_INTERIOR: [Rgb; 4] = [[0, 0, 200], [200, 0, 200], [255, 140, 0], [120, 60, 0]];

/// Colour of an interior cycle of period `n` is `PERIOD_PALETTE[n - 1]`.
pub const PERIOD_PALETTE: [Rgb; 30] = [
    [255, 220, 0],
    [255, 140, 0],
    [0, 90, 255],
    [220, 0, 220],
    [0, 200, 200],
    [140, 70, 20],
    [255, 105, 180],
    [100, 0, 160],
    [170, 255, 100],
    [0, 0, 130],
    [180, 180, 0],
    [255, 180, 120],
    [0, 120, 120],
    [150, 0, 60],
    [200, 160, 255],
    [90, 50, 0],
    [255, 60, 60],
    [60, 60, 200],
    [0, 255, 160],
    [255, 0, 120],
    [120, 120, 0],
    [100, 160, 220],
    [230, 200, 150],
    [60, 0, 0],
    [0, 60, 0],
    [0, 0, 60],
    [200, 100, 255],
    [255, 255, 150],
    [80, 200, 80],
    [160, 100, 100],
];

pub fn period_color(l: AttractorLabel) -> Rgb {
    match l {
        AttractorLabel::FixedOrigin => ORIGIN,
        AttractorLabel::FixedAxis1 => AXIS1,
        AttractorLabel::FixedAxis2 => AXIS2,
        AttractorLabel::InteriorCycle(n) if (1..=30).contains(&n) => PERIOD_PALETTE[n - 1],
        AttractorLabel::InteriorCycle(_) | AttractorLabel::InteriorAperiodic => WHITE,
    }
}

pub fn basin_color(l: BasinLabel) -> Rgb {
    match l {
        BasinLabel::Origin => ORIGIN,
        BasinLabel::Axis1 => AXIS1,
        BasinLabel::Axis2 => AXIS2,
        BasinLabel::Interior(0) => INTERIOR,
        BasinLabel::Interior(i) => EXTRA_INTERIOR[(i as usize - 1) % EXTRA_INTERIOR.len()],
        BasinLabel::Unresolved => UNRESOLVED,
    }
}

/// 8-bit RGB image, top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl RasterImage {
    /// Build from a bottom-up grid (row 0 at the smallest ordinate).
    fn from_bottom_up<T: Copy>(n: usize, cells: &[T], color: impl Fn(T) -> Rgb) -> Self {
        let pixels = (0..n)
            .rev()
            .flat_map(|j| cells[j * n..(j + 1) * n].iter().map(|&c| color(c)))
            .collect();
        RasterImage { width: n, height: n, pixels }
    }

    pub fn from_period_grid(g: &PeriodGrid) -> Self {
        Self::from_bottom_up(g.resolution, &g.labels, period_color)
    }

    pub fn from_basins(b: &BasinRaster) -> Self {
        Self::from_bottom_up(b.resolution, &b.labels, basin_color)
    }

    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }
}

pub fn emit_raster(img: &RasterImage, path: &Path) -> Result<()> {
    std::fs::write(path, img.to_ppm()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_is_distinct() {
        let mut all: Vec<Rgb> = PERIOD_PALETTE.to_vec();
        all.extend([AXIS1, AXIS2, ORIGIN, WHITE]);
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
    }

    #[test]
    fn period_one_is_yellow() {
        assert_eq!(period_color(AttractorLabel::InteriorCycle(1)), [255, 220, 0]);
        assert_eq!(period_color(AttractorLabel::InteriorCycle(31)), WHITE);
        assert_eq!(period_color(AttractorLabel::InteriorAperiodic), WHITE);
    }

    #[test]
    fn two_by_two_ppm() {
        let g = PeriodGrid {
            k1_range: (0.0, 1.0),
            k2_range: (0.0, 1.0),
            resolution: 2,
            labels: vec![
                AttractorLabel::FixedAxis1,
                AttractorLabel::FixedAxis2,
                AttractorLabel::InteriorCycle(1),
                AttractorLabel::FixedOrigin,
            ],
        };
        let b = RasterImage::from_period_grid(&g).to_ppm();
        assert_eq!(&b[..11], b"P6\n2 2\n255\n");
        assert_eq!(b.len(), 11 + 12);
        // top row is the larger K2
        assert_eq!(&b[11..14], &[255, 220, 0]);
        assert_eq!(&b[20..23], &AXIS2);
    }
}
