use std::collections::HashMap;

use super::{axis_capture, classify_orbit, near_axis_point, run_indexed, AttractorLabel, IcOutcome, ScanConfig};
use crate::error::{Error, Result};
use crate::map::step;
use crate::model::{ModelParams, State, Window};

/// Which attractor a pixel's orbit approaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasinLabel {
    Origin,
    Axis1,
    Axis2,
    /// Index among the interior attractors of the legend.
    Interior(u16),
    /// Budget exhausted without a match.
    Unresolved,
}

impl std::fmt::Display for BasinLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasinLabel::Origin => write!(f, "origin"),
            BasinLabel::Axis1 => write!(f, "axis1"),
            BasinLabel::Axis2 => write!(f, "axis2"),
            BasinLabel::Interior(i) => write!(f, "interior{i}"),
            BasinLabel::Unresolved => write!(f, "unresolved"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub label: BasinLabel,
    pub attractor: AttractorLabel,
    /// Points of the attractor; a long orbit sample for aperiodic ones.
    pub points: Vec<State>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinRaster {
    pub window: Window,
    pub resolution: usize,
    /// Row-major, row `j` at the `j`-th smallest `x2`.
    pub labels: Vec<BasinLabel>,
    pub legend: Vec<LegendEntry>,
}

impl BasinRaster {
    pub fn get(&self, i: usize, j: usize) -> BasinLabel {
        self.labels[j * self.resolution + i]
    }

    pub fn count(&self, l: BasinLabel) -> usize {
        self.labels.iter().filter(|&&x| x == l).count()
    }

    /// Labels occurring in the raster, sorted.
    pub fn distinct(&self) -> Vec<BasinLabel> {
        let mut v = self.labels.clone();
        v.sort();
        v.dedup();
        v
    }
}

/// Witness matching radius in the sup norm.
pub const MATCH_RADIUS: f64 = 1e-4;
/// Orbit length sampled to represent an aperiodic attractor.
pub const APERIODIC_WITNESS: usize = 20_000;

/// Points of the interior attractors bucketed on a grid of side
/// `MATCH_RADIUS`; each point is stored in every bucket its radius touches,
/// so a query reads a single bucket.
struct WitnessIndex {
    cells: HashMap<(i64, i64), Vec<(u16, State)>>,
}

impl WitnessIndex {
    fn key(x: f64, y: f64) -> (i64, i64) {
        ((x / MATCH_RADIUS).floor() as i64, (y / MATCH_RADIUS).floor() as i64)
    }

    fn new() -> Self {
        WitnessIndex { cells: HashMap::new() }
    }

    fn insert(&mut self, id: u16, s: State) {
        let (a, b) = Self::key(s.x1 - MATCH_RADIUS, s.x2 - MATCH_RADIUS);
        let (c, d) = Self::key(s.x1 + MATCH_RADIUS, s.x2 + MATCH_RADIUS);
        for i in a..=c {
            for j in b..=d {
                self.cells.entry((i, j)).or_default().push((id, s));
            }
        }
    }

    fn find(&self, s: State) -> Option<u16> {
        self.cells
            .get(&Self::key(s.x1, s.x2))?
            .iter()
            .find(|(_, w)| w.dist_inf(s) < MATCH_RADIUS)
            .map(|(id, _)| *id)
    }
}

fn witness_points(p: &ModelParams, o: &IcOutcome) -> Option<Vec<State>> {
    match o {
        IcOutcome::Cycle(c) => Some(c.clone()),
        IcOutcome::Aperiodic(w) => {
            let mut s = *w.last()?;
            let mut pts = Vec::with_capacity(APERIODIC_WITNESS);
            for _ in 0..APERIODIC_WITNESS {
                s = step(p, s);
                if axis_capture(s).is_some() {
                    return None;
                }
                pts.push(s);
            }
            Some(pts)
        }
        _ => None,
    }
}

/// Identify the attractors reached from the corner and the configured
/// initial conditions.
fn seed_legend(p: &ModelParams, cfg: &ScanConfig) -> (Vec<LegendEntry>, WitnessIndex) {
    let mut legend = vec![
        LegendEntry {
            label: BasinLabel::Origin,
            attractor: AttractorLabel::FixedOrigin,
            points: vec![State::ORIGIN],
        },
        LegendEntry {
            label: BasinLabel::Axis1,
            attractor: AttractorLabel::FixedAxis1,
            points: vec![State::new(p.k1, 0.0)],
        },
        LegendEntry {
            label: BasinLabel::Axis2,
            attractor: AttractorLabel::FixedAxis2,
            points: vec![State::new(0.0, p.k2)],
        },
    ];
    let mut index = WitnessIndex::new();
    let mut next: u16 = 0;
    let seeds = std::iter::once(State::new(p.k1, p.k2))
        .chain(cfg.ics.iter().map(|&(a, b)| State::new(a * p.k1, b * p.k2)));
    for seed in seeds {
        let o = classify_orbit(p, cfg, seed);
        let Some(points) = witness_points(p, &o) else { continue };
        if points.iter().any(|&s| index.find(s).is_some()) {
            continue;
        }
        for &s in &points {
            index.insert(next, s);
        }
        legend.push(LegendEntry {
            label: BasinLabel::Interior(next),
            attractor: o.label(),
            points,
        });
        next += 1;
    }
    (legend, index)
}

fn classify_pixel(p: &ModelParams, cfg: &ScanConfig, index: &WitnessIndex, mut s: State) -> BasinLabel {
    let to_basin = |o: IcOutcome| match o {
        IcOutcome::Origin => BasinLabel::Origin,
        IcOutcome::Axis1 => BasinLabel::Axis1,
        _ => BasinLabel::Axis2,
    };
    for _ in 0..cfg.transient + cfg.detect {
        s = step(p, s);
        if let Some(o) = axis_capture(s) {
            return to_basin(o);
        }
        if let Some(id) = index.find(s) {
            return BasinLabel::Interior(id);
        }
    }
    near_axis_point(p, s, cfg.axis_tol).map_or(BasinLabel::Unresolved, to_basin)
}

/// Basin of attraction raster over `window`, one orbit per cell centre.
pub fn basins(
    p: &ModelParams,
    window: &Window,
    resolution: usize,
    cfg: &ScanConfig,
    threads: usize,
) -> Result<BasinRaster> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    p.validate()?;
    cfg.validate()?;
    window.validate()?;
    let (legend, index) = seed_legend(p, cfg);
    let labels = run_indexed(resolution * resolution, threads, |idx| {
        let (x, y) = window.cell_center(idx % resolution, idx / resolution, resolution);
        classify_pixel(p, cfg, &index, State::new(x, y))
    })?;
    Ok(BasinRaster { window: *window, resolution, labels, legend })
}

/// Classify a single point the way [`basins`] classifies a pixel.
pub fn basin_of(p: &ModelParams, cfg: &ScanConfig, raster: &BasinRaster, s: State) -> BasinLabel {
    let mut index = WitnessIndex::new();
    for e in &raster.legend {
        if let BasinLabel::Interior(id) = e.label {
            for &w in &e.points {
                index.insert(id, w);
            }
        }
    }
    classify_pixel(p, cfg, &index, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superstable_corner_basin_present_then_gone() {
        let cfg = ScanConfig::default();
        let w = Window::default();
        let r = basins(&ModelParams::canonical(0.4, 1.1), &w, 60, &cfg, 1).unwrap();
        assert!(r.distinct().contains(&BasinLabel::Interior(0)));
        let r = basins(&ModelParams::canonical(0.4, 1.2), &w, 60, &cfg, 1).unwrap();
        assert!(r.distinct().iter().all(|l| !matches!(l, BasinLabel::Interior(_))));
    }

    #[test]
    fn index_matches_within_radius() {
        let mut ix = WitnessIndex::new();
        ix.insert(3, State::new(0.5, 0.5));
        assert_eq!(ix.find(State::new(0.50009, 0.49991)), Some(3));
        assert_eq!(ix.find(State::new(0.5002, 0.5)), None);
    }
}
