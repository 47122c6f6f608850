use super::{run_indexed, scan_unchecked, AttractorLabel, ScanConfig};
use crate::error::{Error, Result};
use crate::map::step;
use crate::model::{ModelParams, State, Window};

/// Attractor labels over a grid of `(K1, K2)` cell centres.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodGrid {
    pub k1_range: (f64, f64),
    pub k2_range: (f64, f64),
    pub resolution: usize,
    /// Row-major, row `j` at the `j`-th smallest `K2`, column `i` along `K1`.
    pub labels: Vec<AttractorLabel>,
}

impl PeriodGrid {
    pub fn window(&self) -> Window {
        Window::new(self.k1_range.0, self.k1_range.1, self.k2_range.0, self.k2_range.1)
    }

    pub fn get(&self, i: usize, j: usize) -> AttractorLabel {
        self.labels[j * self.resolution + i]
    }

    /// `(K1, K2)` at the centre of cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        self.window().cell_center(i, j, self.resolution)
    }

    /// Label of the cell containing `(k1, k2)`.
    pub fn at(&self, k1: f64, k2: f64) -> AttractorLabel {
        let (i, j) = self.window().cell_of(k1, k2, self.resolution);
        self.get(i, j)
    }

    /// Fraction of cells whose label equals the swap image of the label of
    /// the mirrored cell. Meaningful for equal ranges.
    pub fn swap_agreement(&self) -> f64 {
        let n = self.resolution;
        let ok = (0..n)
            .flat_map(|j| (0..n).map(move |i| (i, j)))
            .filter(|&(i, j)| self.get(i, j) == self.get(j, i).swapped())
            .count();
        ok as f64 / (n * n) as f64
    }
}

fn check_k_range(r: (f64, f64), n: f64, what: &str) -> Result<()> {
    if !(r.0 >= 0.0 && r.0 < r.1 && r.1 <= n) {
        return Err(Error::InvalidConfig(format!(
            "{what} range [{}, {}] must lie in [0, {n}]",
            r.0, r.1
        )));
    }
    Ok(())
}

/// Attractor scan at every cell centre of a `resolution x resolution` grid.
/// The result does not depend on `threads`.
pub fn sweep2d(
    template: &ModelParams,
    k1_range: (f64, f64),
    k2_range: (f64, f64),
    resolution: usize,
    cfg: &ScanConfig,
    threads: usize,
) -> Result<PeriodGrid> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    template.validate()?;
    cfg.validate()?;
    check_k_range(k1_range, template.n1, "K1")?;
    check_k_range(k2_range, template.n2, "K2")?;
    let w = Window::new(k1_range.0, k1_range.1, k2_range.0, k2_range.1);
    let labels = run_indexed(resolution * resolution, threads, |idx| {
        let (k1, k2) = w.cell_center(idx % resolution, idx / resolution, resolution);
        scan_unchecked(&template.with_k(k1, k2), cfg).label
    })?;
    Ok(PeriodGrid { k1_range, k2_range, resolution, labels })
}

/// A segment in the constraint plane along which one constraint varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Path1D {
    /// `K1` runs over the range, `K2` fixed.
    VaryK1 { k2: f64, range: (f64, f64) },
    /// `K2` runs over the range, `K1` fixed.
    VaryK2 { k1: f64, range: (f64, f64) },
}

impl Path1D {
    fn params(&self, template: &ModelParams, v: f64) -> ModelParams {
        match *self {
            Path1D::VaryK1 { k2, .. } => template.with_k(v, k2),
            Path1D::VaryK2 { k1, .. } => template.with_k(k1, v),
        }
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            Path1D::VaryK1 { range, .. } | Path1D::VaryK2 { range, .. } => range,
        }
    }

    /// The coordinate plotted against the parameter: the one whose
    /// constraint is held fixed.
    pub fn observed(&self, s: State) -> f64 {
        match self {
            Path1D::VaryK1 { .. } => s.x2,
            Path1D::VaryK2 { .. } => s.x1,
        }
    }
}

/// One vertical slice of a 1-D bifurcation diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice1D {
    pub param: f64,
    pub label: AttractorLabel,
    pub witnesses: Vec<State>,
    /// Period of the corner `(K1, K2)` when its orbit returns to it exactly,
    /// i.e. when a superstable cycle passes through the corner.
    pub corner_period: Option<usize>,
}

/// Step budget for the corner return test.
pub const CORNER_BUDGET: usize = 100_000;

/// Smallest `n >= 1` with `T^n(P) = P` exactly for the corner `P`, within
/// [`CORNER_BUDGET`] steps.
pub fn corner_period(p: &ModelParams) -> Option<usize> {
    let corner = State::new(p.k1, p.k2);
    let mut s = corner;
    for n in 1..=CORNER_BUDGET {
        s = step(p, s);
        if s == corner {
            return Some(n);
        }
        if s.x1 == 0.0 || s.x2 == 0.0 {
            return None;
        }
    }
    None
}

/// Attractor scan at `resolution` equally spaced points of a path, endpoints
/// included.
pub fn sweep1d(
    template: &ModelParams,
    path: Path1D,
    resolution: usize,
    cfg: &ScanConfig,
    threads: usize,
) -> Result<Vec<Slice1D>> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    template.validate()?;
    cfg.validate()?;
    let (lo, hi) = path.range();
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("empty path range [{lo}, {hi}]")));
    }
    path.params(template, lo).validate()?;
    path.params(template, hi).validate()?;
    let last = (resolution - 1) as f64;
    run_indexed(resolution, threads, |i| {
        let v = lo + (hi - lo) * i as f64 / last;
        let p = path.params(template, v);
        let r = scan_unchecked(&p, cfg);
        Slice1D {
            param: v,
            label: r.label,
            witnesses: r.witnesses(&p),
            corner_period: corner_period(&p),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_periods() {
        assert_eq!(corner_period(&ModelParams::symmetric(1.0)), Some(1));
        assert_eq!(corner_period(&ModelParams::symmetric(1.2)), Some(2));
        assert_eq!(corner_period(&ModelParams::symmetric(1.4)), None);
    }

    #[test]
    fn small_grid_is_thread_independent() {
        let p = ModelParams::symmetric(1.0);
        let cfg = ScanConfig::default();
        let a = sweep2d(&p, (0.8, 1.4), (0.8, 1.4), 8, &cfg, 1).unwrap();
        let b = sweep2d(&p, (0.8, 1.4), (0.8, 1.4), 8, &cfg, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.at(1.0, 1.0), AttractorLabel::InteriorCycle(1));
    }

    #[test]
    fn path_j3_endpoints() {
        let p = ModelParams::symmetric(1.0);
        let path = Path1D::VaryK2 { k1: 1.0, range: (1.16, 1.2) };
        let s = sweep1d(&p, path, 2, &ScanConfig::default(), 1).unwrap();
        assert_eq!(s[0].label, AttractorLabel::InteriorCycle(1));
        assert_eq!(s[1].label, AttractorLabel::InteriorCycle(2));
    }

    #[test]
    fn rejects_out_of_range() {
        let p = ModelParams::symmetric(1.0);
        let cfg = ScanConfig::default();
        assert!(sweep2d(&p, (0.0, 1.6), (0.0, 1.5), 4, &cfg, 1).is_err());
        assert!(sweep2d(&p, (0.0, 1.5), (0.0, 1.5), 1, &cfg, 1).is_err());
    }
}
