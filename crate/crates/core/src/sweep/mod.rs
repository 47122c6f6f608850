//! Attractor detection, parameter sweeps and basin rasters.

mod basins;
mod scan;

pub use basins::*;
pub use scan::*;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::step;
use crate::model::{ModelParams, State};

/// Budgets and tolerances of the attractor classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub transient: usize,
    /// Length of the window over which a cycle must persist.
    pub detect: usize,
    pub max_period: usize,
    pub cycle_tol: f64,
    pub axis_tol: f64,
    /// Initial conditions as fractions `(a, b)` of `(K1, K2)`.
    pub ics: Vec<(f64, f64)>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            transient: 2000,
            detect: 400,
            max_period: 30,
            cycle_tol: 1e-8,
            axis_tol: 1e-6,
            ics: vec![(1.0, 1.0), (0.5, 0.6), (0.6, 0.5), (0.97, 0.31), (0.31, 0.97)],
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.max_period == 0 {
            return bad("max_period must be at least 1".into());
        }
        if self.detect < self.max_period {
            return bad(format!(
                "detection window {} shorter than max_period {}",
                self.detect, self.max_period
            ));
        }
        if !(self.cycle_tol > 0.0 && self.axis_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.ics.is_empty() {
            return bad("at least one initial condition is required".into());
        }
        for &(a, b) in &self.ics {
            if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
                return bad(format!("initial condition ({a}, {b}) must be non-negative"));
            }
            if !self.ics.iter().any(|&(c, d)| c == b && d == a) {
                return bad(format!("initial conditions not swap-closed: ({b}, {a}) missing"));
            }
        }
        Ok(())
    }
}

/// Classification of a parameter point by its attractors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttractorLabel {
    FixedOrigin,
    /// `(K1, 0)`.
    FixedAxis1,
    /// `(0, K2)`.
    FixedAxis2,
    InteriorCycle(usize),
    InteriorAperiodic,
}

impl AttractorLabel {
    pub fn is_interior(self) -> bool {
        matches!(self, AttractorLabel::InteriorCycle(_) | AttractorLabel::InteriorAperiodic)
    }

    /// Image under exchanging the two groups.
    pub fn swapped(self) -> Self {
        match self {
            AttractorLabel::FixedAxis1 => AttractorLabel::FixedAxis2,
            AttractorLabel::FixedAxis2 => AttractorLabel::FixedAxis1,
            l => l,
        }
    }
}

impl std::fmt::Display for AttractorLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AttractorLabel::FixedOrigin => write!(f, "origin"),
            AttractorLabel::FixedAxis1 => write!(f, "axis1"),
            AttractorLabel::FixedAxis2 => write!(f, "axis2"),
            AttractorLabel::InteriorCycle(n) => write!(f, "cycle{n}"),
            AttractorLabel::InteriorAperiodic => write!(f, "aperiodic"),
        }
    }
}

/// Fate of one orbit.
#[derive(Debug, Clone, PartialEq)]
pub enum IcOutcome {
    Origin,
    Axis1,
    Axis2,
    /// Minimal period and one turn of the cycle.
    Cycle(Vec<State>),
    /// No cycle up to `max_period`; the detection window.
    Aperiodic(Vec<State>),
}

impl IcOutcome {
    pub fn label(&self) -> AttractorLabel {
        match self {
            IcOutcome::Origin => AttractorLabel::FixedOrigin,
            IcOutcome::Axis1 => AttractorLabel::FixedAxis1,
            IcOutcome::Axis2 => AttractorLabel::FixedAxis2,
            IcOutcome::Cycle(c) => AttractorLabel::InteriorCycle(c.len()),
            IcOutcome::Aperiodic(_) => AttractorLabel::InteriorAperiodic,
        }
    }
}

/// Exact capture by an axis: once a coordinate is 0 it stays 0, and the
/// other one climbs to its constraint (or stays at 0).
#[inline]
pub(crate) fn axis_capture(s: State) -> Option<IcOutcome> {
    match (s.x1 == 0.0, s.x2 == 0.0) {
        (true, true) => Some(IcOutcome::Origin),
        (true, false) => Some(IcOutcome::Axis2),
        (false, true) => Some(IcOutcome::Axis1),
        _ => None,
    }
}

fn near_axis_point(p: &ModelParams, s: State, tol: f64) -> Option<IcOutcome> {
    if s.dist_inf(State::ORIGIN) < tol {
        Some(IcOutcome::Origin)
    } else if s.dist_inf(State::new(p.k1, 0.0)) < tol {
        Some(IcOutcome::Axis1)
    } else if s.dist_inf(State::new(0.0, p.k2)) < tol {
        Some(IcOutcome::Axis2)
    } else {
        None
    }
}

/// Follow one orbit from `s` and classify where it ends up.
pub fn classify_orbit(p: &ModelParams, cfg: &ScanConfig, s: State) -> IcOutcome {
    let mut s = s;
    for _ in 0..cfg.transient {
        s = step(p, s);
        if let Some(o) = axis_capture(s) {
            return o;
        }
    }
    if let Some(o) = near_axis_point(p, s, cfg.axis_tol) {
        return o;
    }
    let len = cfg.detect + cfg.max_period;
    let mut w = Vec::with_capacity(len + 1);
    w.push(s);
    for _ in 0..len {
        s = step(p, s);
        if let Some(o) = axis_capture(s) {
            return o;
        }
        w.push(s);
    }
    if let Some(o) = near_axis_point(p, s, cfg.axis_tol) {
        return o;
    }
    let period = (1..=cfg.max_period).find(|&n| {
        (0..cfg.detect).all(|t| w[t + n].dist_inf(w[t]) < cfg.cycle_tol)
    });
    match period {
        Some(n) => IcOutcome::Cycle(w[cfg.detect..cfg.detect + n].to_vec()),
        None => {
            w.truncate(cfg.detect);
            IcOutcome::Aperiodic(w)
        }
    }
}

/// Label of a parameter point together with the per-IC outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub label: AttractorLabel,
    pub outcomes: Vec<IcOutcome>,
}

impl ScanResult {
    /// Witness states of the attractor that decided the label.
    pub fn witnesses(&self, p: &ModelParams) -> Vec<State> {
        match self.label {
            AttractorLabel::FixedOrigin => vec![State::ORIGIN],
            AttractorLabel::FixedAxis1 => vec![State::new(p.k1, 0.0)],
            AttractorLabel::FixedAxis2 => vec![State::new(0.0, p.k2)],
            l => self
                .outcomes
                .iter()
                .find(|o| o.label() == l)
                .map(|o| match o {
                    IcOutcome::Cycle(w) | IcOutcome::Aperiodic(w) => w.clone(),
                    _ => Vec::new(),
                })
                .unwrap_or_default(),
        }
    }
}

/// Classify the attractors reached from the configured initial conditions.
///
/// Interior attractors take precedence, smallest period first, then
/// aperiodic ones. Without any interior attractor the most frequent axis
/// outcome wins; a tie between the two axes goes to the group with the larger
/// constraint, and for equal constraints to the outcome of the last tied IC.
pub fn attractor_scan(p: &ModelParams, cfg: &ScanConfig) -> Result<ScanResult> {
    p.validate()?;
    cfg.validate()?;
    Ok(scan_unchecked(p, cfg))
}

pub(crate) fn scan_unchecked(p: &ModelParams, cfg: &ScanConfig) -> ScanResult {
    let outcomes: Vec<IcOutcome> = cfg
        .ics
        .iter()
        .map(|&(a, b)| classify_orbit(p, cfg, State::new(a * p.k1, b * p.k2)))
        .collect();
    let label = choose_label(p, &outcomes);
    ScanResult { label, outcomes }
}

fn choose_label(p: &ModelParams, outcomes: &[IcOutcome]) -> AttractorLabel {
    let labels: Vec<AttractorLabel> = outcomes.iter().map(IcOutcome::label).collect();
    if let Some(n) = labels
        .iter()
        .filter_map(|l| match l {
            AttractorLabel::InteriorCycle(n) => Some(*n),
            _ => None,
        })
        .min()
    {
        return AttractorLabel::InteriorCycle(n);
    }
    if labels.contains(&AttractorLabel::InteriorAperiodic) {
        return AttractorLabel::InteriorAperiodic;
    }
    let count = |l: AttractorLabel| labels.iter().filter(|&&x| x == l).count();
    let cands = [
        AttractorLabel::FixedOrigin,
        AttractorLabel::FixedAxis1,
        AttractorLabel::FixedAxis2,
    ];
    let best = cands.iter().map(|&l| count(l)).max().unwrap_or(0);
    let tied: Vec<AttractorLabel> = cands.into_iter().filter(|&l| count(l) == best).collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let axes_only = tied.len() == 2 && !tied.contains(&AttractorLabel::FixedOrigin);
    if axes_only && p.k1 > p.k2 {
        return AttractorLabel::FixedAxis1;
    }
    if axes_only && p.k2 > p.k1 {
        return AttractorLabel::FixedAxis2;
    }
    labels
        .iter()
        .rev()
        .find(|l| tied.contains(l))
        .copied()
        .unwrap_or(AttractorLabel::FixedOrigin)
}

/// Evaluate `f(0..n)` on a pool of `threads` workers (0: all cores). Output
/// order is the index order, whatever the scheduling.
pub fn run_indexed<T, F>(n: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(k: f64) -> AttractorLabel {
        attractor_scan(&ModelParams::symmetric(k), &ScanConfig::default()).unwrap().label
    }

    #[test]
    fn diagonal_cascade() {
        assert_eq!(label(1.0), AttractorLabel::InteriorCycle(1));
        assert_eq!(label(1.2), AttractorLabel::InteriorCycle(2));
        assert_eq!(label(1.26), AttractorLabel::InteriorCycle(4));
        assert_eq!(label(1.2895), AttractorLabel::InteriorCycle(3));
        assert!(!label(1.4).is_interior());
    }

    #[test]
    fn two_cycle_points() {
        let r = attractor_scan(&ModelParams::symmetric(1.2), &ScanConfig::default()).unwrap();
        let w = r.witnesses(&ModelParams::symmetric(1.2));
        assert_eq!(w.len(), 2);
        let mut xs: Vec<f64> = w.iter().map(|s| s.x1).collect();
        xs.sort_by(f64::total_cmp);
        assert!((xs[0] - 0.912).abs() < 1e-9 && (xs[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let mut c = ScanConfig::default();
        c.ics = vec![(0.5, 0.6)];
        assert!(c.validate().is_err());
        let mut c = ScanConfig::default();
        c.cycle_tol = 0.0;
        assert!(c.validate().is_err());
        assert!(ScanConfig::default().validate().is_ok());
    }

    #[test]
    fn axis_capture_is_exact() {
        assert_eq!(axis_capture(State::new(0.0, 0.3)), Some(IcOutcome::Axis2));
        assert_eq!(axis_capture(State::new(0.3, 0.0)), Some(IcOutcome::Axis1));
        assert_eq!(axis_capture(State::ORIGIN), Some(IcOutcome::Origin));
        assert_eq!(axis_capture(State::new(0.3, 0.3)), None);
    }

    #[test]
    fn run_indexed_keeps_order() {
        let v = run_indexed(100, 3, |i| i * i).unwrap();
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
