//! One-dimensional restrictions of `T` and first-return maps on the
//! constraint lines.
//!
//! The axes, the lines `x2 = K2` and `x1 = K1`, and (for fully symmetric
//! parameters) the diagonal are invariant or absorbing for `T`; on each of
//! them `T` acts as a clamped cubic `x [a + b x + c x^2]` with flat pieces at
//! 0 and at the constraint.

use crate::error::{Error, Result};
use crate::map::{clamp_to, f1, f2, f_component, step};
use crate::model::{ModelParams, State};
use crate::roots;

/// Which 1-D restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RestrictionTag {
    /// `T1(x1, 0)` on the `x1` axis.
    T1,
    /// `T2(0, x2)` on the `x2` axis.
    T2,
    /// `T1(x1, K2)` on the line `x2 = K2`.
    F1,
    /// `T2(K1, x2)` on the line `x1 = K1`.
    F2,
    /// `T` on the diagonal, fully symmetric parameters only.
    Diagonal,
}

impl RestrictionTag {
    pub fn name(self) -> &'static str {
        match self {
            RestrictionTag::T1 => "t1",
            RestrictionTag::T2 => "t2",
            RestrictionTag::F1 => "f1",
            RestrictionTag::F2 => "f2",
            RestrictionTag::Diagonal => "diag",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "t1" => RestrictionTag::T1,
            "t2" => RestrictionTag::T2,
            "f1" => RestrictionTag::F1,
            "f2" => RestrictionTag::F2,
            "diag" | "diagonal" => RestrictionTag::Diagonal,
            _ => return None,
        })
    }
}

/// Shape of one piece of a restriction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchKind {
    /// Constant 0.
    ZeroFlat,
    /// Constant equal to the constraint.
    KFlat,
    /// `x [a + b x + c x^2]`.
    SmoothCubic { a: f64, b: f64, c: f64 },
}

impl BranchKind {
    pub fn is_flat(&self) -> bool {
        !matches!(self, BranchKind::SmoothCubic { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub lo: f64,
    pub hi: f64,
    pub kind: BranchKind,
}

/// A clamped cubic restriction with its branch layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMap1D {
    tag: RestrictionTag,
    params: ModelParams,
    clamp: f64,
    domain: (f64, f64),
    branches: Vec<Branch>,
    borders: Vec<f64>,
}

/// Letter of a point in a symbolic itinerary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Strictly inside a flat branch.
    F,
    /// Increasing smooth branch.
    L,
    /// Decreasing smooth branch.
    R,
    /// Critical point of a smooth branch.
    C,
    /// Exactly on a border point.
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::F => 'F',
            Letter::L => 'L',
            Letter::R => 'R',
            Letter::C => 'C',
            Letter::B => 'B',
        }
    }
}

/// Common interface of the 1-D maps whose cycles we look for.
pub trait Map1D: Sync {
    fn domain(&self) -> (f64, f64);

    /// Image of `x`, or `None` where the map is undefined.
    fn apply(&self, x: f64) -> Option<f64>;

    /// Symbol of `x`; `None` where the map is undefined.
    fn letter(&self, x: f64) -> Option<Letter>;
}

impl PiecewiseMap1D {
    pub fn tag(&self) -> RestrictionTag {
        self.tag
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// The constraint the map is clamped to.
    pub fn clamp_level(&self) -> f64 {
        self.clamp
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn borders(&self) -> &[f64] {
        &self.borders
    }

    /// The cubic before clamping, evaluated exactly as `step` does.
    pub fn raw(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.tag {
            RestrictionTag::T1 => f1(p, x, 0.0),
            RestrictionTag::T2 => f2(p, 0.0, x),
            RestrictionTag::F1 => f1(p, x, p.k2),
            RestrictionTag::F2 => f2(p, p.k1, x),
            RestrictionTag::Diagonal => f_component(p.gamma1, p.tau1, p.n1, x, x),
        }
    }

    /// Coefficients `(a, b, c)` of the cubic `x [a + b x + c x^2]`.
    pub fn cubic_coefficients(&self) -> (f64, f64, f64) {
        let p = &self.params;
        let (g, t, n, other) = match self.tag {
            RestrictionTag::T1 => (p.gamma1, p.tau1, p.n1, 0.0),
            RestrictionTag::T2 => (p.gamma2, p.tau2, p.n2, 0.0),
            RestrictionTag::F1 => (p.gamma1, p.tau1, p.n1, p.k2),
            RestrictionTag::F2 => (p.gamma2, p.tau2, p.n2, p.k1),
            RestrictionTag::Diagonal => {
                return (1.0, p.gamma1 * (p.tau1 - 1.0), -p.gamma1 * p.tau1 / p.n1);
            }
        };
        (1.0 - g * other, g * t, -g * t / n)
    }

    /// Derivative of the unclamped cubic.
    pub fn raw_derivative(&self, x: f64) -> f64 {
        let (a, b, c) = self.cubic_coefficients();
        a + 2.0 * b * x + 3.0 * c * x * x
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain;
        if x.is_nan() || x < lo || x > hi {
            Err(Error::OutOfDomain { x, lo, hi })
        } else {
            Ok(())
        }
    }

    fn branch_index_left(&self, x: f64) -> usize {
        // first branch whose right end reaches x
        self.branches
            .partition_point(|b| b.hi < x)
            .min(self.branches.len() - 1)
    }

    fn branch_index_right(&self, x: f64) -> usize {
        // last branch whose left end is at or before x
        self.branches
            .partition_point(|b| b.lo <= x)
            .saturating_sub(1)
    }

    fn branch_slope(&self, idx: usize, x: f64) -> f64 {
        match self.branches[idx].kind {
            BranchKind::SmoothCubic { a, b, c } => a + 2.0 * b * x + 3.0 * c * x * x,
            _ => 0.0,
        }
    }
}

/// Build a restriction and resolve its branch layout on `[0, N]`.
pub fn build_restriction(p: &ModelParams, tag: RestrictionTag) -> Result<PiecewiseMap1D> {
    p.validate()?;
    let (clamp, n) = match tag {
        RestrictionTag::T1 | RestrictionTag::F1 => (p.k1, p.n1),
        RestrictionTag::T2 | RestrictionTag::F2 => (p.k2, p.n2),
        RestrictionTag::Diagonal => {
            if !p.is_fully_symmetric() {
                return Err(Error::NotSymmetric);
            }
            (p.k1, p.n1)
        }
    };
    let mut map = PiecewiseMap1D {
        tag,
        params: *p,
        clamp,
        domain: (0.0, n),
        branches: Vec::new(),
        borders: Vec::new(),
    };
    let (a, b, c) = map.cubic_coefficients();
    let (lo, hi) = map.domain;

    const SCAN: usize = 4096;
    let mut cuts: Vec<f64> = roots::roots_in(|x| map.raw(x), lo, hi, SCAN)
        .into_iter()
        .chain(roots::roots_in(|x| map.raw(x) - clamp, lo, hi, SCAN))
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);

    let classify = |x: f64| {
        let v = map.raw(x);
        if v <= 0.0 {
            BranchKind::ZeroFlat
        } else if v >= clamp {
            BranchKind::KFlat
        } else {
            BranchKind::SmoothCubic { a, b, c }
        }
    };
    let mut branches: Vec<Branch> = Vec::new();
    for w in edges.windows(2) {
        let kind = classify(0.5 * (w[0] + w[1]));
        match branches.last_mut() {
            Some(last) if last.kind == kind => last.hi = w[1],
            _ => branches.push(Branch { lo: w[0], hi: w[1], kind }),
        }
    }
    map.borders = branches.iter().skip(1).map(|b| b.lo).collect();
    map.branches = branches;
    Ok(map)
}

/// Value of the restriction at `x` and the index of the active branch.
pub fn eval_1d(map: &PiecewiseMap1D, x: f64) -> Result<(f64, usize)> {
    map.check_domain(x)?;
    Ok((clamp_to(map.raw(x), map.clamp), map.branch_index_left(x)))
}

/// One-sided derivatives `(left, right)`; 0 on flat branches. At the domain
/// ends both sides use the only branch present.
pub fn derivative_1d(map: &PiecewiseMap1D, x: f64) -> Result<(f64, f64)> {
    map.check_domain(x)?;
    let left = map.branch_slope(map.branch_index_left(x), x);
    let right = map.branch_slope(map.branch_index_right(x), x);
    Ok((left, right))
}

/// The interval where the map sits on its upper flat branch, if any.
pub fn flat_branch_interval(map: &PiecewiseMap1D) -> Option<(f64, f64)> {
    map.branches
        .iter()
        .find(|b| b.kind == BranchKind::KFlat)
        .map(|b| (b.lo, b.hi))
}

impl Map1D for PiecewiseMap1D {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn apply(&self, x: f64) -> Option<f64> {
        eval_1d(self, x).ok().map(|(v, _)| v)
    }

    fn letter(&self, x: f64) -> Option<Letter> {
        self.check_domain(x).ok()?;
        let v = self.raw(x);
        if (v == self.clamp || v == 0.0) && x > self.domain.0 {
            return Some(Letter::B);
        }
        if v > self.clamp || v < 0.0 || (v == 0.0 && self.raw_derivative(x) <= 0.0) {
            return Some(Letter::F);
        }
        let d = self.raw_derivative(x);
        Some(if d > 0.0 {
            Letter::L
        } else if d < 0.0 {
            Letter::R
        } else {
            Letter::C
        })
    }
}

/// Upper ends of the invariant segments on the two constraint lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineInvariantBounds {
    /// On `x2 = K2`: `K2 tau2 (1 - K2 / N2)`.
    pub x1m: f64,
    /// On `x1 = K1`: `K1 tau1 (1 - K1 / N1)`.
    pub x2m: f64,
}

pub fn line_invariant_bounds(p: &ModelParams) -> LineInvariantBounds {
    LineInvariantBounds {
        x1m: p.k2 * p.tau2 * (1.0 - p.k2 / p.n2),
        x2m: p.k1 * p.tau1 * (1.0 - p.k1 / p.n1),
    }
}

/// Section line of a return map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    /// `x2 = K2`, coordinate `x1`.
    X2EqK2,
    /// `x1 = K1`, coordinate `x2`.
    X1EqK1,
}

/// Tolerance for deciding that an iterate lies on the section.
pub const SECTION_TOL: f64 = 1e-12;
/// Iteration budget for one return.
pub const RETURN_BUDGET: usize = 100_000;

/// A first-return (or `k`-th return) map on one of the constraint lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMapSpec {
    pub section: Section,
    /// Open lower end of the domain.
    pub lo: f64,
    /// Closed upper end of the domain.
    pub hi: f64,
    /// Number of returns composed.
    pub returns: usize,
}

impl ReturnMapSpec {
    /// Return map on `x2 = K2` over `(x1m, K1]`, composing `returns` returns.
    pub fn on_x2_line(p: &ModelParams, returns: usize) -> Self {
        ReturnMapSpec {
            section: Section::X2EqK2,
            lo: line_invariant_bounds(p).x1m,
            hi: p.k1,
            returns,
        }
    }

    /// Return map on `x1 = K1` over `(x2m, K2]`.
    pub fn on_x1_line(p: &ModelParams, returns: usize) -> Self {
        ReturnMapSpec {
            section: Section::X1EqK1,
            lo: line_invariant_bounds(p).x2m,
            hi: p.k2,
            returns,
        }
    }

    /// The map `G`: single return on `x2 = K2`.
    pub fn g(p: &ModelParams) -> Self {
        Self::on_x2_line(p, 1)
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        let k = match self.section {
            Section::X2EqK2 => p.k1,
            Section::X1EqK1 => p.k2,
        };
        if self.returns == 0 {
            return Err(Error::InvalidConfig("return count must be at least 1".into()));
        }
        if !(self.lo >= 0.0 && self.hi <= k && self.lo.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "return-map domain ({}, {}] not inside [0, {k}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    fn contains(&self, x: f64) -> bool {
        x > self.lo && x <= self.hi
    }

    fn embed(&self, p: &ModelParams, x: f64) -> State {
        match self.section {
            Section::X2EqK2 => State::new(x, p.k2),
            Section::X1EqK1 => State::new(p.k1, x),
        }
    }

    fn on_section(&self, p: &ModelParams, s: State) -> Option<f64> {
        match self.section {
            Section::X2EqK2 if (s.x2 - p.k2).abs() <= SECTION_TOL => Some(s.x1),
            Section::X1EqK1 if (s.x1 - p.k1).abs() <= SECTION_TOL => Some(s.x2),
            _ => None,
        }
    }
}

/// Outcome of following an orbit back to the section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnHit {
    pub value: f64,
    /// Iterates of `T` taken that were not on the section.
    pub intermediate: usize,
    /// Whether an iterate landed exactly on the corner `(K1, K2)`; the return
    /// value is then locally independent of `x`.
    pub through_corner: bool,
}

/// Follow the orbit of the section point with coordinate `x` until its
/// `spec.returns`-th return.
///
/// Landing on either axis means the orbit has been captured by an axis fixed
/// point; that is reported as [`Error::NoReturn`].
pub fn first_return(p: &ModelParams, spec: &ReturnMapSpec, x: f64) -> Result<ReturnHit> {
    if !spec.contains(x) {
        return Err(Error::OutOfDomain { x, lo: spec.lo, hi: spec.hi });
    }
    let corner = State::new(p.k1, p.k2);
    let mut s = spec.embed(p, x);
    let mut hits = 0;
    let mut through_corner = false;
    for n in 1..=RETURN_BUDGET {
        s = step(p, s);
        if s.x1 == 0.0 || s.x2 == 0.0 {
            return Err(Error::NoReturn { budget: n });
        }
        through_corner |= s == corner;
        if let Some(v) = spec.on_section(p, s) {
            hits += 1;
            if hits == spec.returns {
                return Ok(ReturnHit {
                    value: v,
                    intermediate: n - hits,
                    through_corner,
                });
            }
        }
    }
    Err(Error::NoReturn { budget: RETURN_BUDGET })
}

/// `G(x1) = F1(F1(x1, K2), F2(x1, K2))`, the two-step return to `x2 = K2`
/// through region 9.
pub fn g_closed_form(p: &ModelParams, x1: f64) -> f64 {
    f1(p, f1(p, x1, p.k2), f2(p, x1, p.k2))
}

/// A return map bundled with its parameters, usable as a [`Map1D`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMap {
    pub params: ModelParams,
    pub spec: ReturnMapSpec,
}

impl ReturnMap {
    pub fn new(params: ModelParams, spec: ReturnMapSpec) -> Result<Self> {
        params.validate()?;
        spec.validate(&params)?;
        Ok(ReturnMap { params, spec })
    }
}

impl Map1D for ReturnMap {
    fn domain(&self) -> (f64, f64) {
        (self.spec.lo, self.spec.hi)
    }

    fn apply(&self, x: f64) -> Option<f64> {
        first_return(&self.params, &self.spec, x).ok().map(|h| h.value)
    }

    fn letter(&self, x: f64) -> Option<Letter> {
        let hit = first_return(&self.params, &self.spec, x).ok()?;
        if hit.through_corner {
            return Some(Letter::F);
        }
        let h = 1e-7;
        let lo = (x - h).max(self.spec.lo + f64::EPSILON);
        let hi = (x + h).min(self.spec.hi);
        let a = self.apply(lo)?;
        let b = self.apply(hi)?;
        Some(if b > a {
            Letter::L
        } else if b < a {
            Letter::R
        } else {
            Letter::C
        })
    }
}
