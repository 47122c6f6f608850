//! Fixed points of `T`: enumeration, real/virtual flags and stability.

use crate::error::{Error, Result};
use crate::map::{eval_f, f_component_d_own, in_region, region_of, step, RegionId};
use crate::model::{ModelParams, State};
use crate::restrict::{build_restriction, derivative_1d, line_invariant_bounds, RestrictionTag};

/// Where a fixed point comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Origin,
    /// `(K1, 0)`.
    Axis1,
    /// `(0, K2)`.
    Axis2,
    /// `(K1, K2)`.
    Corner,
    /// Fixed points of `F1(., K2)` on the line `x2 = K2`.
    OnLineX2K2,
    /// Fixed points of `F2(K1, .)` on the line `x1 = K1`.
    OnLineX1K1,
    /// Intersections of the two reaction curves off the axes.
    Interior,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Origin => "origin",
            Family::Axis1 => "axis1",
            Family::Axis2 => "axis2",
            Family::Corner => "corner",
            Family::OnLineX2K2 => "line_x2_k2",
            Family::OnLineX1K1 => "line_x1_k1",
            Family::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    /// Both multipliers 0.
    Superstable2D,
    /// Multiplier 0 transverse to (or along) an invariant line, the other
    /// of modulus below 1.
    SuperstableLine,
    Attracting,
    Saddle,
    Repelling,
}

impl StabilityClass {
    pub fn name(self) -> &'static str {
        match self {
            StabilityClass::Superstable2D => "superstable_2d",
            StabilityClass::SuperstableLine => "superstable_line",
            StabilityClass::Attracting => "attracting",
            StabilityClass::Saddle => "saddle",
            StabilityClass::Repelling => "repelling",
        }
    }

    pub fn is_stable(self) -> bool {
        matches!(
            self,
            StabilityClass::Superstable2D | StabilityClass::SuperstableLine | StabilityClass::Attracting
        )
    }
}

/// Stability class with its multipliers. For a complex pair `eigen` holds the
/// common modulus twice.
#[derive(Debug, Clone, PartialEq)]
pub struct Stability {
    pub class: StabilityClass,
    pub eigen: Vec<f64>,
    pub complex: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRecord {
    pub location: State,
    pub family: Family,
    /// `false` for solutions of a branch equation lying outside the region
    /// where that branch applies.
    pub real: bool,
    pub region: RegionId,
    /// Filled for real records.
    pub stability: Option<Stability>,
}

/// Reaction curves `phi1: x2 = x1 R1(x1)` over `[0, N1]` and
/// `phi2: x1 = x2 R2(x2)` over `[0, N2]`, `resolution` samples each.
pub fn reaction_curves(p: &ModelParams, resolution: usize) -> Result<(Vec<State>, Vec<State>)> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    let last = (resolution - 1) as f64;
    let phi1 = (0..resolution)
        .map(|i| {
            let x = p.n1 * i as f64 / last;
            State::new(x, x * p.tau1 * (1.0 - x / p.n1))
        })
        .collect();
    let phi2 = (0..resolution)
        .map(|i| {
            let y = p.n2 * i as f64 / last;
            State::new(y * p.tau2 * (1.0 - y / p.n2), y)
        })
        .collect();
    Ok((phi1, phi2))
}

/// Roots of `x tau (1 - x / n) = k`, smaller first.
pub(crate) fn quadratic_pair(tau: f64, n: f64, k: f64) -> Option<(f64, f64)> {
    let h = 0.5 * n;
    let disc = h * h - k * n / tau;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((h - s, h + s))
}

const GRID: usize = 512;

/// Off-axis intersections of the reaction curves in `[0,N1] x [0,N2]`.
fn reaction_intersections(p: &ModelParams) -> Vec<State> {
    let r1 = |x1: f64, x2: f64| x2 - x1 * p.tau1 * (1.0 - x1 / p.n1);
    let r2 = |x1: f64, x2: f64| x1 - x2 * p.tau2 * (1.0 - x2 / p.n2);
    let hx = p.n1 / GRID as f64;
    let hy = p.n2 / GRID as f64;
    let mut found: Vec<State> = Vec::new();
    let straddles = |v: [f64; 4]| {
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lo <= 0.0 && hi >= 0.0
    };
    for i in 0..GRID {
        let (xa, xb) = (i as f64 * hx, (i + 1) as f64 * hx);
        for j in 0..GRID {
            let (ya, yb) = (j as f64 * hy, (j + 1) as f64 * hy);
            let c = [(xa, ya), (xb, ya), (xa, yb), (xb, yb)];
            if !straddles(c.map(|(x, y)| r1(x, y))) || !straddles(c.map(|(x, y)| r2(x, y))) {
                continue;
            }
            let Some(s) = newton2(p, State::new(0.5 * (xa + xb), 0.5 * (ya + yb))) else {
                continue;
            };
            if s.x1.abs() < 1e-9 && s.x2.abs() < 1e-9 {
                continue;
            }
            if s.x1 < -1e-12 || s.x2 < -1e-12 || s.x1 > p.n1 + 1e-12 || s.x2 > p.n2 + 1e-12 {
                continue;
            }
            if !found.iter().any(|f| f.dist_inf(s) < 1e-9) {
                found.push(s);
            }
        }
    }
    found
}

/// Damped Newton on the reaction-curve residuals, to 1e-12.
fn newton2(p: &ModelParams, mut s: State) -> Option<State> {
    let res = |s: State| {
        (
            s.x2 - s.x1 * p.tau1 * (1.0 - s.x1 / p.n1),
            s.x1 - s.x2 * p.tau2 * (1.0 - s.x2 / p.n2),
        )
    };
    let norm = |(a, b): (f64, f64)| a.abs().max(b.abs());
    let mut r = res(s);
    for _ in 0..100 {
        if norm(r) <= 1e-12 {
            return Some(s);
        }
        let a = -p.tau1 * (1.0 - 2.0 * s.x1 / p.n1);
        let d = -p.tau2 * (1.0 - 2.0 * s.x2 / p.n2);
        // [[a, 1], [1, d]]
        let det = a * d - 1.0;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (d * r.0 - r.1) / det;
        let dy = (a * r.1 - r.0) / det;
        let mut lambda = 1.0;
        loop {
            let t = State::new(s.x1 - lambda * dx, s.x2 - lambda * dy);
            let rt = res(t);
            if norm(rt) < norm(r) || lambda < 1e-6 {
                s = t;
                r = rt;
                break;
            }
            lambda *= 0.5;
        }
    }
    (norm(r) <= 1e-12).then_some(s)
}

/// All fixed points, real and virtual, sorted by family then `x1`. Real
/// records carry their stability.
pub fn enumerate_fixed_points(p: &ModelParams) -> Result<Vec<FixedPointRecord>> {
    p.validate()?;
    let mut out: Vec<(State, Family, bool)> = vec![
        (State::ORIGIN, Family::Origin, true),
        (State::new(p.k1, 0.0), Family::Axis1, true),
        (State::new(0.0, p.k2), Family::Axis2, true),
    ];
    let corner = State::new(p.k1, p.k2);
    if in_region(p, corner, RegionId::Omega7) {
        out.push((corner, Family::Corner, true));
    }
    let bounds = line_invariant_bounds(p);
    if let Some((a, b)) = quadratic_pair(p.tau1, p.n1, p.k2) {
        for x in [a, b] {
            let real = x <= bounds.x1m && x <= p.k1;
            out.push((State::new(x, p.k2), Family::OnLineX2K2, real));
        }
    }
    if let Some((a, b)) = quadratic_pair(p.tau2, p.n2, p.k1) {
        for y in [a, b] {
            let real = y <= bounds.x2m && y <= p.k2;
            out.push((State::new(p.k1, y), Family::OnLineX1K1, real));
        }
    }
    for s in reaction_intersections(p) {
        let real = s.in_rect(p.k1, p.k2);
        out.push((s, Family::Interior, real));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.x1.total_cmp(&b.0.x1)).then(a.0.x2.total_cmp(&b.0.x2)));

    out.into_iter()
        .map(|(location, family, real)| {
            let mut rec = FixedPointRecord {
                location,
                family,
                real,
                region: region_of(p, location),
                stability: None,
            };
            if real {
                rec.stability = Some(stability_of(p, &rec)?);
            }
            Ok(rec)
        })
        .collect()
}

/// Does region `r` meet `D` in a set of positive measure? Tested on a
/// 100 x 100 grid of cell centres of `D`.
pub fn region_meets_rect(p: &ModelParams, r: RegionId) -> bool {
    const M: usize = 100;
    (0..M).any(|i| {
        (0..M).any(|j| {
            let s = State::new(
                p.k1 * (i as f64 + 0.5) / M as f64,
                p.k2 * (j as f64 + 0.5) / M as f64,
            );
            in_region(p, s, r)
        })
    })
}

fn classify_moduli(m: &[f64]) -> StabilityClass {
    let zeros = m.iter().filter(|v| **v == 0.0).count();
    let inside = m.iter().filter(|v| **v < 1.0).count();
    if zeros == m.len() {
        StabilityClass::Superstable2D
    } else if zeros > 0 && inside == m.len() {
        StabilityClass::SuperstableLine
    } else if inside == m.len() {
        StabilityClass::Attracting
    } else if inside == 0 {
        StabilityClass::Repelling
    } else {
        StabilityClass::Saddle
    }
}

/// Stability of a real fixed point.
///
/// Points on the axes and on the constraint lines are classified from the
/// 1-D restrictions: the clamp makes `T` non-differentiable there and the
/// smooth Jacobian would give the wrong answer. For points on a constraint
/// line the class refers to the dynamics along that line.
pub fn stability_of(p: &ModelParams, rec: &FixedPointRecord) -> Result<Stability> {
    if !rec.real {
        return Err(Error::VirtualRecord);
    }
    let s = rec.location;
    let line = |class: StabilityClass, eigen: Vec<f64>| Stability { class, eigen, complex: false };
    match rec.family {
        Family::Origin => Ok(line(StabilityClass::Repelling, vec![1.0, 1.0])),
        Family::Axis1 | Family::Axis2 => {
            let (own, cross, trap) = match rec.family {
                Family::Axis1 => (RestrictionTag::T1, RestrictionTag::F2, RegionId::Omega6),
                _ => (RestrictionTag::T2, RestrictionTag::F1, RegionId::Omega4),
            };
            if region_meets_rect(p, trap) {
                return Ok(line(StabilityClass::Superstable2D, vec![0.0, 0.0]));
            }
            let k = p.k(if own == RestrictionTag::T1 { crate::Group::One } else { crate::Group::Two });
            let along = derivative_1d(&build_restriction(p, own)?, k)?.0;
            // transverse direction: the line through the point at the clamp
            let across = derivative_1d(&build_restriction(p, cross)?, 0.0)?.1;
            let eigen = vec![along, across];
            let m: Vec<f64> = eigen.iter().map(|v| v.abs()).collect();
            Ok(line(classify_moduli(&m), eigen))
        }
        Family::Corner => {
            let along1 = derivative_1d(&build_restriction(p, RestrictionTag::F1)?, p.k1)?.0;
            let along2 = derivative_1d(&build_restriction(p, RestrictionTag::F2)?, p.k2)?.0;
            let eigen = vec![along1, along2];
            let m: Vec<f64> = eigen.iter().map(|v| v.abs()).collect();
            Ok(line(classify_moduli(&m), eigen))
        }
        Family::OnLineX2K2 | Family::OnLineX1K1 => {
            let (tag, x) = if rec.family == Family::OnLineX2K2 {
                (RestrictionTag::F1, s.x1)
            } else {
                (RestrictionTag::F2, s.x2)
            };
            let m = build_restriction(p, tag)?;
            let lam = m.raw_derivative(x);
            let class = if lam == 0.0 {
                StabilityClass::SuperstableLine
            } else if lam.abs() < 1.0 {
                StabilityClass::Attracting
            } else {
                StabilityClass::Repelling
            };
            Ok(line(class, vec![lam, 0.0]))
        }
        Family::Interior => {
            let j = jacobian_f(p, s);
            let (e, complex) = eigenvalues(j);
            let m: Vec<f64> = e.iter().map(|v| v.abs()).collect();
            Ok(Stability { class: classify_moduli(&m), eigen: e, complex })
        }
    }
}

/// Eigenvalues of a 2x2 matrix; for a complex pair returns the modulus twice.
pub fn eigenvalues(j: [[f64; 2]; 2]) -> (Vec<f64>, bool) {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = 0.25 * tr * tr - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        (vec![0.5 * tr + r, 0.5 * tr - r], false)
    } else {
        let m = det.sqrt();
        (vec![m, m], true)
    }
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(j: [[f64; 2]; 2]) -> f64 {
    eigenvalues(j).0.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Jacobian of the unconstrained pair `(F1, F2)`; rows are components.
pub fn jacobian_f(p: &ModelParams, s: State) -> [[f64; 2]; 2] {
    [
        [
            f_component_d_own(p.gamma1, p.tau1, p.n1, s.x1, s.x2),
            -p.gamma1 * s.x1,
        ],
        [
            -p.gamma2 * s.x2,
            f_component_d_own(p.gamma2, p.tau2, p.n2, s.x2, s.x1),
        ],
    ]
}

/// Jacobian of `T` where it is smooth. Points on the border of region 1 are
/// accepted (one-sided limits from inside); points of any other region are
/// rejected.
pub fn jacobian_smooth(p: &ModelParams, s: State) -> Result<[[f64; 2]; 2]> {
    let (a, b) = eval_f(p, s);
    let ok = s.x1 >= 0.0 && s.x2 >= 0.0 && region_of(p, s) == RegionId::Omega1;
    if !ok || !a.is_finite() || !b.is_finite() {
        return Err(Error::NotSmooth { x1: s.x1, x2: s.x2 });
    }
    Ok(jacobian_f(p, s))
}

/// `||T(s) - s||_inf`.
pub fn fixed_point_residual(p: &ModelParams, s: State) -> f64 {
    step(p, s).dist_inf(s)
}
