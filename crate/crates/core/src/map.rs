//! The constrained map `T`, its unconstrained components `F1`, `F2`, the
//! nine-region partition of the plane and the four border curves.
//!
//! Every evaluation of `F` in the crate goes through [`f_component`], so the
//! 1-D restrictions and the diagonal map reproduce the 2-D iterates bit for
//! bit.

use crate::error::{Error, Result};
use crate::model::{Group, ModelParams, State, Window};

/// `R_i(x) = tau_i (1 - x / N_i)`: how many members of the other group `x`
/// members of group `i` tolerate, per capita. Negative beyond `N_i`.
pub fn tolerance(p: &ModelParams, group: Group, x: f64) -> f64 {
    p.tau(group) * (1.0 - x / p.n(group))
}

/// `own * [1 - gamma * other + gamma * own * tau * (1 - own / n)]`.
#[inline]
pub fn f_component(gamma: f64, tau: f64, n: f64, own: f64, other: f64) -> f64 {
    own * (1.0 - gamma * other + gamma * own * (tau * (1.0 - own / n)))
}

/// Derivative of [`f_component`] with respect to `own`, `other` held fixed.
#[inline]
pub fn f_component_d_own(gamma: f64, tau: f64, n: f64, own: f64, other: f64) -> f64 {
    1.0 - gamma * other + own * gamma * tau * (2.0 - 3.0 * own / n)
}

#[inline]
pub fn f1(p: &ModelParams, x1: f64, x2: f64) -> f64 {
    f_component(p.gamma1, p.tau1, p.n1, x1, x2)
}

#[inline]
pub fn f2(p: &ModelParams, x1: f64, x2: f64) -> f64 {
    f_component(p.gamma2, p.tau2, p.n2, x2, x1)
}

/// The unconstrained pair `(F1, F2)`.
pub fn eval_f(p: &ModelParams, s: State) -> (f64, f64) {
    (f1(p, s.x1, s.x2), f2(p, s.x1, s.x2))
}

#[inline]
pub(crate) fn clamp_to(v: f64, k: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= k {
        k
    } else {
        v
    }
}

/// One application of `T`: `F` clamped componentwise to `[0,K1] x [0,K2]`.
#[inline]
pub fn step(p: &ModelParams, s: State) -> State {
    State {
        x1: clamp_to(f1(p, s.x1, s.x2), p.k1),
        x2: clamp_to(f2(p, s.x1, s.x2), p.k2),
    }
}

/// `n` iterates of `T` starting at `s`; the result has `n + 1` entries.
pub fn orbit(p: &ModelParams, s: State, n: usize) -> Vec<State> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(s);
    let mut cur = s;
    for _ in 0..n {
        cur = step(p, cur);
        out.push(cur);
    }
    out
}

/// Where a component of `F` sits relative to its clamp interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clamp {
    /// `F <= 0`, image 0.
    Zero,
    /// `0 <= F <= K`, image `F`.
    Free,
    /// `F >= K`, image `K`.
    Max,
}

/// The nine regions `Omega_1 ... Omega_9` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    Omega1 = 1,
    Omega2,
    Omega3,
    Omega4,
    Omega5,
    Omega6,
    Omega7,
    Omega8,
    Omega9,
}

impl RegionId {
    pub const ALL: [RegionId; 9] = [
        RegionId::Omega1,
        RegionId::Omega2,
        RegionId::Omega3,
        RegionId::Omega4,
        RegionId::Omega5,
        RegionId::Omega6,
        RegionId::Omega7,
        RegionId::Omega8,
        RegionId::Omega9,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }

    /// Which branch each component uses inside this region.
    pub fn clamps(self) -> (Clamp, Clamp) {
        use Clamp::*;
        match self {
            RegionId::Omega1 => (Free, Free),
            RegionId::Omega2 => (Zero, Free),
            RegionId::Omega3 => (Zero, Zero),
            RegionId::Omega4 => (Zero, Max),
            RegionId::Omega5 => (Max, Free),
            RegionId::Omega6 => (Max, Zero),
            RegionId::Omega7 => (Max, Max),
            RegionId::Omega8 => (Free, Zero),
            RegionId::Omega9 => (Free, Max),
        }
    }

    /// Regions where both components are constant (two zero eigenvalues).
    pub fn is_doubly_degenerate(self) -> bool {
        matches!(self, RegionId::Omega3 | RegionId::Omega4 | RegionId::Omega6 | RegionId::Omega7)
    }
}

impl std::fmt::Display for RegionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Omega{}", self.index())
    }
}

fn satisfies(c: Clamp, v: f64, k: f64) -> bool {
    match c {
        Clamp::Zero => v <= 0.0,
        Clamp::Free => (0.0..=k).contains(&v),
        Clamp::Max => v >= k,
    }
}

/// Does `s` satisfy the (inclusive) defining inequalities of `region`?
pub fn in_region(p: &ModelParams, s: State, region: RegionId) -> bool {
    let (a, b) = eval_f(p, s);
    let (c1, c2) = region.clamps();
    satisfies(c1, a, p.k1) && satisfies(c2, b, p.k2)
}

/// Region of `s`; points on a border go to the lowest-numbered region.
pub fn region_of(p: &ModelParams, s: State) -> RegionId {
    let (a, b) = eval_f(p, s);
    RegionId::ALL
        .into_iter()
        .find(|r| {
            let (c1, c2) = r.clamps();
            satisfies(c1, a, p.k1) && satisfies(c2, b, p.k2)
        })
        .expect("the nine regions cover the plane")
}

/// Image of `s` under the definition of `T` that applies in `region`,
/// whether or not `s` actually lies there.
pub fn apply_region(p: &ModelParams, s: State, region: RegionId) -> State {
    let (a, b) = eval_f(p, s);
    let pick = |c: Clamp, v: f64, k: f64| match c {
        Clamp::Zero => 0.0,
        Clamp::Free => v,
        Clamp::Max => k,
    };
    let (c1, c2) = region.clamps();
    State::new(pick(c1, a, p.k1), pick(c2, b, p.k2))
}

/// The four curves across which `T` changes definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// `F1 = 0`, `x1 != 0`.
    Bc10,
    /// `F2 = 0`, `x2 != 0`.
    Bc20,
    /// `F1 = K1`.
    Bc1K,
    /// `F2 = K2`.
    Bc2K,
}

impl CurveId {
    pub const ALL: [CurveId; 4] = [CurveId::Bc10, CurveId::Bc20, CurveId::Bc1K, CurveId::Bc2K];

    pub fn name(self) -> &'static str {
        match self {
            CurveId::Bc10 => "BC_1_0",
            CurveId::Bc20 => "BC_2_0",
            CurveId::Bc1K => "BC_1_K",
            CurveId::Bc2K => "BC_2_K",
        }
    }

    /// Residual of the defining equation at `s`.
    pub fn residual(self, p: &ModelParams, s: State) -> f64 {
        match self {
            CurveId::Bc10 => f1(p, s.x1, s.x2),
            CurveId::Bc20 => f2(p, s.x1, s.x2),
            CurveId::Bc1K => f1(p, s.x1, s.x2) - p.k1,
            CurveId::Bc2K => f2(p, s.x1, s.x2) - p.k2,
        }
    }
}

/// A border curve sampled as an ordered polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub id: CurveId,
    pub points: Vec<State>,
}

/// `x2` on `BC_{1,0}` above abscissa `x1 > 0`.
pub fn bc10_x2(p: &ModelParams, x1: f64) -> f64 {
    (1.0 + p.gamma1 * x1 * tolerance(p, Group::One, x1)) / p.gamma1
}

/// `x1` on `BC_{2,0}` at ordinate `x2 > 0`.
pub fn bc20_x1(p: &ModelParams, x2: f64) -> f64 {
    (1.0 + p.gamma2 * x2 * tolerance(p, Group::Two, x2)) / p.gamma2
}

/// `x2` on `BC_{1,K}` above abscissa `x1 > 0`.
pub fn bc1k_x2(p: &ModelParams, x1: f64) -> f64 {
    (1.0 + p.gamma1 * x1 * tolerance(p, Group::One, x1) - p.k1 / x1) / p.gamma1
}

/// `x1` on `BC_{2,K}` at ordinate `x2 > 0`.
pub fn bc2k_x1(p: &ModelParams, x2: f64) -> f64 {
    (1.0 + p.gamma2 * x2 * tolerance(p, Group::Two, x2) - p.k2 / x2) / p.gamma2
}

/// Sample the four border curves over `window`.
///
/// Each curve is a graph over one coordinate; that coordinate takes
/// `resolution` equispaced positive values across the window and points whose
/// other coordinate leaves the window are dropped.
pub fn border_curves(p: &ModelParams, window: &Window, resolution: usize) -> Result<Vec<CurveSample>> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    window.validate()?;
    let abscissae = |lo: f64, hi: f64| -> Vec<f64> {
        let lo = lo.max(0.0);
        (0..resolution)
            .map(|i| lo + (hi - lo) * (i as f64 + 1.0) / resolution as f64)
            .collect()
    };
    let xs = abscissae(window.x_min, window.x_max);
    let ys = abscissae(window.y_min, window.y_max);
    let in_y = |v: f64| v >= window.y_min && v <= window.y_max;
    let in_x = |v: f64| v >= window.x_min && v <= window.x_max;

    let over_x1 = |id: CurveId, g: &dyn Fn(f64) -> f64| CurveSample {
        id,
        points: xs
            .iter()
            .map(|&x| State::new(x, g(x)))
            .filter(|s| in_y(s.x2))
            .collect(),
    };
    let over_x2 = |id: CurveId, g: &dyn Fn(f64) -> f64| CurveSample {
        id,
        points: ys
            .iter()
            .map(|&y| State::new(g(y), y))
            .filter(|s| in_x(s.x1))
            .collect(),
    };

    Ok(vec![
        over_x1(CurveId::Bc10, &|x| bc10_x2(p, x)),
        over_x2(CurveId::Bc20, &|y| bc20_x1(p, y)),
        over_x1(CurveId::Bc1K, &|x| bc1k_x2(p, x)),
        over_x2(CurveId::Bc2K, &|y| bc2k_x1(p, y)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    fn fig1() -> ModelParams {
        ModelParams::canonical(1.4, 1.1)
    }

    #[test]
    fn tolerance_values() {
        let p = fig1();
        assert_eq!(tolerance(&p, Group::One, 0.0), 4.0);
        assert_eq!(tolerance(&p, Group::One, 1.5), 0.0);
        assert!((tolerance(&p, Group::Two, 1.1) - 4.0 * (1.0 - 1.1 / 1.5)).abs() < EPS);
        assert!((tolerance(&p, Group::Two, 1.1) - 1.0666667).abs() < 1e-7);
        assert!(tolerance(&p, Group::One, 2.0) < 0.0);
    }

    #[test]
    fn eval_f_values() {
        let p = fig1();
        assert_eq!(eval_f(&p, State::ORIGIN), (0.0, 0.0));
        let (a, b) = eval_f(&p, State::new(1.4, 0.0));
        assert!((a - 1.4 * (1.0 + 1.4 * 4.0 * (1.0 - 1.4 / 1.5))).abs() < EPS);
        assert!((a - 1.9226667).abs() < 1e-7);
        assert_eq!(b, 0.0);
        let (a, b) = eval_f(&p, State::new(0.2, 1.8));
        assert!((a + 0.0213333).abs() < 1e-7);
        assert!((b + 1.152).abs() < 1e-12);
    }

    #[test]
    fn regions_of_examples() {
        let p = fig1();
        assert_eq!(region_of(&p, State::new(0.2, 1.8)), RegionId::Omega3);
        assert_eq!(region_of(&p, State::new(1.4, 1.1)), RegionId::Omega1);
        let (a, b) = eval_f(&p, State::new(1.4, 1.1));
        assert!((a - 0.38267).abs() < 1e-5 && (b - 0.85067).abs() < 1e-5);
        for k in [0.3, 1.0, 1.4] {
            assert_eq!(region_of(&ModelParams::symmetric(k), State::ORIGIN), RegionId::Omega1);
        }
    }

    #[test]
    fn step_examples() {
        let p = fig1();
        assert_eq!(step(&p, State::ORIGIN), State::ORIGIN);
        assert_eq!(step(&p, State::new(0.2, 1.8)), State::ORIGIN);
        let s = step(&ModelParams::symmetric(1.2), State::new(1.2, 1.2));
        assert_eq!(s.x1, s.x2);
        assert!((s.x1 - 0.912).abs() < EPS);
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&fig1(), State::ORIGIN, 5);
        assert_eq!(o, vec![State::ORIGIN; 6]);

        let o = orbit(&ModelParams::symmetric(1.2), State::new(1.2, 1.2), 3);
        assert_eq!(o.len(), 4);
        let want = [1.2, 0.912, 1.2, 0.912];
        for (s, w) in o.iter().zip(want) {
            assert_eq!(s.x1, s.x2);
            assert!((s.x1 - w).abs() < EPS, "{s:?}");
        }
        // the flat branch returns the constraint exactly
        assert_eq!(o[2], State::new(1.2, 1.2));
    }

    #[test]
    fn omega7_maps_to_corner() {
        let p = fig1();
        // F1(1.0, 0.2) and F2 need both above the constraints: search a grid
        let mut hits = 0;
        for i in 1..200 {
            for j in 1..200 {
                let s = State::new(i as f64 * 0.01, j as f64 * 0.01);
                if region_of(&p, s) == RegionId::Omega7 {
                    assert_eq!(step(&p, s), State::new(1.4, 1.1));
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn border_curve_examples() {
        let p = fig1();
        assert!((bc1k_x2(&p, 1.4) - 0.3733333).abs() < 1e-7);
        assert!((bc1k_x2(&p, 1.4) - 1.4 * 4.0 * (1.0 - 1.4 / 1.5)).abs() < EPS);
        assert!((bc2k_x1(&p, 1.1) - 1.1733333).abs() < 1e-7);
        assert!((bc10_x2(&p, 1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn border_curves_satisfy_equations() {
        let p = fig1();
        let curves = border_curves(&p, &Window::default(), 500).unwrap();
        assert_eq!(curves.len(), 4);
        for c in &curves {
            assert!(!c.points.is_empty(), "{:?} empty", c.id);
            for s in &c.points {
                assert!(c.id.residual(&p, *s).abs() <= 1e-9, "{:?} {s:?}", c.id);
            }
        }
    }

    #[test]
    fn border_curves_reject_low_resolution() {
        assert_eq!(
            border_curves(&fig1(), &Window::default(), 1),
            Err(Error::Resolution(1))
        );
    }

    #[test]
    fn region_branch_agreement_on_grid() {
        let p = fig1();
        for i in 0..=100 {
            for j in 0..=100 {
                let s = State::new(i as f64 * 0.02, j as f64 * 0.02);
                assert_eq!(apply_region(&p, s, region_of(&p, s)), step(&p, s));
            }
        }
    }
}
