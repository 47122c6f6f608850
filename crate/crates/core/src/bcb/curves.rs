use crate::equilibria::quadratic_pair;
use crate::error::{Error, Result};
use crate::map::{f1, f2, f_component};
use crate::model::ModelParams;
use crate::roots;

/// Critical values of `K` for the map restricted to the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalThresholds {
    /// `N (1 - 1/tau)`: the interior diagonal fixed point hits the corner.
    pub k_fp_bcb: f64,
    /// `K` at which the diagonal map has slope -1 at `x = K`.
    pub k_bar: f64,
    /// Critical point of the diagonal cubic.
    pub x_c: f64,
    /// Maximum of the diagonal cubic; above it there is no flat branch.
    pub k_smooth: f64,
}

fn diag_slope(g: f64, t: f64, n: f64, x: f64) -> f64 {
    1.0 + 2.0 * g * (t - 1.0) * x - 3.0 * g * t * x * x / n
}

/// Positive root of `3 g t / n x^2 - 2 g (t-1) x - c = 0`.
fn diag_root(g: f64, t: f64, n: f64, c: f64) -> f64 {
    let a = 3.0 * g * t / n;
    let b = 2.0 * g * (t - 1.0);
    (b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a)
}

fn check_diag(p: &ModelParams) -> Result<(f64, f64, f64)> {
    p.validate()?;
    if !p.is_exchange_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if p.tau1 <= 1.0 {
        return Err(Error::InvalidParams(format!("diagonal thresholds need tau > 1, got {}", p.tau1)));
    }
    Ok((p.gamma1, p.tau1, p.n1))
}

/// Closed-form diagonal thresholds. Only `gamma`, `tau` and `N` matter; they
/// must coincide for the two groups.
pub fn diagonal_thresholds(p: &ModelParams) -> Result<DiagonalThresholds> {
    let (g, t, n) = check_diag(p)?;
    let x_c = diag_root(g, t, n, 1.0);
    Ok(DiagonalThresholds {
        k_fp_bcb: n * (1.0 - 1.0 / t),
        k_bar: diag_root(g, t, n, 2.0),
        x_c,
        k_smooth: f_component(g, t, n, x_c, x_c),
    })
}

/// Root of `F'_diag(K) = -1` located by bisection, starting from `[x_c, N]`.
/// The bracket is widened past `N` when `gamma N` is small; the root then lies
/// outside the admissible constraints but is still reported.
pub fn k_bar_by_bisection(p: &ModelParams) -> Result<f64> {
    let (g, t, n) = check_diag(p)?;
    let x_c = diag_root(g, t, n, 1.0);
    let h = |k| diag_slope(g, t, n, k) + 1.0;
    let mut hi = n;
    for _ in 0..64 {
        if h(hi) < 0.0 {
            return roots::bisect_full(h, x_c, hi)
                .ok_or_else(|| Error::NoRoot("slope -1 not bracketed".into()));
        }
        hi *= 2.0;
    }
    Err(Error::NoRoot("slope -1 not reached".into()))
}

/// Derivative of the diagonal cubic.
pub fn diagonal_slope(p: &ModelParams, x: f64) -> f64 {
    diag_slope(p.gamma1, p.tau1, p.n1, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcbId {
    /// `K2 = K1 tau1 (1 - K1/N1)`.
    Be1,
    /// `K1 = K2 tau2 (1 - K2/N2)`.
    Be2,
    /// Maximum of `F1(., K2)` equals `K1`.
    Bp1,
    /// Maximum of `F2(K1, .)` equals `K2`.
    Bp2,
    /// Two-cycle through the corner appears.
    Sn2,
}

impl BcbId {
    pub fn name(self) -> &'static str {
        match self {
            BcbId::Be1 => "BCe1",
            BcbId::Be2 => "BCe2",
            BcbId::Bp1 => "BCp1",
            BcbId::Bp2 => "BCp2",
            BcbId::Sn2 => "SN2",
        }
    }
}

/// Samples `(K1, K2)` of a bifurcation curve in the constraint plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BcbCurve {
    pub id: BcbId,
    pub points: Vec<(f64, f64)>,
    pub closed_form: bool,
}

fn grid(range: (f64, f64), resolution: usize) -> Result<impl Iterator<Item = f64>> {
    if resolution < 2 {
        return Err(Error::Resolution(resolution));
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidConfig(format!("bad range [{lo}, {hi}]")));
    }
    let last = (resolution - 1) as f64;
    Ok((0..resolution).map(move |i| lo + (hi - lo) * i as f64 / last))
}

pub fn bce1_k2(p: &ModelParams, k1: f64) -> f64 {
    k1 * p.tau1 * (1.0 - k1 / p.n1)
}

pub fn bce2_k1(p: &ModelParams, k2: f64) -> f64 {
    k2 * p.tau2 * (1.0 - k2 / p.n2)
}

/// Values of `K2` where the curve `BCe2` meets the vertical line at `k1`,
/// smaller first.
pub fn bce2_crossings(p: &ModelParams, k1: f64) -> Option<(f64, f64)> {
    quadratic_pair(p.tau2, p.n2, k1)
}

/// `BCe1` sampled over `K1 in range` and `BCe2` over `K2 in range`.
pub fn bcb_equilibrium_curves(
    p: &ModelParams,
    range: (f64, f64),
    resolution: usize,
) -> Result<[BcbCurve; 2]> {
    let e1 = grid(range, resolution)?.map(|k1| (k1, bce1_k2(p, k1))).collect();
    let e2 = grid(range, resolution)?.map(|k2| (bce2_k1(p, k2), k2)).collect();
    Ok([
        BcbCurve { id: BcbId::Be1, points: e1, closed_form: true },
        BcbCurve { id: BcbId::Be2, points: e2, closed_form: true },
    ])
}

/// Critical point of `x -> F(own = x, other)` on its decreasing side.
fn crit(g: f64, t: f64, n: f64, other: f64) -> Result<f64> {
    let h = n / 3.0;
    let rad = h * h + n / (3.0 * g * t) * (1.0 - g * other);
    if rad < 0.0 {
        return Err(Error::CurveUndefined(format!(
            "no critical point for other-group level {other}"
        )));
    }
    Ok(h + rad.sqrt())
}

/// Critical point of `F2(K1, .)`.
pub fn x2_crit(p: &ModelParams, k1: f64) -> Result<f64> {
    crit(p.gamma2, p.tau2, p.n2, k1)
}

/// Critical point of `F1(., K2)`.
pub fn x1_crit(p: &ModelParams, k2: f64) -> Result<f64> {
    crit(p.gamma1, p.tau1, p.n1, k2)
}

/// `BCp2`: the `K2` equal to the maximum of `F2(K1, .)`.
pub fn bcp2_k2(p: &ModelParams, k1: f64) -> Result<f64> {
    let x = x2_crit(p, k1)?;
    Ok(x * x * (2.0 * x / p.n2 - 1.0) * p.gamma2 * p.tau2)
}

/// `BCp1`: the `K1` equal to the maximum of `F1(., K2)`.
pub fn bcp1_k1(p: &ModelParams, k2: f64) -> Result<f64> {
    let x = x1_crit(p, k2)?;
    Ok(x * x * (2.0 * x / p.n1 - 1.0) * p.gamma1 * p.tau1)
}

/// Maximum of `F2(K1, .)` over `[N2/3, N2]` by golden-section search; an
/// independent check of [`bcp2_k2`].
pub fn bcp2_k2_numeric(p: &ModelParams, k1: f64) -> f64 {
    roots::golden_max(|x| f2(p, k1, x), p.n2 / 3.0, p.n2, 1e-12).1
}

/// Mirror of [`bcp2_k2_numeric`].
pub fn bcp1_k1_numeric(p: &ModelParams, k2: f64) -> f64 {
    roots::golden_max(|x| f1(p, x, k2), p.n1 / 3.0, p.n1, 1e-12).1
}

/// Smallest `K1` in `(0, N1]` on `BCp2` at the given `K2`.
pub fn bcp2_k1_at(p: &ModelParams, k2: f64) -> Result<f64> {
    let g = |k1: f64| bcp2_k2(p, k1).map(|v| v - k2).unwrap_or(f64::NAN);
    first_root(g, 0.0, p.n1, "BCp2")
}

/// Smallest `K2` in `(0, N2]` on `BCp1` at the given `K1`.
pub fn bcp1_k2_at(p: &ModelParams, k1: f64) -> Result<f64> {
    let g = |k2: f64| bcp1_k1(p, k2).map(|v| v - k1).unwrap_or(f64::NAN);
    first_root(g, 0.0, p.n2, "BCp1")
}

fn first_root<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, what: &str) -> Result<f64> {
    roots::sign_changes(&g, lo, hi, SCAN)
        .into_iter()
        .find_map(|(a, b)| if a == b { Some(a) } else { roots::bisect_full(&g, a, b) })
        .ok_or_else(|| Error::NoRoot(format!("{what}: no sign change on [{lo}, {hi}]")))
}

/// `BCp1` sampled over `K2 in range`, `BCp2` over `K1 in range`.
pub fn bcb_smoothness_curves(
    p: &ModelParams,
    range: (f64, f64),
    resolution: usize,
) -> Result<[BcbCurve; 2]> {
    let p1 = grid(range, resolution)?
        .map(|k2| bcp1_k1(p, k2).map(|k1| (k1, k2)))
        .collect::<Result<_>>()?;
    let p2 = grid(range, resolution)?
        .map(|k1| bcp2_k2(p, k1).map(|k2| (k1, k2)))
        .collect::<Result<_>>()?;
    Ok([
        BcbCurve { id: BcbId::Bp1, points: p1, closed_form: true },
        BcbCurve { id: BcbId::Bp2, points: p2, closed_form: true },
    ])
}

/// Grid size of the bracket scan.
pub const SCAN: usize = 2000;

/// `F1(F1(K1,K2), F2(K1,K2)) - K1`: vanishes when the corner's image maps
/// back onto `x1 = K1`.
pub fn sn2_residual(p: &ModelParams, k1: f64, k2: f64) -> f64 {
    let a = f1(p, k1, k2);
    let b = f2(p, k1, k2);
    f1(p, a, b) - k1
}

/// A root of [`sn2_residual`] is a genuine corner two-cycle only if the
/// corner's image `Q` is not clamped and `Q` is sent back to the corner in
/// the second coordinate as well.
pub fn sn2_admissible(p: &ModelParams, k1: f64, k2: f64) -> bool {
    const SLACK: f64 = 1e-9;
    let a = f1(p, k1, k2);
    let b = f2(p, k1, k2);
    let free = a >= -SLACK && a <= k1 + SLACK && b >= -SLACK && b <= k2 + SLACK;
    free && f2(p, a, b) >= k2 - SLACK
}

/// Smallest admissible `K1` in `(0, N1]` where the corner two-cycle appears
/// at the given `K2`: bracket scan, bisection to 1e-8, one Newton step.
pub fn bcb_2cycle_saddle_node(p: &ModelParams, k2: f64) -> Result<f64> {
    p.validate()?;
    let g = |k1: f64| sn2_residual(p, k1, k2);
    let dg = |k1: f64| {
        let h = 1e-7;
        (g(k1 + h) - g(k1 - h)) / (2.0 * h)
    };
    let (lo, hi) = (p.n1 / SCAN as f64, p.n1);
    for (a, b) in roots::sign_changes(g, lo, hi, SCAN) {
        let Some(r) = roots::bisect(g, a, b, 1e-8) else {
            continue;
        };
        let r = roots::newton_polish(g, dg, r, a, b);
        if sn2_admissible(p, r, k2) {
            return Ok(r);
        }
    }
    Err(Error::NoRoot(format!("no admissible corner two-cycle at K2 = {k2}")))
}

/// `SN2` sampled at the given `K2` values; values without a root are skipped.
pub fn bcb_sn2_curve(p: &ModelParams, k2_range: (f64, f64), resolution: usize) -> Result<BcbCurve> {
    let points = grid(k2_range, resolution)?
        .filter_map(|k2| bcb_2cycle_saddle_node(p, k2).ok().map(|k1| (k1, k2)))
        .collect();
    Ok(BcbCurve { id: BcbId::Sn2, points, closed_form: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_thresholds() {
        let t = diagonal_thresholds(&ModelParams::symmetric(1.0)).unwrap();
        assert_eq!(t.k_fp_bcb, 1.125);
        assert!((t.k_bar - 1.0).abs() < 1e-15);
        assert!((t.x_c - 0.8903882).abs() < 1e-7);
        assert!(diagonal_slope(&ModelParams::symmetric(1.0), t.x_c).abs() < 1e-12);
        assert!((t.k_smooth - 1.3863833).abs() < 1e-7);
    }

    #[test]
    fn thresholds_reject_asymmetry() {
        let mut p = ModelParams::symmetric(1.0);
        p.tau2 = 3.0;
        assert_eq!(diagonal_thresholds(&p), Err(Error::NotSymmetric));
    }

    #[test]
    fn k_bar_bisection_agrees() {
        let p = ModelParams::symmetric(1.0);
        let a = diagonal_thresholds(&p).unwrap().k_bar;
        let b = k_bar_by_bisection(&p).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn equilibrium_curve_values() {
        let p = ModelParams::canonical(1.0, 1.0);
        assert!((bce1_k2(&p, 0.4) - 1.1733333333).abs() < 1e-9);
        let (_, hi) = bce2_crossings(&p, 1.0).unwrap();
        assert!((hi - 1.1830127).abs() < 1e-7);
        let [e1, e2] = bcb_equilibrium_curves(&p, (0.0, 1.5), 301).unwrap();
        for (k1, k2) in e1.points {
            assert!((k2 - k1 * 4.0 * (1.0 - k1 / 1.5)).abs() < 1e-12);
        }
        assert_eq!(e2.points.len(), 301);
        // the curves meet on the diagonal at N (1 - 1/tau)
        assert!((bce1_k2(&p, 1.125) - 1.125).abs() < 1e-12);
        assert!((bce2_k1(&p, 1.125) - 1.125).abs() < 1e-12);
    }

    #[test]
    fn smoothness_curve_values() {
        let p = ModelParams::canonical(1.0, 1.0);
        assert!((bcp2_k2(&p, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((bcp2_k2_numeric(&p, 1.0) - 4.0 / 3.0).abs() < 1e-9);
        let k1 = bcp2_k1_at(&p, 1.37).unwrap();
        assert!((k1 - 0.963).abs() < 0.002, "{k1}");
        // the line maximum involves F2(K, .), not the diagonal cubic, so the
        // crossing with K1 = K2 is not at k_smooth
        let kd = roots::bisect_full(|k| bcp2_k2(&p, k).unwrap() - k, 1.0, 1.5).unwrap();
        assert!((kd - 1.1675567).abs() < 1e-7, "{kd}");
        assert!((bcp1_k1(&p, kd).unwrap() - kd).abs() < 1e-12);
        let ks = diagonal_thresholds(&p).unwrap().k_smooth;
        assert!((kd - ks).abs() > 0.2);
    }

    #[test]
    fn sn2_examples() {
        let p = ModelParams::canonical(1.0, 1.0);
        let k1 = bcb_2cycle_saddle_node(&p, 1.42).unwrap();
        assert!((0.4930..=0.4940).contains(&k1), "{k1}");
        assert!(sn2_residual(&p, k1, 1.42).abs() < 1e-9);
        assert!(matches!(bcb_2cycle_saddle_node(&p, 1.0), Err(Error::NoRoot(_))));
        assert!(sn2_residual(&p, 1.125, 1.125).abs() < 1e-12);
    }
}
