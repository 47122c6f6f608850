//! Scalar root finding: sign-change scans, bisection and a Newton polish.

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite sign (or zero).
/// Stops when the bracket is narrower than `tol` or stops shrinking.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection down to machine resolution.
pub fn bisect_full<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Option<f64> {
    bisect(f, lo, hi, 0.0)
}

/// One Newton step from `x`, kept only if it stays inside `[lo, hi]` and
/// does not increase `|f|`.
pub fn newton_polish<F, D>(f: F, df: D, x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fx = f(x);
    let d = df(x);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let y = x - fx / d;
    if y >= lo && y <= hi && f(y).abs() <= fx.abs() {
        y
    } else {
        x
    }
}

/// Brackets `[a, b]` of the sign changes of `f` on a uniform `n`-interval grid.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (vs[i], vs[i + 1]);
        if a == 0.0 {
            out.push((xs[i], xs[i]));
        } else if a.signum() != b.signum() && b != 0.0 && a.is_finite() && b.is_finite() {
            out.push((xs[i], xs[i + 1]));
        }
    }
    if vs[n] == 0.0 {
        out.push((xs[n], xs[n]));
    }
    out
}

/// All roots of `f` on `[lo, hi]` found by scanning `n` intervals and bisecting.
pub fn roots_in<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    sign_changes(&f, lo, hi, n)
        .into_iter()
        .filter_map(|(a, b)| if a == b { Some(a) } else { bisect_full(&f, a, b) })
        .collect()
}

/// Maximum of a unimodal `f` on `[lo, hi]` by golden-section search.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
        if a >= b {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_unbracketed() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn newton_polish_improves() {
        let f = |x: f64| x * x - 2.0;
        let y = newton_polish(f, |x| 2.0 * x, 1.4142, 1.0, 2.0);
        assert!(f(y).abs() < f(1.4142).abs());
    }

    #[test]
    fn golden_finds_parabola_top() {
        let (x, v) = golden_max(|x| 1.0 - (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8 && (v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn roots_of_cubic() {
        let rs = roots_in(|x| (x - 0.1) * (x - 0.5) * (x - 0.9), 0.0, 1.0, 1000);
        assert_eq!(rs.len(), 3);
        for (r, w) in rs.iter().zip([0.1, 0.5, 0.9]) {
            assert!((r - w).abs() < 1e-12);
        }
    }
}
