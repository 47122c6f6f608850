use crate::error::{Error, Result};
use crate::restrict::{Letter, Map1D};

/// An attracting cycle of a 1-D map.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub period: usize,
    /// Orbit order, starting at the largest point.
    pub points: Vec<f64>,
    /// Some point lies on a flat branch, so the multiplier is 0.
    pub superstable: bool,
    /// Itinerary, minimal rotation.
    pub word: String,
}

pub const MAX_PERIOD_LIMIT: usize = 64;
pub const SEEDS: usize = 1000;
pub const CYCLE_TOL: f64 = 1e-9;
const TRANSIENT: usize = 2000;
const ROUNDS: usize = 3;
/// Two detected cycles of the same period are the same cycle when their
/// points agree to this.
const MERGE_TOL: f64 = 1e-7;

fn iterate<M: Map1D + ?Sized>(map: &M, mut x: f64, n: usize) -> Option<f64> {
    for _ in 0..n {
        x = map.apply(x)?;
    }
    Some(x)
}

/// Minimal `n <= max_period` with `|f^n(x) - x| < CYCLE_TOL`, confirmed over
/// a second turn of the cycle.
fn detect<M: Map1D + ?Sized>(map: &M, x: f64, max_period: usize) -> Option<Vec<f64>> {
    let mut orbit = Vec::with_capacity(2 * max_period + 1);
    orbit.push(x);
    let mut y = x;
    for _ in 0..2 * max_period {
        y = map.apply(y)?;
        orbit.push(y);
    }
    (1..=max_period)
        .find(|&n| (0..=n).all(|t| (orbit[t + n] - orbit[t]).abs() < CYCLE_TOL))
        .map(|n| orbit[..n].to_vec())
}

/// Attracting and superstable cycles reached from a grid of seeds.
///
/// The trivial fixed point 0 is not reported.
pub fn find_cycles_1d<M: Map1D + ?Sized>(map: &M, max_period: usize) -> Result<Vec<CycleRecord>> {
    if max_period == 0 || max_period > MAX_PERIOD_LIMIT {
        return Err(Error::InvalidConfig(format!(
            "max_period must be in 1..={MAX_PERIOD_LIMIT}, got {max_period}"
        )));
    }
    let (lo, hi) = map.domain();
    let mut found: Vec<CycleRecord> = Vec::new();
    for i in 0..SEEDS {
        let mut x = lo + (hi - lo) * (i as f64 + 0.5) / SEEDS as f64;
        let mut pts = None;
        for _ in 0..ROUNDS {
            let Some(y) = iterate(map, x, TRANSIENT) else { break };
            x = y;
            pts = detect(map, x, max_period);
            if pts.is_some() {
                break;
            }
        }
        let Some(mut pts) = pts else { continue };
        if pts.len() == 1 && pts[0].abs() < 1e-12 {
            continue;
        }
        let top = (0..pts.len()).max_by(|&a, &b| pts[a].total_cmp(&pts[b])).unwrap_or(0);
        pts.rotate_left(top);
        let dup = found.iter().any(|c| {
            c.period == pts.len() && c.points.iter().zip(&pts).all(|(a, b)| (a - b).abs() < MERGE_TOL)
        });
        if dup {
            continue;
        }
        let letters = letters(map, &pts)?;
        let superstable = letters.iter().any(|l| matches!(l, Letter::F | Letter::B));
        found.push(CycleRecord {
            period: pts.len(),
            word: min_rotation(&letters),
            points: pts,
            superstable,
        });
    }
    found.sort_by(|a, b| a.period.cmp(&b.period).then(a.points[0].total_cmp(&b.points[0])));
    Ok(found)
}

fn letters<M: Map1D + ?Sized>(map: &M, pts: &[f64]) -> Result<Vec<Letter>> {
    pts.iter()
        .map(|&x| {
            map.letter(x)
                .ok_or(Error::OutOfDomain { x, lo: map.domain().0, hi: map.domain().1 })
        })
        .collect()
}

fn min_rotation(letters: &[Letter]) -> String {
    let s: Vec<char> = letters.iter().map(|l| l.as_char()).collect();
    (0..s.len())
        .map(|r| s[r..].iter().chain(&s[..r]).collect::<String>())
        .min()
        .unwrap_or_default()
}

/// Word of a cycle: `L`/`R` on increasing/decreasing smooth pieces, `F` on a
/// flat piece, `C` at a critical point, `B` exactly on a border; reported as
/// its lexicographically smallest rotation.
pub fn symbolic_itinerary<M: Map1D + ?Sized>(map: &M, cycle: &[f64]) -> Result<String> {
    if cycle.is_empty() {
        return Err(Error::InvalidConfig("empty cycle".into()));
    }
    for (i, &x) in cycle.iter().enumerate() {
        let next = cycle[(i + 1) % cycle.len()];
        let y = map
            .apply(x)
            .ok_or(Error::OutOfDomain { x, lo: map.domain().0, hi: map.domain().1 })?;
        if (y - next).abs() > CYCLE_TOL {
            return Err(Error::InvalidConfig(format!(
                "not a cycle: {x} maps to {y}, expected {next}"
            )));
        }
    }
    Ok(min_rotation(&letters(map, cycle)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::restrict::{build_restriction, RestrictionTag};

    fn diag(k: f64) -> crate::restrict::PiecewiseMap1D {
        build_restriction(&ModelParams::symmetric(k), RestrictionTag::Diagonal).unwrap()
    }

    #[test]
    fn k12_two_cycle() {
        let cs = find_cycles_1d(&diag(1.2), 30).unwrap();
        assert_eq!(cs.len(), 1, "{cs:?}");
        let c = &cs[0];
        assert_eq!(c.period, 2);
        assert_eq!(c.points[0], 1.2);
        assert!((c.points[1] - 0.912).abs() < 1e-9);
        assert!(c.superstable);
        assert_eq!(c.word, "FR");
    }

    #[test]
    fn k1_fixed_point_word() {
        let m = diag(1.0);
        let cs = find_cycles_1d(&m, 30).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].points, vec![1.0]);
        assert_eq!(symbolic_itinerary(&m, &[1.0]).unwrap(), "F");
    }

    #[test]
    fn k126_four_cycle() {
        let m = diag(1.26);
        let cs = find_cycles_1d(&m, 30).unwrap();
        let c = cs.iter().find(|c| c.period == 4).expect("4-cycle");
        assert!(c.superstable);
        assert_eq!(c.points[0], 1.26);
        assert_eq!(c.word.matches('F').count(), 1);
    }

    #[test]
    fn k12895_three_cycle() {
        let cs = find_cycles_1d(&diag(1.2895), 30).unwrap();
        assert!(cs.iter().any(|c| c.period == 3), "{cs:?}");
    }

    #[test]
    fn itinerary_rejects_non_cycle() {
        assert!(symbolic_itinerary(&diag(1.2), &[1.2, 0.5]).is_err());
    }

    #[test]
    fn period_limit() {
        assert!(find_cycles_1d(&diag(1.2), 65).is_err());
    }
}
