//! Model constants and phase-plane points.

use crate::error::{Error, Result};

/// One of the two populations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    One,
    Two,
}

/// All constants of the constrained segregation map.
///
/// `gamma` is the adjustment speed, `tau` the tolerance level, `n` the
/// population size and `k` the entry constraint of each group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub n1: f64,
    pub n2: f64,
    pub k1: f64,
    pub k2: f64,
}

impl ModelParams {
    /// The benchmark instance gamma=1, tau=4, N=1.5 with the given constraints.
    pub fn canonical(k1: f64, k2: f64) -> Self {
        ModelParams {
            gamma1: 1.0,
            gamma2: 1.0,
            tau1: 4.0,
            tau2: 4.0,
            n1: 1.5,
            n2: 1.5,
            k1,
            k2,
        }
    }

    /// Canonical instance with `k1 = k2 = k`.
    pub fn symmetric(k: f64) -> Self {
        Self::canonical(k, k)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
            ("n1", self.n1),
            ("n2", self.n2),
            ("k1", self.k1),
            ("k2", self.k2),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.k1 > self.n1 {
            return Err(Error::InvalidParams(format!(
                "rule k1 <= n1 violated: k1 = {} > n1 = {}",
                self.k1, self.n1
            )));
        }
        if self.k2 > self.n2 {
            return Err(Error::InvalidParams(format!(
                "rule k2 <= n2 violated: k2 = {} > n2 = {}",
                self.k2, self.n2
            )));
        }
        Ok(())
    }

    /// Same constants with different constraints.
    pub fn with_k(&self, k1: f64, k2: f64) -> Self {
        ModelParams { k1, k2, ..*self }
    }

    /// Exchange the roles of the two groups.
    pub fn swapped(&self) -> Self {
        ModelParams {
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            tau1: self.tau2,
            tau2: self.tau1,
            n1: self.n2,
            n2: self.n1,
            k1: self.k2,
            k2: self.k1,
        }
    }

    /// gamma, tau and N coincide for both groups (constraints may differ).
    pub fn is_exchange_symmetric(&self) -> bool {
        self.gamma1 == self.gamma2 && self.tau1 == self.tau2 && self.n1 == self.n2
    }

    /// Exchange symmetric and `k1 == k2`.
    pub fn is_fully_symmetric(&self) -> bool {
        self.is_exchange_symmetric() && self.k1 == self.k2
    }

    pub fn gamma(&self, g: Group) -> f64 {
        match g {
            Group::One => self.gamma1,
            Group::Two => self.gamma2,
        }
    }

    pub fn tau(&self, g: Group) -> f64 {
        match g {
            Group::One => self.tau1,
            Group::Two => self.tau2,
        }
    }

    pub fn n(&self, g: Group) -> f64 {
        match g {
            Group::One => self.n1,
            Group::Two => self.n2,
        }
    }

    pub fn k(&self, g: Group) -> f64 {
        match g {
            Group::One => self.k1,
            Group::Two => self.k2,
        }
    }

    /// The absorbing rectangle `[0, k1] x [0, k2]`.
    pub fn absorbing_rect(&self) -> (f64, f64) {
        (self.k1, self.k2)
    }
}

/// A point `(x1, x2)` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub x1: f64,
    pub x2: f64,
}

impl State {
    pub const ORIGIN: State = State { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        State { x1, x2 }
    }

    pub fn swapped(self) -> Self {
        State { x1: self.x2, x2: self.x1 }
    }

    /// Sup-norm distance.
    pub fn dist_inf(self, other: State) -> f64 {
        (self.x1 - other.x1).abs().max((self.x2 - other.x2).abs())
    }

    pub fn in_rect(self, k1: f64, k2: f64) -> bool {
        (0.0..=k1).contains(&self.x1) && (0.0..=k2).contains(&self.x2)
    }
}

impl From<(f64, f64)> for State {
    fn from((x1, x2): (f64, f64)) -> Self {
        State { x1, x2 }
    }
}

/// Axis-aligned rectangle of the phase plane (or of the parameter plane).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Window { x_min, x_max, y_min, y_max }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Window::new(lo, hi, lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("degenerate window {self:?}")))
        }
    }

    /// Center of cell `(i, j)` of a `res x res` partition; `i` runs along x.
    pub fn cell_center(&self, i: usize, j: usize, res: usize) -> (f64, f64) {
        let dx = (self.x_max - self.x_min) / res as f64;
        let dy = (self.y_max - self.y_min) / res as f64;
        (
            self.x_min + (i as f64 + 0.5) * dx,
            self.y_min + (j as f64 + 0.5) * dy,
        )
    }

    /// Index of the cell containing `(x, y)`, clamped to the grid.
    pub fn cell_of(&self, x: f64, y: f64, res: usize) -> (usize, usize) {
        let fx = (x - self.x_min) / (self.x_max - self.x_min) * res as f64;
        let fy = (y - self.y_min) / (self.y_max - self.y_min) * res as f64;
        let clamp = |f: f64| (f.floor().max(0.0) as usize).min(res - 1);
        (clamp(fx), clamp(fy))
    }
}

impl Default for Window {
    /// The `[0, 2] x [0, 2]` plotting window.
    fn default() -> Self {
        Window::square(0.0, 2.0)
    }
}
