//! Short functions and little-o witnesses.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Decreasing slack budget D(t) for paths of chord length t.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ShortFunction {
    /// 1 / (1 ∨ 2t).
    #[default]
    Standard,
    /// 1 / (1 ∨ t).
    Reciprocal,
    /// Linear interpolation of sampled (t, D(t)) pairs, constant before the
    /// first sample and D(t_last)·t_last/t after the last.
    CustomTable { values: Vec<[f64; 2]> },
}

/// Outcome of checking the short-function axioms on a sample grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShortCheck {
    pub decreasing: bool,
    pub in_range: bool,
    pub reciprocal_bound: bool,
    pub lipschitz: bool,
    /// Steepest sampled slope |D(s) − D(t)| / |s − t| and where it occurs.
    pub worst_slope: f64,
    pub worst_slope_at: f64,
}

impl ShortCheck {
    pub fn passed(&self) -> bool {
        self.decreasing && self.in_range && self.reciprocal_bound && self.lipschitz
    }
}

impl ShortFunction {
    pub fn custom(mut values: Vec<[f64; 2]>) -> Result<Self> {
        if values.is_empty() {
            return Err(GeomError::Invalid("custom short function needs samples".into()));
        }
        if values.iter().any(|v| !(v[0] >= 0.0 && v[0].is_finite() && v[1].is_finite())) {
            return Err(GeomError::Invalid("custom short function samples must be finite, t ≥ 0".into()));
        }
        values.sort_by(|a, b| a[0].total_cmp(&b[0]));
        Ok(ShortFunction::CustomTable { values })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            ShortFunction::Standard => 1.0 / (2.0 * t).max(1.0),
            ShortFunction::Reciprocal => 1.0 / t.max(1.0),
            ShortFunction::CustomTable { values } => {
                let first = values[0];
                let last = values[values.len() - 1];
                if t <= first[0] {
                    return first[1];
                }
                if t >= last[0] {
                    return if last[0] > 0.0 { last[1] * last[0] / t } else { last[1] };
                }
                let i = values.partition_point(|v| v[0] <= t);
                let (a, b) = (values[i - 1], values[i]);
                let f = (t - a[0]) / (b[0] - a[0]);
                a[1] + f * (b[1] - a[1])
            }
        }
    }

    /// Whether D(t) ≤ 1/(1 ∨ 2t) at every sampled t, which lets rebasing
    /// aim at tips instead of midpoints.
    pub fn below_standard(&self) -> bool {
        match self {
            ShortFunction::Standard => true,
            ShortFunction::Reciprocal => false,
            ShortFunction::CustomTable { .. } => sample_grid(self)
                .into_iter()
                .all(|t| self.eval(t) <= ShortFunction::Standard.eval(t) + 1e-12),
        }
    }

    /// Checks monotonicity, range (0,1], D(t) ≤ 1/t for t > 1 and the
    /// 1-Lipschitz condition on a grid of spacing 1/64 over [0, 16] plus the
    /// table abscissae.
    pub fn check(&self) -> ShortCheck {
        let grid = sample_grid(self);
        let vals: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        let mut c = ShortCheck {
            decreasing: true,
            in_range: true,
            reciprocal_bound: true,
            lipschitz: true,
            worst_slope: 0.0,
            worst_slope_at: 0.0,
        };
        for (i, (&t, &v)) in grid.iter().zip(&vals).enumerate() {
            if !(v > 0.0 && v <= 1.0) {
                c.in_range = false;
            }
            if t > 1.0 && v > 1.0 / t + 1e-12 {
                c.reciprocal_bound = false;
            }
            if i > 0 {
                let (s, u) = (grid[i - 1], vals[i - 1]);
                if v > u + 1e-12 {
                    c.decreasing = false;
                }
                let slope = (u - v).abs() / (t - s);
                if slope > c.worst_slope {
                    c.worst_slope = slope;
                    c.worst_slope_at = s;
                }
            }
        }
        c.lipschitz = c.worst_slope <= 1.0 + 1e-9;
        c
    }
}

fn sample_grid(d: &ShortFunction) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=16 * 64).map(|k| k as f64 / 64.0).collect();
    if let ShortFunction::CustomTable { values } = d {
        grid.extend(values.iter().map(|v| v[0]));
        let last = values[values.len() - 1][0];
        grid.extend((1..=64).map(|k| last + k as f64 / 8.0));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// δ(t) = K + a·t^p with K, a ≥ 0 and 0 ≤ p < 1, so δ(t)/t → 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LittleOWitness {
    #[serde(rename = "K")]
    pub k: f64,
    pub a: f64,
    pub p: f64,
}

impl LittleOWitness {
    pub fn new(k: f64, a: f64, p: f64) -> Result<Self> {
        let w = LittleOWitness { k, a, p };
        w.check()?;
        Ok(w)
    }

    pub fn constant(k: f64) -> Self {
        LittleOWitness { k, a: 0.0, p: 0.0 }
    }

    /// 1 + √t.
    pub fn default_loose() -> Self {
        LittleOWitness { k: 1.0, a: 1.0, p: 0.5 }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.k >= 0.0 && self.a >= 0.0 && self.k.is_finite() && self.a.is_finite()) {
            return Err(GeomError::Invalid(format!(
                "witness needs K, a ≥ 0 (got K = {}, a = {})",
                self.k, self.a
            )));
        }
        if !(self.p >= 0.0 && self.p < 1.0) {
            return Err(GeomError::Invalid(format!(
                "witness exponent p = {} is not in [0, 1): δ(t)/t would not tend to 0",
                self.p
            )));
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        if self.a == 0.0 {
            self.k
        } else {
            self.k + self.a * t.powf(self.p)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0.0
    }

    /// Whether δ is 1-Lipschitz on [t_min, ∞): the derivative a·p·t^(p−1)
    /// is decreasing, so checking t_min suffices.
    pub fn lipschitz_from(&self, t_min: f64) -> bool {
        if self.a == 0.0 || self.p == 0.0 {
            return true;
        }
        t_min > 0.0 && self.a * self.p * t_min.powf(self.p - 1.0) <= 1.0 + 1e-12
    }

    pub fn shifted(&self, by: f64) -> Self {
        LittleOWitness { k: self.k + by, ..*self }
    }
}
