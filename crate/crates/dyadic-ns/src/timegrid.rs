//! Graded time grid on `[0, T]` and fields sampled on it.
//!
//! Nodes are `t_m = T (m/M)²` for `m = 1…M`, clustering toward `t = 0` where
//! weighted norms and small-time limits need resolution. Quadrature over
//! `[0, T]` uses a composite parabolic rule on the nodes plus a constant
//! extension over the unresolved leading sliver `[0, t_1]`.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
    nodes: Vec<f64>,
    /// Per-node weights of the composite rule; they sum to `horizon`.
    weights: Vec<f64>,
}

impl TimeGrid {
    /// Graded grid with `steps ≥ 4` nodes over `(0, horizon]`.
    pub fn graded(horizon: f64, steps: usize) -> Result<Self> {
        if horizon <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if steps < 4 {
            return Err(Error::InvalidParameter(format!(
                "time grid needs at least 4 nodes, got {steps}"
            )));
        }
        let m = steps as f64;
        let nodes: Vec<f64> = (1..=steps)
            .map(|i| horizon * (i as f64 / m).powi(2))
            .collect();
        let weights = composite_weights(&nodes);
        debug_assert!(weights.iter().all(|&w| w > 0.0), "quadrature weights must be positive");
        Ok(TimeGrid {
            horizon,
            steps,
            nodes,
            weights,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, m: usize) -> f64 {
        self.nodes[m]
    }

    /// Smallest resolved time `t_1 = T/M²` — the effective `t → 0` probe.
    pub fn first_node(&self) -> f64 {
        self.nodes[0]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index of the node equal to `t` (relative tolerance `1e-12`).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let tol = 1e-12 * self.horizon;
        self.nodes
            .iter()
            .position(|&s| (s - t).abs() <= tol)
            .ok_or(Error::NotATimeNode { t })
    }

    /// `∫_0^T f dt` for a series sampled on the nodes.
    pub fn integrate(&self, series: &[f64]) -> f64 {
        series
            .iter()
            .zip(&self.weights)
            .map(|(&f, &w)| f * w)
            .sum()
    }

    /// Running integral `∫_0^{t_m} f dt` at every node.
    pub fn cumulative(&self, series: &[f64]) -> Vec<f64> {
        assert_eq!(series.len(), self.steps);
        let pieces = interval_pieces(&self.nodes, series);
        let mut acc = 0.0;
        pieces
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// Integral contribution of `[0, t_1]` (constant extension) and of each
/// inter-node interval (averaged parabolic rule).
fn interval_pieces(nodes: &[f64], series: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let mut pieces = Vec::with_capacity(m);
    pieces.push(nodes[0] * series[0]);
    for i in 0..m - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let left = if i >= 1 {
            Some(parabola_integral(nodes, series, i - 1, a, b))
        } else {
            None
        };
        let right = if i + 2 < m {
            Some(parabola_integral(nodes, series, i, a, b))
        } else {
            None
        };
        let piece = match (left, right) {
            (Some(l), Some(r)) => 0.5 * (l + r),
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => 0.5 * (series[i] + series[i + 1]) * (b - a),
        };
        pieces.push(piece);
    }
    pieces
}

/// `∫_a^b` of the parabola through nodes `i0, i0+1, i0+2`.
fn parabola_integral(nodes: &[f64], series: &[f64], i0: usize, a: f64, b: f64) -> f64 {
    let x = [nodes[i0], nodes[i0 + 1], nodes[i0 + 2]];
    let y = [series[i0], series[i0 + 1], series[i0 + 2]];
    lagrange_integral(&x, &y, a, b)
}

/// Per-node quadrature weights (used for linear functionals of the series).
fn composite_weights(nodes: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let mut weights = vec![0.0; m];
    weights[0] += nodes[0];
    for i in 0..m - 1 {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let mut stencils: Vec<usize> = Vec::with_capacity(2);
        if i >= 1 {
            stencils.push(i - 1);
        }
        if i + 2 < m {
            stencils.push(i);
        }
        if stencils.is_empty() {
            weights[i] += 0.5 * (b - a);
            weights[i + 1] += 0.5 * (b - a);
            continue;
        }
        let share = 1.0 / stencils.len() as f64;
        for i0 in stencils {
            for offset in 0..3 {
                let unit = [
                    (offset == 0) as usize as f64,
                    (offset == 1) as usize as f64,
                    (offset == 2) as usize as f64,
                ];
                let x = [nodes[i0], nodes[i0 + 1], nodes[i0 + 2]];
                weights[i0 + offset] += share * lagrange_integral(&x, &unit, a, b);
            }
        }
    }
    weights
}

/// `∫_a^b` of the parabola through `(x_i, y_i)`, evaluated in the local
/// variable `u = t - a` so nearby large abscissae do not cancel.
fn lagrange_integral(x: &[f64; 3], y: &[f64; 3], a: f64, b: f64) -> f64 {
    let h = b - a;
    let mut total = 0.0;
    for i in 0..3 {
        let (p, q) = match i {
            0 => (x[1], x[2]),
            1 => (x[0], x[2]),
            _ => (x[0], x[1]),
        };
        let denom = (x[i] - p) * (x[i] - q);
        let (dp, dq) = (a - p, a - q);
        // ∫_0^h (u+dp)(u+dq) du
        let integral = h * h * h / 3.0 + 0.5 * (dp + dq) * h * h + dp * dq * h;
        total += y[i] * integral / denom;
    }
    total
}

/// A field trajectory sampled on a graded time grid.
#[derive(Debug, Clone)]
pub struct TimeSeriesField {
    grid: Grid,
    timegrid: TimeGrid,
    snapshots: Vec<SpectralField>,
}

impl TimeSeriesField {
    pub fn new(grid: Grid, timegrid: TimeGrid, snapshots: Vec<SpectralField>) -> Result<Self> {
        if snapshots.len() != timegrid.steps() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} snapshots, got {}",
                timegrid.steps(),
                snapshots.len()
            )));
        }
        for s in &snapshots {
            if s.grid() != grid {
                return Err(Error::GridMismatch(
                    "snapshot grid differs from the series grid".into(),
                ));
            }
        }
        Ok(TimeSeriesField {
            grid,
            timegrid,
            snapshots,
        })
    }

    /// Build a trajectory by evaluating `make(m, t_m)` at every node.
    pub fn from_fn(
        grid: Grid,
        timegrid: TimeGrid,
        mut make: impl FnMut(usize, f64) -> SpectralField,
    ) -> Self {
        let snapshots = timegrid
            .nodes()
            .iter()
            .enumerate()
            .map(|(m, &t)| make(m, t))
            .collect();
        TimeSeriesField {
            grid,
            timegrid,
            snapshots,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn timegrid(&self) -> &TimeGrid {
        &self.timegrid
    }

    pub fn snapshots(&self) -> &[SpectralField] {
        &self.snapshots
    }

    pub fn snapshot(&self, m: usize) -> &SpectralField {
        &self.snapshots[m]
    }

    pub fn components(&self) -> usize {
        self.snapshots[0].components()
    }

    /// Snapshot-wise linear combination `self + a·other`.
    pub fn axpy(&self, a: f64, other: &TimeSeriesField) -> TimeSeriesField {
        assert_eq!(self.timegrid, other.timegrid, "time grids differ");
        let snapshots = self
            .snapshots
            .iter()
            .zip(&other.snapshots)
            .map(|(x, y)| x.axpy(a, y))
            .collect();
        TimeSeriesField {
            grid: self.grid,
            timegrid: self.timegrid.clone(),
            snapshots,
        }
    }

    pub fn add(&self, other: &TimeSeriesField) -> TimeSeriesField {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &TimeSeriesField) -> TimeSeriesField {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> TimeSeriesField {
        TimeSeriesField {
            grid: self.grid,
            timegrid: self.timegrid.clone(),
            snapshots: self.snapshots.iter().map(|s| s.scale(a)).collect(),
        }
    }
}
