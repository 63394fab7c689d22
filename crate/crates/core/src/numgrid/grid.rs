use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::stencil::fornberg_weights;
use crate::error::{Error, Result};

/// Smallest node count accepted on any axis.
pub const MIN_NODES: usize = 8;

/// Integration domain of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// Closed interval `[a, b]`.
    Segment { a: f64, b: f64 },
    /// Azimuthal angle on `[0, 2π)`.
    Circle,
    /// Product of two closed intervals.
    Plane { x: [f64; 2], y: [f64; 2] },
    /// Polar angle `θ ∈ [0, π]` times azimuth `φ ∈ [0, 2π)`.
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    /// Closed interval, composite trapezoid weights.
    Segment,
    /// `[0, 2π)` sampled at `k·2π/N`.
    Circle,
    /// Polar angle `[0, π]`; weights carry the `sin θ` Jacobian.
    Polar,
}

/// One uniformly spaced axis with its quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    kind: AxisKind,
    start: f64,
    step: f64,
    len: usize,
    weights: Vec<f64>,
}

impl Axis {
    fn segment(a: f64, b: f64, n: usize) -> Result<Axis> {
        check_nodes(n)?;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::BadBounds);
        }
        let step = (b - a) / (n - 1) as f64;
        let mut weights = vec![step; n];
        weights[0] = 0.5 * step;
        weights[n - 1] = 0.5 * step;
        Ok(Axis { kind: AxisKind::Segment, start: a, step, len: n, weights })
    }

    /// The circle is integrated as the closed segment `[0, 2π]`. Each panel
    /// `[φ_k, φ_{k+1}]` is integrated exactly against the degree-7 interpolant
    /// through the nearest eight nodes; the last panel ends at `2π`, which is
    /// not a node, so its interpolant extrapolates from the last eight
    /// nodes. Interior weights reduce to the periodic trapezoid value `h`.
    fn circle(n: usize) -> Result<Axis> {
        check_nodes(n)?;
        let step = 2.0 * PI / n as f64;
        let weights = composite_panel_weights(n, n, step);
        Ok(Axis { kind: AxisKind::Circle, start: 0.0, step, len: n, weights })
    }

    /// Clenshaw–Curtis weights in `cos θ` on the uniform `θ` nodes, so that
    /// `Σ w_k f(θ_k) ≈ ∫ f(θ) sin θ dθ`.
    fn polar(n: usize) -> Result<Axis> {
        check_nodes(n)?;
        let intervals = n - 1;
        let step = PI / intervals as f64;
        let nf = intervals as f64;
        let half = intervals / 2;
        let weights = (0..n)
            .map(|k| {
                let theta = k as f64 * step;
                let mut acc = 1.0;
                for j in 1..=half {
                    let b = if 2 * j == intervals { 1.0 } else { 2.0 };
                    let jf = j as f64;
                    acc -= b / (4.0 * jf * jf - 1.0) * (2.0 * jf * theta).cos();
                }
                let c = if k == 0 || k == intervals { 1.0 } else { 2.0 };
                c / nf * acc
            })
            .collect();
        Ok(Axis { kind: AxisKind::Polar, start: 0.0, step, len: n, weights })
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn node(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.node(i)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Length of the coordinate interval (`2π` for the circle).
    pub fn span(&self) -> f64 {
        match self.kind {
            AxisKind::Circle => 2.0 * PI,
            _ => self.step * (self.len - 1) as f64,
        }
    }

    /// Upper end of the coordinate interval.
    pub fn end(&self) -> f64 {
        self.start + self.span()
    }
}

/// Interpolation order of the circle rule and of endpoint extrapolation.
pub(crate) const CIRCLE_RULE_POINTS: usize = 8;

/// Weights of the composite rule over `panels` panels of width `step` on
/// `n` nodes (`panels == n` means the last panel extrapolates).
fn composite_panel_weights(n: usize, panels: usize, step: f64) -> Vec<f64> {
    // 4-point Gauss–Legendre on [-1, 1]; exact for the degree-7 interpolants.
    const GL: [(f64, f64); 4] = [
        (-0.861_136_311_594_052_6, 0.347_854_845_137_453_8),
        (-0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
        (0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
        (0.861_136_311_594_052_6, 0.347_854_845_137_453_8),
    ];
    let p = CIRCLE_RULE_POINTS;
    let mut w = vec![0.0; n];
    for k in 0..panels {
        let start = k.saturating_sub(p / 2 - 1).min(n - p);
        let window: Vec<f64> = (start..start + p).map(|j| j as f64).collect();
        for (t, gw) in GL {
            let z = k as f64 + 0.5 + 0.5 * t;
            let interp = &fornberg_weights(z, &window, 0)[0];
            for (j, c) in interp.iter().enumerate() {
                w[start + j] += 0.5 * gw * c * step;
            }
        }
    }
    w
}

fn check_nodes(n: usize) -> Result<()> {
    if n < MIN_NODES {
        return Err(Error::TooFewNodes { min: MIN_NODES, got: n });
    }
    Ok(())
}

/// Tensor-product grid. Values are stored row-major: the last axis varies
/// fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    domain: Domain,
    axes: Vec<Axis>,
    weights: Vec<f64>,
}

impl Grid {
    /// Builds a grid with one node count per axis of `domain`.
    pub fn build(domain: Domain, nodes: &[usize]) -> Result<Arc<Grid>> {
        let axes = match (domain, nodes) {
            (Domain::Segment { a, b }, &[n]) => vec![Axis::segment(a, b, n)?],
            (Domain::Circle, &[n]) => vec![Axis::circle(n)?],
            (Domain::Plane { x, y }, &[nx, ny]) => {
                vec![Axis::segment(x[0], x[1], nx)?, Axis::segment(y[0], y[1], ny)?]
            }
            (Domain::Sphere, &[nt, np]) => vec![Axis::polar(nt)?, Axis::circle(np)?],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "{} node counts given for domain {:?}",
                    nodes.len(),
                    domain
                )))
            }
        };
        let weights = match axes.as_slice() {
            [a] => a.weights.clone(),
            [a, b] => a
                .weights
                .iter()
                .flat_map(|wa| b.weights.iter().map(move |wb| wa * wb))
                .collect(),
            _ => unreachable!(),
        };
        Ok(Arc::new(Grid { domain, axes, weights }))
    }

    pub fn segment(a: f64, b: f64, n: usize) -> Result<Arc<Grid>> {
        Grid::build(Domain::Segment { a, b }, &[n])
    }

    pub fn circle(n: usize) -> Result<Arc<Grid>> {
        Grid::build(Domain::Circle, &[n])
    }

    pub fn plane(x: [f64; 2], y: [f64; 2], nx: usize, ny: usize) -> Result<Arc<Grid>> {
        Grid::build(Domain::Plane { x, y }, &[nx, ny])
    }

    pub fn sphere(n_theta: usize, n_phi: usize) -> Result<Arc<Grid>> {
        Grid::build(Domain::Sphere, &[n_theta, n_phi])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn ndim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    /// Quadrature weight of every node, including Jacobians.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Exact measure of the domain.
    pub fn measure(&self) -> f64 {
        match self.domain {
            Domain::Segment { a, b } => b - a,
            Domain::Circle => 2.0 * PI,
            Domain::Plane { x, y } => (x[1] - x[0]) * (y[1] - y[0]),
            Domain::Sphere => 4.0 * PI,
        }
    }

    /// Multi-index of a flat node index.
    pub fn unravel(&self, flat: usize) -> [usize; 2] {
        match self.axes.as_slice() {
            [_] => [flat, 0],
            [_, b] => [flat / b.len, flat % b.len],
            _ => unreachable!(),
        }
    }

    /// Coordinates of a flat node index; unused trailing entries are zero.
    pub fn point(&self, flat: usize) -> [f64; 2] {
        let idx = self.unravel(flat);
        let mut p = [0.0; 2];
        for (k, axis) in self.axes.iter().enumerate() {
            p[k] = axis.node(idx[k]);
        }
        p
    }

    /// Coordinate along `axis` at every node.
    pub fn coordinate(&self, axis: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)[axis]).collect()
    }

    /// Number of nodes between consecutive samples along `axis` in the flat
    /// layout, together with the number of lines before and after it.
    pub(crate) fn line_layout(&self, axis: usize) -> (usize, usize, usize) {
        let shape = self.shape();
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        (outer, shape[axis], inner)
    }
}
