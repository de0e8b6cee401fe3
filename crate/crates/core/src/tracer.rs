//! Marching-squares tracing of the zero set of a function on a grid.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isoptics::{branch_residuals, IsopticQuery};
use crate::kernel::GeometryKind;

/// Edge crossings are bisected until the residual drops below this value.
pub const REFINE_TOL: f64 = 1e-10;
pub const REFINE_MAX_ITER: usize = 80;
/// Radius of the disk inside which hyperbolic cells are traced.
pub const HYPERBOLIC_MASK_RADIUS: f64 = 1.0 - 1e-6;
pub const DEFAULT_RESOLUTION: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Result<Self> {
        let vp = Self { xmin, xmax, ymin, ymax, nx, ny };
        vp.validate()?;
        Ok(vp)
    }

    /// `[-r, r]²` with an `n × n` grid.
    pub fn square(r: f64, n: usize) -> Result<Self> {
        Self::new(-r, r, -r, r, n, n)
    }

    /// The unit disk for hyperbolic scenes, `[-3, 3]²` otherwise.
    pub fn default_for(g: GeometryKind, n: usize) -> Result<Self> {
        match g {
            GeometryKind::Hyperbolic => Self::square(1.0, n),
            _ => Self::square(3.0, n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite());
        if !finite || !(self.xmin < self.xmax) || !(self.ymin < self.ymax) {
            return Err(Error::InvalidParameter(format!(
                "viewport needs xmin < xmax and ymin < ymax, got [{}, {}] x [{}, {}]",
                self.xmin, self.xmax, self.ymin, self.ymax
            )));
        }
        if self.nx < 16 || self.ny < 16 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution must be at least 16, got {} x {}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    pub fn with_resolution(mut self, n: usize) -> Self {
        self.nx = n;
        self.ny = n;
        self
    }

    fn x(&self, i: usize) -> f64 {
        self.xmin + (self.xmax - self.xmin) * i as f64 / self.nx as f64
    }

    fn y(&self, j: usize) -> f64 {
        self.ymin + (self.ymax - self.ymin) * j as f64 / self.ny as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub points: Vec<CurvePoint>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub branches: Vec<Branch>,
    pub residual_max: f64,
    pub clipped: bool,
}

impl TracedCurve {
    pub fn empty() -> Self {
        Self { branches: Vec::new(), residual_max: 0.0, clipped: false }
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &CurvePoint> {
        self.branches.iter().flat_map(|b| b.points.iter())
    }

    pub fn vertex_count(&self) -> usize {
        self.branches.iter().map(|b| b.points.len()).sum()
    }

    /// Appends the branches of `other`.
    pub fn merge(&mut self, other: TracedCurve) {
        self.branches.extend(other.branches);
        self.residual_max = self.residual_max.max(other.residual_max);
        self.clipped |= other.clipped;
    }
}

/// Sides of a grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellEdge {
    Bottom,
    Right,
    Top,
    Left,
}

/// Corner order used by [`saddle_disambiguate`].
pub const CORNERS: [&str; 4] = ["bottom-left", "bottom-right", "top-right", "top-left"];

fn corner_edges(corner: usize) -> (CellEdge, CellEdge) {
    use CellEdge::*;
    match corner {
        0 => (Bottom, Left),
        1 => (Bottom, Right),
        2 => (Right, Top),
        _ => (Top, Left),
    }
}

/// Pairs the four crossed edges of a saddle cell.
///
/// `negative[k]` tells whether corner `k` (bottom-left, bottom-right,
/// top-right, top-left) is below zero; the pattern must alternate. A
/// positive center cuts off the negative corners, a negative one the
/// positive corners. Zero and NaN centers count as positive.
pub fn saddle_disambiguate(negative: [bool; 4], center: f64) -> [(CellEdge, CellEdge); 2] {
    debug_assert!(negative[0] == negative[2] && negative[1] == negative[3] && negative[0] != negative[1]);
    let center_negative = center < 0.0;
    let cut = |k: usize| negative[k] != center_negative;
    let corners: Vec<usize> = (0..4).filter(|&k| cut(k)).collect();
    [corner_edges(corners[0]), corner_edges(corners[1])]
}

/// Cell segments for a non-saddle sign pattern.
fn segment_edges(negative: [bool; 4]) -> Vec<CellEdge> {
    use CellEdge::*;
    let mut edges = Vec::with_capacity(2);
    if negative[0] != negative[1] {
        edges.push(Bottom);
    }
    if negative[1] != negative[2] {
        edges.push(Right);
    }
    if negative[3] != negative[2] {
        edges.push(Top);
    }
    if negative[0] != negative[3] {
        edges.push(Left);
    }
    edges
}

struct Grid<'a> {
    vp: &'a Viewport,
    values: Vec<f64>,
    inside: Vec<bool>,
}

impl Grid<'_> {
    fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.vp.nx + 1) + i
    }

    /// Global id of a cell side; horizontal edges first, then vertical.
    fn edge_id(&self, i: usize, j: usize, e: CellEdge) -> usize {
        let nx = self.vp.nx;
        let horizontal = nx * (self.vp.ny + 1);
        match e {
            CellEdge::Bottom => j * nx + i,
            CellEdge::Top => (j + 1) * nx + i,
            CellEdge::Left => horizontal + j * (nx + 1) + i,
            CellEdge::Right => horizontal + j * (nx + 1) + i + 1,
        }
    }

    /// Grid endpoints of an edge id.
    fn edge_ends(&self, id: usize) -> ((usize, usize), (usize, usize)) {
        let nx = self.vp.nx;
        let horizontal = nx * (self.vp.ny + 1);
        if id < horizontal {
            let (j, i) = (id / nx, id % nx);
            ((i, j), (i + 1, j))
        } else {
            let k = id - horizontal;
            let (j, i) = (k / (nx + 1), k % (nx + 1));
            ((i, j), (i, j + 1))
        }
    }
}

/// Finds the zero on the segment between two samples of opposite sign.
fn refine<F: Fn(f64, f64) -> f64>(f: &F, p: (f64, f64, f64), q: (f64, f64, f64)) -> CurvePoint {
    let (mut a, mut b) = (p, q);
    let mut best = if a.2.abs() <= b.2.abs() { a } else { b };
    for _ in 0..REFINE_MAX_ITER {
        if best.2.abs() < REFINE_TOL {
            break;
        }
        let (mx, my) = (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1));
        let v = f(mx, my);
        if !v.is_finite() {
            break;
        }
        let m = (mx, my, v);
        if v.abs() < best.2.abs() {
            best = m;
        }
        if (v < 0.0) == (a.2 < 0.0) {
            a = m;
        } else {
            b = m;
        }
        if (mx == a.0 && my == a.1 && mx == b.0 && my == b.1) || (a.0 == b.0 && a.1 == b.1) {
            break;
        }
    }
    CurvePoint { x: best.0, y: best.1, residual: best.2 }
}

/// Traces the zero set of `f` over the viewport.
///
/// Cells with a corner outside `mask` are skipped and mark the result as
/// clipped; cells with a non-finite corner are skipped silently.
pub fn trace<F, M>(f: F, vp: &Viewport, mask: Option<M>) -> Result<TracedCurve>
where
    F: Fn(f64, f64) -> f64 + Sync,
    M: Fn(f64, f64) -> bool + Sync,
{
    vp.validate()?;
    let (nx, ny) = (vp.nx, vp.ny);
    let rows: Vec<(Vec<f64>, Vec<bool>)> = (0..=ny)
        .into_par_iter()
        .map(|j| {
            let y = vp.y(j);
            let mut vals = Vec::with_capacity(nx + 1);
            let mut ins = Vec::with_capacity(nx + 1);
            for i in 0..=nx {
                let x = vp.x(i);
                let inside = mask.as_ref().is_none_or(|m| m(x, y));
                ins.push(inside);
                vals.push(if inside { f(x, y) } else { f64::NAN });
            }
            (vals, ins)
        })
        .collect();
    let mut grid = Grid { vp, values: Vec::with_capacity((nx + 1) * (ny + 1)), inside: Vec::new() };
    for (v, m) in rows {
        grid.values.extend(v);
        grid.inside.extend(m);
    }

    // cell segments, per row in parallel
    let per_row: Vec<(Vec<(usize, usize)>, bool)> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let mut segs = Vec::new();
            let mut clipped = false;
            for i in 0..nx {
                let ids = [grid.idx(i, j), grid.idx(i + 1, j), grid.idx(i + 1, j + 1), grid.idx(i, j + 1)];
                if ids.iter().any(|&k| !grid.inside[k]) {
                    clipped = true;
                    continue;
                }
                let v = ids.map(|k| grid.values[k]);
                if v.iter().any(|x| !x.is_finite()) {
                    continue;
                }
                let neg = v.map(|x| x < 0.0);
                let edges = segment_edges(neg);
                match edges.len() {
                    2 => segs.push((grid.edge_id(i, j, edges[0]), grid.edge_id(i, j, edges[1]))),
                    4 => {
                        let center = f(0.5 * (vp.x(i) + vp.x(i + 1)), 0.5 * (vp.y(j) + vp.y(j + 1)));
                        for (a, b) in saddle_disambiguate(neg, center) {
                            segs.push((grid.edge_id(i, j, a), grid.edge_id(i, j, b)));
                        }
                    }
                    _ => {}
                }
            }
            (segs, clipped)
        })
        .collect();

    let mut clipped = false;
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for (segs, c) in per_row {
        clipped |= c;
        for (a, b) in segs {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        }
    }
    let mut nodes: Vec<usize> = adjacency.keys().copied().collect();
    nodes.sort_unstable();

    let refined: HashMap<usize, CurvePoint> = nodes
        .par_iter()
        .map(|&id| {
            let ((i0, j0), (i1, j1)) = grid.edge_ends(id);
            let p = (vp.x(i0), vp.y(j0), grid.values[grid.idx(i0, j0)]);
            let q = (vp.x(i1), vp.y(j1), grid.values[grid.idx(i1, j1)]);
            (id, refine(&f, p, q))
        })
        .collect();

    let mut visited: HashMap<usize, bool> = nodes.iter().map(|&n| (n, false)).collect();
    let mut branches = Vec::new();
    let walk = |start: usize, visited: &mut HashMap<usize, bool>| -> (Vec<usize>, bool) {
        let mut chain = vec![start];
        visited.insert(start, true);
        let mut cur = start;
        loop {
            let next = adjacency[&cur].iter().copied().find(|n| !visited[n]);
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    chain.push(n);
                    cur = n;
                }
                None => {
                    let closed = chain.len() > 2 && adjacency[&cur].contains(&start);
                    return (chain, closed);
                }
            }
        }
    };
    for &n in nodes.iter().filter(|n| adjacency[n].len() == 1) {
        if !visited[&n] {
            branches.push(walk(n, &mut visited));
        }
    }
    for &n in &nodes {
        if !visited[&n] {
            branches.push(walk(n, &mut visited));
        }
    }

    let branches: Vec<Branch> = branches
        .into_iter()
        .map(|(chain, closed)| Branch { points: chain.iter().map(|id| refined[id]).collect(), closed })
        .collect();
    let residual_max = branches
        .iter()
        .flat_map(|b| b.points.iter())
        .map(|p| p.residual.abs())
        .fold(0.0, f64::max);
    Ok(TracedCurve { branches, residual_max, clipped })
}

/// Traces the α-isoptic of a query, masking the hyperbolic disk.
pub fn trace_isoptic(query: &IsopticQuery, vp: &Viewport) -> Result<TracedCurve> {
    let mut out = TracedCurve::empty();
    let r2 = HYPERBOLIC_MASK_RADIUS * HYPERBOLIC_MASK_RADIUS;
    let disk = move |x: f64, y: f64| x * x + y * y <= r2;
    for factor in branch_residuals(query)? {
        let mask = (query.conic.geometry == GeometryKind::Hyperbolic).then_some(disk);
        out.merge(trace(|x, y| factor.eval(x, y), vp, mask)?);
    }
    Ok(out)
}
