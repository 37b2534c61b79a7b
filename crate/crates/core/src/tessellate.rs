//! Lattice sampling of parametric sets and conversion to polylines, quad
//! meshes and boundary meshes in the modeling 3-space.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::paramset::{ParamSet, ParamSetError};
use crate::projection::{
    dop, ortho, perspective, PerspectiveConfig, Point3, ProjectionMode, Rotor4,
};
use crate::quat::Quaternion;

/// Points closer than this close a curve.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TessellateError {
    #[error("evaluation failed at lattice index {index:?}: {source}")]
    Eval {
        index: Vec<usize>,
        #[source]
        source: ParamSetError,
    },
    #[error("expected {expected} resolutions, got {found}")]
    ResolutionCount { expected: usize, found: usize },
    #[error("resolution {0} is below 2")]
    BadResolution(usize),
    #[error("operation needs a {expected}-dimensional grid, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grid has no parameter `{0}`")]
    UnknownParam(String),
    #[error("{0}")]
    InvalidGrid(String),
}

/// A set evaluated over a rectangular lattice. Points are stored row-major in
/// parameter order: the last parameter varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    source: String,
    param_names: Vec<String>,
    resolutions: Vec<usize>,
    axes: Vec<Vec<f64>>,
    points: Vec<Quaternion>,
}

/// The `i`-th of `res` evenly spaced values from `lo` to `hi`; the last one
/// is `hi` exactly.
pub fn lattice_value(lo: f64, hi: f64, i: usize, res: usize) -> f64 {
    if i + 1 == res {
        hi
    } else {
        lo + i as f64 * ((hi - lo) / (res - 1) as f64)
    }
}

pub fn sample(s: &ParamSet, resolutions: &[usize]) -> Result<SampleGrid, TessellateError> {
    if resolutions.len() != s.dimension() {
        return Err(TessellateError::ResolutionCount {
            expected: s.dimension(),
            found: resolutions.len(),
        });
    }
    if let Some(&r) = resolutions.iter().find(|&&r| r < 2) {
        return Err(TessellateError::BadResolution(r));
    }
    let axes: Vec<Vec<f64>> = s
        .params()
        .iter()
        .zip(resolutions)
        .map(|(p, &res)| {
            (0..res)
                .map(|i| lattice_value(p.lo, p.hi, i, res))
                .collect()
        })
        .collect();
    let total: usize = resolutions.iter().product();
    let eval = s.evaluator().map_err(|source| TessellateError::Eval {
        index: Vec::new(),
        source,
    })?;
    let results: Vec<Result<Quaternion, ParamSetError>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mi = unflatten(flat, resolutions);
            let values: Vec<f64> = mi.iter().zip(&axes).map(|(&i, ax)| ax[i]).collect();
            eval.eval(&values)
        })
        .collect();
    let mut points = Vec::with_capacity(total);
    for (flat, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => points.push(p),
            Err(source) => {
                return Err(TessellateError::Eval {
                    index: unflatten(flat, resolutions),
                    source,
                })
            }
        }
    }
    Ok(SampleGrid {
        source: s.name().to_string(),
        param_names: s.param_names().into_iter().map(String::from).collect(),
        resolutions: resolutions.to_vec(),
        axes,
        points,
    })
}

fn unflatten(mut flat: usize, res: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; res.len()];
    for k in (0..res.len()).rev() {
        idx[k] = flat % res[k];
        flat /= res[k];
    }
    idx
}

impl SampleGrid {
    /// Builds a grid from explicit points. `axes[k]` lists the parameter
    /// values along axis `k`.
    pub fn from_points(
        source: impl Into<String>,
        param_names: Vec<String>,
        axes: Vec<Vec<f64>>,
        points: Vec<Quaternion>,
    ) -> Result<Self, TessellateError> {
        if param_names.len() != axes.len() {
            return Err(TessellateError::InvalidGrid(
                "one axis per parameter".into(),
            ));
        }
        let resolutions: Vec<usize> = axes.iter().map(Vec::len).collect();
        if let Some(&r) = resolutions.iter().find(|&&r| r < 2) {
            return Err(TessellateError::BadResolution(r));
        }
        if resolutions.iter().product::<usize>() != points.len() {
            return Err(TessellateError::InvalidGrid(format!(
                "{} points do not fill a {resolutions:?} lattice",
                points.len()
            )));
        }
        Ok(Self {
            source: source.into(),
            param_names,
            resolutions,
            axes,
            points,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn resolutions(&self) -> &[usize] {
        &self.resolutions
    }

    pub fn dimension(&self) -> usize {
        self.resolutions.len()
    }

    pub fn points(&self) -> &[Quaternion] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    pub fn param_index(&self, name: &str) -> Result<usize, TessellateError> {
        self.param_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TessellateError::UnknownParam(name.to_string()))
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.resolutions)
            .fold(0, |acc, (&i, &r)| acc * r + i)
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        unflatten(flat, &self.resolutions)
    }

    pub fn point_at(&self, idx: &[usize]) -> Quaternion {
        self.points[self.flat_index(idx)]
    }

    /// Parameter values at a flat lattice index.
    pub fn values(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, ax)| ax[i])
            .collect()
    }

    pub fn assignment(&self, flat: usize) -> Vec<(String, f64)> {
        self.param_names
            .iter()
            .cloned()
            .zip(self.values(flat))
            .collect()
    }

    /// Flat indices of every lattice line along axis `k`, ordered by the
    /// lowest index they contain.
    pub fn lines_along(&self, k: usize) -> Vec<Vec<usize>> {
        let stride: usize = self.resolutions[k + 1..].iter().product();
        let n = self.resolutions[k];
        (0..self.len())
            .filter(|&f| self.multi_index(f)[k] == 0)
            .map(|start| (0..n).map(|i| start + i * stride).collect())
            .collect()
    }

    /// The sub-lattice with axis `k` fixed at index `i`.
    pub fn slice(&self, k: usize, i: usize) -> SampleGrid {
        let points = (0..self.len())
            .filter(|&f| self.multi_index(f)[k] == i)
            .map(|f| self.points[f])
            .collect();
        let mut param_names = self.param_names.clone();
        let name = param_names.remove(k);
        let mut axes = self.axes.clone();
        let value = axes.remove(k)[i];
        let mut resolutions = self.resolutions.clone();
        resolutions.remove(k);
        SampleGrid {
            source: format!("{}[{name}={value}]", self.source),
            param_names,
            resolutions,
            axes,
            points,
        }
    }

    /// Whether the first and last lattice points coincide.
    pub fn is_closed(&self) -> bool {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) if self.len() > 1 => a.distance(b) <= CLOSURE_TOLERANCE,
            _ => false,
        }
    }

    /// Applies `L·p·R` to every point.
    pub fn rotated(&self, r: &Rotor4) -> SampleGrid {
        SampleGrid {
            points: self.points.par_iter().map(|&p| r.apply(p)).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pub indices: Vec<usize>,
    pub closed: bool,
}

/// One face of a 3-parameter box.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceTag {
    pub param: String,
    pub value: f64,
}

/// Connectivity over lattice indices; independent of the projection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Topology {
    pub points: Vec<usize>,
    pub polylines: Vec<Polyline>,
    pub quads: Vec<[usize; 4]>,
    /// Group index of every quad into `groups`.
    pub quad_groups: Vec<usize>,
    pub groups: Vec<FaceTag>,
}

fn expect_dim(g: &SampleGrid, d: usize) -> Result<(), TessellateError> {
    if g.dimension() == d {
        Ok(())
    } else {
        Err(TessellateError::DimensionMismatch {
            expected: d,
            found: g.dimension(),
        })
    }
}

pub fn to_polyline(g: &SampleGrid) -> Result<Topology, TessellateError> {
    expect_dim(g, 1)?;
    Ok(Topology {
        polylines: vec![Polyline {
            indices: (0..g.len()).collect(),
            closed: g.is_closed(),
        }],
        ..Topology::default()
    })
}

pub fn to_quadmesh(g: &SampleGrid) -> Result<Topology, TessellateError> {
    expect_dim(g, 2)?;
    let quads = grid_quads(g.resolutions[0], g.resolutions[1], |i, j| {
        g.flat_index(&[i, j])
    });
    Ok(Topology {
        quad_groups: vec![0; quads.len()],
        quads,
        ..Topology::default()
    })
}

fn grid_quads(n0: usize, n1: usize, idx: impl Fn(usize, usize) -> usize) -> Vec<[usize; 4]> {
    let mut quads = Vec::with_capacity((n0 - 1) * (n1 - 1));
    for i in 0..n0 - 1 {
        for j in 0..n1 - 1 {
            quads.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    quads
}

/// The six faces of the parameter box, each a quad mesh tagged with the
/// fixed parameter and its value. Order: first parameter at lo, at hi, then
/// the second, then the third.
pub fn boundary_mesh(g: &SampleGrid) -> Result<Topology, TessellateError> {
    expect_dim(g, 3)?;
    let mut t = Topology::default();
    for k in 0..3 {
        let (a, b) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for at in [0, g.resolutions[k] - 1] {
            let group = t.groups.len();
            t.groups.push(FaceTag {
                param: g.param_names[k].clone(),
                value: g.axes[k][at],
            });
            let quads = grid_quads(g.resolutions[a], g.resolutions[b], |i, j| {
                let mut idx = [0; 3];
                idx[k] = at;
                idx[a] = i;
                idx[b] = j;
                g.flat_index(&idx)
            });
            t.quad_groups
                .extend(std::iter::repeat_n(group, quads.len()));
            t.quads.extend(quads);
        }
    }
    Ok(t)
}

/// The six boundary faces as 2-dimensional grids, in [`boundary_mesh`] order.
pub fn boundary_faces(g: &SampleGrid) -> Result<Vec<(FaceTag, SampleGrid)>, TessellateError> {
    expect_dim(g, 3)?;
    let mut faces = Vec::with_capacity(6);
    for k in 0..3 {
        for at in [0, g.resolutions[k] - 1] {
            let tag = FaceTag {
                param: g.param_names[k].clone(),
                value: g.axes[k][at],
            };
            faces.push((tag, g.slice(k, at)));
        }
    }
    Ok(faces)
}

/// The natural topology of a grid: points, a polyline, a quad mesh or the
/// boundary of a parameter box.
pub fn default_topology(g: &SampleGrid) -> Topology {
    match g.dimension() {
        0 => Topology {
            points: (0..g.len()).collect(),
            ..Topology::default()
        },
        1 => to_polyline(g).expect("dimension checked"),
        2 => to_quadmesh(g).expect("dimension checked"),
        _ => boundary_mesh(g).expect("dimension checked"),
    }
}

/// Samples `s` with `param` frozen at each of `values`.
pub fn iso_slices(
    s: &ParamSet,
    param: &str,
    values: &[f64],
    resolutions: &[usize],
) -> Result<Vec<SampleGrid>, TessellateError> {
    if s.param(param).is_none() {
        return Err(TessellateError::UnknownParam(param.to_string()));
    }
    values
        .iter()
        .map(|&v| {
            let frozen = s
                .freeze(param, v)
                .map_err(|source| TessellateError::Eval {
                    index: Vec::new(),
                    source,
                })?
                .with_name(format!("{}[{param}={v}]", s.name()));
            sample(&frozen, resolutions)
        })
        .collect()
}

/// A projected mesh in the modeling space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh3 {
    pub name: String,
    pub vertices: Vec<Point3>,
    /// Vertices dropped by perspective clipping; their coordinates are zero.
    pub clipped: Vec<bool>,
    pub points: Vec<usize>,
    pub polylines: Vec<Polyline>,
    pub quads: Vec<[usize; 4]>,
    pub quad_groups: Vec<usize>,
    /// Quads with (near) zero area after projection. Kept in `quads`.
    pub degenerate: Vec<bool>,
    pub groups: Vec<FaceTag>,
    /// Per-vertex parameter values.
    pub attributes: BTreeMap<String, Vec<f64>>,
}

impl Mesh3 {
    pub fn line_segments(&self) -> impl Iterator<Item = [usize; 2]> + '_ {
        self.polylines
            .iter()
            .flat_map(|p| p.indices.windows(2).map(|w| [w[0], w[1]]))
    }
}

fn quad_degenerate(v: &[Point3], q: &[usize; 4]) -> bool {
    let d1 = v[q[2]].sub(v[q[0]]);
    let d2 = v[q[3]].sub(v[q[1]]);
    let cross = [
        d1[1] * d2[2] - d1[2] * d2[1],
        d1[2] * d2[0] - d1[0] * d2[2],
        d1[0] * d2[1] - d1[1] * d2[0],
    ];
    let n = |a: [f64; 3]| (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    n(cross) <= 1e-12 * n(d1).max(n(d2)).powi(2)
}

struct Builder<'a> {
    grid: &'a SampleGrid,
    topo: &'a Topology,
    /// Lattice index to mesh vertex.
    remap: Vec<Option<usize>>,
    mesh: Mesh3,
}

impl<'a> Builder<'a> {
    fn new(grid: &'a SampleGrid, topo: &'a Topology, name: String) -> Self {
        let mut used = vec![false; grid.len()];
        let all = topo
            .points
            .iter()
            .chain(topo.polylines.iter().flat_map(|p| p.indices.iter()))
            .chain(topo.quads.iter().flatten());
        for &i in all {
            used[i] = true;
        }
        let mut remap = vec![None; grid.len()];
        let mut next = 0;
        for (i, u) in used.iter().enumerate() {
            if *u {
                remap[i] = Some(next);
                next += 1;
            }
        }
        let mut attributes = BTreeMap::new();
        for (k, name) in grid.param_names.iter().enumerate() {
            let vals = (0..grid.len())
                .filter(|&i| used[i])
                .map(|i| grid.axes[k][grid.multi_index(i)[k]])
                .collect();
            attributes.insert(name.clone(), vals);
        }
        Self {
            grid,
            topo,
            remap,
            mesh: Mesh3 {
                name,
                groups: topo.groups.clone(),
                attributes,
                ..Mesh3::default()
            },
        }
    }

    fn lattice(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid.len()).filter(|&i| self.remap[i].is_some())
    }

    fn vertex(&self, i: usize) -> usize {
        self.remap[i].expect("index used by topology")
    }

    /// Topology copied verbatim; every vertex kept.
    fn finish_plain(mut self, vertices: Vec<Point3>) -> Mesh3 {
        let t = self.topo;
        self.mesh.clipped = vec![false; vertices.len()];
        self.mesh.points = t.points.iter().map(|&i| self.vertex(i)).collect();
        self.mesh.polylines = t
            .polylines
            .iter()
            .map(|p| Polyline {
                indices: p.indices.iter().map(|&i| self.vertex(i)).collect(),
                closed: p.closed,
            })
            .collect();
        self.mesh.quads = t.quads.iter().map(|q| q.map(|i| self.vertex(i))).collect();
        self.mesh.quad_groups = t.quad_groups.clone();
        self.mesh.degenerate = self
            .mesh
            .quads
            .iter()
            .map(|q| quad_degenerate(&vertices, q))
            .collect();
        self.mesh.vertices = vertices;
        self.mesh
    }
}

fn project_plain(
    grid: &SampleGrid,
    topo: &Topology,
    name: String,
    f: impl Fn(Quaternion) -> Point3,
) -> Mesh3 {
    let b = Builder::new(grid, topo, name);
    let vertices = b.lattice().map(|i| f(grid.points[i])).collect();
    b.finish_plain(vertices)
}

/// Perspective image with clipping near the hyperplane `a2 = 0` through the
/// center. Vertices with `|a2| ≤ ε` are flagged; quads touching them or
/// spanning both sides are dropped; polyline edges crossing the band are cut
/// at `a2 = ±ε`.
fn project_perspective(
    grid: &SampleGrid,
    topo: &Topology,
    name: String,
    cfg: &PerspectiveConfig,
) -> Mesh3 {
    let eps = cfg.epsilon();
    let side = |p: &Quaternion| {
        if p.a2() > eps {
            1
        } else if p.a2() < -eps {
            -1
        } else {
            0
        }
    };
    let mut b = Builder::new(grid, topo, name);
    let lattice: Vec<usize> = b.lattice().collect();
    let mut vertices = Vec::with_capacity(lattice.len());
    let mut clipped = Vec::with_capacity(lattice.len());
    for &i in &lattice {
        match perspective(grid.points[i], cfg) {
            Ok(p) if side(&grid.points[i]) != 0 => {
                vertices.push(p);
                clipped.push(false);
            }
            _ => {
                vertices.push(Point3::default());
                clipped.push(true);
            }
        }
    }
    let t = b.topo;
    let mut mesh_points = Vec::new();
    for &i in &t.points {
        let v = b.vertex(i);
        if !clipped[v] {
            mesh_points.push(v);
        }
    }
    let mut quads = Vec::new();
    let mut quad_groups = Vec::new();
    for (q, g) in t.quads.iter().zip(&t.quad_groups) {
        let s: Vec<i32> = q.iter().map(|&i| side(&grid.points[i])).collect();
        if s.iter().all(|&x| x == s[0]) && s[0] != 0 {
            quads.push(q.map(|i| b.vertex(i)));
            quad_groups.push(*g);
        }
    }
    let mut polylines = Vec::new();
    for pl in &t.polylines {
        let mut current: Vec<usize> = Vec::new();
        let flush = |cur: &mut Vec<usize>, out: &mut Vec<Polyline>| {
            if cur.len() >= 2 {
                out.push(Polyline {
                    indices: std::mem::take(cur),
                    closed: false,
                });
            } else {
                cur.clear();
            }
        };
        for w in pl.indices.windows(2) {
            let (p, q) = (grid.points[w[0]], grid.points[w[1]]);
            let (sp, sq) = (side(&p), side(&q));
            let (vp, vq) = (b.vertex(w[0]), b.vertex(w[1]));
            if sp != 0 && sp == sq {
                if current.last() != Some(&vp) {
                    flush(&mut current, &mut polylines);
                    current.push(vp);
                }
                current.push(vq);
                continue;
            }
            // Cut the edge where it enters the band on each side.
            let (ia, ib) = (b.remap[w[0]].unwrap(), b.remap[w[1]].unwrap());
            let mut cut_at = |s: i32, vertices: &mut Vec<Point3>, clipped: &mut Vec<bool>| {
                let t = (s as f64 * eps - p.a2()) / (q.a2() - p.a2());
                let at = p.add(q.sub(p).scale(t));
                vertices.push(perspective(at, cfg).unwrap_or_default());
                clipped.push(false);
                for vals in b.mesh.attributes.values_mut() {
                    let (x, y) = (vals[ia], vals[ib]);
                    vals.push(x + (y - x) * t);
                }
                vertices.len() - 1
            };
            if sp != 0 {
                let nv = cut_at(sp, &mut vertices, &mut clipped);
                if current.last() != Some(&vp) {
                    flush(&mut current, &mut polylines);
                    current.push(vp);
                }
                current.push(nv);
            }
            flush(&mut current, &mut polylines);
            if sq != 0 {
                let nv = cut_at(sq, &mut vertices, &mut clipped);
                current.push(nv);
                current.push(vq);
            }
        }
        flush(&mut current, &mut polylines);
        if pl.closed && polylines.len() == 1 && t.polylines.len() == 1 {
            let only = &mut polylines[0];
            only.closed = only.indices.len() == pl.indices.len();
        }
    }
    b.mesh.degenerate = quads
        .iter()
        .map(|q| quad_degenerate(&vertices, q))
        .collect();
    b.mesh.points = mesh_points;
    b.mesh.quads = quads;
    b.mesh.quad_groups = quad_groups;
    b.mesh.polylines = polylines;
    b.mesh.vertices = vertices;
    b.mesh.clipped = clipped;
    b.mesh
}

/// Projects a grid with its topology. An optional rotor is applied in R⁴
/// first. DOP yields the `.z` and `.w` images; the other modes one mesh.
pub fn project_with(
    grid: &SampleGrid,
    topo: &Topology,
    mode: &ProjectionMode,
    rotor: Option<&Rotor4>,
) -> Vec<Mesh3> {
    let rotated;
    let grid = match rotor {
        Some(r) => {
            rotated = grid.rotated(r);
            &rotated
        }
        None => grid,
    };
    let base = grid.source();
    match mode {
        ProjectionMode::Dop => vec![
            project_plain(grid, topo, format!("{base}.z"), |p| dop(p).z),
            project_plain(grid, topo, format!("{base}.w"), |p| dop(p).w),
        ],
        ProjectionMode::Perspective(cfg) => {
            vec![project_perspective(
                grid,
                topo,
                format!("{base}.persp"),
                cfg,
            )]
        }
        ProjectionMode::Ortho(target) => vec![project_plain(
            grid,
            topo,
            format!("{base}.{}", target.label()),
            |p| ortho(p, target),
        )],
    }
}

/// [`project_with`] using the grid's default topology.
pub fn project_grid(
    grid: &SampleGrid,
    mode: &ProjectionMode,
    rotor: Option<&Rotor4>,
) -> Vec<Mesh3> {
    project_with(grid, &default_topology(grid), mode, rotor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::paramset::ParamInterval;
    use crate::projection::{Axis, OrthoTarget};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn set(params: &[(&str, f64, f64)], coords: [&str; 4]) -> ParamSet {
        ParamSet::new(
            "s",
            params
                .iter()
                .map(|&(n, lo, hi)| ParamInterval::new(n, lo, hi))
                .collect(),
            coords.map(|c| parse_expr(c).unwrap()),
            Vec::new(),
        )
        .unwrap()
    }

    fn circle() -> ParamSet {
        set(&[("u", 0.0, 2.0 * PI)], ["0", "cos(u)", "0", "sin(u)"])
    }

    fn cone() -> ParamSet {
        set(
            &[("u", -1.0, 1.0), ("v1", -1.0, 1.0), ("v2", -1.0, 1.0)],
            ["-u*v2", "v1", "u*v1", "v2"],
        )
    }

    #[test]
    fn circle_samples() {
        let g = sample(&circle(), &[5]).unwrap();
        assert_eq!(g.axis(0), &[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 2.0 * PI]);
        assert!(g.points()[0].distance(&g.points()[4]) < 1e-15);
        assert!(g.is_closed());
        let t = to_polyline(&g).unwrap();
        assert!(t.polylines[0].closed);
    }

    #[test]
    fn endpoints_exact() {
        for res in [2, 3, 7, 64, 255] {
            let (lo, hi) = (-8.0 * PI, 8.0 * PI);
            assert_eq!(lattice_value(lo, hi, res - 1, res).to_bits(), hi.to_bits());
            assert_eq!(lattice_value(lo, hi, 0, res).to_bits(), lo.to_bits());
        }
    }

    #[test]
    fn cone_lattice() {
        let g = sample(&cone(), &[3, 3, 3]).unwrap();
        assert_eq!(g.len(), 27);
        assert_eq!(g.point_at(&[1, 1, 1]), Quaternion::ZERO);
        assert_eq!(g.multi_index(g.flat_index(&[2, 0, 1])), vec![2, 0, 1]);
        assert_eq!(g.lines_along(1).len(), 9);
    }

    #[test]
    fn dimension_mismatch() {
        let g = sample(
            &set(&[("u", 0., 1.), ("v", 0., 1.)], ["u", "v", "0", "0"]),
            &[2, 2],
        )
        .unwrap();
        assert!(matches!(
            to_polyline(&g),
            Err(TessellateError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            sample(&circle(), &[1]),
            Err(TessellateError::BadResolution(1))
        ));
        assert!(matches!(
            sample(&circle(), &[3, 3]),
            Err(TessellateError::ResolutionCount { .. })
        ));
    }

    #[test]
    fn boundary() {
        let g = sample(&cone(), &[4, 5, 6]).unwrap();
        let t = boundary_mesh(&g).unwrap();
        assert_eq!(t.groups.len(), 6);
        assert_eq!(t.quads.len(), 2 * (4 * 5 + 3 * 5 + 3 * 4));
        let faces = boundary_faces(&g).unwrap();
        assert_eq!(faces[0].0.param, "u");
        assert_eq!(faces[1].0.value, 1.0);
        assert_eq!(faces[0].1.resolutions(), &[5, 6]);
        let meshes = project_grid(&g, &ProjectionMode::Dop, None);
        let interior = 2 * 3 * 4;
        assert_eq!(meshes[0].vertices.len(), 4 * 5 * 6 - interior);
    }

    #[test]
    fn hopf_slices() {
        let hopf = set(
            &[
                ("u", 0.0, 2.0 * PI),
                ("v1", 0.0, FRAC_PI_2),
                ("v2", 0.0, 2.0 * PI),
            ],
            [
                "cos(u+v2)*cos(v1)",
                "sin(u+v2)*cos(v1)",
                "cos(u-v2)*sin(v1)",
                "sin(u-v2)*sin(v1)",
            ],
        );
        let slices = iso_slices(&hopf, "v1", &[PI / 4.0, 0.0], &[16, 16]).unwrap();
        for p in slices[0].points() {
            let [x, y, z, w] = p.to_array();
            assert!((x * x + y * y - 0.5).abs() < 1e-12);
            assert!((z * z + w * w - 0.5).abs() < 1e-12);
        }
        for p in slices[1].points() {
            let [x, y, z, w] = p.to_array();
            assert_eq!((z, w), (0.0, 0.0));
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
        }
        assert!(matches!(
            iso_slices(&hopf, "q", &[0.0], &[4, 4]),
            Err(TessellateError::UnknownParam(_))
        ));
    }

    #[test]
    fn conoid_shadow() {
        let s = set(
            &[("u", -1., 1.), ("v", -PI, PI)],
            ["u*cos(v)", "cos(v)", "u*sin(v)", "sin(v)"],
        );
        let g = sample(&s, &[33, 65]).unwrap();
        let m = &project_grid(
            &g,
            &ProjectionMode::Ortho(OrthoTarget::hyperplane(Axis::W)),
            None,
        )[0];
        for p in &m.vertices {
            let (x, y, z) = (p.x, p.y, p.w);
            assert!((x * x * (1.0 - y * y) - z * z * y * y).abs() < 1e-10);
        }
    }

    #[test]
    fn perspective_doubles_on_half_plane() {
        let s = set(&[("u", -1., 1.), ("v", -1., 1.)], ["u", "v", "1", "u*v"]);
        let g = sample(&s, &[5, 5]).unwrap();
        let mode = ProjectionMode::Perspective(PerspectiveConfig::new(2.0).unwrap());
        let m = &project_grid(&g, &mode, None)[0];
        for (p, q) in m.vertices.iter().zip(g.points()) {
            assert_eq!(*p, Point3::new(2.0 * q.a0(), 2.0 * q.a1(), 2.0 * q.a3()));
        }
        assert_eq!(m.quads.len(), 16);
    }

    #[test]
    fn topology_invariant_across_modes() {
        let s = set(&[("u", 0.1, 1.), ("v", 0.1, 1.)], ["u", "v", "u+v", "u*v"]);
        let g = sample(&s, &[6, 7]).unwrap();
        let a = project_grid(&g, &ProjectionMode::Dop, None);
        let b = project_grid(
            &g,
            &ProjectionMode::Perspective(PerspectiveConfig::new(1.0).unwrap()),
            None,
        );
        assert_eq!(a[0].quads, a[1].quads);
        assert_eq!(a[0].quads, b[0].quads);
        assert_eq!(a[0].vertices.len(), b[0].vertices.len());
        // Shared (x, y) shadows.
        for (z, w) in a[0].vertices.iter().zip(&a[1].vertices) {
            assert_eq!((z.x, z.y), (w.x, w.y));
        }
    }

    #[test]
    fn perspective_clipping() {
        // A curve crossing a2 = 0 twice.
        let g = sample(&circle().with_name("c"), &[9]).unwrap();
        let s = set(&[("u", 0.0, 2.0 * PI)], ["1", "cos(u)", "sin(u)", "0"]);
        let g2 = sample(&s, &[9]).unwrap();
        let mode = ProjectionMode::Perspective(PerspectiveConfig::new(1.0).unwrap());
        // The first circle lies in a2 = 0 entirely: every vertex clipped.
        let m = &project_grid(&g, &mode, None)[0];
        assert!(m.clipped.iter().all(|&c| c));
        assert!(m.polylines.is_empty());
        let m = &project_grid(&g2, &mode, None)[0];
        // u = 0, π, 2π are exactly on the hyperplane.
        assert_eq!(m.clipped.iter().filter(|&&c| c).count(), 3);
        for seg in m.line_segments() {
            assert!(!m.clipped[seg[0]] && !m.clipped[seg[1]]);
        }
        assert!(m.polylines.len() >= 2);
        assert!(m.vertices.iter().all(|v| v.x.is_finite()));
    }

    #[test]
    fn degenerate_quads_flagged() {
        let s = set(&[("u", 0., 1.), ("v", 0., 1.)], ["u", "0", "0", "0"]);
        let g = sample(&s, &[3, 3]).unwrap();
        let m = &project_grid(&g, &ProjectionMode::Dop, None)[0];
        assert_eq!(m.quads.len(), 4);
        assert!(m.degenerate.iter().all(|&d| d));
    }

    #[test]
    fn parallel_matches_sequential() {
        let s = cone();
        let g = sample(&s, &[9, 8, 7]).unwrap();
        for (f, p) in g.points().iter().enumerate() {
            let vals = g.values(f);
            let env = [("u", vals[0]), ("v1", vals[1]), ("v2", vals[2])];
            assert_eq!(*p, s.eval_point(&env).unwrap());
        }
    }

    #[test]
    fn eval_error_reports_lowest_index() {
        let s = set(&[("u", -1., 1.)], ["sqrt(u)", "0", "0", "0"]);
        match sample(&s, &[5]) {
            Err(TessellateError::Eval { index, .. }) => assert_eq!(index, vec![0]),
            other => panic!("{other:?}"),
        }
    }
}
