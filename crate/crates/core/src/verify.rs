//! Numerical checks of exact identities on sample grids.
//!
//! Every check reports the largest residual over its samples and where it
//! occurred. A check passes when that residual is at most its tolerance.
//! Gallery entries attach checks by id; negative controls are checks that are
//! expected to fail.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{parse_expr, Bindings, EvalError, Expr};
use crate::gallery::{self, GalleryError};
use crate::paramset::ParamSet;
use crate::projection::{dop, ortho, Axis, OrthoTarget, Rotor4};
use crate::quat::Quaternion;
use crate::scene::{Scene, SceneError};
use crate::tessellate::{boundary_faces, sample, SampleGrid, TessellateError, CLOSURE_TOLERANCE};

/// Tolerance for identities checked by direct substitution.
pub const TOL_DIRECT: f64 = 1e-12;
/// Tolerance for identities that go through composed arithmetic.
pub const TOL_DERIVED: f64 = 1e-10;

const CURVE_RES: usize = 256;
const SURFACE_RES: usize = 64;
const SOLID_RES: usize = 64;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Sample(#[from] TessellateError),
    #[error("residual: {0}")]
    Eval(#[from] EvalError),
    #[error("invalid residual expression `{0}`")]
    Residual(String),
    #[error("lattice line at {} has coincident ends", fmt_map(.assignment))]
    DegenerateLine { assignment: BTreeMap<String, f64> },
    #[error("lattice line at {} is not closed (ends {gap:e} apart)", fmt_map(.assignment))]
    NotClosed {
        assignment: BTreeMap<String, f64>,
        gap: f64,
    },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("{0}")]
    Invalid(String),
}

fn fmt_map(m: &BTreeMap<String, f64>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(", ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check_id: String,
    pub max_residual: f64,
    /// Grid where the maximum occurred.
    pub argmax_set: String,
    pub argmax_assignment: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub samples_tested: usize,
}

/// Running maximum with the lowest-index tie break.
struct MaxResidual {
    value: f64,
    set: String,
    at: BTreeMap<String, f64>,
    samples: usize,
}

impl MaxResidual {
    fn new() -> Self {
        Self {
            value: 0.0,
            set: String::new(),
            at: BTreeMap::new(),
            samples: 0,
        }
    }

    fn push(&mut self, r: f64, g: &SampleGrid, flat: usize) {
        self.samples += 1;
        let r = if r.is_nan() { f64::INFINITY } else { r.abs() };
        if r > self.value || self.samples == 1 {
            self.value = r;
            self.set = g.source().to_string();
            self.at = g.assignment(flat).into_iter().collect();
        }
    }

    fn report(self, id: &str, tol: f64) -> CheckReport {
        CheckReport {
            check_id: id.to_string(),
            max_residual: self.value,
            argmax_set: self.set,
            argmax_assignment: self.at,
            tolerance: tol,
            pass: self.value <= tol,
            samples_tested: self.samples,
        }
    }
}

struct Coords<'a>(&'a [(char, f64)]);

impl Bindings for Coords<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        let mut cs = name.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => self.0.iter().find(|(k, _)| *k == c).map(|(_, v)| *v),
            _ => None,
        }
    }
}

fn residual_expr(text: &str, allowed: &[char]) -> Result<Expr, VerifyError> {
    let e = parse_expr(text).map_err(|_| VerifyError::Residual(text.to_string()))?;
    let ok = e.free_names().iter().all(|n| {
        let mut cs = n.chars();
        matches!((cs.next(), cs.next()), (Some(c), None) if allowed.contains(&c))
    });
    if ok {
        Ok(e)
    } else {
        Err(VerifyError::Residual(text.to_string()))
    }
}

/// Max of `|residual(x, y, z, w)|` over the grid.
pub fn check_implicit(
    id: &str,
    g: &SampleGrid,
    residual: &str,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let e = residual_expr(residual, &['x', 'y', 'z', 'w'])?;
    let mut m = MaxResidual::new();
    for (f, p) in g.points().iter().enumerate() {
        let [x, y, z, w] = p.to_array();
        let r = e.eval(&Coords(&[('x', x), ('y', y), ('z', z), ('w', w)]))?;
        m.push(r, g, f);
    }
    Ok(m.report(id, tol))
}

/// Compares every point `a(p)` of the grid with `rotor(b(reparam(p)))`. The
/// reparametrization gives each parameter of `b` as an expression in the
/// grid's parameters.
pub fn check_pointwise_map(
    id: &str,
    ga: &SampleGrid,
    b: &ParamSet,
    reparam: &[(&str, &str)],
    rotor: &Rotor4,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let names: Vec<&str> = ga.param_names().iter().map(String::as_str).collect();
    let mut exprs = Vec::new();
    for target in b.param_names() {
        let (_, text) = reparam
            .iter()
            .find(|(t, _)| *t == target)
            .ok_or_else(|| VerifyError::Invalid(format!("no reparametrization for `{target}`")))?;
        let e = parse_expr(text).map_err(|_| VerifyError::Residual(text.to_string()))?;
        exprs.push(e.compile(&names)?);
    }
    let eval = b.evaluator().map_err(SceneError::from_set(b.name()))?;
    let mut m = MaxResidual::new();
    for (f, p) in ga.points().iter().enumerate() {
        let vals = ga.values(f);
        let mapped: Vec<f64> = exprs
            .iter()
            .map(|e| e.eval(&vals))
            .collect::<Result<_, _>>()?;
        let q = eval.eval(&mapped).map_err(SceneError::from_set(b.name()))?;
        m.push(p.distance(&rotor.apply(q)), ga, f);
    }
    Ok(m.report(id, tol))
}

impl SceneError {
    fn from_set(name: &str) -> impl Fn(crate::paramset::ParamSetError) -> SceneError + '_ {
        move |source| SceneError::Set {
            name: name.to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusFrame {
    /// `x² + z² = y² + w² = ½`.
    Standard,
    /// The same torus in coordinates turned by 45° in the `(x, y)` and
    /// `(z, w)` planes: `p = (x+y)/√2, q = (z+w)/√2, r = (x−y)/√2,
    /// s = (z−w)/√2` with `p² + q² = r² + s² = ½`.
    Rotated45,
}

pub fn check_torus_membership(
    id: &str,
    g: &SampleGrid,
    frame: TorusFrame,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let mut m = MaxResidual::new();
    for (f, pt) in g.points().iter().enumerate() {
        let [x, y, z, w] = pt.to_array();
        let (a, b, c, d) = match frame {
            TorusFrame::Standard => (x, z, y, w),
            TorusFrame::Rotated45 => (
                (x + y) * FRAC_1_SQRT_2,
                (z + w) * FRAC_1_SQRT_2,
                (x - y) * FRAC_1_SQRT_2,
                (z - w) * FRAC_1_SQRT_2,
            ),
        };
        let r = (a * a + b * b - 0.5).abs().max((c * c + d * d - 0.5).abs());
        m.push(r, g, f);
    }
    Ok(m.report(id, tol))
}

/// For every slice of the grid at a fixed value `v` of `param`, checks that
/// the points lie on the torus with `|(x, y)| = |cos v|` and
/// `|(z, w)| = |sin v|`.
pub fn check_slice_radii(
    id: &str,
    g: &SampleGrid,
    param: &str,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let k = g.param_index(param)?;
    let mut m = MaxResidual::new();
    for (f, pt) in g.points().iter().enumerate() {
        let v = g.values(f)[k];
        let [x, y, z, w] = pt.to_array();
        let r = ((x * x + y * y).sqrt() - v.cos().abs())
            .abs()
            .max(((z * z + w * w).sqrt() - v.sin().abs()).abs());
        m.push(r, g, f);
    }
    Ok(m.report(id, tol))
}

/// Residual over orthogonal images; the expression names the target axes.
pub fn check_projection_residual(
    id: &str,
    g: &SampleGrid,
    target: &OrthoTarget,
    residual: &str,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let letters: Vec<char> = target.axes().iter().map(|a| a.letter()).collect();
    let e = residual_expr(residual, &letters)?;
    let mut m = MaxResidual::new();
    for (f, p) in g.points().iter().enumerate() {
        let img = ortho(*p, target).to_array();
        let env: Vec<(char, f64)> = letters.iter().copied().zip(img).collect();
        m.push(e.eval(&Coords(&env))?, g, f);
    }
    Ok(m.report(id, tol))
}

fn dist_to_line(p: Quaternion, a: Quaternion, dir: Quaternion) -> f64 {
    let v = p.sub(a);
    let t = dot(v, dir);
    v.sub(dir.scale(t)).norm()
}

fn dot(a: Quaternion, b: Quaternion) -> f64 {
    let (a, b) = (a.to_array(), b.to_array());
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Every lattice line along `param` must be straight: the largest distance
/// of its points from the line through its ends.
pub fn check_ruling(
    id: &str,
    g: &SampleGrid,
    param: &str,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let k = g.param_index(param)?;
    let mut m = MaxResidual::new();
    for line in g.lines_along(k) {
        let (a, b) = (
            g.points()[line[0]],
            g.points()[*line.last().expect("nonempty")],
        );
        let len = a.distance(&b);
        if len <= tol {
            return Err(VerifyError::DegenerateLine {
                assignment: g.assignment(line[0]).into_iter().collect(),
            });
        }
        let dir = b.sub(a).scale(1.0 / len);
        for &f in &line {
            m.push(dist_to_line(g.points()[f], a, dir), g, f);
        }
    }
    Ok(m.report(id, tol))
}

/// Largest distance of the points from their best-fitting affine 2-plane
/// through `center`, from the trailing singular vectors of the centered
/// point matrix.
fn plane_distances(points: &[Quaternion], center: Quaternion) -> Vec<f64> {
    let n = points.len();
    let mat = DMatrix::from_fn(n, 4, |i, j| points[i].to_array()[j] - center.to_array()[j]);
    let svd = mat.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let normals: Vec<_> = order[2..].iter().map(|&i| vt.row(i).transpose()).collect();
    (0..n)
        .map(|i| {
            let row = mat.row(i).transpose();
            normals
                .iter()
                .map(|v| v.dot(&row).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

fn mean(points: &[Quaternion]) -> Quaternion {
    let mut s = [0.0; 4];
    for p in points {
        for (k, c) in p.to_array().iter().enumerate() {
            s[k] += c;
        }
    }
    Quaternion::from_array(s.map(|v| v / points.len() as f64)).expect("finite")
}

/// The points of the grid lie in an affine 2-plane.
pub fn check_planar(id: &str, g: &SampleGrid, tol: f64) -> Result<CheckReport, VerifyError> {
    let c = mean(g.points());
    let mut m = MaxResidual::new();
    for (f, d) in plane_distances(g.points(), c).into_iter().enumerate() {
        m.push(d, g, f);
    }
    Ok(m.report(id, tol))
}

/// Second differences along each lattice direction of a 2-dimensional grid
/// vanish, i.e. the coordinates are bilinear in the two parameters.
pub fn check_bilinear(id: &str, g: &SampleGrid, tol: f64) -> Result<CheckReport, VerifyError> {
    if g.dimension() != 2 {
        return Err(TessellateError::DimensionMismatch {
            expected: 2,
            found: g.dimension(),
        }
        .into());
    }
    let mut m = MaxResidual::new();
    for k in 0..2 {
        for line in g.lines_along(k) {
            for w in line.windows(3) {
                let p = g.points();
                let d2 = p[w[0]].sub(p[w[1]].scale(2.0)).add(p[w[2]]).norm();
                m.push(d2, g, w[1]);
            }
        }
    }
    Ok(m.report(id, tol))
}

/// Every lattice line along `param` is a closed circle: equidistant from its
/// mean and contained in a 2-plane.
pub fn check_circle_family(
    id: &str,
    g: &SampleGrid,
    param: &str,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let k = g.param_index(param)?;
    let mut m = MaxResidual::new();
    for line in g.lines_along(k) {
        let (first, last) = (
            g.points()[line[0]],
            g.points()[*line.last().expect("nonempty")],
        );
        let gap = first.distance(&last);
        if gap > CLOSURE_TOLERANCE {
            return Err(VerifyError::NotClosed {
                assignment: g.assignment(line[0]).into_iter().collect(),
                gap,
            });
        }
        // The last sample repeats the first.
        let idx = &line[..line.len() - 1];
        let pts: Vec<Quaternion> = idx.iter().map(|&f| g.points()[f]).collect();
        let c = mean(&pts);
        let radii: Vec<f64> = pts.iter().map(|p| p.distance(&c)).collect();
        let r = radii.iter().sum::<f64>() / radii.len() as f64;
        let planar = plane_distances(&pts, c);
        for (j, &f) in idx.iter().enumerate() {
            m.push((radii[j] - r).abs().max(planar[j]), g, f);
        }
    }
    Ok(m.report(id, tol))
}

/// The DOP images of a point share their `(x, y)` coordinates.
pub fn check_dop_shared_shadow(id: &str, grids: &[SampleGrid]) -> CheckReport {
    let mut m = MaxResidual::new();
    for g in grids {
        for (f, p) in g.points().iter().enumerate() {
            let img = dop(*p);
            m.push(
                (img.z.x - img.w.x).abs().max((img.z.y - img.w.y).abs()),
                g,
                f,
            );
        }
    }
    m.report(id, 0.0)
}

fn unit3(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    (n > 0.0).then(|| a.map(|v| v / n))
}

fn cross_norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

/// For pairs of segments (first to last point of each 1-dimensional grid),
/// compares the directions of their DOP images. With `parallel` set, pairs
/// with parallel directions in R⁴ are compared; otherwise the non-parallel
/// pairs. The residual is the cross product of the normalized image
/// directions.
pub fn check_dop_parallelism(
    id: &str,
    grids: &[SampleGrid],
    parallel: bool,
    tol: f64,
) -> CheckReport {
    let seg = |g: &SampleGrid| g.points()[g.len() - 1].sub(g.points()[0]);
    let mut m = MaxResidual::new();
    for (i, a) in grids.iter().enumerate() {
        for b in &grids[i + 1..] {
            let (da, db) = (seg(a), seg(b));
            let (na, nb) = (da.scale(1.0 / da.norm()), db.scale(1.0 / db.norm()));
            let is_parallel = (1.0 - dot(na, nb).abs()) <= TOL_DIRECT;
            if is_parallel != parallel {
                continue;
            }
            let (ia, ib) = (dop(da), dop(db));
            let mut r: f64 = 0.0;
            for (x, y) in [(ia.z, ib.z), (ia.w, ib.w)] {
                // A direction imaged to a point is parallel to anything.
                if let (Some(x), Some(y)) = (unit3(x.to_array()), unit3(y.to_array())) {
                    r = r.max(cross_norm(x, y));
                }
            }
            m.push(r, a, 0);
        }
    }
    m.report(id, tol)
}

/// Each grid is a straight segment through `point`.
pub fn check_point_on_lines(
    id: &str,
    point: Quaternion,
    lines: &[SampleGrid],
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let mut m = MaxResidual::new();
    for g in lines {
        let k = g.param_names()[0].clone();
        let straight = check_ruling(id, g, &k, tol)?;
        let (a, b) = (g.points()[0], g.points()[g.len() - 1]);
        let dir = b.sub(a).scale(1.0 / a.distance(&b));
        let d = dist_to_line(point, a, dir);
        m.push(straight.max_residual.max(d), g, 0);
    }
    Ok(m.report(id, tol))
}

// ---------------------------------------------------------------------------
// Registry

/// What a check is expected to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    Pass,
    /// A negative control: the residual must exceed the tolerance.
    Fail,
    /// The lattice lines must be reported as not closed.
    NotClosed,
}

pub struct CheckSpec {
    pub id: &'static str,
    pub expect: Expect,
    pub description: &'static str,
}

const fn spec(id: &'static str, expect: Expect, description: &'static str) -> CheckSpec {
    CheckSpec {
        id,
        expect,
        description,
    }
}

use Expect::{Fail, NotClosed, Pass};

pub const CHECKS: &[CheckSpec] = &[
    spec("cube/edge-lengths", Pass, "every edge has length 1"),
    spec(
        "cube/shared-shadow",
        Pass,
        "both DOP images share (x, y) exactly",
    ),
    spec(
        "cube/parallel-edges",
        Pass,
        "parallel edges have parallel DOP images",
    ),
    spec(
        "cube/crossed-edges",
        Fail,
        "control: non-parallel edges have non-parallel images",
    ),
    spec("clifford-sum/unit-norm", Pass, "|c| = 1"),
    spec("clifford-sum/torus-standard", Pass, "x² + z² = y² + w² = ½"),
    spec(
        "clifford-sum/shadow-xz",
        Pass,
        "the (x, z) shadow is the circle x² + z² = ½",
    ),
    spec(
        "clifford-sum/bilinear-control",
        Fail,
        "control: the torus is not bilinear",
    ),
    spec("clifford-prod/unit-norm", Pass, "|d| = 1"),
    spec("clifford-prod/circles-u", Pass, "u-curves are circles"),
    spec("clifford-prod/circles-v", Pass, "v-curves are circles"),
    spec(
        "clifford-prod/torus-standard-control",
        Fail,
        "control: d is not in the standard position",
    ),
    spec(
        "clifford-rotation/rotation",
        Pass,
        "c(u1, u2) = h·d(v1, v2) with the shifted reparametrization",
    ),
    spec(
        "clifford-rotation/offset-removed",
        Fail,
        "control: without the π/4 offset the map is wrong",
    ),
    spec("clifford-rotation/self-map", Pass, "c compared with itself"),
    spec(
        "clifford-rotation/left-product",
        Pass,
        "the Minkowski product h ⊗ d matches c",
    ),
    spec("quad-cone/implicit", Pass, "xy + zw = 0"),
    spec(
        "quad-cone/implicit-control",
        Fail,
        "control: xy − zw does not vanish",
    ),
    spec(
        "quad-cone/planar-u-faces",
        Pass,
        "boundary faces with fixed u are planar",
    ),
    spec(
        "quad-cone/planar-control",
        Fail,
        "control: faces with fixed v1 are not planar",
    ),
    spec(
        "quad-cone/bilinear-v-faces",
        Pass,
        "faces with fixed v1 or v2 are hyperbolic paraboloids",
    ),
    spec(
        "quad-cone/rulings",
        Pass,
        "lattice lines in every parameter are straight",
    ),
    spec(
        "quad-cone/marked-point",
        Pass,
        "the marked product is (0.3, 0.4, −0.24, 0.5)",
    ),
    spec(
        "quad-cone/marked-rulings",
        Pass,
        "the marked point lies on three straight rulings",
    ),
    spec("cone-sphere/implicit", Pass, "xy + zw = 0"),
    spec("cone-sphere/unit-norm", Pass, "|p| = 1"),
    spec(
        "cone-sphere/torus-rotated45",
        Pass,
        "points lie on the Clifford torus in the 45° frame",
    ),
    spec(
        "cone-sphere/full-torus-rotated45",
        Pass,
        "the full intersection lies on the same torus",
    ),
    spec(
        "cone-sphere/torus-standard-control",
        Fail,
        "control: not on the standard-frame torus",
    ),
    spec("hopf-3sphere/unit-norm", Pass, "|s| = 1"),
    spec(
        "hopf-3sphere/slice-radii",
        Pass,
        "v1-slices are tori with radii |cos v1| and |sin v1|",
    ),
    spec(
        "hopf-3sphere/torus-standard-control",
        Fail,
        "control: the 3-sphere is not a torus",
    ),
    spec(
        "pluecker/conoid",
        Pass,
        "w = 0 shadow satisfies x²(1 − y²) = z²y²",
    ),
    spec("pluecker/rulings-u", Pass, "u-curves are lines"),
    spec("pluecker/circles-v", Pass, "v-curves are circles"),
    spec(
        "pluecker/rulings-v-control",
        Fail,
        "control: circles are not lines",
    ),
    spec(
        "pluecker/circle-radius",
        Pass,
        "the circle at u = 1 has radius √2 about the origin",
    ),
    spec("line-helix/rulings-u", Pass, "u-curves are lines"),
    spec(
        "line-helix/helices-open",
        NotClosed,
        "v-curves are helices, not closed",
    ),
    spec(
        "line-helix/conoid-control",
        Fail,
        "control: the shadow is not the conoid",
    ),
    spec("butterfly/rulings-u", Pass, "u-curves are lines"),
    spec(
        "butterfly/helices-open",
        NotClosed,
        "v-curves are helices, not closed",
    ),
];

pub fn find_check(id: &str) -> Result<&'static CheckSpec, VerifyError> {
    CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| VerifyError::UnknownCheck(id.to_string()))
}

fn grid(scene: &Scene, set: &str, res: usize) -> Result<SampleGrid, VerifyError> {
    let s = scene.set(set)?;
    Ok(sample(s, &vec![res; s.dimension()])?)
}

fn single_point(scene: &Scene, set: &str) -> Result<Quaternion, VerifyError> {
    let g = sample(scene.set(set)?, &[])?;
    Ok(g.points()[0])
}

fn edges(scene: &Scene) -> Result<Vec<SampleGrid>, VerifyError> {
    scene
        .sets
        .iter()
        .map(|s| Ok(sample(s, &vec![2; s.dimension()])?))
        .collect()
}

fn faces_of(scene: &Scene, set: &str, param: &[&str]) -> Result<Vec<SampleGrid>, VerifyError> {
    let g = grid(scene, set, SOLID_RES)?;
    Ok(boundary_faces(&g)?
        .into_iter()
        .filter(|(tag, _)| param.contains(&tag.param.as_str()))
        .map(|(_, f)| f)
        .collect())
}

fn merge(id: &str, tol: f64, reports: Vec<CheckReport>) -> CheckReport {
    let mut best: Option<CheckReport> = None;
    let mut samples = 0;
    for r in reports {
        samples += r.samples_tested;
        if best
            .as_ref()
            .is_none_or(|b| r.max_residual > b.max_residual)
        {
            best = Some(r);
        }
    }
    let b = best.expect("at least one report");
    CheckReport {
        check_id: id.to_string(),
        tolerance: tol,
        pass: b.max_residual <= tol,
        samples_tested: samples,
        ..b
    }
}

const UNIT_NORM: &str = "sqrt(x^2 + y^2 + z^2 + w^2) - 1";
const CONOID: &str = "x^2*(1 - y^2) - z^2*y^2";

/// Runs one registered check against a scene.
pub fn run_check(scene: &Scene, id: &str) -> Result<CheckReport, VerifyError> {
    find_check(id)?;
    let rotor_h =
        || Rotor4::left_only(Quaternion::from_array([0.5; 4]).expect("finite")).expect("unit");
    match id {
        "cube/edge-lengths" => {
            let mut m = MaxResidual::new();
            for g in edges(scene)? {
                m.push(g.points()[0].distance(&g.points()[1]) - 1.0, &g, 1);
            }
            Ok(m.report(id, TOL_DIRECT))
        }
        "cube/shared-shadow" => {
            let grids: Vec<SampleGrid> = scene
                .sets
                .iter()
                .map(|s| sample(s, &vec![SURFACE_RES; s.dimension()]))
                .collect::<Result<_, _>>()?;
            Ok(check_dop_shared_shadow(id, &grids))
        }
        "cube/parallel-edges" => Ok(check_dop_parallelism(id, &edges(scene)?, true, TOL_DERIVED)),
        "cube/crossed-edges" => Ok(check_dop_parallelism(
            id,
            &edges(scene)?,
            false,
            TOL_DERIVED,
        )),

        "clifford-sum/unit-norm" | "clifford-prod/unit-norm" => {
            let set = if id.starts_with("clifford-sum") {
                "c"
            } else {
                "d"
            };
            check_implicit(id, &grid(scene, set, SURFACE_RES)?, UNIT_NORM, TOL_DIRECT)
        }
        "clifford-sum/torus-standard" => check_torus_membership(
            id,
            &grid(scene, "c", SURFACE_RES)?,
            TorusFrame::Standard,
            TOL_DIRECT,
        ),
        "clifford-sum/shadow-xz" => check_projection_residual(
            id,
            &grid(scene, "c", SURFACE_RES)?,
            &OrthoTarget::new(&[Axis::X, Axis::Z]).expect("distinct"),
            "x^2 + z^2 - 0.5",
            TOL_DIRECT,
        ),
        "clifford-sum/bilinear-control" => {
            check_bilinear(id, &grid(scene, "c", SURFACE_RES)?, TOL_DERIVED)
        }
        "clifford-prod/circles-u" => {
            check_circle_family(id, &grid(scene, "d", SURFACE_RES)?, "u", TOL_DERIVED)
        }
        "clifford-prod/circles-v" => {
            check_circle_family(id, &grid(scene, "d", SURFACE_RES)?, "v", TOL_DERIVED)
        }
        "clifford-prod/torus-standard-control" => check_torus_membership(
            id,
            &grid(scene, "d", SURFACE_RES)?,
            TorusFrame::Standard,
            TOL_DIRECT,
        ),

        "clifford-rotation/rotation" | "clifford-rotation/offset-removed" => {
            let offset = if id.ends_with("rotation") {
                " + pi/4"
            } else {
                ""
            };
            let v2 = format!("(u1 - u2)/2{offset}");
            check_pointwise_map(
                id,
                &grid(scene, "c", SURFACE_RES)?,
                scene.set("d")?,
                &[("v1", "(u1 + u2)/2"), ("v2", &v2)],
                &rotor_h(),
                TOL_DIRECT,
            )
        }
        "clifford-rotation/self-map" => check_pointwise_map(
            id,
            &grid(scene, "c", SURFACE_RES)?,
            scene.set("c")?,
            &[("u1", "u1"), ("u2", "u2")],
            &Rotor4::IDENTITY,
            TOL_DIRECT,
        ),
        "clifford-rotation/left-product" => check_pointwise_map(
            id,
            &grid(scene, "c", SURFACE_RES)?,
            scene.set("hd")?,
            &[("v1", "(u1 + u2)/2"), ("v2", "(u1 - u2)/2 + pi/4")],
            &Rotor4::IDENTITY,
            TOL_DIRECT,
        ),

        "quad-cone/implicit" => check_implicit(
            id,
            &grid(scene, "cone", SOLID_RES)?,
            "x*y + z*w",
            TOL_DIRECT,
        ),
        "quad-cone/implicit-control" => check_implicit(
            id,
            &grid(scene, "cone", SOLID_RES)?,
            "x*y - z*w",
            TOL_DIRECT,
        ),
        "quad-cone/planar-u-faces" | "quad-cone/planar-control" => {
            let param = if id.ends_with("control") { "v1" } else { "u" };
            let reports = faces_of(scene, "cone", &[param])?
                .iter()
                .map(|f| check_planar(id, f, TOL_DERIVED))
                .collect::<Result<_, _>>()?;
            Ok(merge(id, TOL_DERIVED, reports))
        }
        "quad-cone/bilinear-v-faces" => {
            let reports = faces_of(scene, "cone", &["v1", "v2"])?
                .iter()
                .map(|f| check_bilinear(id, f, TOL_DERIVED))
                .collect::<Result<_, _>>()?;
            Ok(merge(id, TOL_DERIVED, reports))
        }
        "quad-cone/rulings" => {
            let g = grid(scene, "cone", SOLID_RES)?;
            let reports = ["u", "v1", "v2"]
                .iter()
                .map(|p| check_ruling(id, &g, p, TOL_DERIVED))
                .collect::<Result<_, _>>()?;
            Ok(merge(id, TOL_DERIVED, reports))
        }
        "quad-cone/marked-point" => {
            let p = single_point(scene, "mark")?;
            let expected = Quaternion::from_array([0.3, 0.4, -0.24, 0.5]).expect("finite");
            let g = sample(scene.set("mark")?, &[])?;
            let mut m = MaxResidual::new();
            m.push(p.distance(&expected), &g, 0);
            Ok(m.report(id, TOL_DIRECT))
        }
        "quad-cone/marked-rulings" => {
            let mark = single_point(scene, "mark")?;
            let lines = ["ruling_u", "ruling_v1", "ruling_v2"]
                .iter()
                .map(|n| grid(scene, n, SURFACE_RES))
                .collect::<Result<Vec<_>, _>>()?;
            check_point_on_lines(id, mark, &lines, TOL_DERIVED)
        }

        "cone-sphere/implicit" => check_implicit(
            id,
            &grid(scene, "portion", SURFACE_RES)?,
            "x*y + z*w",
            TOL_DIRECT,
        ),
        "cone-sphere/unit-norm" => check_implicit(
            id,
            &grid(scene, "portion", SURFACE_RES)?,
            UNIT_NORM,
            TOL_DIRECT,
        ),
        "cone-sphere/torus-rotated45" => check_torus_membership(
            id,
            &grid(scene, "portion", SURFACE_RES)?,
            TorusFrame::Rotated45,
            TOL_DERIVED,
        ),
        "cone-sphere/full-torus-rotated45" => check_torus_membership(
            id,
            &grid(scene, "torus", SURFACE_RES)?,
            TorusFrame::Rotated45,
            TOL_DERIVED,
        ),
        "cone-sphere/torus-standard-control" => check_torus_membership(
            id,
            &grid(scene, "portion", SURFACE_RES)?,
            TorusFrame::Standard,
            TOL_DERIVED,
        ),

        "hopf-3sphere/unit-norm" => {
            check_implicit(id, &grid(scene, "s3", SOLID_RES)?, UNIT_NORM, TOL_DIRECT)
        }
        "hopf-3sphere/slice-radii" => {
            check_slice_radii(id, &grid(scene, "s3", SOLID_RES)?, "v1", TOL_DIRECT)
        }
        "hopf-3sphere/torus-standard-control" => check_torus_membership(
            id,
            &grid(scene, "s3", SOLID_RES)?,
            TorusFrame::Standard,
            TOL_DIRECT,
        ),

        "pluecker/conoid" | "line-helix/conoid-control" => {
            let set = if id.starts_with("pluecker") { "c" } else { "d" };
            check_projection_residual(
                id,
                &grid(scene, set, SURFACE_RES)?,
                &OrthoTarget::hyperplane(Axis::W),
                CONOID,
                TOL_DERIVED,
            )
        }
        "pluecker/rulings-u" => check_ruling(id, &grid(scene, "c", SURFACE_RES)?, "u", TOL_DERIVED),
        "pluecker/rulings-v-control" => {
            // Half circles, so the chord through the ends is well defined.
            let arcs = scene
                .set("c")?
                .clone()
                .with_interval("v", -FRAC_PI_2, FRAC_PI_2)
                .map_err(SceneError::from_set("c"))?;
            check_ruling(
                id,
                &sample(&arcs, &[SURFACE_RES, SURFACE_RES])?,
                "v",
                TOL_DERIVED,
            )
        }
        "pluecker/circles-v" => {
            check_circle_family(id, &grid(scene, "c", SURFACE_RES)?, "v", TOL_DERIVED)
        }
        "pluecker/circle-radius" => {
            let s = scene
                .set("c")?
                .freeze("u", 1.0)
                .map_err(SceneError::from_set("c"))?
                .with_name("c[u=1]");
            let g = sample(&s, &[CURVE_RES])?;
            check_implicit(id, &g, "sqrt(x^2 + y^2 + z^2 + w^2) - sqrt(2)", TOL_DIRECT)
        }
        "line-helix/rulings-u" | "butterfly/rulings-u" => {
            check_ruling(id, &grid(scene, "d", SURFACE_RES)?, "u", TOL_DERIVED)
        }
        "line-helix/helices-open" | "butterfly/helices-open" => {
            check_circle_family(id, &grid(scene, "d", SURFACE_RES)?, "v", TOL_DERIVED)
        }
        _ => Err(VerifyError::UnknownCheck(id.to_string())),
    }
}

/// A check run with its expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckOutcome {
    pub check_id: String,
    pub expect: Expect,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Whether the result matched the expectation.
    pub ok: bool,
}

pub fn run_outcome(scene: &Scene, id: &str) -> CheckOutcome {
    let (expect, description) = match find_check(id) {
        Ok(s) => (s.expect, s.description.to_string()),
        Err(e) => {
            return CheckOutcome {
                check_id: id.to_string(),
                expect: Pass,
                description: String::new(),
                report: None,
                error: Some(e.to_string()),
                ok: false,
            }
        }
    };
    let result = run_check(scene, id);
    let ok = match (&result, expect) {
        (Ok(r), Pass) => r.pass,
        (Ok(r), Fail) => !r.pass,
        (Err(VerifyError::NotClosed { .. }), NotClosed) => true,
        _ => false,
    };
    let (report, error) = match result {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CheckOutcome {
        check_id: id.to_string(),
        expect,
        description,
        report,
        error,
        ok,
    }
}

/// Runs every check attached to the scene.
pub fn run_scene(scene: &Scene) -> Vec<CheckOutcome> {
    scene
        .checks
        .iter()
        .map(|id| run_outcome(scene, id))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryResult {
    pub entry: String,
    pub ok: bool,
    pub checks: Vec<CheckOutcome>,
}

pub fn run_entry(id: &str) -> Result<EntryResult, VerifyError> {
    let scene = gallery::get(id)?.scene()?;
    let checks = run_scene(&scene);
    Ok(EntryResult {
        entry: id.to_string(),
        ok: checks.iter().all(|c| c.ok),
        checks,
    })
}

pub fn run_all() -> Result<Vec<EntryResult>, VerifyError> {
    gallery::list().into_iter().map(run_entry).collect()
}
