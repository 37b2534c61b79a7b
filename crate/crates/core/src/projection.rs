//! Maps from R⁴ to the modeling 3-space `(x, y, w)`.
//!
//! * Double orthogonal projection (DOP): each point has an image in `(x, y, z)`
//!   and one in `(x, y, w)`. The `(x, y, z)` image is turned about the shared
//!   `(x, y)` plane into the modeling space with `+z` pointing along `−w`.
//! * 4-D perspective from the center `(0, 0, d, 0)`.
//! * Orthogonal projections onto coordinate planes and 3-spaces.
//! * Rotations `p ↦ L·p·R` with unit quaternions `L`, `R`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{QuatError, Quaternion};

/// Unit tolerance for rotor quaternions.
pub const ROTOR_UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectionError {
    #[error("point with a2 = {a2:e} lies within {epsilon:e} of the perspective center hyperplane")]
    NearCenterHyperplane { a2: f64, epsilon: f64 },
    #[error("rotor quaternions must be unit (|left| = {left}, |right| = {right})")]
    NonUnitRotor { left: f64, right: f64 },
    #[error("invalid perspective configuration: d = {d}, epsilon = {epsilon}")]
    InvalidPerspective { d: f64, epsilon: f64 },
    #[error("invalid projection `{0}`")]
    InvalidMode(String),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// A point of the modeling 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, w: f64) -> Self {
        Self { x, y, w }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.w]
    }

    /// Difference vector `self − o`.
    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, o: Self) -> [f64; 3] {
        [self.x - o.x, self.y - o.y, self.w - o.w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
    W,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::X, Axis::Y, Axis::Z, Axis::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        ['x', 'y', 'z', 'w'][self.index()]
    }

    pub fn from_letter(c: char) -> Option<Axis> {
        Axis::ALL.into_iter().find(|a| a.letter() == c)
    }
}

/// Coordinate plane spanned by two distinct axes, e.g. `(x, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxisPlane(Axis, Axis);

impl AxisPlane {
    pub const XY: AxisPlane = AxisPlane(Axis::X, Axis::Y);
    pub const XZ: AxisPlane = AxisPlane(Axis::X, Axis::Z);
    pub const XW: AxisPlane = AxisPlane(Axis::X, Axis::W);
    pub const YZ: AxisPlane = AxisPlane(Axis::Y, Axis::Z);
    pub const YW: AxisPlane = AxisPlane(Axis::Y, Axis::W);
    pub const ZW: AxisPlane = AxisPlane(Axis::Z, Axis::W);

    pub fn new(a: Axis, b: Axis) -> Option<Self> {
        (a != b).then_some(AxisPlane(a, b))
    }

    pub fn axes(self) -> (Axis, Axis) {
        (self.0, self.1)
    }
}

impl FromStr for AxisPlane {
    type Err = ProjectionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cs: Vec<char> = s.chars().collect();
        match cs[..] {
            [a, b] => Axis::from_letter(a)
                .zip(Axis::from_letter(b))
                .and_then(|(a, b)| AxisPlane::new(a, b)),
            _ => None,
        }
        .ok_or_else(|| ProjectionError::InvalidMode(s.to_string()))
    }
}

/// Target of an orthogonal projection: two or three distinct axes. Two-axis
/// images are embedded with a zero third coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoTarget {
    axes: Vec<Axis>,
}

impl OrthoTarget {
    pub fn new(axes: &[Axis]) -> Option<Self> {
        let distinct = axes.iter().enumerate().all(|(i, a)| !axes[..i].contains(a));
        (distinct && (2..=3).contains(&axes.len())).then(|| Self {
            axes: axes.to_vec(),
        })
    }

    pub fn plane(p: AxisPlane) -> Self {
        Self {
            axes: vec![p.0, p.1],
        }
    }

    /// The 3-space orthogonal to `axis` (the hyperplane `axis = 0`), keeping
    /// the remaining axes in order.
    pub fn hyperplane(axis: Axis) -> Self {
        Self {
            axes: Axis::ALL.into_iter().filter(|a| *a != axis).collect(),
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn label(&self) -> String {
        self.axes.iter().map(|a| a.letter()).collect()
    }
}

impl FromStr for OrthoTarget {
    type Err = ProjectionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let axes: Option<Vec<Axis>> = s.chars().map(Axis::from_letter).collect();
        axes.and_then(|a| OrthoTarget::new(&a))
            .ok_or_else(|| ProjectionError::InvalidMode(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerspectiveConfig {
    d: f64,
    epsilon: f64,
}

impl PerspectiveConfig {
    /// Focal distance `d` with the default clip band `1e-9 · d`.
    pub fn new(d: f64) -> Result<Self, ProjectionError> {
        Self::with_epsilon(d, 1e-9 * d)
    }

    pub fn with_epsilon(d: f64, epsilon: f64) -> Result<Self, ProjectionError> {
        if d.is_finite() && d > 0.0 && epsilon.is_finite() && epsilon > 0.0 {
            Ok(Self { d, epsilon })
        } else {
            Err(ProjectionError::InvalidPerspective { d, epsilon })
        }
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Both DOP images of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopImage {
    /// `(a0, a1, a2)` in its own 3-space `(x, y, z)`.
    pub z_raw: [f64; 3],
    /// The `(x, y, z)` image placed in the modeling space: `(a0, a1, −a2)`.
    pub z: Point3,
    /// `(a0, a1, a3)`.
    pub w: Point3,
}

pub fn dop(p: Quaternion) -> DopImage {
    let [a0, a1, a2, a3] = p.to_array();
    DopImage {
        z_raw: [a0, a1, a2],
        z: Point3::new(a0, a1, -a2),
        w: Point3::new(a0, a1, a3),
    }
}

/// Central projection from `(0, 0, d, 0)`:
/// `(d·a0/a2, d·a1/a2, d·a3/a2)` for `|a2| > ε`, `(a0, a1, a3)` for `a2 = 0`.
pub fn perspective(p: Quaternion, cfg: &PerspectiveConfig) -> Result<Point3, ProjectionError> {
    let [a0, a1, a2, a3] = p.to_array();
    if a2 == 0.0 {
        return Ok(Point3::new(a0, a1, a3));
    }
    if a2.abs() <= cfg.epsilon {
        return Err(ProjectionError::NearCenterHyperplane {
            a2,
            epsilon: cfg.epsilon,
        });
    }
    let d = cfg.d;
    Ok(Point3::new(d * a0 / a2, d * a1 / a2, d * a3 / a2))
}

pub fn ortho_plane(p: Quaternion, plane: AxisPlane) -> (f64, f64) {
    let c = p.to_array();
    (c[plane.0.index()], c[plane.1.index()])
}

pub fn ortho(p: Quaternion, target: &OrthoTarget) -> Point3 {
    let c = p.to_array();
    let pick = |k: usize| target.axes.get(k).map_or(0.0, |a| c[a.index()]);
    Point3::new(pick(0), pick(1), pick(2))
}

/// Rotation `p ↦ left · p · right` by two unit quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotor4 {
    left: Quaternion,
    right: Quaternion,
}

impl Rotor4 {
    pub const IDENTITY: Rotor4 = Rotor4 {
        left: Quaternion::ONE,
        right: Quaternion::ONE,
    };

    pub fn new(left: Quaternion, right: Quaternion) -> Result<Self, ProjectionError> {
        let (l, r) = (left.norm(), right.norm());
        if (l - 1.0).abs() > ROTOR_UNIT_TOLERANCE || (r - 1.0).abs() > ROTOR_UNIT_TOLERANCE {
            return Err(ProjectionError::NonUnitRotor { left: l, right: r });
        }
        Ok(Self { left, right })
    }

    pub fn left_only(left: Quaternion) -> Result<Self, ProjectionError> {
        Self::new(left, Quaternion::ONE)
    }

    /// Normalizes both factors after checking they are within `tol` of unit
    /// length.
    pub fn normalized(
        left: Quaternion,
        right: Quaternion,
        tol: f64,
    ) -> Result<Self, ProjectionError> {
        let (l, r) = (left.norm(), right.norm());
        if (l - 1.0).abs() > tol || (r - 1.0).abs() > tol {
            return Err(ProjectionError::NonUnitRotor { left: l, right: r });
        }
        Ok(Self {
            left: left.normalized()?,
            right: right.normalized()?,
        })
    }

    pub fn left(&self) -> Quaternion {
        self.left
    }

    pub fn right(&self) -> Quaternion {
        self.right
    }

    pub fn apply(&self, p: Quaternion) -> Quaternion {
        self.left.mul(p).mul(self.right)
    }

    /// The rotation a fraction `s` of the way from the identity to `self`,
    /// moving each factor's angle linearly about its fixed axis.
    pub fn partial(&self, s: f64) -> Result<Self, ProjectionError> {
        fn power(q: Quaternion, s: f64) -> Result<Quaternion, QuatError> {
            match q.trig_form() {
                Ok(mut t) => {
                    t.phi *= s;
                    t.modulus = 1.0;
                    Quaternion::from_trig(&t)
                }
                // A real unit quaternion is ±1; only +1 keeps a fixed axis.
                Err(QuatError::ZeroVectorPart { .. }) if q.a0() > 0.0 => Ok(Quaternion::ONE),
                Err(e) => Err(e),
            }
        }
        Self::new(power(self.left, s)?, power(self.right, s)?)
    }
}

impl Default for Rotor4 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

pub fn rotate4(p: Quaternion, r: &Rotor4) -> Quaternion {
    r.apply(p)
}

/// How a 4-D set is imaged.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionMode {
    Dop,
    Perspective(PerspectiveConfig),
    Ortho(OrthoTarget),
}

impl fmt::Display for ProjectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionMode::Dop => f.write_str("dop"),
            ProjectionMode::Perspective(_) => f.write_str("persp"),
            ProjectionMode::Ortho(t) => write!(f, "ortho:{}", t.label()),
        }
    }
}

impl ProjectionMode {
    /// Parses `dop`, `persp` (with focal distance `d`) or `ortho:<axes>`.
    pub fn parse(s: &str, d: f64) -> Result<Self, ProjectionError> {
        match s {
            "dop" => Ok(ProjectionMode::Dop),
            "persp" | "perspective" => Ok(ProjectionMode::Perspective(PerspectiveConfig::new(d)?)),
            _ => match s.strip_prefix("ortho:") {
                Some(axes) => Ok(ProjectionMode::Ortho(axes.parse()?)),
                None => Err(ProjectionError::InvalidMode(s.to_string())),
            },
        }
    }
}
