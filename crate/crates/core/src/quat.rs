//! Quaternions read as points of R⁴.
//!
//! A quaternion `(a0, a1, a2, a3)` has scalar part `a0` and vector part
//! `(a1, a2, a3)`. Products are taken in the written order: `a.mul(b)` is the
//! left product of `b` by `a`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_ZERO_TOLERANCE: f64 = 1e-12;

static ZERO_TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3D71_9799_812D_EA11); // 1e-12

/// Absolute threshold below which a norm counts as zero.
pub fn zero_tolerance() -> f64 {
    f64::from_bits(ZERO_TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replaces the global zero tolerance. Non-positive or non-finite values
/// restore the default.
pub fn set_zero_tolerance(tol: f64) {
    let tol = if tol.is_finite() && tol > 0.0 {
        tol
    } else {
        DEFAULT_ZERO_TOLERANCE
    };
    ZERO_TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuatError {
    #[error("quaternion component {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("division by a zero quaternion (norm {norm:e})")]
    ZeroNorm { norm: f64 },
    #[error("real quaternion has no trigonometric axis (vector norm {norm:e})")]
    ZeroVectorPart { norm: f64 },
    #[error("trigonometric form is invalid: {0}")]
    InvalidTrigForm(&'static str),
}

#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 4]", try_from = "[f64; 4]")]
pub struct Quaternion {
    c: [f64; 4],
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { c: [0.0; 4] };
    pub const ONE: Quaternion = Quaternion {
        c: [1.0, 0.0, 0.0, 0.0],
    };
    pub const I: Quaternion = Quaternion {
        c: [0.0, 1.0, 0.0, 0.0],
    };
    pub const J: Quaternion = Quaternion {
        c: [0.0, 0.0, 1.0, 0.0],
    };
    pub const K: Quaternion = Quaternion {
        c: [0.0, 0.0, 0.0, 1.0],
    };

    /// Builds a quaternion, rejecting NaN and infinite components.
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Result<Self, QuatError> {
        Self::from_array([a0, a1, a2, a3])
    }

    pub fn from_array(c: [f64; 4]) -> Result<Self, QuatError> {
        for (index, &value) in c.iter().enumerate() {
            if !value.is_finite() {
                return Err(QuatError::NonFinite { index, value });
            }
        }
        Ok(Self { c })
    }

    /// Scalar part `s` and vector part `v`.
    pub fn from_scalar_vector(s: f64, v: [f64; 3]) -> Result<Self, QuatError> {
        Self::from_array([s, v[0], v[1], v[2]])
    }

    #[inline]
    pub fn a0(&self) -> f64 {
        self.c[0]
    }
    #[inline]
    pub fn a1(&self) -> f64 {
        self.c[1]
    }
    #[inline]
    pub fn a2(&self) -> f64 {
        self.c[2]
    }
    #[inline]
    pub fn a3(&self) -> f64 {
        self.c[3]
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        self.c
    }

    #[inline]
    pub fn scalar(&self) -> f64 {
        self.c[0]
    }

    #[inline]
    pub fn vector(&self) -> [f64; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.c, rhs.c);
        Self {
            c: [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]],
        }
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.c, rhs.c);
        Self {
            c: [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]],
        }
    }

    /// Hamilton product `self · rhs`, evaluated left to right term by term.
    ///
    /// The evaluation order matches the expanded product expressions built by
    /// [`crate::minkowski::mprod`], so sampled products agree bit for bit.
    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        Self {
            c: [
                a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
            ],
        }
    }

    /// The same product through `(a0 b0 − a·b, a0 b + b0 a + a × b)`.
    pub fn mul_scalar_vector(self, rhs: Self) -> Self {
        let (a0, a) = (self.scalar(), self.vector());
        let (b0, b) = (rhs.scalar(), rhs.vector());
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        Self {
            c: [
                a0 * b0 - dot,
                a0 * b[0] + b0 * a[0] + cross[0],
                a0 * b[1] + b0 * a[1] + cross[1],
                a0 * b[2] + b0 * a[2] + cross[2],
            ],
        }
    }

    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self {
            c: self.c.map(|x| x * k),
        }
    }

    #[inline]
    pub fn conjugate(self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        Self {
            c: [a0, -a1, -a2, -a3],
        }
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        let [a0, a1, a2, a3] = self.c;
        a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Euclidean distance between the two points of R⁴.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(*other).norm()
    }

    /// `A* / |A|²`.
    pub fn inverse(self) -> Result<Self, QuatError> {
        let norm = self.norm();
        if norm <= zero_tolerance() {
            return Err(QuatError::ZeroNorm { norm });
        }
        let n2 = self.norm_squared();
        let [a0, a1, a2, a3] = self.conjugate().c;
        Ok(Self {
            c: [a0 / n2, a1 / n2, a2 / n2, a3 / n2],
        })
    }

    /// Left division of `b` by `self`: `self⁻¹ · b`.
    pub fn divide_left(self, b: Self) -> Result<Self, QuatError> {
        Ok(self.inverse()?.mul(b))
    }

    /// Right division of `self` by `a`: `self · a⁻¹`.
    pub fn divide_right(self, a: Self) -> Result<Self, QuatError> {
        Ok(self.mul(a.inverse()?))
    }

    pub fn normalized(self) -> Result<Self, QuatError> {
        let norm = self.norm();
        if norm <= zero_tolerance() {
            return Err(QuatError::ZeroNorm { norm });
        }
        Ok(self.scale(1.0 / norm))
    }

    pub fn trig_form(self) -> Result<TrigForm, QuatError> {
        let v = self.vector();
        let vnorm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if vnorm <= zero_tolerance() {
            return Err(QuatError::ZeroVectorPart { norm: vnorm });
        }
        // Axis along the vector part, so sin(φ/2) > 0 and φ/2 ∈ (0, π).
        // Scalar parts ≥ 0 give φ ∈ (0, π]; negative scalar parts need φ ∈ (π, 2π).
        let phi = 2.0 * vnorm.atan2(self.scalar());
        let axis = [v[0] / vnorm, v[1] / vnorm, v[2] / vnorm];
        Ok(TrigForm {
            modulus: self.norm(),
            phi,
            axis,
        })
    }

    pub fn from_trig(t: &TrigForm) -> Result<Self, QuatError> {
        t.validate()?;
        let (s, c) = (t.phi / 2.0).sin_cos();
        Self::from_scalar_vector(
            t.modulus * c,
            [
                t.modulus * t.axis[0] * s,
                t.modulus * t.axis[1] * s,
                t.modulus * t.axis[2] * s,
            ],
        )
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.c
            .iter()
            .zip(other.c.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Default for Quaternion {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.c;
        write!(f, "({a0:?}, {a1:?}, {a2:?}, {a3:?})")
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.c
    }
}

impl TryFrom<[f64; 4]> for Quaternion {
    type Error = QuatError;
    fn try_from(c: [f64; 4]) -> Result<Self, Self::Error> {
        Self::from_array(c)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Self) -> Self {
        Quaternion::add(self, rhs)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::sub(self, rhs)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Self) -> Self {
        Quaternion::mul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// `modulus · (cos(φ/2) + axis · sin(φ/2))`.
///
/// [`Quaternion::trig_form`] yields `φ ∈ [0, π]` for quaternions with a
/// non-negative scalar part and `φ ∈ (π, 2π)` otherwise; [`Quaternion::from_trig`]
/// accepts any `|φ| ≤ 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigForm {
    pub modulus: f64,
    pub phi: f64,
    pub axis: [f64; 3],
}

impl TrigForm {
    // Written so that NaN fails every test.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), QuatError> {
        if !(self.modulus.is_finite() && self.modulus >= 0.0) {
            return Err(QuatError::InvalidTrigForm(
                "modulus must be finite and non-negative",
            ));
        }
        if !(self.phi.abs() <= 2.0 * std::f64::consts::PI) {
            return Err(QuatError::InvalidTrigForm("phi must lie in [-2pi, 2pi]"));
        }
        let n = self.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !((n - 1.0).abs() <= 1e-12) {
            return Err(QuatError::InvalidTrigForm("axis must be a unit vector"));
        }
        Ok(())
    }
}
