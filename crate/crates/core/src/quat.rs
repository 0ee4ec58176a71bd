//! Quaternion arithmetic, unit quaternions and axis–angle conversions.
//!
//! A quaternion `a + a_x i + a_y j + a_z k` is stored as `(w, x, y, z)`.
//! Unit quaternions are points of S³ and act on 3-vectors by `v ↦ U v U*`,
//! a rotation through `θ` about `n` when `U = cos ½θ + sin ½θ n`.
//!
//! Two exponentials appear throughout the crate and must not be confused:
//! [`UnitQuaternion::from_axis_angle`] takes the *rotation* angle `θ` and
//! builds `cos ½θ + sin ½θ n`, while [`UnitQuaternion::exp`] takes the
//! angle on the great circle `s` and builds `cos s + sin s c`.

use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit-norm tolerance guaranteed after construction.
pub const UNIT_TOL: f64 = 1e-12;
/// Largest norm deviation that constructors silently repair.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Below this value of `sin ½θ` the rotation axis is not meaningful.
pub const DEGENERATE_SIN_HALF: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vector3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vector3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vector3) -> Vector3 {
        Vector3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `self / |self|`, or `None` for a (numerically) zero vector.
    pub fn normalized(self) -> Option<Vector3> {
        let n = self.norm();
        (n > f64::MIN_POSITIVE && n.is_finite()).then(|| self.scale(1.0 / n))
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        self.scale(s)
    }
}

/// A 3-vector of unit length, used for rotation axes and imaginary units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct UnitVector3(Vector3);

impl UnitVector3 {
    pub const I: UnitVector3 = UnitVector3(Vector3::new(1.0, 0.0, 0.0));
    pub const J: UnitVector3 = UnitVector3(Vector3::new(0.0, 1.0, 0.0));
    pub const K: UnitVector3 = UnitVector3(Vector3::new(0.0, 0.0, 1.0));

    /// Accepts vectors whose norm is within [`RENORMALIZE_TOL`] of one and
    /// renormalizes them; anything else is rejected.
    pub fn new(v: Vector3) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::domain("axis has non-finite components"));
        }
        let n = v.norm();
        if (n - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::domain(format!("axis is not a unit vector (norm {n})")));
        }
        Ok(UnitVector3(v.scale(1.0 / n)))
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalize(v: Vector3) -> Result<Self> {
        v.normalized()
            .map(UnitVector3)
            .ok_or_else(|| Error::domain("cannot normalize a zero vector"))
    }

    pub fn from_array(a: [f64; 3]) -> Result<Self> {
        Self::new(Vector3::from_array(a))
    }

    pub fn into_inner(self) -> Vector3 {
        self.0
    }

    /// An orthonormal pair `(e1, e2)` with `e1 × e2 = self`. `e1` is built
    /// from the coordinate axis least aligned with `self` (lowest index wins
    /// ties), so for `k̂` the pair is `(î, ĵ)`.
    pub fn orthonormal_pair(self) -> (UnitVector3, UnitVector3) {
        let c = self.0;
        let a = [c.x.abs(), c.y.abs(), c.z.abs()];
        let mut idx = 0;
        for (i, v) in a.iter().enumerate() {
            if *v < a[idx] {
                idx = i;
            }
        }
        let mut basis = [0.0; 3];
        basis[idx] = 1.0;
        let b = Vector3::from_array(basis);
        let e1 = (b - c.scale(c.dot(b))).normalized().expect("non-parallel basis vector");
        let e2 = c.cross(e1);
        (UnitVector3(e1), UnitVector3(e2))
    }
}

impl Deref for UnitVector3 {
    type Target = Vector3;
    fn deref(&self) -> &Vector3 {
        &self.0
    }
}

impl Neg for UnitVector3 {
    type Output = UnitVector3;
    fn neg(self) -> UnitVector3 {
        UnitVector3(-self.0)
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(u: UnitVector3) -> [f64; 3] {
        u.0.to_array()
    }
}

/// An element `w + x i + y j + z k` of the quaternion algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_scalar_vector(s: f64, v: Vector3) -> Self {
        Quaternion::new(s, v.x, v.y, v.z)
    }

    pub fn pure(v: Vector3) -> Self {
        Quaternion::from_scalar_vector(0.0, v)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn scalar(self) -> f64 {
        self.w
    }

    pub fn vector(self) -> Vector3 {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.inner(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn inv(self) -> Result<Quaternion> {
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(Error::domain("zero quaternion has no inverse"));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// The Euclidean inner product of R⁴, equal to `scal(a b*)`.
    pub fn inner(self, o: Quaternion) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Euclidean distance in R⁴.
    pub fn distance(self, o: Quaternion) -> f64 {
        (self - o).norm()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// `ab − ⟨a,b⟩ + a b + b a + a × b` in scalar–vector form.
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a, av) = (self.w, self.vector());
        let (b, bv) = (o.w, o.vector());
        Quaternion::from_scalar_vector(a * b - av.dot(bv), bv * a + av * b + av.cross(bv))
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// A point of S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 4]")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion(Quaternion::ONE);

    /// Accepts quaternions whose norm is within [`RENORMALIZE_TOL`] of one.
    pub fn new(q: Quaternion) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::domain("quaternion has non-finite components"));
        }
        let n = q.norm();
        if (n - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::domain(format!("quaternion is not a unit quaternion (norm {n})")));
        }
        Ok(UnitQuaternion(q.scale(1.0 / n)))
    }

    /// Projects any nonzero finite quaternion onto S³.
    pub fn normalize(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !(n > f64::MIN_POSITIVE && n.is_finite()) {
            return Err(Error::domain("cannot normalize a zero quaternion"));
        }
        Ok(UnitQuaternion(q.scale(1.0 / n)))
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(Quaternion::from_array(a))
    }

    pub(crate) fn new_unchecked(q: Quaternion) -> Self {
        UnitQuaternion(q)
    }

    /// `cos s + sin s · c`, the point at arc length `s` along the great
    /// circle through 1 in direction `c`.
    pub fn exp(c: UnitVector3, s: f64) -> Self {
        let (sin, cos) = s.sin_cos();
        UnitQuaternion(Quaternion::from_scalar_vector(cos, c.scale(sin)))
    }

    /// `cos ½θ + sin ½θ · n`: the rotation through `θ` about `n`.
    pub fn from_axis_angle(n: UnitVector3, theta: f64) -> Self {
        Self::exp(n, 0.5 * theta)
    }

    /// Axis and rotation angle with `θ ∈ [0, π]`.
    ///
    /// A quaternion with negative scalar part is reported through its
    /// antipode `−u`, which is the same rotation. When `sin ½θ` falls below
    /// [`DEGENERATE_SIN_HALF`] the axis is `î` and the result is flagged.
    pub fn to_axis_angle(self) -> AxisAngle {
        let q = if self.0.w < 0.0 { -self.0 } else { self.0 };
        AxisAngle::from_scalar_vector(q.w, q.vector())
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    pub fn scalar(self) -> f64 {
        self.0.w
    }

    pub fn vector(self) -> Vector3 {
        self.0.vector()
    }

    /// The conjugate, which is also the inverse on S³.
    pub fn conj(self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn inner(self, o: UnitQuaternion) -> f64 {
        self.0.inner(o.0)
    }

    /// Geodesic distance on S³, `arccos ⟨self, o⟩`.
    pub fn angle_to(self, o: UnitQuaternion) -> f64 {
        // atan2 form keeps full precision near 0 and π.
        let d = (self.0 - o.0).norm();
        let s = (self.0 + o.0).norm();
        2.0 * d.atan2(s)
    }

    /// The vector part of `u v u*`.
    pub fn rotate(self, v: Vector3) -> Vector3 {
        (self.0 * Quaternion::pure(v) * self.0.conj()).vector()
    }
}

impl Deref for UnitQuaternion {
    type Target = Quaternion;
    fn deref(&self) -> &Quaternion {
        &self.0
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * o.0)
    }
}

impl Mul<Quaternion> for UnitQuaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        self.0 * o
    }
}

impl Mul<UnitQuaternion> for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: UnitQuaternion) -> Quaternion {
        self * o.0
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

impl From<UnitQuaternion> for [f64; 4] {
    fn from(u: UnitQuaternion) -> [f64; 4] {
        u.to_array()
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

/// A rotation axis and angle. `degenerate` marks near-identity rotations
/// whose axis is conventional (`î`) rather than computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisAngle {
    pub axis: UnitVector3,
    pub angle: f64,
    pub degenerate: bool,
}

impl AxisAngle {
    /// From `cos ½θ` and `sin ½θ n` with `cos ½θ ≥ 0`.
    fn from_scalar_vector(c: f64, v: Vector3) -> AxisAngle {
        let s = v.norm();
        let angle = 2.0 * s.atan2(c);
        if s <= DEGENERATE_SIN_HALF {
            AxisAngle { axis: UnitVector3::I, angle, degenerate: true }
        } else {
            AxisAngle { axis: UnitVector3(v.scale(1.0 / s)), angle, degenerate: false }
        }
    }

    /// The Euler vector `θ n` (zero for degenerate rotations).
    pub fn euler_vector(self) -> Vector3 {
        if self.degenerate {
            Vector3::ZERO
        } else {
            self.axis.scale(self.angle)
        }
    }
}

/// Angle and axis of the rotation `(n1, θ1)` applied after `(n2, θ2)`, from
/// the closed-form composition rules rather than a quaternion product:
///
/// `cos ½θ = cos ½θ1 cos ½θ2 − sin ½θ1 sin ½θ2 ⟨n1, n2⟩`
///
/// `sin ½θ n = sin ½θ1 cos ½θ2 n1 + cos ½θ1 sin ½θ2 n2 + sin ½θ1 sin ½θ2 n1 × n2`
///
/// The result follows the [`UnitQuaternion::to_axis_angle`] conventions.
pub fn compose_axis_angle(n1: UnitVector3, theta1: f64, n2: UnitVector3, theta2: f64) -> AxisAngle {
    let (s1, c1) = (0.5 * theta1).sin_cos();
    let (s2, c2) = (0.5 * theta2).sin_cos();
    let c = c1 * c2 - s1 * s2 * n1.dot(*n2);
    let v = n1.scale(s1 * c2) + n2.scale(c1 * s2) + n1.cross(*n2).scale(s1 * s2);
    if c < 0.0 {
        AxisAngle::from_scalar_vector(-c, -v)
    } else {
        AxisAngle::from_scalar_vector(c, v)
    }
}
