//! Charts from S³ into R³.
//!
//! Two families are provided. The Cayley transform `Φ(q) = (q+1)⁻¹(q−1)`
//! restricts on S³ to stereographic projection from `−1`, sending
//! `cos ½θ + sin ½θ n` to `tan(¼θ) n`; its inverse is
//! `Ψ(q) = (1−q)⁻¹(1+q)`. The Lie-algebra chart sends a rotation to its
//! Euler vector `θ n` through the SO(3) logarithm, which is bounded by `π`
//! and identifies `u` with `−u`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{compose_axis_angle, Quaternion, UnitQuaternion, UnitVector3, Vector3};
use crate::sets::SphericalCap;

/// `θ n`, an element of so(3) in vector form.
pub type EulerVector = Vector3;

/// Distance from a Cayley pole below which the transform is undefined.
pub const POLE_TOL: f64 = 1e-12;
/// Tolerance for accepting a matrix as skew-symmetric.
pub const SKEW_TOL: f64 = 1e-9;
/// Tolerance for accepting a matrix as a rotation.
pub const ROTATION_TOL: f64 = 1e-8;

/// `Φ(q) = (q + 1)⁻¹ (q − 1)`.
pub fn cayley_phi(q: Quaternion) -> Result<Quaternion> {
    let d = q + Quaternion::ONE;
    if d.norm() <= POLE_TOL {
        return Err(Error::domain("pole of Cayley transform"));
    }
    Ok(d.inv()? * (q - Quaternion::ONE))
}

/// `Ψ(q) = (1 − q)⁻¹ (1 + q)`, the inverse of [`cayley_phi`].
pub fn cayley_psi(q: Quaternion) -> Result<Quaternion> {
    let d = Quaternion::ONE - q;
    if d.norm() <= POLE_TOL {
        return Err(Error::domain("pole of Cayley transform"));
    }
    Ok(d.inv()? * (Quaternion::ONE + q))
}

/// `vect(u) / (1 + scal(u))`.
pub fn stereo_project(u: UnitQuaternion) -> Result<Vector3> {
    if u.distance(-Quaternion::ONE) <= POLE_TOL {
        return Err(Error::domain("-1 maps to infinity under stereographic projection"));
    }
    Ok(u.vector().scale(1.0 / (1.0 + u.scalar())))
}

/// Inverse stereographic projection,
/// `p ↦ ((1 − |p|²) + 2p) / (1 + |p|²)`.
pub fn stereo_unproject(p: Vector3) -> UnitQuaternion {
    let n2 = p.dot(p);
    let k = 1.0 / (1.0 + n2);
    UnitQuaternion::normalize(Quaternion::from_scalar_vector((1.0 - n2) * k, p.scale(2.0 * k)))
        .expect("inverse stereographic image is unit")
}

/// `(w, x, y, z) = (cos α, sin α cos β, sin α sin β cos γ, sin α sin β sin γ)`.
///
/// At `α ∈ {0, π}` the angles `β, γ` are free and reported as 0; at
/// `β ∈ {0, π}` the same holds for `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperspherical {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_singular: bool,
    pub beta_singular: bool,
}

const SINGULAR_TOL: f64 = 1e-12;

pub fn hyperspherical(u: UnitQuaternion) -> Hyperspherical {
    let v = u.vector();
    let r3 = v.norm();
    let r2 = v.y.hypot(v.z);
    let alpha = r3.atan2(u.scalar());
    let (beta, gamma) = if r3 <= SINGULAR_TOL {
        (0.0, 0.0)
    } else if r2 <= SINGULAR_TOL {
        (r2.atan2(v.x), 0.0)
    } else {
        let g = v.z.atan2(v.y).rem_euclid(TAU);
        (r2.atan2(v.x), if g >= TAU { 0.0 } else { g })
    };
    Hyperspherical {
        alpha,
        beta,
        gamma,
        alpha_singular: r3 <= SINGULAR_TOL,
        beta_singular: r2 <= SINGULAR_TOL,
    }
}

pub fn from_hyperspherical(alpha: f64, beta: f64, gamma: f64) -> UnitQuaternion {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    UnitQuaternion::normalize(Quaternion::new(ca, sa * cb, sa * sb * cg, sa * sb * sg))
        .expect("hyperspherical point is unit")
}

/// A skew-symmetric 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewMatrix3(Matrix3<f64>);

impl SkewMatrix3 {
    /// Accepts `a` if `‖a + aᵀ‖_max ≤ SKEW_TOL` and stores its exact
    /// skew part.
    pub fn new(a: Matrix3<f64>) -> Result<Self> {
        let sym = a + a.transpose();
        if sym.amax() > SKEW_TOL || !a.iter().all(|x| x.is_finite()) {
            return Err(Error::domain("matrix is not skew-symmetric"));
        }
        Ok(SkewMatrix3((a - a.transpose()) * 0.5))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// `[A, B] = AB − BA`, again skew-symmetric.
    pub fn commutator(&self, other: &SkewMatrix3) -> SkewMatrix3 {
        let c = self.0 * other.0 - other.0 * self.0;
        SkewMatrix3((c - c.transpose()) * 0.5)
    }
}

/// A proper rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotMatrix3(Matrix3<f64>);

impl RotMatrix3 {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let orth = (m.transpose() * m - Matrix3::identity()).amax();
        if !(orth <= ROTATION_TOL && (m.determinant() - 1.0).abs() <= ROTATION_TOL) {
            return Err(Error::domain("matrix is not a rotation"));
        }
        Ok(RotMatrix3(m))
    }

    pub fn identity() -> Self {
        RotMatrix3(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: Vector3) -> Vector3 {
        let r = self.0 * nalgebra::Vector3::new(v.x, v.y, v.z);
        Vector3::new(r.x, r.y, r.z)
    }

    /// The matrix of `v ↦ u v u*`, built from the axis–angle form of `u`.
    pub fn from_quaternion(u: UnitQuaternion) -> Self {
        exp_so3(u.to_axis_angle().euler_vector())
    }

    /// The unit quaternion with non-negative scalar part inducing `self`.
    pub fn to_quaternion(&self) -> UnitQuaternion {
        let v = log_so3(self);
        let theta = v.norm();
        match UnitVector3::normalize(v) {
            Ok(n) => UnitQuaternion::from_axis_angle(n, theta),
            Err(_) => UnitQuaternion::IDENTITY,
        }
    }
}

impl std::ops::Mul for RotMatrix3 {
    type Output = RotMatrix3;
    fn mul(self, o: RotMatrix3) -> RotMatrix3 {
        RotMatrix3(self.0 * o.0)
    }
}

/// `hat(v) w = v × w`.
pub fn hat(v: Vector3) -> SkewMatrix3 {
    SkewMatrix3(Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0))
}

pub fn vee(a: &SkewMatrix3) -> Vector3 {
    let m = &a.0;
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// Rodrigues: `I + sin θ N + (1 − cos θ) N²` with `θ = ‖v‖`, `N = hat(v/θ)`.
/// Below `θ = 1e-8` the coefficients use their Taylor expansions.
pub fn exp_so3(v: EulerVector) -> RotMatrix3 {
    let theta = v.norm();
    let a = hat(v).0;
    let (c1, c2) = if theta < 1e-8 {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    };
    RotMatrix3(Matrix3::identity() + a * c1 + a * a * c2)
}

/// Logarithm with `θ ∈ [0, π]` valid on all of SO(3).
///
/// The angle is `atan2(‖vee A‖, (tr M − 1)/2)` with `A = ½(M − Mᵀ)`, which
/// keeps precision near 0. Away from `π` the axis is `vee A` normalized.
/// Near `π`, where `vee A` vanishes, the axis comes from the symmetric
/// part: `n nᵀ = (S − cos θ I)/(1 − cos θ)`, read off its largest diagonal
/// column, with the sign taken from `vee A`.
pub fn log_so3(m: &RotMatrix3) -> EulerVector {
    let m = &m.0;
    let c = (0.5 * (m.trace() - 1.0)).clamp(-1.0, 1.0);
    let w = vee(&SkewMatrix3((m - m.transpose()) * 0.5));
    let s = w.norm();
    let theta = s.atan2(c);
    if theta < PI - 1e-4 {
        if s == 0.0 {
            return Vector3::ZERO;
        }
        return w.scale(theta / s);
    }
    let sym = (m + m.transpose()) * 0.5;
    let nn = (sym - Matrix3::identity() * c) / (1.0 - c);
    let j = (0..3).max_by(|a, b| nn[(*a, *a)].total_cmp(&nn[(*b, *b)])).expect("three columns");
    let col = nn.column(j) / nn[(j, j)].max(0.0).sqrt();
    let mut n = Vector3::new(col[0], col[1], col[2]);
    n = n.scale(1.0 / n.norm());
    if n.dot(w) < 0.0 {
        n = -n;
    }
    n.scale(theta)
}

/// The closed-form logarithm `arcsin(‖vee A‖)/‖vee A‖ · vee A` with
/// `A = ½(M − Mᵀ)`. It cannot tell `θ` from `π − θ` and is correct only
/// for `θ ≤ π/2`.
pub fn log_so3_arcsin(m: &RotMatrix3) -> EulerVector {
    let m = &m.0;
    let w = vee(&SkewMatrix3((m - m.transpose()) * 0.5));
    let s = w.norm();
    if s == 0.0 {
        return Vector3::ZERO;
    }
    w.scale(s.min(1.0).asin() / s)
}

fn split_euler(v: EulerVector) -> (UnitVector3, f64) {
    let theta = v.norm();
    match UnitVector3::normalize(v) {
        Ok(n) if theta > 0.0 => (n, theta),
        _ => (UnitVector3::I, 0.0),
    }
}

/// `log(exp v₁ · exp v₂)` from the closed-form axis–angle composition.
/// A composite below the degeneracy threshold returns the zero vector.
pub fn bch(v1: EulerVector, v2: EulerVector) -> EulerVector {
    let (n1, t1) = split_euler(v1);
    let (n2, t2) = split_euler(v2);
    compose_axis_angle(n1, t1, n2, t2).euler_vector()
}

/// The Euler vector of a unit quaternion via its axis–angle form
/// (so `u` and `−u` agree, and `±1` map to 0).
pub fn euler_vector(u: UnitQuaternion) -> EulerVector {
    u.to_axis_angle().euler_vector()
}

/// Image of a spherical cap under `Φ`, a closed region of R³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChartImage {
    /// `{ p : |p − center| ≤ radius }`; `−1` lies outside the cap.
    Ball { center: Vector3, radius: f64 },
    /// `{ p : ⟨normal, p⟩ ≥ offset }`; `−1` lies on the cap boundary.
    HalfSpace { normal: Vector3, offset: f64 },
    /// `{ p : |p − center| ≥ radius }`; `−1` is an interior point.
    BallComplement { center: Vector3, radius: f64 },
    /// A cap of radius 0 away from `−1`.
    Point { p: Vector3 },
    /// The cap `{−1}`, whose image is the point at infinity only.
    PointAtInfinity,
    /// The cap of radius `π`.
    AllSpace,
}

impl ChartImage {
    pub fn contains(&self, p: Vector3, tol: f64) -> bool {
        match *self {
            ChartImage::Ball { center, radius } => (p - center).norm() <= radius + tol,
            ChartImage::BallComplement { center, radius } => (p - center).norm() >= radius - tol,
            ChartImage::HalfSpace { normal, offset } => normal.dot(p) >= offset - tol,
            ChartImage::Point { p: q } => (p - q).norm() <= tol,
            ChartImage::PointAtInfinity => false,
            ChartImage::AllSpace => true,
        }
    }

    /// Signed distance to the bounding sphere or plane (0 on it).
    pub fn boundary_residual(&self, p: Vector3) -> Option<f64> {
        match *self {
            ChartImage::Ball { center, radius } | ChartImage::BallComplement { center, radius } => {
                Some((p - center).norm() - radius)
            }
            ChartImage::HalfSpace { normal, offset } => Some(normal.dot(p) - offset),
            _ => None,
        }
    }
}

/// Tolerance for classifying `−1` as a boundary point of the cap.
const CLASSIFY_TOL: f64 = 1e-12;

fn tetrahedron() -> [Vector3; 4] {
    let s = 1.0 / 3f64.sqrt();
    [Vector3::new(s, s, s), Vector3::new(s, -s, -s), Vector3::new(-s, s, -s), Vector3::new(-s, -s, s)]
}

fn boundary_point(cap: &SphericalCap, m: Vector3) -> UnitQuaternion {
    cap.center * UnitQuaternion::exp(UnitVector3::normalize(m).expect("unit direction"), cap.t)
}

/// Classifies `Φ(cap)` by comparing `⟨−1, U₀⟩ = −scal(U₀)` with `cos t`,
/// then fits the bounding sphere or plane through projected boundary points.
pub fn cap_image_under_phi(cap: &SphericalCap) -> Result<ChartImage> {
    if cap.is_full() {
        return Ok(ChartImage::AllSpace);
    }
    if cap.t <= 0.0 {
        return Ok(match stereo_project(cap.center) {
            Ok(p) => ChartImage::Point { p },
            Err(_) => ChartImage::PointAtInfinity,
        });
    }
    let gap = -cap.center.scalar() - cap.t.cos();
    if gap.abs() <= CLASSIFY_TOL {
        return fit_half_space(cap);
    }
    let mut pts = [Vector3::ZERO; 4];
    for (p, m) in pts.iter_mut().zip(tetrahedron()) {
        *p = stereo_project(boundary_point(cap, m))?;
    }
    // |p|² = 2⟨p, c⟩ + (r² − |c|²), linear in (c, k).
    let a = Matrix4::from_fn(|r, col| if col < 3 { 2.0 * pts[r].to_array()[col] } else { 1.0 });
    let b = Vector4::from_fn(|r, _| pts[r].dot(pts[r]));
    let x = a.lu().solve(&b).ok_or_else(|| Error::domain("degenerate circumsphere fit"))?;
    let center = Vector3::new(x[0], x[1], x[2]);
    let radius = (x[3] + center.dot(center)).max(0.0).sqrt();
    Ok(if gap < 0.0 {
        ChartImage::Ball { center, radius }
    } else {
        ChartImage::BallComplement { center, radius }
    })
}

fn fit_half_space(cap: &SphericalCap) -> Result<ChartImage> {
    // Six boundary points along ±axes; the boundary passes through −1, so
    // keep the three whose images are farthest from degenerate.
    let dirs = [
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(-1.0, 0.0, 0.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(0.0, -1.0, 0.0),
        Vector3::new(0.0, 0.0, 1.0),
        Vector3::new(0.0, 0.0, -1.0),
    ];
    let pts: Vec<Vector3> = dirs
        .iter()
        .filter_map(|m| {
            let u = boundary_point(cap, *m);
            (u.scalar() > -0.5).then(|| stereo_project(u).ok()).flatten()
        })
        .collect();
    let mut best: Option<(f64, Vector3, Vector3)> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let n = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
                let score = n.norm() / ((pts[j] - pts[i]).norm() * (pts[k] - pts[i]).norm()).max(1e-300);
                if best.is_none_or(|b| score > b.0) {
                    best = Some((score, n, pts[i]));
                }
            }
        }
    }
    let (score, n, p0) = best.ok_or_else(|| Error::domain("not enough boundary points for a plane fit"))?;
    if score < 1e-6 {
        return Err(Error::domain("degenerate plane fit"));
    }
    let mut normal = n.scale(1.0 / n.norm());
    let inside = stereo_project(cap.center)?;
    if normal.dot(inside - p0) < 0.0 {
        normal = -normal;
    }
    Ok(ChartImage::HalfSpace { normal, offset: normal.dot(p0) })
}
