//! The set families on S³: spherical caps, great-circle arcs, axis caps,
//! singletons and the whole sphere.
//!
//! * `U(U₀, t) = { U : ⟨U, U₀⟩ ≥ cos t }`, `t ∈ [0, π]`
//! * `C(c, φ, δ) = { exp(s c) : |s − φ| ≤ δ }`, `δ ∈ [0, π]`
//! * `S(c, φ, ξ) = { cos φ + sin φ m : ⟨m, c⟩ ≥ cos ξ }`, `φ ∈ (0, π)`, `ξ ∈ [0, π]`
//!
//! Every predicate takes an explicit tolerance; [`DEFAULT_TOL`] is the
//! library-wide default.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cloud::{Frame, PointCloud};
use crate::error::{Error, Result};
use crate::plane::TangentPlane4;
use crate::quat::{Quaternion, UnitQuaternion, UnitVector3};
use crate::rng;

pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack allowed when validating angular parameters at their range ends.
const PARAM_SLACK: f64 = 1e-12;

fn check_range(name: &str, v: f64, lo: f64, hi: f64) -> Result<f64> {
    if !v.is_finite() || v < lo - PARAM_SLACK || v > hi + PARAM_SLACK {
        return Err(Error::domain(format!("{name} = {v} outside [{lo}, {hi}]")));
    }
    Ok(v.clamp(lo, hi))
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// `U(U₀, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "Descriptor")]
pub struct SphericalCap {
    pub center: UnitQuaternion,
    pub t: f64,
}

impl SphericalCap {
    pub fn new(center: UnitQuaternion, t: f64) -> Result<Self> {
        Ok(SphericalCap { center, t: check_range("cap radius t", t, 0.0, PI)? })
    }

    /// Chordal radius `ρ = 2 sin ½t` of the equivalent 4-ball.
    pub fn rho(&self) -> f64 {
        2.0 * (0.5 * self.t).sin()
    }

    pub fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        u.inner(self.center) >= self.t.cos() - tol
    }

    /// Signed amount by which `u` violates the cap inequality (≤ 0 inside).
    pub fn excess(&self, u: UnitQuaternion) -> f64 {
        self.t.cos() - u.inner(self.center)
    }

    pub fn is_full(&self) -> bool {
        self.t >= PI
    }

    /// Whether `other ⊆ self`, via the triangle inequality on geodesic
    /// distance (which is exact for caps).
    pub fn includes(&self, other: &SphericalCap, tol: f64) -> bool {
        self.is_full() || self.center.angle_to(other.center) + other.t <= self.t + tol
    }

    /// The cap with center `q·U₀` (left) or `U₀·q` (right).
    pub fn translated(&self, q: UnitQuaternion, side: Side) -> SphericalCap {
        let center = match side {
            Side::Left => q * self.center,
            Side::Right => self.center * q,
        };
        SphericalCap { center, t: self.t }
    }
}

/// Which side a fixed factor multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `C(c, φ, δ)`. The axis is stored with its first nonzero component
/// positive; `C(−c, φ, δ) = C(c, −φ, δ)` absorbs the sign into `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub axis: UnitVector3,
    pub phi: f64,
    pub delta: f64,
}

impl Arc {
    pub fn new(axis: UnitVector3, phi: f64, delta: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::domain("arc phi must be finite"));
        }
        let delta = check_range("arc delta", delta, 0.0, PI)?;
        let first = axis.to_array().into_iter().find(|c| *c != 0.0).unwrap_or(1.0);
        Ok(if first < 0.0 {
            Arc { axis: -axis, phi: -phi, delta }
        } else {
            Arc { axis, phi, delta }
        })
    }

    pub fn point(&self, s: f64) -> UnitQuaternion {
        UnitQuaternion::exp(self.axis, s)
    }

    /// `exp(φ c)`, the midpoint of the arc.
    pub fn center(&self) -> UnitQuaternion {
        self.point(self.phi)
    }

    pub fn is_full_circle(&self) -> bool {
        self.delta >= PI
    }

    /// Arc parameter of `u` on the circle through 1 along `c`, in `(−π, π]`.
    pub fn parameter_of(&self, u: UnitQuaternion) -> f64 {
        u.vector().dot(*self.axis).atan2(u.scalar())
    }

    /// Distance of `u` from the plane `span{1, c}`.
    pub fn off_circle(&self, u: UnitQuaternion) -> f64 {
        let v = u.vector();
        (v - self.axis.scale(v.dot(*self.axis))).norm()
    }

    pub fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        if self.off_circle(u) > tol {
            return false;
        }
        self.is_full_circle() || wrap_angle(self.parameter_of(u) - self.phi).abs() <= self.delta + tol
    }
}

/// `S(c, φ, ξ)`: rotations through the fixed angle `2φ` about axes within
/// angle `ξ` of `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisCap {
    pub axis: UnitVector3,
    pub phi: f64,
    pub xi: f64,
}

impl AxisCap {
    pub fn new(axis: UnitVector3, phi: f64, xi: f64) -> Result<Self> {
        if !(phi.is_finite() && phi > 0.0 && phi < PI) {
            return Err(Error::domain(format!("axis cap phi = {phi} outside (0, π)")));
        }
        Ok(AxisCap { axis, phi, xi: check_range("axis cap xi", xi, 0.0, PI)? })
    }

    /// `cos φ + sin φ m`.
    pub fn point(&self, m: UnitVector3) -> UnitQuaternion {
        UnitQuaternion::exp(m, self.phi)
    }

    pub fn center(&self) -> UnitQuaternion {
        self.point(self.axis)
    }

    /// Angular radius `t(φ, ξ) = arccos(cos²φ + sin²φ cos ξ)` of the
    /// smallest cap about `exp(φ c)` containing the set.
    pub fn hull_radius(&self) -> f64 {
        axis_cap_hull_radius(self.phi, self.xi)
    }

    /// The axis `m` of a point, or `None` when `u` has no vector part.
    pub fn axis_of(&self, u: UnitQuaternion) -> Option<UnitVector3> {
        UnitVector3::normalize(u.vector()).ok()
    }

    pub fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        if (u.scalar() - self.phi.cos()).abs() > tol {
            return false;
        }
        match self.axis_of(u) {
            Some(m) => m.dot(*self.axis) >= self.xi.cos() - tol,
            None => false,
        }
    }

    /// Point of the cap at polar angle `v` from `c` and azimuth `u` in the
    /// frame of [`UnitVector3::orthonormal_pair`].
    pub fn point_at(&self, azimuth: f64, polar: f64) -> UnitQuaternion {
        self.point(axis_at(self.axis, azimuth, polar))
    }
}

pub fn axis_cap_hull_radius(phi: f64, xi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    (c * c + s * s * xi.cos()).clamp(-1.0, 1.0).acos()
}

/// The unit vector at polar angle `polar` from `c` and azimuth `azimuth`
/// measured in the frame `(e1, e2)` of `c`.
pub fn axis_at(c: UnitVector3, azimuth: f64, polar: f64) -> UnitVector3 {
    let (e1, e2) = c.orthonormal_pair();
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    let v = c.scale(cp) + e1.scale(sp * ca) + e2.scale(sp * sa);
    UnitVector3::normalize(v).expect("unit combination")
}

/// Interior or boundary sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    Interior,
    Boundary,
}

/// Tagged union of the supported operand families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Descriptor", into = "Descriptor")]
pub enum RotationSet {
    Singleton(UnitQuaternion),
    Cap(SphericalCap),
    Arc(Arc),
    AxisCap(AxisCap),
    Full,
}

/// JSON form of a [`RotationSet`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Descriptor {
    Cap { center: [f64; 4], t: f64 },
    Arc { axis: [f64; 3], phi: f64, delta: f64 },
    AxisCap { axis: [f64; 3], phi: f64, xi: f64 },
    Singleton { q: [f64; 4] },
    Full,
}

impl TryFrom<Descriptor> for RotationSet {
    type Error = Error;
    fn try_from(d: Descriptor) -> Result<RotationSet> {
        Ok(match d {
            Descriptor::Cap { center, t } => {
                RotationSet::Cap(SphericalCap::new(UnitQuaternion::from_array(center)?, t)?)
            }
            Descriptor::Arc { axis, phi, delta } => {
                RotationSet::Arc(Arc::new(UnitVector3::from_array(axis)?, phi, delta)?)
            }
            Descriptor::AxisCap { axis, phi, xi } => {
                RotationSet::AxisCap(AxisCap::new(UnitVector3::from_array(axis)?, phi, xi)?)
            }
            Descriptor::Singleton { q } => RotationSet::Singleton(UnitQuaternion::from_array(q)?),
            Descriptor::Full => RotationSet::Full,
        })
    }
}

impl From<RotationSet> for Descriptor {
    fn from(s: RotationSet) -> Descriptor {
        match s {
            RotationSet::Singleton(q) => Descriptor::Singleton { q: q.to_array() },
            RotationSet::Cap(c) => Descriptor::Cap { center: c.center.to_array(), t: c.t },
            RotationSet::Arc(a) => Descriptor::Arc { axis: a.axis.into(), phi: a.phi, delta: a.delta },
            RotationSet::AxisCap(a) => Descriptor::AxisCap { axis: a.axis.into(), phi: a.phi, xi: a.xi },
            RotationSet::Full => Descriptor::Full,
        }
    }
}

impl From<SphericalCap> for Descriptor {
    fn from(c: SphericalCap) -> Descriptor {
        RotationSet::Cap(c).into()
    }
}

impl RotationSet {
    pub fn from_json(s: &str) -> Result<RotationSet> {
        let d: Descriptor = serde_json::from_str(s).map_err(|e| Error::usage(format!("bad set descriptor: {e}")))?;
        RotationSet::try_from(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        match self {
            RotationSet::Singleton(q) => u.inner(*q) >= 1.0 - tol,
            RotationSet::Cap(c) => c.contains(u, tol),
            RotationSet::Arc(a) => a.contains(u, tol),
            RotationSet::AxisCap(a) => a.contains(u, tol),
            RotationSet::Full => true,
        }
    }

    /// Boundary test. Caps use the S³ boundary `⟨u, U₀⟩ = cos t`; axis caps
    /// use the boundary inside their 2-sphere (`⟨m, c⟩ = cos ξ`); arcs with
    /// `δ < π` test the two endpoints, and a full great circle has none.
    pub fn on_boundary(&self, u: UnitQuaternion, tol: f64) -> Result<bool> {
        match self {
            RotationSet::Full => Err(Error::domain("S3 has empty boundary")),
            RotationSet::Singleton(_) => Err(Error::domain("boundary of a singleton is not defined")),
            RotationSet::Cap(c) => {
                if c.t <= 0.0 || c.is_full() {
                    return Err(Error::domain("degenerate cap (t = 0 or t = π) has no 2-sphere boundary"));
                }
                Ok((u.inner(c.center) - c.t.cos()).abs() <= tol)
            }
            RotationSet::Arc(a) => {
                if a.delta <= 0.0 {
                    return Err(Error::domain("degenerate arc (δ = 0) is a singleton"));
                }
                if a.is_full_circle() || a.off_circle(u) > tol {
                    return Ok(false);
                }
                let d = wrap_angle(a.parameter_of(u) - a.phi).abs();
                Ok((d - a.delta).abs() <= tol)
            }
            RotationSet::AxisCap(a) => {
                if a.xi <= 0.0 || a.xi >= PI {
                    return Err(Error::domain("axis cap with ξ = 0 or ξ = π has empty boundary circle"));
                }
                if (u.scalar() - a.phi.cos()).abs() > tol {
                    return Ok(false);
                }
                Ok(a.axis_of(u).is_some_and(|m| (m.dot(*a.axis) - a.xi.cos()).abs() <= tol))
            }
        }
    }

    /// Tangent 2-plane of the boundary surface at `u`.
    ///
    /// For a cap this is the orthogonal complement of `span{u, U₀}`. An
    /// axis cap is itself a 2-surface lying in the boundary of S³-topology,
    /// so its tangent plane at any of its points is `Π_m = {v : v ⊥ 1, m}`.
    pub fn tangent_plane(&self, u: UnitQuaternion) -> Result<TangentPlane4> {
        match self {
            RotationSet::Cap(c) => {
                if !self.on_boundary(u, DEFAULT_TOL)? {
                    return Err(Error::domain("point is not on the cap boundary"));
                }
                TangentPlane4::complement_of(u, c.center.quaternion())
            }
            RotationSet::AxisCap(a) => {
                if a.xi <= 0.0 {
                    return Err(Error::domain("degenerate axis cap (ξ = 0) is a singleton"));
                }
                if !a.contains(u, DEFAULT_TOL) {
                    return Err(Error::domain("point is not on the axis cap"));
                }
                let m = a.axis_of(u).ok_or_else(|| Error::domain("point has no rotation axis"))?;
                let (e1, e2) = m.orthonormal_pair();
                TangentPlane4::from_spanning(u, Quaternion::pure(*e1), Quaternion::pure(*e2))
            }
            _ => Err(Error::domain("tangent planes are defined for caps and axis caps only")),
        }
    }

    /// Smallest spherical cap containing the set.
    pub fn hull(&self) -> SphericalCap {
        match *self {
            RotationSet::Singleton(q) => SphericalCap { center: q, t: 0.0 },
            RotationSet::Cap(c) => c,
            RotationSet::Arc(a) => SphericalCap { center: a.center(), t: a.delta },
            RotationSet::AxisCap(a) => SphericalCap { center: a.center(), t: a.hull_radius() },
            RotationSet::Full => SphericalCap { center: UnitQuaternion::IDENTITY, t: PI },
        }
    }

    /// Names of the per-point parameter tags produced by [`Self::sample`].
    pub fn tag_names(&self) -> &'static [&'static str] {
        match self {
            RotationSet::Cap(_) => &["alpha", "u", "v"],
            RotationSet::Arc(_) => &["s"],
            RotationSet::AxisCap(_) => &["u", "v"],
            RotationSet::Singleton(_) | RotationSet::Full => &[],
        }
    }

    /// One random point and its tags.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R, mode: SampleMode, tags: &mut Vec<f64>) -> UnitQuaternion {
        tags.clear();
        match *self {
            RotationSet::Singleton(q) => q,
            RotationSet::Full => rng::unit_quaternion(rng),
            RotationSet::Cap(c) => {
                let alpha = match mode {
                    SampleMode::Boundary => c.t,
                    SampleMode::Interior => sample_cap_angle(rng, c.t),
                };
                let m = rng::unit_vector(rng);
                tags.extend([alpha, m.y.atan2(m.x), m.z.clamp(-1.0, 1.0).acos()]);
                c.center * UnitQuaternion::exp(m, alpha)
            }
            RotationSet::Arc(a) => {
                let s = match mode {
                    SampleMode::Interior => rng::uniform(rng, a.phi - a.delta, a.phi + a.delta),
                    SampleMode::Boundary if rng.gen::<bool>() => a.phi + a.delta,
                    SampleMode::Boundary => a.phi - a.delta,
                };
                tags.push(s);
                a.point(s)
            }
            RotationSet::AxisCap(a) => {
                // Archimedes: the height ⟨m, c⟩ of a uniform point on S² is uniform.
                let z = match mode {
                    SampleMode::Interior => rng::uniform(rng, a.xi.cos(), 1.0),
                    SampleMode::Boundary => a.xi.cos(),
                };
                let polar = z.clamp(-1.0, 1.0).acos();
                let azimuth = rng::uniform(rng, -PI, PI);
                tags.extend([azimuth, polar]);
                a.point_at(azimuth, polar)
            }
        }
    }

    fn check_sample_mode(&self, mode: SampleMode) -> Result<()> {
        if mode == SampleMode::Boundary {
            match self {
                RotationSet::Full | RotationSet::Singleton(_) => {
                    return Err(Error::domain("set has no boundary to sample"));
                }
                RotationSet::Arc(a) if a.is_full_circle() || a.delta <= 0.0 => {
                    return Err(Error::domain("arc has no endpoints to sample"));
                }
                RotationSet::Cap(c) if c.t <= 0.0 || c.is_full() => {
                    return Err(Error::domain("degenerate cap has no boundary to sample"));
                }
                RotationSet::AxisCap(a) if a.xi <= 0.0 || a.xi >= PI => {
                    return Err(Error::domain("axis cap has an empty boundary circle"));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `n` points of the set (or of its boundary), deterministic in `seed`.
    /// Cap interiors are uniform for the surface measure of S³.
    pub fn sample(&self, n: usize, seed: u64, mode: SampleMode) -> Result<PointCloud> {
        if n == 0 {
            return Err(Error::usage("sample count must be at least 1"));
        }
        self.check_sample_mode(mode)?;
        let names: Vec<String> = self.tag_names().iter().map(|s| s.to_string()).collect();
        let k = names.len();
        let rows: Vec<([f64; 4], Vec<f64>)> = rng::batched(n, seed, |rng, len| {
            let mut tags = Vec::with_capacity(k);
            (0..len)
                .map(|_| {
                    let u = self.sample_one(rng, mode, &mut tags);
                    (u.to_array(), tags.clone())
                })
                .collect()
        });
        let mut cloud = PointCloud::with_capacity(Frame::S3, names, n);
        for (p, t) in &rows {
            cloud.push(p, t);
        }
        Ok(cloud)
    }
}

/// Draws `α ∈ [0, t]` with density proportional to `sin² α`, the radial
/// law of the surface measure of S³ around a point, by rejection from the
/// uniform envelope `sin² min(t, π/2)`.
pub fn sample_cap_angle<R: Rng + ?Sized>(rng: &mut R, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let envelope = t.min(FRAC_PI_2).sin().powi(2);
    loop {
        let a = rng::uniform(rng, 0.0, t);
        if rng.gen::<f64>() * envelope <= a.sin().powi(2) {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn e(c: UnitVector3, s: f64) -> UnitQuaternion {
        UnitQuaternion::exp(c, s)
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.5), 0.5);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-4.0) - (TAU - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn cap_membership_and_inclusion() {
        let c = SphericalCap::new(UnitQuaternion::IDENTITY, FRAC_PI_4).unwrap();
        assert!(c.contains(e(UnitVector3::I, FRAC_PI_4), 1e-12));
        assert!(!c.contains(e(UnitVector3::I, FRAC_PI_4 + 1e-6), 1e-9));
        assert!((c.rho() - 2.0 * FRAC_PI_8.sin()).abs() < 1e-15);
        let inner = SphericalCap::new(e(UnitVector3::J, 0.3), 0.4).unwrap();
        assert!(c.includes(&inner, 1e-12));
        assert!(!inner.includes(&c, 1e-12));
        assert!(matches!(SphericalCap::new(UnitQuaternion::IDENTITY, 4.0), Err(Error::Domain(_))));
    }

    #[test]
    fn arc_normalizes_axis_sign() {
        let a = Arc::new(-UnitVector3::K, 0.3, 0.2).unwrap();
        assert_eq!(a.axis, UnitVector3::K);
        assert_eq!(a.phi, -0.3);
        assert!(a.contains(e(-UnitVector3::K, 0.4), 1e-12));
        assert!(!a.contains(e(UnitVector3::K, 0.4), 1e-9));
        assert!(!a.contains(e(UnitVector3::J, -0.3), 1e-9));
    }

    #[test]
    fn arc_boundary_is_its_endpoints() {
        let a = RotationSet::Arc(Arc::new(UnitVector3::K, 0.5, 0.25).unwrap());
        assert!(a.on_boundary(e(UnitVector3::K, 0.75), 1e-12).unwrap());
        assert!(a.on_boundary(e(UnitVector3::K, 0.25), 1e-12).unwrap());
        assert!(!a.on_boundary(e(UnitVector3::K, 0.5), 1e-12).unwrap());
        let full = RotationSet::Arc(Arc::new(UnitVector3::K, 0.0, PI).unwrap());
        assert!(!full.on_boundary(e(UnitVector3::K, PI), 1e-12).unwrap());
    }

    #[test]
    fn axis_cap_membership() {
        let s = AxisCap::new(UnitVector3::K, 0.6, FRAC_PI_4).unwrap();
        assert!(s.contains(s.center(), 1e-12));
        let edge = s.point_at(1.0, FRAC_PI_4);
        assert!(s.contains(edge, 1e-12));
        assert!(RotationSet::AxisCap(s).on_boundary(edge, 1e-9).unwrap());
        assert!(!s.contains(s.point_at(1.0, FRAC_PI_4 + 0.01), 1e-9));
        // Right angle but wrong rotation angle.
        assert!(!s.contains(e(UnitVector3::K, 0.7), 1e-9));
    }

    #[test]
    fn hulls_contain_their_sets() {
        let s = AxisCap::new(UnitVector3::J, 1.1, 0.5).unwrap();
        let h = RotationSet::AxisCap(s).hull();
        assert!((h.center.angle_to(s.point_at(0.3, 0.5)) - h.t).abs() < 1e-12);
        let a = Arc::new(UnitVector3::I, 0.2, 0.7).unwrap();
        let ha = RotationSet::Arc(a).hull();
        assert!((ha.center.angle_to(a.point(0.9)) - 0.7).abs() < 1e-12);
        assert!(RotationSet::Full.hull().is_full());
    }

    #[test]
    fn degenerate_boundaries_are_domain_errors() {
        let one = UnitQuaternion::IDENTITY;
        assert!(matches!(RotationSet::Full.on_boundary(one, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(RotationSet::Singleton(one).on_boundary(one, 1e-9), Err(Error::Domain(_))));
        let point_cap = RotationSet::Cap(SphericalCap::new(one, 0.0).unwrap());
        assert!(matches!(point_cap.on_boundary(one, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(point_cap.sample(4, 0, SampleMode::Boundary), Err(Error::Domain(_))));
    }

    #[test]
    fn tangent_planes() {
        let c = RotationSet::Cap(SphericalCap::new(e(UnitVector3::I, 0.5), 0.5).unwrap());
        let p = c.tangent_plane(UnitQuaternion::IDENTITY).unwrap();
        // At 1 with center on the î circle, the tangent plane is span{ĵ, k̂}.
        let want = TangentPlane4::from_spanning(UnitQuaternion::IDENTITY, Quaternion::J, Quaternion::K).unwrap();
        assert!(p.same_plane(&want, 1e-12));
        assert!(c.tangent_plane(e(UnitVector3::I, 0.2)).is_err());
        let arc = RotationSet::Arc(Arc::new(UnitVector3::I, 0.0, 0.5).unwrap());
        assert!(arc.tangent_plane(UnitQuaternion::IDENTITY).is_err());
    }

    #[test]
    fn descriptor_roundtrip() {
        let sets = [
            RotationSet::Cap(SphericalCap::new(e(UnitVector3::J, 0.4), 0.3).unwrap()),
            RotationSet::Arc(Arc::new(UnitVector3::K, -0.2, 1.0).unwrap()),
            RotationSet::AxisCap(AxisCap::new(UnitVector3::I, 0.9, 0.1).unwrap()),
            RotationSet::Singleton(e(UnitVector3::K, 2.0)),
            RotationSet::Full,
        ];
        for s in sets {
            // Centers are renormalized on input, so equality holds to an ulp.
            let back = RotationSet::from_json(&s.to_json()).unwrap();
            assert_eq!(std::mem::discriminant(&back), std::mem::discriminant(&s));
            assert!(back.hull().center.distance(*s.hull().center) < 1e-15);
            assert_eq!(back.hull().t, s.hull().t);
        }
        assert!(matches!(RotationSet::from_json(r#"{"type":"blob"}"#), Err(Error::Usage(_))));
        assert!(matches!(
            RotationSet::from_json(r#"{"type":"arc","axis":[0,0,2],"phi":0,"delta":1}"#),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cap_sampling_is_uniform_in_angle() {
        // Radial law ∝ sin² α on [0, π/2]: mean α = π/4 + 1/π.
        let c = RotationSet::Cap(SphericalCap::new(UnitQuaternion::IDENTITY, FRAC_PI_2).unwrap());
        let cloud = c.sample(40_000, 9, SampleMode::Interior).unwrap();
        let mean: f64 = cloud.quaternions().unwrap().iter().map(|u| u.angle_to(UnitQuaternion::IDENTITY)).sum::<f64>()
            / cloud.len() as f64;
        assert!((mean - (FRAC_PI_4 + 1.0 / PI)).abs() < 5e-3, "mean {mean}");
    }
}
