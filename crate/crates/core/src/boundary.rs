//! Interior/boundary classification of points of a Minkowski product.
//!
//! The product map `(p, q) ↦ p q` has directional derivatives `v q` and
//! `p v`, which never vanish together, so a product with one factor in
//! the interior of its set is interior to `U ⊗ V`. For two boundary
//! factors the tangent planes give a necessary test, and an enclosing
//! tangent cap of radius below `π/2` gives a sufficient one.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::plane::TangentPlane4;
use crate::plane::PLANE_TOL;
use crate::quat::{Quaternion, UnitQuaternion};
use crate::rng;
use crate::sets::{RotationSet, SampleMode, Side, SphericalCap, DEFAULT_TOL};

/// Derivative of `(p, q) ↦ p q` in direction `v` of the left factor
/// (`v q`) or of the right factor (`p v`).
pub fn product_differential(p: Quaternion, q: Quaternion, dir: Side, v: Quaternion) -> Quaternion {
    match dir {
        Side::Left => v * q,
        Side::Right => p * v,
    }
}

/// A product is certified interior as soon as either factor is interior.
/// `false` leaves the point unresolved.
pub fn interior_rule(u_interior: bool, v_interior: bool) -> bool {
    u_interior || v_interior
}

/// Whether `u` lies in the S³-interior of `set` with margin `tol`. Arcs and
/// axis caps have empty interior.
pub fn is_interior(set: &RotationSet, u: UnitQuaternion, tol: f64) -> bool {
    match set {
        RotationSet::Full => true,
        RotationSet::Cap(c) => c.is_full() || u.inner(c.center) > c.t.cos() + tol,
        _ => false,
    }
}

/// Checks that `u` is a point of the S³-boundary carrying a tangent plane.
/// Every point of an axis cap qualifies.
fn check_boundary_point(set: &RotationSet, u: UnitQuaternion) -> Result<()> {
    let ok = match set {
        RotationSet::Cap(_) => set.on_boundary(u, DEFAULT_TOL)?,
        RotationSet::AxisCap(a) => a.contains(u, DEFAULT_TOL),
        _ => return Err(Error::domain("boundary tangent planes need a cap or axis cap")),
    };
    if !ok {
        return Err(Error::domain("point is not on the boundary of its set"));
    }
    Ok(())
}

/// Necessary condition for `u v ∈ ∂(U ⊗ V)`: the planes `u* T_u(∂U)` and
/// `T_v(∂V) v*`, both tangent at 1, coincide. `false` rules the point out.
pub fn necessary_condition(a: &RotationSet, u: UnitQuaternion, b: &RotationSet, v: UnitQuaternion) -> Result<bool> {
    Ok(plane_mismatch(a, u, b, v)? <= PLANE_TOL)
}

/// Frobenius distance between the two translated tangent planes.
pub fn plane_mismatch(a: &RotationSet, u: UnitQuaternion, b: &RotationSet, v: UnitQuaternion) -> Result<f64> {
    check_boundary_point(a, u)?;
    check_boundary_point(b, v)?;
    let pu = a.tangent_plane(u)?.left_mul(u.conj());
    let pv = b.tangent_plane(v)?.right_mul(v.conj());
    Ok(pu.distance(&pv))
}

/// For caps `U(U₀, s₀)`, `U(V₀, t₀)` whose boundaries both pass through 1,
/// whether 1 is a boundary point of their product: the vector parts of
/// `U₀` and `V₀` must point the same way.
pub fn cap_boundary_lemma(u0: UnitQuaternion, s0: f64, v0: UnitQuaternion, t0: f64) -> Result<bool> {
    for r in [s0, t0] {
        if !(r > 0.0 && r < FRAC_PI_2) {
            return Err(Error::domain(format!("cap radius {r} outside (0, π/2)")));
        }
    }
    if (u0.scalar() - s0.cos()).abs() > DEFAULT_TOL || (v0.scalar() - t0.cos()).abs() > DEFAULT_TOL {
        return Err(Error::domain("1 is not on both cap boundaries"));
    }
    let a = u0.vector().normalized().ok_or_else(|| Error::domain("U0 has no vector part"))?;
    let b = v0.vector().normalized().ok_or_else(|| Error::domain("V0 has no vector part"))?;
    Ok((a - b).norm() <= DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    CertifiedBoundary,
    CertifiedInterior,
    NecessaryFailed,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryVerdict {
    pub status: VerdictStatus,
    /// Largest sampled excess over the test cap (≤ 0 when every sample
    /// fits); 0 for verdicts that involve no sampling.
    pub max_slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[f64; 4]>,
}

impl BoundaryVerdict {
    fn plain(status: VerdictStatus) -> Self {
        BoundaryVerdict { status, max_slack: 0.0, witness: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// A region of S³ that can be tested and sampled, so that the sufficient
/// condition also applies to unions of caps.
pub trait Region: Sync {
    fn contains(&self, u: UnitQuaternion, tol: f64) -> bool;
    /// `n` points spread over the region and its boundary.
    fn sample_points(&self, n: usize, seed: u64) -> Vec<UnitQuaternion>;
}

impl Region for RotationSet {
    fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        RotationSet::contains(self, u, tol)
    }

    fn sample_points(&self, n: usize, seed: u64) -> Vec<UnitQuaternion> {
        let draw = |mode, n, seed| {
            self.sample(n, seed, mode).and_then(|c| c.quaternions()).unwrap_or_default()
        };
        let nb = n / 2;
        let mut pts = if nb > 0 && self.sample(1, seed, SampleMode::Boundary).is_ok() {
            draw(SampleMode::Boundary, nb, rng::derive_seed(seed, 1))
        } else {
            Vec::new()
        };
        pts.extend(draw(SampleMode::Interior, n - pts.len(), seed));
        pts
    }
}

/// A finite union of spherical caps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapUnion {
    pub caps: Vec<SphericalCap>,
}

impl CapUnion {
    pub fn new(caps: Vec<SphericalCap>) -> Self {
        CapUnion { caps }
    }

    /// On the boundary of one cap and not inside any other.
    pub fn on_boundary(&self, u: UnitQuaternion, tol: f64) -> bool {
        self.caps.iter().enumerate().any(|(i, c)| {
            (u.inner(c.center) - c.t.cos()).abs() <= tol
                && self.caps.iter().enumerate().all(|(j, d)| j == i || u.inner(d.center) <= d.t.cos() + tol)
        })
    }
}

impl Region for CapUnion {
    fn contains(&self, u: UnitQuaternion, tol: f64) -> bool {
        self.caps.iter().any(|c| c.contains(u, tol))
    }

    fn sample_points(&self, n: usize, seed: u64) -> Vec<UnitQuaternion> {
        let k = self.caps.len().max(1);
        let mut pts = Vec::with_capacity(n);
        for (i, c) in self.caps.iter().enumerate() {
            let share = n / k + usize::from(i < n % k);
            if share > 0 {
                pts.extend(RotationSet::Cap(*c).sample_points(share, rng::derive_seed(seed, i as u64 + 100)));
            }
        }
        pts
    }
}

/// Default samples per operand for [`sufficient_condition`].
pub const SUFFICIENT_SAMPLES: usize = 10_000;

/// Sampled check of the sufficient condition: with `1 ∈ ∂U(P, s)` and
/// `s < π/2`, if `u* U ⊆ U(P, s)` and `V v* ⊆ U(P, s)` then
/// `u v ∈ ∂(U ⊗ V)`. Samples both operands (boundary and interior) and
/// reports the worst excess; any excess above `tol` yields `Inconclusive`
/// with the offending translated point as witness.
#[allow(clippy::too_many_arguments)]
pub fn sufficient_condition<A: Region + ?Sized, B: Region + ?Sized>(
    a: &A,
    u: UnitQuaternion,
    b: &B,
    v: UnitQuaternion,
    p: UnitQuaternion,
    s: f64,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<BoundaryVerdict> {
    if !(s > 0.0 && s < FRAC_PI_2) {
        return Err(Error::domain(format!("test cap radius s = {s} must lie in (0, π/2)")));
    }
    if (p.scalar() - s.cos()).abs() > DEFAULT_TOL {
        return Err(Error::domain("1 is not on the boundary of the test cap U(P, s)"));
    }
    if !a.contains(u, tol) || !b.contains(v, tol) {
        return Err(Error::domain("u or v does not belong to its set"));
    }
    let cap = SphericalCap { center: p, t: s };
    let left = a.sample_points(n, rng::derive_seed(seed, 11)).into_iter().map(|x| u.conj() * x);
    let right = b.sample_points(n, rng::derive_seed(seed, 12)).into_iter().map(|y| y * v.conj());
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for x in left.chain(right) {
        let e = cap.excess(x);
        if e > worst {
            worst = e;
            witness = Some(x);
        }
    }
    Ok(if worst <= tol {
        BoundaryVerdict { status: VerdictStatus::CertifiedBoundary, max_slack: worst, witness: None }
    } else {
        BoundaryVerdict { status: VerdictStatus::Inconclusive, max_slack: worst, witness: witness.map(|w| w.to_array()) }
    })
}

/// Chains the tests: interior rule, then the tangent-plane condition, then
/// (when a test cap `(P, s)` is supplied) the sampled sufficient condition.
pub fn classify(
    a: &RotationSet,
    u: UnitQuaternion,
    b: &RotationSet,
    v: UnitQuaternion,
    test_cap: Option<(UnitQuaternion, f64)>,
    n: usize,
    seed: u64,
) -> Result<BoundaryVerdict> {
    if interior_rule(is_interior(a, u, DEFAULT_TOL), is_interior(b, v, DEFAULT_TOL)) {
        return Ok(BoundaryVerdict::plain(VerdictStatus::CertifiedInterior));
    }
    if !necessary_condition(a, u, b, v)? {
        return Ok(BoundaryVerdict::plain(VerdictStatus::NecessaryFailed));
    }
    match test_cap {
        Some((p, s)) => sufficient_condition(a, u, b, v, p, s, n, seed, DEFAULT_TOL),
        None => Ok(BoundaryVerdict::plain(VerdictStatus::Inconclusive)),
    }
}

/// For a union of two caps whose boundaries touch at `u` with a common
/// tangent plane, neither containing the other, `u v` is never a boundary
/// point of `U ⊗ V` for a tame `V`. Returns `true` once the configuration
/// is confirmed; otherwise a domain error says which hypothesis failed.
pub fn non_boundary_corollary(union: &CapUnion, u: UnitQuaternion) -> Result<bool> {
    let [c1, c2] = union.caps[..] else {
        return Err(Error::domain("expected a union of exactly two caps"));
    };
    let (s1, s2) = (RotationSet::Cap(c1), RotationSet::Cap(c2));
    if !s1.on_boundary(u, DEFAULT_TOL)? || !s2.on_boundary(u, DEFAULT_TOL)? {
        return Err(Error::domain("u is not on both cap boundaries"));
    }
    if !s1.tangent_plane(u)?.same_plane(&s2.tangent_plane(u)?, PLANE_TOL) {
        return Err(Error::domain("caps are not tangent at u"));
    }
    if c1.includes(&c2, DEFAULT_TOL) || c2.includes(&c1, DEFAULT_TOL) {
        return Err(Error::domain("one cap includes the other"));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{UnitVector3, Vector3};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn cap(center: UnitQuaternion, t: f64) -> RotationSet {
        RotationSet::Cap(SphericalCap::new(center, t).unwrap())
    }

    fn e(c: UnitVector3, s: f64) -> UnitQuaternion {
        UnitQuaternion::exp(c, s)
    }

    #[test]
    fn differential_examples() {
        let one = Quaternion::ONE;
        assert_eq!(product_differential(one, one, Side::Left, Quaternion::I), Quaternion::I);
        assert_eq!(product_differential(Quaternion::I, one, Side::Right, Quaternion::J), Quaternion::K);
    }

    #[test]
    fn interior_rule_table() {
        assert!(interior_rule(true, false));
        assert!(interior_rule(false, true));
        assert!(!interior_rule(false, false));
    }

    #[test]
    fn necessary_on_caps() {
        let s = FRAC_PI_4;
        let one = UnitQuaternion::IDENTITY;
        let a = cap(e(UnitVector3::I, s), s);
        let b = cap(e(UnitVector3::I, s), s);
        assert!(necessary_condition(&a, one, &b, one).unwrap());
        let c = cap(e(UnitVector3::J, s), s);
        assert!(!necessary_condition(&a, one, &c, one).unwrap());
        assert!(necessary_condition(&a, e(UnitVector3::I, 0.1), &b, one).is_err());
    }

    #[test]
    fn lemma_examples() {
        let (a, b) = (e(UnitVector3::I, 0.3), e(UnitVector3::I, 0.7));
        assert!(cap_boundary_lemma(a, 0.3, b, 0.7).unwrap());
        assert!(!cap_boundary_lemma(a, 0.3, e(UnitVector3::J, 0.7), 0.7).unwrap());
        assert!(cap_boundary_lemma(a, 0.3, a, 0.3).unwrap());
        assert!(cap_boundary_lemma(a, 0.3, b, 0.6).is_err());
        assert!(cap_boundary_lemma(e(UnitVector3::I, 1.7), 1.7, b, 0.7).is_err());
    }

    #[test]
    fn sufficient_tangent_caps() {
        let s = FRAC_PI_4;
        let p = e(UnitVector3::I, s);
        let a = cap(p, s);
        let one = UnitQuaternion::IDENTITY;
        let v = sufficient_condition(&a, one, &a, one, p, s, 2000, 3, DEFAULT_TOL).unwrap();
        assert_eq!(v.status, VerdictStatus::CertifiedBoundary);
        assert!(v.max_slack <= DEFAULT_TOL);
        assert!(v.to_json().starts_with("{\"status\":\"CertifiedBoundary\""));
        let big = e(UnitVector3::I, FRAC_PI_2);
        assert!(sufficient_condition(&a, one, &a, one, big, FRAC_PI_2, 10, 3, DEFAULT_TOL).is_err());
    }

    #[test]
    fn union_counterexample() {
        let s = FRAC_PI_4;
        let one = UnitQuaternion::IDENTITY;
        let c1 = SphericalCap::new(e(UnitVector3::I, s), s).unwrap();
        let c2 = SphericalCap::new(e(UnitVector3::I, -s), s).unwrap();
        let union = CapUnion::new(vec![c1, c2]);
        assert!(non_boundary_corollary(&union, one).unwrap());
        let v = cap(one, FRAC_PI_8);
        for p in [c1.center, c2.center] {
            let verdict = sufficient_condition(&union, one, &v, one, p, s, 2000, 5, DEFAULT_TOL).unwrap();
            assert_eq!(verdict.status, VerdictStatus::Inconclusive);
            assert!(verdict.witness.is_some());
        }
        let nested = CapUnion::new(vec![c1, SphericalCap::new(e(UnitVector3::I, 0.5), 0.5).unwrap()]);
        assert!(non_boundary_corollary(&nested, one).is_err());
        let crossing = CapUnion::new(vec![c1, SphericalCap::new(e(UnitVector3::J, s), s).unwrap()]);
        assert!(non_boundary_corollary(&crossing, one).is_err());
    }

    #[test]
    fn classify_chain() {
        let s = 0.5;
        let a = cap(e(UnitVector3::K, s), s);
        let one = UnitQuaternion::IDENTITY;
        let inner = classify(&a, e(UnitVector3::K, s), &a, one, None, 10, 1).unwrap();
        assert_eq!(inner.status, VerdictStatus::CertifiedInterior);
        let b = cap(e(UnitVector3::J, s), s);
        assert_eq!(classify(&a, one, &b, one, None, 10, 1).unwrap().status, VerdictStatus::NecessaryFailed);
        let p = e(UnitVector3::K, s);
        let ok = classify(&a, one, &a, one, Some((p, s)), 500, 1).unwrap();
        assert_eq!(ok.status, VerdictStatus::CertifiedBoundary);
    }

    #[test]
    fn axis_caps_have_planes_everywhere() {
        let s = RotationSet::AxisCap(crate::sets::AxisCap::new(UnitVector3::K, 0.6, 0.4).unwrap());
        let m = UnitVector3::normalize(Vector3::new(0.1, 0.0, 1.0)).unwrap();
        let u = UnitQuaternion::exp(m, 0.6);
        assert!(necessary_condition(&s, u, &s, u).unwrap());
        assert!(plane_mismatch(&s, u, &s, UnitQuaternion::exp(UnitVector3::K, 0.6)).unwrap() > 1e-3);
    }
}
