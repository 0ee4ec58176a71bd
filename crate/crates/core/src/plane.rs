//! Oriented 2-planes in R⁴ attached to a point of S³.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{Quaternion, UnitQuaternion};

/// Default Frobenius tolerance for plane equality.
pub const PLANE_TOL: f64 = 1e-8;

/// A tangent 2-plane at `base`: `frame` is orthonormal and orthogonal to
/// `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentPlane4 {
    pub base: UnitQuaternion,
    pub frame: [Quaternion; 2],
}

fn to_vec4(q: Quaternion) -> Vector4<f64> {
    Vector4::new(q.w, q.x, q.y, q.z)
}

/// Gram–Schmidt step: `v` minus its components along `basis`.
fn reject(v: Quaternion, basis: &[Quaternion]) -> Quaternion {
    basis.iter().fold(v, |acc, b| acc - b.scale(acc.inner(*b)))
}

/// Extends an orthonormal family in R⁴ by `count` further orthonormal
/// vectors, greedily taking the coordinate axis with the largest residual.
pub(crate) fn complete_basis(basis: &[Quaternion], count: usize) -> Vec<Quaternion> {
    let axes = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut all = basis.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let best = axes
            .iter()
            .map(|a| reject(reject(*a, &all), &all))
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("four candidate axes");
        let e = best.scale(1.0 / best.norm());
        all.push(e);
        out.push(e);
    }
    out
}

impl TangentPlane4 {
    /// Orthonormalizes `a, b` against `base` and each other.
    pub fn from_spanning(base: UnitQuaternion, a: Quaternion, b: Quaternion) -> Result<Self> {
        let u = base.quaternion();
        let a = reject(a, &[u]);
        let na = a.norm();
        if na < 1e-12 {
            return Err(Error::domain("spanning vectors do not define a tangent plane"));
        }
        let e1 = a.scale(1.0 / na);
        let b = reject(reject(b, &[u, e1]), &[u, e1]);
        let nb = b.norm();
        if nb < 1e-12 {
            return Err(Error::domain("spanning vectors do not define a tangent plane"));
        }
        Ok(TangentPlane4 { base, frame: [e1, b.scale(1.0 / nb)] })
    }

    /// The plane at `base` orthogonal to both `base` and `other`.
    pub fn complement_of(base: UnitQuaternion, other: Quaternion) -> Result<Self> {
        let u = base.quaternion();
        let w = reject(other, &[u]);
        let nw = w.norm();
        if nw < 1e-12 {
            return Err(Error::domain("direction is parallel to the base point"));
        }
        let w = w.scale(1.0 / nw);
        let c = complete_basis(&[u, w], 2);
        Ok(TangentPlane4 { base, frame: [c[0], c[1]] })
    }

    /// Orthogonal projection onto the (linear) plane.
    pub fn projection(&self) -> Matrix4<f64> {
        let [a, b] = self.frame.map(to_vec4);
        a * a.transpose() + b * b.transpose()
    }

    /// Frobenius distance between the projection matrices, a basis-free
    /// measure of how far two linear planes are apart.
    pub fn distance(&self, other: &TangentPlane4) -> f64 {
        (self.projection() - other.projection()).norm()
    }

    pub fn same_plane(&self, other: &TangentPlane4, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// The image under `x ↦ q x`, a rotation of R⁴.
    pub fn left_mul(&self, q: UnitQuaternion) -> TangentPlane4 {
        TangentPlane4 { base: q * self.base, frame: self.frame.map(|e| q * e) }
    }

    /// The image under `x ↦ x q`.
    pub fn right_mul(&self, q: UnitQuaternion) -> TangentPlane4 {
        TangentPlane4 { base: self.base * q, frame: self.frame.map(|e| e * q) }
    }

    /// Largest deviation from orthonormality of the frame and from
    /// orthogonality to the base point.
    pub fn frame_error(&self) -> f64 {
        let [a, b] = self.frame;
        let u = self.base.quaternion();
        [
            (a.norm_squared() - 1.0).abs(),
            (b.norm_squared() - 1.0).abs(),
            a.inner(b).abs(),
            a.inner(u).abs(),
            b.inner(u).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_one_and_i() {
        let p = TangentPlane4::complement_of(UnitQuaternion::new(Quaternion::I).unwrap(), Quaternion::ONE).unwrap();
        let expected = TangentPlane4 {
            base: UnitQuaternion::new(Quaternion::I).unwrap(),
            frame: [Quaternion::J, Quaternion::K],
        };
        assert!(p.same_plane(&expected, 1e-14));
        assert!(p.frame_error() < 1e-15);
    }

    #[test]
    fn distance_is_basis_free() {
        let base = UnitQuaternion::IDENTITY;
        let p = TangentPlane4::from_spanning(base, Quaternion::J, Quaternion::K).unwrap();
        let q = TangentPlane4::from_spanning(base, Quaternion::J + Quaternion::K, Quaternion::J - Quaternion::K).unwrap();
        assert!(p.distance(&q) < 1e-15);
        let r = TangentPlane4::from_spanning(base, Quaternion::I, Quaternion::K).unwrap();
        assert!((p.distance(&r) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_spanning_rejected() {
        let base = UnitQuaternion::IDENTITY;
        assert!(TangentPlane4::from_spanning(base, Quaternion::J, Quaternion::J.scale(2.0)).is_err());
        assert!(TangentPlane4::complement_of(base, Quaternion::ONE).is_err());
    }
}
