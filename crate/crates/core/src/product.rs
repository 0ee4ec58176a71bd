//! Closed-form Minkowski products and enclosing-cap bounds.
//!
//! Exact results exist for caps (`U(U₀,s) ⊗ U(V₀,t) = U(U₀V₀, s+t)` or S³),
//! for arcs about a common axis, and for translates by a single rotation.
//! Arcs about different axes give a 2-surface, reported through its
//! parameterization and smallest enclosing cap. Axis caps and mixed pairs
//! get an enclosing-cap bound.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{Quaternion, UnitQuaternion, UnitVector3};
use crate::sets::{Arc, AxisCap, RotationSet, Side, SphericalCap};

/// Tolerance for deciding that two unit axes are parallel.
const PARALLEL_TOL: f64 = 1e-12;
/// Points per axis of the grid used by [`min_scalar_part`].
pub const GRID_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Note {
    /// The exact product is all of S³.
    FullSphere,
    /// The enclosing bound degenerates to S³.
    FullSphereBound,
    /// The arc-surface parameterization is injective.
    Embedded,
    /// The arc-surface parameterization is an immersion but not injective.
    ImmersedOnly,
    /// Only an enclosing cap is known.
    BoundOnly,
    /// The translate leaves the set family; only its hull is reported.
    NoClosedForm,
    /// Enclosing radius from the corner formula.
    CornerMinimum,
    /// Enclosing radius from numerical minimization.
    GridMinimum,
}

/// `P(s, t) = exp(s c₁) exp(t c₂)` over
/// `[φ₁−δ₁, φ₁+δ₁] × [φ₂−δ₂, φ₂+δ₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcSurface {
    pub c1: UnitVector3,
    pub c2: UnitVector3,
    pub phi1: f64,
    pub phi2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

/// One of the four boundary arcs of an [`ArcSurface`]: the parameter
/// `varying` (1 or 2) sweeps `[lo, hi]` while the other is held at `fixed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeArc {
    pub varying: u8,
    pub fixed: f64,
    pub lo: f64,
    pub hi: f64,
}

impl ArcSurface {
    pub fn from_arcs(a: &Arc, b: &Arc) -> Self {
        ArcSurface { c1: a.axis, c2: b.axis, phi1: a.phi, phi2: b.phi, delta1: a.delta, delta2: b.delta }
    }

    /// `exp(s c₁) exp(t c₂)` in absolute parameters.
    pub fn point(&self, s: f64, t: f64) -> UnitQuaternion {
        UnitQuaternion::exp(self.c1, s) * UnitQuaternion::exp(self.c2, t)
    }

    /// `exp(φ₁ c₁) exp(φ₂ c₂)`.
    pub fn center(&self) -> UnitQuaternion {
        self.point(self.phi1, self.phi2)
    }

    /// Corners in the order `(+,+), (−,−), (+,−), (−,+)` of the offsets.
    pub fn corners(&self) -> [UnitQuaternion; 4] {
        let (p1, p2, d1, d2) = (self.phi1, self.phi2, self.delta1, self.delta2);
        [
            self.point(p1 + d1, p2 + d2),
            self.point(p1 - d1, p2 - d2),
            self.point(p1 + d1, p2 - d2),
            self.point(p1 - d1, p2 + d2),
        ]
    }

    pub fn edges(&self) -> [EdgeArc; 4] {
        let (p1, p2, d1, d2) = (self.phi1, self.phi2, self.delta1, self.delta2);
        [
            EdgeArc { varying: 1, fixed: p2 - d2, lo: p1 - d1, hi: p1 + d1 },
            EdgeArc { varying: 1, fixed: p2 + d2, lo: p1 - d1, hi: p1 + d1 },
            EdgeArc { varying: 2, fixed: p1 - d1, lo: p2 - d2, hi: p2 + d2 },
            EdgeArc { varying: 2, fixed: p1 + d1, lo: p2 - d2, hi: p2 + d2 },
        ]
    }

    pub fn edge_point(&self, edge: &EdgeArc, param: f64) -> UnitQuaternion {
        match edge.varying {
            1 => self.point(param, edge.fixed),
            _ => self.point(edge.fixed, param),
        }
    }

    pub fn axes_inner(&self) -> f64 {
        self.c1.dot(*self.c2)
    }

    /// The corner with the smallest inner product with the center, and
    /// that inner product.
    pub fn minimizing_corner(&self) -> (UnitQuaternion, f64) {
        let c = self.center();
        self.corners()
            .into_iter()
            .map(|p| (p, p.inner(c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("four corners")
    }

    /// Injectivity of the parameterization: neither range is a full
    /// circle and at least one is shorter than a quarter turn.
    pub fn is_embedded(&self) -> bool {
        self.delta1 < PI && self.delta2 < PI && self.delta1.min(self.delta2) < FRAC_PI_2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<RotationSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enclosing_cap: Option<SphericalCap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface_params: Option<ArcSurface>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub operand_hulls: Vec<SphericalCap>,
    pub notes: Vec<Note>,
}

impl ProductResult {
    fn exact(set: RotationSet) -> Self {
        let notes = if set == RotationSet::Full { vec![Note::FullSphere] } else { Vec::new() };
        ProductResult {
            exact: Some(set),
            enclosing_cap: Some(set.hull()),
            surface_params: None,
            operand_hulls: Vec::new(),
            notes,
        }
    }

    fn bound(cap: SphericalCap, notes: Vec<Note>) -> Self {
        ProductResult { exact: None, enclosing_cap: Some(cap), surface_params: None, operand_hulls: Vec::new(), notes }
    }

    pub fn has(&self, note: Note) -> bool {
        self.notes.contains(&note)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("product result serializes")
    }
}

/// `U ⊗ V`, dispatched on the operand families.
pub fn product(a: &RotationSet, b: &RotationSet) -> ProductResult {
    use RotationSet as R;
    match (a, b) {
        (R::Singleton(p), other) => translate(other, *p, Side::Left),
        (other, R::Singleton(q)) => translate(other, *q, Side::Right),
        (R::Full, _) | (_, R::Full) => ProductResult::exact(R::Full),
        (R::Cap(x), R::Cap(y)) => ProductResult::exact(cap_product(x, y)),
        (R::Arc(x), R::Arc(y)) => match arc_product_same_axis(x, y) {
            Ok(set) => ProductResult::exact(set),
            Err(_) => arc_product_general(x, y).expect("axes checked non-parallel"),
        },
        (R::AxisCap(x), R::AxisCap(y)) => axiscap_bound(x, y),
        _ => hull_bound(a, b),
    }
}

/// Bound for pairs without a closed form: the product of the operands'
/// smallest enclosing caps.
pub fn hull_bound(a: &RotationSet, b: &RotationSet) -> ProductResult {
    let (ha, hb) = (a.hull(), b.hull());
    let mut res = match cap_product(&ha, &hb) {
        RotationSet::Cap(c) => ProductResult::bound(c, vec![Note::BoundOnly]),
        _ => ProductResult::bound(full_cap(ha.center * hb.center), vec![Note::BoundOnly, Note::FullSphereBound]),
    };
    res.operand_hulls = vec![ha, hb];
    res
}

fn full_cap(center: UnitQuaternion) -> SphericalCap {
    SphericalCap { center, t: PI }
}

/// `{q} ⊗ U` (left) or `U ⊗ {q}` (right).
pub fn translate(set: &RotationSet, q: UnitQuaternion, side: Side) -> ProductResult {
    let mul = |p: UnitQuaternion| match side {
        Side::Left => q * p,
        Side::Right => p * q,
    };
    match *set {
        RotationSet::Singleton(p) => ProductResult::exact(RotationSet::Singleton(mul(p))),
        RotationSet::Full => ProductResult::exact(RotationSet::Full),
        RotationSet::Cap(c) => ProductResult::exact(RotationSet::Cap(c.translated(q, side))),
        RotationSet::Arc(a) if a.off_circle(q) <= PARALLEL_TOL => {
            // exp(ψc) commutes with the arc, so both sides agree.
            let psi = a.parameter_of(q);
            ProductResult::exact(RotationSet::Arc(Arc { phi: a.phi + psi, ..a }))
        }
        RotationSet::AxisCap(a) if q.vector().norm() <= PARALLEL_TOL => {
            if q.scalar() > 0.0 {
                ProductResult::exact(*set)
            } else {
                // −exp(φ m) = exp((π−φ)(−m))
                let flipped = AxisCap { axis: -a.axis, phi: PI - a.phi, xi: a.xi };
                ProductResult::exact(RotationSet::AxisCap(flipped))
            }
        }
        RotationSet::Arc(_) | RotationSet::AxisCap(_) => {
            ProductResult::bound(set.hull().translated(q, side), vec![Note::NoClosedForm])
        }
    }
}

/// `U(U₀, s) ⊗ U(V₀, t)`: `U(U₀V₀, s+t)` while `s + t < π`, otherwise S³.
pub fn cap_product(a: &SphericalCap, b: &SphericalCap) -> RotationSet {
    let t = a.t + b.t;
    if t >= PI {
        RotationSet::Full
    } else {
        RotationSet::Cap(SphericalCap { center: a.center * b.center, t })
    }
}

/// `C(c, φ₁, δ₁) ⊗ C(c, φ₂, δ₂) = C(c, φ₁+φ₂, min(δ₁+δ₂, π))`.
pub fn arc_product_same_axis(a: &Arc, b: &Arc) -> Result<RotationSet> {
    let k = a.axis.dot(*b.axis);
    if k.abs() < 1.0 - PARALLEL_TOL {
        return Err(Error::domain("use arc_product_general"));
    }
    let phi2 = if k < 0.0 { -b.phi } else { b.phi };
    let phi = a.phi + phi2;
    let delta = (a.delta + b.delta).min(PI);
    Ok(if delta == 0.0 {
        RotationSet::Singleton(UnitQuaternion::exp(a.axis, phi))
    } else {
        RotationSet::Arc(Arc { axis: a.axis, phi, delta })
    })
}

/// Product of arcs about non-parallel axes: the surface parameterization,
/// its smallest enclosing cap `U(exp(φ₁c₁)exp(φ₂c₂), arccos r)` with
/// `r = min F(s,t)`, `F = cos s cos t − sin s sin t ⟨c₁,c₂⟩` over
/// `|s| ≤ δ₁, |t| ≤ δ₂`, and an embedded/immersed flag.
pub fn arc_product_general(a: &Arc, b: &Arc) -> Result<ProductResult> {
    let k = a.axis.dot(*b.axis);
    if k.abs() >= 1.0 - PARALLEL_TOL {
        return Err(Error::domain("arc axes are parallel; use arc_product_same_axis"));
    }
    let surface = ArcSurface::from_arcs(a, b);
    let mut notes = Vec::new();
    let r = if a.delta <= FRAC_PI_2 && b.delta <= FRAC_PI_2 {
        notes.push(Note::CornerMinimum);
        corner_min_scalar_part(a.delta, b.delta, k)
    } else {
        notes.push(Note::GridMinimum);
        min_scalar_part(a.delta, b.delta, k).value
    };
    notes.push(if surface.is_embedded() { Note::Embedded } else { Note::ImmersedOnly });
    let eta = r.clamp(-1.0, 1.0).acos();
    Ok(ProductResult {
        exact: None,
        enclosing_cap: Some(SphericalCap { center: surface.center(), t: eta }),
        surface_params: Some(surface),
        operand_hulls: Vec::new(),
        notes,
    })
}

/// `cos δ₁ cos δ₂ − sin δ₁ sin δ₂ |k|`, the minimum of `F` when both
/// ranges are at most a quarter turn (attained at a corner).
pub fn corner_min_scalar_part(delta1: f64, delta2: f64, k: f64) -> f64 {
    delta1.cos() * delta2.cos() - delta1.sin() * delta2.sin() * k.abs()
}

fn scalar_part(s: f64, t: f64, k: f64) -> f64 {
    let (ss, cs) = s.sin_cos();
    let (st, ct) = t.sin_cos();
    cs * ct - k * ss * st
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub value: f64,
    pub s: f64,
    pub t: f64,
}

/// Minimum of `F(s,t)` on `[−δ₁,δ₁] × [−δ₂,δ₂]`: dense grid followed by
/// alternating golden-section refinement of each coordinate.
pub fn min_scalar_part(delta1: f64, delta2: f64, k: f64) -> GridMinimum {
    let n = GRID_SIZE;
    let node = |d: f64, i: usize| if d == 0.0 { 0.0 } else { -d + 2.0 * d * i as f64 / (n - 1) as f64 };
    let row_min = |i: usize| {
        let s = node(delta1, i);
        (0..n)
            .map(|j| {
                let t = node(delta2, j);
                GridMinimum { value: scalar_part(s, t, k), s, t }
            })
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("nonempty row")
    };
    #[cfg(feature = "parallel")]
    let best = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row_min).min_by(|a, b| a.value.total_cmp(&b.value))
    };
    #[cfg(not(feature = "parallel"))]
    let best = (0..n).map(row_min).min_by(|a, b| a.value.total_cmp(&b.value));
    let mut best = best.expect("nonempty grid");

    let h1 = 2.0 * delta1 / (n - 1) as f64;
    let h2 = 2.0 * delta2 / (n - 1) as f64;
    let (mut s, mut t) = (best.s, best.t);
    let (mut lo1, mut hi1) = ((s - h1).max(-delta1), (s + h1).min(delta1));
    let (mut lo2, mut hi2) = ((t - h2).max(-delta2), (t + h2).min(delta2));
    for _ in 0..60 {
        let s_new = golden_min(|x| scalar_part(x, t, k), lo1, hi1);
        let t_new = golden_min(|y| scalar_part(s_new, y, k), lo2, hi2);
        let moved = (s_new - s).abs() + (t_new - t).abs();
        s = s_new;
        t = t_new;
        // Let the bracket follow the iterate if it walked to an edge.
        lo1 = (s - h1).max(-delta1);
        hi1 = (s + h1).min(delta1);
        lo2 = (t - h2).max(-delta2);
        hi2 = (t + h2).min(delta2);
        if moved < 1e-15 {
            break;
        }
    }
    let refined = scalar_part(s, t, k);
    if refined < best.value {
        best = GridMinimum { value: refined, s, t };
    }
    best
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if b <= a {
        return a;
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // endpoints matter when the minimum sits on the bracket edge
    [a, b, 0.5 * (a + b)]
        .into_iter()
        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
        .expect("three candidates")
}

/// Enclosing-cap bound for `S(c₁,φ₁,ξ₁) ⊗ S(c₂,φ₂,ξ₂)`: each operand lies
/// in `U(exp(φᵢcᵢ), t(φᵢ,ξᵢ))`, so the product lies in
/// `U(exp(φ₁c₁)exp(φ₂c₂), T)` with `T = t(φ₁,ξ₁) + t(φ₂,ξ₂)`.
pub fn axiscap_bound(a: &AxisCap, b: &AxisCap) -> ProductResult {
    let ha = SphericalCap { center: a.center(), t: a.hull_radius() };
    let hb = SphericalCap { center: b.center(), t: b.hull_radius() };
    let center = ha.center * hb.center;
    let total = ha.t + hb.t;
    let mut res = if a.xi == 0.0 && b.xi == 0.0 {
        ProductResult::exact(RotationSet::Singleton(center))
    } else if total < PI {
        ProductResult::bound(SphericalCap { center, t: total }, vec![Note::BoundOnly])
    } else {
        ProductResult::bound(full_cap(center), vec![Note::BoundOnly, Note::FullSphereBound])
    };
    res.operand_hulls = vec![ha, hb];
    res
}

/// Rank of the differential of `(exp(φ₁m), exp(φ₂n)) ↦ exp(φ₁m) exp(φ₂n)`:
/// the dimension of `Π_m exp(φ₂n) + exp(φ₁m) Π_n` in R⁴.
pub fn differential_rank(a: &AxisCap, b: &AxisCap, m: UnitVector3, n: UnitVector3) -> usize {
    let p = a.point(m);
    let q = b.point(n);
    let (m1, m2) = m.orthonormal_pair();
    let (n1, n2) = n.orthonormal_pair();
    let cols = [
        Quaternion::pure(*m1) * q,
        Quaternion::pure(*m2) * q,
        p * Quaternion::pure(*n1),
        p * Quaternion::pure(*n2),
    ];
    let mat = Matrix4::from_fn(|r, c| cols[c].to_array()[r]);
    mat.singular_values().iter().filter(|s| **s > 1e-9).count()
}

/// Whether the product map drops rank at `(exp(φ₁m), exp(φ₂n))`.
pub fn rank_defect_locus(a: &AxisCap, b: &AxisCap, m: UnitVector3, n: UnitVector3) -> bool {
    differential_rank(a, b, m, n) < 3
}
