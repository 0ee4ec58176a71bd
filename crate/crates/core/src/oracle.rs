//! Monte-Carlo checks of the closed forms.
//!
//! [`product_cloud`] samples both operands and multiplies; [`verify`] runs
//! one named property and returns a [`VerificationReport`]. Extremal
//! configurations have measure zero, so sharpness properties test
//! structured candidates (common-axis pairs, antipodal pairs) instead of
//! blind samples.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boundary;
use crate::chart;
use crate::cloud::{Frame, PointCloud};
use crate::error::{Error, Result};
use crate::product::{self, Note};
use crate::quat::{Quaternion, UnitQuaternion, UnitVector3, Vector3};
use crate::rng;
use crate::sets::{Arc, AxisCap, RotationSet, SampleMode, SphericalCap, DEFAULT_TOL};

/// Points closer than this to `−1` are dropped by the stereographic chart.
pub const STEREO_DROP_TOL: f64 = 1e-9;

/// `n` products `u v` with `u`, `v` drawn independently from the interiors
/// of `a` and `b`. Tags of the factors are kept with `a_` / `b_` prefixes.
pub fn product_cloud(a: &RotationSet, b: &RotationSet, n: usize, seed: u64) -> Result<PointCloud> {
    product_cloud_with(a, SampleMode::Interior, b, SampleMode::Interior, n, seed)
}

pub fn product_cloud_with(
    a: &RotationSet,
    mode_a: SampleMode,
    b: &RotationSet,
    mode_b: SampleMode,
    n: usize,
    seed: u64,
) -> Result<PointCloud> {
    let ca = a.sample(n, seed, mode_a)?;
    let cb = b.sample(n, rng::derive_seed(seed, 1), mode_b)?;
    let names: Vec<String> = ca
        .tag_names
        .iter()
        .map(|t| format!("a_{t}"))
        .chain(cb.tag_names.iter().map(|t| format!("b_{t}")))
        .collect();
    let (qa, qb) = (ca.quaternions()?, cb.quaternions()?);
    let mut out = PointCloud::with_capacity(Frame::S3, names, n);
    let mut tags = Vec::new();
    for i in 0..n {
        tags.clear();
        tags.extend_from_slice(ca.point_tags(i));
        tags.extend_from_slice(cb.point_tags(i));
        out.push(&(qa[i] * qb[i]).to_array(), &tags);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    Stereo,
    Bch,
}

impl FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stereo" => Ok(Projection::Stereo),
            "bch" => Ok(Projection::Bch),
            _ => Err(Error::usage(format!("unknown projection method '{s}' (expected stereo or bch)"))),
        }
    }
}

/// Maps an S³ cloud into R³. Stereographic projection drops points within
/// [`STEREO_DROP_TOL`] of `−1` and counts them in `dropped`; the BCH chart
/// maps every point to its Euler vector, inside the ball of radius `π`.
pub fn project_cloud(cloud: &PointCloud, method: Projection) -> Result<PointCloud> {
    let qs = cloud.quaternions()?;
    let frame = match method {
        Projection::Stereo => Frame::R3Stereo,
        Projection::Bch => Frame::R3Bch,
    };
    let mut out = PointCloud::with_capacity(frame, cloud.tag_names.clone(), qs.len());
    out.dropped = cloud.dropped;
    for (i, u) in qs.into_iter().enumerate() {
        let p = match method {
            Projection::Stereo => {
                if u.distance(-Quaternion::ONE) <= STEREO_DROP_TOL {
                    out.dropped += 1;
                    continue;
                }
                u.vector().scale(1.0 / (1.0 + u.scalar()))
            }
            Projection::Bch => chart::euler_vector(u),
        };
        out.push(&p.to_array(), cloud.point_tags(i));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Property {
    CapClosure,
    CapSharpness,
    ArcSameAxis,
    ArcSurfaceCap,
    CornerMin,
    AxiscapBound,
    AxiscapSharpHalfpi,
    BchConsistency,
    BoundaryInProductOfBoundaries,
    NecessaryFilter,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::CapClosure,
        Property::CapSharpness,
        Property::ArcSameAxis,
        Property::ArcSurfaceCap,
        Property::CornerMin,
        Property::AxiscapBound,
        Property::AxiscapSharpHalfpi,
        Property::BchConsistency,
        Property::BoundaryInProductOfBoundaries,
        Property::NecessaryFilter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::CapClosure => "CAP_CLOSURE",
            Property::CapSharpness => "CAP_SHARPNESS",
            Property::ArcSameAxis => "ARC_SAME_AXIS",
            Property::ArcSurfaceCap => "ARC_SURFACE_CAP",
            Property::CornerMin => "CORNER_MIN",
            Property::AxiscapBound => "AXISCAP_BOUND",
            Property::AxiscapSharpHalfpi => "AXISCAP_SHARP_HALFPI",
            Property::BchConsistency => "BCH_CONSISTENCY",
            Property::BoundaryInProductOfBoundaries => "BOUNDARY_IN_PRODUCT_OF_BOUNDARIES",
            Property::NecessaryFilter => "NECESSARY_FILTER",
        }
    }

    /// The claim the property checks.
    pub fn claim(self) -> &'static str {
        match self {
            Property::CapClosure => "U(U0,s) ⊗ U(V0,t) ⊆ U(U0 V0, s+t), and = S3 once s+t ≥ π",
            Property::CapSharpness => "common-axis boundary pairs U0 exp(s p), exp(t p) V0 reach ⟨uv, U0V0⟩ = cos(s+t)",
            Property::ArcSameAxis => "C(c,φ1,δ1) ⊗ C(c,φ2,δ2) = C(c, φ1+φ2, min(δ1+δ2, π))",
            Property::ArcSurfaceCap => "exp(s c1) exp(t c2) lies in U(exp(φ1c1)exp(φ2c2), arccos r), r the minimum scalar part",
            Property::CornerMin => "for δ1, δ2 ≤ π/2 the minimum scalar part is attained at a corner",
            Property::AxiscapBound => "S(c1,φ1,ξ1) ⊗ S(c2,φ2,ξ2) ⊆ U(exp(φ1c1)exp(φ2c2), t(φ1,ξ1)+t(φ2,ξ2))",
            Property::AxiscapSharpHalfpi => "(cos ξ c + sin ξ v)(cos ξ c − sin ξ v) has ⟨·, −1⟩ = cos 2ξ for v ⊥ c",
            Property::BchConsistency => "axis–angle composition equals log(exp v1 · exp v2)",
            Property::BoundaryInProductOfBoundaries => "∂(U ⊗ V) ⊆ ∂U ⊗ ∂V for caps, and interior factors stay off ∂",
            Property::NecessaryFilter => "tangent planes u*T_u∂U and T_v∂V v* agree exactly for common-axis cap pairs",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        Property::ALL
            .into_iter()
            .find(|p| p.name() == up)
            .ok_or_else(|| Error::usage(format!("unknown property '{s}'")))
    }
}

/// Property parameters. Unset fields take per-property defaults; the
/// resolved values are echoed in the report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub u0: Option<[f64; 4]>,
    pub v0: Option<[f64; 4]>,
    pub c1: Option<[f64; 3]>,
    pub c2: Option<[f64; 3]>,
    pub phi1: Option<f64>,
    pub phi2: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub xi: Option<f64>,
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub cases: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub property: Property,
    pub claim: &'static str,
    pub passed: bool,
    pub n_samples: usize,
    pub violations: usize,
    pub worst_slack: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    pub notes: Vec<Note>,
    pub runtime_s: f64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Equality ignoring the wall-clock runtime.
    pub fn same_outcome(&self, other: &VerificationReport) -> bool {
        VerificationReport { runtime_s: 0.0, ..self.clone() } == VerificationReport { runtime_s: 0.0, ..other.clone() }
    }
}

/// Running tally of slack values; a sample violates when its slack
/// exceeds the tolerance.
struct Tally {
    n: usize,
    violations: usize,
    worst: f64,
    tol: f64,
}

impl Tally {
    fn new(tol: f64) -> Self {
        Tally { n: 0, violations: 0, worst: f64::NEG_INFINITY, tol }
    }

    fn add(&mut self, slack: f64) {
        self.n += 1;
        if slack.is_nan() || slack > self.tol {
            self.violations += 1;
        }
        if slack > self.worst || slack.is_nan() {
            self.worst = slack;
        }
    }

    fn fail(&mut self) {
        self.n += 1;
        self.violations += 1;
    }
}

struct Resolver<'a> {
    p: &'a VerifyParams,
    seed: u64,
    out: BTreeMap<String, Value>,
}

impl Resolver<'_> {
    fn real(&mut self, name: &str, given: Option<f64>, default: f64) -> f64 {
        let v = given.unwrap_or(default);
        self.out.insert(name.into(), json!(v));
        v
    }

    fn quat(&mut self, name: &str, given: Option<[f64; 4]>, label: u64) -> Result<UnitQuaternion> {
        let q = match given {
            Some(a) => UnitQuaternion::from_array(a)?,
            None => rng::unit_quaternion(&mut rng::stream(rng::derive_seed(self.seed, label), 0)),
        };
        self.out.insert(name.into(), json!(q.to_array()));
        Ok(q)
    }

    fn axis(&mut self, name: &str, given: Option<[f64; 3]>, default: UnitVector3) -> Result<UnitVector3> {
        let c = match given {
            Some(a) => UnitVector3::from_array(a)?,
            None => default,
        };
        self.out.insert(name.into(), json!(c.to_array()));
        Ok(c)
    }

    fn count(&mut self, name: &str, given: Option<usize>, default: usize) -> usize {
        let v = given.unwrap_or(default);
        self.out.insert(name.into(), json!(v));
        v
    }
}

/// Runs one property check with `n` samples.
pub fn verify(property: Property, params: &VerifyParams, n: usize, seed: u64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::usage("sample count must be at least 1"));
    }
    let start = Instant::now();
    let mut r = Resolver { p: params, seed, out: BTreeMap::new() };
    let mut notes = Vec::new();
    let tally = match property {
        Property::CapClosure => cap_closure(&mut r, n, seed, &mut notes)?,
        Property::CapSharpness => cap_sharpness(&mut r, n, seed)?,
        Property::ArcSameAxis => arc_same_axis(&mut r, n, seed)?,
        Property::ArcSurfaceCap => arc_surface_cap(&mut r, n, seed, &mut notes)?,
        Property::CornerMin => corner_min(&mut r, seed)?,
        Property::AxiscapBound => axiscap_bound(&mut r, n, seed, &mut notes)?,
        Property::AxiscapSharpHalfpi => axiscap_sharp(&mut r, n, seed)?,
        Property::BchConsistency => bch_consistency(&mut r, n, seed),
        Property::BoundaryInProductOfBoundaries => boundary_in_boundaries(&mut r, n, seed)?,
        Property::NecessaryFilter => necessary_filter(&mut r, n, seed)?,
    };
    Ok(VerificationReport {
        property,
        claim: property.claim(),
        passed: tally.violations == 0 && tally.n > 0,
        n_samples: tally.n,
        violations: tally.violations,
        worst_slack: tally.worst,
        tolerance: tally.tol,
        seed,
        params: r.out,
        notes,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

fn cap_pair(r: &mut Resolver, s_def: f64, t_def: f64) -> Result<(SphericalCap, SphericalCap)> {
    let s = r.real("s", r.p.s, s_def);
    let t = r.real("t", r.p.t, t_def);
    let u0 = r.quat("u0", r.p.u0, 1)?;
    let v0 = r.quat("v0", r.p.v0, 2)?;
    Ok((SphericalCap::new(u0, s)?, SphericalCap::new(v0, t)?))
}

fn cap_closure(r: &mut Resolver, n: usize, seed: u64, notes: &mut Vec<Note>) -> Result<Tally> {
    let (a, b) = cap_pair(r, FRAC_PI_4, FRAC_PI_4)?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let total = a.t + b.t;
    if total >= PI {
        notes.push(Note::FullSphere);
    }
    let bound = SphericalCap { center: a.center * b.center, t: total.min(PI) };
    let cloud = product_cloud(&RotationSet::Cap(a), &RotationSet::Cap(b), n, seed)?;
    let mut tally = Tally::new(tol);
    for x in cloud.quaternions()? {
        tally.add(bound.excess(x));
    }
    Ok(tally)
}

fn cap_sharpness(r: &mut Resolver, n: usize, seed: u64) -> Result<Tally> {
    let (a, b) = cap_pair(r, FRAC_PI_4, FRAC_PI_4)?;
    let tol = r.real("tol", r.p.tol, 1e-12);
    let total = a.t + b.t;
    if total >= PI {
        return Err(Error::domain("sharpness needs s + t < π; the product is all of S3"));
    }
    let target = a.center * b.center;
    let pts: Vec<f64> = rng::batched(n, seed, |g, len| {
        (0..len)
            .map(|_| {
                let p = rng::unit_vector(g);
                let u = a.center * UnitQuaternion::exp(p, a.t);
                let v = UnitQuaternion::exp(p, b.t) * b.center;
                (((u * v).inner(target) - total.cos()).abs())
                    .max((u.inner(a.center) - a.t.cos()).abs())
                    .max((v.inner(b.center) - b.t.cos()).abs())
            })
            .collect()
    });
    let mut tally = Tally::new(tol);
    pts.into_iter().for_each(|e| tally.add(e));
    Ok(tally)
}

fn arc_same_axis(r: &mut Resolver, n: usize, seed: u64) -> Result<Tally> {
    let c = r.axis("c1", r.p.c1, UnitVector3::K)?;
    let a = Arc::new(c, r.real("phi1", r.p.phi1, 0.0), r.real("delta1", r.p.delta1, FRAC_PI_4))?;
    let b = Arc::new(c, r.real("phi2", r.p.phi2, 0.2), r.real("delta2", r.p.delta2, FRAC_PI_4))?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let result = product::arc_product_same_axis(&a, &b)?;
    let mut tally = Tally::new(tol);
    let expect_delta = (a.delta + b.delta).min(PI);
    let (phi, delta) = match result {
        RotationSet::Arc(x) => (x.phi, x.delta),
        RotationSet::Singleton(_) => (a.phi + b.phi, 0.0),
        _ => unreachable!("same-axis product is an arc or a point"),
    };
    tally.add((phi - (a.phi + b.phi)).abs().max((delta - expect_delta).abs()));
    // every product lies in the closed form
    let (ra, rb) = (RotationSet::Arc(a), RotationSet::Arc(b));
    for x in product_cloud(&ra, &rb, n, seed)?.quaternions()? {
        if result.contains(x, tol) {
            tally.add(0.0);
        } else {
            tally.fail();
        }
    }
    // every point of the closed form factors as a product
    let target = Arc { axis: a.axis, phi, delta };
    let sigmas: Vec<f64> = rng::batched(n, rng::derive_seed(seed, 7), |g, len| {
        (0..len).map(|_| rng::uniform(g, phi - delta, phi + delta)).collect()
    });
    for sigma in sigmas {
        let x = target.point(sigma);
        let sig = a.parameter_of(x);
        let slack = (-1..=1)
            .map(|k| {
                let sg = sig + 2.0 * PI * k as f64;
                let s1 = (sg - b.phi).clamp(a.phi - a.delta, a.phi + a.delta);
                let s2 = sg - s1;
                (s2 - b.phi).abs() - b.delta
            })
            .fold(f64::INFINITY, f64::min);
        tally.add(slack);
    }
    Ok(tally)
}

fn arc_surface_cap(r: &mut Resolver, n: usize, seed: u64, notes: &mut Vec<Note>) -> Result<Tally> {
    let c1 = r.axis("c1", r.p.c1, UnitVector3::J)?;
    let c2 = r.axis("c2", r.p.c2, UnitVector3::K)?;
    let a = Arc::new(c1, r.real("phi1", r.p.phi1, 0.0), r.real("delta1", r.p.delta1, FRAC_PI_4))?;
    let b = Arc::new(c2, r.real("phi2", r.p.phi2, 0.0), r.real("delta2", r.p.delta2, FRAC_PI_4))?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let res = product::arc_product_general(&a, &b)?;
    notes.extend(res.notes.iter().copied());
    let cap = res.enclosing_cap.expect("arc surface has an enclosing cap");
    let mut tally = Tally::new(tol);
    for x in product_cloud(&RotationSet::Arc(a), &RotationSet::Arc(b), n, seed)?.quaternions()? {
        tally.add(cap.excess(x));
    }
    if res.has(Note::CornerMinimum) {
        // the minimizing corner attains the radius
        let (_, v) = res.surface_params.expect("surface").minimizing_corner();
        if (v - cap.t.cos()).abs() > 1e-12 {
            tally.fail();
        }
    }
    Ok(tally)
}

fn corner_min(r: &mut Resolver, seed: u64) -> Result<Tally> {
    let cases = r.count("cases", r.p.cases, 50);
    let tol = r.real("tol", r.p.tol, 1e-6);
    let mut g = rng::stream(seed, 0);
    let mut tally = Tally::new(tol);
    for _ in 0..cases {
        let c1 = rng::unit_vector(&mut g);
        let c2 = rng::unit_vector(&mut g);
        let k = c1.dot(*c2);
        let d1 = g.gen_range(0.0..=FRAC_PI_2);
        let d2 = g.gen_range(0.0..=FRAC_PI_2);
        let corner = product::corner_min_scalar_part(d1, d2, k).clamp(-1.0, 1.0).acos();
        let grid = product::min_scalar_part(d1, d2, k).value.clamp(-1.0, 1.0).acos();
        let mut slack = (corner - grid).abs();
        if k.abs() < 1.0 && d1 > 0.0 && d2 > 0.0 && corner >= d1 + d2 {
            slack = f64::INFINITY;
        }
        tally.add(slack);
    }
    Ok(tally)
}

fn axis_caps(r: &mut Resolver) -> Result<(AxisCap, AxisCap)> {
    let c1 = r.axis("c1", r.p.c1, UnitVector3::J)?;
    let c2 = r.axis("c2", r.p.c2, UnitVector3::K)?;
    let a = AxisCap::new(c1, r.real("phi1", r.p.phi1, FRAC_PI_8), r.real("xi1", r.p.xi1, FRAC_PI_8))?;
    let b = AxisCap::new(c2, r.real("phi2", r.p.phi2, FRAC_PI_8), r.real("xi2", r.p.xi2, FRAC_PI_8))?;
    Ok((a, b))
}

fn axiscap_bound(r: &mut Resolver, n: usize, seed: u64, notes: &mut Vec<Note>) -> Result<Tally> {
    let (a, b) = axis_caps(r)?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let res = product::axiscap_bound(&a, &b);
    notes.extend(res.notes.iter().copied());
    let cap = res.enclosing_cap.expect("axis-cap bound has a cap");
    let mut tally = Tally::new(tol);
    for x in product_cloud(&RotationSet::AxisCap(a), &RotationSet::AxisCap(b), n, seed)?.quaternions()? {
        tally.add(cap.excess(x));
    }
    Ok(tally)
}

fn axiscap_sharp(r: &mut Resolver, n: usize, seed: u64) -> Result<Tally> {
    let xi = r.real("xi", r.p.xi, FRAC_PI_6);
    let c = r.axis("c1", r.p.c1, UnitVector3::K)?;
    let tol = r.real("tol", r.p.tol, 1e-12);
    let s = AxisCap::new(c, FRAC_PI_2, xi)?;
    let bound = product::axiscap_bound(&s, &s).enclosing_cap.expect("bound");
    let (e1, e2) = c.orthonormal_pair();
    let errs: Vec<f64> = rng::batched(n, seed, |g, len| {
        (0..len)
            .map(|_| {
                let az = rng::uniform(g, -PI, PI);
                let v = e1.scale(az.cos()) + e2.scale(az.sin());
                let m1 = UnitVector3::normalize(c.scale(xi.cos()) + v.scale(xi.sin())).expect("unit");
                let m2 = UnitVector3::normalize(c.scale(xi.cos()) - v.scale(xi.sin())).expect("unit");
                let x = s.point(m1) * s.point(m2);
                let reach = (x.inner(-UnitQuaternion::IDENTITY) - (2.0 * xi).cos()).abs();
                reach.max(bound.excess(x))
            })
            .collect()
    });
    let mut tally = Tally::new(tol);
    errs.into_iter().for_each(|e| tally.add(e));
    Ok(tally)
}

fn bch_consistency(r: &mut Resolver, n: usize, seed: u64) -> Tally {
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let max_angle = PI - 1e-3;
    r.out.insert("max_composite_angle".into(), json!(max_angle));
    let errs: Vec<f64> = rng::batched(n, seed, |g, len| {
        let mut out = Vec::with_capacity(len);
        while out.len() < len {
            let v1 = rng::unit_vector(g).scale(rng::uniform(g, 0.0, PI));
            let v2 = rng::unit_vector(g).scale(rng::uniform(g, 0.0, PI));
            let via_matrix = chart::log_so3(&(chart::exp_so3(v1) * chart::exp_so3(v2)));
            if via_matrix.norm() > max_angle {
                continue;
            }
            out.push((chart::bch(v1, v2) - via_matrix).norm());
        }
        out
    });
    let mut tally = Tally::new(tol);
    errs.into_iter().for_each(|e| tally.add(e));
    tally
}

fn boundary_in_boundaries(r: &mut Resolver, n: usize, seed: u64) -> Result<Tally> {
    let (a, b) = cap_pair(r, 0.7, 0.6)?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let total = a.t + b.t;
    if total >= PI || a.t <= 0.0 || b.t <= 0.0 {
        return Err(Error::domain("needs 0 < s, t and s + t < π"));
    }
    let prod = SphericalCap { center: a.center * b.center, t: total };
    let mut tally = Tally::new(tol);
    // boundary points of the product factor through common-axis boundary pairs
    let targets = RotationSet::Cap(prod).sample(n, seed, SampleMode::Boundary)?.quaternions()?;
    for x in targets {
        let inner = a.center.conj() * x * b.center.conj();
        let Some(p) = inner.vector().normalized() else {
            tally.fail();
            continue;
        };
        let p = UnitVector3::normalize(p)?;
        let u = a.center * UnitQuaternion::exp(p, a.t);
        let v = UnitQuaternion::exp(p, b.t) * b.center;
        tally.add((u * v).distance(*x));
    }
    // interior-by-anything products stay strictly inside
    let margin = 0.01 * a.t;
    let inner_a = RotationSet::Cap(SphericalCap { center: a.center, t: a.t - margin });
    let gap = (total - margin).cos() - total.cos();
    let cloud = product_cloud_with(&inner_a, SampleMode::Interior, &RotationSet::Cap(b), SampleMode::Boundary, n, seed)?;
    for x in cloud.quaternions()? {
        let depth = x.inner(prod.center) - total.cos();
        tally.add(gap - depth);
    }
    Ok(tally)
}

fn necessary_filter(r: &mut Resolver, n: usize, seed: u64) -> Result<Tally> {
    let (a, b) = cap_pair(r, FRAC_PI_4, FRAC_PI_4)?;
    let tol = r.real("tol", r.p.tol, DEFAULT_TOL);
    let (sa, sb) = (RotationSet::Cap(a), RotationSet::Cap(b));
    let cases: Vec<(UnitVector3, UnitVector3)> = rng::batched(n, seed, |g, len| {
        (0..len)
            .map(|i| {
                let m = rng::unit_vector(g);
                let other = rng::unit_vector(g);
                let nn = match i % 3 {
                    0 => m,
                    1 => -m,
                    _ => other,
                };
                (m, nn)
            })
            .collect()
    });
    let mut tally = Tally::new(0.0);
    for (m, nn) in cases {
        let u = a.center * UnitQuaternion::exp(m, a.t);
        let v = UnitQuaternion::exp(nn, b.t) * b.center;
        let filter = boundary::necessary_condition(&sa, u, &sb, v)?;
        let common_axis = (*m - *nn).norm().min((*m + *nn).norm()) <= tol;
        // the filter never rejects an actual boundary product
        let on_product_boundary =
            ((u * v).inner(a.center * b.center) - (a.t + b.t).cos()).abs() <= tol;
        if filter == common_axis && (filter || !on_product_boundary) {
            tally.add(0.0);
        } else {
            tally.fail();
        }
    }
    tally.worst = tally.worst.max(0.0);
    Ok(tally)
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 3] = ["example1", "example3", "example5"];

/// Operand pairs of the worked examples:
/// `example1` = `C(ĵ,0,π) ⊗ C(k̂,0,π)`, `example3` = `C(ĵ,0,π/4) ⊗ S(k̂,π/8,π/8)`,
/// `example5` = `S(ĵ,π/8,π/8) ⊗ S(k̂,π/8,π/8)`.
pub fn preset(name: &str) -> Result<(RotationSet, RotationSet)> {
    let arc = |c, delta| Arc::new(c, 0.0, delta).map(RotationSet::Arc);
    let axis_cap = |c| AxisCap::new(c, FRAC_PI_8, FRAC_PI_8).map(RotationSet::AxisCap);
    match name {
        "example1" => Ok((arc(UnitVector3::J, PI)?, arc(UnitVector3::K, PI)?)),
        "example3" => Ok((arc(UnitVector3::J, FRAC_PI_4)?, axis_cap(UnitVector3::K)?)),
        "example5" => Ok((axis_cap(UnitVector3::J)?, axis_cap(UnitVector3::K)?)),
        _ => Err(Error::usage(format!("unknown preset '{name}' (expected one of {})", PRESETS.join(", ")))),
    }
}

/// Largest point norm of an R³ cloud.
pub fn max_radius(cloud: &PointCloud) -> f64 {
    cloud.points().map(|p| Vector3::new(p[0], p[1], p[2]).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_cloud() {
        let u = UnitQuaternion::exp(UnitVector3::I, 0.4);
        let v = UnitQuaternion::exp(UnitVector3::J, 0.9);
        let c = product_cloud(&RotationSet::Singleton(u), &RotationSet::Singleton(v), 5, 1).unwrap();
        assert_eq!(c.len(), 5);
        for x in c.quaternions().unwrap() {
            assert_eq!(x, u * v);
        }
        assert!(c.tag_names.is_empty());
    }

    fn arc(c: UnitVector3, phi: f64, delta: f64) -> RotationSet {
        RotationSet::Arc(Arc::new(c, phi, delta).unwrap())
    }

    #[test]
    fn tags_are_prefixed() {
        let a = arc(UnitVector3::J, 0.0, PI);
        let b = arc(UnitVector3::K, 0.0, PI);
        let c = product_cloud(&a, &b, 10, 3).unwrap();
        assert_eq!(c.tag_names, vec!["a_s", "b_s"]);
        let x = c.quaternions().unwrap()[0];
        let (s, t) = (c.point_tags(0)[0], c.point_tags(0)[1]);
        let p = UnitQuaternion::exp(UnitVector3::J, s) * UnitQuaternion::exp(UnitVector3::K, t);
        assert!(p.distance(*x) < 1e-15);
    }

    #[test]
    fn projections() {
        let mut c = PointCloud::new(Frame::S3, vec![]);
        c.push(&[1.0, 0.0, 0.0, 0.0], &[]);
        c.push(&[-1.0, 0.0, 0.0, 0.0], &[]);
        let s = project_cloud(&c, Projection::Stereo).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.dropped, 1);
        assert_eq!(s.point(0), &[0.0, 0.0, 0.0]);
        let b = project_cloud(&c, Projection::Bch).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.point(1), &[0.0, 0.0, 0.0]);
        assert!(project_cloud(&s, Projection::Bch).is_err());
        assert_eq!("STEREO".parse::<Projection>().unwrap(), Projection::Stereo);
        assert!("mercator".parse::<Projection>().is_err());
    }

    #[test]
    fn property_names_roundtrip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
        }
        assert!(matches!("NOPE".parse::<Property>(), Err(Error::Usage(_))));
    }

    #[test]
    fn every_property_passes_small() {
        for p in Property::ALL {
            let params = VerifyParams { cases: Some(3), ..Default::default() };
            let rep = verify(p, &params, 500, 9).unwrap();
            assert!(rep.passed, "{}", rep.to_json());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = VerifyParams::default();
        let a = verify(Property::CapClosure, &p, 2000, 4).unwrap();
        let b = verify(Property::CapClosure, &p, 2000, 4).unwrap();
        assert!(a.same_outcome(&b));
    }

    #[test]
    fn full_sphere_closure_is_trivial() {
        let p = VerifyParams { s: Some(2.0), t: Some(2.0), ..Default::default() };
        let rep = verify(Property::CapClosure, &p, 1000, 1).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.notes, vec![Note::FullSphere]);
    }
}
