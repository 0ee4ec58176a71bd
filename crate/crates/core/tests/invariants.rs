use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qmink::chart;
use qmink::product;
use qmink::{
    Arc, AxisCap, Frame, PointCloud, Quaternion, RotationSet, SampleMode, SphericalCap, UnitQuaternion, UnitVector3,
    Vector3,
};

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
}

fn unit() -> impl Strategy<Value = UnitQuaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|a| UnitQuaternion::normalize(Quaternion::from_array(a)).unwrap())
}

fn direction() -> impl Strategy<Value = UnitVector3> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("away from zero", |a| a.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|a| UnitVector3::normalize(Vector3::from_array(a)).unwrap())
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    a.distance(b) <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #[test]
    fn multiplication_is_associative(p in quaternion(), q in quaternion(), r in quaternion()) {
        prop_assert!(close((p * q) * r, p * (q * r), 1e-12));
    }

    #[test]
    fn norm_is_multiplicative(p in quaternion(), q in quaternion()) {
        let lhs = (p * q).norm();
        prop_assert!((lhs - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn conjugate_reverses_products(p in quaternion(), q in quaternion()) {
        prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-12));
    }

    #[test]
    fn unit_multiplication_preserves_inner_products(w in unit(), u in unit(), v in unit()) {
        let before = u.inner(v);
        prop_assert!(((w * u).inner(w * v) - before).abs() <= 1e-12);
        prop_assert!(((u * w).inner(v * w) - before).abs() <= 1e-12);
    }

    #[test]
    fn antipodes_give_the_same_rotation(u in unit(), x in prop::array::uniform3(-2.0f64..2.0)) {
        let v = Vector3::from_array(x);
        prop_assert!((u.rotate(v) - (-u).rotate(v)).norm() <= 1e-12 * (1.0 + v.norm()));
        let a = chart::RotMatrix3::from_quaternion(u);
        let b = chart::RotMatrix3::from_quaternion(-u);
        prop_assert!((a.matrix() - b.matrix()).norm() <= 1e-12);
        prop_assert!((a.apply(v) - u.rotate(v)).norm() <= 1e-12 * (1.0 + v.norm()));
    }

    #[test]
    fn axis_angle_roundtrip(u in unit()) {
        let aa = u.to_axis_angle();
        prop_assert!((0.0..=PI).contains(&aa.angle));
        let back = UnitQuaternion::from_axis_angle(aa.axis, aa.angle);
        prop_assert!(back.distance(*u) <= 1e-9 || back.distance(-*u) <= 1e-9);
    }

    #[test]
    fn stereo_roundtrip(u in unit()) {
        prop_assume!(u.scalar() > -0.999);
        let p = chart::stereo_project(u).unwrap();
        prop_assert!(chart::stereo_unproject(p).distance(*u) <= 1e-12);
    }

    #[test]
    fn cayley_roundtrip(q in quaternion()) {
        prop_assume!((q + Quaternion::ONE).norm() > 1e-2);
        let back = chart::cayley_psi(chart::cayley_phi(q).unwrap()).unwrap();
        prop_assert!(close(back, q, 1e-10));
    }

    #[test]
    fn so3_exp_log_roundtrip(n in direction(), theta in 0.0f64..(PI - 1e-3)) {
        let v = n.scale(theta);
        prop_assert!((chart::log_so3(&chart::exp_so3(v)) - v).norm() <= 1e-9);
    }

    #[test]
    fn rotation_matrix_quaternion_roundtrip(u in unit()) {
        let back = chart::RotMatrix3::from_quaternion(u).to_quaternion();
        prop_assert!(back.distance(*u) <= 1e-9 || back.distance(-*u) <= 1e-9);
    }

    #[test]
    fn cap_products_stay_in_the_product_cap(
        u0 in unit(), v0 in unit(), s in 0.0f64..1.5, t in 0.0f64..1.5,
        a in direction(), b in direction(), fa in 0.0f64..=1.0, fb in 0.0f64..=1.0,
    ) {
        let ca = SphericalCap::new(u0, s).unwrap();
        let cb = SphericalCap::new(v0, t).unwrap();
        let x = u0 * UnitQuaternion::exp(a, fa * s);
        let y = v0 * UnitQuaternion::exp(b, fb * t);
        prop_assert!(product::cap_product(&ca, &cb).contains(x * y, 1e-9));
    }

    #[test]
    fn arc_surface_points_lie_in_the_enclosing_cap(
        c1 in direction(), c2 in direction(),
        phi1 in -PI..PI, phi2 in -PI..PI, d1 in 0.0f64..PI, d2 in 0.0f64..PI,
        fs in -1.0f64..=1.0, ft in -1.0f64..=1.0,
    ) {
        prop_assume!(c1.dot(*c2).abs() < 0.99);
        let a = Arc::new(c1, phi1, d1).unwrap();
        let b = Arc::new(c2, phi2, d2).unwrap();
        let res = product::arc_product_general(&a, &b).unwrap();
        let cap = res.enclosing_cap.unwrap();
        let p = a.point(a.phi + fs * a.delta) * b.point(b.phi + ft * b.delta);
        prop_assert!(cap.contains(p, 1e-6), "excess {}", cap.excess(p));
    }

    #[test]
    fn axis_cap_hull_contains_its_points(
        c in direction(), phi in 0.01f64..3.1, xi in 0.0f64..PI, m in direction(),
    ) {
        let s = AxisCap::new(c, phi, xi).unwrap();
        prop_assume!(m.dot(*c) >= xi.cos());
        prop_assert!(s.contains(s.point(m), 1e-12));
        let hull = RotationSet::AxisCap(s).hull();
        prop_assert!(hull.contains(s.point(m), 1e-9));
    }

    #[test]
    fn translation_moves_caps_rigidly(u0 in unit(), q in unit(), t in 0.0f64..PI, m in direction(), f in 0.0f64..=1.0) {
        let cap = SphericalCap::new(u0, t).unwrap();
        let x = u0 * UnitQuaternion::exp(m, f * t);
        let left = cap.translated(q, qmink::Side::Left);
        let right = cap.translated(q, qmink::Side::Right);
        prop_assert!(left.contains(q * x, 1e-9));
        prop_assert!(right.contains(x * q, 1e-9));
    }

    #[test]
    fn bch_matches_matrix_composition(n1 in direction(), n2 in direction(), t1 in 0.0f64..FRAC_PI_2, t2 in 0.0f64..FRAC_PI_2) {
        let (v1, v2) = (n1.scale(t1), n2.scale(t2));
        let reference = chart::log_so3(&(chart::exp_so3(v1) * chart::exp_so3(v2)));
        prop_assert!((chart::bch(v1, v2) - reference).norm() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), t in 0.05f64..3.0) {
        let set = RotationSet::Cap(SphericalCap::new(UnitQuaternion::IDENTITY, t).unwrap());
        let a = set.sample(5000, seed, SampleMode::Interior).unwrap();
        let b = set.sample(5000, seed, SampleMode::Interior).unwrap();
        prop_assert_eq!(&a, &b);
        for u in a.quaternions().unwrap() {
            prop_assert!(set.contains(u, 1e-9));
        }
    }

    #[test]
    fn csv_roundtrip(seed in any::<u64>()) {
        let set = RotationSet::AxisCap(AxisCap::new(UnitVector3::K, 0.7, 0.4).unwrap());
        let cloud = set.sample(200, seed, SampleMode::Interior).unwrap();
        let mut buf = Vec::new();
        cloud.write_csv(&mut buf).unwrap();
        let back = PointCloud::read_csv(buf.as_slice(), Frame::R3Bch).unwrap();
        prop_assert_eq!(back.frame, Frame::S3);
        prop_assert_eq!(&back.tag_names, &cloud.tag_names);
        for (x, y) in back.coords.iter().zip(&cloud.coords) {
            prop_assert!((x - y).abs() <= 1e-15 * (1.0 + y.abs()));
        }
    }
}
