use m4d_core::projection::{dop, Rotor4};
use m4d_core::Quaternion;
use proptest::prelude::*;

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(|c| Quaternion::from_array(c).unwrap())
}

fn unit() -> impl Strategy<Value = Quaternion> {
    quat()
        .prop_filter("nonzero", |q| q.norm() > 1e-3)
        .prop_map(|q| q.normalized().unwrap())
}

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn norm_is_multiplicative(a in quat(), b in quat()) {
        let lhs = a.mul(b).norm();
        let rhs = a.norm() * b.norm();
        prop_assert!(rel((lhs - rhs).abs(), rhs) <= 1e-12);
    }

    #[test]
    fn conjugation_reverses_products(a in quat(), b in quat()) {
        let lhs = a.mul(b).conjugate();
        let rhs = b.conjugate().mul(a.conjugate());
        prop_assert!(rel(lhs.max_abs_diff(&rhs), a.norm() * b.norm()) <= 1e-12);
    }

    #[test]
    fn inverse_is_two_sided(a in quat().prop_filter("nonzero", |q| q.norm() > 1e-6)) {
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(inv).max_abs_diff(&Quaternion::ONE) <= 1e-12);
        prop_assert!(inv.mul(a).max_abs_diff(&Quaternion::ONE) <= 1e-12);
    }

    #[test]
    fn product_is_associative(a in quat(), b in quat(), c in quat()) {
        let lhs = a.mul(b).mul(c);
        let rhs = a.mul(b.mul(c));
        prop_assert!(rel(lhs.max_abs_diff(&rhs), a.norm() * b.norm() * c.norm()) <= 1e-12);
    }

    #[test]
    fn divisions_undo_products(a in quat().prop_filter("nonzero", |q| q.norm() > 1e-3), b in quat()) {
        let scale = b.norm().max(1.0);
        prop_assert!(a.divide_left(a.mul(b)).unwrap().max_abs_diff(&b) / scale <= 1e-12);
        prop_assert!(b.mul(a).divide_right(a).unwrap().max_abs_diff(&b) / scale <= 1e-12);
    }

    #[test]
    fn trig_form_round_trips(a in quat().prop_filter("nonzero", |q| q.norm() > 1e-6)) {
        let back = Quaternion::from_trig(&a.trig_form().unwrap()).unwrap();
        prop_assert!(rel(back.max_abs_diff(&a), a.norm()) <= 1e-12);
    }

    #[test]
    fn rotations_are_isometries(l in unit(), r in unit(), p in quat(), q in quat()) {
        let rot = Rotor4::new(l, r).unwrap();
        let d0 = p.distance(&q);
        let d1 = rot.apply(p).distance(&rot.apply(q));
        prop_assert!(rel((d0 - d1).abs(), d0) <= 1e-12);
        prop_assert!(rel((rot.apply(p).norm() - p.norm()).abs(), p.norm()) <= 1e-12);
    }

    #[test]
    fn dop_images_share_xy(p in quat()) {
        let img = dop(p);
        prop_assert_eq!(img.z.x.to_bits(), img.w.x.to_bits());
        prop_assert_eq!(img.z.y.to_bits(), img.w.y.to_bits());
        prop_assert_eq!([img.z.x, img.z.y, img.z.w, img.w.w], [p.a0(), p.a1(), -p.a2(), p.a3()]);
    }
}

#[test]
fn basis_products() {
    use Quaternion as Q;
    let m = Q::ONE.scale(-1.0);
    assert_eq!(Q::I.mul(Q::I), m);
    assert_eq!(Q::J.mul(Q::J), m);
    assert_eq!(Q::K.mul(Q::K), m);
    assert_eq!(Q::I.mul(Q::J), Q::K);
    assert_eq!(Q::J.mul(Q::K), Q::I);
    assert_eq!(Q::K.mul(Q::I), Q::J);
    assert_eq!(Q::J.mul(Q::I), Q::K.scale(-1.0));
}
