mod common;

use common::{hamilton, linear_product, naive_eval, nonreal, on_sphere, poly, quat, sphere_chain, unit};
use proptest::prelude::*;
use qslice::quaternion::{slice_unit, sphere_of};
use qslice::rational::{
    analyze_poles, point_order, point_status, pole_factorization, transport, unboundedness_witness, PointStatus,
    QRational,
};
use qslice::zeros::classical_multiplicity;
use qslice::{QPolynomial, Quaternion, RealPolynomial, UnitImaginary};

fn rational(max_degree: usize) -> impl Strategy<Value = QRational> {
    (poly(max_degree), poly(max_degree)).prop_map(|(f, g)| QRational::from_quotient(&f, &g).unwrap())
}

/// Pole order read off the growth of `|a|` along the slice towards `p`.
fn growth_order(a: &QRational, p: Quaternion) -> f64 {
    let u = slice_unit(p).map(|u| u.q()).unwrap_or(Quaternion::I);
    let near = |t: f64| a.eval(p + u * t).unwrap().norm();
    (near(1e-4) / near(1e-3)).log10()
}

/// Evaluation away from the poles of `a` and of `a^{-1}`, with a comparison scale.
fn admissible(a: &QRational, q: Quaternion) -> Option<(Quaternion, f64)> {
    let v = a.eval(q).ok()?;
    let d = a.den().eval_quat(q).norm();
    (d > 1e-3 * a.den().eval_scale(q.norm())).then(|| (v, a.eval_scale(q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_operations_evaluate_pointwise(a in rational(3), b in rational(3), q in quat(1.5)) {
        let Some((va, sa)) = admissible(&a, q) else { return Ok(()) };
        let Some((vb, sb)) = admissible(&b, q) else { return Ok(()) };
        let sum = a.add(&b).unwrap().eval(q).unwrap();
        prop_assert!(sum.dist(&(va + vb)) <= 1e-8 * (sa + sb));
        prop_assume!(va.norm() > 1e-3 * sa);
        let t = hamilton(hamilton(va.inverse().unwrap(), q), va);
        let Some((vbt, sbt)) = admissible(&b, t) else { return Ok(()) };
        let prod = a.star_mul(&b).unwrap().eval(q).unwrap();
        prop_assert!(prod.dist(&hamilton(va, vbt)) <= 1e-8 * sa * sbt);
    }

    #[test]
    fn reciprocal_inverts(a in rational(3), q in quat(1.5)) {
        let one = a.star_mul(&a.reciprocal().unwrap()).unwrap();
        prop_assert!(one.is_polynomial());
        let lead = one.den().leading();
        prop_assert!((&one.num().scale(1.0 / lead) - &QPolynomial::one()).norm() <= 1e-8);
        let back = a.reciprocal().unwrap().reciprocal().unwrap();
        if let Some((v, s)) = admissible(&a, q) {
            prop_assert!(back.eval(q).unwrap().dist(&v) <= 1e-7 * s);
        }
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn order_bounded_by_symmetrization(f in poly(3), g in poly(3)) {
        let a = QRational::from_quotient(&f, &g).unwrap();
        let fs = QPolynomial::from_real(&f.symmetrize().unwrap());
        let report = analyze_poles(&a).unwrap();
        for s in &report.spheres {
            for p in [on_sphere(s.sphere.x, s.sphere.y, UnitImaginary::I), on_sphere(s.sphere.x, s.sphere.y, -UnitImaginary::I)] {
                prop_assert!(point_order(&a, p) <= classical_multiplicity(&fs, p));
            }
        }
    }

    #[test]
    fn transport_formula(f in poly(3), g in poly(3), q in quat(1.5)) {
        let fc = f.regular_conj();
        prop_assume!(fc.eval(q).norm() > 1e-3 * fc.eval_scale(q));
        let a = QRational::from_quotient(&f, &g).unwrap();
        let t = transport(&f, q).unwrap();
        prop_assert!((sphere_of(t).x - sphere_of(q).x).abs() <= 1e-12 && (sphere_of(t).y - sphere_of(q).y).abs() <= 1e-10);
        let ft = naive_eval(&f, t);
        let rhs = hamilton(ft.inverse().unwrap(), naive_eval(&g, t));
        let scale = common::eval_bound(&g, t) * common::eval_bound(&f, t) / ft.norm_sq();
        prop_assert!(a.eval(q).unwrap().dist(&rhs) <= 1e-8 * scale);
        let back = transport(&fc, t).unwrap();
        prop_assert!(back.dist(&q) <= 1e-9 * (1.0 + q.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn transport_consistency(f in poly(3), g in poly(3), q in quat(1.5)) {
        let fc = f.regular_conj();
        prop_assume!(fc.eval(q).norm() > 1e-3 * fc.eval_scale(q));
        let a = QRational::from_quotient(&f, &g).unwrap();
        let t = transport(&f, q).unwrap();
        let ft = f.eval(t);
        let rhs = ft.inverse().unwrap() * g.eval(t);
        let scale = g.eval_scale(t) * f.eval_scale(t) / ft.norm_sq();
        prop_assert!(a.eval(q).unwrap().dist(&rhs) <= 1e-8 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn structure_of_poles(
        p in nonreal(1.0, 0.3),
        units in prop::collection::vec(unit(), 0..3),
        extra in 0..3usize,
        g in poly(2),
        probes in prop::collection::vec(unit(), 12),
    ) {
        // (q - p_1) * ... * (q - p_k) * (q - pbar)^{*extra}, inverted and times g
        let mut chain = sphere_chain(p, &units);
        chain.extend(std::iter::repeat_n(p.conj(), extra));
        let f = linear_product(&chain);
        let a = QRational::from_quotient(&f, &g).unwrap();
        let report = analyze_poles(&a).unwrap();
        let s = sphere_of(p);
        let Some(sp) = report.spheres.iter().find(|r| (r.sphere.x - s.x).hypot(r.sphere.y - s.y) < 1e-6) else {
            // g cancelled every pole on the sphere
            return Ok(());
        };
        prop_assert_eq!(sp.spherical_order, 2 * sp.generic_order);
        let exceptional = sp.exceptional.filter(|(_, k)| *k != sp.generic_order);
        if let Some((pe, k)) = exceptional {
            prop_assert!(k < sp.generic_order);
            prop_assert_eq!(point_order(&a, pe), k);
        }
        for u in probes {
            let q = on_sphere(sp.sphere.x, sp.sphere.y, u);
            let ord = point_order(&a, q);
            match exceptional {
                Some((pe, k)) if q.dist(&pe) < 1e-6 => prop_assert_eq!(ord, k),
                _ => prop_assert_eq!(ord, sp.generic_order, "at {}", q),
            }
        }
    }

    #[test]
    fn pole_factorization_reconstructs(
        p in nonreal(1.0, 0.3),
        units in prop::collection::vec(unit(), 0..2),
        extra in 0..3usize,
        g in poly(2),
        near in prop::collection::vec((unit(), 0.01..0.2f64, -0.2..0.2f64), 100),
    ) {
        let mut chain = sphere_chain(p, &units);
        chain.extend(std::iter::repeat_n(p.conj(), extra));
        let a = QRational::from_quotient(&linear_product(&chain), &g).unwrap();
        for sp in analyze_poles(&a).unwrap().spheres {
            if sp.sphere.is_degenerate() || sp.generic_order == 0 {
                continue;
            }
            let (n, pe, k, rest) = pole_factorization(&a, &sp).unwrap();
            prop_assert_eq!(n, sp.generic_order);
            prop_assert_eq!(rest.den().eval(sp.sphere.x).abs() > 0.0 || rest.den().degree() == Some(0), true);
            let quad = RealPolynomial::new(sp.sphere.quadratic().to_vec()).pow(n as u32);
            let head = QRational::new(QPolynomial::linear(pe).star_pow(k as u32), quad).unwrap();
            let rebuilt = head.star_mul(&rest).unwrap();
            for (u, dy, dx) in &near {
                let q = on_sphere(sp.sphere.x + dx, sp.sphere.y + dy, *u);
                let (Ok(x), Ok(y)) = (a.eval(q), rebuilt.eval(q)) else { continue };
                prop_assert!(x.dist(&y) <= 1e-6 * x.norm().max(y.norm()).max(1.0), "{} vs {} at {}", x, y, q);
            }
        }
    }

    #[test]
    fn order_zero_points_are_unbounded(p in nonreal(1.0, 0.3)) {
        // (q - p)^{-*} has order 0 at pbar
        let a = QRational::from_quotient(&QPolynomial::linear(p), &QPolynomial::one()).unwrap();
        prop_assert_eq!(point_status(&a, p.conj()), PointStatus::Order0Nonremovable);
        prop_assert_eq!(point_status(&a, p), PointStatus::Pole(1));
        let (q, max, threshold) = unboundedness_witness(&a, p.conj(), 1e-3, 100).unwrap();
        prop_assert!((q.dist(&p.conj()) - 1e-3).abs() < 1e-9);
        prop_assert!(max > threshold, "{} <= {}", max, threshold);
    }
}

#[test]
fn reciprocal_of_linear_example() {
    let a = QRational::from_quotient(&QPolynomial::linear(-Quaternion::I), &QPolynomial::one()).unwrap();
    assert_eq!(a.num(), &QPolynomial::linear(Quaternion::I));
    assert_eq!(a.den().coeffs(), &[1.0, 0.0, 1.0]);
    assert_eq!(a.eval(Quaternion::real(2.0)).unwrap(), Quaternion::new(0.4, -0.2, 0.0, 0.0));
    assert!(a.eval(Quaternion::I).is_err());
    assert!(a.eval(Quaternion::J).is_err());
    let report = analyze_poles(&a).unwrap();
    assert_eq!(report.spheres.len(), 1);
    let sp = &report.spheres[0];
    assert_eq!((sp.generic_order, sp.spherical_order), (1, 2));
    let (pe, k) = sp.exceptional.unwrap();
    assert!(pe.dist(&Quaternion::I) < 1e-12);
    assert_eq!(k, 0);
    assert_eq!(point_order(&a, -Quaternion::I), 1);
    assert_eq!(point_order(&a, Quaternion::I), 0);
    assert_eq!(point_status(&a, Quaternion::I), PointStatus::Order0Nonremovable);
    // growth along the slice confirms both orders
    assert!((growth_order(&a, -Quaternion::I) - 1.0).abs() < 0.05);
    assert!(growth_order(&a, Quaternion::I).abs() < 0.05);
    let (_, max, threshold) = unboundedness_witness(&a, Quaternion::I, 1e-3, 100).unwrap();
    assert!(max > 1e3 && max > threshold);
}

#[test]
fn engineered_exceptional_point() {
    let p = Quaternion::new(0.5, 0.3, -0.4, 1.2);
    let f = linear_product(&[p, p.conj(), p.conj()]);
    let a = QRational::from_quotient(&f, &QPolynomial::one()).unwrap();
    let sp = &analyze_poles(&a).unwrap().spheres[0];
    assert_eq!(sp.generic_order, 2);
    let (pe, k) = sp.exceptional.unwrap();
    assert!(pe.dist(&p) < 1e-9, "{pe}");
    assert_eq!(k, 1);
    assert_eq!(sp.spherical_order, 4);
    assert!((growth_order(&a, p) - 1.0).abs() < 0.05);
    let generic = on_sphere(p.re(), p.im_norm(), UnitImaginary::J);
    assert!((growth_order(&a, generic) - 2.0).abs() < 0.05);
}

#[test]
fn pure_sphere_pole_has_no_exceptional_point() {
    let a = QRational::new(QPolynomial::one(), RealPolynomial::sphere(1.0, 2.0)).unwrap();
    let sp = &analyze_poles(&a).unwrap().spheres[0];
    assert_eq!(sp.generic_order, 1);
    assert_eq!(sp.exceptional, None);
    for u in [UnitImaginary::I, UnitImaginary::J, -UnitImaginary::K] {
        assert_eq!(point_order(&a, on_sphere(1.0, 2.0, u)), 1);
    }
}

#[test]
fn real_cancellation() {
    let a = QRational::from_quotient(&QPolynomial::linear(Quaternion::real(2.0)), &QPolynomial::one()).unwrap();
    assert_eq!(a.num(), &QPolynomial::one());
    assert_eq!(a.den().coeffs(), &[-2.0, 1.0]);
}
