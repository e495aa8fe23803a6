//! Strategies and independent oracles shared by the integration tests.
//! The oracles avoid the library's own arithmetic paths: products go
//! through the left-multiplication matrix, evaluation through explicit
//! powers.

#![allow(dead_code)]

use proptest::prelude::*;
use qslice::{QPolynomial, Quaternion, RealPolynomial, UnitImaginary};

pub fn quat(r: f64) -> impl Strategy<Value = Quaternion> {
    [-r..=r, -r..=r, -r..=r, -r..=r].prop_map(Quaternion::from_components)
}

/// A quaternion whose imaginary part is at least `min_im` in norm.
pub fn nonreal(r: f64, min_im: f64) -> impl Strategy<Value = Quaternion> {
    quat(r).prop_filter("imaginary part too small", move |q| q.im_norm() >= min_im)
}

pub fn unit() -> impl Strategy<Value = UnitImaginary> {
    [-1.0..=1.0f64, -1.0..=1.0, -1.0..=1.0]
        .prop_filter("near zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|v| UnitImaginary::normalize(Quaternion::new(0.0, v[0], v[1], v[2])).unwrap())
}

/// Degree in `1..=max_degree` with a leading coefficient of norm at least 0.2.
pub fn poly(max_degree: usize) -> impl Strategy<Value = QPolynomial> {
    prop::collection::vec(quat(1.0), 2..=max_degree + 1)
        .prop_filter("small leading coefficient", |c| c.last().unwrap().norm() >= 0.2)
        .prop_map(QPolynomial::new)
}

/// `(q - p_1) * ... * (q - p_n)`.
pub fn linear_product(roots: &[Quaternion]) -> QPolynomial {
    roots.iter().fold(QPolynomial::one(), |acc, p| acc.star_mul(&QPolynomial::linear(*p)))
}

pub fn sphere_poly(x: f64, y: f64) -> QPolynomial {
    QPolynomial::from_real(&RealPolynomial::sphere(x, y))
}

/// Hamilton product as `L(a) b`.
pub fn hamilton(a: Quaternion, b: Quaternion) -> Quaternion {
    let [a0, a1, a2, a3] = a.components();
    let l = [[a0, -a1, -a2, -a3], [a1, a0, -a3, a2], [a2, a3, a0, -a1], [a3, -a2, a1, a0]];
    let b = b.components();
    let mut out = [0.0; 4];
    for (row, o) in l.iter().zip(out.iter_mut()) {
        *o = row.iter().zip(&b).map(|(x, y)| x * y).sum();
    }
    Quaternion::from_components(out)
}

/// `sum q^n a_n` with each power formed by repeated multiplication.
pub fn naive_eval(f: &QPolynomial, q: Quaternion) -> Quaternion {
    let mut power = Quaternion::ONE;
    let mut acc = Quaternion::ZERO;
    for a in f.coeffs() {
        acc += hamilton(power, *a);
        power = hamilton(power, q);
    }
    acc
}

/// Coefficient convolution with the matrix product.
pub fn naive_star(f: &QPolynomial, g: &QPolynomial) -> Vec<Quaternion> {
    if f.is_zero() || g.is_zero() {
        return Vec::new();
    }
    let (a, b) = (f.coeffs(), g.coeffs());
    let mut c = vec![Quaternion::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += hamilton(*x, *y);
        }
    }
    c
}

/// `sum |q|^n |a_n|`, the natural size of `f(q)`.
pub fn eval_bound(f: &QPolynomial, q: Quaternion) -> f64 {
    f.coeffs().iter().enumerate().map(|(n, a)| a.norm() * q.norm().powi(n as i32)).sum()
}

pub fn max_coeff_diff(a: &[Quaternion], b: &[Quaternion]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or_default();
            let y = b.get(k).copied().unwrap_or_default();
            x.dist(&y)
        })
        .fold(0.0, f64::max)
}

/// A point of the sphere `x + yS` in the direction of `u`.
pub fn on_sphere(x: f64, y: f64, u: UnitImaginary) -> Quaternion {
    Quaternion::real(x) + u.q() * y
}

/// `p` followed by points of its sphere, skipping any that would undo the
/// previous factor (`(q - a) * (q - abar)` is the real quadratic).
pub fn sphere_chain(p: Quaternion, units: &[UnitImaginary]) -> Vec<Quaternion> {
    let mut out = vec![p];
    for u in units {
        let next = on_sphere(p.re(), p.im_norm(), *u);
        if next.dist(&out.last().unwrap().conj()) > 0.1 {
            out.push(next);
        }
    }
    out
}

/// A rational `f^{-*} * g` with a pole of positive order at the returned
/// centre. `f` is a product of linear factors, so its poles are known.
pub fn rational_with_pole(seed: u64) -> (qslice::rational::QRational, Quaternion) {
    use qslice::experiments::{random_linear_product, random_polynomial, rng};
    use qslice::rational::point_order;
    use qslice::rational::QRational;
    let mut r = rng(seed);
    loop {
        let (f, roots) = random_linear_product(&mut r, 1 + (seed % 3) as usize);
        let g = random_polynomial(&mut r, 3);
        let Ok(a) = QRational::from_quotient(&f, &g) else { continue };
        let centre = roots.iter().flat_map(|p| [*p, p.conj()]).find(|p| p.im_norm() > 0.05 && point_order(&a, *p) > 0);
        if let Some(p) = centre {
            return (a, p);
        }
    }
}

/// Worst `|eval_truncated - eval| / eval_scale` over `points` samples with
/// `sigma(q, p) <= 0.8 R2`; an infinite `R2` is replaced by 2. Half the
/// draws lie in the slice of `p`, which is all of the ball when its radius
/// does not exceed `|Im p|`.
pub fn laurent_round_trip(a: &qslice::rational::QRational, p: Quaternion, points: usize, seed: u64) -> f64 {
    use qslice::experiments::{random_in_ball, rng};
    use qslice::laurent::{eval_truncated, expand_rational};
    use qslice::slice::{sigma, tau, SliceFrame};
    let e = expand_rational(a, p, 80).unwrap();
    let reach = 0.8 * e.r2.min(2.0);
    let frame = SliceFrame::new(e.unit);
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    let mut taken = 0;
    for attempt in 0.. {
        assert!(attempt < 1_000_000, "no admissible samples around {p}");
        if taken == points {
            break;
        }
        let w = random_in_ball(&mut r, reach);
        let q = if attempt % 2 == 0 || reach <= p.im_norm() {
            p + frame.embed(num_complex::Complex64::new(w.re(), w.components()[1]))
        } else {
            p + w
        };
        if sigma(q, p) > reach || tau(q, p) <= 1e-6 {
            continue;
        }
        let Ok(exact) = a.eval(q) else { continue };
        let (approx, inside) = eval_truncated(&e, q).unwrap();
        assert!(inside, "{q} outside the shell of {p}");
        worst = worst.max(approx.dist(&exact) / a.eval_scale(q));
        taken += 1;
    }
    worst
}

/// Worst difference between trapezoid (256 nodes) and direct coefficients
/// for `|n| <= 10`, relative to the Cauchy bound `max |f| R^{-n}` on the
/// circle. The radius is half the distance to the nearest other root of the
/// denominator on the slice, so the circle avoids removable points too.
pub fn contour_vs_direct(a: &qslice::rational::QRational, p: Quaternion) -> f64 {
    use num_complex::Complex64;
    use qslice::laurent::{contour_coefficients, expand_rational};
    let e = expand_rational(a, p, 20).unwrap();
    let frame = qslice::slice::SliceFrame::new(e.unit);
    let zp = frame.project(p);
    let nearest = qslice::zeros::real_poly_roots(a.den())
        .unwrap()
        .all()
        .into_iter()
        .map(|(z, _)| (z - zp).norm())
        .filter(|d| *d > 1e-9)
        .fold(4.0, f64::min);
    let radius = 0.5 * nearest;
    let c = contour_coefficients(|q| a.eval(q), p, e.unit, radius, -10..=10, 256).unwrap();
    let peak = (0..256)
        .map(|k| {
            let w = Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / 256.0);
            a.eval(frame.embed(zp + w)).unwrap().norm()
        })
        .fold(0.0, f64::max);
    (-10..=10i64).zip(&c).map(|(n, cn)| cn.dist(&e.coeff(n)) / (peak * radius.powi(-n as i32))).fold(0.0, f64::max)
}
