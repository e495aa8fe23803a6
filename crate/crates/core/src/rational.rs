//! Regular quotients `D^{-1} N` with a real monic denominator.
//!
//! Any `*`-quotient `f^{-*} * g` equals `(f^s)^{-1} (f^c * g)`, and real
//! denominators commute with everything, so the quotient ring reduces to
//! coefficient arithmetic on pairs `(N, D)`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{complex, QPolynomial, RealPolynomial};
use crate::quaternion::{Quaternion, Sphere, UnitImaginary};
use crate::slice::SliceFrame;
use crate::zeros::{classical_multiplicity, real_poly_roots, sphere_chain, sphere_classify, SphereZero};

/// `|D(q)|` below this fraction of its rounding scale counts as a pole.
pub const POLE_REL: f64 = 1e-12;
/// A real factor is cancelled when every component of the numerator
/// vanishes at its root to this fraction of the numerator's rounding scale.
pub const CANCEL_REL: f64 = 1e-9;

fn vanishes_at(num: &QPolynomial, z: num_complex::Complex64) -> bool {
    let parts = num.components();
    let scale = parts.iter().map(|c| c.eval_scale(z.norm())).fold(0.0, f64::max);
    parts.iter().all(|c| c.eval_complex(z).norm() <= CANCEL_REL * scale)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QRational {
    num: QPolynomial,
    den: RealPolynomial,
}

impl QRational {
    /// Builds `den^{-1} num`, cancels common real factors and makes the
    /// denominator monic.
    pub fn new(num: QPolynomial, den: RealPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(QRational::zero());
        }
        let mut num = num;
        let mut den = den;
        if den.degree() > Some(0) {
            for r in real_poly_roots(&den)?.roots {
                let factor = if r.is_real() { RealPolynomial::linear(r.x) } else { RealPolynomial::sphere(r.x, r.y) };
                for _ in 0..r.multiplicity {
                    if !vanishes_at(&num, r.z()) {
                        break;
                    }
                    num = QPolynomial::from_components(&num.components().map(|c| c.div_exact(&factor)));
                    den = den.div_exact(&factor);
                }
            }
            // clustered roots can defeat the factor-by-factor pass
            if den.degree() > Some(0) {
                if let Ok(q) = num.divide_real(&den) {
                    num = q;
                    den = RealPolynomial::one();
                }
            }
        }
        let (den, lead) = den.monic();
        Ok(QRational { num: num.scale(1.0 / lead), den })
    }

    pub fn zero() -> Self {
        QRational { num: QPolynomial::zero(), den: RealPolynomial::one() }
    }

    pub fn one() -> Self {
        QRational { num: QPolynomial::one(), den: RealPolynomial::one() }
    }

    pub fn from_poly(p: QPolynomial) -> Self {
        QRational { num: p, den: RealPolynomial::one() }
    }

    /// `f^{-*} * g = (f^s)^{-1} (f^c * g)`.
    pub fn from_quotient(f: &QPolynomial, g: &QPolynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        QRational::new(f.regular_conj().star_mul(g), f.symmetrize()?)
    }

    pub fn num(&self) -> &QPolynomial {
        &self.num
    }

    pub fn den(&self) -> &RealPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, b: &QRational) -> Result<Self> {
        let num = &self.num.mul_real(&b.den) + &b.num.mul_real(&self.den);
        QRational::new(num, &self.den * &b.den)
    }

    pub fn sub(&self, b: &QRational) -> Result<Self> {
        self.add(&b.neg())
    }

    pub fn neg(&self) -> Self {
        QRational { num: -&self.num, den: self.den.clone() }
    }

    pub fn star_mul(&self, b: &QRational) -> Result<Self> {
        QRational::new(self.num.star_mul(&b.num), &self.den * &b.den)
    }

    /// `(D^{-1} N)^{-*} = (N^s)^{-1} D N^c`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        QRational::new(self.num.regular_conj().mul_real(&self.den), self.num.symmetrize()?)
    }

    pub fn star_pow(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.reciprocal()? } else { self.clone() };
        let mut acc = QRational::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.star_mul(&base)?;
        }
        Ok(acc)
    }

    pub fn regular_conj(&self) -> Self {
        QRational { num: self.num.regular_conj(), den: self.den.clone() }
    }

    pub fn symmetrize(&self) -> Result<Self> {
        QRational::new(QPolynomial::from_real(&self.num.symmetrize()?), &self.den * &self.den)
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let d = self.den.eval_quat(q);
        if d.norm() <= POLE_REL * self.den.eval_scale(q.norm()) {
            return Err(Error::PoleEvaluation(format!("denominator vanishes at {q}")));
        }
        Ok(d.inverse()? * self.num.eval(q))
    }

    /// Rounding scale of `eval` at `q`.
    pub fn eval_scale(&self, q: Quaternion) -> f64 {
        let d = self.den.eval_quat(q).norm();
        self.num.eval_scale(q) / d.max(f64::MIN_POSITIVE)
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "inv({})*({})", self.den, self.num)
        }
    }
}

/// `T_f(q) = f^c(q)^{-1} q f^c(q)`, a point of the sphere of `q`.
pub fn transport(f: &QPolynomial, q: Quaternion) -> Result<Quaternion> {
    let fc = f.regular_conj();
    let v = fc.eval(q);
    if v.norm() <= POLE_REL * fc.eval_scale(q) {
        return Err(Error::PoleEvaluation(format!("f^c vanishes at {q}")));
    }
    let inv = v.inverse()?;
    Ok(inv * q * v)
}

/// Order of `a` at `p`: the denominator's valuation minus the least
/// valuation of the two slice components of the numerator, floored at 0.
pub fn point_order(a: &QRational, p: Quaternion) -> usize {
    let frame = SliceFrame::through(p);
    let z0 = frame.project(p);
    let vd = complex::valuation(&a.den.to_complex(), z0);
    if vd == 0 {
        return 0;
    }
    let (n1, n2): (Vec<_>, Vec<_>) = a.num.coeffs().iter().map(|c| frame.split(*c)).unzip();
    let vn = complex::split_valuation(&n1, &n2, z0);
    vd.saturating_sub(vn)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Removable,
    Pole(usize),
    /// Order 0 on a sphere of poles: bounded on the slice, unbounded nearby.
    Order0Nonremovable,
}

pub fn point_status(a: &QRational, p: Quaternion) -> PointStatus {
    let s = crate::quaternion::sphere_of(p);
    let z = num_complex::Complex64::new(s.x, s.y);
    if complex::valuation(&a.den.to_complex(), z) == 0 {
        return PointStatus::Removable;
    }
    match point_order(a, p) {
        0 => PointStatus::Order0Nonremovable,
        k => PointStatus::Pole(k),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoles {
    pub sphere: Sphere,
    pub generic_order: usize,
    /// The single point of lesser order, if any.
    pub exceptional: Option<(Quaternion, usize)>,
    pub spherical_order: usize,
    /// First point of the numerator's linear chain and the chain length.
    pub isolated: Option<(Quaternion, usize)>,
    /// Orders at `x + iy` and `x - iy`.
    pub order_at_i: usize,
    pub order_at_conj: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularityReport {
    pub spheres: Vec<SpherePoles>,
}

#[derive(Serialize)]
struct ExceptionalJson {
    point: String,
    order: usize,
}

#[derive(Serialize)]
struct SphereJson {
    x: f64,
    y: f64,
    generic_order: usize,
    exceptional: Option<ExceptionalJson>,
    spherical_order: usize,
}

#[derive(Serialize)]
struct ReportJson {
    spheres: Vec<SphereJson>,
}

impl SingularityReport {
    pub fn to_json(&self) -> serde_json::Value {
        let r = ReportJson {
            spheres: self
                .spheres
                .iter()
                .map(|s| SphereJson {
                    x: s.sphere.x,
                    y: s.sphere.y,
                    generic_order: s.generic_order,
                    exceptional: s.exceptional.map(|(p, k)| ExceptionalJson { point: p.to_string(), order: k }),
                    spherical_order: s.spherical_order,
                })
                .collect(),
        };
        serde_json::to_value(r).expect("report serializes")
    }
}

fn analyze_sphere(a: &QRational, s: Sphere, vd: usize) -> Result<SpherePoles> {
    if s.is_degenerate() {
        // (q-x)^{-v} = [(q-x)^2]^{-ceil(v/2)} (q-x)^{v mod 2}
        let p = Quaternion::real(s.x);
        let order = point_order(a, p);
        let half = order.div_ceil(2);
        return Ok(SpherePoles {
            sphere: s,
            generic_order: order,
            exceptional: None,
            spherical_order: 2 * half,
            isolated: (order % 2 == 1).then_some((p, 1)),
            order_at_i: order,
            order_at_conj: order,
        });
    }
    let p = s.point(UnitImaginary::I);
    let order_at_i = point_order(a, p);
    let order_at_conj = point_order(a, p.conj());
    let exceptional = match sphere_classify(&a.num, s) {
        SphereZero::Isolated(pe) => {
            let k = vd.saturating_sub(classical_multiplicity(&a.num, pe));
            Some((pe, k))
        }
        SphereZero::NoZero => None,
        SphereZero::WholeSphere => {
            return Err(Error::NoConvergence("numerator shares a sphere factor with the denominator".into()))
        }
    };
    let isolated = if exceptional.is_some() {
        let (_, chain, _) = sphere_chain(&a.num, s)?;
        chain.first().map(|p1| (*p1, chain.len()))
    } else {
        None
    };
    Ok(SpherePoles {
        sphere: s,
        generic_order: vd,
        exceptional,
        spherical_order: 2 * vd,
        isolated,
        order_at_i,
        order_at_conj,
    })
}

pub fn analyze_poles(a: &QRational) -> Result<SingularityReport> {
    if a.den.degree().unwrap_or(0) == 0 || a.is_zero() {
        return Ok(SingularityReport::default());
    }
    let roots = real_poly_roots(&a.den)?;
    let spheres = roots
        .roots
        .par_iter()
        .map(|r| analyze_sphere(a, Sphere::new(r.x, r.y), r.multiplicity))
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularityReport { spheres })
}

/// `a = [(q-x)^2 + y^2]^{-n} (q-p)^{*k} * g` with `g` free of poles on the
/// sphere; returns `(n, p, k, g)`.
pub fn pole_factorization(a: &QRational, poles: &SpherePoles) -> Result<(usize, Quaternion, usize, QRational)> {
    let s = poles.sphere;
    if s.is_degenerate() {
        return Err(Error::InvalidArgument("pole factorization needs a nondegenerate sphere".into()));
    }
    let n = poles.generic_order;
    let (p, m) = poles.exceptional.unwrap_or((s.point(UnitImaginary::I), n));
    let k = n - m;
    let quad = RealPolynomial::new(s.quadratic().to_vec());
    let lin = QPolynomial::linear(p).star_pow(k as u32);
    // g = (q-p)^{-*k} * sphere^n * a
    let inner = QRational::new(a.num.mul_real(&quad.pow(n as u32)), a.den.clone())?;
    let g = QRational::from_quotient(&lin, &QPolynomial::one())?.star_mul(&inner)?;
    Ok((n, p, k, g))
}

/// Largest `|a(q)|` over `count` points at distance `delta` from the
/// order-0 point `p`, each pushed off `p`'s sphere radially by `delta^3`.
/// Returns the maximiser, its norm, and the scaled threshold
/// `1e3 * (1 + |a|)` measured a distance `delta` along the slice.
pub fn unboundedness_witness(a: &QRational, p: Quaternion, delta: f64, count: usize) -> Result<(Quaternion, f64, f64)> {
    let unit = crate::quaternion::slice_unit(p)?;
    let frame = SliceFrame::new(unit);
    let (x, y) = (p.re(), p.im_norm());
    let r = y * (1.0 + delta.powi(3));
    let cos_phi = ((r * r + y * y - delta * delta) / (2.0 * r * y)).clamp(-1.0, 1.0);
    let sin_phi = (1.0 - cos_phi * cos_phi).sqrt();
    let mut best = (p, 0.0);
    for b in 0..count {
        let theta = 2.0 * std::f64::consts::PI * b as f64 / count as f64;
        let dir = unit.q() * cos_phi + (frame.j.q() * theta.cos() + frame.k() * theta.sin()) * sin_phi;
        let q = Quaternion::real(x) + dir * r;
        if let Ok(v) = a.eval(q) {
            if v.norm() > best.1 {
                best = (q, v.norm());
            }
        }
    }
    let along = a.eval(p + Quaternion::real(delta)).map(|v| v.norm()).unwrap_or(0.0);
    Ok((best.0, best.1, 1e3 * (1.0 + along)))
}
