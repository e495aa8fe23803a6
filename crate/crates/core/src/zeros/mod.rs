//! Zero sets of quaternionic polynomials.
//!
//! Every zero lies on a sphere `x + yS` determined by a root of the
//! symmetrization `f^s`. On such a sphere `f` either vanishes identically
//! or has a single zero, so the sphere is either stripped as a real factor
//! `((q-x)^2 + y^2)^m` or peeled one linear factor `(q - p_i)` at a time.

mod roots;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::{complex, QPolynomial, RealPolynomial};
use crate::quaternion::{Quaternion, Sphere, UnitImaginary};
use crate::slice::SliceFrame;

pub use roots::{real_poly_roots, ComplexRoot, ComplexRootSet, CLUSTER_REL, MAX_ITER, RESIDUAL_REL};

/// Relative tolerance for deciding that a value vanishes.
pub const ZERO_REL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SphereZero {
    NoZero,
    WholeSphere,
    Isolated(Quaternion),
}

/// Decides how `f` vanishes on `s` from its values at `x + iy` and `x - iy`.
pub fn sphere_classify(f: &QPolynomial, s: Sphere) -> SphereZero {
    if f.is_zero() {
        return SphereZero::WholeSphere;
    }
    if s.is_degenerate() {
        let p = Quaternion::real(s.x);
        return if f.eval(p).norm() <= ZERO_REL * f.eval_scale(p) {
            SphereZero::Isolated(p)
        } else {
            SphereZero::NoZero
        };
    }
    let i = Quaternion::I;
    let z = s.point(UnitImaginary::I);
    let zbar = z.conj();
    let scale = f.eval_scale(z);
    let tol = ZERO_REL * scale;
    let (fz, fzbar) = (f.eval(z), f.eval(zbar));
    let a = fz + fzbar;
    let b = fzbar - fz;
    if a.norm() <= tol && b.norm() <= tol {
        return SphereZero::WholeSphere;
    }
    if b.norm() <= tol {
        return SphereZero::NoZero;
    }
    // f(x + Jy) = (A + J I B) / 2 vanishes for J = -A (I B)^{-1}.
    let Ok(ib_inv) = (i * b).inverse() else {
        return SphereZero::NoZero;
    };
    let j = -(a * ib_inv);
    let Ok(unit) = UnitImaginary::with_tolerance(j, ZERO_REL) else {
        return SphereZero::NoZero;
    };
    let Ok(unit) = UnitImaginary::normalize(unit.q()) else {
        return SphereZero::NoZero;
    };
    let p = s.point(unit);
    if f.eval(p).norm() <= tol {
        SphereZero::Isolated(p)
    } else {
        SphereZero::NoZero
    }
}

/// Largest `n` with `f = (q - p)^{*n} * g`: the least valuation at `p` of
/// the two complex components of `f` on the slice through `p`.
pub fn classical_multiplicity(f: &QPolynomial, p: Quaternion) -> usize {
    let frame = SliceFrame::through(p);
    let (fa, fb): (Vec<_>, Vec<_>) = f.coeffs().iter().map(|c| frame.split(*c)).unzip();
    let z0 = frame.project(p);
    complex::split_valuation(&fa, &fb, z0)
}

/// Spherical exponent `m` and linear chain `p_1, .., p_n` of `f` on `s`,
/// together with the cofactor `g` in `f = s^m (q-p_1)*...*(q-p_n)*g`.
pub fn sphere_chain(f: &QPolynomial, s: Sphere) -> Result<(usize, Vec<Quaternion>, QPolynomial)> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    let quad = RealPolynomial::new(s.quadratic().to_vec());
    let mut g = f.clone();
    let mut m = 0;
    while g.degree().unwrap_or(0) >= 2 {
        match g.divide_real(&quad) {
            Ok(h) => {
                g = h;
                m += 1;
            }
            Err(_) => break,
        }
    }
    let mut chain = Vec::new();
    loop {
        match sphere_classify(&g, s) {
            SphereZero::NoZero => break,
            SphereZero::WholeSphere => {
                return Err(Error::NoConvergence(format!(
                    "cofactor still vanishes on the sphere ({}, {}) after stripping",
                    s.x, s.y
                )))
            }
            SphereZero::Isolated(p) => {
                if g.degree().unwrap_or(0) == 0 {
                    return Err(Error::NoConvergence("constant cofactor reported a zero".into()));
                }
                g = g.left_divide_linear(p).0;
                chain.push(p);
            }
        }
    }
    Ok((m, chain, g))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalZero {
    pub sphere: Sphere,
    /// Even: twice the exponent of the stripped real factor.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedZero {
    pub point: Quaternion,
    pub classical: usize,
    pub isolated: usize,
    pub chain: Vec<Quaternion>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroReport {
    pub spherical: Vec<SphericalZero>,
    pub isolated: Vec<IsolatedZero>,
}

#[derive(Serialize)]
struct SphericalJson {
    x: f64,
    y: f64,
    mult: usize,
}

#[derive(Serialize)]
struct IsolatedJson {
    point: String,
    classical: usize,
    isolated: usize,
}

#[derive(Serialize)]
struct ReportJson {
    spherical: Vec<SphericalJson>,
    isolated: Vec<IsolatedJson>,
}

impl ZeroReport {
    pub fn to_json(&self) -> serde_json::Value {
        let r = ReportJson {
            spherical: self
                .spherical
                .iter()
                .map(|s| SphericalJson { x: s.sphere.x, y: s.sphere.y, mult: s.multiplicity })
                .collect(),
            isolated: self
                .isolated
                .iter()
                .map(|z| IsolatedJson { point: z.point.to_string(), classical: z.classical, isolated: z.isolated })
                .collect(),
        };
        serde_json::to_value(r).expect("report serializes")
    }

    /// Spherical plus isolated multiplicities; equals the degree of `f`.
    pub fn degree_count(&self) -> usize {
        self.spherical.iter().map(|s| s.multiplicity).sum::<usize>()
            + self.isolated.iter().map(|z| z.isolated).sum::<usize>()
    }
}

/// Spheres carrying roots of `f^s`, with the multiplicity of `x + iy` as a root.
fn candidate_spheres(f: &QPolynomial) -> Result<Vec<(Sphere, usize)>> {
    let fs = f.symmetrize()?;
    Ok(real_poly_roots(&fs)?.roots.iter().map(|r| (Sphere::new(r.x, r.y), r.multiplicity)).collect())
}

pub fn analyze_zeros(f: &QPolynomial) -> Result<ZeroReport> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial vanishes everywhere".into()));
    }
    let spheres = candidate_spheres(f)?;
    let per_sphere: Vec<Result<(Option<SphericalZero>, Option<IsolatedZero>)>> = spheres
        .par_iter()
        .map(|&(s, mult)| {
            let (m, chain, _) = sphere_chain(f, s)?;
            // f^s picks up s^{2m} from the real factor and one s (or (q-x)^2) per chain entry.
            let expected = if s.is_degenerate() { 2 * (2 * m + chain.len()) } else { 2 * m + chain.len() };
            if expected != mult {
                return Err(Error::NoConvergence(format!(
                    "sphere ({}, {}): factorization accounts for {expected} of {mult} symmetrization roots",
                    s.x, s.y
                )));
            }
            let scale = f.eval_scale(s.point(UnitImaginary::I));
            let spherical = if m > 0 {
                for u in [UnitImaginary::I, UnitImaginary::J, UnitImaginary::K] {
                    if f.eval(s.point(u)).norm() > ZERO_REL * scale {
                        return Err(Error::NoConvergence("stripped sphere is not a zero sphere".into()));
                    }
                }
                Some(SphericalZero { sphere: s, multiplicity: 2 * m })
            } else {
                None
            };
            let isolated = match chain.first() {
                Some(&p) => {
                    if f.eval(p).norm() > ZERO_REL * f.eval_scale(p) {
                        return Err(Error::NoConvergence(format!("reported zero {p} fails verification")));
                    }
                    Some(IsolatedZero {
                        point: p,
                        classical: classical_multiplicity(f, p),
                        isolated: chain.len(),
                        chain,
                    })
                }
                None => None,
            };
            Ok((spherical, isolated))
        })
        .collect();
    let mut report = ZeroReport::default();
    for r in per_sphere {
        let (s, z) = r?;
        report.spherical.extend(s);
        report.isolated.extend(z);
    }
    Ok(report)
}

/// `f = real * (q - p_1) * ... * (q - p_n) * residual`, peeling the
/// spheres one after another so the product reproduces `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub real: RealPolynomial,
    pub chain: Vec<Quaternion>,
    pub residual: QPolynomial,
}

impl Factorization {
    pub fn reconstruct(&self) -> QPolynomial {
        let linear = self.chain.iter().fold(QPolynomial::one(), |acc, p| acc.star_mul(&QPolynomial::linear(*p)));
        linear.star_mul(&self.residual).mul_real(&self.real)
    }
}

pub fn factorize(f: &QPolynomial) -> Result<Factorization> {
    let spheres = candidate_spheres(f)?;
    let mut real = RealPolynomial::one();
    let mut chain = Vec::new();
    let mut g = f.clone();
    for (s, _) in spheres {
        let (m, links, rest) = sphere_chain(&g, s)?;
        real = &real * &RealPolynomial::new(s.quadratic().to_vec()).pow(m as u32);
        chain.extend(links);
        g = rest;
    }
    Ok(Factorization { real, chain, residual: g })
}
