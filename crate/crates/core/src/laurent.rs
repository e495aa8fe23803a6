//! Laurent expansions `sum (q-p)^{*n} a_n` about an arbitrary quaternion `p`.
//!
//! Everything is computed on the slice `C_I` through `p`: a function there
//! splits as `F + G J` with `F, G` holomorphic, the coefficients are
//! `a_n = alpha_n + beta_n J`, and off-slice values come back through the
//! Representation Formula.

use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomial::complex;
use crate::quaternion::{slice_unit, Quaternion, UnitImaginary};
use crate::rational::QRational;
use crate::slice::{co_sliced, represent, sigma, tau, SliceFrame};
use crate::zeros::real_poly_roots;

pub const DEFAULT_NMAX: usize = 80;
pub const CONTOUR_NODES: usize = 256;
pub const CONTOUR_MAX_NODES: usize = 4096;
pub const CONTOUR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentExpansion {
    pub center: Quaternion,
    pub unit: UnitImaginary,
    pub n_min: i64,
    /// `coeffs[k]` is `a_{n_min + k}`.
    pub coeffs: Vec<Quaternion>,
    pub exact_negative_tail: bool,
    pub r1: f64,
    pub r2: f64,
    pub r1_exact: bool,
    pub r2_exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    Removable,
    Pole(usize),
    /// Finite data cannot certify an essential singularity; only that no
    /// pole of order up to the bound explains the coefficients.
    NoPoleOfOrderLE(usize),
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Singularity::Removable => f.write_str("removable"),
            Singularity::Pole(m) => write!(f, "pole({m})"),
            Singularity::NoPoleOfOrderLE(b) => write!(f, "no_pole_of_order_le({b})"),
        }
    }
}

impl LaurentExpansion {
    /// An expansion from explicit coefficients with unknown tails; radii are estimated.
    pub fn from_coefficients(center: Quaternion, n_min: i64, coeffs: Vec<Quaternion>) -> Self {
        let unit = slice_unit(center).unwrap_or(UnitImaginary::I);
        let mut e = LaurentExpansion {
            center,
            unit,
            n_min,
            coeffs,
            exact_negative_tail: false,
            r1: 0.0,
            r2: f64::INFINITY,
            r1_exact: false,
            r2_exact: false,
        };
        let (r1, r2) = radii(&e);
        e.r1 = r1;
        e.r2 = r2;
        e
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Quaternion {
        if n < self.n_min {
            return Quaternion::ZERO;
        }
        self.coeffs.get((n - self.n_min) as usize).copied().unwrap_or_default()
    }

    /// Membership in the convergence shell `{tau > R1, sigma < R2}`.
    pub fn in_region(&self, q: Quaternion) -> bool {
        tau(q, self.center) > self.r1 && sigma(q, self.center) < self.r2
    }
}

fn split_coeffs(frame: &SliceFrame, c: &[Quaternion]) -> (Vec<Complex64>, Vec<Complex64>) {
    c.iter().map(|a| frame.split(*a)).unzip()
}

/// Expansion of a rational at `p` up to `a_{n_max}`; the principal part is exact.
pub fn expand_rational(a: &QRational, p: Quaternion, n_max: usize) -> Result<LaurentExpansion> {
    let frame = SliceFrame::through(p);
    let zp = frame.project(p);
    let mut den = a.den().to_complex();
    let (mut n1, mut n2) = split_coeffs(&frame, a.num().coeffs());
    let mut r2 = f64::INFINITY;
    if a.den().degree() > Some(0) {
        let mut roots = real_poly_roots(a.den())?.all();
        roots.sort_by(|x, y| (x.0 - zp).norm().total_cmp(&(y.0 - zp).norm()));
        // When p is itself a root, the nearest computed root is p up to rounding.
        let own = usize::from(complex::valuation(&den, zp) > 0);
        for (z, mult) in roots.into_iter().skip(own) {
            // Cancel the slice zeros of the numerator against the denominator,
            // so the Taylor part sees only genuine singularities.
            let k = complex::split_valuation(&n1, &n2, z).min(mult);
            for _ in 0..k {
                n1 = complex::deflate(&n1, z);
                n2 = complex::deflate(&n2, z);
                den = complex::deflate(&den, z);
            }
            if k < mult {
                r2 = r2.min((z - zp).norm());
            }
        }
    }
    let v = complex::valuation(&den, zp);
    let td = complex::taylor_shift(&den, zp);
    let len = n_max + v + 1;
    let s1 = complex::series_div(&complex::taylor_shift(&n1, zp), &td[v..], len);
    let s2 = complex::series_div(&complex::taylor_shift(&n2, zp), &td[v..], len);
    // Leading numerator terms that cancel the pole are exact zeros.
    let vn = complex::split_valuation(&n1, &n2, zp).min(v);
    let ord = v - vn;
    let coeffs: Vec<Quaternion> = (vn..len).map(|k| frame.combine(s1[k], s2[k])).collect();
    Ok(LaurentExpansion {
        center: p,
        unit: frame.i,
        n_min: -(ord as i64),
        coeffs,
        exact_negative_tail: true,
        r1: 0.0,
        r2,
        r1_exact: true,
        r2_exact: true,
    })
}

/// Value at `q` of `(q-p)^{*n}`, or of the regular reciprocal power for `n < 0`.
pub fn star_power_value(p: Quaternion, n: i64, q: Quaternion) -> Result<Quaternion> {
    if n == 0 {
        return Ok(Quaternion::ONE);
    }
    let pole = || Error::PoleEvaluation(format!("(q-p)^(*{n}) at q = {q} on the sphere of p = {p}"));
    let exp = i32::try_from(n).map_err(|_| Error::InvalidArgument(format!("exponent {n} out of range")))?;
    if co_sliced(q, p) {
        return (q - p).powi(exp).map_err(|_| pole());
    }
    let i = slice_unit(p)?;
    let j = slice_unit(q)?;
    let z = Quaternion::real(q.re()) + i.q() * q.im_norm();
    let vz = (z - p).powi(exp).map_err(|_| pole())?;
    let vzbar = (z.conj() - p).powi(exp).map_err(|_| pole())?;
    Ok(represent(vz, vzbar, i, j))
}

/// `sum_n w^n a_n` for `w` in the slice of the centre.
fn slice_sum(e: &LaurentExpansion, w: Quaternion) -> Result<Quaternion> {
    let mut pos = Quaternion::ZERO;
    for n in (0..=e.n_max()).rev() {
        pos = w * pos + e.coeff(n);
    }
    if e.n_min >= 0 {
        return Ok(pos);
    }
    let u = w.inverse().map_err(|_| Error::PoleEvaluation(format!("at the centre {}", e.center)))?;
    let mut neg = Quaternion::ZERO;
    for n in e.n_min..0 {
        neg = u * (neg + e.coeff(n));
    }
    Ok(pos + neg)
}

/// Partial sum `sum (q-p)^{*n} a_n` over the stored coefficients, and
/// whether `q` lies in the convergence shell. Off the slice of `p` the two
/// slice sums at `z, zbar` are combined once rather than term by term.
pub fn eval_truncated(e: &LaurentExpansion, q: Quaternion) -> Result<(Quaternion, bool)> {
    let p = e.center;
    let inside = e.in_region(q);
    if co_sliced(q, p) {
        return Ok((slice_sum(e, q - p)?, inside));
    }
    let i = slice_unit(p)?;
    let j = slice_unit(q)?;
    let z = Quaternion::real(q.re()) + i.q() * q.im_norm();
    let pole = |_| Error::PoleEvaluation(format!("{q} lies on the sphere of the centre {p}"));
    let vz = slice_sum(e, z - p).map_err(pole)?;
    let vzbar = slice_sum(e, z.conj() - p).map_err(pole)?;
    Ok((represent(vz, vzbar, i, j), inside))
}

/// `limsup |c_m|^{1/m}` over the last `max(8, len/4)` entries of `(m, |c_m|)`.
fn root_test(terms: &[(usize, f64)]) -> f64 {
    let window = 8.max(terms.len() / 4).min(terms.len());
    terms[terms.len() - window..]
        .iter()
        .filter(|(m, _)| *m > 0)
        .map(|(m, c)| c.powf(1.0 / *m as f64))
        .fold(0.0, f64::max)
}

/// `(R1, R2)` from the root test. `R1 = 0` is exact for a finite principal part.
pub fn radii(e: &LaurentExpansion) -> (f64, f64) {
    let positive: Vec<(usize, f64)> =
        (0..=e.n_max().max(0)).filter(|n| *n >= e.n_min).map(|n| (n as usize, e.coeff(n).norm())).collect();
    let inv_r2 = if positive.is_empty() { 0.0 } else { root_test(&positive) };
    let r2 = if inv_r2 > 0.0 { 1.0 / inv_r2 } else { f64::INFINITY };
    let r1 = if e.exact_negative_tail || e.n_min >= 0 {
        0.0
    } else {
        let negative: Vec<(usize, f64)> = (1..=(-e.n_min) as usize).map(|m| (m, e.coeff(-(m as i64)).norm())).collect();
        root_test(&negative)
    };
    (r1, r2)
}

/// `a_n = (1/2 pi I) \oint (s-p)^{-n-1} f(s) ds` over `p + R e^{I theta}`
/// by the `m`-point trapezoid rule, on the two split components.
pub fn contour_coefficients<F>(
    f: F,
    p: Quaternion,
    unit: UnitImaginary,
    r: f64,
    nrange: RangeInclusive<i64>,
    m: usize,
) -> Result<Vec<Quaternion>>
where
    F: Fn(Quaternion) -> Result<Quaternion>,
{
    if m < 16 {
        return Err(Error::InvalidArgument(format!("at least 16 quadrature nodes required, got {m}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("contour radius {r} must be positive")));
    }
    let frame = SliceFrame::new(unit);
    let zp = frame.project(p);
    if (frame.embed(zp) - p).norm() > 1e-12 * (1.0 + p.norm()) {
        return Err(Error::InvalidArgument(format!("center {p} is not on the slice of {unit}")));
    }
    let mut values = Vec::with_capacity(m);
    for k in 0..m {
        let w = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        values.push((w, frame.split(f(frame.embed(zp + w))?)));
    }
    Ok(nrange
        .map(|n| {
            let (mut sf, mut sg) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for (w, (fv, gv)) in &values {
                let weight = w.powi(-(n as i32));
                sf += weight * fv;
                sg += weight * gv;
            }
            frame.combine(sf / m as f64, sg / m as f64)
        })
        .collect())
}

/// Doubles the node count from 256 until successive results agree to
/// `1e-9` (relative to the largest coefficient) or 4096 nodes are used.
pub fn contour_coefficients_adaptive<F>(
    f: F,
    p: Quaternion,
    unit: UnitImaginary,
    r: f64,
    nrange: RangeInclusive<i64>,
) -> Result<Vec<Quaternion>>
where
    F: Fn(Quaternion) -> Result<Quaternion>,
{
    let mut m = CONTOUR_NODES;
    let mut prev = contour_coefficients(&f, p, unit, r, nrange.clone(), m)?;
    while m < CONTOUR_MAX_NODES {
        m *= 2;
        let next = contour_coefficients(&f, p, unit, r, nrange.clone(), m)?;
        let scale = next.iter().fold(1.0f64, |s, a| s.max(a.norm()));
        let diff = prev.iter().zip(&next).fold(0.0f64, |d, (a, b)| d.max(a.dist(b)));
        prev = next;
        if diff <= CONTOUR_TOL * scale {
            break;
        }
    }
    Ok(prev)
}

pub fn classify(e: &LaurentExpansion) -> Singularity {
    if e.exact_negative_tail {
        if e.n_min < 0 {
            Singularity::Pole((-e.n_min) as usize)
        } else {
            Singularity::Removable
        }
    } else {
        Singularity::NoPoleOfOrderLE(e.n_min.unsigned_abs() as usize)
    }
}
