//! The real algebra H of quaternions, its sphere of imaginary units and the
//! spheres `x + yS` that organise zero and pole sets.
//!
//! Scalars are `f64`; every predicate that needs a threshold takes it from
//! the constants below.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance on the unit-imaginary invariant (`Re I = 0`, `|I| = 1`).
pub const EPS_UNIT: f64 = 1e-12;
/// Tolerance for geometric membership tests (spheres, slices).
pub const EPS_GEOM: f64 = 1e-10;

/// `x0 + x1 i + x2 j + x3 k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    /// Checked constructor; rejects NaN and infinities.
    pub fn try_new(x0: f64, x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let q = Quaternion::new(x0, x1, x2, x3);
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub const fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn re(&self) -> f64 {
        self.x0
    }

    /// Imaginary part as a quaternion with zero real part.
    pub fn im(&self) -> Quaternion {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    pub fn im_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sq(&self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(&self) -> f64 {
        // hypot-style scaling keeps tiny and huge values representable
        let m = self.x0.abs().max(self.x1.abs()).max(self.x2.abs()).max(self.x3.abs());
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        let s = Quaternion::new(self.x0 / m, self.x1 / m, self.x2 / m, self.x3 / m);
        m * s.norm_sq().sqrt()
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n)
    }

    /// Euclidean inner product on R^4.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    pub fn is_real(&self) -> bool {
        self.im_norm() <= EPS_UNIT
    }

    pub fn dist(&self, other: &Quaternion) -> f64 {
        (*self - *other).norm()
    }

    /// Integer power by repeated squaring (`n >= 0`), negative powers via the inverse.
    pub fn powi(&self, n: i32) -> Result<Quaternion> {
        if n < 0 {
            return self.inverse()?.powi(-n);
        }
        let mut base = *self;
        let mut acc = Quaternion::ONE;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn components(&self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn from_components(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product: `ij = k`, `jk = i`, `ki = j`.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.x0 / s, self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

/// Shortest round-trip rendering of a scalar, switching to exponent form
/// for very small or very large magnitudes. Negative zero prints as `0`.
pub(crate) fn fmt_scalar(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{}", x)
    } else {
        format!("{:e}", x)
    }
}

impl fmt::Display for Quaternion {
    /// Text form `a±bi±cj±dk`, zero terms omitted, `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if self.x0 != 0.0 {
            out.push_str(&fmt_scalar(self.x0));
        }
        for (c, unit) in [(self.x1, 'i'), (self.x2, 'j'), (self.x3, 'k')] {
            if c == 0.0 {
                continue;
            }
            let body = if c.abs() == 1.0 { String::new() } else { fmt_scalar(c.abs()) };
            if c < 0.0 {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
            out.push(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Scans an unsigned decimal number (optional fraction and exponent) at the
/// start of `s`; returns the byte length consumed.
pub(crate) fn scan_number(s: &[u8]) -> usize {
    let mut n = 0;
    while n < s.len() && s[n].is_ascii_digit() {
        n += 1;
    }
    if n < s.len() && s[n] == b'.' {
        n += 1;
        while n < s.len() && s[n].is_ascii_digit() {
            n += 1;
        }
    }
    let mantissa_digits = s[..n].iter().filter(|b| b.is_ascii_digit()).count();
    if mantissa_digits == 0 {
        return 0;
    }
    if n < s.len() && (s[n] == b'e' || s[n] == b'E') {
        let mut m = n + 1;
        if m < s.len() && (s[m] == b'+' || s[m] == b'-') {
            m += 1;
        }
        let start = m;
        while m < s.len() && s[m].is_ascii_digit() {
            m += 1;
        }
        if m > start {
            n = m;
        }
    }
    n
}

impl FromStr for Quaternion {
    type Err = Error;

    /// Parses `a±bi±cj±dk`; any term may be omitted, a bare unit means
    /// coefficient 1, whitespace is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut acc = [0.0f64; 4];
        let mut terms = 0;
        let skip_ws = |p: &mut usize| {
            while *p < bytes.len() && bytes[*p].is_ascii_whitespace() {
                *p += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let mut sign = 1.0;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -1.0;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if terms > 0 {
                return Err(Error::SyntaxError { offset: pos, message: "expected '+' or '-' between terms".into() });
            }
            let start = pos;
            let len = scan_number(&bytes[pos..]);
            let mut value = 1.0;
            if len > 0 {
                value = text[pos..pos + len]
                    .parse::<f64>()
                    .map_err(|e| Error::SyntaxError { offset: pos, message: e.to_string() })?;
                pos += len;
            }
            let slot = match bytes.get(pos) {
                Some(b'i') => Some(1),
                Some(b'j') => Some(2),
                Some(b'k') => Some(3),
                _ => None,
            };
            match slot {
                Some(s) => {
                    acc[s] += sign * value;
                    pos += 1;
                }
                None if len > 0 => acc[0] += sign * value,
                None => {
                    return Err(Error::SyntaxError {
                        offset: start,
                        message: "expected a number or one of i, j, k".into(),
                    })
                }
            }
            terms += 1;
        }
        if terms == 0 {
            return Err(Error::SyntaxError { offset: 0, message: "empty quaternion".into() });
        }
        Quaternion::try_new(acc[0], acc[1], acc[2], acc[3])
    }
}

/// An element of the 2-sphere `S = {q : q^2 = -1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitImaginary(Quaternion);

impl UnitImaginary {
    pub const I: UnitImaginary = UnitImaginary(Quaternion::I);
    pub const J: UnitImaginary = UnitImaginary(Quaternion::J);
    pub const K: UnitImaginary = UnitImaginary(Quaternion::K);

    /// Accepts `q` only if it already satisfies the invariant within [`EPS_UNIT`].
    pub fn new(q: Quaternion) -> Result<Self> {
        Self::with_tolerance(q, EPS_UNIT)
    }

    pub fn with_tolerance(q: Quaternion, tol: f64) -> Result<Self> {
        if q.is_finite() && q.re().abs() <= tol && (q.norm() - 1.0).abs() <= tol {
            Ok(UnitImaginary(q))
        } else {
            Err(Error::NotUnitImaginary(q.to_string()))
        }
    }

    /// Direction of the imaginary part of `q`, rescaled to unit length.
    pub fn normalize(q: Quaternion) -> Result<Self> {
        let n = q.im_norm();
        if n <= EPS_UNIT || !n.is_finite() {
            return Err(Error::RealPointAmbiguous(q.to_string()));
        }
        Ok(UnitImaginary(q.im() / n))
    }

    pub fn q(&self) -> Quaternion {
        self.0
    }
}

impl Neg for UnitImaginary {
    type Output = UnitImaginary;
    fn neg(self) -> UnitImaginary {
        UnitImaginary(-self.0)
    }
}

impl From<UnitImaginary> for Quaternion {
    fn from(u: UnitImaginary) -> Quaternion {
        u.0
    }
}

impl fmt::Display for UnitImaginary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Slice unit of a non-real quaternion: `q = Re q + I |Im q|`.
pub fn slice_unit(q: Quaternion) -> Result<UnitImaginary> {
    UnitImaginary::normalize(q)
}

/// The sphere `x + yS`; `y = 0` is the single real point `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sphere {
    pub x: f64,
    pub y: f64,
}

impl Sphere {
    pub fn new(x: f64, y: f64) -> Self {
        Sphere { x, y: y.abs() }
    }

    pub fn is_degenerate(&self) -> bool {
        self.y == 0.0
    }

    /// The point `x + I y` of the sphere.
    pub fn point(&self, unit: UnitImaginary) -> Quaternion {
        Quaternion::real(self.x) + unit.q() * self.y
    }

    /// Coefficients of `(q - x)^2 + y^2`, ascending.
    pub fn quadratic(&self) -> [f64; 3] {
        [self.x * self.x + self.y * self.y, -2.0 * self.x, 1.0]
    }
}

pub fn sphere_of(q: Quaternion) -> Sphere {
    Sphere { x: q.re(), y: q.im_norm() }
}

pub fn on_sphere(q: Quaternion, s: Sphere) -> bool {
    (q.re() - s.x).abs() <= EPS_GEOM && (q.im_norm() - s.y).abs() <= EPS_GEOM
}
