//! Real-coefficient polynomials. These are exactly the slice-preserving
//! polynomials: they commute with every quaternionic polynomial under `*`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::quaternion::{fmt_scalar, Quaternion};

use super::TRIM_REL;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Ascending coefficients; trailing (leading-degree) negligible entries are trimmed.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let cut = TRIM_REL * (1.0 + max);
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        RealPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RealPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RealPolynomial { coeffs: vec![1.0] }
    }

    pub fn constant(c: f64) -> Self {
        RealPolynomial::new(vec![c])
    }

    /// `q - x`.
    pub fn linear(x: f64) -> Self {
        RealPolynomial { coeffs: vec![-x, 1.0] }
    }

    /// `(q - x)^2 + y^2`.
    pub fn sphere(x: f64, y: f64) -> Self {
        RealPolynomial { coeffs: vec![x * x + y * y, -2.0 * x, 1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Largest coefficient magnitude.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        RealPolynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Monic rescaling together with the leading coefficient that was divided out.
    pub fn monic(&self) -> (Self, f64) {
        let lead = self.leading();
        if lead == 0.0 {
            return (self.clone(), 0.0);
        }
        let mut coeffs: Vec<f64> = self.coeffs.iter().map(|c| c / lead).collect();
        if let Some(last) = coeffs.last_mut() {
            *last = 1.0;
        }
        (RealPolynomial { coeffs }, lead)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(RealPolynomial::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Real coefficients commute with `q`, so plain Horner is exact.
    pub fn eval_quat(&self, q: Quaternion) -> Quaternion {
        self.coeffs.iter().rev().fold(Quaternion::ZERO, |acc, c| acc * q + Quaternion::real(*c))
    }

    /// `sum |c_n| r^n`, the natural rounding scale of an evaluation at modulus `r`.
    pub fn eval_scale(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    }

    pub fn derivative(&self) -> Self {
        RealPolynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(n, c)| n as f64 * c).collect())
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect()
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    /// The remainder is returned untrimmed-by-threshold so callers can judge it.
    pub fn div_rem(&self, d: &RealPolynomial) -> (RealPolynomial, Vec<f64>) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RealPolynomial::zero(), rem);
        }
        let mut quot = vec![0.0; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (m, dc) in d.coeffs.iter().enumerate() {
                rem[k + m] -= c * dc;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd);
        (RealPolynomial::new(quot), rem)
    }

    /// Quotient by a known exact divisor, discarding the remainder. Divides
    /// from the constant term up when the divisor's roots lie outside the
    /// unit disc (`|d_0| > |d_lead|`), which keeps the deflation stable.
    pub fn div_exact(&self, d: &RealPolynomial) -> RealPolynomial {
        let d0 = d.coeff(0);
        if d0.abs() <= d.leading().abs() {
            return self.div_rem(d).0;
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return RealPolynomial::zero();
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; rem.len() - dd];
        for k in 0..quot.len() {
            let c = rem[k] / d0;
            quot[k] = c;
            for (m, dc) in d.coeffs.iter().enumerate() {
                rem[k + m] -= c * dc;
            }
        }
        RealPolynomial::new(quot)
    }
}

impl Add for &RealPolynomial {
    type Output = RealPolynomial;
    fn add(self, o: &RealPolynomial) -> RealPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &RealPolynomial {
    type Output = RealPolynomial;
    fn sub(self, o: &RealPolynomial) -> RealPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPolynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &RealPolynomial {
    type Output = RealPolynomial;
    fn neg(self) -> RealPolynomial {
        RealPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RealPolynomial {
    type Output = RealPolynomial;
    fn mul(self, o: &RealPolynomial) -> RealPolynomial {
        if self.is_zero() || o.is_zero() {
            return RealPolynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            for (b, y) in o.coeffs.iter().enumerate() {
                out[a + b] += x * y;
            }
        }
        RealPolynomial::new(out)
    }
}

impl fmt::Display for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match n {
                0 => f.write_str(&fmt_scalar(a))?,
                _ => {
                    if a != 1.0 {
                        write!(f, "{}*", fmt_scalar(a))?;
                    }
                    if n == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
