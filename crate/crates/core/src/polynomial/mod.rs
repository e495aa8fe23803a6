//! Quaternionic polynomials `sum q^n a_n` (powers on the left, coefficients
//! on the right) and their `*`-algebra.
//!
//! Pointwise multiplication does not preserve regularity; the `*`-product
//! is the coefficient convolution `sum q^n sum_k a_k b_{n-k}`, with the
//! quaternion products taken in that order.

pub mod complex;
mod real;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

pub use real::RealPolynomial;

/// Leading coefficients with norm at most `TRIM_REL * (1 + max norm)` are dropped.
pub const TRIM_REL: f64 = 1e-13;
/// Relative bound on the imaginary residue tolerated in a symmetrization.
pub const SYMMETRIZATION_REL: f64 = 1e-9;
/// Relative remainder bound for exact real division.
pub const DIVISIBILITY_REL: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QPolynomial {
    coeffs: Vec<Quaternion>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Quaternion>) -> Self {
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let cut = TRIM_REL * (1.0 + max);
        while coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![Quaternion::ONE] }
    }

    pub fn constant(a: Quaternion) -> Self {
        QPolynomial::new(vec![a])
    }

    /// The identity `q`.
    pub fn var() -> Self {
        QPolynomial { coeffs: vec![Quaternion::ZERO, Quaternion::ONE] }
    }

    /// `q - p`.
    pub fn linear(p: Quaternion) -> Self {
        QPolynomial { coeffs: vec![-p, Quaternion::ONE] }
    }

    pub fn from_real(r: &RealPolynomial) -> Self {
        QPolynomial::new(r.coeffs().iter().map(|c| Quaternion::real(*c)).collect())
    }

    /// Reassembles a polynomial from its four real component polynomials.
    pub fn from_components(parts: &[RealPolynomial; 4]) -> Self {
        let n = parts.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
        QPolynomial::new(
            (0..n)
                .map(|k| Quaternion::new(parts[0].coeff(k), parts[1].coeff(k), parts[2].coeff(k), parts[3].coeff(k)))
                .collect(),
        )
    }

    pub fn components(&self) -> [RealPolynomial; 4] {
        let pick = |s: usize| RealPolynomial::new(self.coeffs.iter().map(|c| c.components()[s]).collect());
        [pick(0), pick(1), pick(2), pick(3)]
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every coefficient is real (the slice-preserving case).
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im_norm() == 0.0)
    }

    /// Largest coefficient norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn star_mul(&self, g: &QPolynomial) -> QPolynomial {
        if self.is_zero() || g.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![Quaternion::ZERO; self.coeffs.len() + g.coeffs.len() - 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            for (m, b) in g.coeffs.iter().enumerate() {
                out[k + m] += *a * *b;
            }
        }
        QPolynomial::new(out)
    }

    pub fn star_pow(&self, n: u32) -> QPolynomial {
        (0..n).fold(QPolynomial::one(), |acc, _| acc.star_mul(self))
    }

    /// Product with a real polynomial; real factors commute under `*`.
    pub fn mul_real(&self, r: &RealPolynomial) -> QPolynomial {
        if self.is_zero() || r.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![Quaternion::ZERO; self.coeffs.len() + r.coeffs().len() - 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            for (m, b) in r.coeffs().iter().enumerate() {
                out[k + m] += *a * *b;
            }
        }
        QPolynomial::new(out)
    }

    /// `f * c` for a constant `c`: each coefficient multiplied by `c` on the right.
    pub fn mul_const_right(&self, c: Quaternion) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|a| *a * c).collect())
    }

    /// `c * f` for a constant `c`.
    pub fn mul_const_left(&self, c: Quaternion) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|a| c * *a).collect())
    }

    pub fn scale(&self, s: f64) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|a| *a * s).collect())
    }

    /// `f^c = sum q^n conj(a_n)`.
    pub fn regular_conj(&self) -> QPolynomial {
        QPolynomial { coeffs: self.coeffs.iter().map(|a| a.conj()).collect() }
    }

    /// `f^s = f * f^c`, which has real coefficients.
    pub fn symmetrize(&self) -> Result<RealPolynomial> {
        let s = self.star_mul(&self.regular_conj());
        let f_norm = self.norm();
        let tol = SYMMETRIZATION_REL * (1.0 + f_norm * f_norm);
        let residual = s.coeffs.iter().fold(0.0f64, |m, c| m.max(c.im_norm()));
        if residual > tol {
            return Err(Error::SymmetrizationNotReal { residual });
        }
        Ok(RealPolynomial::new(s.coeffs.iter().map(|c| c.re()).collect()))
    }

    /// `f(q) = a_0 + q (a_1 + q (a_2 + ...))`.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        self.coeffs.iter().rev().fold(Quaternion::ZERO, |acc, a| q * acc + *a)
    }

    /// `sum |a_n| |q|^n`: the magnitude against which evaluation residuals are judged.
    pub fn eval_scale(&self, q: Quaternion) -> f64 {
        let r = q.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
    }

    /// `f = (q - p) * quotient + remainder`; the remainder equals `f(p)`.
    pub fn left_divide_linear(&self, p: Quaternion) -> (QPolynomial, Quaternion) {
        let n = self.coeffs.len();
        if n <= 1 {
            return (QPolynomial::zero(), self.coeff(0));
        }
        let mut b = vec![Quaternion::ZERO; n - 1];
        b[n - 2] = self.coeffs[n - 1];
        for k in (1..n - 1).rev() {
            b[k - 1] = self.coeffs[k] + p * b[k];
        }
        let rem = self.coeffs[0] + p * b[0];
        (QPolynomial::new(b), rem)
    }

    /// Exact division by a real polynomial, component by component. The
    /// residual `f - q d` is judged against the size of `f` and of `q d`.
    pub fn divide_real(&self, d: &RealPolynomial) -> Result<QPolynomial> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut worst = 0.0f64;
        let mut size = self.norm();
        let parts = self.components().map(|c| {
            let q = c.div_exact(d);
            let back = &q * d;
            size = size.max(q.norm() * d.norm());
            let n = c.coeffs().len().max(back.coeffs().len());
            worst = (0..n).fold(worst, |m, k| m.max((c.coeff(k) - back.coeff(k)).abs()));
            q
        });
        if worst > DIVISIBILITY_REL * size {
            return Err(Error::NotDivisible { remainder: worst });
        }
        Ok(QPolynomial::from_components(&parts))
    }

    /// Largest `n` with `f = (q - p)^{*n} * g`, by repeated left division.
    /// Returns `usize::MAX` for the zero polynomial.
    pub fn classical_multiplicity(&self, p: Quaternion, rel_tol: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let mut g = self.clone();
        let mut n = 0;
        while !g.is_zero() {
            let (quot, rem) = g.left_divide_linear(p);
            if rem.norm() > rel_tol * g.eval_scale(p).max(f64::MIN_POSITIVE) {
                break;
            }
            g = quot;
            n += 1;
        }
        n
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, o: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPolynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, o: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPolynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial { coeffs: self.coeffs.iter().map(|c| -*c).collect() }
    }
}

impl From<Quaternion> for QPolynomial {
    fn from(a: Quaternion) -> Self {
        QPolynomial::constant(a)
    }
}

impl fmt::Display for QPolynomial {
    /// Renders in the CLI expression syntax, e.g. `q^2 + q*(-1-i) + (2j)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Quaternion::ZERO {
                continue;
            }
            let power = match n {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{n}"),
            };
            let coef = c.to_string();
            let plain = c.im_norm() == 0.0 && c.re() > 0.0;
            parts.push(match (power.is_empty(), *c == Quaternion::ONE) {
                (true, _) if plain => coef,
                (true, _) => format!("({coef})"),
                (false, true) => power,
                (false, false) => format!("{power}*({coef})"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x0: f64, x1: f64, x2: f64, x3: f64) -> Quaternion {
        Quaternion::new(x0, x1, x2, x3)
    }

    #[test]
    fn star_product_examples() {
        let i = Quaternion::I;
        let j = Quaternion::J;
        let p = QPolynomial::linear(i).star_mul(&QPolynomial::linear(-i));
        assert_eq!(p.coeffs(), &[Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE]);
        // (q - I)*(q - J) = q^2 - q(I + J) + IJ
        let p = QPolynomial::linear(i).star_mul(&QPolynomial::linear(j));
        assert_eq!(p.coeffs(), &[i * j, -(i + j), Quaternion::ONE]);
        let f = QPolynomial::new(vec![q(1.0, 2.0, 0.0, 0.0), q(0.0, 0.0, -1.0, 3.0)]);
        assert_eq!(f.star_mul(&QPolynomial::one()), f);
    }

    #[test]
    fn conjugate_and_symmetrization() {
        let i = Quaternion::I;
        assert_eq!(QPolynomial::linear(i).regular_conj(), QPolynomial::linear(-i));
        let s = QPolynomial::linear(i).symmetrize().unwrap();
        assert_eq!(s.coeffs(), &[1.0, 0.0, 1.0]);
        // real f: f^s = f^2
        let r = RealPolynomial::new(vec![-2.0, 1.0, 3.0]);
        let s = QPolynomial::from_real(&r).symmetrize().unwrap();
        assert_eq!(s, &r * &r);
    }

    #[test]
    fn evaluation() {
        let sphere = QPolynomial::from_real(&RealPolynomial::sphere(0.0, 1.0));
        for u in [Quaternion::I, Quaternion::J, q(0.0, 0.6, 0.0, -0.8)] {
            assert!(sphere.eval(u).norm() < 1e-15);
        }
        let i = Quaternion::I;
        let j = Quaternion::J;
        let p = QPolynomial::linear(i).star_mul(&QPolynomial::linear(j));
        assert!(p.eval(i).norm() < 1e-15);
        // at J: J^2 - J(I+J) + IJ = IJ - JI
        assert!(p.eval(j).dist(&(i * j - j * i)) < 1e-15);
        let a = q(0.5, -1.0, 2.0, 0.25);
        assert_eq!(QPolynomial::constant(a).eval(q(3.0, 1.0, 1.0, 1.0)), a);
    }

    #[test]
    fn linear_division() {
        let sphere = QPolynomial::from_real(&RealPolynomial::sphere(0.0, 1.0));
        let (quot, rem) = sphere.left_divide_linear(Quaternion::I);
        assert_eq!(quot, QPolynomial::linear(-Quaternion::I));
        assert_eq!(rem, Quaternion::ZERO);
        let (quot, rem) = sphere.left_divide_linear(Quaternion::real(2.0));
        assert_eq!(quot, QPolynomial::linear(Quaternion::real(-2.0)));
        assert_eq!(rem, Quaternion::real(5.0));
        let f = QPolynomial::new(vec![q(1.0, 0.0, 2.0, 0.0), q(0.0, -1.0, 0.5, 0.0), q(2.0, 0.0, 0.0, 1.0)]);
        let p = q(0.3, 0.2, -0.7, 1.0);
        let (quot, rem) = f.left_divide_linear(p);
        let back = &QPolynomial::linear(p).star_mul(&quot) + &QPolynomial::constant(rem);
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!(a.dist(b) < 1e-14);
        }
        assert!(rem.dist(&f.eval(p)) < 1e-14);
    }

    #[test]
    fn real_division() {
        let sphere = RealPolynomial::sphere(0.0, 1.0);
        let f = QPolynomial::from_real(&sphere).star_mul(&QPolynomial::linear(Quaternion::J));
        let quot = f.divide_real(&sphere).unwrap();
        assert_eq!(quot, QPolynomial::linear(Quaternion::J));
        let g = QPolynomial::from_real(&sphere);
        assert!(matches!(g.divide_real(&RealPolynomial::sphere(0.0, 2f64.sqrt())), Err(Error::NotDivisible { .. })));
        assert_eq!(f.divide_real(&RealPolynomial::one()).unwrap(), f);
    }

    #[test]
    fn classical_multiplicity_on_sphere() {
        let sphere = QPolynomial::from_real(&RealPolynomial::sphere(0.0, 1.0));
        for u in [Quaternion::I, Quaternion::K, q(0.0, 0.0, 0.6, 0.8)] {
            assert_eq!(sphere.classical_multiplicity(u, 1e-8), 1);
        }
        // (q - i)*(q^2 + 1) = (q - i)*(q - i)*(q + i)
        let f = QPolynomial::linear(Quaternion::I).star_mul(&sphere);
        assert_eq!(f.classical_multiplicity(Quaternion::I, 1e-8), 2);
    }

    #[test]
    fn display_is_expression_syntax() {
        let f = QPolynomial::new(vec![q(0.0, 0.0, 2.0, 0.0), q(-1.0, -1.0, 0.0, 0.0), Quaternion::ONE]);
        assert_eq!(f.to_string(), "q^2 + q*(-1-i) + (2j)");
        assert_eq!(QPolynomial::from_real(&RealPolynomial::sphere(0.0, 1.0)).to_string(), "q^2 + 1");
    }
}
