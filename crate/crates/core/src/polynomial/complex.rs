//! Helpers for complex polynomials (ascending coefficient slices). These
//! are the slice components `F`, `G` of a quaternionic function split as
//! `F + G J` on a complex line.

use num_complex::Complex64;

/// Relative threshold below which a Taylor coefficient counts as zero when
/// computing valuations.
pub const VALUATION_REL: f64 = 1e-8;

pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

/// Taylor coefficients at `z0`: `p(z0 + w) = sum t_k w^k`, by repeated
/// synthetic division.
pub fn taylor_shift(c: &[Complex64], z0: Complex64) -> Vec<Complex64> {
    let mut work = c.to_vec();
    let n = work.len();
    for k in 0..n {
        for m in (k..n - 1).rev() {
            let carry = work[m + 1] * z0;
            work[m] += carry;
        }
    }
    work
}

/// Taylor shift of `|c|` at `|z0|`; bounds the rounding error of [`taylor_shift`].
pub fn taylor_shift_abs(c: &[Complex64], r: f64) -> Vec<f64> {
    let mut work: Vec<f64> = c.iter().map(|a| a.norm()).collect();
    let n = work.len();
    for k in 0..n {
        for m in (k..n - 1).rev() {
            let carry = work[m + 1] * r;
            work[m] += carry;
        }
    }
    work
}

/// Multiplicity of `z0` as a root, `usize::MAX` for the zero polynomial.
pub fn valuation(c: &[Complex64], z0: Complex64) -> usize {
    let t = taylor_shift(c, z0);
    let s = taylor_shift_abs(c, z0.norm());
    let total = s.iter().fold(0.0f64, |m, x| m.max(*x));
    if total == 0.0 {
        return usize::MAX;
    }
    for (k, (tk, sk)) in t.iter().zip(&s).enumerate() {
        if tk.norm() > VALUATION_REL * sk.max(f64::MIN_POSITIVE) {
            return k;
        }
    }
    usize::MAX
}

/// Multiplicity of `z0` as a root of the quaternionic function `F + G J`
/// with slice components `f`, `g`. Both are measured against their joint
/// size, so a component that is pure rounding noise counts as zero.
pub fn split_valuation(f: &[Complex64], g: &[Complex64], z0: Complex64) -> usize {
    let (tf, tg) = (taylor_shift(f, z0), taylor_shift(g, z0));
    let (sf, sg) = (taylor_shift_abs(f, z0.norm()), taylor_shift_abs(g, z0.norm()));
    let n = tf.len().max(tg.len());
    let at = |v: &[Complex64], k: usize| v.get(k).map_or(0.0, |c| c.norm());
    let bound = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    for k in 0..n {
        let size = at(&tf, k).hypot(at(&tg, k));
        let scale = bound(&sf, k).hypot(bound(&sg, k));
        if size > VALUATION_REL * scale.max(f64::MIN_POSITIVE) {
            return k;
        }
    }
    usize::MAX
}

/// Quotient of `c` by `z - r`, remainder dropped. Divides from the top
/// for `|r| <= 1` and from the constant term otherwise, which keeps the
/// recurrence contracting.
pub fn deflate(c: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if r.norm() <= 1.0 {
        let mut acc = c[n];
        for k in (0..n).rev() {
            out[k] = acc;
            acc = c[k] + r * acc;
        }
    } else {
        let mut prev = Complex64::new(0.0, 0.0);
        for k in 0..n {
            out[k] = (prev - c[k]) / r;
            prev = out[k];
        }
    }
    out
}

/// First `n` coefficients of the power series `num / den`; `den[0] != 0`.
pub fn series_div(num: &[Complex64], den: &[Complex64], n: usize) -> Vec<Complex64> {
    let d0 = den[0];
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = num.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= den[j] * out[k - j];
        }
        out.push(acc / d0);
    }
    out
}
