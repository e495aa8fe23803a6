//! Complex roots of real polynomials by Aberth-Ehrlich simultaneous
//! iteration, with multiple roots recovered by merging clusters of
//! approximations.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::RealPolynomial;

pub const MAX_ITER: usize = 200;
/// Approximations closer than `CLUSTER_REL * (1 + |z|)` always merge.
pub const CLUSTER_REL: f64 = 1e-7;
/// Accepted residual, relative to `max |coeff| * (1 + |root|)^deg`.
pub const RESIDUAL_REL: f64 = 1e-8;

/// A root `x + iy` (and its conjugate when `y > 0`) with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexRoot {
    pub x: f64,
    pub y: f64,
    pub multiplicity: usize,
}

impl ComplexRoot {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn is_real(&self) -> bool {
        self.y == 0.0
    }
}

/// Roots in the closed upper half plane, sorted by `(x, y)`. Each nonreal
/// entry stands for a conjugate pair of equal multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ComplexRootSet {
    pub roots: Vec<ComplexRoot>,
}

impl ComplexRootSet {
    /// Every complex root with its multiplicity, conjugates included.
    pub fn all(&self) -> Vec<(Complex64, usize)> {
        let mut out = Vec::new();
        for r in &self.roots {
            out.push((r.z(), r.multiplicity));
            if !r.is_real() {
                out.push((r.z().conj(), r.multiplicity));
            }
        }
        out
    }

    /// Sum of multiplicities over all complex roots; equals the degree.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| if r.is_real() { r.multiplicity } else { 2 * r.multiplicity }).sum()
    }
}

struct Monic {
    a: Vec<Complex64>,
    abs: Vec<f64>,
}

impl Monic {
    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// `(p(z), p'(z), rounding bound for p(z))`.
    fn eval(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let r = z.norm();
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for (c, ac) in self.a.iter().zip(&self.abs).rev() {
            dp = dp * z + p;
            p = p * z + c;
            s = s * r + ac;
        }
        let noise = 4.0 * (self.degree() as f64 + 1.0) * f64::EPSILON * s;
        (p, dp, noise)
    }

    fn derivative(&self) -> Monic {
        let a: Vec<Complex64> = self.a.iter().enumerate().skip(1).map(|(n, c)| c * n as f64).collect();
        let abs = a.iter().map(|c| c.norm()).collect();
        Monic { a, abs }
    }
}

fn aberth(poly: &Monic) -> Vec<Complex64> {
    let n = poly.degree();
    // Fujiwara's bound on the root moduli.
    let bound = (1..=n)
        .map(|k| {
            let c = poly.abs[n - k] / if k == n { 2.0 } else { 1.0 };
            c.powf(1.0 / k as f64)
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if bound > 0.0 { bound * 0.5 } else { 1.0 };
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect();
    let mut frozen = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut active = false;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let (p, dp, noise) = poly.eval(z[k]);
            if p.norm() <= noise {
                frozen[k] = true;
                continue;
            }
            active = true;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let denom = dp - p * s;
            let w = if denom.norm() > 0.0 { p / denom } else { Complex64::new(1e-8 * (1.0 + z[k].norm()), 0.0) };
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[k] -= w;
            if w.norm() <= f64::EPSILON * z[k].norm() {
                frozen[k] = true;
            }
        }
        if !active {
            break;
        }
    }
    z
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups approximations whose inclusion discs overlap.
fn clusters(poly: &Monic, z: &[Complex64]) -> Vec<Vec<usize>> {
    let n = z.len();
    let radii: Vec<f64> = (0..n)
        .map(|k| {
            let (p, _, noise) = poly.eval(z[k]);
            let prod: f64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).norm()).product();
            let disc = if prod > 0.0 { n as f64 * (p.norm() + noise) / prod } else { f64::INFINITY };
            disc.max(0.5 * CLUSTER_REL * (1.0 + z[k].norm()))
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    for k in 0..n {
        for j in k + 1..n {
            if (z[k] - z[j]).norm() <= radii[k] + radii[j] {
                let (a, b) = (find(&mut parent, k), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(k);
    }
    groups
}

/// Newton on `p^(m-1)`, which has a simple root at an `m`-fold root of `p`.
fn polish(poly: &Monic, c: Complex64, m: usize, spread: f64) -> Complex64 {
    let mut d = Monic { a: poly.a.clone(), abs: poly.abs.clone() };
    for _ in 1..m {
        d = d.derivative();
    }
    let mut z = c;
    for _ in 0..30 {
        let (p, dp, noise) = d.eval(z);
        if p.norm() <= noise || dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    let limit = 10.0 * spread.max(CLUSTER_REL * (1.0 + c.norm()));
    if (z - c).norm() <= limit && z.re.is_finite() && z.im.is_finite() {
        z
    } else {
        c
    }
}

pub fn real_poly_roots(d: &RealPolynomial) -> Result<ComplexRootSet> {
    let deg = d.degree().ok_or_else(|| Error::InvalidArgument("root finding on the zero polynomial".into()))?;
    let coeffs = d.coeffs();
    let lead = d.leading();
    let zero_mult = coeffs.iter().take_while(|c| **c == 0.0).count();
    let mut roots: Vec<ComplexRoot> = Vec::new();
    if zero_mult > 0 {
        roots.push(ComplexRoot { x: 0.0, y: 0.0, multiplicity: zero_mult });
    }
    let a: Vec<Complex64> = coeffs[zero_mult..].iter().map(|c| Complex64::new(c / lead, 0.0)).collect();
    let abs = a.iter().map(|c| c.norm()).collect();
    let poly = Monic { a, abs };
    let n = poly.degree();
    if n > 0 {
        let z = if n == 1 { vec![-poly.a[0]] } else { aberth(&poly) };
        let mut upper: Vec<(Complex64, usize)> = Vec::new();
        let mut lower: Vec<(Complex64, usize)> = Vec::new();
        for group in clusters(&poly, &z) {
            let m = group.len();
            let centroid = group.iter().map(|&k| z[k]).sum::<Complex64>() / m as f64;
            let spread = group.iter().map(|&k| (z[k] - centroid).norm()).fold(0.0, f64::max);
            let c = polish(&poly, centroid, m, spread);
            if c.im.abs() <= CLUSTER_REL * (1.0 + c.norm()) {
                roots.push(ComplexRoot { x: c.re, y: 0.0, multiplicity: m });
            } else if c.im > 0.0 {
                upper.push((c, m));
            } else {
                lower.push((c, m));
            }
        }
        if upper.len() != lower.len() {
            return Err(Error::NoConvergence(format!(
                "{} upper vs {} lower half-plane root clusters",
                upper.len(),
                lower.len()
            )));
        }
        for (u, m) in upper {
            let (idx, dist) = lower
                .iter()
                .enumerate()
                .map(|(i, (l, _))| (i, (l.conj() - u).norm()))
                .fold((usize::MAX, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            if idx == usize::MAX || lower[idx].1 != m || dist > 1e3 * CLUSTER_REL * (1.0 + u.norm()) {
                return Err(Error::NoConvergence(format!("unpaired complex root near {u}")));
            }
            let (l, _) = lower.swap_remove(idx);
            let avg = (u + l.conj()) * 0.5;
            roots.push(ComplexRoot { x: avg.re, y: avg.im, multiplicity: m });
        }
    }
    let norm = d.norm();
    for r in &roots {
        let res = d.eval_complex(r.z()).norm();
        let allowed = RESIDUAL_REL * norm * (1.0 + r.z().norm()).powi(deg as i32);
        if res > allowed || !res.is_finite() {
            return Err(Error::NoConvergence(format!("residual {res:e} at root {}+{}i exceeds {allowed:e}", r.x, r.y)));
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(ComplexRootSet { roots })
}
