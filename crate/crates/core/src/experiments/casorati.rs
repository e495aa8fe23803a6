//! Density of the image near an essential singularity, probed on truncated
//! Laurent series with rapidly decaying principal parts.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{random_in_ball, rng, substream, Rng64};
use crate::laurent::{eval_truncated, LaurentExpansion};
use crate::quaternion::{slice_unit, Quaternion, UnitImaginary};
use crate::slice::{sigma, tau, SliceFrame};

/// Evaluations allowed per target.
pub const SEARCH_BUDGET: usize = 10_000;
/// Targets are drawn uniformly from the ball of this radius.
pub const TARGET_RADIUS: f64 = 2.0;

const SAMPLES_PER_ROUND: usize = 600;
const STARTS_PER_ROUND: usize = 12;
const NEWTON_STEPS: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `a_{-m} = c / m!`
    ReciprocalFactorial,
    /// `a_{-m} = r^m c`
    Geometric(f64),
    /// `a_{-m} = list[m] c`
    Custom(Vec<f64>),
}

impl Rule {
    fn weight(&self, m: usize) -> f64 {
        match self {
            Rule::ReciprocalFactorial => (1..=m).fold(1.0, |acc, k| acc / k as f64),
            Rule::Geometric(r) => r.powi(m as i32),
            Rule::Custom(list) => list.get(m).copied().unwrap_or(0.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Negative,
    NonNegative,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientGenerator {
    pub rule: Rule,
    pub direction: Direction,
    #[serde(serialize_with = "super::super::serialize_quaternion")]
    pub c: Quaternion,
}

impl CoefficientGenerator {
    pub fn reciprocal_factorial() -> Self {
        CoefficientGenerator { rule: Rule::ReciprocalFactorial, direction: Direction::Negative, c: Quaternion::ONE }
    }

    /// Truncation at depth `m`: `a_n` for `-m <= n <= 0` (negative
    /// direction), `0 <= n <= m` (nonnegative) or both.
    pub fn expansion(&self, center: Quaternion, m: usize) -> LaurentExpansion {
        let coeff = |k: usize| self.c * self.rule.weight(k);
        let (n_min, coeffs): (i64, Vec<Quaternion>) = match self.direction {
            Direction::Negative => (-(m as i64), (0..=m).rev().map(coeff).collect()),
            Direction::NonNegative => (0, (0..=m).map(coeff).collect()),
            Direction::Both => (-(m as i64), (0..=m).rev().chain(1..=m).map(coeff).collect()),
        };
        LaurentExpansion::from_coefficients(center, n_min, coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub index: usize,
    #[serde(serialize_with = "super::super::serialize_quaternion")]
    pub target: Quaternion,
    #[serde(serialize_with = "super::super::serialize_quaternion")]
    pub witness: Quaternion,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanParameters {
    #[serde(serialize_with = "super::super::serialize_quaternion")]
    pub center: Quaternion,
    pub radius: f64,
    pub eps: f64,
    pub truncation: usize,
    pub seed: u64,
    pub budget: usize,
    pub generator: CoefficientGenerator,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityScanResult {
    pub targets_tried: usize,
    pub targets_hit: usize,
    pub hit_fraction: f64,
    pub witnesses: Vec<Witness>,
    pub parameters: ScanParameters,
}

/// The punctured region `Sigma(p, 0, r)`: `sigma < r` off the sphere of `p`.
#[derive(Clone, Copy, Debug)]
struct Domain {
    p: Quaternion,
    r: f64,
    frame: SliceFrame,
}

impl Domain {
    fn new(p: Quaternion, r: f64) -> Self {
        Domain { p, r, frame: SliceFrame::new(slice_unit(p).unwrap_or(UnitImaginary::I)) }
    }

    fn contains(&self, q: Quaternion) -> bool {
        q.is_finite() && tau(q, self.p) > 0.0 && sigma(q, self.p) < self.r
    }

    /// Alternates between the slice disc around `p` and the off-slice part
    /// `{omega < r}`, which is empty when `r <= |Im p|`.
    fn sample(&self, rng: &mut Rng64) -> Quaternion {
        let (x, y) = (self.p.re(), self.p.im_norm());
        loop {
            let q = if rng.gen_bool(0.5) || self.r <= y {
                let (u, v) = loop {
                    let (u, v) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    if u * u + v * v < 1.0 {
                        break (u, v);
                    }
                };
                self.p + Quaternion::real(u * self.r) + self.frame.i.q() * (v * self.r)
            } else {
                let d = random_in_ball(rng, self.r);
                // omega < r means (re - x)^2 + (|Im q| + y)^2 < r^2
                let rho = d.im_norm() - y;
                if rho <= 0.0 {
                    continue;
                }
                let dir = slice_unit(d).map(|u| u.q()).unwrap_or(Quaternion::I);
                Quaternion::real(x + d.re()) + dir * rho
            };
            if self.contains(q) {
                return q;
            }
        }
    }
}

struct Search<'a> {
    e: &'a LaurentExpansion,
    domain: Domain,
    target: Quaternion,
    eps: f64,
    used: usize,
    budget: usize,
    best: (Quaternion, f64),
}

impl Search<'_> {
    /// Counted evaluation inside the domain; tracks the best point seen.
    fn value(&mut self, q: Quaternion) -> Option<Quaternion> {
        if self.used >= self.budget || !self.domain.contains(q) {
            return None;
        }
        self.used += 1;
        let v = eval_truncated(self.e, q).ok()?.0;
        let r = v.dist(&self.target);
        if !r.is_finite() {
            return None;
        }
        if r < self.best.1 {
            self.best = (q, r);
        }
        Some(v)
    }

    fn done(&self) -> bool {
        self.best.1 < self.eps || self.used >= self.budget
    }

    /// Damped Newton on `f(q) - v` with a forward-difference Jacobian.
    fn newton(&mut self, mut q: Quaternion, mut fq: Quaternion) {
        for _ in 0..NEWTON_STEPS {
            if self.done() {
                return;
            }
            let f0 = (fq - self.target).components();
            let r = fq.dist(&self.target);
            let h = 1e-7 * (1.0 + q.norm());
            let mut jac = [[0.0; 4]; 4];
            for (col, basis) in [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K].iter().enumerate() {
                let Some(fh) = self.value(q + *basis * h) else { return };
                let d = (fh - self.target).components();
                for row in 0..4 {
                    jac[row][col] = (d[row] - f0[row]) / h;
                }
            }
            let Some(step) = solve4(jac, f0.map(|x| -x)) else { return };
            let step = Quaternion::from_components(step);
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..12 {
                let cand = q + step * t;
                if let Some(fc) = self.value(cand) {
                    if fc.dist(&self.target) < r {
                        q = cand;
                        fq = fc;
                        moved = true;
                        break;
                    }
                }
                if self.used >= self.budget {
                    return;
                }
                t *= 0.5;
            }
            if !moved {
                return;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let s: f64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Searches `Sigma(p, 0, r)` for `q` with `|f(q) - target| < eps`, trying
/// `hints` first, then rounds of random sampling each followed by Newton
/// refinement from the best samples. The sequence of evaluations does not
/// depend on `eps`, which only decides when to stop.
pub fn witness_search(
    e: &LaurentExpansion,
    r: f64,
    target: Quaternion,
    eps: f64,
    budget: usize,
    rng: &mut Rng64,
    hints: &[Quaternion],
) -> (Quaternion, f64) {
    let domain = Domain::new(e.center, r);
    let mut s = Search { e, domain, target, eps, used: 0, budget, best: (e.center, f64::INFINITY) };
    for h in hints {
        s.value(*h);
        if s.done() {
            return s.best;
        }
    }
    while !s.done() {
        let mut pool: Vec<(Quaternion, Quaternion, f64)> = Vec::with_capacity(SAMPLES_PER_ROUND);
        for _ in 0..SAMPLES_PER_ROUND {
            let q = domain.sample(rng);
            if let Some(v) = s.value(q) {
                pool.push((q, v, v.dist(&target)));
            }
            if s.done() {
                return s.best;
            }
        }
        pool.sort_by(|a, b| a.2.total_cmp(&b.2));
        for (q, v, _) in pool.into_iter().take(STARTS_PER_ROUND) {
            s.newton(q, v);
            if s.done() {
                return s.best;
            }
        }
    }
    s.best
}

/// Uniform target in the ball `|v| <= 2`.
fn target(rng: &mut Rng64) -> Quaternion {
    random_in_ball(rng, TARGET_RADIUS)
}

pub fn casorati_scan(
    gen: &CoefficientGenerator,
    p: Quaternion,
    r: f64,
    eps: f64,
    ntargets: usize,
    seed: u64,
    truncation: usize,
) -> DensityScanResult {
    let e = gen.expansion(p, truncation);
    let mut master = rng(seed);
    let targets: Vec<Quaternion> = (0..ntargets).map(|_| target(&mut master)).collect();
    let mut results: Vec<(usize, Quaternion, Quaternion, f64)> = targets
        .par_iter()
        .enumerate()
        .map(|(k, v)| {
            let mut stream = substream(seed, k as u64);
            let (q, res) = witness_search(&e, r, *v, eps, SEARCH_BUDGET, &mut stream, &[]);
            (k, *v, q, res)
        })
        .collect();
    results.sort_by_key(|x| x.0);
    let witnesses: Vec<Witness> = results
        .into_iter()
        .filter(|x| x.3 < eps)
        .map(|(index, target, witness, residual)| Witness { index, target, witness, residual })
        .collect();
    let hits = witnesses.len();
    DensityScanResult {
        targets_tried: ntargets,
        targets_hit: hits,
        hit_fraction: if ntargets == 0 { 0.0 } else { hits as f64 / ntargets as f64 },
        witnesses,
        parameters: ScanParameters {
            center: p,
            radius: r,
            eps,
            truncation,
            seed,
            budget: SEARCH_BUDGET,
            generator: gen.clone(),
        },
    }
}
