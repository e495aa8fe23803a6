//! Randomized checks of the algebraic identities, one named sweep each.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{random_in_ball, random_polynomial, random_quaternion, random_unit, substream, Rng64};
use crate::error::{Error, Result};
use crate::laurent::star_power_value;
use crate::polynomial::QPolynomial;
use crate::quaternion::{slice_unit, Quaternion, EPS_UNIT};
use crate::rational::{transport, QRational};
use crate::slice::{co_sliced, represent, sigma, tau};

pub const IDENTITIES: &[&str] = &[
    "product_formula",
    "representation",
    "reciprocal",
    "transport",
    "transport_inverse",
    "conj_reversal",
    "associativity",
    "power_estimate",
    "power_limit",
];

const MAX_DEGREE: usize = 4;
/// Samples where the relevant value is below this fraction of its scale are
/// skipped as ill-conditioned.
const ADMISSIBLE_REL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub identity: String,
    pub trials: usize,
    pub seed: u64,
    pub evaluated: usize,
    pub skipped: usize,
    /// Evaluated trials above the tolerance.
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failing_instance: Option<String>,
}

/// Outcome of one trial: `None` when the sample is inadmissible.
type Trial = Option<(f64, String)>;

/// Default pass threshold of the named sweep.
pub fn default_tolerance(which: &str) -> f64 {
    match which {
        "power_estimate" => 1e-10,
        "power_limit" => 0.02,
        _ => 1e-8,
    }
}

fn sample_point(rng: &mut Rng64) -> Quaternion {
    random_in_ball(rng, 1.5)
}

fn product_formula(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let g = random_polynomial(rng, MAX_DEGREE);
    let q = sample_point(rng);
    let fq = f.eval(q);
    if fq.norm() <= ADMISSIBLE_REL * f.eval_scale(q) {
        return None;
    }
    let lhs = f.star_mul(&g).eval(q);
    let t = fq.inverse().ok()? * q * fq;
    let rhs = fq * g.eval(t);
    let scale = f.eval_scale(q) * g.eval_scale(q);
    Some((lhs.dist(&rhs) / scale, format!("f = {f}, g = {g}, q = {q}")))
}

fn representation(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let q = sample_point(rng);
    let j = slice_unit(q).ok()?;
    let i = random_unit(rng);
    let z = Quaternion::real(q.re()) + i.q() * q.im_norm();
    let rhs = represent(f.eval(z), f.eval(z.conj()), i, j);
    Some((f.eval(q).dist(&rhs) / f.eval_scale(q), format!("f = {f}, q = {q}, I = {i}")))
}

/// `f * f^{-*} = f^{-*} * f = 1`, each product evaluated by the product formula.
fn reciprocal(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let q = sample_point(rng);
    let fs = f.symmetrize().ok()?;
    if fs.eval_quat(q).norm() <= ADMISSIBLE_REL * fs.eval_scale(q.norm()) {
        return None;
    }
    let h = QRational::from_quotient(&f, &QPolynomial::one()).ok()?;
    let fq = f.eval(q);
    let t = fq.inverse().ok()? * q * fq;
    let left = fq * h.eval(t).ok()?;
    let hq = h.eval(q).ok()?;
    let t2 = hq.inverse().ok()? * q * hq;
    let right = hq * f.eval(t2);
    let scale_l = f.eval_scale(q) * h.eval_scale(t);
    let scale_r = h.eval_scale(q) * f.eval_scale(t2);
    let r = (left.dist(&Quaternion::ONE) / scale_l).max(right.dist(&Quaternion::ONE) / scale_r);
    Some((r, format!("f = {f}, q = {q}")))
}

fn transport_formula(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let g = random_polynomial(rng, MAX_DEGREE);
    let q = sample_point(rng);
    let fc = f.regular_conj();
    if fc.eval(q).norm() <= ADMISSIBLE_REL * fc.eval_scale(q) {
        return None;
    }
    let a = QRational::from_quotient(&f, &g).ok()?;
    let t = transport(&f, q).ok()?;
    let ft = f.eval(t);
    let rhs = ft.inverse().ok()? * g.eval(t);
    let lhs = a.eval(q).ok()?;
    let scale = g.eval_scale(t) * f.eval_scale(t) / ft.norm_sq();
    Some((lhs.dist(&rhs) / scale, format!("f = {f}, g = {g}, q = {q}")))
}

fn transport_inverse(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let q = sample_point(rng);
    let fc = f.regular_conj();
    if fc.eval(q).norm() <= ADMISSIBLE_REL * fc.eval_scale(q) {
        return None;
    }
    let t = transport(&f, q).ok()?;
    let back = transport(&fc, t).ok()?;
    Some((back.dist(&q) / (1.0 + q.norm()), format!("f = {f}, q = {q}")))
}

fn conj_reversal(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let g = random_polynomial(rng, MAX_DEGREE);
    let lhs = f.star_mul(&g).regular_conj();
    let rhs = g.regular_conj().star_mul(&f.regular_conj());
    let scale = f.norm() * g.norm() * (MAX_DEGREE + 1) as f64;
    Some(((&lhs - &rhs).norm() / scale, format!("f = {f}, g = {g}")))
}

fn associativity(rng: &mut Rng64) -> Trial {
    let f = random_polynomial(rng, MAX_DEGREE);
    let g = random_polynomial(rng, MAX_DEGREE);
    let h = random_polynomial(rng, MAX_DEGREE);
    let lhs = f.star_mul(&g).star_mul(&h);
    let rhs = f.star_mul(&g.star_mul(&h));
    let scale = f.norm() * g.norm() * h.norm() * ((MAX_DEGREE + 1) * (MAX_DEGREE + 1)) as f64;
    Some(((&lhs - &rhs).norm() / scale, format!("f = {f}, g = {g}, h = {h}")))
}

/// A point on the slice of `p` in a fifth of the samples, generic otherwise.
fn power_pair(rng: &mut Rng64) -> (Quaternion, Quaternion) {
    let p = random_quaternion(rng, 1.5);
    let q = if rng.gen_bool(0.2) {
        let i = slice_unit(p).map(|u| u.q()).unwrap_or(Quaternion::I);
        Quaternion::real(rng.gen_range(-2.0..2.0)) + i * rng.gen_range(-2.0..2.0)
    } else {
        random_quaternion(rng, 1.5)
    };
    (p, q)
}

/// `|(q-p)^{*n}| <= sigma^n` and `|(q-p)^{-*m}| <= tau^{-m}`; the residual
/// is the relative excess over the bound.
fn power_estimate(rng: &mut Rng64) -> Trial {
    let (p, q) = power_pair(rng);
    let mut n: i64 = rng.gen_range(1..=20);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    let bound = if n > 0 {
        sigma(q, p).powi(n as i32)
    } else {
        let t = tau(q, p);
        if t <= 1e-3 {
            return None;
        }
        t.powi(n as i32)
    };
    let v = star_power_value(p, n, q).ok()?;
    Some(((v.norm() / bound - 1.0).max(0.0), format!("p = {p}, q = {q}, n = {n}")))
}

/// `|(q-p)^{*50}|^{1/50}` within 2% of `sigma(q,p)` off the slice of `p`.
fn power_limit(rng: &mut Rng64) -> Trial {
    let p = random_quaternion(rng, 1.5);
    let q = random_quaternion(rng, 1.5);
    if p.im_norm() <= EPS_UNIT || co_sliced(q, p) || tau(q, p) <= 0.0 {
        return None;
    }
    let s = sigma(q, p);
    let v = star_power_value(p, 50, q).ok()?;
    Some(((v.norm().powf(1.0 / 50.0) / s - 1.0).abs(), format!("p = {p}, q = {q}")))
}

fn trial_fn(which: &str) -> Option<fn(&mut Rng64) -> Trial> {
    Some(match which {
        "product_formula" => product_formula,
        "representation" => representation,
        "reciprocal" => reciprocal,
        "transport" => transport_formula,
        "transport_inverse" => transport_inverse,
        "conj_reversal" => conj_reversal,
        "associativity" => associativity,
        "power_estimate" => power_estimate,
        "power_limit" => power_limit,
        _ => return None,
    })
}

/// Runs `trials` random instances of the named identity. Trial `t` draws
/// from its own substream, so the report does not depend on scheduling.
pub fn identity_sweep(which: &str, trials: usize, seed: u64) -> Result<SweepReport> {
    identity_sweep_with_tolerance(which, trials, seed, default_tolerance(which))
}

pub fn identity_sweep_with_tolerance(which: &str, trials: usize, seed: u64, tol: f64) -> Result<SweepReport> {
    let run = trial_fn(which).ok_or_else(|| Error::UnknownIdentity(which.to_string()))?;
    let outcomes: Vec<Trial> = (0..trials).into_par_iter().map(|t| run(&mut substream(seed, t as u64))).collect();
    let mut worst = 0.0f64;
    let mut evaluated = 0;
    let mut failing = None;
    let mut failures = 0;
    for (residual, instance) in outcomes.into_iter().flatten() {
        evaluated += 1;
        let bad = residual.is_nan() || residual > tol;
        if bad {
            failures += 1;
            failing.get_or_insert(instance);
        }
        if residual > worst || residual.is_nan() {
            worst = residual;
        }
    }
    Ok(SweepReport {
        identity: which.to_string(),
        trials,
        seed,
        evaluated,
        skipped: trials - evaluated,
        failures,
        worst_residual: worst,
        tolerance: tol,
        passed: failing.is_none(),
        failing_instance: failing,
    })
}
