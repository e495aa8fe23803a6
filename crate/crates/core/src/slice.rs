//! Slices `R + IR`, the Representation Formula and the non-Euclidean gauges
//! `sigma`, `tau`, `omega` whose level sets are the convergence regions of
//! Laurent series centred at arbitrary quaternions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quaternion::{slice_unit, Quaternion, UnitImaginary, EPS_GEOM, EPS_UNIT};

/// Two points lie on a common complex line when one of them is real or
/// their slice units agree up to sign.
pub fn co_sliced(q: Quaternion, p: Quaternion) -> bool {
    if q.im_norm() <= EPS_UNIT || p.im_norm() <= EPS_UNIT {
        return true;
    }
    let iq = q.im() / q.im_norm();
    let ip = p.im() / p.im_norm();
    (iq - ip).norm() <= EPS_GEOM || (iq + ip).norm() <= EPS_GEOM
}

pub fn omega(q: Quaternion, p: Quaternion) -> f64 {
    (q.re() - p.re()).hypot(q.im_norm() + p.im_norm())
}

/// Off-line branch of `tau`, evaluated for any `q`. Its sublevel sets
/// `{tau_off <= R}` are the Euclidean closures of `T(p, R)`.
pub fn tau_off(q: Quaternion, p: Quaternion) -> f64 {
    (q.re() - p.re()).hypot(q.im_norm() - p.im_norm())
}

pub fn sigma(q: Quaternion, p: Quaternion) -> f64 {
    if co_sliced(q, p) {
        q.dist(&p)
    } else {
        omega(q, p)
    }
}

pub fn tau(q: Quaternion, p: Quaternion) -> f64 {
    if co_sliced(q, p) {
        q.dist(&p)
    } else {
        tau_off(q, p)
    }
}

/// Value at `x + Jy` of a regular function whose values at `x + Iy` and
/// `x - Iy` are `valz` and `valzbar`.
pub fn represent(valz: Quaternion, valzbar: Quaternion, i: UnitImaginary, j: UnitImaginary) -> Quaternion {
    let ji = j.q() * i.q();
    let a = (Quaternion::ONE - ji) * 0.5;
    let b = (Quaternion::ONE + ji) * 0.5;
    a * valz + b * valzbar
}

/// An orthonormal frame `(I, J, IJ)` adapted to a slice, used to split
/// `H = C_I + C_I J` into two complex coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceFrame {
    pub i: UnitImaginary,
    pub j: UnitImaginary,
}

impl SliceFrame {
    /// `J` is the first of `j, k, i` that is not nearly parallel to `I`,
    /// Gram-Schmidt corrected.
    pub fn new(i: UnitImaginary) -> Self {
        let iq = i.q();
        for c in [Quaternion::J, Quaternion::K, Quaternion::I] {
            let proj = c - iq * c.dot(&iq);
            let n = proj.norm();
            if n > 0.5 {
                let j = UnitImaginary::normalize(proj / n).expect("nonzero projection");
                return SliceFrame { i, j };
            }
        }
        unreachable!("one of j, k, i is far from parallel to any unit vector")
    }

    /// Frame for the slice through `p`; real points use the `i` slice.
    pub fn through(p: Quaternion) -> Self {
        SliceFrame::new(slice_unit(p).unwrap_or(UnitImaginary::I))
    }

    pub fn k(&self) -> Quaternion {
        self.i.q() * self.j.q()
    }

    /// Embeds a complex number into `C_I`.
    pub fn embed(&self, c: Complex64) -> Quaternion {
        Quaternion::real(c.re) + self.i.q() * c.im
    }

    /// Complex coordinate of the `C_I` component of `q`.
    pub fn project(&self, q: Quaternion) -> Complex64 {
        Complex64::new(q.re(), q.dot(&self.i.q()))
    }

    /// `q = alpha + beta J` with `alpha, beta` in `C_I`.
    pub fn split(&self, q: Quaternion) -> (Complex64, Complex64) {
        let alpha = Complex64::new(q.re(), q.dot(&self.i.q()));
        let beta = Complex64::new(q.dot(&self.j.q()), q.dot(&self.k()));
        (alpha, beta)
    }

    pub fn combine(&self, alpha: Complex64, beta: Complex64) -> Quaternion {
        self.embed(alpha) + self.embed(beta) * self.j.q()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    SigmaBall,
    OmegaBall,
    TauSet,
    Shell,
    OpenShell,
}

impl std::str::FromStr for RegionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sigma" | "sigma_ball" => RegionKind::SigmaBall,
            "omega" | "omega_ball" => RegionKind::OmegaBall,
            "tau" | "tau_set" => RegionKind::TauSet,
            "shell" => RegionKind::Shell,
            "open_shell" | "open-shell" => RegionKind::OpenShell,
            other => return Err(Error::InvalidArgument(format!("unknown region kind `{other}`"))),
        })
    }
}

/// `Sigma(p,R)`, `Omega(p,R)`, `T(p,R)`, `Sigma(p,R1,R2)` or `Omega(p,R1,R2)`.
/// Balls store their radius in `r2` with `r1 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    pub center: Quaternion,
    pub r1: f64,
    pub r2: f64,
    pub kind: RegionKind,
}

impl RegionSpec {
    pub fn ball(kind: RegionKind, center: Quaternion, radius: f64) -> Result<Self> {
        if matches!(kind, RegionKind::Shell | RegionKind::OpenShell) {
            return Err(Error::InvalidRegion("shells need two radii".into()));
        }
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::InvalidRegion(format!("radius {radius} must be nonnegative")));
        }
        Ok(RegionSpec { center, r1: 0.0, r2: radius, kind })
    }

    pub fn shell(kind: RegionKind, center: Quaternion, r1: f64, r2: f64) -> Result<Self> {
        if !matches!(kind, RegionKind::Shell | RegionKind::OpenShell) {
            return Err(Error::InvalidRegion("balls take a single radius".into()));
        }
        if r1.is_nan() || r2.is_nan() || r1 < 0.0 || r1 >= r2 {
            return Err(Error::InvalidRegion(format!("need 0 <= R1 < R2, got R1={r1}, R2={r2}")));
        }
        Ok(RegionSpec { center, r1, r2, kind })
    }

    pub fn sigma_ball(center: Quaternion, radius: f64) -> Result<Self> {
        Self::ball(RegionKind::SigmaBall, center, radius)
    }

    pub fn tau_set(center: Quaternion, radius: f64) -> Result<Self> {
        Self::ball(RegionKind::TauSet, center, radius)
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        region_contains(self, q)
    }
}

/// Membership by the defining strict inequalities; boundary points are outside.
pub fn region_contains(r: &RegionSpec, q: Quaternion) -> bool {
    let p = r.center;
    match r.kind {
        RegionKind::SigmaBall => sigma(q, p) < r.r2,
        RegionKind::OmegaBall => omega(q, p) < r.r2,
        RegionKind::TauSet => tau(q, p) < r.r2,
        RegionKind::Shell => tau(q, p) > r.r1 && sigma(q, p) < r.r2,
        // Omega(p,R2) minus the closure of T(p,R1)
        RegionKind::OpenShell => omega(q, p) < r.r2 && tau_off(q, p) > r.r1,
    }
}

/// Shape of a sigma- or tau-ball, by the position of its centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallRegime {
    /// `Im p = 0`: a Euclidean ball.
    RealCenter,
    /// `R <= |Im p|`: for sigma, a disc in the slice of `p`.
    SliceDisc,
    /// `0 < |Im p| < R`.
    Mixed,
}

pub fn ball_regime(center: Quaternion, radius: f64) -> BallRegime {
    let y = center.im_norm();
    if y <= EPS_UNIT {
        BallRegime::RealCenter
    } else if radius <= y {
        BallRegime::SliceDisc
    } else {
        BallRegime::Mixed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundarySamples {
    pub regime: BallRegime,
    #[serde(serialize_with = "crate::serialize_quaternions")]
    pub points: Vec<Quaternion>,
}

/// Samples of the boundary of `Sigma(p,R)` or `T(p,R)` inside the 3-space
/// spanned by `1, I, J` (with `I` the slice unit of `p`, `i` for real `p`).
/// Every sample satisfies `|sigma(q,p) - R| <= 1e-6` (resp. `tau`).
pub fn ball_boundary_points(r: &RegionSpec, count: usize) -> Result<BoundarySamples> {
    if !matches!(r.kind, RegionKind::SigmaBall | RegionKind::TauSet) {
        return Err(Error::UnsupportedRegionKind(format!("{:?}", r.kind)));
    }
    if count < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 samples, got {count}")));
    }
    if !r.r2.is_finite() || r.r2 <= 0.0 {
        return Err(Error::InvalidRegion("boundary sampling needs a finite positive radius".into()));
    }
    let p = r.center;
    let radius = r.r2;
    let frame = SliceFrame::through(p);
    let x = p.re();
    let y = p.im_norm();
    let at = |re: f64, u: f64, w: f64| Quaternion::real(re) + frame.i.q() * u + frame.j.q() * w;
    let regime = ball_regime(p, radius);

    let mut points = Vec::with_capacity(count);
    if regime == BallRegime::RealCenter {
        // Fibonacci lattice on the Euclidean 2-sphere of radius R
        let golden = PI * (3.0 - 5f64.sqrt());
        for k in 0..count {
            let h = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let rho = (1.0 - h * h).sqrt();
            let phi = golden * k as f64;
            points.push(at(x + radius * h, radius * rho * phi.cos(), radius * rho * phi.sin()));
        }
        return Ok(BoundarySamples { regime, points });
    }

    let on_slice_circle = |n: usize, out: &mut Vec<Quaternion>| {
        for k in 0..n {
            let t = 2.0 * PI * k as f64 / n as f64;
            out.push(at(x + radius * t.cos(), y + radius * t.sin(), 0.0));
        }
    };

    let sigma_ball = r.kind == RegionKind::SigmaBall;
    if sigma_ball && regime == BallRegime::SliceDisc {
        on_slice_circle(count, &mut points);
        return Ok(BoundarySamples { regime, points });
    }

    // Remaining cases: a circle in the slice plus a surface of revolution
    // around the real axis, given in the half plane (re, rho = |Im q|).
    let n_circle = count / 2;
    on_slice_circle(n_circle, &mut points);
    let n_phi = 8;
    let n_psi = ((count - n_circle) / n_phi).max(1);
    // sigma: (re - x)^2 + (rho + y)^2 = R^2 ; tau: (re - x)^2 + (rho - y)^2 = R^2
    let (psi_lo, psi_hi) = if sigma_ball {
        let a = (y / radius).asin();
        (a, PI - a)
    } else if radius <= y {
        (-PI, PI)
    } else {
        let a = (-y / radius).asin();
        (a, PI - a)
    };
    for a in 0..n_psi {
        let psi = psi_lo + (psi_hi - psi_lo) * (a as f64 + 0.5) / n_psi as f64;
        let re = x + radius * psi.cos();
        let rho = if sigma_ball { radius * psi.sin() - y } else { y + radius * psi.sin() };
        if rho <= 1e3 * EPS_UNIT {
            continue;
        }
        for b in 0..n_phi {
            let phi = 2.0 * PI * (b as f64 + 0.5) / n_phi as f64;
            points.push(at(re, rho * phi.cos(), rho * phi.sin()));
        }
    }
    Ok(BoundarySamples { regime, points })
}
