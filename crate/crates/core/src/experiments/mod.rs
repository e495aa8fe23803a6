//! Numerical experiments: randomized identity sweeps and the
//! Casorati-Weierstrass density scan.
//!
//! All randomness comes from xoshiro256++ seeded with a `u64`, so every
//! report is reproducible from its parameters.

mod casorati;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::polynomial::QPolynomial;
use crate::quaternion::{Quaternion, UnitImaginary};

pub use casorati::{casorati_scan, witness_search, CoefficientGenerator, DensityScanResult, Direction, Rule, Witness};
pub use sweep::{default_tolerance, identity_sweep, identity_sweep_with_tolerance, SweepReport, IDENTITIES};

pub type Rng64 = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> Rng64 {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Independent stream for item `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> Rng64 {
    rng(seed ^ (index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Components uniform in `[-r, r]`.
pub fn random_quaternion<R: Rng>(rng: &mut R, r: f64) -> Quaternion {
    Quaternion::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

/// Uniform in the Euclidean ball of radius `r`.
pub fn random_in_ball<R: Rng>(rng: &mut R, r: f64) -> Quaternion {
    loop {
        let q = random_quaternion(rng, r);
        if q.norm() <= r {
            return q;
        }
    }
}

pub fn random_unit<R: Rng>(rng: &mut R) -> UnitImaginary {
    loop {
        let v = Quaternion::new(0.0, rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return UnitImaginary::normalize(v).expect("nonreal sample");
        }
    }
}

/// Degree uniform in `1..=max_degree`, coefficients uniform in `[-1, 1]^4`.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> QPolynomial {
    let d = rng.gen_range(1..=max_degree);
    let mut c: Vec<Quaternion> = (0..=d).map(|_| random_quaternion(rng, 1.0)).collect();
    if c[d].norm() < 0.1 {
        c[d] = Quaternion::ONE;
    }
    QPolynomial::new(c)
}

/// Product of `n` linear factors `(q - p_i)` with `p_i` uniform in `[-1, 1]^4`.
pub fn random_linear_product<R: Rng>(rng: &mut R, n: usize) -> (QPolynomial, Vec<Quaternion>) {
    let roots: Vec<Quaternion> = (0..n).map(|_| random_quaternion(rng, 1.0)).collect();
    let f = roots.iter().fold(QPolynomial::one(), |acc, p| acc.star_mul(&QPolynomial::linear(*p)));
    (f, roots)
}
