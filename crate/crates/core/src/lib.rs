//! Slice-regular functions of a quaternionic variable: polynomials, their
//! zero sets, regular quotients with their poles, Laurent expansions, and a
//! small numerical laboratory on top.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod laurent;
pub mod polynomial;
pub mod quaternion;
pub mod rational;
pub mod slice;
pub mod zeros;

pub use error::{Error, Result};
pub use polynomial::{QPolynomial, RealPolynomial};
pub use quaternion::{Quaternion, Sphere, UnitImaginary};
pub use slice::{RegionKind, RegionSpec, SliceFrame};

/// Serializes quaternions in their text form.
pub fn serialize_quaternions<S: serde::Serializer>(v: &[Quaternion], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

/// Serializes a quaternion in its text form.
pub fn serialize_quaternion<S: serde::Serializer>(q: &Quaternion, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}
