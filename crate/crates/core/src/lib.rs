//! Minkowski products of unit quaternion sets.
//!
//! The product `U ⊗ V = { U V : U ∈ U, V ∈ V }` of two sets of unit
//! quaternions describes every rotation obtained by composing one rotation
//! from each set. This crate provides
//!
//! * quaternion arithmetic and axis–angle conversions ([`quat`]),
//! * the operand families — spherical caps, great-circle arcs, axis caps —
//!   with membership, boundary and sampling queries ([`sets`]),
//! * closed-form products and enclosing-cap bounds ([`product`]),
//! * charts into R³: stereographic/Cayley, hyperspherical, and the so(3)
//!   exponential/logarithm with BCH composition ([`chart`]),
//! * point classification on product boundaries ([`boundary`]),
//! * a seeded Monte-Carlo oracle that checks every closed form ([`oracle`]).

pub mod boundary;
pub mod chart;
pub mod cloud;
pub mod error;
pub mod oracle;
pub mod plane;
pub mod product;
pub mod quat;
pub mod rng;
pub mod sets;

pub use cloud::{Frame, PointCloud};
pub use error::{Error, Result};
pub use plane::TangentPlane4;
pub use product::{Note, ProductResult};
pub use quat::{compose_axis_angle, AxisAngle, Quaternion, UnitQuaternion, UnitVector3, Vector3};
pub use sets::{Arc, AxisCap, RotationSet, SampleMode, Side, SphericalCap};
