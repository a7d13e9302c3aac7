//! Exact and rigorously enclosed real arithmetic.

pub mod algebraic;
pub mod consts;
pub mod field;
pub mod interval;
pub mod poly;
pub mod real;

pub use algebraic::AlgebraicRoot;
pub use field::{FieldElem, NumberField};
pub use interval::{Dyadic, Interval};
pub use poly::{QPoly, RealRoot};
pub use real::{ExactReal, PrecisionPolicy};
