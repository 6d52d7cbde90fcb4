//! Scalar values stored in valuation tables.
//!
//! The framework is generic over the table entry type: exact integer
//! semirings use `i64`, real-valued potentials use `f64`/`f32`. The only
//! operations the algebra needs from a scalar are the semiring primitives
//! (addition, multiplication, ordering) plus a tolerance-aware equality
//! used by the observational-equality checks.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

/// Entry type of a valuation table.
///
/// `close_to` is the equality used by all property checkers: exact for
/// integer types, relative for floating point. `tol` is interpreted as a
/// relative tolerance against `max(1, |a|, |b|)`.
pub trait Scalar:
    Copy
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Tolerance used when a caller does not specify one.
    fn default_tolerance() -> f64;

    fn close_to(self, other: Self, tol: f64) -> bool;
}

macro_rules! int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn default_tolerance() -> f64 {
                0.0
            }

            fn close_to(self, other: Self, _tol: f64) -> bool {
                self == other
            }
        }
    )*};
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn default_tolerance() -> f64 {
                1e-9
            }

            fn close_to(self, other: Self, tol: f64) -> bool {
                if self == other {
                    return true;
                }
                let (a, b) = (self as f64, other as f64);
                let scale = 1f64.max(a.abs()).max(b.abs());
                (a - b).abs() <= tol * scale
            }
        }
    )*};
}

int_scalar!(i32, i64);
float_scalar!(f32, f64);
