//! The ordered semirings behind the bundled table instances.
//!
//! Combination multiplies in the semiring, projection aggregates by max or
//! min. Keeping the tag as a runtime value (instead of a type parameter)
//! lets problem files pick the algebra, and lets `combine` reject operands
//! from different instances.

use std::fmt;
use std::str::FromStr;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semiring {
    /// Constraint functions over {0, 1}: combination is conjunction
    /// (pointwise multiplication), projection is disjunction (max).
    BooleanAndOr,
    /// Additive weights, maximizing.
    MaxPlus,
    /// Additive costs, minimizing.
    MinPlus,
    /// Nonnegative multiplicative potentials, maximizing.
    MaxTimes,
}

impl Semiring {
    pub const ALL: [Semiring; 4] = [
        Semiring::BooleanAndOr,
        Semiring::MaxPlus,
        Semiring::MinPlus,
        Semiring::MaxTimes,
    ];

    /// Combination of two table entries.
    pub fn mul<T: Scalar>(self, a: T, b: T) -> T {
        match self {
            Semiring::BooleanAndOr | Semiring::MaxTimes => a * b,
            Semiring::MaxPlus | Semiring::MinPlus => a + b,
        }
    }

    /// Aggregation of two table entries during projection. Pure selection:
    /// the result is always one of the operands.
    pub fn aggregate<T: Scalar>(self, a: T, b: T) -> T {
        let pick_b = match self {
            Semiring::MinPlus => b < a,
            _ => b > a,
        };
        if pick_b {
            b
        } else {
            a
        }
    }

    /// Neutral element of combination.
    pub fn unit<T: Scalar>(self) -> T {
        match self {
            Semiring::BooleanAndOr | Semiring::MaxTimes => T::one(),
            Semiring::MaxPlus | Semiring::MinPlus => T::zero(),
        }
    }

    /// Whether zero annihilates combination. For such semirings an optimum
    /// of zero means "no configuration satisfies all factors".
    pub fn zero_annihilates(self) -> bool {
        matches!(self, Semiring::BooleanAndOr | Semiring::MaxTimes)
    }

    /// Validates that a value lies in the semiring's carrier set.
    pub fn check_value<T: Scalar>(self, v: T) -> Result<(), String> {
        match self {
            Semiring::BooleanAndOr => {
                if v == T::zero() || v == T::one() {
                    Ok(())
                } else {
                    Err(format!("boolean tables may only contain 0 and 1, got {v}"))
                }
            }
            Semiring::MaxTimes => {
                if v >= T::zero() {
                    Ok(())
                } else {
                    Err(format!("max-times tables must be nonnegative, got {v}"))
                }
            }
            Semiring::MaxPlus | Semiring::MinPlus => Ok(()),
        }
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Semiring::BooleanAndOr => "boolean",
            Semiring::MaxPlus => "max-plus",
            Semiring::MinPlus => "min-plus",
            Semiring::MaxTimes => "max-times",
        };
        f.write_str(s)
    }
}

impl FromStr for Semiring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boolean" => Ok(Semiring::BooleanAndOr),
            "max-plus" => Ok(Semiring::MaxPlus),
            "min-plus" => Ok(Semiring::MinPlus),
            "max-times" => Ok(Semiring::MaxTimes),
            other => Err(format!("unknown semiring '{other}'")),
        }
    }
}
