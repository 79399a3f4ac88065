//! Exact scalar values: arbitrary-precision integers with a rational fallback.
//!
//! Most incidence-algebra entries in this crate are integers; rationals only
//! appear when inverting a function whose diagonal is not a unit. [`Scalar`]
//! keeps integers in a plain [`BigInt`] and promotes to [`BigRational`] only
//! when a value is genuinely non-integral, so the common case never pays for
//! normalization.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::CobwebError;

/// An exact rational number.
///
/// Invariant: the `Ratio` variant is never integral; every constructor and
/// operation normalizes integral results back to `Int`, so structural
/// equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Ratio(BigRational),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Int(BigInt::zero())
    }

    pub fn one() -> Self {
        Scalar::Int(BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Ratio(_) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Ratio(_) => false,
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Int(_))
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Scalar::Int(n) => Some(n),
            Scalar::Ratio(_) => None,
        }
    }

    pub fn from_ratio(r: BigRational) -> Self {
        if r.is_integer() {
            Scalar::Int(r.to_integer())
        } else {
            Scalar::Ratio(r)
        }
    }

    fn to_ratio(&self) -> BigRational {
        match self {
            Scalar::Int(n) => BigRational::from_integer(n.clone()),
            Scalar::Ratio(r) => r.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Scalar::from_ratio(self.to_ratio().recip()))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Int(BigInt::from(n))
    }
}

impl From<u64> for Scalar {
    fn from(n: u64) -> Self {
        Scalar::Int(BigInt::from(n))
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Int(n)
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            _ => Scalar::from_ratio(self.to_ratio() + rhs.to_ratio()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a - b),
            _ => Scalar::from_ratio(self.to_ratio() - rhs.to_ratio()),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            _ => Scalar::from_ratio(self.to_ratio() * rhs.to_ratio()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(n) => Scalar::Int(-n),
            Scalar::Ratio(r) => Scalar::Ratio(-r),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

/// Renders as `p` for integers and `p/q` otherwise, matching the text
/// format used in CSV and JSON exports.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Ratio(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Scalar {
    type Err = CobwebError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || CobwebError::BadScalar(text.to_owned());
        match text.split_once('/') {
            None => {
                let n = BigInt::from_str(text.trim()).map_err(|_| bad())?;
                Ok(Scalar::Int(n))
            }
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
                let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::from_ratio(BigRational::new(p, q)))
            }
        }
    }
}
