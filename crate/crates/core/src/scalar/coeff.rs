//! Rational coefficient with an inline machine-integer fast path.
//!
//! Almost every coefficient met in practice is a small integer, so those are
//! stored as `i64` and only promoted to a big rational on overflow or
//! division. A value that fits the small form is always stored small, which
//! keeps derived equality and hashing sound.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

#[derive(Clone)]
pub enum Coeff {
    Small(i64),
    Big(BigRational),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Small(0)
    }

    pub fn one() -> Self {
        Coeff::Small(1)
    }

    fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return Coeff::Small(v);
            }
        }
        Coeff::Big(r)
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Coeff::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Coeff::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Small(v) => *v < 0,
            Coeff::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Coeff::Small(_) => true,
            Coeff::Big(r) => r.is_integer(),
        }
    }

    pub fn abs(&self) -> Coeff {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Panics on zero, like the big rational it wraps.
    pub fn recip(&self) -> Coeff {
        match self {
            Coeff::Small(1) => Coeff::Small(1),
            Coeff::Small(-1) => Coeff::Small(-1),
            _ => Coeff::from_big(self.to_rational().recip()),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Coeff::Small(v) => BigInt::from(*v),
            Coeff::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Coeff::Small(_) => BigInt::one(),
            Coeff::Big(r) => r.denom().clone(),
        }
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff::Small(v)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::from_big(r)
    }
}

impl From<BigInt> for Coeff {
    fn from(v: BigInt) -> Self {
        Coeff::from_big(BigRational::from_integer(v))
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a == b,
            (Coeff::Big(a), Coeff::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coeff {}

impl Hash for Coeff {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Coeff::Small(v) => {
                0u8.hash(state);
                v.hash(state)
            }
            Coeff::Big(r) => {
                1u8.hash(state);
                r.hash(state)
            }
        }
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Coeff::Small(a), Coeff::Small(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(v) => write!(f, "{}", v),
            Coeff::Big(r) => write!(f, "{}", r),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                return Coeff::Small(v);
            }
        }
        Coeff::from_big(self.to_rational() + rhs.to_rational())
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_sub(*b) {
                return Coeff::Small(v);
            }
        }
        Coeff::from_big(self.to_rational() - rhs.to_rational())
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if let Some(v) = a.checked_mul(*b) {
                return Coeff::Small(v);
            }
        }
        Coeff::from_big(self.to_rational() * rhs.to_rational())
    }
}

impl Div for &Coeff {
    type Output = Coeff;
    fn div(self, rhs: &Coeff) -> Coeff {
        if let (Coeff::Small(a), Coeff::Small(b)) = (self, rhs) {
            if *b != 0 && a % b == 0 {
                if let Some(v) = a.checked_div(*b) {
                    return Coeff::Small(v);
                }
            }
        }
        Coeff::from_big(self.to_rational() / rhs.to_rational())
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Small(v) => match v.checked_neg() {
                Some(w) => Coeff::Small(w),
                None => Coeff::from_big(-self.to_rational()),
            },
            Coeff::Big(r) => Coeff::from_big(-r),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        if let (Coeff::Small(a), Coeff::Small(b)) = (&*self, rhs) {
            if let Some(v) = a.checked_add(*b) {
                *self = Coeff::Small(v);
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl AddAssign<Coeff> for Coeff {
    fn add_assign(&mut self, rhs: Coeff) {
        *self += &rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Coeff::from(i64::MAX);
        let sum = &big + &Coeff::one();
        assert!(matches!(sum, Coeff::Big(_)));
        let back = &sum - &Coeff::one();
        assert_eq!(back, Coeff::from(i64::MAX));
        assert!(matches!(-Coeff::from(i64::MIN), Coeff::Big(_)));
    }

    #[test]
    fn division_leaves_integers() {
        let half = &Coeff::one() / &Coeff::from(2);
        assert!(matches!(half, Coeff::Big(_)));
        assert_eq!(&half * &Coeff::from(4), Coeff::from(2));
        assert_eq!(&Coeff::from(6) / &Coeff::from(-3), Coeff::from(-2));
        assert!(half < Coeff::one());
    }
}
