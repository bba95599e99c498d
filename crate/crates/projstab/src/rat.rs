//! Arbitrary-precision rational scalars.
//!
//! Every quantity in this crate (intersection numbers, Chern data, polynomial
//! coefficients) is an exact rational. `Rat` wraps [`num_rational::BigRational`],
//! which keeps values in lowest terms with a positive denominator.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// A rational literal that is not of the form `p` or `p/q` with `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational literal `{literal}` (expected `p` or `p/q` with positive q)")]
pub struct ParseRatError {
    pub literal: String,
}

/// An exact rational number. The universal scalar of the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `p/q` in lowest terms. Panics if `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Rat::one();
        for _ in 0..e {
            out *= self.clone();
        }
        out
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }
}

impl fmt::Display for Rat {
    /// Integers print as `p`, everything else as `p/q` with `q > 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    /// Accepts `p` or `p/q` with integer `p` and positive integer `q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseRatError {
            literal: s.to_string(),
        };
        match s.split_once('/') {
            None => {
                let p: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat::from_bigint(p))
            }
            Some((ps, qs)) => {
                let p: BigInt = ps.trim().parse().map_err(|_| bad())?;
                let q: BigInt = qs.trim().parse().map_err(|_| bad())?;
                if q.is_positive() {
                    Ok(Rat(BigRational::new(p, q)))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl $assign_trait for Rat {
            fn $assign_method(&mut self, rhs: Rat) {
                (self.0).$assign_method(rhs.0);
            }
        }
        impl $assign_trait<&Rat> for Rat {
            fn $assign_method(&mut self, rhs: &Rat) {
                (self.0).$assign_method(&rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<&Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / &rhs.0)
    }
}

impl Div<Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / rhs.0)
    }
}

impl DivAssign for Rat {
    fn div_assign(&mut self, rhs: Rat) {
        assert!(!rhs.is_zero(), "division by zero");
        self.0 /= rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand for `Rat::new(p, q)`, used pervasively in tests.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(1, -2), Rat::new(-1, 2));
        assert_eq!(Rat::new(0, 5), Rat::zero());
        assert!(Rat::new(-3, 7).denom().is_positive());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["0", "5", "-5", "1/2", "-7/3", "22/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/2".parse::<Rat>().unwrap().to_string(), "2");
    }

    #[test]
    fn rejects_negative_or_zero_denominator_literals() {
        assert!("6/-2".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("a/3".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rat::new(1, 3);
        let b = Rat::new(10_000_000_000, 7);
        assert_eq!((a.clone() + b.clone()) - b.clone(), a);
        assert_eq!((&a * &b) / &b, a);
    }

    #[test]
    fn ceil_of_rationals() {
        assert_eq!(Rat::new(7, 3).ceil(), BigInt::from(3));
        assert_eq!(Rat::new(-7, 3).ceil(), BigInt::from(-2));
        assert_eq!(Rat::from_int(4).ceil(), BigInt::from(4));
    }
}
