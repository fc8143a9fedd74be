use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A commutative coefficient domain. The descriptor carries whatever state
/// the arithmetic needs (a modulus, a variable list, a truncation order);
/// elements are plain values interpreted through it.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an integer under the canonical map from Z.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }
}

/// Exact square roots where they exist. In characteristic 2 this is the
/// inverse Frobenius and is total on a finite field.
pub trait SquareRoot: Ring {
    fn sqrt(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// Arbitrary-precision integers. Only used where signs matter (the Pfaffian
/// identity over Z); everything geometric runs in characteristic 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
}

impl SquareRoot for Integers {
    fn sqrt(&self, a: &BigInt) -> Result<BigInt> {
        if a.sign() == Sign::Minus {
            return Err(Error::NotASquare);
        }
        let r = a.abs().sqrt();
        if &(&r * &r) == a {
            Ok(r)
        } else {
            Err(Error::NotASquare)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_sqrt_only_for_perfect_squares() {
        let z = Integers;
        assert_eq!(z.sqrt(&BigInt::from(49)).unwrap(), BigInt::from(7));
        assert_eq!(z.sqrt(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(z.sqrt(&BigInt::from(50)), Err(Error::NotASquare));
        assert_eq!(z.sqrt(&BigInt::from(-4)), Err(Error::NotASquare));
    }

    #[test]
    fn pow_by_squaring() {
        let z = Integers;
        assert_eq!(z.pow(&BigInt::from(3), 5), BigInt::from(243));
        assert_eq!(z.pow(&BigInt::from(3), 0), BigInt::from(1));
    }
}
