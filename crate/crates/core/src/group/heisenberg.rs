use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// An element of UT(3,ℤ): the matrix with `a`, `b` above the diagonal and `c`
/// in the corner.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Heis {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Heis {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Heis { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn mul(&self, other: &Heis) -> Heis {
        Heis {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            c: &self.c + &other.c + &self.a * &other.b,
        }
    }

    pub fn inverse(&self) -> Heis {
        Heis { a: -&self.a, b: -&self.b, c: &self.a * &self.b - &self.c }
    }

    /// `(a,b,c)^k = (ka, kb, kc + ab·k(k−1)/2)` for every integer `k`.
    pub fn pow(&self, k: &BigInt) -> Heis {
        let tri = (k * (k - BigInt::one())).div_floor(&BigInt::from(2));
        Heis {
            a: k * &self.a,
            b: k * &self.b,
            c: k * &self.c + &self.a * &self.b * tri,
        }
    }
}

impl fmt::Display for Heis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}
