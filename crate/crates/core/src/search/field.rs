//! Coefficient fields used by the search kernels.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{pow_mod, Coeff, CoeffRing};

pub(crate) trait Field: Sync + Send {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn lift(&self, c: &Coeff) -> Self::E;
    fn lower(&self, a: &Self::E) -> Coeff;
    /// Nonzero coefficient values tried for each support element, in
    /// enumeration order.
    fn candidates(&self) -> Vec<Self::E>;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
}

pub(crate) struct PrimeField {
    pub p: u32,
}

impl Field for PrimeField {
    type E = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        pow_mod(*a, self.p - 2, self.p)
    }
    fn lift(&self, c: &Coeff) -> u32 {
        c.as_residue().expect("prime field coefficient")
    }
    fn lower(&self, a: &u32) -> Coeff {
        Coeff::Mod(*a)
    }
    fn candidates(&self) -> Vec<u32> {
        (1..self.p).collect()
    }
}

/// The rationals, with search coefficients drawn from `1, -1, 2, -2, ..,
/// bound, -bound`.
pub(crate) struct RationalField {
    pub bound: u32,
}

impl Field for RationalField {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn lift(&self, c: &Coeff) -> BigRational {
        c.as_rational().expect("rational coefficient")
    }
    fn lower(&self, a: &BigRational) -> Coeff {
        CoeffRing::Rationals.from_fraction(a.numer(), a.denom()).unwrap()
    }
    fn candidates(&self) -> Vec<BigRational> {
        (1..=self.bound as i64)
            .flat_map(|v| [v, -v])
            .map(|v| BigRational::from_integer(BigInt::from(v)))
            .collect()
    }
}
