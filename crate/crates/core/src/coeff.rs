//! Exact coefficient rings: prime fields, the integers, the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not in {1}")]
    NotInRing(String, CoeffRing),
    #[error("coefficient ring mismatch: {0} vs {1}")]
    Mismatch(CoeffRing, CoeffRing),
    #[error("unknown coefficient ring `{0}`")]
    Unknown(String),
}

/// Which exact ring the coefficients live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    /// `F_p`, values are residues in `[0, p)`.
    Prime(u32),
    Integers,
    Rationals,
}

impl CoeffRing {
    pub fn prime(p: u32) -> Result<Self, CoeffError> {
        if is_prime(p as u64) {
            Ok(CoeffRing::Prime(p))
        } else {
            Err(CoeffError::NotPrime(p as u64))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, CoeffRing::Integers)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            CoeffRing::Prime(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Coeff {
        match self {
            CoeffRing::Prime(p) => Coeff::Mod(v.rem_euclid(p as i64) as u32),
            CoeffRing::Integers => Coeff::Int(BigInt::from(v)),
            CoeffRing::Rationals => Coeff::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Coeff {
        match self {
            CoeffRing::Prime(p) => {
                let r = v.mod_floor_u32(p);
                Coeff::Mod(r)
            }
            CoeffRing::Integers => Coeff::Int(v.clone()),
            CoeffRing::Rationals => Coeff::Rat(BigRational::from_integer(v.clone())),
        }
    }

    /// `num / den` as an element of the ring, if it is one.
    pub fn from_fraction(self, num: &BigInt, den: &BigInt) -> Result<Coeff, CoeffError> {
        let text = || format!("{num}/{den}");
        if den.is_zero() {
            return Err(CoeffError::NotInRing(text(), self));
        }
        match self {
            CoeffRing::Prime(_) => {
                let d = self.from_bigint(den);
                let inv = self.inv(&d).ok_or_else(|| CoeffError::NotInRing(text(), self))?;
                Ok(self.mul(&self.from_bigint(num), &inv))
            }
            CoeffRing::Integers => {
                let q = BigRational::new(num.clone(), den.clone());
                if q.is_integer() {
                    Ok(Coeff::Int(q.to_integer()))
                } else {
                    Err(CoeffError::NotInRing(text(), self))
                }
            }
            CoeffRing::Rationals => Ok(Coeff::Rat(BigRational::new(num.clone(), den.clone()))),
        }
    }

    pub fn is_zero(self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(x) => *x == 0,
            Coeff::Int(x) => x.is_zero(),
            Coeff::Rat(x) => x.is_zero(),
        }
    }

    pub fn is_one(self, a: &Coeff) -> bool {
        *a == self.one()
    }

    pub fn add(self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffRing::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => {
                Coeff::Mod(((*x as u64 + *y as u64) % p as u64) as u32)
            }
            (_, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x + y),
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            _ => panic!("coefficient tags do not match ring {self}"),
        }
    }

    pub fn neg(self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffRing::Prime(p), Coeff::Mod(x)) => Coeff::Mod((p - x) % p),
            (_, Coeff::Int(x)) => Coeff::Int(-x),
            (_, Coeff::Rat(x)) => Coeff::Rat(-x),
            _ => panic!("coefficient tags do not match ring {self}"),
        }
    }

    pub fn sub(self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffRing::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => {
                Coeff::Mod(((*x as u64 * *y as u64) % p as u64) as u32)
            }
            (_, Coeff::Int(x), Coeff::Int(y)) => Coeff::Int(x * y),
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            _ => panic!("coefficient tags do not match ring {self}"),
        }
    }

    /// Multiplicative inverse, if it exists in the ring.
    pub fn inv(self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (CoeffRing::Prime(p), Coeff::Mod(x)) => Some(Coeff::Mod(pow_mod(*x, p - 2, p))),
            (_, Coeff::Int(x)) => {
                if x.abs().is_one() {
                    Some(Coeff::Int(x.clone()))
                } else {
                    None
                }
            }
            (_, Coeff::Rat(x)) => Some(Coeff::Rat(x.recip())),
            _ => panic!("coefficient tags do not match ring {self}"),
        }
    }

    /// Sign used when printing: `-3` prints as ` - 3`, residues never do.
    pub fn is_negative(self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(_) => false,
            Coeff::Int(x) => x.is_negative(),
            Coeff::Rat(x) => x.is_negative(),
        }
    }

    pub fn contains(self, a: &Coeff) -> bool {
        match (self, a) {
            (CoeffRing::Prime(p), Coeff::Mod(x)) => *x < p,
            (CoeffRing::Integers, Coeff::Int(_)) => true,
            (CoeffRing::Rationals, Coeff::Rat(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Prime(p) => write!(f, "F{p}"),
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::Rationals => write!(f, "Q"),
        }
    }
}

impl std::str::FromStr for CoeffRing {
    type Err = CoeffError;

    /// `2`, `3`, `F5`, `GF7`, `Z`, `Q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "Z" | "z" | "ZZ" => return Ok(CoeffRing::Integers),
            "Q" | "q" | "QQ" => return Ok(CoeffRing::Rationals),
            _ => {}
        }
        let digits = t.trim_start_matches("GF").trim_start_matches(['F', 'f']);
        let p: u32 = digits.parse().map_err(|_| CoeffError::Unknown(s.to_string()))?;
        CoeffRing::prime(p)
    }
}

/// A coefficient value. The tag always matches the ring it was made in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Mod(u32),
    Int(BigInt),
    Rat(BigRational),
}

impl Coeff {
    pub fn as_residue(&self) -> Option<u32> {
        match self {
            Coeff::Mod(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Coeff::Mod(_) => None,
            Coeff::Int(x) => Some(BigRational::from_integer(x.clone())),
            Coeff::Rat(x) => Some(x.clone()),
        }
    }

    /// Absolute value as printed (without sign).
    pub(crate) fn magnitude_text(&self) -> String {
        match self {
            Coeff::Mod(x) => x.to_string(),
            Coeff::Int(x) => x.abs().to_string(),
            Coeff::Rat(x) => {
                let a = x.abs();
                if a.is_integer() {
                    a.to_integer().to_string()
                } else {
                    format!("{}/{}", a.numer(), a.denom())
                }
            }
        }
    }

    pub(crate) fn is_unit_magnitude(&self) -> bool {
        match self {
            Coeff::Mod(x) => *x == 1,
            Coeff::Int(x) => x.abs().is_one(),
            Coeff::Rat(x) => x.abs().is_one(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Mod(x) => write!(f, "{x}"),
            Coeff::Int(x) => write!(f, "{x}"),
            Coeff::Rat(x) => write!(f, "{x}"),
        }
    }
}

trait ModFloor {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloor for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u32().expect("residue fits")
    }
}

pub(crate) fn pow_mod(base: u32, mut e: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1 % p;
    let mut b = base as u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
