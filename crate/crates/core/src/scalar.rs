//! Scalar abstractions.
//!
//! Everything in this crate is exact. Apartment coordinates and gradings are
//! rationals ([`ExactRational`]); reductions of lattice endomorphisms live over
//! a prime field ([`Fp`]). Linear algebra is written against [`Field`] so the
//! same routines serve both.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Image of an integer under the canonical map `Z -> Self`.
    fn from_i64(n: i64) -> Self;
}

/// An ordered exact field of rationals: what apartment coordinates are made of.
pub trait ExactRational: Field + Ord + Signed + fmt::Display + Send + Sync + 'static {
    fn from_ratio(numer: i64, denom: i64) -> Self;
    fn floor_to_i64(&self) -> i64;
    fn ceil_to_i64(&self) -> i64;
    /// `Some(n)` iff the value is the integer `n`.
    fn to_i64_exact(&self) -> Option<i64>;
    /// p-adic valuation; `None` for zero.
    fn p_adic_valuation(&self, p: u64) -> Option<i64>;
}

fn int_valuation<I: Integer + Clone>(mut n: I, p: I) -> i64 {
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

impl Field for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

impl ExactRational for Ratio<i64> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }
    fn floor_to_i64(&self) -> i64 {
        self.floor().to_integer()
    }
    fn ceil_to_i64(&self) -> i64 {
        self.ceil().to_integer()
    }
    fn to_i64_exact(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }
    fn p_adic_valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = p as i64;
        Some(int_valuation(*self.numer(), p) - int_valuation(*self.denom(), p))
    }
}

impl Field for Ratio<BigInt> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }
}

impl ExactRational for Ratio<BigInt> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(BigInt::from(numer), BigInt::from(denom))
    }
    fn floor_to_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor fits in i64")
    }
    fn ceil_to_i64(&self) -> i64 {
        self.ceil().to_integer().to_i64().expect("ceil fits in i64")
    }
    fn to_i64_exact(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
    fn p_adic_valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(p);
        Some(int_valuation(self.numer().clone(), p.clone()) - int_valuation(self.denom().clone(), p))
    }
}

/// Element of the prime field `F_P`. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inverse().expect("division by zero in F_p")
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
}
