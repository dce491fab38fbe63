//! Arithmetic modulo the 62-bit prime `2^62 - 57`, used for randomized
//! evaluation of tree polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

/// The largest prime below `2^62`.
pub const PRIME: u64 = (1u64 << 62) - 57;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(v: u64) -> Fp {
        Fp(v % PRIME)
    }

    pub fn from_i128(v: i128) -> Fp {
        Fp(v.rem_euclid(PRIME as i128) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Fp {
        Fp(rng.gen_range(1..PRIME))
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; the inverse of zero is zero.
    pub fn inverse(self) -> Fp {
        self.pow(PRIME - 2)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + PRIME - rhs.0 })
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::ZERO - self
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp(((self.0 as u128 * rhs.0 as u128) % PRIME as u128) as u64)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
