//! Residue arithmetic in a prime field `F_p`, `2 <= p <= 97`.

use crate::error::{Error, Result};

const SUPPORTED_PRIMES: [u16; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Checks that `p` is one of the supported prime characteristics.
pub fn check_prime(p: u16) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::Parse(format!(
            "characteristic {p} is not a supported prime (2..=97)"
        )))
    }
}

#[inline]
pub fn add(p: u16, a: u16, b: u16) -> u16 {
    debug_assert!(a < p && b < p);
    let s = a as u32 + b as u32;
    (s % p as u32) as u16
}

#[inline]
pub fn sub(p: u16, a: u16, b: u16) -> u16 {
    debug_assert!(a < p && b < p);
    ((a as u32 + p as u32 - b as u32) % p as u32) as u16
}

#[inline]
pub fn neg(p: u16, a: u16) -> u16 {
    debug_assert!(a < p);
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(p: u16, a: u16, b: u16) -> u16 {
    debug_assert!(a < p && b < p);
    ((a as u32 * b as u32) % p as u32) as u16
}

/// Multiplicative inverse of a nonzero residue, by Fermat's little theorem.
pub fn inv(p: u16, a: u16) -> u16 {
    assert!(a != 0 && a < p, "inverse of zero (or out-of-range) residue");
    // a^(p-2) mod p
    let mut base = a as u32;
    let mut exp = p as u32 - 2;
    let mut acc: u32 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u32;
        }
        base = base * base % p as u32;
        exp >>= 1;
    }
    acc as u16
}

/// An element of `F_p` carrying its characteristic.
///
/// Matrices store raw residues with a single shared `p`; this type is the
/// element view handed out at API boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u16,
    p: u16,
}

impl Scalar {
    pub fn new(p: u16, value: u16) -> Result<Self> {
        check_prime(p)?;
        if value >= p {
            return Err(Error::Parse(format!("residue {value} out of range mod {p}")));
        }
        Ok(Scalar { value, p })
    }

    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn characteristic(&self) -> u16 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        assert_eq!(self.p, other.p, "mixed characteristics");
        Scalar { value: add(self.p, self.value, other.value), p: self.p }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        assert_eq!(self.p, other.p, "mixed characteristics");
        Scalar { value: mul(self.p, self.value, other.value), p: self.p }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { value: neg(self.p, self.value), p: self.p }
    }

    pub fn inv(&self) -> Scalar {
        Scalar { value: inv(self.p, self.value), p: self.p }
    }
}

/// Vector helpers on raw residue slices.
pub mod vec_ops {
    use super::*;

    pub fn add_assign(p: u16, a: &mut [u16], b: &[u16]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter_mut().zip(b) {
            *x = add(p, *x, *y);
        }
    }

    pub fn scaled_add_assign(p: u16, a: &mut [u16], c: u16, b: &[u16]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter_mut().zip(b) {
            *x = add(p, *x, mul(p, c, *y));
        }
    }

    pub fn scale(p: u16, c: u16, a: &[u16]) -> Vec<u16> {
        a.iter().map(|&x| mul(p, c, x)).collect()
    }

    pub fn is_zero(a: &[u16]) -> bool {
        a.iter().all(|&x| x == 0)
    }
}
