//! Prime fields `Z/p`.
//!
//! Scalars are stored as bare `u32` residues and every operation goes through
//! a [`Field`] value, which keeps matrices compact. [`FieldElement`] bundles a
//! residue with its modulus for call sites that prefer operator syntax.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The prime field `Z/p` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Default for Field {
    fn default() -> Self {
        Field::Z2
    }
}

impl Field {
    pub const Z2: Field = Field { p: 2 };

    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Field { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in Z/{}", self.p);
        if self.p == 2 {
            return 1;
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        self.reduce(t0)
    }

    #[inline]
    pub fn div(self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn elem(self, value: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(value),
            field: self,
        }
    }

    /// Checks that a raw integer is already a residue.
    pub fn residue(self, value: u64, context: impl FnOnce() -> String) -> Result<u32> {
        if value >= self.p as u64 {
            return Err(Error::Residue {
                value,
                p: self.p,
                context: context(),
            });
        }
        Ok(value as u32)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue together with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> FieldElement {
        FieldElement {
            value: self.field.inv(self.value),
            field: self.field,
        }
    }

    fn same(self, other: FieldElement) -> Field {
        assert_eq!(self.field, other.field, "mixed moduli");
        self.field
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        let k = self.same(rhs);
        FieldElement {
            value: k.add(self.value, rhs.value),
            field: k,
        }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        let k = self.same(rhs);
        FieldElement {
            value: k.sub(self.value, rhs.value),
            field: k,
        }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        let k = self.same(rhs);
        FieldElement {
            value: k.mul(self.value, rhs.value),
            field: k,
        }
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: Self) -> Self {
        let k = self.same(rhs);
        FieldElement {
            value: k.div(self.value, rhs.value),
            field: k,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_tiny_moduli() {
        for p in [0, 1, 4, 9, 15, 1 << 31] {
            assert!(Field::new(p).is_err(), "{p}");
        }
        for p in [2, 3, 5, 7, 65_537, 2_147_483_647] {
            assert!(Field::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn exhaustive_axioms_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let k = Field::new(p).unwrap();
            let all: Vec<FieldElement> = (0..p as i64).map(|v| k.elem(v)).collect();
            let zero = k.elem(0);
            let one = k.elem(1);
            for &a in &all {
                assert_eq!(a + zero, a);
                assert_eq!(a * one, a);
                assert_eq!(a + (-a), zero);
                if !a.is_zero() {
                    assert_eq!(a * a.inv(), one);
                }
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!((a - b) + b, a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn large_prime_inverse() {
        let k = Field::new(2_147_483_647).unwrap();
        for a in [1u32, 2, 12345, 2_147_483_646] {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
    }
}
