//! Iterates indexed by `c`-adic integers in characteristic `c`.
//!
//! Over `F_c` every coefficient of `g^k` is periodic in `k`, with period
//! `c^r` for monomials of degree at most `c^r`. So `g^z` for `z` in `Z_c`
//! depends only on `z mod c^t` once `c^t >= cap`, and is the integer iterate
//! `g^(k_t)` with `k_t = z mod c^t`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::maps::FormalMap;
use crate::ring::is_prime;

/// `z mod c^t`, as little-endian base-`c` digits `z_0, ..., z_(t-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CAdicInt {
    c: u64,
    digits: Vec<u64>,
}

impl CAdicInt {
    pub fn from_digits(c: u64, digits: Vec<u64>) -> Result<CAdicInt> {
        if !is_prime(c) {
            return Err(Error::CompositeCharacteristic(c));
        }
        if digits.is_empty() {
            return Err(Error::InvalidArgument("a c-adic integer needs at least one digit".into()));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= c) {
            return Err(Error::InvalidArgument(format!("digit {d} out of range for base {c}")));
        }
        Ok(CAdicInt { c, digits })
    }

    /// Digits of `n mod c^t`; negative `n` wraps around.
    pub fn from_integer(n: &BigInt, c: u64, t: usize) -> Result<CAdicInt> {
        if t == 0 {
            return Err(Error::InvalidArgument("a c-adic integer needs at least one digit".into()));
        }
        if !is_prime(c) {
            return Err(Error::CompositeCharacteristic(c));
        }
        let modulus = BigInt::from(BigUint::from(c).pow(t as u32));
        let mut v = n.mod_floor(&modulus);
        let base = BigInt::from(c);
        let digits = (0..t)
            .map(|_| {
                let (q, r) = v.div_mod_floor(&base);
                v = q;
                r.to_u64().expect("digit below c")
            })
            .collect();
        Ok(CAdicInt { c, digits })
    }

    /// Digits of `n^-1 mod c^t`.
    pub fn inverse_unit(n: &BigInt, c: u64, t: usize) -> Result<CAdicInt> {
        if !is_prime(c) {
            return Err(Error::CompositeCharacteristic(c));
        }
        if (n % BigInt::from(c)).is_zero() {
            return Err(Error::NotAUnit(format!("{n} in Z_{c}")));
        }
        let modulus = BigInt::from(BigUint::from(c).pow(t as u32));
        let e = n.mod_floor(&modulus).extended_gcd(&modulus);
        debug_assert!(e.gcd.is_one());
        CAdicInt::from_integer(&e.x, c, t)
    }

    pub fn base(&self) -> u64 {
        self.c
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `c^t`.
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.c).pow(self.len() as u32)
    }

    /// `k_t = sum_s z_s c^s`, in `[0, c^t)`.
    pub fn value(&self) -> BigUint {
        self.digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * self.c + d)
    }

    /// Sum with carry, modulo `c^t` for the shorter length `t`.
    pub fn add(&self, other: &CAdicInt) -> Result<CAdicInt> {
        if self.c != other.c {
            return Err(Error::InvalidArgument(format!("bases {} and {} differ", self.c, other.c)));
        }
        let t = self.len().min(other.len());
        let mut carry = 0;
        let digits = (0..t)
            .map(|i| {
                let s = self.digits[i] + other.digits[i] + carry;
                carry = s / self.c;
                s % self.c
            })
            .collect();
        Ok(CAdicInt { c: self.c, digits })
    }

    /// First `t` digits.
    pub fn truncate(&self, t: usize) -> Result<CAdicInt> {
        CAdicInt::from_digits(self.c, self.digits[..t.min(self.len())].to_vec())
    }

    /// The same `z` known to one more digit.
    pub fn extend(&self, digit: u64) -> Result<CAdicInt> {
        let mut digits = self.digits.clone();
        digits.push(digit);
        CAdicInt::from_digits(self.c, digits)
    }

    pub fn agrees_with(&self, other: &CAdicInt, r: usize) -> bool {
        self.c == other.c && r <= self.len() && r <= other.len() && self.digits[..r] == other.digits[..r]
    }
}

impl fmt::Display for CAdicInt {
    /// `digits (z_0,...,z_(t-1)) mod c^t`, e.g. `(2,1) mod 9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.digits.iter().map(u64::to_string).collect();
        write!(f, "({}) mod {}", ds.join(","), self.modulus())
    }
}

/// Least `t >= 1` with `c^t >= cap`.
pub fn required_digits(c: u64, cap: u32) -> usize {
    let mut t = 1;
    let mut p = u128::from(c);
    while p < u128::from(cap) {
        p *= u128::from(c);
        t += 1;
    }
    t
}

fn check_tangent_charc(g: &FormalMap, op: &'static str) -> Result<u64> {
    let c = g.ring().characteristic();
    if c == 0 {
        return Err(Error::NeedsCharPositive { op, ring: g.ring() });
    }
    if !g.is_tangent_identity() {
        return Err(Error::NotTangent);
    }
    Ok(c)
}

/// `g^z`, computed as `g^(k_t)`.
pub fn cadic_iterate(g: &FormalMap, z: &CAdicInt) -> Result<FormalMap> {
    let c = check_tangent_charc(g, "c-adic iteration")?;
    if z.base() != c {
        return Err(Error::InvalidArgument(format!("digits are base {}, ring has characteristic {c}", z.base())));
    }
    let need = required_digits(c, g.cap());
    if z.len() < need {
        return Err(Error::InsufficientDigits { c, cap: g.cap(), need, have: z.len() });
    }
    Ok(g.iterate_big(&z.value()))
}

/// `g^(1/n)` for `n` prime to `c`, checked by composing it `n` times.
pub fn cadic_root(g: &FormalMap, n: i64) -> Result<FormalMap> {
    let c = check_tangent_charc(g, "c-adic roots")?;
    let t = required_digits(c, g.cap());
    let inv = CAdicInt::inverse_unit(&BigInt::from(n), c, t)?;
    let h = cadic_iterate(g, &inv)?;
    let back = if n < 0 {
        h.invert()?.iterate_big(&BigUint::from(n.unsigned_abs()))
    } else {
        h.iterate_big(&BigUint::from(n as u64))
    };
    if &back != g {
        return Err(Error::VerificationFailed(format!("{n}-th root does not compose back to the map")));
    }
    Ok(h)
}

/// For `z`, `z'` agreeing on their first `r` digits, checks that `g^z` and
/// `g^z'` agree on every coefficient of degree `< c^r`.
pub fn continuity_check(g: &FormalMap, z: &CAdicInt, z2: &CAdicInt, r: usize) -> Result<bool> {
    if !z.agrees_with(z2, r) {
        return Err(Error::InvalidArgument(format!("digit vectors differ within the first {r} digits")));
    }
    let a = cadic_iterate(g, z)?;
    let b = cadic_iterate(g, z2)?;
    let below = BigUint::from(z.base()).pow(r as u32) - BigUint::one();
    let top = below.to_u32().map_or(g.cap(), |d| d.min(g.cap()));
    Ok(a.truncate(top)? == b.truncate(top)?)
}

/// Checks that `g^z` does not change when `z` is known to one more digit,
/// for both extreme values `0` and `c - 1` of that digit.
pub fn truncation_stable(g: &FormalMap, z: &CAdicInt) -> Result<bool> {
    let base = cadic_iterate(g, z)?;
    for digit in [0, z.base() - 1] {
        if cadic_iterate(g, &z.extend(digit)?)? != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signed representative of `z` in `(-c^t/2, c^t/2]`.
pub fn balanced_value(z: &CAdicInt) -> BigInt {
    let v = BigInt::from(z.value());
    let m = BigInt::from(z.modulus());
    if &v * 2 > m {
        v - m
    } else {
        v
    }
}
