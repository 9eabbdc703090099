//! Exact coefficient rings.
//!
//! Three integral domains ship: the integers `Z`, the rationals `Q`, and
//! prime fields `F_c`. A [`Ring`] is a small `Copy` descriptor; an [`Elem`]
//! carries enough information to recover its ring, so mixing elements of
//! different rings is detected at run time.
//!
//! Arithmetic is exact. Rationals are kept in lowest terms with positive
//! denominator (guaranteed by `num-rational`), prime-field values are reduced
//! representatives in `0..c`.
//!
//! Adding another exact domain means adding a [`RingKind`] variant and an
//! [`Elem`] variant; callers only ever go through the methods below.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integers,
    Rationals,
    /// Prime field of the given characteristic.
    PrimeField(u64),
}

/// Descriptor of a supported coefficient ring.
///
/// The only way to build a prime field is [`Ring::prime_field`], which
/// rejects composite moduli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    kind: RingKind,
}

impl Ring {
    pub const Z: Ring = Ring { kind: RingKind::Integers };
    pub const Q: Ring = Ring { kind: RingKind::Rationals };

    pub fn prime_field(c: u64) -> Result<Ring> {
        if !is_prime(c) {
            return Err(Error::CompositeCharacteristic(c));
        }
        Ok(Ring { kind: RingKind::PrimeField(c) })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    /// 0 for `Z` and `Q`, `c` for `F_c`.
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            RingKind::PrimeField(c) => c,
            _ => 0,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, RingKind::Integers)
    }

    pub fn zero(&self) -> Elem {
        self.from_integer(0)
    }

    pub fn one(&self) -> Elem {
        self.from_integer(1)
    }

    /// Image of `n` under the unique ring homomorphism `Z -> K`.
    pub fn from_integer(&self, n: i64) -> Elem {
        match self.kind {
            RingKind::Integers => Elem::Int(BigInt::from(n)),
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            RingKind::PrimeField(c) => Elem::Mod { value: (n as i128).rem_euclid(c as i128) as u64, modulus: c },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.kind {
            RingKind::Integers => Elem::Int(n.clone()),
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            RingKind::PrimeField(c) => Elem::Mod { value: n.mod_floor(&BigInt::from(c)).to_u64().unwrap(), modulus: c },
        }
    }

    /// Embeds a rational number; fails unless it lies in the ring.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        match self.kind {
            RingKind::Rationals => Ok(Elem::Rat(q.clone())),
            _ if q.is_integer() => Ok(self.from_bigint(q.numer())),
            RingKind::PrimeField(_) => {
                let den = self.from_bigint(q.denom());
                self.from_bigint(q.numer()).checked_mul(&den.unit_inverse()?)
            }
            RingKind::Integers => Err(Error::InvalidArgument(format!("{q} is not an integer"))),
        }
    }

    /// The fraction field, for rings of characteristic zero.
    pub fn fraction_field(&self) -> Result<Ring> {
        match self.kind {
            RingKind::PrimeField(_) => Err(Error::NeedsCharZero { op: "fraction_field", ring: *self }),
            _ => Ok(Ring::Q),
        }
    }

    /// Parses a literal: optional sign, digits, optionally `/` digits.
    ///
    /// Fractions are accepted only in `Q`; prime-field literals are integers
    /// reduced modulo the characteristic.
    pub fn parse_literal(&self, text: &str) -> std::result::Result<Elem, String> {
        let t = text.trim();
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let parse_digits = |s: &str| -> std::result::Result<BigInt, String> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("malformed literal {t:?}"));
            }
            s.parse::<BigInt>().map_err(|e| e.to_string())
        };
        let n = parse_digits(num)? * sign;
        match den {
            None => Ok(self.from_bigint(&n)),
            Some(d) => {
                let d = parse_digits(d)?;
                if d.is_zero() {
                    return Err(format!("zero denominator in {t:?}"));
                }
                match self.kind {
                    RingKind::Rationals => Ok(Elem::Rat(BigRational::new(n, d))),
                    _ => Err(format!("coefficient {t:?} is not in {self}")),
                }
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::PrimeField(c) => write!(f, "Fp {c}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of one of the supported rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Elem {
    pub fn ring(&self) -> Ring {
        match self {
            Elem::Int(_) => Ring::Z,
            Elem::Rat(_) => Ring::Q,
            Elem::Mod { modulus, .. } => Ring { kind: RingKind::PrimeField(*modulus) },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Int(a) => a.is_zero(),
            Elem::Rat(a) => a.is_zero(),
            Elem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Int(a) => a.is_one(),
            Elem::Rat(a) => a.is_one(),
            Elem::Mod { value, .. } => *value == 1,
        }
    }

    fn same_ring(&self, other: &Elem) -> Result<()> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.ring(), right: other.ring() })
        }
    }

    pub fn checked_add(&self, other: &Elem) -> Result<Elem> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a + b),
            (Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a + b),
            (Elem::Mod { value: a, modulus }, Elem::Mod { value: b, .. }) => {
                Elem::Mod { value: ((*a as u128 + *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Elem) -> Result<Elem> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Elem) -> Result<Elem> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => Elem::Int(a * b),
            (Elem::Rat(a), Elem::Rat(b)) => Elem::Rat(a * b),
            (Elem::Mod { value: a, modulus }, Elem::Mod { value: b, .. }) => {
                Elem::Mod { value: ((*a as u128 * *b as u128) % *modulus as u128) as u64, modulus: *modulus }
            }
            _ => unreachable!(),
        })
    }

    fn neg_ref(&self) -> Elem {
        match self {
            Elem::Int(a) => Elem::Int(-a),
            Elem::Rat(a) => Elem::Rat(-a),
            Elem::Mod { value, modulus } => Elem::Mod { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }

    pub fn pow(&self, mut e: u32) -> Elem {
        let mut base = self.clone();
        let mut acc = self.ring().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Member of the multiplicative group `K^×`.
    pub fn is_unit(&self) -> bool {
        match self {
            Elem::Int(a) => a.abs().is_one(),
            Elem::Rat(a) => !a.is_zero(),
            Elem::Mod { value, .. } => *value != 0,
        }
    }

    pub fn unit_inverse(&self) -> Result<Elem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.to_string()));
        }
        Ok(match self {
            Elem::Int(a) => Elem::Int(a.clone()),
            Elem::Rat(a) => Elem::Rat(a.recip()),
            Elem::Mod { value, modulus } => {
                let inv =
                    BigInt::from(*value).extended_gcd(&BigInt::from(*modulus)).x.mod_floor(&BigInt::from(*modulus));
                Elem::Mod { value: inv.to_u64().unwrap(), modulus: *modulus }
            }
        })
    }

    /// `self / other`, defined when the quotient lies in the ring.
    pub fn exact_div(&self, other: &Elem) -> Result<Elem> {
        self.same_ring(other)?;
        match (self, other) {
            (Elem::Int(a), Elem::Int(b)) => {
                if b.is_zero() || !(a % b).is_zero() {
                    return Err(Error::NotDivisible(a.to_string(), b.to_string()));
                }
                Ok(Elem::Int(a / b))
            }
            _ => {
                if other.is_zero() {
                    return Err(Error::NotDivisible(self.to_string(), other.to_string()));
                }
                self.checked_mul(&other.unit_inverse()?)
            }
        }
    }

    /// Embedding into the fraction field (characteristic zero only).
    pub fn to_fraction_field(&self) -> Result<Elem> {
        match self {
            Elem::Int(a) => Ok(Elem::Rat(BigRational::from_integer(a.clone()))),
            Elem::Rat(_) => Ok(self.clone()),
            Elem::Mod { .. } => Err(Error::NeedsCharZero { op: "to_fraction_field", ring: self.ring() }),
        }
    }

    /// Whether a characteristic-zero element lies in `Z`.
    pub fn is_integral(&self) -> Result<bool> {
        match self {
            Elem::Int(_) => Ok(true),
            Elem::Rat(a) => Ok(a.is_integer()),
            Elem::Mod { .. } => Err(Error::NeedsCharZero { op: "is_integral", ring: self.ring() }),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Elem::Int(a) => Some(BigRational::from_integer(a.clone())),
            Elem::Rat(a) => Some(a.clone()),
            Elem::Mod { .. } => None,
        }
    }

    /// True when the printed literal begins with a minus sign.
    pub fn is_negative_literal(&self) -> bool {
        match self {
            Elem::Int(a) => a.is_negative(),
            Elem::Rat(a) => a.is_negative(),
            Elem::Mod { .. } => false,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(a) => write!(f, "{a}"),
            Elem::Rat(a) if a.is_integer() => write!(f, "{}", a.numer()),
            Elem::Rat(a) => write!(f, "{}/{}", a.numer(), a.denom()),
            Elem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator impls assume both operands come from the same ring. Containers
// validate this on construction, so a mismatch here is a logic error.

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        self.checked_add(rhs).expect("ring mismatch in addition")
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        self.checked_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        self.checked_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.neg_ref()
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(c: u64) -> Ring {
        Ring::prime_field(c).unwrap()
    }

    fn q(n: i64, d: i64) -> Elem {
        Elem::Rat(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(&Ring::Z.from_integer(2) + &Ring::Z.from_integer(3), Ring::Z.from_integer(5));
        assert_eq!(&f(3).from_integer(2) * &f(3).from_integer(2), f(3).from_integer(1));
        assert_eq!(&q(1, 2) + &q(1, 3), q(5, 6));
        assert_eq!(-&f(5).from_integer(2), f(5).from_integer(3));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Ring::Z.from_integer(1);
        let b = f(3).from_integer(1);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch { .. })));
        assert!(f(3).one().checked_mul(&f(5).one()).is_err());
    }

    #[test]
    fn units() {
        assert!(!Ring::Z.from_integer(2).is_unit());
        let m1 = Ring::Z.from_integer(-1);
        assert!(m1.is_unit());
        assert_eq!(m1.unit_inverse().unwrap(), m1);
        assert_eq!(f(5).from_integer(3).unit_inverse().unwrap(), f(5).from_integer(2));
        assert!(matches!(Ring::Z.from_integer(2).unit_inverse(), Err(Error::NotAUnit(_))));
        assert!(f(7).zero().unit_inverse().is_err());
        assert_eq!(q(2, 3).unit_inverse().unwrap(), q(3, 2));
    }

    #[test]
    fn integer_images() {
        assert_eq!(f(3).from_integer(7), f(3).from_integer(1));
        assert_eq!(Ring::Q.from_integer(0), Ring::Q.zero());
        assert_eq!(f(5).from_integer(-1).to_string(), "4");
    }

    #[test]
    fn fraction_field() {
        assert_eq!(Ring::Z.from_integer(3).to_fraction_field().unwrap(), q(3, 1));
        assert!(q(6, 2).is_integral().unwrap());
        assert!(!q(1, 2).is_integral().unwrap());
        assert!(f(3).one().to_fraction_field().is_err());
        assert!(f(3).one().is_integral().is_err());
        assert!(f(3).fraction_field().is_err());
        assert_eq!(Ring::Z.fraction_field().unwrap(), Ring::Q);
    }

    #[test]
    fn composite_moduli_rejected() {
        for c in [0, 1, 4, 6, 9, 15, 91] {
            assert_eq!(Ring::prime_field(c), Err(Error::CompositeCharacteristic(c)));
        }
        assert_eq!(f(101).characteristic(), 101);
    }

    #[test]
    fn literals() {
        assert_eq!(Ring::Q.parse_literal("-3/6").unwrap(), q(-1, 2));
        assert_eq!(Ring::Q.parse_literal("4/2").unwrap().to_string(), "2");
        assert_eq!(f(3).parse_literal("-1").unwrap().to_string(), "2");
        assert!(Ring::Z.parse_literal("1/2").is_err());
        assert!(f(3).parse_literal("1/2").is_err());
        assert!(Ring::Q.parse_literal("1/0").is_err());
        assert!(Ring::Z.parse_literal("1x").is_err());
        assert!(Ring::Z.parse_literal("").is_err());
    }

    #[test]
    fn exact_division() {
        let z = |n| Ring::Z.from_integer(n);
        assert_eq!(z(6).exact_div(&z(-3)).unwrap(), z(-2));
        assert!(z(7).exact_div(&z(2)).is_err());
        assert_eq!(f(7).from_integer(3).exact_div(&f(7).from_integer(2)).unwrap(), f(7).from_integer(5));
    }

    fn rings() -> impl Strategy<Value = Ring> {
        prop_oneof![Just(Ring::Z), Just(Ring::Q), Just(f(2)), Just(f(3)), Just(f(5)), Just(f(1_000_003)),]
    }

    fn elem(r: Ring) -> impl Strategy<Value = Elem> {
        (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| if r == Ring::Q { q(n, d) } else { r.from_integer(n) })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in rings().prop_flat_map(|r| (elem(r), elem(r), elem(r)))) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn from_integer_is_a_homomorphism(r in rings(), a in -1_000_000i64..=1_000_000, b in -1_000_000i64..=1_000_000) {
            prop_assert_eq!(r.from_integer(a + b), &r.from_integer(a) + &r.from_integer(b));
            prop_assert_eq!(r.from_integer(a * b), &r.from_integer(a) * &r.from_integer(b));
        }

        #[test]
        fn prime_field_images_are_periodic(c in prop::sample::select(vec![2u64, 3, 5, 7, 13]), k in -10_000i64..10_000) {
            let r = f(c);
            prop_assert_eq!(r.from_integer(k + c as i64), r.from_integer(k));
        }

        #[test]
        fn inverse_is_an_involution(a in rings().prop_flat_map(elem)) {
            if a.is_unit() {
                let inv = a.unit_inverse().unwrap();
                prop_assert!((&a * &inv).is_one());
                prop_assert_eq!(inv.unit_inverse().unwrap(), a);
            }
        }
    }
}
