//! Monic monomials `x^i = x1^i1 * ... * xd^id`.
//!
//! Monomials form a free commutative monoid under multiplication, ordered
//! by divisibility; every nonempty set has a highest common factor given by
//! the componentwise minimum of exponents.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

type Exps = SmallVec<[u32; 4]>;

/// Exponent multi-index of a monic monomial in `d` variables.
///
/// The total order is graded: lower total degree first, and within one
/// degree the monomial with the larger leading exponent first, so that
/// `1 < x1 < x2 < x1^2 < x1*x2 < x2^2 < ...`. Printing and iteration follow
/// this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Exps,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Monomial {
        let exps: Exps = exps.into_iter().collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(dim: usize) -> Monomial {
        Monomial::new(std::iter::repeat_n(0, dim))
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(dim: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(dim);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    fn check_dim(&self, other: &Monomial) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dim(other)?;
        Ok(Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| a + b)))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.dim() == other.dim() && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / divisor`, defined when `divisor` divides `self`.
    pub fn div(&self, divisor: &Monomial) -> Result<Monomial> {
        divisor.check_dim(self)?;
        if !divisor.divides(self) {
            return Err(Error::NotADivisor(divisor.to_string(), self.to_string()));
        }
        Ok(Monomial::new(self.exps.iter().zip(&divisor.exps).map(|(a, b)| a - b)))
    }

    /// Highest common factor of a nonempty collection.
    pub fn hcf<'a>(set: impl IntoIterator<Item = &'a Monomial>) -> Result<Monomial> {
        let mut iter = set.into_iter();
        let first = iter.next().ok_or(Error::EmptySet)?.clone();
        iter.try_fold(first, |acc, m| {
            acc.check_dim(m)?;
            Ok(Monomial::new(acc.exps.iter().zip(&m.exps).map(|(a, b)| *a.min(b))))
        })
    }

    /// All monomials in `dim` variables of exactly the given degree, in order.
    pub fn of_degree(dim: usize, degree: u32) -> Vec<Monomial> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(Monomial::new(prefix.iter().copied()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(dim, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(dim, degree, &mut Vec::with_capacity(dim), &mut out);
        out
    }

    /// All monomials with `lo <= degree <= hi`, in order.
    pub fn up_to_degree(dim: usize, lo: u32, hi: u32) -> Vec<Monomial> {
        (lo..=hi).flat_map(|k| Monomial::of_degree(dim, k)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
