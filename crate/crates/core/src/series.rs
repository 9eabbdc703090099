//! Truncated multivariate formal power series.
//!
//! A [`Series`] stores the exact coefficients of every monomial of total
//! degree at most `cap` and nothing above it. All operations here are exact
//! on that window: a coefficient of degree `n <= cap` of a product or
//! inverse only depends on coefficients of degree `<= n` of the inputs.
//!
//! Series with different rings, dimensions or caps never mix; binary
//! operations report a mismatch instead of coercing.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::ring::{Elem, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    ring: Ring,
    dim: usize,
    cap: u32,
    /// Nonzero coefficients of monomials of degree `<= cap`.
    terms: BTreeMap<Monomial, Elem>,
}

impl Series {
    pub fn zero(ring: Ring, dim: usize, cap: u32) -> Series {
        Series { ring, dim, cap, terms: BTreeMap::new() }
    }

    pub fn one(ring: Ring, dim: usize, cap: u32) -> Series {
        Series::constant(ring.one(), dim, cap)
    }

    pub fn constant(c: Elem, dim: usize, cap: u32) -> Series {
        let mut s = Series::zero(c.ring(), dim, cap);
        if !c.is_zero() {
            s.terms.insert(Monomial::one(dim), c);
        }
        s
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(ring: Ring, dim: usize, cap: u32, i: usize) -> Series {
        let mut s = Series::zero(ring, dim, cap);
        if cap >= 1 {
            s.terms.insert(Monomial::var(dim, i), ring.one());
        }
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs.
    ///
    /// Repeated monomials are summed, terms above `cap` are dropped and zero
    /// coefficients are purged.
    pub fn from_terms(
        ring: Ring,
        dim: usize,
        cap: u32,
        terms: impl IntoIterator<Item = (Monomial, Elem)>,
    ) -> Result<Series> {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(Error::DimMismatch(dim, m.dim()));
            }
            if c.ring() != ring {
                return Err(Error::RingMismatch { left: ring, right: c.ring() });
            }
            if m.degree() <= cap {
                accumulate(&mut acc, m, c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series { ring, dim, cap, terms: acc })
    }

    pub(crate) fn from_raw(ring: Ring, dim: usize, cap: u32, mut terms: BTreeMap<Monomial, Elem>) -> Series {
        terms.retain(|m, c| !c.is_zero() && m.degree() <= cap);
        Series { ring, dim, cap, terms }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    /// The support `spt(f)`.
    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::one(self.dim))
    }

    /// Membership in the maximal ideal (zero constant term).
    pub fn in_maximal_ideal(&self) -> bool {
        !self.terms.contains_key(&Monomial::one(self.dim))
    }

    pub fn check_compatible(&self, other: &Series) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring, right: other.ring });
        }
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    /// Cap-relative equality; comparing different caps is an error.
    pub fn checked_eq(&self, other: &Series) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.terms == other.terms)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Series) -> Series {
        let mut acc = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut acc, m.clone(), c.clone());
        }
        Series::from_raw(self.ring, self.dim, self.cap, acc)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Series { terms, ..self.clone_shape() }
    }

    pub fn scale(&self, c: &Elem) -> Result<Series> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch { left: self.ring, right: c.ring() });
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        Ok(Series::from_raw(self.ring, self.dim, self.cap, terms))
    }

    /// Product `(fg)_m = sum_{p | m} f_p g_{m/p}` on all `m` of degree `<= cap`.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Series) -> Series {
        let mut acc = BTreeMap::new();
        for (p, a) in &self.terms {
            let room = self.cap - p.degree();
            // `other.terms` is sorted by degree, so the rest is out of range.
            for (q, b) in other.terms.iter().take_while(|(q, _)| q.degree() <= room) {
                let m = Monomial::new(p.exponents().iter().zip(q.exponents()).map(|(x, y)| x + y));
                accumulate(&mut acc, m, a * b);
            }
        }
        Series::from_raw(self.ring, self.dim, self.cap, acc)
    }

    pub fn pow(&self, mut e: u32) -> Series {
        let mut base = self.clone();
        let mut acc = Series::one(self.ring, self.dim, self.cap);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Multiplies by a monomial; the result is known up to `cap + deg m`.
    pub fn times_monomial(&self, m: &Monomial) -> Result<Series> {
        if m.dim() != self.dim {
            return Err(Error::DimMismatch(self.dim, m.dim()));
        }
        let terms = self.terms.iter().map(|(p, c)| (p.mul(m).expect("dimension checked"), c.clone())).collect();
        Ok(Series::from_raw(self.ring, self.dim, self.cap + m.degree(), terms))
    }

    /// The vertex `v(f)`: highest common factor of the support.
    pub fn vertex(&self) -> Result<Monomial> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        Monomial::hcf(self.terms.keys())
    }

    /// The series `h` with `f = v(f) h` and `v(h) = 1`.
    ///
    /// Coefficients of `h` are known up to degree `cap - deg v(f)`, which
    /// becomes the cap of the result.
    pub fn vertex_cofactor(&self) -> Result<Series> {
        let v = self.vertex()?;
        let terms =
            self.terms.iter().map(|(m, c)| (m.div(&v).expect("vertex divides the support"), c.clone())).collect();
        Ok(Series::from_raw(self.ring, self.dim, self.cap - v.degree(), terms))
    }

    /// Inverse in the ring of series; requires a unit constant term.
    pub fn unit_inverse(&self) -> Result<Series> {
        let f0 = self.constant_term();
        let f0_inv = f0.unit_inverse()?;
        // f = f0 (1 + h) with h in the maximal ideal; (1 + h)^-1 = 1 - h + h^2 - ...
        let h = self.scale(&f0_inv)?.sub(&Series::one(self.ring, self.dim, self.cap))?;
        let one = Series::one(self.ring, self.dim, self.cap);
        let mut k = one.clone();
        for _ in 0..self.cap {
            k = one.add_unchecked(&h.mul_unchecked(&k).neg());
        }
        k.scale(&f0_inv)
    }

    /// Minimum degree over the support; `None` stands for infinity (zero series).
    pub fn lower_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Degree-`k` homogeneous part.
    pub fn homogeneous_part(&self, k: u32) -> Series {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        Series { terms, ..self.clone_shape() }
    }

    /// Forgets coefficients above a lower cap.
    pub fn truncate(&self, cap: u32) -> Result<Series> {
        if cap > self.cap {
            return Err(Error::InvalidArgument(format!("cannot raise the cap from {} to {cap}", self.cap)));
        }
        Ok(Series::from_raw(self.ring, self.dim, cap, self.terms.clone()))
    }

    /// Coefficientwise image under a map between rings.
    pub fn map_coeffs(&self, ring: Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Series> {
        let terms = self.terms.iter().map(|(m, c)| Ok((m.clone(), f(c)?))).collect::<Result<Vec<_>>>()?;
        Series::from_terms(ring, self.dim, self.cap, terms)
    }

    pub fn to_fraction_field(&self) -> Result<Series> {
        let q = self.ring.fraction_field()?;
        self.map_coeffs(q, Elem::to_fraction_field)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| serde_json::json!({ "exponents": m.exponents(), "coeff": c.to_string() }))
                .collect(),
        )
    }

    fn clone_shape(&self) -> Series {
        Series::zero(self.ring, self.dim, self.cap)
    }
}

fn accumulate(acc: &mut BTreeMap<Monomial, Elem>, m: Monomial, c: Elem) {
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            *e.get_mut() = sum;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl fmt::Display for Series {
    /// Terms in graded order, e.g. `x1 - 1/2*x1^2 + x1*x2^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative_literal();
            let mag = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
