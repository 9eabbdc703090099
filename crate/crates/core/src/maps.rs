//! Formal self-maps of `K^d` fixing the origin.
//!
//! A [`FormalMap`] is a `d`-tuple of series with zero constant terms. Under
//! composition these form a monoid whose units are exactly the maps with an
//! invertible linear part.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linear::LinearPart;
use crate::monomial::Monomial;
use crate::ring::{Elem, Ring};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalMap {
    components: Vec<Series>,
}

impl FormalMap {
    /// Validates shape and membership in the maximal ideal.
    pub fn new(components: Vec<Series>) -> Result<FormalMap> {
        let first =
            components.first().ok_or_else(|| Error::InvalidArgument("a map needs at least one component".into()))?;
        let d = components.len();
        for (i, c) in components.iter().enumerate() {
            first.check_compatible(c)?;
            if c.dim() != d {
                return Err(Error::DimMismatch(d, c.dim()));
            }
            if !c.in_maximal_ideal() {
                return Err(Error::ConstantTerm(i + 1));
            }
        }
        Ok(FormalMap { components })
    }

    pub fn identity(ring: Ring, dim: usize, cap: u32) -> FormalMap {
        FormalMap { components: (0..dim).map(|i| Series::var(ring, dim, cap, i)).collect() }
    }

    /// The linear map `x -> A x`.
    pub fn linear(a: &LinearPart, cap: u32) -> FormalMap {
        let d = a.dim();
        let components = (0..d)
            .map(|i| {
                Series::from_terms(a.ring(), d, cap, (0..d).map(|j| (Monomial::var(d, j), a.get(i, j).clone())))
                    .expect("entries share the ring")
            })
            .collect();
        FormalMap { components }
    }

    pub fn ring(&self) -> Ring {
        self.components[0].ring()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn cap(&self) -> u32 {
        self.components[0].cap()
    }

    pub fn components(&self) -> &[Series] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Series {
        &self.components[i]
    }

    /// The vector coefficient `g_m`.
    pub fn coeff(&self, m: &Monomial) -> Vec<Elem> {
        self.components.iter().map(|c| c.coeff(m)).collect()
    }

    pub fn check_compatible(&self, other: &FormalMap) -> Result<()> {
        self.components[0].check_compatible(&other.components[0])
    }

    pub fn checked_eq(&self, other: &FormalMap) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self == other)
    }

    pub fn is_identity(&self) -> bool {
        *self == FormalMap::identity(self.ring(), self.dim(), self.cap())
    }

    pub fn add(&self, other: &FormalMap) -> Result<FormalMap> {
        self.check_compatible(other)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add_unchecked(b)).collect();
        Ok(FormalMap { components })
    }

    pub fn sub(&self, other: &FormalMap) -> Result<FormalMap> {
        self.check_compatible(other)?;
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.add_unchecked(&b.neg())).collect();
        Ok(FormalMap { components })
    }

    pub fn scale(&self, c: &Elem) -> Result<FormalMap> {
        let components = self.components.iter().map(|s| s.scale(c)).collect::<Result<_>>()?;
        Ok(FormalMap { components })
    }

    /// `f o g = (f_1 o g, ..., f_d o g)`.
    pub fn compose(&self, g: &FormalMap) -> Result<FormalMap> {
        self.check_compatible(g)?;
        let mut subst = Substitution::new(g);
        let components = self.components.iter().map(|f| subst.apply(f)).collect();
        Ok(FormalMap { components })
    }

    /// `f o g = sum_m f_m (m o g)` for a single series `f`.
    pub fn compose_series(f: &Series, g: &FormalMap) -> Result<Series> {
        f.check_compatible(&g.components[0])?;
        Ok(Substitution::new(g).apply(f))
    }

    /// `L(g)_{ij}` = coefficient of `x_j` in `g_i`.
    pub fn linear_part(&self) -> LinearPart {
        let d = self.dim();
        let rows = self.components.iter().map(|c| (0..d).map(|j| c.coeff(&Monomial::var(d, j))).collect()).collect();
        LinearPart::new(self.ring(), rows).expect("square by construction")
    }

    pub fn is_tangent_identity(&self) -> bool {
        self.linear_part().is_identity()
    }

    /// `L_k(g)`: the degree-`k` part of each component, for `1 <= k <= cap`.
    pub fn homogeneous_term(&self, k: u32) -> Result<FormalMap> {
        if k == 0 || k > self.cap() {
            return Err(Error::InvalidArgument(format!("homogeneous degree {k} outside 1..={}", self.cap())));
        }
        Ok(FormalMap { components: self.components.iter().map(|c| c.homogeneous_part(k)).collect() })
    }

    /// Compositional inverse, defined iff the linear part is invertible.
    ///
    /// `g = L o T` with `T = L^-1 o g` tangent to the identity, and
    /// `g^-1 = T^-1 o L^-1`.
    pub fn invert(&self) -> Result<FormalMap> {
        let lin_inv = self.linear_part().inverse()?;
        let lin_inv = FormalMap::linear(&lin_inv, self.cap());
        let tangent = lin_inv.compose(self)?;
        invert_tangent(&tangent).compose(&lin_inv)
    }

    /// `g^k` for any integer `k`; negative `k` needs an invertible map.
    pub fn iterate(&self, k: i64) -> Result<FormalMap> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        Ok(base.power(k.unsigned_abs()))
    }

    /// `g^k` for a nonnegative big integer.
    pub fn iterate_big(&self, k: &BigUint) -> FormalMap {
        let mut acc = FormalMap::identity(self.ring(), self.dim(), self.cap());
        if k.is_zero() {
            return acc;
        }
        let mut base = self.clone();
        for bit in 0..k.bits() {
            if k.bit(bit) {
                acc = acc.compose_unchecked(&base);
            }
            if bit + 1 < k.bits() {
                base = base.compose_unchecked(&base);
            }
        }
        acc
    }

    fn power(&self, n: u64) -> FormalMap {
        if n <= 3 {
            let mut acc = FormalMap::identity(self.ring(), self.dim(), self.cap());
            for _ in 0..n {
                acc = self.compose_unchecked(&acc);
            }
            return acc;
        }
        self.iterate_big(&BigUint::from(n))
    }

    fn compose_unchecked(&self, g: &FormalMap) -> FormalMap {
        self.compose(g).expect("shapes agree")
    }

    /// Lower degree of `g - 1`; `None` means infinity (`g` is the identity up to cap).
    pub fn weierstrass_degree(&self) -> Result<Option<u32>> {
        if !self.is_tangent_identity() {
            return Err(Error::NotTangent);
        }
        let diff = self.sub(&FormalMap::identity(self.ring(), self.dim(), self.cap()))?;
        Ok(diff.components.iter().filter_map(|c| c.lower_degree()).min())
    }

    /// Least `n <= bound` with `g^n = 1` at this cap.
    ///
    /// Truncation cannot certify infinite order; `None` only says that no
    /// such `n` exists up to `bound` at the current cap.
    pub fn order_upto(&self, bound: u32) -> Option<u32> {
        let id = FormalMap::identity(self.ring(), self.dim(), self.cap());
        let mut p = self.clone();
        for n in 1..=bound {
            if p == id {
                return Some(n);
            }
            p = self.compose_unchecked(&p);
        }
        None
    }

    pub fn commutes_with(&self, other: &FormalMap) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }

    pub fn truncate(&self, cap: u32) -> Result<FormalMap> {
        let components = self.components.iter().map(|c| c.truncate(cap)).collect::<Result<_>>()?;
        Ok(FormalMap { components })
    }

    pub fn to_fraction_field(&self) -> Result<FormalMap> {
        let components = self.components.iter().map(|c| c.to_fraction_field()).collect::<Result<_>>()?;
        Ok(FormalMap { components })
    }

    /// Coefficientwise image in another ring.
    pub fn map_coeffs(&self, ring: Ring, f: impl Fn(&Elem) -> Result<Elem> + Copy) -> Result<FormalMap> {
        let components = self.components.iter().map(|c| c.map_coeffs(ring, f)).collect::<Result<_>>()?;
        FormalMap::new(components)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.components.iter().map(|c| c.to_json()).collect())
    }
}

impl fmt::Display for FormalMap {
    /// One `i = <series>` line per component.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} = {}", i + 1, c)?;
        }
        Ok(())
    }
}

/// Inverse of a map tangent to the identity.
///
/// Writing `g = 1 + h`, the inverse `k` solves `k = 1 - h o k`. Each pass of
/// this fixed-point iteration fixes at least one more degree because `h`
/// has no linear part, so `cap` passes suffice.
fn invert_tangent(g: &FormalMap) -> FormalMap {
    let id = FormalMap::identity(g.ring(), g.dim(), g.cap());
    let h = g.sub(&id).expect("same shape");
    let mut k = id.clone();
    for _ in 0..g.cap() {
        let next = id.sub(&h.compose_unchecked(&k)).expect("same shape");
        if next == k {
            break;
        }
        k = next;
    }
    k
}

/// Evaluates `m o g` for monomials `m`, memoising products of components.
struct Substitution<'a> {
    g: &'a FormalMap,
    memo: HashMap<Monomial, Series>,
}

impl<'a> Substitution<'a> {
    fn new(g: &'a FormalMap) -> Self {
        Substitution { g, memo: HashMap::new() }
    }

    fn ensure(&mut self, m: &Monomial) {
        if self.memo.contains_key(m) {
            return;
        }
        let value = match m.exponents().iter().position(|&e| e > 0) {
            None => Series::one(self.g.ring(), self.g.dim(), self.g.cap()),
            Some(i) => {
                let rest = m.div(&Monomial::var(m.dim(), i)).expect("x_i divides m");
                self.ensure(&rest);
                self.memo[&rest].mul_unchecked(&self.g.components[i])
            }
        };
        self.memo.insert(m.clone(), value);
    }

    fn apply(&mut self, f: &Series) -> Series {
        let mut acc: BTreeMap<Monomial, Elem> = BTreeMap::new();
        for (m, c) in f.terms() {
            self.ensure(m);
            for (p, a) in self.memo[m].terms() {
                let term = c * a;
                match acc.entry(p.clone()) {
                    Entry::Occupied(mut e) => {
                        let sum = e.get() + &term;
                        *e.get_mut() = sum;
                    }
                    Entry::Vacant(e) => {
                        e.insert(term);
                    }
                }
            }
        }
        Series::from_raw(f.ring(), f.dim(), f.cap(), acc)
    }
}
