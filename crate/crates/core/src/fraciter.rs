//! Iterates of rational order in characteristic zero.
//!
//! For `g` tangent to the identity and a monomial `m` of degree `s`, the
//! coefficient `(g^k)_m` is a polynomial `P_m(k)` of degree `< s` in `k`.
//! `P_m` is interpolated from the `s` values at `k = 0, ..., s - 1` and then
//! evaluated at any rational `a`, giving `g^a = sum_m P_m(a) m`. These
//! iterates satisfy `g^a o g^b = g^(a+b)`.
//!
//! Fractional iterates are computed over `Q` even when the input map is over
//! `Z`; [`FractionalIterate::non_integral`] lists the coefficients that fall
//! outside `Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cadic;
use crate::error::{Error, Result};
use crate::maps::FormalMap;
use crate::monomial::Monomial;
use crate::ring::{Elem, Ring};
use crate::series::Series;

/// A polynomial over `Q` in Newton form on the nodes `0, 1, 2, ...`:
/// `p(t) = sum_j d_j C(t, j)` with `d_j` the `j`-th forward difference at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPoly {
    diffs: Vec<BigRational>,
}

impl NewtonPoly {
    /// The unique polynomial of degree `< values.len()` through
    /// `(k, values[k])`.
    pub fn interpolate(values: &[BigRational]) -> NewtonPoly {
        let mut row = values.to_vec();
        let mut diffs = Vec::with_capacity(values.len());
        while let Some(first) = row.first() {
            diffs.push(first.clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        while diffs.last().is_some_and(Zero::is_zero) {
            diffs.pop();
        }
        NewtonPoly { diffs }
    }

    pub fn forward_differences(&self) -> &[BigRational] {
        &self.diffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.diffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut binom = BigRational::one();
        for (j, d) in self.diffs.iter().enumerate() {
            if j > 0 {
                // C(t, j) = C(t, j-1) (t - j + 1) / j
                binom = binom * (t - BigRational::from_integer(BigInt::from(j - 1)))
                    / BigRational::from_integer(BigInt::from(j));
            }
            acc += d * &binom;
        }
        acc
    }

    /// Coefficients of `1, t, t^2, ...`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let n = self.diffs.len();
        let mut out = vec![BigRational::zero(); n];
        // falling factorial t (t-1) ... (t-j+1) / j!, as a dense polynomial
        let mut basis = vec![BigRational::one()];
        for (j, d) in self.diffs.iter().enumerate() {
            if j > 0 {
                let shift = BigRational::from_integer(BigInt::from(j - 1));
                let scale = BigRational::from_integer(BigInt::from(j));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (i, b) in basis.iter().enumerate() {
                    next[i + 1] += b / &scale;
                    next[i] -= b * &shift / &scale;
                }
                basis = next;
            }
            for (i, b) in basis.iter().enumerate() {
                out[i] += d * b;
            }
        }
        out
    }
}

impl fmt::Display for NewtonPoly {
    /// Dense form in `t`, highest degree first, e.g. `t^2 - t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coefficients();
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let lit = Elem::Rat(mag.clone()).to_string();
            match i {
                0 => write!(f, "{lit}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{lit}*")?;
                    }
                    write!(f, "t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `P_m(t)`: one polynomial per component, with `P_m(k) = (g^k)_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPoly {
    monomial: Monomial,
    components: Vec<NewtonPoly>,
}

impl CoeffPoly {
    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn components(&self) -> &[NewtonPoly] {
        &self.components
    }

    pub fn eval(&self, t: &BigRational) -> Vec<BigRational> {
        self.components.iter().map(|p| p.eval(t)).collect()
    }

    /// Largest component degree; `None` if every component vanishes.
    pub fn degree(&self) -> Option<usize> {
        self.components.iter().filter_map(NewtonPoly::degree).max()
    }
}

/// All `P_m` for `1 <= deg m <= cap`, sharing one table of integer iterates.
#[derive(Clone, Debug)]
pub struct CoeffPolyTable {
    dim: usize,
    cap: u32,
    polys: BTreeMap<Monomial, CoeffPoly>,
}

impl CoeffPolyTable {
    pub fn new(g: &FormalMap) -> Result<CoeffPolyTable> {
        let gq = check_char0_tangent(g)?;
        let iterates = integer_iterates(&gq, gq.cap().saturating_sub(1) as usize);
        let polys = Monomial::up_to_degree(g.dim(), 1, g.cap())
            .into_iter()
            .map(|m| {
                let p = interpolate_at(&iterates, &m);
                (m, p)
            })
            .collect();
        Ok(CoeffPolyTable { dim: g.dim(), cap: g.cap(), polys })
    }

    pub fn get(&self, m: &Monomial) -> Option<&CoeffPoly> {
        self.polys.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CoeffPoly> {
        self.polys.values()
    }

    /// `g^a = sum_m P_m(a) m`, over `Q`.
    pub fn iterate(&self, alpha: &BigRational) -> FractionalIterate {
        let mut comps: Vec<BTreeMap<Monomial, Elem>> = vec![BTreeMap::new(); self.dim];
        for p in self.polys.values() {
            for (i, v) in p.eval(alpha).into_iter().enumerate() {
                if !v.is_zero() {
                    comps[i].insert(p.monomial.clone(), Elem::Rat(v));
                }
            }
        }
        let components = comps.into_iter().map(|t| Series::from_raw(Ring::Q, self.dim, self.cap, t)).collect();
        let map = FormalMap::new(components).expect("no constant terms");
        let non_integral = non_integral_terms(&map);
        FractionalIterate { map, non_integral }
    }
}

/// Result of a fractional iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIterate {
    /// The iterate, over `Q`.
    pub map: FormalMap,
    /// `(component, monomial, coefficient)` of every
    /// coefficient outside `Z`, in graded order.
    pub non_integral: Vec<(usize, Monomial, Elem)>,
}

impl FractionalIterate {
    pub fn is_integral(&self) -> bool {
        self.non_integral.is_empty()
    }
}

fn non_integral_terms(map: &FormalMap) -> Vec<(usize, Monomial, Elem)> {
    map.components()
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.terms().filter(|(_, c)| !c.is_integral().unwrap_or(true)).map(move |(m, c)| (i + 1, m.clone(), c.clone()))
        })
        .collect()
}

fn check_char0_tangent(g: &FormalMap) -> Result<FormalMap> {
    if g.ring().characteristic() != 0 {
        return Err(Error::NeedsCharZero { op: "fractional iteration", ring: g.ring() });
    }
    if !g.is_tangent_identity() {
        return Err(Error::NotTangent);
    }
    g.to_fraction_field()
}

/// `g^0, ..., g^last`.
pub(crate) fn integer_iterates(g: &FormalMap, last: usize) -> Vec<FormalMap> {
    let mut out = vec![FormalMap::identity(g.ring(), g.dim(), g.cap())];
    for _ in 0..last {
        let next = g.compose(out.last().unwrap()).expect("same shape");
        out.push(next);
    }
    out
}

fn interpolate_at(iterates: &[FormalMap], m: &Monomial) -> CoeffPoly {
    let s = m.degree() as usize;
    let components = (0..iterates[0].dim())
        .map(|i| {
            let values: Vec<BigRational> =
                iterates[..s].iter().map(|it| it.component(i).coeff(m).to_rational().expect("over Q")).collect();
            NewtonPoly::interpolate(&values)
        })
        .collect();
    CoeffPoly { monomial: m.clone(), components }
}

/// `P_m` for one monomial, interpolated on `k = 0, ..., deg m - 1`.
pub fn coeff_poly(g: &FormalMap, m: &Monomial) -> Result<CoeffPoly> {
    let gq = check_char0_tangent(g)?;
    if m.dim() != g.dim() {
        return Err(Error::DimMismatch(g.dim(), m.dim()));
    }
    if m.degree() > g.cap() {
        return Err(Error::InvalidArgument(format!("monomial {m} lies above cap {}", g.cap())));
    }
    let iterates = integer_iterates(&gq, (m.degree() as usize).saturating_sub(1));
    Ok(interpolate_at(&iterates, m))
}

/// `g^a` for rational `a`.
pub fn frac_iterate(g: &FormalMap, alpha: &BigRational) -> Result<FractionalIterate> {
    Ok(CoeffPolyTable::new(g)?.iterate(alpha))
}

/// `g^(1/n)`, checked by composing it `n` times.
pub fn nth_root(g: &FormalMap, n: u64) -> Result<FractionalIterate> {
    if n == 0 {
        return Err(Error::InvalidArgument("root of order 0".into()));
    }
    let alpha = BigRational::new(BigInt::one(), BigInt::from(n));
    let root = frac_iterate(g, &alpha)?;
    let back = root.map.iterate_big(&num_bigint::BigUint::from(n));
    if back != g.to_fraction_field()? {
        return Err(Error::VerificationFailed(format!("{n}-th root does not compose back to the map")));
    }
    Ok(root)
}

/// Checks `g^a o g^b = g^(a+b)` up to the cap.
pub fn group_law_check(g: &FormalMap, a: &BigRational, b: &BigRational) -> Result<bool> {
    let table = CoeffPolyTable::new(g)?;
    let lhs = table.iterate(a).map.compose(&table.iterate(b).map)?;
    Ok(lhs == table.iterate(&(a + b)).map)
}

/// For commuting `g`, `h` tangent to the identity, checks
/// `g^a o h^b = h^b o g^a` up to the cap.
pub fn commuting_pair_check(g: &FormalMap, h: &FormalMap, a: &BigRational, b: &BigRational) -> Result<bool> {
    if !g.commutes_with(h)? {
        return Err(Error::NotCommuting);
    }
    let ga = frac_iterate(g, a)?.map;
    let hb = frac_iterate(h, b)?.map;
    Ok(ga.compose(&hb)? == hb.compose(&ga)?)
}

/// `h = u o t^-1` with `u` tangent to the identity, `t` of finite order
/// `s`, both commuting with `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `(h^s)^(1/s)`, tangent to the identity.
    pub tangent: FormalMap,
    /// `h^-1 o u`, of order `s`.
    pub torsion: FormalMap,
    /// Order of the linear part of `h`.
    pub order: u32,
}

/// Splits a map whose linear part has finite order `s` into a torsion
/// element and a map tangent to the identity, inside the centraliser of `h`.
///
/// Characteristic zero takes `u = (h^s)^(1/s)` by fractional iteration and
/// works over `Q`; characteristic `c` (not dividing `s`) takes the `c`-adic
/// root.
pub fn factor_finite_linear_part(h: &FormalMap, order_bound: u32) -> Result<Factorization> {
    let lin = h.linear_part();
    if !lin.is_invertible() {
        return Err(Error::NotInvertible(h.ring()));
    }
    let s = lin.order_upto(order_bound).ok_or(Error::NoFiniteOrder(order_bound))?;
    let c = h.ring().characteristic();
    if c != 0 && u64::from(s) % c == 0 {
        return Err(Error::CharDividesOrder { c, s });
    }
    let g = h.iterate(i64::from(s))?;
    let (h, u) = if c == 0 {
        (h.to_fraction_field()?, nth_root(&g, u64::from(s))?.map)
    } else {
        (h.clone(), cadic::cadic_root(&g, i64::from(s))?)
    };
    if !u.commutes_with(&h)? {
        return Err(Error::NotCommuting);
    }
    let torsion = h.invert()?.compose(&u)?;
    if torsion.order_upto(s) != Some(s) {
        return Err(Error::VerificationFailed(format!("torsion factor does not have order {s}")));
    }
    Ok(Factorization { tangent: u, torsion, order: s })
}
